from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, strategies as st

from eigendisc.primefield import (PrimeField, crt_combine, format_rational,
                                  is_prime, mod_inverse, parse_int, parse_rational,
                                  primes_below, rational_reconstruct, word_primes)


def test_is_prime_small():
    primes = [2, 3, 5, 7, 11, 101, 2147483647]
    composites = [1, 0, 4, 9, 561, 2147483647 * 3]
    assert all(is_prime(p) for p in primes)
    assert not any(is_prime(c) for c in composites)


def test_prime_field_rejects_bad_moduli():
    for bad in (0, 1, 2, 4, 9, 15, (1 << 62) + 1, 2147483647 * 2147483629):
        with pytest.raises(ValueError):
            PrimeField(bad)


def test_prime_field_ops():
    f = PrimeField(7)
    assert f.add(5, 6) == 4
    assert f.sub(2, 5) == 4
    assert f.mul(3, 5) == 1
    assert f.inv(2) == 4
    assert f.div(1, 3) == 5
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


def test_mod_inverse_examples():
    assert mod_inverse(PrimeField(13).element(1)).residue == 1
    assert mod_inverse(PrimeField(7).element(2)).residue == 4
    # brute force oracle over residues
    brute = next(x for x in range(1, 11) if 5 * x % 11 == 1)
    assert mod_inverse(PrimeField(11).element(5)).residue == brute == 9


def test_value_arithmetic():
    f = PrimeField(101)
    a, b = f.element(40), f.element(90)
    assert (a + b).residue == 29
    assert (a - b).residue == 51
    assert (a * b).residue == 40 * 90 % 101
    assert (a / b) * b == a
    assert (-a).residue == 61
    assert int(a) == 40
    with pytest.raises(ValueError):
        a + PrimeField(103).element(1)


@given(st.integers(min_value=1, max_value=10**6))
def test_mod_inverse_involution(x):
    f = PrimeField(1000003)
    a = f.element(x % 1000003 or 1)
    assert mod_inverse(mod_inverse(a)) == a


def test_crt_examples():
    assert crt_combine([1, 1], [3, 5]) == 1
    assert crt_combine([2, 3], [3, 5]) == -7
    assert crt_combine([0], [101]) == 0


def test_crt_exhaustive_oracle():
    # -7 is the unique symmetric-range solution: check by brute force
    sols = [x for x in range(-7, 8) if x % 3 == 2 and x % 5 == 3]
    assert sols == [-7]


def test_crt_non_coprime():
    with pytest.raises(ValueError):
        crt_combine([1, 2], [6, 4])


@given(st.integers(min_value=-1000, max_value=1000))
def test_crt_roundtrip(x):
    moduli = [7, 11, 13, 17]
    m = prod(moduli)
    assert abs(x) <= m // 2
    assert crt_combine([x % p for p in moduli], moduli) == x


def test_crt_symmetric_boundary():
    # representative magnitude never exceeds M/2
    moduli = [3, 5, 7]
    for r in range(105):
        v = crt_combine([r % 3, r % 5, r % 7], moduli)
        assert -52 <= v <= 52 and v % 105 == r % 105


def test_rational_reconstruct_examples():
    assert rational_reconstruct(1, 10**6) == Fraction(1)
    assert rational_reconstruct(51, 101) == Fraction(1, 2)
    assert rational_reconstruct(50, 101) == Fraction(-1, 2)


def test_rational_reconstruct_failure():
    # brute-force oracle: no n/d with |n|, d <= sqrt(101/2) represents 10
    bound = 7
    admissible = {n * pow(d, -1, 101) % 101
                  for d in range(1, bound + 1) for n in range(-bound, bound + 1)
                  if d and Fraction(n, d).denominator == d}
    assert 10 not in admissible
    assert rational_reconstruct(10, 101) is None
    with pytest.raises(ValueError):
        rational_reconstruct(3, 1)


def test_rational_reconstruct_roundtrip(rng):
    moduli = word_primes(3)
    m = prod(moduli)
    for _ in range(50):
        num = rng.randint(-10**6, 10**6)
        den = rng.randint(1, 10**6)
        q = Fraction(num, den)
        r = q.numerator * pow(q.denominator, -1, m) % m
        assert rational_reconstruct(r, m) == q


def test_word_primes_pool():
    ps = word_primes(8)
    assert len(set(ps)) == 8
    assert all(is_prime(p) and p < 2**31 for p in ps)
    assert ps == sorted(ps, reverse=True)
    assert word_primes(3) == ps[:3]  # pool is a stable prefix


def test_primes_below():
    ps = primes_below(1 << 60, 3)
    assert all(is_prime(p) and p.bit_length() == 60 for p in ps)


def test_parse_print_scalars():
    assert parse_int("-123") == -123
    assert parse_rational("22/7") == Fraction(22, 7)
    assert format_rational(Fraction(22, 7)) == "22/7"
    assert format_rational(Fraction(-4, 2)) == "-2"


def test_field_laws_randomized(rng):
    f = PrimeField(word_primes(1)[0])
    for _ in range(100):
        a, b, c = (rng.randrange(f.p) for _ in range(3))
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
