"""Exact coefficient arithmetic: prime fields, CRT, rational reconstruction.

Integers are plain Python ints (arbitrary precision, canonical by
construction) and rationals are ``fractions.Fraction`` (reduced, positive
denominator), so this module only has to supply what the stdlib does not:
validated prime fields below 2**62, a deterministic pool of word-sized
primes for multi-modular work, Chinese remaindering with symmetric
(balanced) representatives, and rational reconstruction.

Everything here is pure and immutable; values can be shared freely between
worker processes or threads.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

MAX_MODULUS_BITS = 62

# Largest primes below 2**31 keep products of residues inside int64, which
# is what both the numba kernels and the numpy fallback rely on.
POOL_START = (1 << 31) - 1

_POOL_ENV = "EIGENDISC_PRIME_POOL"
_DEFAULT_POOL_CAP = 4096

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """Arithmetic mod a validated odd prime p < 2**62.

    Elements are plain ints in [0, p); the class carries the modulus and
    the operations.  Compositeness or an even/oversized modulus is rejected
    at construction time rather than surfacing later as garbage residues.
    """

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 3:
            raise ValueError(f"modulus must be an odd prime >= 3, got {p!r}")
        if p.bit_length() > MAX_MODULUS_BITS:
            raise ValueError(f"modulus must be below 2**{MAX_MODULUS_BITS}")
        if p % 2 == 0 or not is_prime(p):
            raise ValueError(f"modulus {p} is not an odd prime")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def reduce(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        s = a + b
        return s - self.p if s >= self.p else s

    def sub(self, a: int, b: int) -> int:
        s = a - b
        return s + self.p if s < 0 else s

    def neg(self, a: int) -> int:
        return self.p - a if a else 0

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.p

    def element(self, a: int) -> "PrimeFieldValue":
        return PrimeFieldValue(a % self.p, self)


@dataclass(frozen=True)
class PrimeFieldValue:
    """A residue bundled with its field, for ergonomic scalar work.

    The polynomial/matrix layers keep raw ints for speed; this wrapper is
    the public scalar type with operator support.
    """

    residue: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.residue < self.field.p:
            object.__setattr__(self, "residue", self.residue % self.field.p)

    def _coerce(self, other) -> int:
        if isinstance(other, PrimeFieldValue):
            if other.field != self.field:
                raise ValueError("mixed prime fields")
            return other.residue
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        r = self._coerce(other)
        return PrimeFieldValue(self.field.add(self.residue, r), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        r = self._coerce(other)
        return PrimeFieldValue(self.field.sub(self.residue, r), self.field)

    def __neg__(self):
        return PrimeFieldValue(self.field.neg(self.residue), self.field)

    def __mul__(self, other):
        r = self._coerce(other)
        return PrimeFieldValue(self.field.mul(self.residue, r), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        r = self._coerce(other)
        return PrimeFieldValue(self.field.div(self.residue, r), self.field)

    def inverse(self) -> "PrimeFieldValue":
        return PrimeFieldValue(self.field.inv(self.residue), self.field)

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} mod {self.field.p}"


def mod_inverse(a: PrimeFieldValue) -> PrimeFieldValue:
    """Inverse of a nonzero prime-field value."""
    return a.inverse()


def crt_combine(residues, moduli) -> int:
    """Chinese remainder lift to the symmetric range (-M/2, M/2].

    Raises ValueError on non-coprime moduli.  Balanced output is the right
    default here because the quantities being reconstructed (determinants,
    discriminants) are signed.
    """
    residues = list(residues)
    moduli = list(moduli)
    if len(residues) != len(moduli) or not moduli:
        raise ValueError("residues and moduli must be equal-length, nonempty")
    x = residues[0] % moduli[0]
    m = moduli[0]
    for r, p in zip(residues[1:], moduli[1:]):
        if gcd(m, p) != 1:
            raise ValueError(f"moduli are not pairwise coprime (gcd with {p} > 1)")
        # x + m*k == r (mod p)
        k = (r - x) * pow(m, -1, p) % p
        x += m * k
        m *= p
    x %= m
    if 2 * x > m:
        x -= m
    return x


def rational_reconstruct(r: int, m: int) -> Fraction | None:
    """Recover n/d with |n|, d <= sqrt(m/2) from r = n/d mod m.

    Returns None when no admissible pair exists; the caller reacts by
    adding more primes.  Standard half-extended Euclid.
    """
    if m <= 1:
        raise ValueError("modulus must exceed 1")
    r %= m
    bound = isqrt(m // 2)
    v0, v1 = m, r
    t0, t1 = 0, 1
    while v1 > bound:
        q = v0 // v1
        v0, v1 = v1, v0 - q * v1
        t0, t1 = t1, t0 - q * t1
    n, d = v1, t1
    if d < 0:
        n, d = -n, -d
    if d == 0 or d > bound or gcd(n, d) != 1 or gcd(d, m) != 1:
        return None
    if (n - d * r) % m != 0:
        return None
    return Fraction(n, d)


class _PrimePool:
    """Deterministic pool of 31-bit primes, generated descending on demand."""

    def __init__(self):
        self._primes: list[int] = []
        self._next_candidate = POOL_START
        cap = os.environ.get(_POOL_ENV, "")
        self.cap = int(cap) if cap.strip() else _DEFAULT_POOL_CAP

    def get(self, count: int) -> list[int]:
        if count > self.cap:
            raise RuntimeError(
                f"computation needs {count} primes but the pool is capped at "
                f"{self.cap}; raise {_POOL_ENV} to allow more"
            )
        while len(self._primes) < count:
            c = self._next_candidate
            while not is_prime(c):
                c -= 2
            self._primes.append(c)
            self._next_candidate = c - 2
        return self._primes[:count]


_pool = _PrimePool()


def word_primes(count: int) -> list[int]:
    """The first `count` primes of the fixed descending 31-bit pool."""
    return _pool.get(count)


def primes_below(start: int, count: int) -> list[int]:
    """`count` primes descending from `start` (odd start assumed close)."""
    out = []
    c = start if start % 2 else start - 1
    while len(out) < count:
        if is_prime(c):
            out.append(c)
        c -= 2
    return out


def parse_int(s: str) -> int:
    """Decimal string -> int ('-123')."""
    return int(s.strip())


def parse_rational(s: str) -> Fraction:
    """Decimal string -> Fraction ('22/7', '-3')."""
    return Fraction(s.strip())


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
