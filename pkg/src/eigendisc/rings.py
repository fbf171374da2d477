"""Coefficient ring tags shared by polynomials and matrices.

A ring object knows how to do arithmetic on raw coefficient values:
Python ints for ZZ and GF(p) (GF residues are kept normalized in [0, p)),
``fractions.Fraction`` for QQ.  Keeping coefficients as plain values and
the operations on a shared tag avoids per-element wrapper objects in the
hot polynomial paths.
"""

from __future__ import annotations

from fractions import Fraction

from .primefield import PrimeField


class NotDivisible(Exception):
    """Exact division failed; in this pipeline that is a correctness tripwire."""


class IntegerRing:
    name = "ZZ"
    zero = 0
    one = 1

    def coerce(self, x):
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        raise TypeError(f"cannot coerce {x!r} into ZZ")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def exact_div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in ZZ")
        q, r = divmod(a, b)
        if r:
            raise NotDivisible(f"{a} is not divisible by {b} in ZZ")
        return q

    def divides(self, b, a) -> bool:
        return b != 0 and a % b == 0

    def fmt(self, a):
        return str(a)

    def __repr__(self):
        return "ZZ"


class RationalRing:
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def exact_div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return a / b

    def divides(self, b, a) -> bool:
        return b != 0

    def fmt(self, a):
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def __repr__(self):
        return "QQ"


class GF:
    """Prime field coefficients as normalized ints."""

    def __init__(self, p: int | PrimeField):
        self.field = p if isinstance(p, PrimeField) else PrimeField(p)
        self.p = self.field.p
        self.name = f"GF({self.p})"
        self.zero = 0
        self.one = 1

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def add(self, a, b):
        return self.field.add(a, b)

    def sub(self, a, b):
        return self.field.sub(a, b)

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return self.field.neg(a)

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def exact_div(self, a, b):
        if b == 0:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        return a * pow(b, -1, self.p) % self.p

    def divides(self, b, a) -> bool:
        return b != 0

    def fmt(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return self.name


ZZ = IntegerRing()
QQ = RationalRing()
