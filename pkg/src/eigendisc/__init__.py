"""Exact computation of resultants, complete-intersection discriminants and
tensor eigendiscriminants over ZZ, QQ and prime fields."""

from .mpoly import MPoly, parse_poly, poly
from .primefield import PrimeField, PrimeFieldValue, crt_combine, mod_inverse, rational_reconstruct
from .rings import GF, QQ, ZZ, NotDivisible

__all__ = [
    "MPoly",
    "parse_poly",
    "poly",
    "PrimeField",
    "PrimeFieldValue",
    "crt_combine",
    "mod_inverse",
    "rational_reconstruct",
    "GF",
    "QQ",
    "ZZ",
    "NotDivisible",
]

__version__ = "0.1.0"
