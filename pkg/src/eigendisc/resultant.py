"""Resultants of n+1 homogeneous forms in n+1 variables (n <= 3).

The single engine is the classical Macaulay construction: at the critical
degree nu = sum(d_i - 1) + 1, every degree-nu monomial is divisible by
x_i^{d_i} for at least one i; assigning each monomial to the least such i
yields a square matrix whose rows are the expansions of
(monomial / x_i^{d_i}) * g_i.  The resultant is the ratio

    det(numerator) / det(minor on non-reduced rows and columns)

where a monomial is "reduced" when exactly one x_i^{d_i} divides it.  With
rows and columns indexed by the same monomial list, specializing
g_i -> x_i^{d_i} turns both matrices into identities, so the ratio carries
the normalization Res(x0^{d0}, ..., xn^{dn}) = 1 with no sign ambiguity.

Degrees are always declared by the caller, never inferred: specializing a
variable to zero legitimately kills leading terms while the formal degree
(and hence the matrix layout) must stay put.

For n = 1 the denominator minor is empty and the construction is exactly
the Sylvester matrix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod

from .linalg import ExactMatrix, det_by_interpolation, det_fraction_free, det_gf, det_modular_crt
from .mpoly import NVARS, PARAMS, VAR_NAMES, MPoly
from .rings import GF, QQ, ZZ


class NonGeneric(Exception):
    """The Macaulay denominator vanished at this specialization; the caller
    should retry through a coordinate change (see resultant_robust)."""


class DegenerateInput(Exception):
    """No coordinate change within budget made the input generic."""


def monomials_of_degree(k: int, degree: int):
    """All exponent k-tuples with the given total degree, grlex descending."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), degree, k)
    out.sort(key=lambda e: e[::-1], reverse=True)
    return out


def _expand_exp(restricted, variables):
    full = [0] * NVARS
    for pos, var in enumerate(variables):
        full[var] = restricted[pos]
    return tuple(full)


def _monomial_str(restricted, variables):
    parts = [f"{VAR_NAMES[v]}^{e}" if e > 1 else VAR_NAMES[v]
             for v, e in zip(variables, restricted) if e]
    return "*".join(parts) if parts else "1"


@dataclass
class MacaulaySystem:
    """The matrix pair realizing a resultant as a ratio of determinants."""

    forms: list
    degrees: list
    variables: tuple
    ring: object
    nu: int
    monomials: list
    assign: list
    numerator: ExactMatrix
    nonreduced: list
    scalar: bool  # True when entries are ring scalars, not parameter polynomials

    def denominator(self) -> ExactMatrix:
        return self.numerator.submatrix(self.nonreduced, self.nonreduced)


def build_macaulay(forms, degrees, variables, ring=ZZ) -> MacaulaySystem:
    forms = list(forms)
    degrees = list(degrees)
    variables = tuple(variables)
    k = len(variables)
    if any(v not in (0, 1, 2, 3) for v in variables) or len(set(variables)) != k:
        raise ValueError("variables must be distinct projective indices (x0..x3)")
    if len(forms) != k or len(degrees) != k:
        raise ValueError("need as many forms and degrees as variables")
    if any(d < 1 for d in degrees):
        raise ValueError("declared degrees must be >= 1")
    for f, d in zip(forms, degrees):
        if f.ring != ring:
            raise ValueError("form ring does not match the requested ring")
        if not f.is_zero() and f.homogeneous_degree(variables) != d:
            raise ValueError(f"form {f} is not homogeneous of declared degree {d}")
    nu = sum(d - 1 for d in degrees) + 1
    mons = monomials_of_degree(k, nu)
    index = {m: i for i, m in enumerate(mons)}
    split = [f.coefficients_on(variables) for f in forms]
    scalar = all(not (f.support_indices() & set(PARAMS)) for f in forms)

    assign = []
    nonreduced = []
    rows = []
    row_labels = []
    zero_entry = ring.zero if scalar else MPoly.zero(ring)
    for pos, mon in enumerate(mons):
        divs = [i for i in range(k) if mon[i] >= degrees[i]]
        i = divs[0]
        assign.append(i)
        if len(divs) > 1:
            nonreduced.append(pos)
        mult = tuple(mon[j] - (degrees[i] if j == i else 0) for j in range(k))
        row = [zero_entry] * len(mons)
        for fexp, coeff in split[i].items():
            target = tuple(a + b for a, b in zip(fexp, mult))
            row[index[target]] = coeff.constant_value() if scalar else coeff
        rows.append(row)
        row_labels.append(f"{_monomial_str(mult, variables)}*g{i}")
    numerator = ExactMatrix(rows, row_labels, [_monomial_str(m, variables) for m in mons])
    return MacaulaySystem(forms, degrees, variables, ring, nu, mons, assign,
                          numerator, nonreduced, scalar)


def _ratio(num, den, ring):
    """Exact division of the two Macaulay determinants.

    A vanishing denominator is the non-generic signal; a non-divisible
    quotient over ZZ cannot happen mathematically and is a tripwire."""
    if isinstance(num, MPoly) or isinstance(den, MPoly):
        if den.is_zero():
            raise NonGeneric("Macaulay denominator is identically zero")
        return num.exact_div(den)
    if ring.is_zero(den):
        raise NonGeneric("Macaulay denominator vanished at this specialization")
    return ring.exact_div(num, den)


def resultant_from_system(system: MacaulaySystem):
    ring = system.ring
    numer = system.numerator
    denom = system.denominator()
    if system.scalar:
        if isinstance(ring, GF):
            return _ratio(det_gf(numer, ring), det_gf(denom, ring), ring)
        if ring is ZZ:
            return _ratio(det_modular_crt(numer), det_modular_crt(denom), ring)
        if ring is QQ:
            raise ValueError("use resultant_macaulay for rational input")
    if ring is not ZZ:
        raise ValueError("parametric resultants need integer coefficients; "
                         "reduce the final polynomial instead")
    num_poly = det_by_interpolation(numer)
    den_poly = det_by_interpolation(denom)
    return _ratio(num_poly, den_poly, ring)


def resultant_macaulay(forms, degrees, variables, ring=None):
    """Resultant with the normalization Res(x0^d0, ..., xn^dn) = 1.

    Raises NonGeneric when the denominator determinant vanishes at this
    specialization; route through resultant_robust in that case.
    """
    forms = list(forms)
    if ring is None:
        ring = forms[0].ring
    if ring is QQ:
        return _resultant_rational(forms, degrees, variables)
    return resultant_from_system(build_macaulay(forms, degrees, variables, ring))


def _resultant_rational(forms, degrees, variables):
    """Clear denominators and correct by the homogeneity weights."""
    degrees = list(degrees)
    big_d = prod(degrees)
    cleared = []
    scale = Fraction(1)
    for f, d in zip(forms, degrees):
        den = lcm(*(c.denominator for c in f.terms.values())) if f.terms else 1
        cleared.append(f.map_coefficients(lambda c: int(c * den), ZZ))
        scale *= Fraction(den) ** (big_d // d)
    res = resultant_macaulay(cleared, degrees, variables, ZZ)
    return Fraction(res) / scale


def resultant_binary(f, g, d0: int, d1: int, variables=(0, 1), ring=None):
    """Sylvester-determinant resultant of two binary forms of declared degrees.

    Degenerate corner: d0 + d1 = 0 would mean two constants; we only accept
    declared degrees >= 1, except the conventional empty case.
    """
    if d0 + d1 == 0:
        return (ring or f.ring).one
    return resultant_macaulay([f, g], [d0, d1], variables, ring)


def random_unimodular(k: int, rng: random.Random, shears: int = 6):
    """Random integer matrix with determinant +-1 (products of shears,
    swaps and negations), entries kept small."""
    m = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    for _ in range(shears):
        i, j = rng.sample(range(k), 2)
        c = rng.choice((-2, -1, 1, 2))
        for col in range(k):
            m[i][col] += c * m[j][col]
    if rng.random() < 0.5 and k > 1:
        i, j = rng.sample(range(k), 2)
        m[i], m[j] = m[j], m[i]
    if rng.random() < 0.5:
        i = rng.randrange(k)
        m[i] = [-e for e in m[i]]
    return m


def apply_coordinate_change(forms, matrix, variables):
    return [f.subst_linear(matrix, variables) for f in forms]


def resultant_robust(forms, degrees, variables, ring=None, rng=None, tries: int = 10):
    """Macaulay resultant with a degeneracy escape hatch.

    When the denominator vanishes, applies random exact unimodular changes
    of coordinates phi and divides out det(phi)^(d0*...*dn) (which is just
    a sign here).  Never perturbs coefficients numerically.
    """
    forms = list(forms)
    if ring is None:
        ring = forms[0].ring
    try:
        return resultant_macaulay(forms, degrees, variables, ring)
    except NonGeneric:
        pass
    rng = rng or random.Random(0)
    big_d = prod(degrees)
    for _ in range(tries):
        phi = random_unimodular(len(variables), rng)
        det_phi = det_fraction_free(phi)
        try:
            res = resultant_macaulay(apply_coordinate_change(forms, phi, variables),
                                     degrees, variables, ring)
        except NonGeneric:
            continue
        if det_phi == -1 and big_d % 2 == 1:
            res = res.scale(-1) if isinstance(res, MPoly) else ring.neg(res)
        return res
    raise DegenerateInput("no coordinate change made the input generic; forms look identically degenerate")


def resultant_division(numerator, known_factor, ring=ZZ):
    """Exact quotient of two resultant values (the residual-factor route).

    known_factor = 0 signals a non-generic specialization (caller should
    re-randomize coordinates); a non-divisible quotient is a tripwire.
    """
    if isinstance(numerator, MPoly) or isinstance(known_factor, MPoly):
        if known_factor.is_zero():
            raise NonGeneric("known factor is zero")
        return numerator.exact_div(known_factor)
    if ring.is_zero(known_factor):
        raise NonGeneric("known factor vanished at this specialization")
    return ring.exact_div(numerator, known_factor)
