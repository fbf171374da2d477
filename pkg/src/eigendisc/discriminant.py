"""Discriminants of n homogeneous forms in n+1 variables.

The defining identity is

    Res(f_0, ..., f_{n-1}, J_i) = Disc(f_0, ..., f_{n-1}) * Res(f_0, ..., f_{n-1}, x_i)

for every witness index i, where J_i is the signed maximal minor of the
n x (n+1) Jacobian matrix obtained by deleting the column of d/dx_i.  The
minor carries the alternating sign (-1)^i, which is what makes the quotient
independent of the witness; with this convention the discriminant of the
binary quadratic a*x0^2 + b*x0*x1 + c*x1^2 comes out as 4ac - b^2 and the
product (polarization) formula

    Disc(g g', rest) = (-1)^(deg g * deg g' * prod rest) Disc(g, rest) Disc(g', rest) Res(g, g', rest)^2

holds on the nose.  (Flipping the global sign to get b^2 - 4ac would break
polarization, so the classical sign is not available here; callers that
need the classical binary discriminant can negate.)

When the total drop sum(d_i - 1) is zero (all forms linear) the complete
intersection is always smooth and the discriminant is the constant
(-1)^n, the unique convention consistent with the product formula.
"""

from __future__ import annotations

import random
from math import prod

from .linalg import det_fraction_free
from .mpoly import MPoly
from .resultant import (DegenerateInput, NonGeneric, apply_coordinate_change,
                        random_unimodular, resultant_division, resultant_macaulay)


def jacobian_matrix(forms, variables):
    """Rows = forms, columns = d/dx for x in `variables`."""
    return [[f.partial(v) for v in variables] for f in forms]


def _poly_det(rows):
    """Cofactor determinant for tiny MPoly matrices (n <= 3)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = None
    for j in range(n):
        minor = [[rows[r][c] for c in range(n) if c != j] for r in range(1, n)]
        term = rows[0][j] * _poly_det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def jacobian_minor(forms, variables, omit_position: int) -> MPoly:
    """Signed n-minor of the Jacobian with the omit_position column removed.

    Sign convention: (-1)^omit_position. homogeneity degree is
    sum(deg f - 1) over the forms.
    """
    jac = jacobian_matrix(forms, variables)
    minor = [[row[c] for c in range(len(variables)) if c != omit_position] for row in jac]
    det = _poly_det(minor)
    return -det if omit_position % 2 else det


def discriminant_ci(forms, degrees, variables, ring=None, witness: int | None = None):
    """Discriminant of a zero-dimensional complete intersection.

    Tries witness indices until Res(forms, x_i) is nonzero; the quotient is
    witness-independent.  Raises NonGeneric when every witness denominator
    vanishes (caller should randomize coordinates via discriminant_robust).
    """
    forms = list(forms)
    degrees = list(degrees)
    variables = tuple(variables)
    if len(forms) + 1 != len(variables):
        raise ValueError("need n forms in n+1 variables")
    if ring is None:
        ring = forms[0].ring
    sigma = sum(d - 1 for d in degrees)
    if sigma == 0:
        # n linear forms always cut a smooth point; the sign (-1)^n is the
        # unique constant consistent with the polarization formula.
        return ring.one if len(forms) % 2 == 0 else ring.neg(ring.one)
    witnesses = [witness] if witness is not None else list(range(len(variables)))
    last_error = None
    for w in witnesses:
        xw = MPoly.variable(variables[w], ring)
        try:
            den = resultant_macaulay(forms + [xw], degrees + [1], variables, ring)
        except NonGeneric as exc:
            last_error = exc
            continue
        if (den.is_zero() if isinstance(den, MPoly) else ring.is_zero(den)):
            continue
        jw = jacobian_minor(forms, variables, w)
        num = resultant_macaulay(forms + [jw], degrees + [sigma], variables, ring)
        return resultant_division(num, den, ring)
    if last_error is not None:
        raise NonGeneric("all computable witness denominators vanished") from last_error
    raise NonGeneric("Res(forms, x_i) vanished for every witness index i")


def discriminant_robust(forms, degrees, variables, ring=None, rng=None, tries: int = 10):
    """discriminant_ci behind random exact coordinate changes.

    Corrects by det(phi)^(d0*...*d_{n-1} * sigma); with unimodular phi the
    correction is a sign.
    """
    forms = list(forms)
    if ring is None:
        ring = forms[0].ring
    try:
        return discriminant_ci(forms, degrees, variables, ring)
    except NonGeneric:
        pass
    rng = rng or random.Random(0)
    sigma = sum(d - 1 for d in degrees)
    weight = prod(degrees) * sigma
    for _ in range(tries):
        phi = random_unimodular(len(variables), rng)
        det_phi = det_fraction_free(phi)
        try:
            disc = discriminant_ci(apply_coordinate_change(forms, phi, variables),
                                   degrees, variables, ring)
        except NonGeneric:
            continue
        if det_phi == -1 and weight % 2 == 1:
            disc = disc.scale(-1) if isinstance(disc, MPoly) else ring.neg(disc)
        return disc
    raise DegenerateInput("no coordinate change made the discriminant computable")
