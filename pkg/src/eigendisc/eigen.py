"""Eigenscheme minors and eigendiscriminants of rational self-maps.

A tensor of format n x ... x n (dimension d) induces a self-map of
P^{n-1} with components of degree d-1; its fixed-point scheme is cut out
by the 2-minors delta of the matrix stacking (psi_0..psi_{n-1}) over
(x_0..x_{n-1}).  The eigendiscriminant Delta_{n,d} is the irreducible
polynomial in the map's coefficients vanishing exactly when that scheme
is non-reduced or positive-dimensional; it has degree n(n-1)(d-1)^{n-1}.

Computation routes:

* n = 2: Delta = Disc(delta) for the single minor delta.
* n = 3: Disc(delta_i, delta_j) = Delta * Disc(psibar_k) * Res(deltabar_k, psibar_k)^2,
  where bars set x_k to zero; Delta is recovered by exact division.
* n = 4: Disc(delta_ki, delta_ij, delta_jl) factors as Delta times two
  complete-intersection discriminants, a squared binary resultant, and two
  squared residual factors R obtained by dividing ternary resultants by
  that shared binary resultant.

Each result carries a certificate: the divided-out cofactors, whose
product with Delta reproduces the computed discriminant exactly.  When no
index choice is generic the input is pushed through a random exact
unimodular change of coordinates and corrected by det(phi)^weight with
the known invariance weights (even, so unimodular changes cost nothing).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .discriminant import discriminant_robust
from .linalg import det_fraction_free, interp_univariate, qq_poly_to_zz
from .mpoly import PARAMS, PROJECTIVE, VAR_NAMES, MPoly
from .resultant import (DegenerateInput, NonGeneric, apply_coordinate_change,
                        random_unimodular, resultant_binary, resultant_division,
                        resultant_robust)
from .rings import GF, QQ, ZZ, NotDivisible


@dataclass(frozen=True)
class TensorData:
    """Dense n x ... x n tensor (d indices), exact integer entries."""

    n: int
    d: int
    entries: dict
    symmetric: bool = False

    def __post_init__(self):
        if self.n not in (2, 3, 4):
            raise ValueError("tensor format n must be 2, 3 or 4")
        if self.d < 2:
            raise ValueError("tensor dimension d must be >= 2")
        full = {}
        for idx, val in self.entries.items():
            idx = tuple(idx)
            if len(idx) != self.d or any(not 0 <= i < self.n for i in idx):
                raise ValueError(f"bad tensor index {idx}")
            full[idx] = val
        if self.symmetric:
            expanded = {}
            for idx, val in full.items():
                for perm in set(itertools.permutations(idx)):
                    if expanded.get(perm, val) != val:
                        raise ValueError("symmetric flag set but entries are not symmetric")
                    expanded[perm] = val
            full = expanded
        object.__setattr__(self, "entries", full)

    def entry(self, idx) -> int:
        return self.entries.get(tuple(idx), 0)


@dataclass(frozen=True)
class RationalMapData:
    """n homogeneous forms of degree d-1 in the first n projective variables."""

    n: int
    d: int
    forms: tuple

    def __post_init__(self):
        if self.n not in (2, 3, 4):
            raise ValueError("map format n must be 2, 3 or 4")
        if self.d < (2 if self.n == 2 else 3):
            raise ValueError(f"degree d={self.d} too small for n={self.n}")
        if len(self.forms) != self.n:
            raise ValueError("need n component forms")
        object.__setattr__(self, "forms", tuple(self.forms))
        ring = self.forms[0].ring
        for f in self.forms:
            if f.ring != ring:
                raise ValueError("component forms live in different rings")
            bad = f.support_indices() & set(PROJECTIVE[self.n:])
            if bad:
                raise ValueError(f"form uses projective variables {sorted(bad)} outside the map's arity")
            if not f.is_zero() and f.homogeneous_degree(self.variables) != self.d - 1:
                raise ValueError(f"component {f} is not homogeneous of degree d-1={self.d - 1}")
        if all(f.is_zero() for f in self.forms):
            raise ValueError("zero map")

    @property
    def variables(self) -> tuple:
        return PROJECTIVE[: self.n]

    @property
    def ring(self):
        return self.forms[0].ring

    def scale(self, c) -> "RationalMapData":
        return RationalMapData(self.n, self.d, tuple(f.scale(c) for f in self.forms))

    def compose(self, matrix) -> "RationalMapData":
        """Precompose every component with x -> matrix*x.

        Note this is not the eigenscheme-preserving change of coordinates
        (that is conjugate_map); plain precomposition carries no
        determinant law for the eigendiscriminant.
        """
        return RationalMapData(self.n, self.d,
                               tuple(apply_coordinate_change(self.forms, matrix, self.variables)))

    def to_gf(self, ring: GF) -> "RationalMapData":
        return RationalMapData(self.n, self.d, tuple(f.to_gf(ring) for f in self.forms))

    def param_indices(self) -> set:
        used = set()
        for f in self.forms:
            used |= f.support_indices()
        return used & set(PARAMS)


def tensor_to_map(tensor: TensorData) -> RationalMapData:
    """psi_i = sum over j2..jd of a[i, j2, ..., jd] * x_{j2}...x_{jd}."""
    n, d = tensor.n, tensor.d
    forms = []
    for i in range(n):
        terms: dict = {}
        for rest in itertools.product(range(n), repeat=d - 1):
            val = tensor.entry((i,) + rest)
            if not val:
                continue
            exp = [0] * 8
            for j in rest:
                exp[j] += 1
            exp = tuple(exp)
            terms[exp] = terms.get(exp, 0) + val
        forms.append(MPoly({e: c for e, c in terms.items() if c}, ZZ))
    return RationalMapData(n, d, tuple(forms))


def polar_map(phi: MPoly, n: int | None = None) -> RationalMapData:
    """The map whose components are the partial derivatives of phi."""
    used = phi.support_indices() & set(PROJECTIVE)
    if n is None:
        n = max(used) + 1 if used else 0
    if n not in (2, 3, 4):
        raise ValueError("polar map needs 2, 3 or 4 projective variables")
    variables = PROJECTIVE[:n]
    d = phi.homogeneous_degree(variables)
    if d is None:
        raise ValueError("polar map of a non-homogeneous polynomial")
    return RationalMapData(n, d, tuple(phi.partial(v) for v in variables))


@dataclass(frozen=True)
class EigenMinors:
    """The 2-minors cutting out the fixed-point scheme."""

    n: int
    minors: tuple  # n=2: (delta,); n=3: (delta0, delta1, delta2); n=4: six (i<j)

    def delta(self, a: int, b: int | None = None) -> MPoly:
        if self.n == 3 and b is None:
            return self.minors[a]
        if self.n == 2:
            return self.minors[0]
        if self.n == 4:
            if a == b:
                raise ValueError("delta(i, i) is zero")
            pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
            if a < b:
                return self.minors[pairs.index((a, b))]
            return -self.minors[pairs.index((b, a))]
        raise ValueError("bad minor request")


def eigen_minors(psi: RationalMapData) -> EigenMinors:
    forms = psi.forms
    xs = [MPoly.variable(v, psi.ring) for v in psi.variables]
    if psi.n == 2:
        return EigenMinors(2, (xs[0] * forms[1] - xs[1] * forms[0],))
    if psi.n == 3:
        # signs chosen so that x0*delta0 + x1*delta1 + x2*delta2 == 0
        minors = tuple(forms[(a + 1) % 3] * xs[(a + 2) % 3] - forms[(a + 2) % 3] * xs[(a + 1) % 3]
                       for a in range(3))
        return EigenMinors(3, minors)
    minors = tuple(xs[i] * forms[j] - xs[j] * forms[i]
                   for i in range(4) for j in range(i + 1, 4))
    return EigenMinors(4, minors)


def degree_profile(n: int, d: int) -> dict:
    """Homogeneity degrees of Delta and of every cofactor in the active
    decomposition; used to size interpolations and assert scaling laws."""
    if n not in (2, 3, 4) or d < 2:
        raise ValueError("degree_profile needs n in {2,3,4}, d >= 2")
    profile = {"delta": n * (n - 1) * (d - 1) ** (n - 1)}
    if n == 3:
        profile.update({
            "disc_minors": 6 * (d - 1) * d,
            "disc_psi_bar": 2 * (d - 2),
            "res_delta_psi_bar": 2 * d - 1,
        })
    elif n == 4:
        profile.update({
            "disc_minors": 12 * (d - 1) * d * d,
            "disc_psi_delta": 6 * d * d - 12 * d + 4,
            "res_psi_psi": 2 * (d - 1),
            "r_cofactor": 3 * d * d - 4 * d + 2,
        })
    return profile


def adjugate(matrix):
    """Adjugate of a small integer matrix (adj(M) * M = det(M) * I)."""
    k = len(matrix)
    if k == 1:
        return [[1]]
    adj = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            minor = [[matrix[r][c] for c in range(k) if c != j]
                     for r in range(k) if r != i]
            cof = det_fraction_free(minor)
            adj[j][i] = -cof if (i + j) % 2 else cof
    return adj


def conjugate_map(psi: RationalMapData, phi) -> RationalMapData:
    """Change of coordinates as a self-map: adj(phi) * Psi(phi * x).

    This is det(phi) times the honest conjugation phi^-1 . Psi . phi, kept
    polynomial; it maps the eigenscheme of Psi through phi^-1 and is the
    transformation under which the eigendiscriminant is covariant.
    """
    composed = apply_coordinate_change(list(psi.forms), phi, psi.variables)
    adj = adjugate(phi)
    ring = psi.ring
    forms = []
    for i in range(psi.n):
        acc = MPoly.zero(ring)
        for j in range(psi.n):
            acc = acc + composed[j].scale(ring.coerce(adj[i][j]))
        forms.append(acc)
    return RationalMapData(psi.n, psi.d, tuple(forms))


def invariance_exponent(n: int, d: int) -> int:
    """Weight w with Delta(conjugate_map(psi, phi)) = det(phi)^w * Delta(psi).

    Derived from homogeneity: adj(lambda I) * Psi(lambda x) scales every
    coefficient by lambda^(n+d-2), so w = deg(Delta) * (n+d-2) / n.  The
    weight is even, so unimodular changes of coordinates never touch the
    value.  (Measured exactly on random integer maps; note this differs
    from naively precomposing the components, which obeys no determinant
    law at all.)
    """
    w, rem = divmod(n * (n - 1) * (d - 1) ** (n - 1) * (n + d - 2), n)
    if rem:
        raise ArithmeticError("non-integral invariance weight")
    return w


@dataclass
class Cofactor:
    name: str
    value: object
    multiplicity: int = 1


@dataclass
class EigendiscResult:
    """Eigendiscriminant value plus the certificate of divided-out factors."""

    value: object
    n: int
    d: int
    disc_minors: object
    cofactors: list
    index_choice: tuple
    ring: object
    coordinate_change: dict | None = None

    def verify(self) -> bool:
        """Delta times all certificate cofactors must reproduce disc_minors."""
        acc = self.value
        ring = self.ring
        mul = (lambda a, b: a * b) if isinstance(acc, MPoly) else ring.mul
        for cof in self.cofactors:
            for _ in range(cof.multiplicity):
                acc = mul(acc, cof.value)
        return acc == self.disc_minors


def _is_zero_value(v, ring) -> bool:
    return v.is_zero() if isinstance(v, MPoly) else ring.is_zero(v)


def _value_mul(values, ring):
    acc = None
    for v in values:
        if acc is None:
            acc = v
        else:
            acc = acc * v if isinstance(acc, MPoly) or isinstance(v, MPoly) else ring.mul(acc, v)
    return acc


def eigendisc_n2(psi: RationalMapData, rng=None) -> EigendiscResult:
    """Delta_{2,d} = Disc of the single minor x0*psi1 - x1*psi0."""
    if psi.n != 2:
        raise ValueError("eigendisc_n2 needs a P^1 map")
    delta = eigen_minors(psi).minors[0]
    if delta.is_zero():
        raise DegenerateInput("the map fixes every point (delta = 0); Delta is undefined")
    value = discriminant_robust([delta], [psi.d], psi.variables, psi.ring, rng=rng)
    return EigendiscResult(value, 2, psi.d, value, [], (0, 1), psi.ring)


N3_CHOICES = ((0, 1, 2), (1, 2, 0), (0, 2, 1))


def _eigendisc_n3_choice(psi: RationalMapData, choice, rng=None) -> EigendiscResult:
    i, j, k = choice
    ring = psi.ring
    d = psi.d
    minors = eigen_minors(psi)
    xk = psi.variables[k]
    vars2 = tuple(v for v in psi.variables if v != xk)
    psik_bar = psi.forms[k].subst({xk: 0})
    delk_bar = minors.minors[k].subst({xk: 0})
    if psik_bar.is_zero():
        raise NonGeneric(f"psi_{k} bar is identically zero")
    disc_psi = discriminant_robust([psik_bar], [d - 1], vars2, ring, rng=rng)
    if _is_zero_value(disc_psi, ring):
        raise NonGeneric(f"Disc(psi_{k} bar) vanished")
    res_dp = resultant_binary(delk_bar, psik_bar, d, d - 1, vars2, ring)
    if _is_zero_value(res_dp, ring):
        raise NonGeneric(f"Res(delta_{k} bar, psi_{k} bar) vanished")
    # the delta minors miss pure powers by construction, so the fixed
    # Macaulay pairings inside Disc routinely need a coordinate change
    disc_minors = discriminant_robust([minors.minors[i], minors.minors[j]], [d, d],
                                      psi.variables, ring, rng=rng)
    denom = _value_mul([disc_psi, res_dp, res_dp], ring)
    value = resultant_division(disc_minors, denom, ring)
    cofactors = [Cofactor(f"disc_psi{k}_bar", disc_psi, 1),
                 Cofactor(f"res_delta{k}_psi{k}_bar", res_dp, 2)]
    return EigendiscResult(value, 3, d, disc_minors, cofactors, tuple(choice), ring)


def _n4_perms():
    yield (0, 1, 2, 3)
    for perm in itertools.permutations(range(4)):
        if perm != (0, 1, 2, 3):
            yield perm


def _eigendisc_n4_choice(psi: RationalMapData, choice, rng=None) -> EigendiscResult:
    k, i, j, l = choice
    ring = psi.ring
    d = psi.d
    minors = eigen_minors(psi)
    delta = minors.delta
    xi, xj = psi.variables[i], psi.variables[j]
    vars3_i = tuple(v for v in psi.variables if v != xi)
    vars3_j = tuple(v for v in psi.variables if v != xj)
    vars2 = tuple(v for v in psi.variables if v not in (xi, xj))

    bar_i = lambda f: f.subst({xi: 0})
    bar_j = lambda f: f.subst({xj: 0})
    psi_i_bar = bar_i(psi.forms[i])
    psi_j_bar = bar_j(psi.forms[j])
    if psi_i_bar.is_zero() or psi_j_bar.is_zero():
        raise NonGeneric("a bar-specialized component is identically zero")

    disc_i = discriminant_robust([psi_i_bar, bar_i(delta(j, l))], [d - 1, d], vars3_i, ring, rng=rng)
    if _is_zero_value(disc_i, ring):
        raise NonGeneric("Disc(psi_i bar, delta_jl bar) vanished")
    disc_j = discriminant_robust([psi_j_bar, bar_j(delta(k, i))], [d - 1, d], vars3_j, ring, rng=rng)
    if _is_zero_value(disc_j, ring):
        raise NonGeneric("Disc(psi_j bar, delta_ki bar) vanished")
    res_psi = resultant_binary(psi_i_bar.subst({xj: 0}), psi_j_bar.subst({xi: 0}),
                               d - 1, d - 1, vars2, ring)
    if _is_zero_value(res_psi, ring):
        raise NonGeneric("Res(psi_i bar, psi_j bar) vanished")
    # residual factors, never computed directly: divide the ternary resultants
    # by the shared binary resultant
    res_i = resultant_robust([psi_i_bar, bar_i(delta(k, j)), bar_i(delta(j, l))],
                             [d - 1, d, d], vars3_i, ring, rng=rng)
    r_j_i = resultant_division(res_i, res_psi, ring)
    if _is_zero_value(r_j_i, ring):
        raise NonGeneric("residual factor R_j^(i) vanished")
    res_j = resultant_robust([psi_j_bar, bar_j(delta(k, i)), bar_j(delta(i, l))],
                             [d - 1, d, d], vars3_j, ring, rng=rng)
    r_i_j = resultant_division(res_j, res_psi, ring)
    if _is_zero_value(r_i_j, ring):
        raise NonGeneric("residual factor R_i^(j) vanished")

    disc_minors = discriminant_robust([delta(k, i), delta(i, j), delta(j, l)], [d, d, d],
                                      psi.variables, ring, rng=rng)
    denom = _value_mul([disc_i, disc_j, res_psi, res_psi, r_j_i, r_j_i, r_i_j, r_i_j], ring)
    value = resultant_division(disc_minors, denom, ring)
    cofactors = [Cofactor("disc_psi_i_delta_jl", disc_i, 1),
                 Cofactor("disc_psi_j_delta_ki", disc_j, 1),
                 Cofactor("res_psi_i_psi_j", res_psi, 2),
                 Cofactor("r_j_i", r_j_i, 2),
                 Cofactor("r_i_j", r_i_j, 2)]
    return EigendiscResult(value, 4, d, disc_minors, cofactors, tuple(choice), ring)


def _with_robust(psi, choices, compute_choice, weight, rng, tries):
    rng = rng or random.Random(0)
    last = None
    for choice in choices:
        try:
            result = compute_choice(psi, choice, rng=rng)
            if not result.verify():
                raise NotDivisible("certificate product mismatch")
            return result
        except NonGeneric as exc:
            last = exc
    for _ in range(tries):
        phi = random_unimodular(psi.n, rng)
        det_phi = det_fraction_free(phi)
        try:
            conjugated = conjugate_map(psi, phi)
        except ValueError:
            continue
        for choice in choices:
            try:
                result = compute_choice(conjugated, choice, rng=rng)
            except NonGeneric as exc:
                last = exc
                continue
            if not result.verify():
                raise NotDivisible("certificate product mismatch")
            # Delta(conjugated) = det(phi)^weight * Delta(psi); the weight is
            # even, so a unimodular phi never changes the value.
            assert weight % 2 == 0 and det_phi in (1, -1)
            result.coordinate_change = {"matrix": phi, "det": det_phi, "exponent": weight}
            return result
    raise DegenerateInput(f"no index choice or coordinate change was generic: {last}")


def eigendisc_n3(psi: RationalMapData, choice=None, robust: bool = True,
                 rng=None, tries: int = 10) -> EigendiscResult:
    """Delta_{3,d} via the ternary decomposition; certificate included."""
    if psi.n != 3:
        raise ValueError("eigendisc_n3 needs a P^2 map")
    choices = [tuple(choice)] if choice is not None else list(N3_CHOICES)
    if not robust:
        return _eigendisc_n3_choice(psi, choices[0], rng=rng)
    return _with_robust(psi, choices, _eigendisc_n3_choice,
                        invariance_exponent(3, psi.d), rng, tries)


def eigendisc_n4(psi: RationalMapData, choice=None, robust: bool = True,
                 rng=None, tries: int = 10) -> EigendiscResult:
    """Delta_{4,d} via the quaternary decomposition; choice is (k, i, j, l)."""
    if psi.n != 4:
        raise ValueError("eigendisc_n4 needs a P^3 map")
    choices = [tuple(choice)] if choice is not None else list(_n4_perms())
    if not robust:
        return _eigendisc_n4_choice(psi, choices[0], rng=rng)
    return _with_robust(psi, choices, _eigendisc_n4_choice,
                        invariance_exponent(4, psi.d), rng, tries)


def eigendisc(psi: RationalMapData, **kwargs) -> EigendiscResult:
    """Dispatch on the map's format."""
    if psi.n == 2:
        return eigendisc_n2(psi, rng=kwargs.get("rng"))
    if psi.n == 3:
        return eigendisc_n3(psi, **kwargs)
    return eigendisc_n4(psi, **kwargs)


def eigendisc_parametric(psi: RationalMapData, bounds: dict | None = None,
                         rng=None, budget_factor: int = 4) -> MPoly:
    """Delta of a family (forms over ZZ[u]/ZZ[t], <= 2 parameters) as an
    exact polynomial, reconstructed from pointwise evaluations.

    Degree bound per parameter defaults to (total Delta degree) x (max
    parameter degree of the coefficients).  Parameter points where the
    pointwise pipeline degenerates are skipped and replaced.
    """
    params = sorted(psi.param_indices())
    if not params:
        res = eigendisc(psi, rng=rng)
        return MPoly.constant(res.value, ZZ)
    if len(params) > 2:
        raise ValueError("at most 2 formal parameters are supported")
    if psi.ring is not ZZ:
        raise ValueError("parametric families must have integer coefficients")
    delta_deg = degree_profile(psi.n, psi.d)["delta"]
    if bounds is None:
        bounds = {q: delta_deg * max(f.degree((q,)) for f in psi.forms) for q in params}

    def pointwise(assignment: dict):
        forms = tuple(f.subst(assignment) for f in psi.forms)
        inst = RationalMapData(psi.n, psi.d, forms)
        return eigendisc(inst, rng=rng).value

    def rec(prefix: dict, remaining) -> MPoly:
        if not remaining:
            return MPoly.constant(Fraction(pointwise(prefix)), QQ)
        q = remaining[0]
        need = bounds[q] + 1
        nodes, vals = [], []
        candidate = 0
        attempts = 0
        while len(nodes) < need and attempts < budget_factor * need:
            attempts += 1
            try:
                v = rec({**prefix, q: candidate}, remaining[1:])
            except (DegenerateInput, ValueError):
                candidate = -candidate if candidate > 0 else -candidate + 1
                continue
            nodes.append(candidate)
            vals.append(v)
            candidate = -candidate if candidate > 0 else -candidate + 1
        if len(nodes) < need:
            raise DegenerateInput(f"too few good interpolation points for {VAR_NAMES[q]}")
        return interp_univariate(q, nodes, vals)

    result = qq_poly_to_zz(rec({}, params))
    # verification at a fresh point; skip degenerate candidates
    for offset in (17, 18, 19):
        fresh = {q: bounds[q] + offset for q in params}
        try:
            direct = pointwise(fresh)
        except DegenerateInput:
            continue
        if result.subst(fresh).constant_value() != direct:
            raise NotDivisible("parametric eigendiscriminant failed the fresh-point check")
        break
    return result


def eigendisc_via_family(psi: RationalMapData, theta: RationalMapData | None = None,
                         rng=None) -> int:
    """Evaluate Delta at a non-generic map by embedding it in a pencil
    psi + t*theta, interpolating Delta(t), and reading off t = 0."""
    rng = rng or random.Random(0)
    if theta is None:
        forms = []
        from .resultant import monomials_of_degree, _expand_exp
        for _ in range(psi.n):
            terms = {}
            for m in monomials_of_degree(psi.n, psi.d - 1):
                c = rng.randint(-3, 3)
                if c:
                    terms[_expand_exp(m, psi.variables)] = c
            forms.append(MPoly(terms, ZZ))
        theta = RationalMapData(psi.n, psi.d, tuple(forms))
    t = MPoly.variable(7, ZZ)
    family = RationalMapData(psi.n, psi.d,
                             tuple(f + t * g for f, g in zip(psi.forms, theta.forms)))
    delta_t = eigendisc_parametric(family, rng=rng)
    return delta_t.subst({7: 0}).constant_value()
