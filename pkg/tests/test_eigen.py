import random

import pytest

from conftest import rand_form
from eigendisc.discriminant import discriminant_ci
from eigendisc.eigen import (Cofactor, RationalMapData, TensorData,
                             conjugate_map, degree_profile, eigen_minors,
                             eigendisc_n2, eigendisc_n3, eigendisc_n4, eigendisc_parametric,
                             eigendisc_via_family, invariance_exponent, polar_map,
                             tensor_to_map)
from eigendisc.mpoly import MPoly, poly
from eigendisc.resultant import DegenerateInput
from eigendisc.rings import GF, ZZ


def rand_map(rng, n, d, lo=-5, hi=5, ring=ZZ):
    while True:
        forms = tuple(rand_form(rng, d - 1, tuple(range(n)), lo, hi, ring) for _ in range(n))
        if not all(f.is_zero() for f in forms):
            return RationalMapData(n, d, forms)


# ---------------------------------------------------------------- tensors


def test_tensor_validation():
    with pytest.raises(ValueError):
        TensorData(5, 3, {})
    with pytest.raises(ValueError):
        TensorData(2, 2, {(0, 5): 1})
    with pytest.raises(ValueError):
        TensorData(2, 2, {(0, 1): 1, (1, 0): 2}, symmetric=True)


def test_tensor_symmetric_expansion():
    t = TensorData(2, 3, {(0, 0, 1): 5}, symmetric=True)
    assert t.entry((0, 1, 0)) == 5 and t.entry((1, 0, 0)) == 5
    assert t.entry((1, 1, 1)) == 0


def test_tensor_to_map_matrix_case():
    a, b, c, d = 3, 5, -2, 7
    t = TensorData(2, 2, {(0, 0): a, (0, 1): b, (1, 0): c, (1, 1): d})
    psi = tensor_to_map(t)
    assert psi.forms[0] == poly(f"{a}*x0 + {b}*x1")
    assert psi.forms[1] == poly(f"{c}*x0 + {d}*x1")


def test_tensor_to_map_symmetric_vs_polar():
    # symmetric tensor of x0^3 + 3*x0*x1^2: integral entries, polar = 3 * map
    entries = {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (1, 1, 0): 1}
    psi = tensor_to_map(TensorData(2, 3, entries, symmetric=True))
    polar = polar_map(poly("x0^3 + 3*x0*x1^2"), 2)
    assert polar.forms == tuple(f.scale(3) for f in psi.forms)


def test_zero_tensor_rejected():
    with pytest.raises(ValueError):
        tensor_to_map(TensorData(2, 2, {}))


def test_polar_map_examples():
    psi = polar_map(poly("x0^3+x1^3+x2^3"))
    assert psi.forms == (poly("3*x0^2"), poly("3*x1^2"), poly("3*x2^2"))
    assert polar_map(poly("x0*x1")).forms == (poly("x1"), poly("x0"))
    C = poly("(2*x0+x1)*(2*x0+x2)*(2*x1+x2)+u*x0*x1*x2")
    pm = polar_map(C, 3)
    assert pm.forms[0] == C.partial(0) and pm.d == 3
    with pytest.raises(ValueError):
        polar_map(poly("x0^2 + x1"))


def test_rational_map_validation():
    with pytest.raises(ValueError):
        RationalMapData(3, 3, (poly("x0"), poly("x1"), poly("x2")))  # degree d-1 mismatch
    with pytest.raises(ValueError):
        RationalMapData(3, 2, (poly("x0"), poly("x1"), poly("x2")))  # d too small for n=3
    with pytest.raises(ValueError):
        RationalMapData(2, 2, (poly("x2"), poly("x0")))  # uses x2 beyond arity
    with pytest.raises(ValueError):
        RationalMapData(2, 2, (MPoly.zero(ZZ), MPoly.zero(ZZ)))
    RationalMapData(2, 2, (poly("x0"), MPoly.zero(ZZ)))  # one zero component is fine


# ---------------------------------------------------------------- minors


def test_minors_n2():
    a, b, c, d = 2, 3, 5, 7
    psi = RationalMapData(2, 2, (poly(f"{a}*x0+{b}*x1"), poly(f"{c}*x0+{d}*x1")))
    delta = eigen_minors(psi).minors[0]
    assert delta == poly(f"{c}*x0^2 + {d - a}*x0*x1 - {b}*x1^2")


def test_minors_n3_syzygy(rng):
    psi = rand_map(rng, 3, 3)
    m = eigen_minors(psi)
    x = [MPoly.variable(i) for i in range(3)]
    assert (x[0] * m.minors[0] + x[1] * m.minors[1] + x[2] * m.minors[2]).is_zero()
    assert all(mi.homogeneous_degree((0, 1, 2)) == 3 for mi in m.minors if not mi.is_zero())


def test_minors_n4(rng):
    psi = rand_map(rng, 4, 3)
    m = eigen_minors(psi)
    x = [MPoly.variable(i) for i in range(4)]
    for i in range(4):
        for j in range(4):
            if i != j:
                assert m.delta(i, j) == -m.delta(j, i)
    # Pluecker-type syzygies x_a delta_bc - x_b delta_ac + x_c delta_ab = 0
    from itertools import combinations
    for a, b, c in combinations(range(4), 3):
        s = x[a] * m.delta(b, c) - x[b] * m.delta(a, c) + x[c] * m.delta(a, b)
        assert s.is_zero()
    with pytest.raises(ValueError):
        m.delta(1, 1)


# ------------------------------------------------------------- n = 2


def test_eigendisc_n2_matrix_map():
    a, b, c, d = 3, 5, -2, 7
    psi = RationalMapData(2, 2, (poly(f"{a}*x0+{b}*x1"), poly(f"{c}*x0+{d}*x1")))
    res = eigendisc_n2(psi)
    assert res.value in (((a - d) ** 2 + 4 * b * c), -((a - d) ** 2 + 4 * b * c))
    assert res.verify()


def _oracle_disc_product_of_linears(factors_linear, start=None, start_disc=None):
    """Independent oracle: fold the polarization product formula over linear
    factors, with Res(F, ell) = (-1)^deg(F) * F(root of ell)."""
    def root(ell):
        cx0 = ell.terms.get((1, 0, 0, 0, 0, 0, 0, 0), 0)
        cx1 = ell.terms.get((0, 1, 0, 0, 0, 0, 0, 0), 0)
        return (-cx1, cx0)

    F = start if start is not None else factors_linear[0]
    disc = start_disc if start is not None else -1
    rest = factors_linear if start is not None else factors_linear[1:]
    for ell in rest:
        deg = F.degree((0, 1))
        alpha, beta = root(ell)
        res = (-1) ** deg * F.subst({0: alpha, 1: beta}).constant_value()
        disc = (-1) ** deg * disc * (-1) * res ** 2
        F = F * ell
    return disc


def test_eigendisc_n2_power_maps():
    # psi = (x0^{d-1}, x1^{d-1}): delta = x0*x1*(x1^{d-2} - x0^{d-2})
    for d in (3, 4):
        psi = RationalMapData(2, d, (poly("x0") ** (d - 1), poly("x1") ** (d - 1)))
        delta = eigen_minors(psi).minors[0]
        assert delta == poly("x0*x1") * (poly("x1") ** (d - 2) - poly("x0") ** (d - 2))
        value = eigendisc_n2(psi).value
        factors = [poly("x0"), poly("x1"), poly("x1-x0")]
        if d == 4:
            factors.append(poly("x1+x0"))
        assert value == _oracle_disc_product_of_linears(factors)
        assert value != 0
    # d = 5: quartic factor splits off x1^3 - x0^3; seed with the quadratic piece
    psi = RationalMapData(2, 5, (poly("x0^4"), poly("x1^4")))
    quad = poly("x1^2 + x0*x1 + x0^2")
    oracle = _oracle_disc_product_of_linears(
        [poly("x0"), poly("x1"), poly("x1-x0")], start=quad,
        start_disc=discriminant_ci([quad], [2], (0, 1)))
    assert eigendisc_n2(psi).value == oracle != 0


def test_eigendisc_n2_planted_double_point():
    s = poly("x0+2*x1")
    psi = RationalMapData(2, 3, (poly("x0") * s, poly("(x0-x1)^2") + poly("x1") * s))
    assert eigen_minors(psi).minors[0] == poly("x0*(x0-x1)^2")
    assert eigendisc_n2(psi).value == 0


def test_eigendisc_n2_identity_like_rejected():
    psi = RationalMapData(2, 3, (poly("x0*(x0+x1)"), poly("x1*(x0+x1)")))
    assert eigen_minors(psi).minors[0].is_zero()
    with pytest.raises(DegenerateInput):
        eigendisc_n2(psi)


# ------------------------------------------------------------- n = 3


def test_eigendisc_n3_cross_index(rng):
    for d in (3, 4):
        psi = rand_map(rng, 3, d)
        base = eigendisc_n3(psi, rng=random.Random(0))
        assert base.verify()
        for choice in ((1, 2, 0), (0, 2, 1)):
            alt = eigendisc_n3(psi, choice=choice, rng=random.Random(1))
            assert alt.value == base.value


def test_certificate_tamper_detection(rng):
    psi = rand_map(rng, 3, 3)
    res = eigendisc_n3(psi, rng=random.Random(0))
    assert res.verify()
    res.cofactors[0] = Cofactor(res.cofactors[0].name, res.cofactors[0].value + 1, 1)
    assert not res.verify()


def test_eigendisc_n3_planted_double_eigenpoint(rng):
    # psi_i = x0*x_i + (quadratics vanishing doubly at (1:0:0)): every minor
    # lies in the square of the point's ideal, so the eigenscheme is singular
    x = [MPoly.variable(i) for i in range(3)]
    forms = []
    for i in range(3):
        pert = rand_form(rng, 1, (1, 2), lo=-3, hi=3)
        extra = rand_form(rng, 1, (1, 2), lo=-3, hi=3)
        forms.append(x[0] * x[i] + pert * extra)
    psi = RationalMapData(3, 3, tuple(forms))
    point = {0: 1, 1: 0, 2: 0}
    for m in eigen_minors(psi).minors:
        assert m.subst(point).constant_value() == 0
        for v in range(3):
            assert m.partial(v).subst(point).constant_value() == 0
    assert eigendisc_n3(psi, rng=random.Random(0)).value == 0


def test_eigendisc_n3_degree_five_smoke(rng):
    # nothing in the pipeline is special to d in {3, 4}
    psi = rand_map(rng, 3, 5, lo=-2, hi=2)
    res = eigendisc_n3(psi, rng=random.Random(0))
    assert res.verify()
    alt = eigendisc_n3(psi, choice=(1, 2, 0), rng=random.Random(1))
    assert alt.value == res.value


def test_eigendisc_n3_scaling(rng):
    psi = rand_map(rng, 3, 3, lo=-3, hi=3)
    v1 = eigendisc_n3(psi, rng=random.Random(0)).value
    v2 = eigendisc_n3(psi.scale(3), rng=random.Random(0)).value
    assert v2 == 3 ** 24 * v1


def test_conjugation_invariance_exact(rng):
    psi = rand_map(rng, 3, 3, lo=-3, hi=3)
    base = eigendisc_n3(psi, rng=random.Random(0)).value
    phi = [[1, 0, 0], [2, 1, 0], [0, 1, 2]]  # det 2
    val = eigendisc_n3(conjugate_map(psi, phi), rng=random.Random(0)).value
    assert val == 2 ** invariance_exponent(3, 3) * base
    psi2 = rand_map(rng, 2, 3)
    b2 = eigendisc_n2(psi2).value
    v2 = eigendisc_n2(conjugate_map(psi2, [[1, 1], [1, 3]])).value
    assert v2 == 2 ** invariance_exponent(2, 3) * b2


def test_invariance_exponents_even():
    for n in (2, 3, 4):
        for d in (3, 4, 5):
            assert invariance_exponent(n, d) % 2 == 0


def test_degree_profile():
    assert degree_profile(3, 3)["delta"] == 24
    assert degree_profile(4, 3)["delta"] == 96
    assert degree_profile(2, 5)["delta"] == 8  # 2*(d-1)
    p3 = degree_profile(3, 4)
    assert p3["disc_minors"] == p3["delta"] + p3["disc_psi_bar"] + 2 * p3["res_delta_psi_bar"]
    p4 = degree_profile(4, 3)
    assert p4["disc_minors"] == (p4["delta"] + 2 * p4["disc_psi_delta"]
                                 + 2 * p4["res_psi_psi"] + 4 * p4["r_cofactor"])
    with pytest.raises(ValueError):
        degree_profile(5, 3)


# ------------------------------------------------------------- n = 4


def test_eigendisc_n4_cross_index_gf(rng):
    gf = GF(2147483629)
    psi = rand_map(rng, 4, 3).to_gf(gf)
    base = eigendisc_n4(psi, choice=(0, 1, 2, 3), rng=random.Random(0))
    assert base.verify()
    for choice in ((1, 2, 3, 0), (3, 2, 1, 0)):
        alt = eigendisc_n4(psi, choice=choice, rng=random.Random(1))
        assert alt.value == base.value


def test_eigendisc_n4_planted_degenerate(rng):
    # a map fixing the point (1:0:0:0) to second order: all minors vanish
    # doubly there, so the eigenscheme is singular and Delta = 0
    gf = GF(1000003)
    x0, x1, x2, x3 = (MPoly.variable(i, gf) for i in range(4))
    lam = MPoly.constant(1, gf)
    forms = []
    for i, xi in enumerate((x0, x1, x2, x3)):
        pert = rand_form(rng, 1, (1, 2, 3), ring=gf)  # vanishes at the point twice
        extra = rand_form(rng, 1, (1, 2, 3), ring=gf)
        forms.append(x0 * xi + pert * extra)
    psi = RationalMapData(4, 3, tuple(forms))
    m = eigen_minors(psi)
    point = {0: 1, 1: 0, 2: 0, 3: 0}
    for i in range(4):
        for j in range(i + 1, 4):
            dm = m.delta(i, j)
            assert dm.subst(point).constant_value() == 0
            for v in range(4):
                assert dm.partial(v).subst(point).constant_value() == 0
    assert eigendisc_n4(psi, rng=random.Random(2)).value == 0


# ------------------------------------------------------------- parametric


def test_parametric_constant_family(rng):
    psi = rand_map(rng, 2, 3)
    c = eigendisc_parametric(psi, rng=random.Random(0))
    assert c == MPoly.constant(eigendisc_n2(psi).value, ZZ)


def test_parametric_matches_pointwise(rng):
    base = rand_map(rng, 2, 3)
    dirn = rand_map(rng, 2, 3)
    t = MPoly.variable(7)
    family = RationalMapData(2, 3, tuple(f + t * g for f, g in zip(base.forms, dirn.forms)))
    delta_t = eigendisc_parametric(family, rng=random.Random(0))
    for tval in (0, 2, -3):
        inst = RationalMapData(2, 3, tuple(f.subst({7: tval}) for f in family.forms))
        assert delta_t.subst({7: tval}).constant_value() == eigendisc_n2(inst).value


def test_parametric_symbolic_route_matches_interpolation():
    """Two independent parametric routes: pointwise evaluation + top-level
    interpolation vs symbolic determinants + exact polynomial division."""
    C = poly("(2*x0+x1)*(2*x0+x2)*(2*x1+x2) + u*x0*x1*x2")
    psi = polar_map(C, 3)
    via_interp = eigendisc_parametric(psi, rng=random.Random(0))
    symbolic = eigendisc_n3(psi, robust=False, rng=random.Random(1))
    assert symbolic.value == via_interp
    assert symbolic.verify()


def test_rational_coefficient_map():
    from fractions import Fraction
    from eigendisc.rings import QQ
    base = polar_map(poly("x0^3+2*x1^3+7*x2^3+x0*x1*x2"), 3)
    halved = RationalMapData(3, 3, tuple(
        f.map_coefficients(lambda c: Fraction(c, 2), QQ) for f in base.forms))
    rq = eigendisc_n3(halved, rng=random.Random(2)).value
    rz = eigendisc_n3(base, rng=random.Random(3)).value
    assert rq == Fraction(rz, 2 ** 24)


def test_via_family_equals_robust():
    C = poly("2*x0^3 + 3*x1^3 + 5*x2^3 + x0*x1*x2")
    psi = polar_map(C, 3)
    direct = eigendisc_n3(psi, rng=random.Random(0))
    assert direct.coordinate_change is not None  # genuinely non-generic input
    via = eigendisc_via_family(psi, rng=random.Random(1))
    assert via == direct.value


def test_parametric_two_parameters(rng):
    u, t = MPoly.variable(4), MPoly.variable(7)
    base = rand_map(rng, 2, 2)
    psi = RationalMapData(2, 2, (base.forms[0] + u * poly("x0") + t * poly("x1"),
                                 base.forms[1] + t * poly("x0")))
    surface = eigendisc_parametric(psi, rng=random.Random(0))
    for uval, tval in ((0, 0), (2, -1), (-3, 4)):
        inst = RationalMapData(2, 2, tuple(f.subst({4: uval, 7: tval}) for f in psi.forms))
        assert surface.subst({4: uval, 7: tval}).constant_value() == eigendisc_n2(inst).value


def test_parametric_budget_exhaustion():
    # delta vanishes identically at every parameter value: no good points exist
    t = MPoly.variable(7)
    common = poly("x0+x1") + t * poly("x0")
    psi = RationalMapData(2, 3, (poly("x0") * common, poly("x1") * common))
    with pytest.raises(DegenerateInput):
        eigendisc_parametric(psi, rng=random.Random(0), budget_factor=2)


def test_parametric_rejects_too_many_params():
    t, u, v = MPoly.variable(7), MPoly.variable(4), MPoly.variable(5)
    forms = (poly("x0^2") + (t + u + v) * poly("x1^2"), poly("x1^2"))
    psi = RationalMapData(2, 3, forms)
    with pytest.raises(ValueError):
        eigendisc_parametric(psi)


def test_zz_and_gf_paths_agree(rng):
    p = 2147483629
    gf = GF(p)
    psi = rand_map(rng, 3, 3)
    exact = eigendisc_n3(psi, rng=random.Random(0)).value
    modular = eigendisc_n3(psi.to_gf(gf), rng=random.Random(1)).value
    assert exact % p == modular


def test_zz_and_gf_paths_agree_n4(rng):
    p = 2147483629
    psi = rand_map(rng, 4, 3, lo=-3, hi=3)
    exact = eigendisc_n4(psi, choice=(0, 1, 2, 3), rng=random.Random(0)).value
    modular = eigendisc_n4(psi.to_gf(GF(p)), choice=(0, 1, 2, 3), rng=random.Random(1)).value
    assert exact % p == modular


def test_parametric_family_degree_four(rng):
    base = rand_map(rng, 3, 4, lo=-2, hi=2)
    dirn = rand_map(rng, 3, 4, lo=-2, hi=2)
    t = MPoly.variable(7)
    family = RationalMapData(3, 4, tuple(f + t * g for f, g in zip(base.forms, dirn.forms)))
    delta_t = eigendisc_parametric(family, rng=random.Random(0))
    assert delta_t.degree((7,)) <= degree_profile(3, 4)["delta"]
    inst = RationalMapData(3, 4, tuple(f.subst({7: -2}) for f in family.forms))
    assert delta_t.subst({7: -2}).constant_value() == \
        eigendisc_n3(inst, rng=random.Random(5)).value


def test_fallback_pipeline_end_to_end():
    """The numpy fallback kernel must reproduce an eigendiscriminant value."""
    import os
    import subprocess
    import sys
    code = (
        "import random\n"
        "from eigendisc import kernels\n"
        "from eigendisc.mpoly import poly\n"
        "from eigendisc.eigen import polar_map, eigendisc_n3\n"
        "assert not kernels.USE_NUMBA\n"
        "psi = polar_map(poly('x0^3+2*x1^3+7*x2^3'), 3)\n"
        "print(eigendisc_n3(psi, rng=random.Random(0)).value)\n"
    )
    env = dict(os.environ, EIGENDISC_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    psi = polar_map(poly("x0^3+2*x1^3+7*x2^3"), 3)
    assert int(out.stdout.strip()) == eigendisc_n3(psi, rng=random.Random(0)).value


def test_char2_square_on_family(rng):
    """Delta restricted to a line is a square mod 2: only even powers survive."""
    base = rand_map(rng, 3, 3, lo=-2, hi=2)
    dirn = rand_map(rng, 3, 3, lo=-2, hi=2)
    t = MPoly.variable(7)
    family = RationalMapData(3, 3, tuple(f + t * g for f, g in zip(base.forms, dirn.forms)))
    delta_t = eigendisc_parametric(family, rng=random.Random(0))
    for exp, coeff in delta_t.terms.items():
        if exp[7] % 2 == 1:
            assert coeff % 2 == 0
