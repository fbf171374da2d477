import random

import pytest

from eigendisc.mpoly import MPoly
from eigendisc.resultant import _expand_exp, monomials_of_degree
from eigendisc.rings import ZZ


def rand_form(rng: random.Random, deg: int, variables, lo=-9, hi=9, ring=ZZ) -> MPoly:
    """Dense-ish random homogeneous form of the given degree."""
    terms = {}
    for m in monomials_of_degree(len(variables), deg):
        c = rng.randint(lo, hi)
        if c:
            terms[_expand_exp(m, variables)] = ring.coerce(c)
    return MPoly(terms, ring)


def rand_nonzero_form(rng, deg, variables, lo=-9, hi=9, ring=ZZ) -> MPoly:
    while True:
        f = rand_form(rng, deg, variables, lo, hi, ring)
        if not f.is_zero():
            return f


@pytest.fixture
def rng():
    return random.Random(20240817)
