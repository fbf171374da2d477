"""Exact determinants of matrices with integer, rational, prime-field or
polynomial entries.

Three routes, matching how the rest of the package uses determinants:

* ``det_fraction_free``: Bareiss one-step elimination over any integral
  domain with exact division (ints, Fractions, polynomials).  Used for
  small symbolic matrices and as an independent oracle.
* ``det_modular_crt``: per-prime elimination (see ``kernels``) plus
  Chinese remaindering, sized by the Hadamard bound, with one extra
  verification prime.  The workhorse for scalar integer matrices.
* ``det_by_interpolation``: matrices whose entries are polynomials in the
  formal parameters; evaluates on an integer grid, reconstructs by
  Newton/Lagrange interpolation over QQ, clears to ZZ, and re-checks at a
  fresh point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .mpoly import PARAMS, VAR_NAMES, MPoly
from .primefield import crt_combine, word_primes
from .rings import GF, QQ, ZZ, NotDivisible


class InsufficientBound(Exception):
    """Interpolation degree bound was too small; caller must raise it."""


@dataclass
class ExactMatrix:
    """Dense matrix with labels for audit output.

    Entries must be ring-uniform: all Python ints, all Fractions, or all
    MPoly over a common ring.
    """

    rows: list
    row_labels: list | None = None
    col_labels: list | None = None

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def submatrix(self, row_idx, col_idx) -> "ExactMatrix":
        rl = [self.row_labels[i] for i in row_idx] if self.row_labels else None
        cl = [self.col_labels[j] for j in col_idx] if self.col_labels else None
        return ExactMatrix([[self.rows[i][j] for j in col_idx] for i in row_idx], rl, cl)

    def dump(self, out=None) -> str:
        """Plain-text labeled table, for debugging matrix constructions."""
        cells = [[str(e) for e in row] for row in self.rows]
        rl = self.row_labels or [f"r{i}" for i in range(self.nrows)]
        cl = self.col_labels or [f"c{j}" for j in range(self.ncols)]
        widths = [max([len(cl[j])] + [len(cells[i][j]) for i in range(self.nrows)])
                  for j in range(self.ncols)]
        lw = max((len(s) for s in rl), default=0)
        lines = [" " * lw + " | " + "  ".join(cl[j].rjust(widths[j]) for j in range(self.ncols))]
        for i, row in enumerate(cells):
            lines.append(rl[i].rjust(lw) + " | " + "  ".join(row[j].rjust(widths[j]) for j in range(self.ncols)))
        text = "\n".join(lines)
        if out is not None:
            out.write(text + "\n")
        return text


def _entry_div(a, b):
    """Exact division dispatch for Bareiss."""
    if isinstance(a, MPoly):
        return a.exact_div(b)
    if isinstance(a, int):
        q, r = divmod(a, b)
        if r:
            raise NotDivisible(f"{a} not divisible by {b}")
        return q
    return a / b


def det_fraction_free(matrix):
    """Bareiss fraction-free determinant; exact over any integral domain."""
    rows = matrix.rows if isinstance(matrix, ExactMatrix) else matrix
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sample = m[0][0]
    zero_like = (lambda x: x.is_zero()) if isinstance(sample, MPoly) else (lambda x: x == 0)
    sign = 1
    prev = None
    for k in range(n - 1):
        piv = next((r for r in range(k, n) if not zero_like(m[r][k])), None)
        if piv is None:
            return MPoly.zero(sample.ring) if isinstance(sample, MPoly) else 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                e = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = e if prev is None else _entry_div(e, prev)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def hadamard_bits(rows) -> int:
    """Bits of the Hadamard bound on |det| for an integer matrix."""
    total = 0.0
    for row in rows:
        s = sum(e * e for e in row)
        if s == 0:
            return 0
        total += 0.5 * math.log2(s)
    return int(total) + 1


def _to_int_array(rows):
    try:
        return np.asarray(rows, dtype=np.int64)
    except (OverflowError, ValueError):
        return None


def det_modular_crt(matrix, bound_hint: int | None = None) -> int:
    """Exact determinant of an integer matrix via per-prime elimination + CRT.

    Prime count is sized so the product exceeds twice the Hadamard bound
    (or the caller's hint, in bits); one extra verification prime turns
    the reconstruction into a checked computation.
    """
    rows = matrix.rows if isinstance(matrix, ExactMatrix) else matrix
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    bits = hadamard_bits(rows) if bound_hint is None else bound_hint
    if bits == 0 and bound_hint is None:
        return 0  # a zero row
    arr = _to_int_array(rows)
    payload = arr if arr is not None else rows
    need = bits + 2
    k = max(1, (need + 29) // 30)  # pool primes carry 30+ usable bits
    primes = word_primes(k)
    got = sum(p.bit_length() - 1 for p in primes)
    while got < need:
        k += max(1, (need - got + 29) // 30)
        primes = word_primes(k)
        got = sum(p.bit_length() - 1 for p in primes)
    primes = list(primes)
    verify = word_primes(len(primes) + 1)[-1]
    residues = [kernels.det_mod(payload, p) for p in primes]
    det = crt_combine(residues, primes)
    check = kernels.det_mod(payload, verify)
    if (det - check) % verify != 0:
        raise ArithmeticError("modular determinant failed the verification prime")
    return det


def det_gf(matrix, ring: GF) -> int:
    """Determinant over a prime field (entries plain residues)."""
    rows = matrix.rows if isinstance(matrix, ExactMatrix) else matrix
    return kernels.det_mod(rows, ring.p)


# ---------------------------------------------------------------------------
# Interpolation of parametric determinants
# ---------------------------------------------------------------------------


def interp_nodes(count: int) -> list[int]:
    """Deterministic integer nodes 0, 1, -1, 2, -2, ..."""
    out = [0]
    k = 1
    while len(out) < count:
        out.append(k)
        if len(out) < count:
            out.append(-k)
        k += 1
    return out[:count]


def interp_univariate(var_index: int, nodes, values) -> MPoly:
    """Newton interpolation over QQ in one parameter.

    `values` may be Fractions/ints or MPoly over QQ (for tensor grids).
    """
    n = len(nodes)
    table = [v if isinstance(v, MPoly) else MPoly.constant(Fraction(v), QQ) for v in values]
    # divided differences, in place
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            diff = Fraction(nodes[i] - nodes[i - level])
            table[i] = (table[i] - table[i - 1]).scale(1 / diff)
    x = MPoly.variable(var_index, QQ)
    acc = table[n - 1]
    for k in range(n - 2, -1, -1):
        acc = acc * (x - MPoly.constant(Fraction(nodes[k]), QQ)) + table[k]
    return acc


def qq_poly_to_zz(p: MPoly) -> MPoly:
    """Assert a QQ polynomial has integer coefficients and convert."""
    terms = {}
    for exp, c in p.terms.items():
        if c.denominator != 1:
            raise InsufficientBound(f"interpolated coefficient {c} is not an integer")
        terms[exp] = c.numerator
    return MPoly(terms, ZZ)


def interp_grid(param_indices, bounds, evaluate) -> MPoly:
    """Tensor-product interpolation of an integer-valued function.

    `evaluate(assignment dict)` must return an int; `bounds[q]` is the
    degree bound in parameter q.  Returns the unique ZZ polynomial of
    those degrees matching the grid.
    """
    param_indices = list(param_indices)

    def rec(prefix: dict, remaining) -> MPoly:
        if not remaining:
            return MPoly.constant(Fraction(evaluate(prefix)), QQ)
        q = remaining[0]
        nodes = interp_nodes(bounds[q] + 1)
        vals = [rec({**prefix, q: node}, remaining[1:]) for node in nodes]
        return interp_univariate(q, nodes, vals)

    return qq_poly_to_zz(rec({}, param_indices))


def det_by_interpolation(matrix, bounds: dict | None = None, recheck: bool = True) -> MPoly:
    """Exact determinant of a matrix with entries in ZZ[parameters].

    Per-parameter degree bounds may be supplied; by default each bound is
    the sum over rows of the largest entry degree in that row (rigorous,
    since every permutation product takes one entry per row).  A fresh
    evaluation point re-checks the reconstruction; a mismatch raises
    InsufficientBound.
    """
    rows = matrix.rows if isinstance(matrix, ExactMatrix) else matrix
    n = len(rows)
    norm = [[e if isinstance(e, MPoly) else MPoly.constant(e, ZZ) for e in row] for row in rows]
    used: set[int] = set()
    for row in norm:
        for e in row:
            used |= e.support_indices()
    bad = used - set(PARAMS)
    if bad:
        raise ValueError(f"entries involve non-parameter variables {[VAR_NAMES[i] for i in sorted(bad)]}")
    params = sorted(used)
    if not params:
        return MPoly.constant(det_modular_crt([[e.constant_value() for e in row] for row in norm]), ZZ)
    if bounds is None:
        bounds = {q: sum(max(e.degree((q,)) for e in row) for row in norm) for q in params}
    else:
        bounds = {q: bounds[q] for q in params}

    def evaluate(assignment: dict) -> int:
        inst = [[e.subst(assignment).constant_value() for e in row] for row in norm]
        return det_modular_crt(inst)

    result = interp_grid(params, bounds, evaluate)
    if recheck:
        fresh = {q: max(abs(x) for x in interp_nodes(bounds[q] + 1)) + 1 + k
                 for k, q in enumerate(params)}
        direct = evaluate(fresh)
        via_poly = result.subst(fresh)
        if via_poly.constant_value() != direct:
            raise InsufficientBound("determinant re-check at a fresh point failed; raise the degree bounds")
    return result


def det_auto(matrix):
    """Strategy dispatch: scalar ints -> CRT, parameters -> interpolation,
    small fully-symbolic -> fraction-free."""
    rows = matrix.rows if isinstance(matrix, ExactMatrix) else matrix
    flat = [e for row in rows for e in row]
    if all(isinstance(e, int) for e in flat):
        return det_modular_crt(rows)
    polys = [e for e in flat if isinstance(e, MPoly)]
    used = set()
    for e in polys:
        used |= e.support_indices()
    if used <= set(PARAMS):
        return det_by_interpolation(rows)
    return det_fraction_free(rows)
