"""Dense determinants over GF(p): the hot numeric kernel.

Everything expensive in this package funnels into "determinant of an
integer matrix modulo one prime".  Two implementations are provided:

* numba ``@njit`` kernels (default): a direct path for p < 2**31 where
  int64 products cannot overflow, and a Montgomery-arithmetic path for
  odd primes up to 2**62 (the 128-bit products are emulated with 32-bit
  limbs, which is why entries stay in uint64).

* a pure-numpy fallback, selected by setting ``EIGENDISC_NO_NUMBA=1`` in
  the environment (or automatically when numba is unavailable): row-level
  vectorized Gaussian elimination, int64 for small primes and object
  dtype (Python ints) beyond.

Both paths are exact and return identical residues; ``benchmarks/``
contains a script comparing them.
"""

from __future__ import annotations

import os

import numpy as np

NO_NUMBA_ENV = "EIGENDISC_NO_NUMBA"

_SMALL_LIMIT = 1 << 31


def _env_disabled() -> bool:
    return os.environ.get(NO_NUMBA_ENV, "").strip() not in ("", "0")


try:  # pragma: no cover - import guard
    from numba import njit, uint64

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _env_disabled()


if HAVE_NUMBA:

    @njit(cache=True)
    def _det_small_numba(a, p):
        """Determinant mod p for p < 2**31; entries of `a` reduced mod p."""
        n = a.shape[0]
        det = uint64(1)
        neg = False
        for k in range(n):
            piv = -1
            for r in range(k, n):
                if a[r, k] != uint64(0):
                    piv = r
                    break
            if piv < 0:
                return uint64(0)
            if piv != k:
                for c in range(k, n):
                    tmp = a[k, c]
                    a[k, c] = a[piv, c]
                    a[piv, c] = tmp
                neg = not neg
            akk = a[k, k]
            det = det * akk % p
            # inverse by Fermat
            inv = uint64(1)
            base = akk
            e = p - uint64(2)
            while e:
                if e & uint64(1):
                    inv = inv * base % p
                base = base * base % p
                e >>= uint64(1)
            for r in range(k + 1, n):
                ark = a[r, k]
                if ark == uint64(0):
                    continue
                f = ark * inv % p
                for c in range(k, n):
                    y = f * a[k, c] % p
                    x = a[r, c]
                    a[r, c] = x - y if x >= y else x + p - y
        if neg and det != uint64(0):
            det = p - det
        return det

    @njit(cache=True, inline="always")
    def _montmul(a, b, p, pinv):
        """Montgomery product (a*b/2**64 mod p) for odd p < 2**62."""
        m32 = uint64(0xFFFFFFFF)
        ah = a >> uint64(32)
        al = a & m32
        bh = b >> uint64(32)
        bl = b & m32
        ll = al * bl
        lh = al * bh
        hl = ah * bl
        cross = lh + (ll >> uint64(32)) + (hl & m32)
        t_hi = ah * bh + (hl >> uint64(32)) + (cross >> uint64(32))
        t_lo = (cross << uint64(32)) | (ll & m32)
        m = t_lo * pinv
        mh = m >> uint64(32)
        ml = m & m32
        ph = p >> uint64(32)
        pl = p & m32
        ll2 = ml * pl
        lh2 = ml * ph
        hl2 = mh * pl
        cross2 = lh2 + (ll2 >> uint64(32)) + (hl2 & m32)
        mp_hi = mh * ph + (hl2 >> uint64(32)) + (cross2 >> uint64(32))
        carry = uint64(1) if t_lo != uint64(0) else uint64(0)
        r = t_hi + mp_hi + carry
        if r >= p:
            r -= p
        return r

    @njit(cache=True)
    def _det_mont_numba(a, p, pinv, r2):
        """Determinant mod odd p < 2**62; entries reduced mod p (plain form)."""
        n = a.shape[0]
        # convert to Montgomery form
        for r in range(n):
            for c in range(n):
                a[r, c] = _montmul(a[r, c], r2, p, pinv)
        one_m = _montmul(uint64(1), r2, p, pinv)
        det = one_m
        neg = False
        for k in range(n):
            piv = -1
            for r in range(k, n):
                if a[r, k] != uint64(0):
                    piv = r
                    break
            if piv < 0:
                return uint64(0)
            if piv != k:
                for c in range(k, n):
                    tmp = a[k, c]
                    a[k, c] = a[piv, c]
                    a[piv, c] = tmp
                neg = not neg
            akk = a[k, k]
            det = _montmul(det, akk, p, pinv)
            # inverse by Fermat, staying in Montgomery form
            inv = one_m
            base = akk
            e = p - uint64(2)
            while e:
                if e & uint64(1):
                    inv = _montmul(inv, base, p, pinv)
                base = _montmul(base, base, p, pinv)
                e >>= uint64(1)
            for r in range(k + 1, n):
                ark = a[r, k]
                if ark == uint64(0):
                    continue
                f = _montmul(ark, inv, p, pinv)
                for c in range(k, n):
                    y = _montmul(f, a[k, c], p, pinv)
                    x = a[r, c]
                    a[r, c] = x - y if x >= y else x + p - y
        det = _montmul(det, uint64(1), p, pinv)  # leave Montgomery form
        if neg and det != uint64(0):
            det = p - det
        return det


def _det_numpy(a, p: int) -> int:
    """Pure-numpy fallback: row-vectorized elimination.

    int64 arithmetic when products fit (p < 2**31), object dtype (Python
    ints) otherwise.  Exact in both cases.
    """
    n = a.shape[0]
    if p < _SMALL_LIMIT:
        m = a.astype(np.int64)
    else:
        m = a.astype(object)
    det = 1
    neg = False
    for k in range(n):
        col = m[k:, k]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            return 0
        piv = k + int(nz[0])
        if piv != k:
            m[[k, piv], k:] = m[[piv, k], k:]
            neg = not neg
        akk = int(m[k, k])
        det = det * akk % p
        inv = pow(akk, -1, p)
        rows = m[k + 1:, k:]
        if rows.size:
            factors = rows[:, 0] * inv % p
            rows -= factors[:, None] * m[k, k:][None, :]
            rows %= p
            m[k + 1:, k:] = rows
    if neg:
        det = (-det) % p
    return int(det)


def reduce_matrix_mod(rows, p: int) -> np.ndarray:
    """Reduce a matrix of Python ints mod p into a uint64 array."""
    n = len(rows)
    ncols = len(rows[0]) if n else 0
    try:
        arr = np.asarray(rows, dtype=np.int64)
    except OverflowError:
        out = np.empty((n, ncols), dtype=np.uint64)
        for i, row in enumerate(rows):
            for j, e in enumerate(row):
                out[i, j] = e % p
        return out
    return (arr % p).astype(np.uint64)


def _as_reduced(rows, p: int) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        a = (rows % p).astype(np.uint64)
    else:
        a = reduce_matrix_mod(rows, p)
    if a.size == 0:
        a = a.reshape(0, 0)
    return a


def det_mod(rows, p: int) -> int:
    """Determinant of a square integer matrix modulo an odd prime p.

    `rows` may be a list of lists of Python ints or an integer ndarray.
    """
    a = _as_reduced(rows, p)
    if a.shape[0] != a.shape[1]:
        raise ValueError("determinant of a non-square matrix")
    if a.shape[0] == 0:
        return 1
    if USE_NUMBA:
        if p < _SMALL_LIMIT:
            return int(_det_small_numba(a.copy(), np.uint64(p)))
        pinv = (-pow(p, -1, 1 << 64)) % (1 << 64)
        r2 = (1 << 128) % p
        return int(_det_mont_numba(a.copy(), np.uint64(p), np.uint64(pinv), np.uint64(r2)))
    return _det_numpy(a, p)


def det_mod_numpy(rows, p: int) -> int:
    """Fallback entry point, exposed for tests and benchmarking."""
    a = _as_reduced(rows, p)
    if a.shape[0] == 0:
        return 1
    return _det_numpy(a, p)
