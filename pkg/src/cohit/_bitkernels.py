"""JIT-compiled kernels for bit-packed F_2 elimination.

Everything here manipulates matrices stored as 2-d uint64 arrays, 64 columns
per word, bit b of word w = column 64*w + b.  The central invariant of the
incremental reduced-row-echelon form maintained by `rref_insert`:

  * each stored row's lowest set bit is its pivot column,
  * every other pivot column is zero in every row (full reduction),

so reducing a fresh row against the current form touches each pivot at most
once (an XOR can only add support on non-pivot columns), and all XORs may
start at the pivot's word.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_U1 = np.uint64(1)
_U58 = np.uint64(58)
_UMAX = np.uint64(0xFFFFFFFFFFFFFFFF)
_DEBRUIJN = np.uint64(0x03F79D71B4CB0A89)

_DB_TABLE = np.zeros(64, dtype=np.int64)
for _i in range(64):
    _DB_TABLE[((0x03F79D71B4CB0A89 << _i) & 0xFFFFFFFFFFFFFFFF) >> 58] = _i


@njit(cache=True, inline="always")
def _ctz(x):
    # index of the lowest set bit of a nonzero uint64 (de Bruijn multiply)
    return _DB_TABLE[((x & (~x + _U1)) * _DEBRUIJN) >> _U58]


@njit(cache=True)
def rref_insert(E, nrows, row, row_of_pivot, pivot_of_row):
    """Reduce `row` (scratch, clobbered) against the RREF in E[:nrows] and, if
    independent, insert it with back-substitution.  Returns the new row count.
    """
    n_words = row.shape[0]
    w = 0
    while w < n_words:
        x = row[w]
        while x != np.uint64(0):
            b = _ctz(x)
            col = (w << 6) + b
            r = row_of_pivot[col]
            if r >= 0:
                for ww in range(w, n_words):
                    row[ww] ^= E[r, ww]
                if b == 63:
                    x = np.uint64(0)
                else:
                    x = row[w] & (_UMAX << np.uint64(b + 1))
            else:
                x &= x - _U1
        w += 1
    p = -1
    for ww in range(n_words):
        if row[ww] != np.uint64(0):
            p = (ww << 6) + _ctz(row[ww])
            break
    if p < 0:
        return nrows
    pw = p >> 6
    pb = np.uint64(p & 63)
    for r in range(nrows):
        if (E[r, pw] >> pb) & _U1:
            for ww in range(pw, n_words):
                E[r, ww] ^= row[ww]
    E[nrows, :] = row
    row_of_pivot[p] = nrows
    pivot_of_row[nrows] = p
    return nrows + 1


@njit(cache=True)
def rref_insert_block(E, nrows, rows, row_of_pivot, pivot_of_row, scratch):
    for idx in range(rows.shape[0]):
        scratch[:] = rows[idx, :]
        nrows = rref_insert(E, nrows, scratch, row_of_pivot, pivot_of_row)
    return nrows


@njit(cache=True, inline="always")
def monomial_rank(g, k, d, C):
    # position of the exponent vector g (of degree d) in the descending
    # lexicographic list of all degree-d monomials in k variables; counts the
    # vectors strictly greater via a prefix (hockey-stick) binomial sum
    r = 0
    rem = d
    for t in range(k - 1):
        e = g[t]
        rr = k - 1 - t
        n = rem - e - 1 + rr
        if n >= rr:
            r += C[n, rr]
        rem -= e
    return r


@njit(cache=True)
def add_sq_row(row, e, i, k, d, C, g, chos):
    """Toggle into `row` the degree-d targets of Sq^i on the monomial with
    exponents e (degree d-i).  A term survives mod 2 iff every per-variable
    part i_t is a submask of e_t (Lucas); parts are enumerated by descending
    submask iteration with remaining-weight pruning.
    """
    if k == 1:
        if (i & ~e[0]) == 0:
            row[0] ^= _U1
        return
    suf = 0
    for t in range(k - 1, 0, -1):
        suf += e[t]
    # cand[t]: submask of e[t] still to try at level t (-1 = exhausted)
    cand = np.empty(k, np.int64)
    remv = np.empty(k, np.int64)
    sufs = np.empty(k + 1, np.int64)
    sufs[k] = 0
    for t in range(k - 1, -1, -1):
        sufs[t] = sufs[t + 1] + e[t]
    t = 0
    cand[0] = e[0]
    remv[0] = i
    while t >= 0:
        s = cand[t]
        if s < 0:
            t -= 1
            if t >= 0:
                s2 = cand[t]
                cand[t] = ((s2 - 1) & e[t]) if s2 > 0 else -1
            continue
        rem = remv[t]
        if s > rem or rem - s > sufs[t + 1]:
            cand[t] = ((s - 1) & e[t]) if s > 0 else -1
            continue
        if t == k - 2:
            last = rem - s
            if (last & ~e[k - 1]) == 0:
                chos[t] = s
                for u in range(k - 1):
                    g[u] = e[u] + chos[u]
                g[k - 1] = e[k - 1] + last
                col = monomial_rank(g, k, d, C)
                row[col >> 6] ^= _U1 << np.uint64(col & 63)
            cand[t] = ((s - 1) & e[t]) if s > 0 else -1
        else:
            chos[t] = s
            remv[t + 1] = rem - s
            t += 1
            cand[t] = e[t]
    return


@njit(cache=True)
def hit_insert_generators(E, nrows, row_of_pivot, pivot_of_row, mons, i, d, C,
                          scratch):
    """Insert the rows {Sq^i(m) : m in mons} into the RREF, never
    materializing the generator matrix."""
    k = mons.shape[1]
    g = np.empty(k, np.int64)
    chos = np.empty(k, np.int64)
    e = np.empty(k, np.int64)
    for idx in range(mons.shape[0]):
        scratch[:] = np.uint64(0)
        for u in range(k):
            e[u] = mons[idx, u]
        add_sq_row(scratch, e, i, k, d, C, g, chos)
        nrows = rref_insert(E, nrows, scratch, row_of_pivot, pivot_of_row)
    return nrows
