"""Independent reference implementations used as oracles by the tests.

Everything here is deliberately naive and structurally different from the
library: plain-integer Gaussian elimination, closed-form binomial expansion
of the total squaring operation, dynamic-programming minimum spike counts,
brute-force span enumeration, and a rightmost-first rewriting strategy for
the lambda algebra.  Slow is fine; independent is the point.
"""

from __future__ import annotations

import math
from functools import lru_cache

from cohit import poly


# ---------------------------------------------------------------------------
# GF(2) linear algebra on plain ints

def naive_rref(rows: list[int]) -> list[int]:
    """Reduced row echelon form with lowest-set-bit pivots, rows sorted by
    pivot.  Matches the library's canonical form for equal row spaces."""
    work = [r for r in rows if r]
    done: list[int] = []
    col = 0
    while work:
        pivot_rows = [r for r in work if r & (1 << col)]
        if pivot_rows:
            p = pivot_rows[0]
            work = [r ^ p if r & (1 << col) else r for r in work if r != p]
            work = [r for r in work if r]
            done = [r ^ p if r & (1 << col) else r for r in done]
            done.append(p)
        col += 1
    return sorted(done, key=lambda r: r & -r)


def naive_rank(rows: list[int]) -> int:
    return len(naive_rref(rows))


def span_members(rows: list[int]) -> set[int]:
    """Every element of the row span (use only for small ranks)."""
    out = {0}
    for r in rows:
        out |= {x ^ r for x in out}
    return out


def naive_kernel_members(rows: list[int], cols: int) -> set[int]:
    """Every kernel vector of the matrix, by brute force over 2^cols."""
    assert cols <= 16
    out = set()
    for v in range(1 << cols):
        if all(bin(r & v).count("1") % 2 == 0 for r in rows):
            out.add(v)
    return out


# ---------------------------------------------------------------------------
# arithmetic

def naive_binom_mod2(a: int, b: int) -> int:
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b) % 2


@lru_cache(maxsize=None)
def naive_mu(n: int) -> int:
    """Minimum number of terms 2^a - 1 (a >= 1) summing to n, by DP."""
    if n == 0:
        return 0
    best = n  # n copies of 1 always work
    a = 1
    while (1 << a) - 1 <= n:
        best = min(best, 1 + naive_mu(n - ((1 << a) - 1)))
        a += 1
    return best


# ---------------------------------------------------------------------------
# Steenrod squares via the multiplicative total square

def _dict_mul(f: dict, g: dict, k: int) -> dict:
    out: dict = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = (out.get(e, 0) + c1 * c2) % 2
    return {e: c for e, c in out.items() if c}


def total_square_monomial(m: poly.Monomial) -> dict:
    """The full total square of a monomial: product over variables of
    (x_t + x_t^2)^{e_t}, computed by the closed form
    (x + x^2)^e = sum_j C(e, j) x^{e+j}."""
    k = m.k
    acc = {tuple([0] * k): 1}
    for t, e in enumerate(m.exponents):
        factor: dict = {}
        for j in range(e + 1):
            if math.comb(e, j) % 2:
                exps = [0] * k
                exps[t] = e + j
                factor[tuple(exps)] = 1
        acc = _dict_mul(acc, factor, k)
    return acc


def naive_sq(i: int, f: poly.Polynomial) -> poly.Polynomial:
    """Sq^i via the degree-(d+i) component of the total square."""
    if i < 0:
        raise ValueError("negative square")
    terms: set = set()
    for m in f.terms:
        d = m.degree
        for e, c in total_square_monomial(m).items():
            if sum(e) == d + i and c:
                terms ^= {e}
    return poly.Polynomial(f.k, [poly.Monomial(e) for e in terms])


def naive_hit_vectors(k: int, d: int) -> list[int]:
    """Spanning vectors of the hit subspace in degree d, taking Sq^i for
    EVERY i >= 1 (not only two-powers), in the library's monomial order."""
    mons = poly.enumerate_monomials(k, d)
    index = {m.exponents: j for j, m in enumerate(mons)}
    vectors = []
    for i in range(1, d + 1):
        for src in poly.enumerate_monomials(k, d - i):
            image = naive_sq(i, poly.Polynomial(k, [src]))
            v = 0
            for m in image.terms:
                v |= 1 << index[m.exponents]
            if v:
                vectors.append(v)
    return vectors


# ---------------------------------------------------------------------------
# lambda algebra: rightmost-first normalization

def _pairs_naive(j: int, b: int) -> list[tuple[int, int]]:
    m = b - 2 * j - 1
    out = []
    for nu in range(m):
        if naive_binom_mod2(m - nu - 1, nu):
            out.append((j + m - nu, 2 * j + 1 + nu))
    return out


_rnf_cache: dict[tuple[int, ...], frozenset] = {}


def rightmost_normal_form(indices: tuple[int, ...]) -> frozenset:
    """Normal form rewriting the RIGHTMOST reducible pair first; agreement
    with the library's leftmost-first strategy is the confluence check."""
    cached = _rnf_cache.get(indices)
    if cached is not None:
        return cached
    pos = -1
    for p in range(len(indices) - 2, -1, -1):
        if indices[p + 1] > 2 * indices[p]:
            pos = p
            break
    if pos < 0:
        result = frozenset({indices})
    else:
        acc: frozenset = frozenset()
        for pair in _pairs_naive(indices[pos], indices[pos + 1]):
            child = indices[:pos] + pair + indices[pos + 2:]
            acc = acc ^ rightmost_normal_form(child)
        result = acc
    _rnf_cache[indices] = result
    return result
