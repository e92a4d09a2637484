"""Degree-by-degree solution of the hit problem for P_k.

For each (k, d) this module computes the subspace of degree-d polynomials
that are sums Sq^i(g) with i > 0 ("hit" elements), a canonical basis of the
quotient Q = (P_k)_d / hit, the reduction of arbitrary polynomials into that
basis, and the degree-halving homomorphism on quotients.

Only the squares Sq^(2^j) are used to span the hit space: every Sq^i is a
composite of these (decomposability), so the span is unchanged.  Tests check
this against a generator set running over all i.

The canonical quotient basis is "the monomials at non-pivot columns of the
reduced echelon form of the hit space", under the global descending
lexicographic monomial order.  It need not coincide term-by-term with the
admissible-monomial bases in the literature; dimensions and class identities
are order-independent.
"""

from __future__ import annotations

import math
import os
import struct
import threading
from typing import Sequence

import numpy as np

from . import _bitkernels as _bk
from . import config, gf2, poly

ORDER_TAG = b"desclex-v1"
_CACHE_VERSION = 1
_HEADER = struct.Struct("<4sHHIII16s")
_MAGIC = b"COHI"

_memo: dict[tuple[int, int], "DegreeBasis"] = {}
_memo_lock = threading.Lock()
_key_locks: dict[tuple[int, int], threading.Lock] = {}
_cache_dir: str | None = None


def set_cache_dir(path: str | None) -> None:
    """Enable (or disable, with None) the on-disk echelon-form cache.  The
    cache is an optimization only: results are byte-identical either way."""
    global _cache_dir
    _cache_dir = path
    if path is not None:
        os.makedirs(path, exist_ok=True)


class DegreeBasis:
    """Everything about one degree of the quotient QP_k.

    Fields: k, d, `hit_space` (canonical echelon form over the degree-d
    monomial basis), `representatives` (the non-pivot-column monomials, in
    canonical order) and `dim` = len(representatives).
    """

    __slots__ = ("k", "d", "hit_space", "monomials", "rep_indices",
                 "representatives", "dim")

    def __init__(self, k: int, d: int, hit_space: gf2.EchelonForm):
        self.k = k
        self.d = d
        self.hit_space = hit_space
        self.monomials = poly.enumerate_monomials(k, d)
        pivset = set(hit_space.pivot_cols)
        self.rep_indices = [c for c in range(len(self.monomials))
                            if c not in pivset]
        self.representatives = [self.monomials[c] for c in self.rep_indices]
        self.dim = len(self.representatives)

    def monomial_vector(self, f: poly.Polynomial) -> int:
        """f as a bit-vector over the degree-d monomial basis."""
        if f.k != self.k:
            raise ValueError("variable count mismatch")
        v = 0
        for t in f.terms:
            if t.degree != self.d:
                raise ValueError(
                    f"term of degree {t.degree} in a degree-{self.d} basis")
            v |= 1 << poly.monomial_index(self.k, self.d, t.exponents)
        return v

    def reduce(self, f: poly.Polynomial) -> int:
        """Coordinates of the class [f] over `representatives` (bit i =
        coefficient of representatives[i]); 0 iff f is hit."""
        residue, _ = self.hit_space.reduce_vector(self.monomial_vector(f))
        coords = 0
        for i, c in enumerate(self.rep_indices):
            if (residue >> c) & 1:
                coords |= 1 << i
        return coords

    def coords_to_polynomial(self, coords: int) -> poly.Polynomial:
        """The canonical representative polynomial of a coordinate vector."""
        if coords < 0 or coords >> self.dim:
            raise ValueError("coordinate vector does not fit the basis")
        terms = [self.representatives[i] for i in range(self.dim)
                 if (coords >> i) & 1]
        return poly.Polynomial(self.k, terms)

    def __repr__(self) -> str:
        return f"DegreeBasis(k={self.k}, d={self.d}, dim={self.dim})"


def _binom_table(max_n: int, max_r: int = 8) -> np.ndarray:
    C = np.zeros((max_n + 1, max_r), dtype=np.int64)
    for n in range(max_n + 1):
        C[n, 0] = 1
        for r in range(1, min(n, max_r - 1) + 1):
            C[n, r] = C[n - 1, r - 1] + C[n - 1, r]
    return C


def _build_hit_space(k: int, d: int) -> gf2.EchelonForm:
    cols = poly.monomial_count(k, d)
    n_words = max(1, (cols + 63) // 64)
    E = np.zeros((max(1, cols), n_words), dtype=np.uint64)
    row_of_pivot = np.full(max(1, cols), -1, dtype=np.int64)
    pivot_of_row = np.full(max(1, cols), -1, dtype=np.int64)
    scratch = np.zeros(n_words, dtype=np.uint64)
    C = _binom_table(d + k + 8)
    nrows = 0
    j = 1
    while j <= d:
        mons = np.array(poly.exponent_tuples(k, d - j), dtype=np.int64)
        mons = mons.reshape(-1, k)
        nrows = _bk.hit_insert_generators(
            E, nrows, row_of_pivot, pivot_of_row, mons, j, d, C, scratch)
        j *= 2
    order = np.argsort(pivot_of_row[:nrows], kind="stable")
    data = np.ascontiguousarray(E[:nrows][order])
    pivots = [int(pivot_of_row[r]) for r in order]
    return gf2.EchelonForm(gf2.BitMatrix(data, cols), pivots)


def _cache_path(k: int, d: int) -> str:
    assert _cache_dir is not None
    tag = ORDER_TAG.decode()
    return os.path.join(_cache_dir, f"hit-k{k}-d{d}-{tag}.bin")


def _disk_store(k: int, d: int, ef: gf2.EchelonForm) -> None:
    header = _HEADER.pack(_MAGIC, _CACHE_VERSION, k, d, ef.rank,
                          ef.matrix.cols, ORDER_TAG.ljust(16, b"\0"))
    body = ef.matrix.data.astype("<u8", copy=False).tobytes()
    pivots = np.asarray(ef.pivot_cols, dtype="<u4").tobytes()
    path = _cache_path(k, d)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(header)
        fh.write(body)
        fh.write(pivots)
    os.replace(tmp, path)


def _disk_load(k: int, d: int) -> gf2.EchelonForm | None:
    path = _cache_path(k, d)
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError:
        return None
    if len(raw) < _HEADER.size:
        return None
    magic, version, fk, fd, rank, cols, tag = _HEADER.unpack_from(raw)
    if (magic != _MAGIC or version != _CACHE_VERSION or fk != k or fd != d
            or tag.rstrip(b"\0") != ORDER_TAG):
        return None
    n_words = max(1, (cols + 63) // 64)
    need = _HEADER.size + rank * n_words * 8 + rank * 4
    if len(raw) != need:
        return None
    data = np.frombuffer(raw, dtype="<u8", count=rank * n_words,
                         offset=_HEADER.size).reshape(rank, n_words)
    pivots = np.frombuffer(raw, dtype="<u4", count=rank,
                           offset=_HEADER.size + rank * n_words * 8)
    return gf2.EchelonForm(
        gf2.BitMatrix(np.ascontiguousarray(data).astype(np.uint64), cols),
        [int(p) for p in pivots])


def hit_space(k: int, d: int) -> gf2.EchelonForm:
    """Canonical echelon form whose row space is the degree-d hit subspace,
    spanned by Sq^(2^j)(m) over 2^j <= d and monomials m of degree d - 2^j."""
    return qp_basis(k, d).hit_space


def qp_basis(k: int, d: int) -> DegreeBasis:
    """The memoized DegreeBasis for (k, d)."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    config.check_k(k)
    config.check_degree(d)
    key = (k, d)
    with _memo_lock:
        hit = _memo.get(key)
        if hit is not None:
            return hit
        lock = _key_locks.setdefault(key, threading.Lock())
    with lock:
        with _memo_lock:
            hit = _memo.get(key)
            if hit is not None:
                return hit
        ef = _disk_load(k, d) if _cache_dir is not None else None
        if ef is None:
            ef = _build_hit_space(k, d)
            if _cache_dir is not None:
                _disk_store(k, d, ef)
        basis = DegreeBasis(k, d, ef)
        with _memo_lock:
            _memo[key] = basis
        return basis


def clear_memo() -> None:
    """Drop all in-process DegreeBasis caches (mainly for tests)."""
    with _memo_lock:
        _memo.clear()
        _key_locks.clear()


def reduce(f: poly.Polynomial, b: DegreeBasis) -> int:
    """Coordinates of [f] in b's representative basis (bit-vector)."""
    return b.reduce(f)


def is_hit(f: poly.Polynomial) -> bool:
    """True iff f is a sum of positive Steenrod squares."""
    if not f.terms:
        return True
    return qp_basis(f.k, f.degree).reduce(f) == 0


def kameko_psi(f: poly.Polynomial) -> poly.Polynomial:
    """Monomial-wise degree-halving map: x_1...x_k y^2 -> y, other monomials
    to zero; on degree 2m+k it lands in degree m."""
    k = f.k
    if f.terms:
        d = f.degree
        if (d - k) % 2 != 0:
            raise ValueError(f"degree {d} is not of the form 2m+{k}")
    out = []
    for t in f.terms:
        if all(e % 2 == 1 for e in t.exponents):
            out.append(poly.Monomial(tuple((e - 1) // 2 for e in t.exponents)))
    return poly.Polynomial(k, out)


def kameko_matrix(k: int, m: int) -> gf2.BitMatrix:
    """Matrix of the induced halving map (QP_k)_{2m+k} -> (QP_k)_m on
    representative coordinates: column j = reduce(kameko_psi(rep_j)).
    Square and invertible exactly when mu(2m+k) = k."""
    if m < 0:
        raise ValueError("m must be non-negative")
    dom = qp_basis(k, 2 * m + k)
    cod = qp_basis(k, m)
    rows = []
    for rep in dom.representatives:
        image = kameko_psi(poly.Polynomial(k, [rep]))
        rows.append(cod.reduce(image))
    # rows are indexed by domain representatives; the operator matrix has
    # them as columns
    return gf2.BitMatrix.from_int_rows(rows, cod.dim).transpose()


def kameko_kernel(k: int, d: int) -> list[int]:
    """Basis (coordinate vectors in qp_basis(k, d)) of the kernel of the
    induced halving map out of degree d.

    Degrees below k hold no monomial divisible by x_1...x_k, so the map
    vanishes there and the kernel is the whole space.
    """
    if (d - k) % 2 != 0:
        raise ValueError(f"degree {d} is not of the form 2m+{k}")
    b = qp_basis(k, d)
    if d < k:
        return [1 << i for i in range(b.dim)]
    return gf2.kernel_basis(kameko_matrix(k, (d - k) // 2))


def qp_dim(k: int, d: int) -> int:
    return qp_basis(k, d).dim
