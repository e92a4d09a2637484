"""The divided power algebra dual to P_k, its dualized Steenrod action,
primitive subspaces, and their coinvariants.

The degree-d divided monomials a_1^{(i_1)}...a_k^{(i_k)} are dual to the
degree-d monomials x^e, so they inherit the same canonical (descending
lexicographic) order and index; every dual computation is the transpose of
the corresponding polynomial-side matrix.  Defining the dual operations as
literal transposes makes the adjointness identities true by construction —
the closed divided-power formulas then serve as independent cross-checks.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import config, gf2, poly


@dataclass(frozen=True, order=True)
class DividedMonomial:
    """a_1^{(i_1)}...a_k^{(i_k)}, stored as the tuple of divided powers."""

    powers: tuple[int, ...]

    def __post_init__(self):
        if not self.powers or any(p < 0 for p in self.powers):
            raise ValueError("powers must be a non-empty tuple of non-negatives")

    @property
    def k(self) -> int:
        return len(self.powers)

    @property
    def degree(self) -> int:
        return sum(self.powers)

    def __str__(self) -> str:
        return format_divided_monomial(self)


class DualElement:
    """A finite F_2-sum of divided monomials."""

    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms: Iterable[DividedMonomial] = ()):
        config.check_k(k)
        tset = frozenset(terms)
        for t in tset:
            if t.k != k:
                raise ValueError("divided monomial variable count mismatch")
        self.k = k
        self.terms = tset

    @classmethod
    def zero(cls, k: int) -> "DualElement":
        return cls(k)

    @classmethod
    def from_powers(cls, k: int, rows: Iterable[Sequence[int]]) -> "DualElement":
        return cls(k, [DividedMonomial(tuple(r)) for r in rows])

    def __add__(self, other: "DualElement") -> "DualElement":
        if self.k != other.k:
            raise ValueError("variable count mismatch")
        return DualElement(self.k, self.terms ^ other.terms)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, DualElement) and self.k == other.k
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.k, self.terms))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_homogeneous(self) -> bool:
        return len({t.degree for t in self.terms}) <= 1

    @property
    def degree(self) -> int:
        degs = {t.degree for t in self.terms}
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError("degree of a non-homogeneous element")
        return degs.pop()

    def sorted_terms(self) -> list[DividedMonomial]:
        return sorted(self.terms, key=lambda m: m.powers, reverse=True)

    def __str__(self) -> str:
        return format_dual(self)

    def __repr__(self) -> str:
        return f"DualElement(k={self.k}, {format_dual(self)!r})"


def element_vector(q: DualElement, d: int) -> int:
    """q as a bit-vector over the degree-d divided-monomial basis."""
    v = 0
    for t in q.terms:
        if t.degree != d:
            raise ValueError(f"term of degree {t.degree} in degree {d}")
        v |= 1 << poly.monomial_index(q.k, d, t.powers)
    return v


def vector_element(k: int, d: int, v: int) -> DualElement:
    """Decode a bit-vector over the degree-d basis back to a DualElement."""
    tuples = poly.exponent_tuples(k, d)
    if v < 0 or v >> len(tuples):
        raise ValueError("vector does not fit the degree basis")
    out = []
    x = v
    while x:
        i = (x & -x).bit_length() - 1
        out.append(DividedMonomial(tuples[i]))
        x &= x - 1
    return DualElement(k, out)


def pairing(q: DualElement, f: poly.Polynomial) -> int:
    """Dual-basis pairing: the parity of the number of exponent vectors
    occurring in both q and f."""
    if q.k != f.k:
        raise ValueError("variable count mismatch")
    if q.terms and f.terms and q.degree != f.degree:
        raise ValueError("degree mismatch")
    qset = {t.powers for t in q.terms}
    fset = {t.exponents for t in f.terms}
    return len(qset & fset) & 1


_matrix_lock = threading.Lock()
_sq_rows_cache: dict[tuple[int, int, int], gf2.BitMatrix] = {}
_subst_rows_cache: dict[tuple, gf2.BitMatrix] = {}


def _sq_rows(k: int, r: int, d_src: int) -> gf2.BitMatrix:
    """Row j = bit-vector of sq(r, m_j) over the degree-(d_src+r) basis,
    m_j running over the degree-d_src monomials.  This matrix is exactly the
    transpose of the matrix of sq(r) in the monomial bases."""
    key = (k, r, d_src)
    with _matrix_lock:
        m = _sq_rows_cache.get(key)
    if m is not None:
        return m
    src = poly.exponent_tuples(k, d_src)
    cols = poly.monomial_count(k, d_src + r)
    rows = []
    for e in src:
        v = 0
        for t in poly._sq_targets(r, e):
            v ^= 1 << poly.monomial_index(k, d_src + r, t)
        rows.append(v)
    m = gf2.BitMatrix.from_int_rows(rows, cols)
    with _matrix_lock:
        _sq_rows_cache[key] = m
    return m


def sq_dual(r: int, q: DualElement) -> DualElement:
    """The adjoint of sq: <sq_dual(r, q), f> = <q, sq(r, f)>.  Computed by
    applying the transposed sq matrix to q's coordinate vector."""
    if r < 0:
        raise ValueError("negative dual square")
    if r == 0 or not q.terms:
        return q
    n = q.degree
    if r > n:
        raise ValueError(f"dual square {r} exceeds degree {n}")
    m = _sq_rows(q.k, r, n - r)
    out = m.mul_vector(element_vector(q, n))
    return vector_element(q.k, n - r, out)


def _subst_rows(s: poly.LinearSubstitution, d: int) -> gf2.BitMatrix:
    """Row j = bit-vector of substitute(s, m_j): the transpose of the
    substitution matrix on the degree-d monomial basis."""
    key = (s.k, d, tuple(s.coefficient_matrix()))
    with _matrix_lock:
        m = _subst_rows_cache.get(key)
    if m is not None:
        return m
    src = poly.exponent_tuples(s.k, d)
    cols = len(src)
    rows = []
    for e in src:
        image = poly.substitute(s, poly.Polynomial(s.k, [poly.Monomial(e)]))
        v = 0
        for t in image.terms:
            v ^= 1 << poly.monomial_index(s.k, d, t.exponents)
        rows.append(v)
    m = gf2.BitMatrix.from_int_rows(rows, cols)
    with _matrix_lock:
        _subst_rows_cache[key] = m
    return m


def dual_substitution(s: poly.LinearSubstitution, q: DualElement) -> DualElement:
    """The adjoint of substitute: <dual_substitution(s, q), f> =
    <q, substitute(s, f)>."""
    if s.k != q.k:
        raise ValueError("variable count mismatch")
    if not q.terms:
        return q
    d = q.degree
    m = _subst_rows(s, d)
    return vector_element(q.k, d, m.mul_vector(element_vector(q, d)))


def primitive_vectors(k: int, d: int) -> list[int]:
    """Coordinate vectors (over the degree-d divided-monomial basis) of a
    basis of the primitives: the joint kernel of every sq_dual(2^j, .) with
    2^j <= d.  The stacked constraint rows are the sq matrices' transposes,
    so this kernel is exactly the annihilator of the hit subspace."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    config.check_k(k)
    config.check_degree(d)
    cols = poly.monomial_count(k, d)
    blocks = []
    j = 1
    while j <= d:
        # row m of this block is sq(2^j, m) in degree-d coordinates, and
        # <sq(2^j, m), q> = 0 for all m is exactly sq_dual(2^j, q) = 0
        blocks.append(_sq_rows(k, j, d - j))
        j *= 2
    if not blocks:
        return [1 << i for i in range(cols)]
    stacked = np.concatenate([b.data for b in blocks], axis=0)
    return gf2.kernel_basis(gf2.BitMatrix(stacked, cols))


def primitives(k: int, d: int) -> list[DualElement]:
    """Basis of the primitive subspace of the degree-d dual: elements
    annihilated by every positive dual square."""
    return [vector_element(k, d, v) for v in primitive_vectors(k, d)]


def coinvariants(k: int, d: int) -> tuple[list[DualElement], int]:
    """Representatives and dimension of the coinvariant quotient of the
    degree-d primitives: primitives modulo the images of (dual generator +
    identity).  The primitive subspace is stable because the group action
    commutes with the squares.

    Representatives are the echelonized primitive basis rows at non-pivot
    coordinates of the relation space, so they are canonical for the global
    monomial order.
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    config.check_k(k)
    config.check_degree(d)
    vecs = primitive_vectors(k, d)
    cols = poly.monomial_count(k, d)
    ep = gf2.echelonize(gf2.BitMatrix.from_int_rows(vecs, cols))
    p = ep.rank
    if p == 0:
        return [], 0
    gens = poly.gl_generators(k)
    rel_rows = []
    for s in gens:
        m = _subst_rows(s, d)
        for r in range(p):
            b = ep.row_ints()[r]
            rel = m.mul_vector(b) ^ b
            residue, coeffs = ep.reduce_vector(rel)
            if residue:
                raise AssertionError(
                    "primitive subspace not stable under the dual action")
            rel_rows.append(coeffs)
    er = gf2.echelonize(gf2.BitMatrix.from_int_rows(rel_rows, p))
    pivset = set(er.pivot_cols)
    reps = [vector_element(k, d, ep.row_ints()[c])
            for c in range(p) if c not in pivset]
    return reps, p - er.rank


_DM_RE = re.compile(r"^a(\d+)\((\d+)\)$")


def parse_dual(text: str, k: int | None = None) -> DualElement:
    """Parse the textual grammar: element := monomial (" + " monomial)*,
    monomial := factor (" " factor)*, factor := "a" INDEX "(" POWER ")".
    Example: "a1(3) a2(7)".  The tokens "0" and "1" denote the zero element
    and the empty divided monomial."""
    text = text.strip()
    if not text:
        raise ValueError("empty dual-element text")
    chunks = text.split(" + ")
    parsed: list[dict[int, int] | None] = []
    max_index = 0
    for chunk in chunks:
        chunk = chunk.strip()
        if chunk == "0":
            parsed.append(None)
            continue
        if chunk == "1":
            parsed.append({})
            continue
        powers: dict[int, int] = {}
        for tok in chunk.split():
            m = _DM_RE.match(tok)
            if not m:
                raise ValueError(f"bad divided-monomial factor {tok!r}")
            idx = int(m.group(1))
            if idx < 1:
                raise ValueError(f"variable index must be >= 1 in {tok!r}")
            if idx in powers:
                raise ValueError(f"repeated variable a{idx} in {chunk!r}")
            powers[idx] = int(m.group(2))
            max_index = max(max_index, idx)
        parsed.append(powers)
    if k is None:
        k = max(max_index, 1)
    if max_index > k:
        raise ValueError(f"variable index {max_index} exceeds k={k}")
    acc: set[tuple[int, ...]] = set()
    for powers in parsed:
        if powers is None:
            continue
        t = tuple(powers.get(i, 0) for i in range(1, k + 1))
        acc.symmetric_difference_update((t,))
    return DualElement(k, [DividedMonomial(t) for t in acc])


def format_divided_monomial(m: DividedMonomial) -> str:
    parts = [f"a{i}({p})" for i, p in enumerate(m.powers, start=1) if p > 0]
    return " ".join(parts) if parts else "1"


def format_dual(q: DualElement) -> str:
    if not q.terms:
        return "0"
    return " + ".join(format_divided_monomial(m) for m in q.sorted_terms())
