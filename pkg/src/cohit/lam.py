"""The mod-2 lambda algebra: admissible normal forms, the differential,
bigraded homology, the halving endomorphism, and a registry of named classes.

A monomial is a finite sequence of generator indices (i_1, ..., i_s); it is
admissible when every adjacent pair satisfies i_{j+1} <= 2 i_j.  A pair
lambda_j lambda_{2j+1+m} with m >= 0 rewrites to

    sum over nu >= 0 of binom(m - nu - 1, nu) lambda_{j+m-nu} lambda_{2j+1+nu}

(the binomial vanishing unless 0 <= nu <= m - nu - 1; m = 0 gives the empty
sum, so lambda_j lambda_{2j+1} = 0).  Repeated leftmost rewriting terminates:
each step strictly decreases the sequence in right-to-left lexicographic
order, because every replacement pair has a strictly larger second index.

The differential of a generator is

    delta(lambda_i) = sum over nu >= 0 of binom(i-nu-1, nu+1)
                      lambda_{i-nu-1} lambda_nu,

extended to products by the Leibniz rule (signs vanish mod 2) and then
normalized.  The two indices sum to i - 1, so delta maps bidegree (s, w) to
(s+1, w-1); delta of lambda_{2^i - 1} is zero (every binomial there is even),
and delta respects the relations — both facts are exercised by tests rather
than assumed.  Homology in bidegree (s, w) is Ext_A^{s, s+w} over the
Steenrod algebra.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from . import config, gf2
from .poly import binom_mod2


@dataclass(frozen=True, order=True)
class LambdaMonomial:
    """A product of lambda generators, stored as the index sequence."""

    indices: tuple[int, ...]

    def __post_init__(self):
        if any(i < 0 for i in self.indices):
            raise ValueError("generator indices must be non-negative")

    @property
    def s(self) -> int:
        return len(self.indices)

    @property
    def w(self) -> int:
        return sum(self.indices)

    def is_admissible(self) -> bool:
        ix = self.indices
        return all(ix[j + 1] <= 2 * ix[j] for j in range(len(ix) - 1))

    def __str__(self) -> str:
        return format_lambda_monomial(self)


class LambdaElement:
    """A finite F_2-sum of lambda monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[LambdaMonomial] = ()):
        self.terms = frozenset(terms)

    @classmethod
    def zero(cls) -> "LambdaElement":
        return cls()

    @classmethod
    def from_indices(cls, rows: Iterable[Sequence[int]]) -> "LambdaElement":
        return cls([LambdaMonomial(tuple(r)) for r in rows])

    def __add__(self, other: "LambdaElement") -> "LambdaElement":
        return LambdaElement(self.terms ^ other.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LambdaElement) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def bidegree(self) -> tuple[int, int]:
        """(s, w) of a homogeneous element; the zero element has none."""
        bids = {(t.s, t.w) for t in self.terms}
        if len(bids) != 1:
            raise ValueError("element is empty or not bihomogeneous")
        return bids.pop()

    def concat(self, other: "LambdaElement") -> "LambdaElement":
        """Raw product in the free algebra (no normalization)."""
        return LambdaElement(
            [LambdaMonomial(a.indices + b.indices)
             for a in self.terms for b in other.terms])

    def sorted_terms(self) -> list[LambdaMonomial]:
        return sorted(self.terms, key=lambda m: m.indices)

    def __str__(self) -> str:
        return format_lambda(self)

    def __repr__(self) -> str:
        return f"LambdaElement({format_lambda(self)!r})"


# ---------------------------------------------------------------------------
# normal form

@lru_cache(maxsize=None)
def _pair_rewrite(j: int, b: int) -> tuple[tuple[int, int], ...]:
    """Replacement pairs for the inadmissible pair (j, b), b = 2j+1+m."""
    m = b - 2 * j - 1
    out = []
    for nu in range((m - 1) // 2 + 1):
        if binom_mod2(m - nu - 1, nu):
            out.append((j + m - nu, 2 * j + 1 + nu))
    return tuple(out)


_NF: dict[tuple[int, ...], frozenset[tuple[int, ...]]] = {}


def _first_reducible(ix: tuple[int, ...]) -> int:
    for p in range(len(ix) - 1):
        if ix[p + 1] > 2 * ix[p]:
            return p
    return -1


def _normal_form(mono: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
    """Normal form of one monomial as a set of admissible index tuples.
    Iterative post-order over the rewrite dag, memoized globally."""
    done = _NF.get(mono)
    if done is not None:
        return done
    stack = [mono]
    while stack:
        m = stack[-1]
        if m in _NF:
            stack.pop()
            continue
        p = _first_reducible(m)
        if p < 0:
            _NF[m] = frozenset((m,))
            stack.pop()
            continue
        children = [m[:p] + pair + m[p + 2:]
                    for pair in _pair_rewrite(m[p], m[p + 1])]
        missing = [c for c in children if c not in _NF]
        if missing:
            stack.extend(missing)
            continue
        acc: frozenset[tuple[int, ...]] = frozenset()
        for c in children:
            acc = acc ^ _NF[c]
        _NF[m] = acc
        stack.pop()
    return _NF[mono]


def normalize(e: LambdaElement) -> LambdaElement:
    """Admissible normal form, equal to e in the algebra; idempotent."""
    acc: frozenset[tuple[int, ...]] = frozenset()
    for t in e.terms:
        acc = acc ^ _normal_form(t.indices)
    return LambdaElement([LambdaMonomial(ix) for ix in acc])


# ---------------------------------------------------------------------------
# differential

@lru_cache(maxsize=None)
def _delta_generator(i: int) -> tuple[tuple[int, int], ...]:
    # index pairs of delta(lambda_i); both entries sum to i-1, so the
    # bidegree shift is (s, w) -> (s+1, w-1)
    out = []
    for nu in range((i - 2) // 2 + 1):
        if binom_mod2(i - nu - 1, nu + 1):
            out.append((i - nu - 1, nu))
    return tuple(out)


def differential(e: LambdaElement) -> LambdaElement:
    """The differential, extended over products by the Leibniz rule (no
    signs mod 2), returned in normal form."""
    acc: set[tuple[int, ...]] = set()
    for t in e.terms:
        ix = t.indices
        for pos in range(len(ix)):
            for pair in _delta_generator(ix[pos]):
                acc.symmetric_difference_update(
                    (ix[:pos] + pair + ix[pos + 1:],))
    out: frozenset[tuple[int, ...]] = frozenset()
    for m in acc:
        out = out ^ _normal_form(m)
    return LambdaElement([LambdaMonomial(ix) for ix in out])


# ---------------------------------------------------------------------------
# admissible bases and homology

@lru_cache(maxsize=None)
def _adm_tuples(s: int, w: int, bound: int) -> tuple[tuple[int, ...], ...]:
    # admissible tuples of length s, weight w, first index <= bound;
    # ascending lexicographic order
    if s == 0:
        return ((),) if w == 0 else ()
    out = []
    for i in range(min(w, bound) + 1):
        # the s-1 remaining indices are bounded by 2i, 4i, ...: their sum
        # cannot exceed (2^s - 2) * i
        if w - i > ((1 << s) - 2) * i:
            continue
        for rest in _adm_tuples(s - 1, w - i, 2 * i):
            out.append((i,) + rest)
    return tuple(out)


def admissible_basis(s: int, w: int) -> list[LambdaMonomial]:
    """All admissible monomials of length s and weight w, ascending
    lexicographic on index sequences."""
    if s < 0 or w < 0:
        raise ValueError("need s >= 0 and w >= 0")
    config.check_lambda(s, w)
    return [LambdaMonomial(t) for t in _adm_tuples(s, w, w)]


@dataclass
class HomologySummary:
    """Homology of the lambda algebra in one bidegree."""

    s: int
    w: int
    cycle_basis: list[LambdaElement]
    boundary_rank: int
    homology_dim: int
    homology_basis: list[LambdaElement]
    names: list[str | None]


class _HomologyData:
    __slots__ = ("s", "w", "basis", "index", "boundaries", "cycles",
                 "hom_vectors", "residues", "names")

    def __init__(self, s: int, w: int):
        self.s = s
        self.w = w
        self.basis = list(_adm_tuples(s, w, w))
        self.index = {t: i for i, t in enumerate(self.basis)}

        def vec(nf: Iterable[tuple[int, ...]]) -> int:
            v = 0
            for t in nf:
                v |= 1 << self.index[t]
            return v

        n = len(self.basis)
        # boundaries: images of delta from (s-1, w+1)
        rows_in = []
        if s >= 1:
            for src in _adm_tuples(s - 1, w + 1, w + 1):
                img = differential(LambdaElement([LambdaMonomial(src)]))
                rows_in.append(vec(t.indices for t in img.terms))
        self.boundaries = gf2.echelonize(
            gf2.BitMatrix.from_int_rows(rows_in, max(n, 1)))
        # cycles: kernel of delta into (s+1, w-1)
        if w >= 1:
            tgt = {t: i for i, t in enumerate(_adm_tuples(s + 1, w - 1, w - 1))}
            rows_out = []
            for b in self.basis:
                img = differential(LambdaElement([LambdaMonomial(b)]))
                v = 0
                for t in img.terms:
                    v |= 1 << tgt[t.indices]
                rows_out.append(v)
            m_out = gf2.BitMatrix.from_int_rows(rows_out, max(len(tgt), 1))
            self.cycles = gf2.kernel_basis(m_out.transpose())
        else:
            # weight 0 means every index is 0 and delta vanishes
            self.cycles = [1 << i for i in range(n)]
        # canonical homology representatives: cycle-space echelon rows that
        # grow the rank over the boundary space
        builder = gf2.EchelonBuilder(max(n, 1))
        for r in range(self.boundaries.rank):
            builder.add_int(self.boundaries.row_ints()[r])
        self.hom_vectors = []
        for v in gf2.echelonize(
                gf2.BitMatrix.from_int_rows(self.cycles, max(n, 1))).row_ints():
            if builder.add_int(v):
                self.hom_vectors.append(v)
        self.residues = [self.boundaries.reduce_vector(v)[0]
                         for v in self.hom_vectors]
        self.names: list[str | None] | None = None

    def element(self, v: int) -> LambdaElement:
        out = []
        x = v
        while x:
            i = (x & -x).bit_length() - 1
            out.append(LambdaMonomial(self.basis[i]))
            x &= x - 1
        return LambdaElement(out)

    def vector(self, e: LambdaElement) -> int:
        v = 0
        for t in e.terms:
            i = self.index.get(t.indices)
            if i is None:
                raise ValueError(
                    f"monomial {format_lambda_monomial(t)} is not an "
                    f"admissible basis element of bidegree "
                    f"({self.s}, {self.w})")
            v |= 1 << i
        return v

    def coordinates(self, z: LambdaElement) -> int:
        """Coordinates of the class of the cycle z over hom_vectors."""
        residue = self.boundaries.reduce_vector(self.vector(z))[0]
        coords = gf2.express_in_span(self.residues, residue,
                                     max(len(self.basis), 1))
        if coords is None:
            raise AssertionError("cycle residue outside the homology span")
        return coords


_hom_cache: dict[tuple[int, int], _HomologyData] = {}
_hom_lock = threading.Lock()


def _homology_data(s: int, w: int) -> _HomologyData:
    key = (s, w)
    with _hom_lock:
        data = _hom_cache.get(key)
    if data is not None:
        return data
    data = _HomologyData(s, w)
    with _hom_lock:
        return _hom_cache.setdefault(key, data)


def is_cycle(e: LambdaElement) -> bool:
    return not differential(e)


def homology(s: int, w: int) -> HomologySummary:
    """Kernel of the differential on bidegree (s, w) modulo the image from
    (s-1, w+1), with named identifications where the registry matches."""
    if s < 1:
        raise ValueError("homological degree must be >= 1")
    if w < 0:
        raise ValueError("weight must be >= 0")
    config.check_lambda(s, w)
    data = _homology_data(s, w)
    names = _identify_all(data)
    return HomologySummary(
        s=s,
        w=w,
        cycle_basis=[data.element(v) for v in data.cycles],
        boundary_rank=data.boundaries.rank,
        homology_dim=len(data.hom_vectors),
        homology_basis=[data.element(v) for v in data.hom_vectors],
        names=names,
    )


def homology_dim(s: int, w: int) -> int:
    config.check_lambda(s, w)
    return len(_homology_data(s, w).hom_vectors)


def homology_coordinates(e: LambdaElement, s: int, w: int) -> int:
    """Coordinates of a cycle's class over the canonical homology basis."""
    z = normalize(e)
    if differential(z):
        raise ValueError("not a cycle")
    if not z:
        return 0
    if z.bidegree() != (s, w):
        raise ValueError("bidegree mismatch")
    return _homology_data(s, w).coordinates(z)


def class_equal(e1: LambdaElement, e2: LambdaElement, s: int, w: int) -> bool:
    """True iff the cycles e1 and e2 differ by a boundary in (s, w)."""
    z1 = normalize(e1)
    z2 = normalize(e2)
    for z in (z1, z2):
        if differential(z):
            raise ValueError("class_equal requires cycle inputs")
        if z and z.bidegree() != (s, w):
            raise ValueError("bidegree mismatch")
    diff = z1 + z2
    if not diff:
        return True
    data = _homology_data(s, w)
    return data.boundaries.reduce_vector(data.vector(diff))[0] == 0


# ---------------------------------------------------------------------------
# halving endomorphism and named classes

def sq0_tilde(e: LambdaElement) -> LambdaElement:
    """Index-wise j -> 2j+1, then normalize; sends (s, w) to (s, 2w+s) and
    commutes with the differential.  Induces Sq^0 on homology."""
    return normalize(LambdaElement(
        [LambdaMonomial(tuple(2 * j + 1 for j in t.indices))
         for t in e.terms]))


@dataclass(frozen=True)
class NamedClass:
    name: str
    s: int
    w: int
    representative: LambdaElement | None


def h_element(i: int) -> LambdaElement:
    """Chain representative of h_i."""
    if not 0 <= i <= 6:
        raise ValueError("h_i registered for 0 <= i <= 6")
    return LambdaElement([LambdaMonomial((2 ** i - 1,))])


def h_product(indices: Sequence[int]) -> LambdaElement:
    """Normalized chain representative of a product of h's."""
    e = LambdaElement([LambdaMonomial(())])
    for i in indices:
        e = e.concat(h_element(i))
    return normalize(e)


_CBAR_BASE = ((2, 3, 3),)
_DBAR_BASE = ((6, 2, 3, 3), (4, 4, 3, 3), (2, 4, 5, 3), (1, 5, 1, 7))


def dbar_0() -> LambdaElement:
    """The standard (4, 14) cycle whose class is d_0."""
    return LambdaElement.from_indices(_DBAR_BASE)


@lru_cache(maxsize=1)
def named_registry() -> tuple[NamedClass, ...]:
    """Named classes: h_i (i <= 6) with representatives; the halving-family
    classes c_i and d_i with representatives built by iterating the halving
    endomorphism on their base cycles; and the remaining standard families
    registered by name and bidegree only (no representatives are on record
    for them, and none are invented here)."""
    out: list[NamedClass] = []
    for i in range(7):
        out.append(NamedClass(f"h{i}", 1, 2 ** i - 1, h_element(i)))
    base_c = normalize(LambdaElement.from_indices(_CBAR_BASE))
    base_d = normalize(dbar_0())
    for fam, base, s in (("c", base_c, 3), ("d", base_d, 4)):
        e = base
        i = 0
        while True:
            w = e.bidegree()[1]
            out.append(NamedClass(f"{fam}{i}", s, w, e))
            if 2 * w + s > config.LAMBDA_W_CAP:
                break
            e = sq0_tilde(e)
            i += 1
    # names-only families at homological degree 4, stems doubling by the
    # halving endomorphism from the usual base stems
    for fam, base_stem in (("e", 17), ("f", 18), ("p", 33)):
        i = 0
        while True:
            w = (base_stem + 4) * 2 ** i - 4
            if w > config.LAMBDA_W_CAP:
                break
            out.append(NamedClass(f"{fam}{i}", 4, w, None))
            i += 1
    i = 0
    while True:
        w = 24 * 2 ** i - 4
        if w > config.LAMBDA_W_CAP:
            break
        out.append(NamedClass(f"g{i + 1}", 4, w, None))
        i += 1
    for fam, base_stem in (("D3(", 61), ("p'", 69)):
        i = 0
        while True:
            w = (base_stem + 4) * 2 ** i - 4
            if w > config.LAMBDA_W_CAP:
                break
            name = f"{fam}{i})" if fam == "D3(" else f"{fam}{i}"
            out.append(NamedClass(name, 4, w, None))
            i += 1
    return tuple(out)


def _h_product_multisets(s: int, w: int) -> list[tuple[int, ...]]:
    """Non-decreasing index tuples (u_1 <= ... <= u_s) with
    sum(2^u_j - 1) = w."""
    out: list[tuple[int, ...]] = []

    def rec(slots: int, rem: int, lo: int, prefix: tuple[int, ...]):
        if slots == 0:
            if rem == 0:
                out.append(prefix)
            return
        for u in range(lo, 7):
            c = 2 ** u - 1
            if c > rem:
                break
            rec(slots - 1, rem - c, u, prefix + (u,))

    rec(s, w, 0, ())
    return out


def named_candidates(s: int, w: int) -> list[tuple[str, LambdaElement]]:
    """Candidate (name, cycle) pairs in bidegree (s, w): registry entries
    with representatives, plus products of h's, in deterministic order."""
    cands: list[tuple[str, LambdaElement]] = []
    for nc in named_registry():
        if nc.s == s and nc.w == w and nc.representative is not None:
            cands.append((nc.name, nc.representative))
    for multiset in _h_product_multisets(s, w):
        parts = []
        seen: list[int] = []
        for u in multiset:
            if seen and seen[-1] == u:
                continue
            n = multiset.count(u)
            parts.append(f"h{u}" if n == 1 else f"h{u}^{n}")
            seen.append(u)
        cands.append((" ".join(parts), h_product(multiset)))
    # registry entries with representatives may also arise as h-products
    # (never true for c_i/d_i, but keep the order deterministic regardless)
    cands.sort(key=lambda p: p[0])
    return cands


def _identify_all(data: _HomologyData) -> list[str | None]:
    if data.names is not None:
        return data.names
    names: list[str | None] = [None] * len(data.hom_vectors)
    if data.hom_vectors:
        for name, rep in named_candidates(data.s, data.w):
            z = normalize(rep)
            if not z:
                continue
            if differential(z):
                continue
            coords = data.coordinates(z)
            for i in range(len(names)):
                if coords == (1 << i) and names[i] is None:
                    names[i] = name
    data.names = names
    return names


# ---------------------------------------------------------------------------
# grammar

def parse_lambda(text: str) -> LambdaElement:
    """Parse the textual grammar: element := monomial (" + " monomial)*,
    monomial := "L" INDEX (" " "L" INDEX)*.  Example: "L6 L2 L3 L3".
    The tokens "0" and "1" denote zero and the empty monomial."""
    text = text.strip()
    if not text:
        raise ValueError("empty lambda-element text")
    acc: set[tuple[int, ...]] = set()
    for chunk in text.split(" + "):
        chunk = chunk.strip()
        if chunk == "0":
            continue
        if chunk == "1":
            acc.symmetric_difference_update(((),))
            continue
        ix = []
        for tok in chunk.split():
            if not tok.startswith("L") or not tok[1:].isdigit():
                raise ValueError(f"bad lambda factor {tok!r}")
            ix.append(int(tok[1:]))
        acc.symmetric_difference_update((tuple(ix),))
    return LambdaElement([LambdaMonomial(t) for t in acc])


def format_lambda_monomial(m: LambdaMonomial) -> str:
    if not m.indices:
        return "1"
    return " ".join(f"L{i}" for i in m.indices)


def format_lambda(e: LambdaElement) -> str:
    if not e.terms:
        return "0"
    return " + ".join(format_lambda_monomial(m) for m in e.sorted_terms())
