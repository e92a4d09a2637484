"""The chain-level transfer from divided power algebras to the lambda
algebra, and the induced map from coinvariants of primitives to homology.

The map phi_k sends a divided monomial a^{(I, t)} (k variables, last power
t) to the sum over t <= i <= t + deg(I) of phi_{k-1}(sq_dual(i - t, a^I))
multiplied by lambda_i on the right; phi_1(a^{(t)}) = lambda_t.  The upper
summation bound is forced: sq_dual(r, -) vanishes once r exceeds the degree
of its argument.  On primitive elements the image is a cycle, so phi induces
a well-defined map on GL-coinvariants of primitives — both facts are
exercised by property tests, not assumed.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from . import config, dual, gf2, lam


# ---------------------------------------------------------------------------
# the chain-level map

_phi_cache: dict[tuple[int, tuple[int, ...]], frozenset[tuple[int, ...]]] = {}
_phi_lock = threading.Lock()


def _phi_mono(k: int, powers: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
    """Normalized index tuples of phi_k on one divided monomial."""
    key = (k, powers)
    with _phi_lock:
        cached = _phi_cache.get(key)
    if cached is not None:
        return cached
    if k == 1:
        res = frozenset({(powers[0],)})
    else:
        head, t = powers[:-1], powers[-1]
        a_head = dual.DualElement.from_powers(k - 1, [head])
        deg_head = sum(head)
        acc: set[tuple[int, ...]] = set()
        for i in range(t, t + deg_head + 1):
            q = dual.sq_dual(i - t, a_head)
            inner: set[tuple[int, ...]] = set()
            for mono in q.terms:
                inner ^= _phi_mono(k - 1, mono.powers)
            acc ^= {tup + (i,) for tup in inner}
        nf: frozenset[tuple[int, ...]] = frozenset()
        for tup in acc:
            nf = nf ^ lam._normal_form(tup)
        res = nf
    with _phi_lock:
        return _phi_cache.setdefault(key, res)


def phi(k: int, q: dual.DualElement) -> lam.LambdaElement:
    """Chain-level transfer of a degree-d dual element: an element of the
    lambda algebra in bidegree (k, d), in admissible normal form."""
    if k < 1:
        raise ValueError("need k >= 1")
    if q.k != k:
        raise ValueError(f"element has {q.k} variables, expected {k}")
    acc: frozenset[tuple[int, ...]] = frozenset()
    for mono in q.terms:
        acc = acc ^ _phi_mono(k, mono.powers)
    return lam.LambdaElement([lam.LambdaMonomial(t) for t in acc])


# ---------------------------------------------------------------------------
# primitives to homology classes

def _primitivity_failure(q: dual.DualElement) -> str | None:
    """None if q is primitive, else a description of a failing operation."""
    d = q.degree
    j = 0
    while (1 << j) <= d:
        image = dual.sq_dual(1 << j, q)
        if image.terms:
            return (f"sq_dual({1 << j}) maps it to "
                    f"{dual.format_dual(image)}")
        j += 1
    return None


def _name_of(coords: int, names: list[str | None]) -> str | None:
    """Name of a homology class from basis names, when every component
    of its coordinate vector is named."""
    if coords == 0:
        return "0"
    parts = []
    x = coords
    while x:
        i = (x & -x).bit_length() - 1
        if i >= len(names) or names[i] is None:
            return None
        parts.append(names[i])
        x &= x - 1
    return " + ".join(parts)


@dataclass
class TransferClass:
    """The homology class of the chain-level transfer of one primitive."""

    k: int
    degree: int
    cycle: lam.LambdaElement
    coordinates: int
    name: str | None

    @property
    def label(self) -> str:
        if self.name is not None:
            return self.name
        return f"coordinates {self.coordinates:#x}"


def transfer_class(k: int, q: dual.DualElement) -> TransferClass:
    """Transfer of a primitive dual element: the cycle phi(k, q) together
    with its class in homology bidegree (k, d), identified by name when the
    coordinates match named basis vectors.  Non-primitive input is rejected:
    the cycle property is only guaranteed for primitives."""
    if q.k != k:
        raise ValueError(f"element has {q.k} variables, expected {k}")
    if not q.terms:
        raise ValueError("zero element has no degree; transfer it by hand")
    d = q.degree
    config.check_lambda(k, d)
    failure = _primitivity_failure(q)
    if failure is not None:
        raise ValueError(f"element is not primitive: {failure}")
    z = phi(k, q)
    if lam.differential(z):
        raise AssertionError(
            "transfer of a primitive failed to be a cycle; this indicates "
            "a defect in the chain-level map")
    coords = lam.homology_coordinates(z, k, d)
    names = lam.homology(k, d).names
    return TransferClass(k=k, degree=d, cycle=z, coordinates=coords,
                         name=_name_of(coords, names))


@dataclass
class TransferSummary:
    """The transfer matrix from coinvariants of primitives to homology."""

    k: int
    degree: int
    domain_dim: int
    codomain_dim: int
    matrix: gf2.BitMatrix
    rank: int
    verdict: str
    coordinates: list[int]
    names: list[str | None]


def transfer_matrix(
    k: int,
    d: int,
    representatives: list[dual.DualElement] | None = None,
) -> TransferSummary:
    """Matrix of the transfer in degree d: rows are the homology coordinates
    of the transfers of the coinvariant representatives.  The verdict
    compares the rank against both dimensions.  Alternative coset
    representatives may be supplied; the result is the same matrix whenever
    they represent the same coinvariant basis (a tested property)."""
    config.check_degree(d)
    config.check_lambda(k, d)
    if representatives is None:
        representatives, _ = dual.coinvariants(k, d)
    summary = lam.homology(k, d)
    codomain_dim = summary.homology_dim
    rows = []
    names: list[str | None] = []
    for rep in representatives:
        tc = transfer_class(k, rep)
        rows.append(tc.coordinates)
        names.append(tc.name)
    matrix = gf2.BitMatrix.from_int_rows(rows, max(codomain_dim, 1))
    rank = gf2.echelonize(matrix).rank
    domain_dim = len(representatives)
    if rank == domain_dim == codomain_dim:
        verdict = "iso"
    elif rank == domain_dim:
        verdict = "mono-not-epi"
    elif rank == codomain_dim:
        verdict = "epi-not-mono"
    else:
        verdict = "neither"
    return TransferSummary(
        k=k, degree=d, domain_dim=domain_dim, codomain_dim=codomain_dim,
        matrix=matrix, rank=rank, verdict=verdict,
        coordinates=rows, names=names)


# ---------------------------------------------------------------------------
# doubling (adjoint of the halving map on polynomials)

def doubled(q: dual.DualElement) -> dual.DualElement:
    """Divided-monomial doubling a^{(i_1)}...a^{(i_k)} ->
    a^{(2 i_1 + 1)}...a^{(2 i_k + 1)}: the adjoint of the all-odd halving
    map on monomials, pairing degree d against degree 2d + k.  On transfers
    it realizes the compatibility of phi with the halving endomorphism of
    the lambda algebra (a tested property)."""
    return dual.DualElement(
        q.k,
        [dual.DividedMonomial(tuple(2 * p + 1 for p in m.powers))
         for m in q.terms])
