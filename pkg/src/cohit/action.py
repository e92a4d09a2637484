"""Matrix-group actions on the quotient QP_k and their invariant subspaces.

The general linear group over F_2 acts on P_k by variable substitution; the
action commutes with the Steenrod squares, so it descends to each quotient
degree.  Everything is computed through the standard generators: the
adjacent transpositions (swap x_i, x_{i+1}, 1 <= i < k) generate the
symmetric group, and together with the transvection x_1 -> x_1 + x_2 they
generate the full group.  A class is group-invariant iff it is fixed by
every generator.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import gf2, hit, poly

GL = "GL"
SYM = "SYM"


class InducedAction:
    """The generator matrices of the group action on one quotient degree,
    acting on representative coordinates (column j = image of rep j)."""

    __slots__ = ("basis", "generator_matrices")

    def __init__(self, basis: hit.DegreeBasis,
                 generator_matrices: Sequence[gf2.BitMatrix]):
        self.basis = basis
        self.generator_matrices = list(generator_matrices)

    def __repr__(self) -> str:
        return (f"InducedAction(k={self.basis.k}, d={self.basis.d}, "
                f"dim={self.basis.dim})")


def induced_action(b: hit.DegreeBasis) -> InducedAction:
    """Matrices of the substitution generators on quotient coordinates.
    For k = 1 the group is trivial and the list is empty."""
    mats = []
    for s in poly.gl_generators(b.k):
        rows = []
        for rep in b.representatives:
            image = poly.substitute(s, poly.Polynomial(b.k, [rep]))
            rows.append(b.reduce(image))
        # row j = coordinates of the image of rep j; the operator matrix is
        # its transpose (columns indexed by domain representative)
        mats.append(gf2.BitMatrix.from_int_rows(rows, b.dim).transpose())
    return InducedAction(b, mats)


def _plus_identity(m: gf2.BitMatrix) -> gf2.BitMatrix:
    out = m.copy()
    for i in range(min(m.rows, m.cols)):
        out.data[i, i >> 6] ^= np.uint64(1) << np.uint64(i & 63)
    return out


def invariants(b: hit.DegreeBasis, group: str = GL,
               within: Sequence[int] | None = None) -> list[int]:
    """Basis (coordinate vectors) of the subspace fixed by every generator:
    the intersection over generators M of ker(M + I).  SYM uses only the
    transpositions; GL adds the transvection.  When `within` is given (a
    basis of a subspace in the same coordinates), the result is the fixed
    subspace intersected with it — the subspace must itself be stable under
    the generators for the result to be a module of invariants, but the
    intersection is computed regardless."""
    g = group.upper()
    if g not in (GL, SYM):
        raise ValueError(f"unknown group {group!r}")
    act = induced_action(b)
    mats = act.generator_matrices
    if g == SYM and b.k >= 2:
        mats = mats[:-1]
    if b.dim == 0:
        return []
    spaces: list[list[int]] = []
    if within is not None:
        spaces.append(list(within))
    spaces.extend(gf2.kernel_basis(_plus_identity(m)) for m in mats)
    if not spaces:
        return [1 << i for i in range(b.dim)]
    return gf2.intersect_subspaces(spaces, cols=b.dim)
