"""Dense linear algebra over F_2 on bit-packed row matrices.

Vectors cross the API as Python ints (bit j = column j); matrices are stored
as numpy uint64 arrays, 64 columns per word, little-endian within and across
words so int conversion is a straight byte copy.

The canonical form everywhere is the *reduced* row-echelon form with
lowest-index-column pivoting and rows sorted by pivot column: it is unique
for a given row space, so residues, quotient representatives, and cached
tables are reproducible bit-for-bit across runs and insertion orders.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import _bitkernels as _bk


def _n_words(cols: int) -> int:
    return max(1, (cols + 63) // 64)


def _int_to_words(v: int, n_words: int) -> np.ndarray:
    return np.frombuffer(v.to_bytes(n_words * 8, "little"), dtype=np.uint64).copy()


def _words_to_int(words: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(words).tobytes(), "little")


class BitMatrix:
    """Immutable-by-convention bit matrix; `data[r, w]` holds columns
    64*w .. 64*w+63 of row r."""

    __slots__ = ("data", "rows", "cols", "n_words")

    def __init__(self, data: np.ndarray, cols: int):
        if data.ndim != 2 or data.dtype != np.uint64:
            raise ValueError("data must be a 2-d uint64 array")
        if cols < 0 or data.shape[1] != _n_words(cols):
            raise ValueError("word count does not match column count")
        self.data = data
        self.rows = data.shape[0]
        self.cols = cols
        self.n_words = data.shape[1]

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, _n_words(cols)), dtype=np.uint64), cols)

    @classmethod
    def from_int_rows(cls, vals: Iterable[int], cols: int) -> "BitMatrix":
        vals = list(vals)
        nw = _n_words(cols)
        data = np.zeros((len(vals), nw), dtype=np.uint64)
        for i, v in enumerate(vals):
            if v < 0 or v >> cols:
                raise ValueError(f"row {i} does not fit in {cols} columns")
            data[i] = _int_to_words(v, nw)
        return cls(data, cols)

    def row_int(self, i: int) -> int:
        return _words_to_int(self.data[i])

    def to_int_rows(self) -> list[int]:
        return [self.row_int(i) for i in range(self.rows)]

    def get(self, r: int, c: int) -> int:
        return int((self.data[r, c >> 6] >> np.uint64(c & 63)) & np.uint64(1))

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.data.copy(), self.cols)

    def transpose(self) -> "BitMatrix":
        if self.rows == 0 or self.cols == 0:
            return BitMatrix.zeros(self.cols, self.rows)
        bits = np.unpackbits(self.data.view(np.uint8), bitorder="little")
        bits = bits.reshape(self.rows, self.n_words * 64)[:, : self.cols].T
        nw = _n_words(self.rows)
        padded = np.zeros((self.cols, nw * 64), dtype=np.uint8)
        padded[:, : self.rows] = bits
        packed = np.packbits(padded, axis=1, bitorder="little")
        return BitMatrix(np.ascontiguousarray(packed).view(np.uint64), self.rows)

    def mul_vector(self, v: int) -> int:
        """Matrix-vector product: bit r of the result = <row r, v> over F_2."""
        if v < 0 or v >> self.cols:
            raise ValueError("vector does not fit the column count")
        if self.rows == 0:
            return 0
        w = self.data & _int_to_words(v, self.n_words)
        parities = np.bitwise_count(w).sum(axis=1, dtype=np.int64) & 1
        out = 0
        for r in np.nonzero(parities)[0]:
            out |= 1 << int(r)
        return out

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.cols == other.cols
            and self.rows == other.rows
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):  # pragma: no cover - matrices are not dict keys
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


class EchelonForm:
    """A reduced row-echelon form: rows sorted by pivot column, every pivot
    column zero in all other rows, no zero rows."""

    __slots__ = ("matrix", "pivot_cols", "_row_ints", "_row_of_pivot")

    def __init__(self, matrix: BitMatrix, pivot_cols: Sequence[int]):
        self.matrix = matrix
        self.pivot_cols = tuple(pivot_cols)
        self._row_ints: list[int] | None = None
        self._row_of_pivot: dict[int, int] | None = None

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    @property
    def cols(self) -> int:
        return self.matrix.cols

    def row_ints(self) -> list[int]:
        if self._row_ints is None:
            self._row_ints = self.matrix.to_int_rows()
        return self._row_ints

    def nonpivot_cols(self) -> list[int]:
        pivset = set(self.pivot_cols)
        return [c for c in range(self.matrix.cols) if c not in pivset]

    def reduce_vector(self, v: int) -> tuple[int, int]:
        """Canonical residue of v modulo the row space, plus the combination
        used: residue = v XOR (sum of rows r with coefficient bit r set).

        Because the form is fully reduced, the coefficient of row r is just
        bit pivot_cols[r] of v; scanning the set bits of the running residue
        upward clears each pivot at most once (every row's support starts at
        its own pivot).
        """
        if v < 0 or v >> self.matrix.cols:
            raise ValueError("vector does not fit the column count")
        rows = self.row_ints()
        if self._row_of_pivot is None:
            self._row_of_pivot = {p: r for r, p in enumerate(self.pivot_cols)}
        pivmap = self._row_of_pivot
        residue = v
        coeffs = 0
        x = v
        while x:
            c = (x & -x).bit_length() - 1
            r = pivmap.get(c)
            if r is None:
                x &= x - 1
            else:
                residue ^= rows[r]
                coeffs |= 1 << r
                x = residue & ~((1 << (c + 1)) - 1)
        return residue, coeffs

    def contains(self, v: int) -> bool:
        return self.reduce_vector(v)[0] == 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, EchelonForm)
            and self.pivot_cols == other.pivot_cols
            and self.matrix == other.matrix
        )

    def __hash__(self):  # pragma: no cover
        return hash((self.pivot_cols, self.matrix))

    def __repr__(self) -> str:
        return f"EchelonForm(rank={self.rank}, cols={self.matrix.cols})"


class EchelonBuilder:
    """Incremental RREF accumulator.  Rows may be added in any order; the
    finished form is canonical (order-independent) because full reduction
    plus lowest-column pivoting determine it from the row space alone."""

    def __init__(self, cols: int, capacity: int = 64):
        self.cols = cols
        self.n_words = _n_words(cols)
        cap = max(1, min(capacity, cols if cols > 0 else 1))
        self._E = np.zeros((cap, self.n_words), dtype=np.uint64)
        self._row_of_pivot = np.full(max(1, cols), -1, dtype=np.int64)
        self._pivot_of_row = np.full(cap, -1, dtype=np.int64)
        self._scratch = np.zeros(self.n_words, dtype=np.uint64)
        self.nrows = 0

    @property
    def rank(self) -> int:
        return self.nrows

    def _ensure_capacity(self, extra: int = 1) -> None:
        # rank can never exceed cols, so capacity is capped there
        limit = max(1, self.cols)
        need = min(self.nrows + extra, limit)
        cap = self._E.shape[0]
        if need <= cap:
            return
        new_cap = min(max(cap * 2, need), limit)
        E = np.zeros((new_cap, self.n_words), dtype=np.uint64)
        E[: self.nrows] = self._E[: self.nrows]
        por = np.full(new_cap, -1, dtype=np.int64)
        por[: self.nrows] = self._pivot_of_row[: self.nrows]
        self._E = E
        self._pivot_of_row = por

    def add_int(self, v: int) -> bool:
        """Insert one vector; returns True if the rank grew."""
        if v < 0 or v >> self.cols:
            raise ValueError("vector does not fit the column count")
        self._ensure_capacity()
        self._scratch[:] = _int_to_words(v, self.n_words)
        before = self.nrows
        self.nrows = _bk.rref_insert(
            self._E, self.nrows, self._scratch, self._row_of_pivot,
            self._pivot_of_row,
        )
        return self.nrows > before

    def add_words(self, rows: np.ndarray) -> None:
        """Insert a block of pre-packed rows (2-d uint64, matching width)."""
        if rows.ndim != 2 or rows.shape[1] != self.n_words:
            raise ValueError("row block width mismatch")
        self._ensure_capacity(rows.shape[0])
        self.nrows = _bk.rref_insert_block(
            self._E, self.nrows, np.ascontiguousarray(rows, dtype=np.uint64),
            self._row_of_pivot, self._pivot_of_row, self._scratch,
        )

    def contains_int(self, v: int) -> bool:
        """Membership test without mutating the form."""
        if v < 0 or v >> self.cols:
            raise ValueError("vector does not fit the column count")
        words = _int_to_words(v, self.n_words)
        for w in range(self.n_words):
            x = int(words[w])
            while x:
                b = (x & -x).bit_length() - 1
                r = self._row_of_pivot[(w << 6) + b]
                if r < 0:
                    return False
                words[w:] ^= self._E[r, w:]
                x = int(words[w]) & ~((1 << (b + 1)) - 1)
        return True

    def finish(self) -> EchelonForm:
        order = np.argsort(self._pivot_of_row[: self.nrows], kind="stable")
        data = np.ascontiguousarray(self._E[: self.nrows][order])
        pivots = [int(self._pivot_of_row[r]) for r in order]
        return EchelonForm(BitMatrix(data, self.cols), pivots)


def echelonize(m: BitMatrix) -> EchelonForm:
    b = EchelonBuilder(m.cols, capacity=min(m.rows, max(1, m.cols)) or 1)
    if m.rows:
        b.add_words(m.data)
    return b.finish()


def reduce_vector(e: EchelonForm, v: int) -> tuple[int, int]:
    return e.reduce_vector(v)


def kernel_basis(m: BitMatrix) -> list[int]:
    """Basis of {v : m·v = 0}, one vector per non-pivot column, in column
    order.  Vector for free column f: e_f plus, for each pivot row r with a
    1 in column f, the unit e_{pivot(r)}."""
    ef = echelonize(m)
    piv = ef.pivot_cols
    pivset = set(piv)
    free = [c for c in range(m.cols) if c not in pivset]
    vecs = {f: 1 << f for f in free}
    rows = ef.row_ints()
    for r, p in enumerate(piv):
        x = rows[r] & ~(1 << p)
        while x:
            low = x & -x
            vecs[low.bit_length() - 1] |= 1 << p
            x ^= low
    return [vecs[f] for f in free]


def express_in_span(vectors: Sequence[int], v: int, cols: int) -> int | None:
    """Coefficients (bit i = vectors[i]) expressing v as a sum of the given
    vectors, or None if v is outside their span.  Computed by echelonizing
    the vectors with identity tags appended past column `cols`."""
    n = len(vectors)
    rows = [vec | (1 << (cols + i)) for i, vec in enumerate(vectors)]
    ef = echelonize(BitMatrix.from_int_rows(rows, cols + n))
    residue, _ = ef.reduce_vector(v)
    if residue & ((1 << cols) - 1):
        return None
    return residue >> cols


def intersect_subspaces(
    bases: Sequence[Sequence[int]], cols: int | None = None
) -> list[int]:
    """Basis (canonical RREF rows) of the intersection of the spans.

    Width defaults to the smallest count of columns covering every vector;
    pass `cols` to fix it explicitly.
    """
    if not bases:
        raise ValueError("need at least one subspace")
    if cols is None:
        cols = max((v.bit_length() for basis in bases for v in basis), default=0)
    cols = max(cols, 1)
    current = [ef_row for ef_row in _canon(bases[0], cols)]
    for basis in bases[1:]:
        current = _intersect2(current, list(basis), cols)
        if not current:
            break
    return current


def _canon(vectors: Sequence[int], cols: int) -> list[int]:
    return echelonize(BitMatrix.from_int_rows(vectors, cols)).row_ints()


def _intersect2(U: list[int], V: list[int], cols: int) -> list[int]:
    # Zassenhaus: rows (u, u) and (v, 0) in a 2*cols-wide matrix, low half
    # first.  RREF rows whose pivot lies in the high half have zero low half;
    # their high halves form a basis of the intersection.
    rows = [u | (u << cols) for u in U] + list(V)
    ef = echelonize(BitMatrix.from_int_rows(rows, 2 * cols))
    out = []
    for r, p in enumerate(ef.pivot_cols):
        if p >= cols:
            out.append(ef.row_ints()[r] >> cols)
    return _canon(out, cols) if out else []
