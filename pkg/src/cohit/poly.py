"""The polynomial algebra P_k = F_2[x_1, ..., x_k] with its Steenrod squares
and linear variable substitutions.

Monomials are exponent tuples; polynomials are finite term sets (coefficients
live in F_2, so addition is symmetric difference).  The canonical order on
the monomials of one degree is lexicographic on exponent vectors read
(e_1, ..., e_k), *descending*; every table and quotient representative in the
package is reproducible because each module sticks to this order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from . import config, gf2


def binom_mod2(a: int, b: int) -> int:
    """binom(a, b) mod 2, with binom(a, b) = 0 unless 0 <= b <= a.

    Lucas' theorem bitwise: odd iff b is a submask of a, i.e. ((a-b) & b) == 0.
    The out-of-range convention is relied on verbatim by the lambda-algebra
    relations, where negative upper arguments must vanish.
    """
    if b < 0 or a < 0 or b > a:
        return 0
    return int(((a - b) & b) == 0)


def mu(n: int) -> int:
    """Smallest r such that n is a sum of r numbers of the form 2^u - 1, u > 0.

    n = sum of r such terms iff n + r is an even number that is a sum of r
    powers of two each >= 2, i.e. popcount(n+r) <= r <= n and n + r even.
    """
    if n <= 0:
        raise ValueError("mu is defined for positive integers")
    r = 1
    while True:
        m = n + r
        if r <= n and m % 2 == 0 and bin(m).count("1") <= r:
            return r
        r += 1


@dataclass(frozen=True, order=True)
class Monomial:
    """A monomial of P_k, stored as its exponent tuple."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        if not self.exponents or any(e < 0 for e in self.exponents):
            raise ValueError("exponents must be a non-empty tuple of non-negatives")

    @property
    def k(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if self.k != other.k:
            raise ValueError("variable count mismatch")
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __str__(self) -> str:
        return format_monomial(self)


class Polynomial:
    """An element of P_k: a finite set of monomials summed over F_2."""

    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms: Iterable[Monomial] = ()):
        config.check_k(k)
        tset = frozenset(terms)
        for t in tset:
            if t.k != k:
                raise ValueError("monomial variable count mismatch")
        self.k = k
        self.terms = tset

    @classmethod
    def zero(cls, k: int) -> "Polynomial":
        return cls(k)

    @classmethod
    def one(cls, k: int) -> "Polynomial":
        return cls(k, [Monomial((0,) * k)])

    @classmethod
    def variable(cls, k: int, i: int) -> "Polynomial":
        if not 1 <= i <= k:
            raise ValueError(f"variable index {i} out of range 1..{k}")
        return cls(k, [Monomial(tuple(1 if j == i - 1 else 0 for j in range(k)))])

    @classmethod
    def from_exponents(cls, k: int, rows: Iterable[Sequence[int]]) -> "Polynomial":
        return cls(k, [Monomial(tuple(r)) for r in rows])

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if self.k != other.k:
            raise ValueError("variable count mismatch")
        return Polynomial(self.k, self.terms ^ other.terms)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return multiply(self, other)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.k == other.k
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.k, self.terms))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_homogeneous(self) -> bool:
        degs = {t.degree for t in self.terms}
        return len(degs) <= 1

    @property
    def degree(self) -> int:
        """Degree of a homogeneous polynomial (zero polynomial has degree 0)."""
        degs = {t.degree for t in self.terms}
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError("degree of a non-homogeneous polynomial")
        return degs.pop()

    def sorted_terms(self) -> list[Monomial]:
        """Terms in the canonical (descending lexicographic) order."""
        return sorted(self.terms, key=lambda m: m.exponents, reverse=True)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial(k={self.k}, {format_polynomial(self)!r})"


def multiply(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.k != g.k:
        raise ValueError("variable count mismatch")
    acc: set[tuple[int, ...]] = set()
    for a in f.terms:
        ea = a.exponents
        for b in g.terms:
            t = tuple(x + y for x, y in zip(ea, b.exponents))
            acc.symmetric_difference_update((t,))
    return Polynomial(f.k, [Monomial(t) for t in acc])


def _sq_targets(i: int, e: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All monomials of Sq^i(x^e), each exactly once.

    By the Cartan formula, Sq^i(x^e) = sum over (i_1..i_k) with sum i of
    prod binom(e_t, i_t) x^(e+i); the product is odd iff every i_t is a
    submask of e_t (Lucas).  Distinct splits give distinct targets, so no
    cancellation happens within one source monomial.
    """
    k = len(e)
    out: list[tuple[int, ...]] = []
    suffix = [0] * (k + 1)
    for t in range(k - 1, -1, -1):
        suffix[t] = suffix[t + 1] + e[t]

    def rec(t: int, rem: int, prefix: tuple[int, ...]):
        if t == k - 1:
            if (rem & ~e[t]) == 0:
                out.append(prefix + (e[t] + rem,))
            return
        s = e[t]
        while True:
            if s <= rem and rem - s <= suffix[t + 1]:
                rec(t + 1, rem - s, prefix + (e[t] + s,))
            if s == 0:
                break
            s = (s - 1) & e[t]

    rec(0, i, ())
    return out


def sq(i: int, f: Polynomial) -> Polynomial:
    """Steenrod square Sq^i on a polynomial (term by term; the identities
    Sq^0 = id, Sq^i f = 0 for i > deg f, Sq^d f = f^2 at d = deg f all fall
    out of the per-variable binomial action)."""
    if i < 0:
        raise ValueError("negative Steenrod square")
    acc: set[tuple[int, ...]] = set()
    for m in f.terms:
        acc.symmetric_difference_update(_sq_targets(i, m.exponents))
    return Polynomial(f.k, [Monomial(t) for t in acc])


class LinearSubstitution:
    """An algebra endomorphism of P_k sending each variable to a homogeneous
    degree-1 polynomial (a k x k matrix over F_2 acting by substitution)."""

    __slots__ = ("k", "images")

    def __init__(self, k: int, images: Sequence[Polynomial]):
        config.check_k(k)
        if len(images) != k:
            raise ValueError("need one image per variable")
        for p in images:
            if p.k != k:
                raise ValueError("image variable count mismatch")
            if any(t.degree != 1 for t in p.terms):
                raise ValueError("images must be homogeneous of degree 1")
        self.k = k
        self.images = tuple(images)

    @classmethod
    def from_matrix(cls, k: int, rows: Sequence[Sequence[int]]) -> "LinearSubstitution":
        """rows[i][j] = coefficient of x_{j+1} in the image of x_{i+1}."""
        images = []
        for row in rows:
            p = Polynomial.zero(k)
            for j, c in enumerate(row):
                if c % 2:
                    p = p + Polynomial.variable(k, j + 1)
            images.append(p)
        return cls(k, images)

    @classmethod
    def identity(cls, k: int) -> "LinearSubstitution":
        return cls(k, [Polynomial.variable(k, i + 1) for i in range(k)])

    @classmethod
    def transposition(cls, k: int, i: int) -> "LinearSubstitution":
        """Swap x_i and x_{i+1} (1 <= i < k), fixing the other variables."""
        if not 1 <= i < k:
            raise ValueError("transposition index out of range")
        images = []
        for j in range(1, k + 1):
            if j == i:
                images.append(Polynomial.variable(k, i + 1))
            elif j == i + 1:
                images.append(Polynomial.variable(k, i))
            else:
                images.append(Polynomial.variable(k, j))
        return cls(k, images)

    @classmethod
    def transvection(cls, k: int) -> "LinearSubstitution":
        """x_1 -> x_1 + x_2, fixing the other variables (k >= 2)."""
        if k < 2:
            raise ValueError("transvection requires at least two variables")
        images = [Polynomial.variable(k, 1) + Polynomial.variable(k, 2)]
        images += [Polynomial.variable(k, j) for j in range(2, k + 1)]
        return cls(k, images)

    def coefficient_matrix(self) -> list[int]:
        """Row i as a bitmask: bit j set iff x_{j+1} occurs in images[i]."""
        rows = []
        for p in self.images:
            mask = 0
            for t in p.terms:
                mask |= 1 << t.exponents.index(1)
            rows.append(mask)
        return rows

    def is_invertible(self) -> bool:
        m = gf2.BitMatrix.from_int_rows(self.coefficient_matrix(), self.k)
        return gf2.echelonize(m).rank == self.k

    def __repr__(self) -> str:
        imgs = ", ".join(format_polynomial(p) for p in self.images)
        return f"LinearSubstitution(k={self.k}, [{imgs}])"


def gl_generators(k: int) -> list[LinearSubstitution]:
    """Generators of GL_k as substitutions: the adjacent transpositions
    (swap x_i, x_{i+1} for 1 <= i < k) plus the transvection x_1 -> x_1+x_2.
    GL_1 is trivial, so k = 1 yields no generators."""
    gens = [LinearSubstitution.transposition(k, i) for i in range(1, k)]
    if k >= 2:
        gens.append(LinearSubstitution.transvection(k))
    return gens


def sym_generators(k: int) -> list[LinearSubstitution]:
    """Generators of the symmetric group inside GL_k (transpositions only)."""
    return [LinearSubstitution.transposition(k, i) for i in range(1, k)]


def _frobenius(p: Polynomial) -> Polynomial:
    # squaring is exponent doubling over F_2
    return Polynomial(p.k, [Monomial(tuple(2 * e for e in t.exponents))
                            for t in p.terms])


def _power(p: Polynomial, n: int) -> Polynomial:
    """p^n via Frobenius splitting along the bits of n."""
    result = Polynomial.one(p.k)
    sq_pow = p
    while n:
        if n & 1:
            result = multiply(result, sq_pow)
        n >>= 1
        if n:
            sq_pow = _frobenius(sq_pow)
    return result


def substitute(s: LinearSubstitution, f: Polynomial) -> Polynomial:
    if s.k != f.k:
        raise ValueError("variable count mismatch")
    acc: set[tuple[int, ...]] = set()
    for m in f.terms:
        prod = Polynomial.one(f.k)
        for t, e in enumerate(m.exponents):
            if e:
                prod = multiply(prod, _power(s.images[t], e))
        acc.symmetric_difference_update(t.exponents for t in prod.terms)
    return Polynomial(f.k, [Monomial(t) for t in acc])


@lru_cache(maxsize=None)
def _monomials_cached(k: int, d: int) -> tuple[tuple[int, ...], ...]:
    if k == 1:
        return ((d,),)
    out = []
    for e1 in range(d, -1, -1):
        for rest in _monomials_cached(k - 1, d - e1):
            out.append((e1,) + rest)
    return tuple(out)


def enumerate_monomials(k: int, d: int) -> list[Monomial]:
    """All monomials of degree d in k variables, in the canonical descending
    lexicographic order; there are C(d+k-1, k-1) of them."""
    if k < 1 or d < 0:
        raise ValueError("need k >= 1 and d >= 0")
    config.check_k(k)
    config.check_degree(d)
    return [Monomial(e) for e in _monomials_cached(k, d)]


def exponent_tuples(k: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Raw exponent tuples in canonical order (no wrapper objects)."""
    if k < 1 or d < 0:
        raise ValueError("need k >= 1 and d >= 0")
    config.check_k(k)
    config.check_degree(d)
    return _monomials_cached(k, d)


def monomial_count(k: int, d: int) -> int:
    return math.comb(d + k - 1, k - 1)


def monomial_index(k: int, d: int, exponents: Sequence[int]) -> int:
    """Position of an exponent vector in the canonical degree-d list, in
    closed form: at each position, count the lists that stay strictly larger
    (a hockey-stick binomial sum), then recurse on the remainder."""
    if len(exponents) != k or any(e < 0 for e in exponents) or sum(exponents) != d:
        raise ValueError("not a degree-d exponent vector for k variables")
    r = 0
    rem = d
    for t in range(k - 1):
        e = exponents[t]
        if rem - e - 1 >= 0:
            r += math.comb(rem - e - 1 + (k - 1 - t), k - 1 - t)
        rem -= e
    return r


_TERM_RE = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_polynomial(text: str, k: int | None = None) -> Polynomial:
    """Parse the textual grammar: polynomial := monomial (" + " monomial)*,
    monomial := term (" " term)*, term := "x" INDEX ("^" EXP)?.
    Example: "x1^3 x2 + x4^6".  The extra tokens "0" and "1" denote the zero
    polynomial and the empty (constant) monomial."""
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
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
        exps: dict[int, int] = {}
        for tok in chunk.split():
            m = _TERM_RE.match(tok)
            if not m:
                raise ValueError(f"bad monomial term {tok!r}")
            idx = int(m.group(1))
            exp = int(m.group(2)) if m.group(2) else 1
            if idx < 1:
                raise ValueError(f"variable index must be >= 1 in {tok!r}")
            exps[idx] = exps.get(idx, 0) + exp
            max_index = max(max_index, idx)
        parsed.append(exps)
    if k is None:
        k = max(max_index, 1)
    if max_index > k:
        raise ValueError(f"variable index {max_index} exceeds k={k}")
    acc: set[tuple[int, ...]] = set()
    for exps in parsed:
        if exps is None:
            continue
        t = tuple(exps.get(i, 0) for i in range(1, k + 1))
        acc.symmetric_difference_update((t,))
    return Polynomial(k, [Monomial(t) for t in acc])


def format_monomial(m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m.exponents, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return " ".join(parts) if parts else "1"


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    return " + ".join(format_monomial(m) for m in f.sorted_terms())
