"""Lattices given by an exact Gram matrix, and certified minimal-vector enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt, floor, ceil
from typing import Sequence

from .exactla import (
    RationalMatrix,
    as_rational,
    determinant,
    inverse,
    leading_minors,
    rank_exact,
    solve,
)


class LatticeError(ValueError):
    """A mathematical precondition on a lattice or a vector system failed."""


class NotPositiveDefinite(LatticeError):
    pass


class DependentVectors(LatticeError):
    pass


Vector = tuple[int, ...]


def canonical_sign(v: Sequence[int]) -> Vector:
    """Representative of +-v whose first nonzero coordinate is positive."""
    v = tuple(int(x) for x in v)
    first = next((x for x in v if x), 0)
    return tuple(-x for x in v) if first < 0 else v


def norm(gram, x) -> Fraction:
    return inner(gram, x, x)


def inner(gram, x, y) -> Fraction:
    G = gram.entries if isinstance(gram, RationalMatrix) else gram
    return sum(
        (as_rational(G[i][j]) * as_rational(x[i]) * as_rational(y[j])
         for i in range(len(x)) if x[i] for j in range(len(y)) if y[j]),
        Fraction(0),
    )


@dataclass(frozen=True)
class MinimalVectorSet:
    min: Fraction
    vectors: tuple[Vector, ...]

    @property
    def s(self) -> int:
        """Kissing number counted over +-pairs."""
        return len(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


@dataclass(frozen=True)
class Lattice:
    """A lattice through the Gram matrix of one of its bases.

    Positive definiteness is checked on construction via leading principal minors.
    """

    gram: RationalMatrix
    label: str = ""

    def __post_init__(self):
        G = self.gram
        if not isinstance(G, RationalMatrix):
            object.__setattr__(self, "gram", G := RationalMatrix.from_rows(G))
        if G.rows != G.cols or G.rows == 0:
            raise LatticeError("Gram matrix must be square and nonempty")
        if not G.is_symmetric():
            raise LatticeError("Gram matrix is not symmetric")
        if any(m <= 0 for m in leading_minors(G)):
            raise NotPositiveDefinite("Gram matrix is not positive definite")

    @property
    def n(self) -> int:
        return self.gram.rows

    def norm(self, x) -> Fraction:
        return norm(self.gram, x)

    def inner(self, x, y) -> Fraction:
        return inner(self.gram, x, y)

    def scaled(self, c) -> "Lattice":
        return Lattice(self.gram.scale(c), self.label)

    @cached_property
    def determinant(self) -> Fraction:
        return determinant(self.gram)

    @cached_property
    def _minimal(self) -> MinimalVectorSet:
        return _enumerate_minimal(self)

    @property
    def minimum(self) -> Fraction:
        return self._minimal.min

    def is_minimal(self, x) -> bool:
        return any(x) and self.norm(x) == self.minimum


def _fincke_pohst_form(gram: RationalMatrix) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Exact LDL^T split: N(x) = sum_i d_i (x_i + sum_{j>i} mu[i][j] x_j)^2."""
    n = gram.rows
    q = [list(r) for r in gram.entries]
    for i in range(n):
        if q[i][i] <= 0:
            raise NotPositiveDefinite("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    d = [q[i][i] for i in range(n)]
    mu = [[q[i][j] if j > i else Fraction(0) for j in range(n)] for i in range(n)]
    return d, mu


def _sqrt_upper(t: Fraction) -> Fraction:
    """A rational upper bound for sqrt(t), t >= 0, within 1/denominator."""
    if t <= 0:
        return Fraction(0)
    p, q = t.numerator, t.denominator
    return Fraction(isqrt(p * q) + 1, q)


def _integer_window(center: Fraction, budget: Fraction) -> range:
    """All integers x with (x + center)^2 <= budget lie in the returned range."""
    s = _sqrt_upper(budget)
    return range(floor(-center - s), ceil(-center + s) + 1)


def _enumerate(lat: Lattice, bound: Fraction, shrink: bool) -> list[tuple[Fraction, Vector]]:
    """Depth-first Fincke-Pohst search for nonzero x with N(x) <= bound.

    With ``shrink`` the bound tightens to the smallest norm met so far, so the
    result holds exactly the vectors of minimal norm (both signs).
    """
    n = lat.n
    d, mu = _fincke_pohst_form(lat.gram)
    x = [0] * n
    found: list[tuple[Fraction, Vector]] = []
    state = {"bound": bound}

    def rec(i: int, used: Fraction):
        center = sum((mu[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        budget = (state["bound"] - used) / d[i]
        if budget < 0:
            return
        for xi in _integer_window(center, budget):
            t = xi + center
            part = used + d[i] * t * t
            if part > state["bound"]:
                continue
            x[i] = xi
            if i == 0:
                if part == 0:
                    continue
                if shrink and part < state["bound"]:
                    state["bound"] = part
                    found.clear()
                found.append((part, tuple(x)))
            else:
                rec(i - 1, part)
        x[i] = 0

    rec(n - 1, Fraction(0))
    return [(v, x) for v, x in found if v <= state["bound"]]


def _enumerate_minimal(lat: Lattice) -> MinimalVectorSet:
    start = min(lat.gram[i, i] for i in range(lat.n))
    hits = _enumerate(lat, start, shrink=True)
    m = min(v for v, _ in hits)
    vecs = sorted({canonical_sign(x) for v, x in hits if v == m}, reverse=True)
    return MinimalVectorSet(m, tuple(vecs))


def minimal_vectors(L: Lattice) -> MinimalVectorSet:
    """All minimal vectors of L up to sign, canonical sign and order.

    The search bound starts at the smallest diagonal Gram entry (a norm that is
    attained) and only ever shrinks to norms that are attained, so every
    vector of minimal norm is visited.
    """
    return L._minimal


def short_vectors(L: Lattice, bound) -> list[tuple[Fraction, Vector]]:
    """(norm, vector) for every nonzero vector with norm <= bound, one per sign pair."""
    hits = _enumerate(L, as_rational(bound), shrink=False)
    out = {canonical_sign(x): v for v, x in hits}
    return sorted(((v, x) for x, v in out.items()), key=lambda t: (t[0], tuple(-c for c in t[1])))


def components_in_basis(L: Lattice, B: Sequence[Sequence], x: Sequence) -> tuple[Fraction, ...]:
    """Coordinates c with x = sum c_i B_i; equivalently the products x . B_i^* with the dual basis."""
    if len(B) != L.n or any(len(b) != L.n for b in B) or len(x) != L.n:
        raise LatticeError("basis and vector must live in the lattice's dimension")
    M = RationalMatrix.from_columns(B)
    if rank_exact(M) < L.n:
        raise DependentVectors("basis is singular")
    c = solve(M, x)
    assert c is not None
    return c


def dual_products(L: Lattice, B: Sequence[Sequence], x: Sequence) -> tuple[Fraction, ...]:
    """x . b_i^* computed through the Gram matrix and the dual basis (independent of solve)."""
    M = RationalMatrix.from_columns(B)
    GB = L.gram @ M
    # dual basis columns: B^* = B (B^T G B)^{-1}
    Binv_gram = inverse(M.T @ GB)
    dual = M @ Binv_gram
    return tuple(L.inner(x, dual.column(i)) for i in range(L.n))


def is_well_rounded(L: Lattice) -> bool:
    return rank_exact(minimal_vectors(L).vectors) == L.n


def sublattice_gram(L: Lattice, V: Sequence[Sequence], label: str = "") -> Lattice:
    """The lattice spanned by the coordinate columns V, with Gram V^T G V."""
    if not V or any(len(v) != L.n for v in V):
        raise LatticeError("vectors must have the lattice's dimension")
    M = RationalMatrix.from_columns(V)
    if rank_exact(M.T) < len(V):
        raise DependentVectors("sublattice vectors are dependent")
    return Lattice(M.T @ L.gram @ M, label)
