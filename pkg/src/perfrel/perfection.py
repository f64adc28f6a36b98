"""Perfection rank, perfection relations, and the two-basis relation toolkit.

A line through an integer coordinate column X is represented by the rank-one
matrix X X^T; for vectors of equal norm this is the projection to the line up
to a common factor, so ranks and kernels never need the Gram matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Sequence

import networkx as nx

from .exactla import (
    RationalMatrix,
    as_rational,
    inertia,
    inverse,
    lattice_basis,
    nullspace_basis,
    primitive_integer,
    rank_exact,
    solve,
)
from .lattice import DependentVectors, Lattice, LatticeError, Vector, canonical_sign


class RelationError(LatticeError):
    """A claimed relation does not hold, or a derived identity fails."""


def outer(x: Sequence, y: Sequence | None = None) -> list[list[Fraction]]:
    y = x if y is None else y
    return [[as_rational(a) * as_rational(b) for b in y] for a in x]


def vectorize(S: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """Symmetric n x n matrix -> (S11..Snn, S12, S13, .., S1n, S23, ..), off-diagonal taken once."""
    n = len(S)
    diag = [as_rational(S[i][i]) for i in range(n)]
    off = [as_rational(S[i][j]) for i in range(n) for j in range(i + 1, n)]
    return tuple(diag + off)


def projection_row(x: Sequence[int]) -> tuple[Fraction, ...]:
    return vectorize(outer(x))


def weighted_projection_sum(vectors: Sequence[Sequence[int]], coefficients: Sequence) -> list[list[Fraction]]:
    """sum_i c_i X_i X_i^T."""
    n = len(vectors[0])
    out = [[Fraction(0)] * n for _ in range(n)]
    for x, c in zip(vectors, coefficients):
        c = as_rational(c)
        for i in range(n):
            if x[i]:
                ci = c * x[i]
                row = out[i]
                for j in range(n):
                    if x[j]:
                        row[j] += ci * x[j]
    return out


@dataclass(frozen=True, order=True)
class ProjectionLine:
    coords: Vector

    def __post_init__(self):
        if not any(self.coords):
            raise ValueError("a line needs a nonzero vector")
        if primitive_integer(self.coords) != tuple(self.coords):
            raise ValueError(f"{self.coords} is not primitive with canonical sign")

    @classmethod
    def of(cls, v: Sequence) -> "ProjectionLine":
        return cls(primitive_integer(v))

    @property
    def n(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


def _lines(lines) -> list[ProjectionLine]:
    return [ln if isinstance(ln, ProjectionLine) else ProjectionLine.of(ln) for ln in lines]


@dataclass(frozen=True)
class PerfectionProfile:
    n: int
    s: int
    r: int

    @property
    def relation_dim(self) -> int:
        return self.s - self.r

    @property
    def cell_dim(self) -> int:
        """Perfection co-rank n(n+1)/2 - r."""
        return self.n * (self.n + 1) // 2 - self.r

    @property
    def perfect(self) -> bool:
        return self.cell_dim == 0


def projection_matrix(lines) -> RationalMatrix:
    """The s x n(n+1)/2 matrix whose rows are the vectorized X X^T."""
    return RationalMatrix.from_rows(projection_row(ln) for ln in _lines(lines))


def perfection_rank(lines) -> PerfectionProfile:
    lines = _lines(lines)
    if not lines:
        raise ValueError("perfection rank of an empty family")
    n = lines[0].n
    if any(ln.n != n for ln in lines):
        raise ValueError("lines live in different dimensions")
    return PerfectionProfile(n, len(lines), rank_exact(projection_matrix(lines)))


@dataclass(frozen=True)
class PerfectionRelation:
    """sum_L c_L X_L X_L^T = 0 over distinct lines, checked on construction."""

    lines: tuple[ProjectionLine, ...]
    coefficients: tuple[Fraction, ...]
    norms: tuple[Fraction, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(_lines(self.lines)))
        object.__setattr__(self, "coefficients", tuple(as_rational(c) for c in self.coefficients))
        if len(self.lines) != len(self.coefficients):
            raise ValueError("one coefficient per line")
        if not self.lines:
            raise RelationError("empty relation")
        if len(set(self.lines)) != len(self.lines):
            raise RelationError("lines must be distinct")
        if any(c == 0 for c in self.coefficients):
            raise RelationError("zero coefficients are not stored")
        total = weighted_projection_sum([ln.coords for ln in self.lines], self.coefficients)
        if any(x for row in total for x in row):
            raise RelationError("sum of weighted projections is not zero")

    @classmethod
    def combine(cls, terms: Sequence[tuple]) -> "PerfectionRelation":
        """Build from (coefficient, vector) pairs, merging repeated lines and dropping zeros."""
        acc: dict[ProjectionLine, Fraction] = {}
        for c, v in terms:
            ln = ProjectionLine.of(v)
            # v = g * X with X primitive, so v v^T = g^2 X X^T
            k = next(as_rational(a) for a in v if a) / ln.coords[next(i for i, a in enumerate(v) if a)]
            acc[ln] = acc.get(ln, Fraction(0)) + as_rational(c) * k * k
        items = [(ln, c) for ln, c in acc.items() if c]
        return cls(tuple(ln for ln, _ in items), tuple(c for _, c in items))

    def __neg__(self) -> "PerfectionRelation":
        return PerfectionRelation(self.lines, tuple(-c for c in self.coefficients), self.norms)

    def normalized(self) -> "PerfectionRelation":
        """Primitive integer coefficients, first one positive."""
        return PerfectionRelation(self.lines, tuple(Fraction(c) for c in primitive_integer(self.coefficients)), self.norms)

    def projection_coefficients(self) -> tuple[Fraction, ...]:
        """Coefficients against the true projections p_L = X X^T G / N(x)."""
        if self.norms is None:
            raise ValueError("norms were not recorded for this relation")
        return tuple(c * m for c, m in zip(self.coefficients, self.norms))

    def __len__(self):
        return len(self.lines)


def relation_space(lines) -> list[PerfectionRelation]:
    """Canonical basis of all perfection relations on the given lines."""
    lines = _lines(lines)
    M = projection_matrix(lines)
    out = []
    for v in nullspace_basis(M.T):
        keep = [(ln, Fraction(c)) for ln, c in zip(lines, v) if c]
        out.append(PerfectionRelation(tuple(ln for ln, _ in keep), tuple(c for _, c in keep)))
    return out


def contains_relation(lines, relation: PerfectionRelation) -> tuple[Fraction, ...] | None:
    """Coordinates of ``relation`` in the canonical basis of ``relation_space(lines)``, or None."""
    lines = _lines(lines)
    index = {ln: i for i, ln in enumerate(lines)}
    if any(ln not in index for ln in relation.lines):
        return None
    target = [Fraction(0)] * len(lines)
    for ln, c in zip(relation.lines, relation.coefficients):
        target[index[ln]] = c
    basis = relation_space(lines)
    if not basis:
        return None
    cols = []
    for rel in basis:
        col = [Fraction(0)] * len(lines)
        for ln, c in zip(rel.lines, rel.coefficients):
            col[index[ln]] = c
        cols.append(col)
    return solve(RationalMatrix.from_columns(cols), target)


class TwoSidedSplit(NamedTuple):
    left: tuple[ProjectionLine, ...]
    left_coefficients: tuple[Fraction, ...]
    right: tuple[ProjectionLine, ...]
    right_coefficients: tuple[Fraction, ...]


def spans_agree(T: Sequence[Sequence], Tp: Sequence[Sequence]) -> bool:
    """span(T) == span(T') via ranks of the stacked coordinate matrices."""
    r = rank_exact(T)
    return r == rank_exact(Tp) == rank_exact(list(T) + list(Tp))


def split_two_sided(rel: PerfectionRelation) -> TwoSidedSplit:
    """Positive coefficients on the left, negated negative ones on the right.

    Both sides of a genuine relation span the same subspace; that is asserted here.
    """
    left = [(ln, c) for ln, c in zip(rel.lines, rel.coefficients) if c > 0]
    right = [(ln, -c) for ln, c in zip(rel.lines, rel.coefficients) if c < 0]
    if not left or not right:
        raise RelationError("one side of the relation is empty")
    T = [ln.coords for ln, _ in left]
    Tp = [ln.coords for ln, _ in right]
    if not spans_agree(T, Tp):
        raise RelationError("the two sides span different subspaces")
    return TwoSidedSplit(
        tuple(ln for ln, _ in left), tuple(c for _, c in left),
        tuple(ln for ln, _ in right), tuple(c for _, c in right),
    )


def inertia_signature(lines, coefficients, G) -> tuple[int, int, int]:
    """Inertia of x -> sum_i c_i (e_i . x)^2 for an independent system e_i."""
    vecs = [ln.coords if isinstance(ln, ProjectionLine) else tuple(ln) for ln in lines]
    n = len(vecs[0])
    if len(vecs) != n or rank_exact(vecs) < n:
        raise DependentVectors("inertia needs n independent vectors")
    G = G if isinstance(G, RationalMatrix) else RationalMatrix.from_rows(G)
    # (e_i . x) = (G e_i)^T x
    Ge = [G.apply(v) for v in vecs]
    return inertia(weighted_projection_sum(Ge, coefficients))


# --- relations between two bases ------------------------------------------


@dataclass(frozen=True)
class TwoBasisRelation:
    """sum_i lam_i p_{e_i} = sum_j lam'_j p_{e'_j} between two bases of minimal vectors.

    Vectors are integer coordinate columns in the basis of ``lattice``; signs
    are kept as given.
    """

    lattice: Lattice
    e: tuple[Vector, ...]
    e_prime: tuple[Vector, ...]
    lam: tuple[Fraction, ...]
    lam_prime: tuple[Fraction, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "e", tuple(tuple(int(a) for a in v) for v in self.e))
        object.__setattr__(self, "e_prime", tuple(tuple(int(a) for a in v) for v in self.e_prime))
        object.__setattr__(self, "lam", tuple(as_rational(c) for c in self.lam))
        object.__setattr__(self, "lam_prime", tuple(as_rational(c) for c in self.lam_prime))
        n = self.lattice.n
        if not (len(self.e) == len(self.e_prime) == len(self.lam) == len(self.lam_prime) == n):
            raise RelationError("a two-basis relation needs n vectors and n coefficients per side")
        if any(len(v) != n for v in self.e + self.e_prime):
            raise RelationError("vectors must have the lattice's dimension")
        if rank_exact(self.e) < n or rank_exact(self.e_prime) < n:
            raise DependentVectors("both systems must have rank n")
        if any(c <= 0 for c in self.lam + self.lam_prime):
            raise RelationError("coefficients must be strictly positive")
        lhs = weighted_projection_sum(self.e, self.lam)
        rhs = weighted_projection_sum(self.e_prime, self.lam_prime)
        if lhs != rhs:
            raise RelationError("the weighted projection sums differ")
        bad = [v for v in self.e + self.e_prime if not self.lattice.is_minimal(v)]
        if bad:
            raise RelationError(f"vectors are not minimal in the lattice: {bad[:3]}")

    @property
    def n(self) -> int:
        return self.lattice.n

    def swapped(self) -> "TwoBasisRelation":
        return TwoBasisRelation(self.lattice, self.e_prime, self.e, self.lam_prime, self.lam, self.label)

    def as_relation(self) -> PerfectionRelation:
        terms = [(c, v) for c, v in zip(self.lam, self.e)] + [(-c, v) for c, v in zip(self.lam_prime, self.e_prime)]
        return PerfectionRelation.combine(terms)

    @cached_property
    def comps(self) -> tuple[tuple[Fraction, ...], ...]:
        """comps[j][k] = e_j . e'_k^*, the k-th component of e_j on the basis (e')."""
        inv = inverse(RationalMatrix.from_columns(self.e_prime))
        return tuple(inv.apply(v) for v in self.e)

    @cached_property
    def comps_prime(self) -> tuple[tuple[Fraction, ...], ...]:
        """comps_prime[k][j] = e'_k . e_j^*."""
        inv = inverse(RationalMatrix.from_columns(self.e))
        return tuple(inv.apply(v) for v in self.e_prime)

    @cached_property
    def generated_basis(self) -> tuple[tuple[int, ...], ...]:
        """Basis (lattice coordinates) of the lattice spanned by all e_i and e'_j."""
        return tuple(tuple(int(x) for x in b) for b in lattice_basis(self.e + self.e_prime))


def relation_from_split(lattice: Lattice, split: TwoSidedSplit, label: str = "") -> TwoBasisRelation:
    """TwoBasisRelation from a split whose sides are bases; signs of lines are the canonical ones."""
    return TwoBasisRelation(
        lattice,
        tuple(ln.coords for ln in split.left),
        tuple(ln.coords for ln in split.right),
        split.left_coefficients,
        split.right_coefficients,
        label,
    )


def a_coefficients(rel: TwoBasisRelation) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """A_i = 1 - sum_k (e_i . e'_k^*)^2 and A'_i = 1 - sum_j (e'_i . e_j^*)^2.

    The Gram matrix is divided by the lattice minimum first, so the leading 1
    is the norm of e_i. Raises if the trace or the weighted-sum identities fail.
    """
    L = rel.lattice
    m = L.minimum
    A = tuple(L.norm(v) / m - sum(c * c for c in row) for v, row in zip(rel.e, rel.comps))
    Ap = tuple(L.norm(v) / m - sum(c * c for c in row) for v, row in zip(rel.e_prime, rel.comps_prime))
    if sum(rel.lam) != sum(rel.lam_prime):
        raise RelationError("coefficient sums differ")
    if sum(l * a for l, a in zip(rel.lam, A)) != 0:
        raise RelationError("sum lam_i A_i is not zero")
    if sum(l * a for l, a in zip(rel.lam_prime, Ap)) != 0:
        raise RelationError("sum lam'_i A'_i is not zero")
    return A, Ap


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    indices: tuple[int, ...]
    lhs: Fraction
    rhs: Fraction
    passed: bool


@dataclass(frozen=True)
class DualityReport:
    checks: tuple[IdentityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.passed]

    def count(self, name: str) -> int:
        return sum(1 for c in self.checks if c.name == name)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def duality_report(rel: TwoBasisRelation) -> DualityReport:
    """Evaluate the component identities relating two bases in a positive relation.

    Checks, with C[j][k] = e_j . e'_k^* and C'[k][j] = e'_k . e_j^*:
      cross     lam_j C[j][k] == lam'_k C'[k][j]              for all j, k
      sign      C[j][k] and C'[k][j] share a sign or both vanish
      row_sum   sum_i |C[j][i]| |C'[i][j]| == 1               for each j
      col_sum   sum_j |C[j][i]| |C'[i][j]| == 1               for each i
      balance   sum_i s_i (lam'_j/lam'_k (C'[j][i]/C'[k][i])^2 - 1) == 0
                with s_i = |C'[k][i]| |C[i][k]|, for each k with full support and each j
    """
    n = rel.n
    C, Cp = rel.comps, rel.comps_prime
    lam, lamp = rel.lam, rel.lam_prime
    checks = []
    for j in range(n):
        for k in range(n):
            lhs, rhs = lam[j] * C[j][k], lamp[k] * Cp[k][j]
            checks.append(IdentityCheck("cross", (j, k), lhs, rhs, lhs == rhs))
            sa, sb = _sign(C[j][k]), _sign(Cp[k][j])
            checks.append(IdentityCheck("sign", (j, k), Fraction(sa), Fraction(sb), sa == sb))
    for j in range(n):
        total = sum(abs(C[j][i]) * abs(Cp[i][j]) for i in range(n))
        checks.append(IdentityCheck("row_sum", (j,), total, Fraction(1), total == 1))
    for i in range(n):
        total = sum(abs(C[j][i]) * abs(Cp[i][j]) for j in range(n))
        checks.append(IdentityCheck("col_sum", (i,), total, Fraction(1), total == 1))
    for k in range(n):
        if any(Cp[k][i] == 0 for i in range(n)):
            continue
        for j in range(n):
            total = sum(
                abs(Cp[k][i]) * abs(C[i][k]) * (lamp[j] / lamp[k] * Cp[j][i] ** 2 / Cp[k][i] ** 2 - 1)
                for i in range(n)
            )
            checks.append(IdentityCheck("balance", (j, k), total, Fraction(0), total == 0))
    return DualityReport(tuple(checks))


def decompose_perf_irreducible(rel: TwoBasisRelation) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Finest simultaneous partition (I_k, J_k) with each e'_j, j in J_k, in span{e_i : i in I_k}.

    Components of the bipartite graph joining i and j when e'_j . e_i^* != 0.
    """
    g = nx.Graph()
    n = rel.n
    g.add_nodes_from(("e", i) for i in range(n))
    g.add_nodes_from(("f", j) for j in range(n))
    for j in range(n):
        for i in range(n):
            if rel.comps_prime[j][i] != 0:
                g.add_edge(("e", i), ("f", j))
    blocks = []
    for comp in nx.connected_components(g):
        I = tuple(sorted(i for side, i in comp if side == "e"))
        J = tuple(sorted(j for side, j in comp if side == "f"))
        if len(I) != len(J):
            raise RelationError("block with unequal numbers of vectors on the two sides")
        blocks.append((I, J))
    return sorted(blocks)


def is_perf_irreducible(rel: TwoBasisRelation) -> bool:
    return len(decompose_perf_irreducible(rel)) == 1


def verify_vmin(lam, left_norms, lam_prime, right_norms, minimum) -> bool:
    """Whether every right-hand vector is minimal, cross-checked against the norm-sum argument.

    Hypotheses: sum lam == sum lam', all lam' > 0, every left vector of norm
    ``minimum``, and sum lam N(e) == sum lam' N(e'). Under them the right-hand
    vectors must be minimal; the conclusion is checked directly as well and a
    disagreement raises.
    """
    lam = [as_rational(c) for c in lam]
    lam_prime = [as_rational(c) for c in lam_prime]
    left_norms = [as_rational(c) for c in left_norms]
    right_norms = [as_rational(c) for c in right_norms]
    minimum = as_rational(minimum)
    if not lam_prime or not right_norms:
        raise ValueError("the right-hand side is empty")
    if len(lam) != len(left_norms) or len(lam_prime) != len(right_norms):
        raise ValueError("one norm per coefficient")
    if any(x < minimum for x in left_norms + right_norms):
        raise ValueError("a norm below the lattice minimum")
    hypotheses = (
        sum(lam) == sum(lam_prime)
        and all(c > 0 for c in lam_prime)
        and all(x == minimum for x in left_norms)
        and sum(c * x for c, x in zip(lam, left_norms)) == sum(c * x for c, x in zip(lam_prime, right_norms))
    )
    conclusion = all(x == minimum for x in right_norms)
    if hypotheses and not conclusion:
        raise RelationError("norm-sum argument contradicted: hypotheses hold but a vector is not minimal")
    return conclusion


def relation_vmin(rel: TwoBasisRelation) -> bool:
    L = rel.lattice
    return verify_vmin(rel.lam, [L.norm(v) for v in rel.e], rel.lam_prime, [L.norm(v) for v in rel.e_prime], L.minimum)


def line_set(vectors) -> list[ProjectionLine]:
    return [ProjectionLine(canonical_sign(v)) for v in vectors]
