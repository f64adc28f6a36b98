"""The finite quotient Lambda/Lambda_0, its glue code, regularity, and the classification matcher."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Sequence

from .exactla import RationalMatrix, as_rational, rank_exact, smith_normal_form, solve
from .lattice import DependentVectors, LatticeError
from .perfection import TwoBasisRelation, decompose_perf_irreducible

ALPHA = {1: 1, 2: 1, 3: 1, 4: 2, 5: 2, 6: 3, 7: 4, 8: 6}


def _frac_part(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def element_order(coords: Sequence) -> int:
    """Order modulo Lambda_0 of a vector given by its (rational) components on the e_i."""
    return lcm(1, *(as_rational(c).denominator for c in coords))


@dataclass(frozen=True)
class QuotientStructure:
    n: int
    invariant_factors: tuple[int, ...]
    glue_generators: tuple[tuple[Fraction, ...], ...]

    @property
    def index(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def annihilator(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    def is_elementary(self, p: int) -> bool:
        return bool(self.invariant_factors) and all(d == p for d in self.invariant_factors)

    @property
    def factor_type(self) -> str:
        return "(" + ",".join(map(str, self.invariant_factors)) + ")" if self.invariant_factors else "trivial"


def quotient_structure(lambda_basis: Sequence[Sequence], sub: Sequence[Sequence]) -> QuotientStructure:
    """Lambda/Lambda_0 with Lambda spanned by ``lambda_basis`` and Lambda_0 by ``sub``.

    Both are given in the same ambient coordinates. Glue generators are written
    on the vectors of ``sub`` and reduced to [0, 1).
    """
    n = len(sub)
    if n == 0 or len(lambda_basis) != n:
        raise DependentVectors("sub-vectors must be as many as the rank of Lambda")
    B = RationalMatrix.from_columns(lambda_basis)
    if rank_exact(B) < n or rank_exact(sub) < n:
        raise DependentVectors("sub-vectors do not have full rank in Lambda")
    # coordinates of the sub-vectors on the Lambda basis
    M = []
    for v in sub:
        c = solve(B, v)
        if c is None or any(x.denominator != 1 for x in c):
            raise LatticeError("a sub-vector does not lie in Lambda")
        M.append([int(x) for x in c])
    M = RationalMatrix.from_columns(M)
    snf = smith_normal_form([[int(x) for x in row] for row in M.entries])
    V = snf.right
    gens, factors = [], []
    for i, d in enumerate(snf.factors):
        if d == 1:
            continue
        factors.append(d)
        gens.append(tuple(_frac_part(Fraction(V[k][i], d)) for k in range(n)))
    return QuotientStructure(n, tuple(factors), tuple(gens))


def relation_quotient(rel: TwoBasisRelation, prime: bool = False) -> QuotientStructure:
    """Lambda/Lambda_0 (or Lambda/Lambda'_0) for a two-basis relation."""
    return quotient_structure(rel.generated_basis, rel.e_prime if prime else rel.e)


@dataclass(frozen=True)
class Code:
    n: int
    modulus: int
    generators: tuple[tuple[int, ...], ...]

    @cached_property
    def words(self) -> frozenset[tuple[int, ...]]:
        """All codewords: the Z/dZ-span of the generators."""
        d = self.modulus
        words = {tuple([0] * self.n)}
        frontier = list(words)
        while frontier:
            nxt = []
            for w in frontier:
                for g in self.generators:
                    u = tuple((a + b) % d for a, b in zip(w, g))
                    if u not in words:
                        words.add(u)
                        nxt.append(u)
            frontier = nxt
        return frozenset(words)

    def __len__(self):
        return len(self.words)

    def weight_enumerator(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(Counter(sum(1 for x in w if x) for w in self.words).items()))

    def shape_enumerator(self) -> tuple:
        """Multiset over codewords of the multiset of gcd(entry, d); invariant under monomial maps."""
        d = self.modulus
        shapes = Counter(tuple(sorted(gcd(x, d) for x in w)) for w in self.words)
        return tuple(sorted(shapes.items()))

    def column_profile(self) -> tuple:
        """Per coordinate, the multiset of gcd(entry, d) over all codewords, sorted over coordinates."""
        d = self.modulus
        cols = []
        for k in range(self.n):
            cols.append(tuple(sorted(Counter(gcd(w[k], d) for w in self.words).items())))
        return tuple(sorted(cols))


def extract_code(q: QuotientStructure) -> Code:
    d = q.annihilator
    gens = tuple(tuple(int(x * d) % d for x in g) for g in q.glue_generators)
    return Code(q.n, d, tuple(g for g in gens if any(g)))


def _units(d: int) -> list[int]:
    return [u for u in range(1, d) if gcd(u, d) == 1] if d > 1 else [0]


@dataclass(frozen=True)
class Equivalence:
    """C' = { (u_k * c[perm[k]])_k : c in C }."""

    perm: tuple[int, ...]
    units: tuple[int, ...]


def apply_monomial(word, eq: Equivalence, d: int) -> tuple[int, ...]:
    return tuple((u * word[p]) % d for p, u in zip(eq.perm, eq.units))


class SearchAborted(Exception):
    pass


def find_monomial_equivalence(C: Code, Cp: Code, cap: int = 200_000) -> Equivalence | None:
    """Backtracking search for a monomial map taking C onto C'.

    Target coordinates are filled left to right; a partial assignment survives
    only if the projections of both codes on the filled coordinates agree.
    Raises SearchAborted after ``cap`` nodes.
    """
    if C.n != Cp.n or C.modulus != Cp.modulus or len(C) != len(Cp):
        return None
    n, d = C.n, C.modulus
    if d == 1 or len(C) == 1:
        return Equivalence(tuple(range(n)), tuple([1] * n))
    W = list(C.words)
    Wp = list(Cp.words)
    units = _units(d)
    # per-coordinate gcd profile must match under the chosen source coordinate
    prof = [Counter(gcd(w[k], d) for w in W) for k in range(n)]
    profp = [Counter(gcd(w[k], d) for w in Wp) for k in range(n)]
    nodes = 0
    perm: list[int] = []
    mult: list[int] = []

    def proj(words, cols, scal):
        return Counter(tuple((u * w[c]) % d for c, u in zip(cols, scal)) for w in words)

    def rec(k: int):
        nonlocal nodes
        if k == n:
            return True
        target = proj(Wp, range(k + 1), [1] * (k + 1))
        for src in range(n):
            if src in perm or prof[src] != profp[k]:
                continue
            for u in units:
                nodes += 1
                if nodes > cap:
                    raise SearchAborted
                perm.append(src)
                mult.append(u)
                if proj(W, perm, mult) == target and rec(k + 1):
                    return True
                perm.pop()
                mult.pop()
        return False

    if rec(0):
        eq = Equivalence(tuple(perm), tuple(mult))
        assert {apply_monomial(w, eq, d) for w in W} == set(Wp)
        return eq
    return None


@dataclass(frozen=True)
class RegularityVerdict:
    verdict: str
    witness: object
    d: int
    d_prime: int
    code: Code | None = field(default=None, compare=False)
    code_prime: Code | None = field(default=None, compare=False)

    @property
    def regular(self) -> bool:
        return self.verdict == "regular"


def classify_regularity(rel: TwoBasisRelation, cap: int = 200_000) -> RegularityVerdict:
    q, qp = relation_quotient(rel), relation_quotient(rel, prime=True)
    C, Cp = extract_code(q), extract_code(qp)
    d, dp = q.annihilator, qp.annihilator

    def verdict(kind, witness):
        return RegularityVerdict(kind, witness, d, dp, C, Cp)

    if d != dp:
        return verdict("irregular", {"invariant": "annihilator", "d": d, "d_prime": dp})
    if q.invariant_factors != qp.invariant_factors:
        return verdict("irregular", {"invariant": "invariant factors", "left": q.invariant_factors,
                                     "right": qp.invariant_factors})
    for name in ("weight_enumerator", "shape_enumerator", "column_profile"):
        a, b = getattr(C, name)(), getattr(Cp, name)()
        if a != b:
            return verdict("irregular", {"invariant": name, "left": a, "right": b})
    try:
        eq = find_monomial_equivalence(C, Cp, cap)
    except SearchAborted:
        return verdict("undecided", {"reason": f"search exceeded {cap} nodes"})
    if eq is None:
        return verdict("irregular", {"invariant": "no monomial equivalence (exhaustive search)"})
    return verdict("regular", eq)


@dataclass(frozen=True)
class NuStatistics:
    nu: dict
    lhs: int
    rhs: int
    holds: bool
    equality: bool
    sharp: bool | None


def nu_statistics(rel: TwoBasisRelation) -> NuStatistics:
    """Counts nu_d of the e'_j of order d in Lambda/Lambda_0 and the bound nu_1 <= sum (d-2) nu_d.

    When the bound is an equality, also checks |e'_j . e_i^*| = 1/d on the support.
    """
    orders = [element_order(row) for row in rel.comps_prime]
    nu = dict(sorted(Counter(orders).items()))
    lhs = nu.get(1, 0)
    rhs = sum((d - 2) * k for d, k in nu.items() if d >= 3)
    sharp = None
    if lhs == rhs:
        sharp = all(
            abs(c) == Fraction(1, o)
            for o, row in zip(orders, rel.comps_prime)
            for c in row if c
        )
    return NuStatistics(nu, lhs, rhs, lhs <= rhs, lhs == rhs, sharp)


def alpha_ratio_check(rel: TwoBasisRelation) -> tuple[Fraction, bool]:
    """Smallest ratio |e_j . e'_k^*| / |e_j . e'_h^*| over nonzero entries, both directions, against 1/alpha_n."""
    n = rel.n
    worst = Fraction(1)
    for M in (rel.comps, rel.comps_prime):
        for row in M:
            nz = [abs(c) for c in row if c]
            if nz:
                worst = min(worst, min(nz) / max(nz))
    bound = Fraction(1, ALPHA[n]) if n in ALPHA else Fraction(0)
    return worst, worst >= bound


OUTSIDE = "outside classified scope"


def _weights(lam) -> tuple[Fraction, ...]:
    m = min(lam)
    return tuple(sorted(x / m for x in lam))


def _match_oriented(rel: TwoBasisRelation) -> str | None:
    n = rel.n
    q, qp = relation_quotient(rel), relation_quotient(rel, prime=True)
    w, wp = _weights(rel.lam), _weights(rel.lam_prime)
    flat = all(x == 1 for x in w + wp)
    if q.is_elementary(2):
        if qp.is_elementary(2) and flat and q.index == qp.index:
            if n % 2 == 0 and n >= 4 and q.index == 2 ** ((n - 2) // 2):
                return f"D_n frame, n={n}"
            if n == 7 and q.index == 8:
                return "E_7 frame"
            if n == 8 and q.index == 16:
                return "E_8 frame"
        if (n == 8 and q.invariant_factors == (2, 2, 2, 2) and qp.invariant_factors == (3, 3)
                and w == (1,) * 4 + (3,) * 4 and wp == (1,) * 8):
            return "E_8 irregular"
        return None
    if q.invariant_factors == (3,) and n == 6 and flat:
        return "Watson index 3, n=6"
    if q.invariant_factors == (4,):
        nu = nu_statistics(rel).nu
        if n == 7 and flat and nu == {2: 3, 4: 4}:
            return "Example 6.1"
        if n == 7 and w == (1,) * 6 + (2,) and nu == {4: 7}:
            return "Example 6.2"
        if n == 8 and flat and nu == {4: 8}:
            return "Example 6.3"
    return None


def match_classification(rel: TwoBasisRelation) -> str:
    """Label a relation with its classified case from discrete invariants only."""
    if len(decompose_perf_irreducible(rel)) != 1:
        return OUTSIDE
    for r in (rel, rel.swapped()):
        label = _match_oriented(r)
        if label:
            return label
    return OUTSIDE
