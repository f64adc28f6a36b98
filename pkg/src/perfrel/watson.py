"""Watson's identity and condition, and the Watson and Zahareva relations built from them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exactla import as_rational, rank_exact, verify_formal_identity
from .lattice import DependentVectors, Lattice, LatticeError
from .perfection import PerfectionRelation, RelationError, TwoBasisRelation


class WatsonError(LatticeError):
    pass


class ReservedCaseNotImplemented(NotImplementedError):
    """Raised for identities whose formula is referenced but not available (the d = 7 analogue)."""

    code = "reserved:d7"


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class WatsonDatum:
    """Independent vectors f_1..f_l of ``lattice`` (integer coordinates) with glue f = (sum a_i f_i)/d."""

    lattice: Lattice
    basis: tuple[tuple[int, ...], ...]
    a: tuple[int, ...]
    d: int

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(tuple(int(x) for x in v) for v in self.basis))
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        n = self.lattice.n
        if len(self.basis) != len(self.a):
            raise WatsonError("one glue coefficient per basis vector")
        if len(self.a) < 2:
            raise WatsonError("need at least two vectors")
        if any(len(v) != n for v in self.basis):
            raise WatsonError("vectors must have the lattice's dimension")
        if int(self.d) != self.d or self.d < 2:
            raise WatsonError("denominator must be an integer > 1")
        if any(x == 0 for x in self.a):
            raise WatsonError("glue coefficients must be nonzero")
        if rank_exact(self.basis) < len(self.basis):
            raise DependentVectors("the f_i are dependent")
        num = [sum(a * v[k] for a, v in zip(self.a, self.basis)) for k in range(n)]
        if any(x % self.d for x in num):
            raise WatsonError("f = (sum a_i f_i)/d is not a lattice vector")

    @property
    def ell(self) -> int:
        return len(self.a)

    @property
    def A(self) -> int:
        return sum(abs(x) for x in self.a)

    @cached_property
    def f(self) -> tuple[int, ...]:
        n = self.lattice.n
        return tuple(sum(a * v[k] for a, v in zip(self.a, self.basis)) // self.d for k in range(n))

    @property
    def multiplicities(self) -> dict[int, int]:
        """m_i = #{j : |a_j| = i} for i = 1..floor(d/2); coefficients beyond d/2 are counted too."""
        out = {i: 0 for i in range(1, self.d // 2 + 1)}
        for x in self.a:
            out[abs(x)] = out.get(abs(x), 0) + 1
        return out

    def normalized(self) -> "WatsonDatum":
        """Negate f_i where a_i < 0 so that every coefficient is positive (f is unchanged)."""
        basis = tuple(v if a > 0 else tuple(-x for x in v) for v, a in zip(self.basis, self.a))
        return WatsonDatum(self.lattice, basis, tuple(abs(a) for a in self.a), self.d)


@dataclass(frozen=True)
class WatsonDefect:
    defect: int
    gaps: tuple[Fraction, ...]
    identity_holds: bool
    basis_minimal: bool
    violations: tuple[str, ...]

    @property
    def watson_condition(self) -> bool:
        return self.defect == 0 and not self.violations


def watson_identity_terms(a: Sequence, d, ell: int | None = None):
    """Both sides of Watson's identity over formal basis vectors, as weighted-norm term lists.

    LHS: (A - 2d) N(f);  RHS: sum |a_i| (N(f - sgn(a_i) f_i) - N(f_i)).
    """
    a = [as_rational(x) for x in a]
    d = as_rational(d)
    n = ell or len(a)
    unit = [tuple(Fraction(int(i == k)) for k in range(n)) for i in range(n)]
    f = tuple(sum((a[i] * unit[i][k] for i in range(len(a))), Fraction(0)) / d for k in range(n))
    A = sum(abs(x) for x in a)
    lhs = [(A - 2 * d, f)]
    rhs = []
    for i, x in enumerate(a):
        s = _sgn(x)
        rhs.append((abs(x), tuple(f[k] - s * unit[i][k] for k in range(n))))
        rhs.append((-abs(x), unit[i]))
    return lhs, rhs


def watson_identity_holds(a: Sequence, d) -> bool:
    lhs, rhs = watson_identity_terms(a, d)
    return verify_formal_identity(lhs, rhs)


def watson_defect(w: WatsonDatum) -> WatsonDefect:
    L = w.lattice
    f = w.f
    gaps = []
    for a, v in zip(w.a, w.basis):
        s = _sgn(a)
        gaps.append(L.norm([x - s * y for x, y in zip(f, v)]) - L.norm(v))
    defect = w.A - 2 * w.d
    identity = defect * L.norm(f) == sum(abs(a) * g for a, g in zip(w.a, gaps))
    minimal = all(L.is_minimal(v) for v in w.basis)
    violations = []
    if not identity:
        violations.append("Watson identity fails numerically")
    if not minimal:
        violations.append("some f_i is not minimal")
    if defect < 0:
        violations.append(f"A - 2d = {defect} < 0 contradicts the Watson inequality for minimal f_i")
    if minimal and defect == 0 and any(g != 0 for g in gaps):
        violations.append("equality holds but some f - sgn(a_i) f_i is not minimal")
    return WatsonDefect(defect, tuple(gaps), identity, minimal, tuple(violations))


@dataclass(frozen=True)
class ConditionReport:
    bounded: bool
    at_half: tuple[int, ...]
    at_most_one_half: bool
    violations: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def watson_condition_checks(w: WatsonDatum) -> ConditionReport:
    """|a_i| <= d/2 for all i and, for d >= 4, |a_i| = d/2 for at most one i."""
    d = w.d
    violations = []
    over = [i for i, a in enumerate(w.a) if 2 * abs(a) > d]
    if over:
        violations.append(f"|a_i| > d/2 at indices {over}")
    half = tuple(i for i, a in enumerate(w.a) if 2 * abs(a) == d)
    one = len(half) <= 1 or d < 4
    if not one:
        violations.append(f"|a_i| = d/2 at {len(half)} indices {list(half)}")
    return ConditionReport(not over, half, one, tuple(violations))


def watson_relation(w: WatsonDatum, label: str = ""):
    """sum a_i p_{f_i} = sum a_i p_{f - f_i} for a datum satisfying Watson's condition.

    A TwoBasisRelation when l = n, otherwise a PerfectionRelation on the 2l lines.
    """
    w = w.normalized()
    rep = watson_defect(w)
    if rep.defect != 0:
        raise WatsonError(f"Watson's condition fails: A - 2d = {rep.defect}")
    if rep.violations:
        raise WatsonError("; ".join(rep.violations))
    L = w.lattice
    right = tuple(tuple(x - y for x, y in zip(w.f, v)) for v in w.basis)
    # formal check: sum a_i N(f_i) == sum a_i N(f - f_i) over every Gram
    if not verify_formal_identity(
        [(a, v) for a, v in zip(w.a, w.basis)], [(a, v) for a, v in zip(w.a, right)]
    ):
        raise RelationError("Watson relation fails as a formal identity")
    if not all(L.is_minimal(v) for v in right):
        raise RelationError("some f - f_i is not minimal")
    if w.ell == L.n:
        return TwoBasisRelation(L, w.basis, right, w.a, w.a, label)
    terms = [(a, v) for a, v in zip(w.a, w.basis)] + [(-a, v) for a, v in zip(w.a, right)]
    return PerfectionRelation.combine(terms)


# --- the d = 5 identity -----------------------------------------------------

ZAHAREVA_ASSIGNMENTS = ("f'-f_i | f-f_i", "f-f_i | f'-f_i")


def _zahareva_vectors(f, fprime, basis, m1, assignment):
    first, second = (fprime, f) if assignment == ZAHAREVA_ASSIGNMENTS[0] else (f, fprime)
    out = []
    for i, v in enumerate(basis):
        base = first if i < m1 else second
        out.append(tuple(x - y for x, y in zip(base, v)))
    return out


def zahareva_identity(m1: int, m2: int, assignment: str = ZAHAREVA_ASSIGNMENTS[0], d: int = 5) -> bool:
    """Formal check of sum (N(f'_i) - N(f_i)) = (m2 - 4) N(f) + (m1 - 4) N(f').

    Here f = (f_1 + .. + f_m1 + 2 f_{m1+1} + .. + 2 f_l)/5 over formal vectors f_i,
    f' = 2f - sum_{i > m1} f_i, and ``assignment`` says which of f', f is
    reduced by f_i for the first m1 indices and which for the rest.
    """
    if d == 7:
        raise ReservedCaseNotImplemented("the d = 7 identity is not available")
    if d != 5:
        raise WatsonError("identity is defined for d = 5 only")
    if assignment not in ZAHAREVA_ASSIGNMENTS:
        raise ValueError(f"assignment must be one of {ZAHAREVA_ASSIGNMENTS}")
    ell = m1 + m2
    a = [1] * m1 + [2] * m2
    unit = [tuple(Fraction(int(i == k)) for k in range(ell)) for i in range(ell)]
    f = tuple(Fraction(a[k], 5) for k in range(ell))
    fprime = tuple(2 * f[k] - (1 if k >= m1 else 0) for k in range(ell))
    fi = _zahareva_vectors(f, fprime, unit, m1, assignment)
    lhs = [(1, v) for v in fi] + [(-1, u) for u in unit]
    rhs = [(m2 - 4, f), (m1 - 4, fprime)]
    return verify_formal_identity(lhs, rhs)


def zahareva_assignment(m1: int = 4, m2: int = 4) -> str:
    """The unique assignment under which the d = 5 identity verifies formally."""
    ok = [s for s in ZAHAREVA_ASSIGNMENTS if zahareva_identity(m1, m2, s)]
    if len(ok) != 1:
        raise WatsonError(f"expected exactly one valid assignment, found {ok}")
    return ok[0]


def zahareva_relation(w: WatsonDatum, label: str = "") -> TwoBasisRelation:
    """sum p_{f_i} = sum p_{f'_i} for d = 5, l = 8 and m1 = m2 = 4."""
    if w.d == 7:
        raise ReservedCaseNotImplemented("the d = 7 relation is not available")
    w = w.normalized()
    if w.d != 5 or w.ell != 8 or sorted(w.a) != [1] * 4 + [2] * 4:
        raise WatsonError("needs d = 5, l = 8 and m1 = m2 = 4")
    order = sorted(range(8), key=lambda i: w.a[i])
    basis = [w.basis[i] for i in order]
    L = w.lattice
    if L.n != 8:
        raise WatsonError("the relation is a two-basis relation in dimension 8")
    assignment = zahareva_assignment(4, 4)
    f = w.f
    fprime = tuple(2 * f[k] - sum(v[k] for v in basis[4:]) for k in range(L.n))
    right = _zahareva_vectors(f, fprime, basis, 4, assignment)
    if not verify_formal_identity([(1, v) for v in basis], [(1, v) for v in right]):
        raise RelationError("norm sums differ formally")
    if not all(L.is_minimal(v) for v in basis):
        raise RelationError("some f_i is not minimal")
    if not all(L.is_minimal(v) for v in right):
        raise RelationError("some f'_i is not minimal")
    ones = (1,) * 8
    return TwoBasisRelation(L, tuple(basis), tuple(right), ones, ones, label)


# --- coset components -----------------------------------------------------


@dataclass(frozen=True)
class LengthReport:
    witnesses: tuple[int | None, ...]
    cyclic_all_nonzero: bool | None

    @property
    def passed(self) -> bool:
        return all(w is not None for w in self.witnesses) and self.cyclic_all_nonzero is not False


def length_condition(rel: TwoBasisRelation) -> LengthReport:
    """For each coordinate j, a glue generator of Lambda/Lambda_0 with non-integral j-th component.

    Every coset representative is an integer combination of the glue generators,
    so a coordinate integral on all generators is integral on all of Lambda.
    For a cyclic quotient, also reports whether every glue coefficient is nonzero.
    """
    from .quotient import relation_quotient

    q = relation_quotient(rel)
    witnesses = []
    for j in range(rel.n):
        hit = next((i for i, g in enumerate(q.glue_generators) if g[j].denominator != 1), None)
        witnesses.append(hit)
    cyclic = None
    if len(q.invariant_factors) == 1:
        cyclic = all(x != 0 for x in q.glue_generators[0])
    return LengthReport(tuple(witnesses), cyclic)

