"""Named lattices and relations, rebuilt from coordinates and re-certified on every load."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactla import RationalMatrix, as_rational, determinant, inverse, lattice_basis, solve
from .lattice import Lattice, LatticeError, minimal_vectors
from .perfection import TwoBasisRelation, perfection_rank
from .quotient import relation_quotient
from .watson import WatsonDatum, watson_relation, zahareva_relation


class CatalogError(LatticeError):
    pass


class NoFrame(CatalogError):
    pass


H = Fraction(1, 2)


@dataclass(frozen=True)
class EmbeddedLattice:
    """A lattice together with its basis written in an ambient orthonormal coordinate system."""

    lattice: Lattice
    basis: tuple[tuple[Fraction, ...], ...]

    def coords(self, v: Sequence) -> tuple[int, ...]:
        c = solve(RationalMatrix.from_columns(self.basis), [as_rational(x) for x in v])
        if c is None or any(x.denominator != 1 for x in c):
            raise CatalogError(f"{v} is not in the lattice")
        return tuple(int(x) for x in c)

    def ambient(self, x: Sequence[int]) -> tuple[Fraction, ...]:
        dim = len(self.basis[0])
        return tuple(sum((c * b[k] for c, b in zip(x, self.basis)), Fraction(0)) for k in range(dim))


def _embedded(basis, label: str) -> EmbeddedLattice:
    basis = tuple(tuple(as_rational(x) for x in b) for b in basis)
    gram = [[sum(x * y for x, y in zip(b, c)) for c in basis] for b in basis]
    return EmbeddedLattice(Lattice(gram, label), basis)


def _unit(dim: int, i: int, c=1) -> list[Fraction]:
    v = [Fraction(0)] * dim
    v[i] = Fraction(c)
    return v


def _eps(dim: int, *pairs) -> tuple[Fraction, ...]:
    """Sum of c * eps_i over (i, c) pairs, 1-based indices."""
    v = [Fraction(0)] * dim
    for i, c in pairs:
        v[i - 1] += c
    return tuple(v)


def _e8_simple_roots() -> list[tuple[Fraction, ...]]:
    roots = [tuple(H if k in (0, 7) else -H for k in range(8)), _eps(8, (1, 1), (2, 1))]
    for i in range(1, 7):
        roots.append(_eps(8, (i + 1, 1), (i, -1)))
    return roots


@lru_cache(maxsize=None)
def root_system(name: str, n: int | None = None) -> EmbeddedLattice:
    """Root lattices (and Z^n, E6*) with a basis in orthonormal coordinates; minimum 2 except Z^n."""
    key = name.upper()
    if key in ("ZN", "AN", "DN"):
        if n is None or n < 1:
            raise CatalogError(f"{name} needs a dimension n >= 1")
    if key == "ZN":
        return _embedded([_unit(n, i) for i in range(n)], f"Z{n}")
    if key == "AN":
        return _embedded([_eps(n + 1, (i, 1), (i + 1, -1)) for i in range(1, n + 1)], f"A{n}")
    if key == "DN":
        if n < 2:
            raise CatalogError("D_n needs n >= 2")
        basis = [_eps(n, (i, 1), (i + 1, -1)) for i in range(1, n)] + [_eps(n, (n - 1, 1), (n, 1))]
        return _embedded(basis, f"D{n}")
    if n is not None and (key, n) not in (("E6", 6), ("E6DUAL", 6), ("E7", 7), ("E8", 8)):
        raise CatalogError(f"{name} has no dimension {n}")
    roots = _e8_simple_roots()
    if key == "E8":
        return _embedded(roots, "E8")
    if key == "E7":
        return _embedded(roots[:7], "E7")
    if key == "E6":
        return _embedded(roots[:6], "E6")
    if key == "E6DUAL":
        E6 = root_system("E6")
        ginv = inverse(E6.lattice.gram)
        # dual basis B G^{-1}, living in the span of E6
        dual = [tuple(sum((ginv[j, i] * E6.basis[j][k] for j in range(6)), Fraction(0)) for k in range(8))
                for i in range(6)]
        return _embedded(dual, "E6*")
    raise CatalogError(f"unknown root lattice {name!r}")


def root_lattice(name: str, n: int | None = None) -> Lattice:
    return root_system(name, n).lattice


# --- orthogonal frames ------------------------------------------------------


def _frame_eps(name: str, n: int | None) -> list[tuple[Fraction, ...]]:
    key = name.upper()
    if key == "DN":
        if n is None or n < 4 or n % 2:
            raise NoFrame(f"no orthogonal frame of minimal vectors in D{n}: needs n even and n >= 4")
        out = []
        for i in range(1, n, 2):
            out += [_eps(n, (i, 1), (i + 1, 1)), _eps(n, (i, 1), (i + 1, -1))]
        return out
    if key in ("E7", "E8"):
        out = []
        for i in (1, 3, 5):
            out += [_eps(8, (i, 1), (i + 1, 1)), _eps(8, (i, 1), (i + 1, -1))]
        if key == "E8":
            out.append(_eps(8, (7, 1), (8, 1)))
        out.append(_eps(8, (7, 1), (8, -1)))
        return out
    raise NoFrame(f"no catalog frame for {name}")


def orthogonal_frame(name: str, n: int | None = None) -> list[tuple[int, ...]]:
    """n mutually orthogonal minimal vectors (lattice coordinates) in D_n (n even >= 4), E7 or E8."""
    key = name.upper()
    if key in ("E7", "E8"):
        n = int(key[1])
    emb = root_system(key, n if key == "DN" else None)
    return [emb.coords(v) for v in _frame_eps(key, n)]


def find_orthogonal_frame(L: Lattice) -> list[tuple[int, ...]] | None:
    """Exhaustive search for n pairwise orthogonal minimal vectors, or None."""
    S = list(minimal_vectors(L).vectors)
    n = L.n
    ortho = {i: {j for j in range(len(S)) if j > i and L.inner(S[i], S[j]) == 0} for i in range(len(S))}
    chosen: list[int] = []

    def rec(cands: set[int]) -> bool:
        if len(chosen) == n:
            return True
        if len(chosen) + len(cands) < n:
            return False
        for i in sorted(cands):
            chosen.append(i)
            if rec(cands & ortho[i]):
                return True
            chosen.pop()
        return False

    return [S[i] for i in chosen] if rec(set(range(len(S)))) else None


def second_frame(L: Lattice, frame: Sequence[Sequence[int]]) -> list[tuple[int, ...]] | None:
    """First orthogonal frame of minimal vectors (in enumeration order) sharing no line with
    ``frame`` and generating, together with it, the whole of L."""
    n = L.n
    taken = {_line(v) for v in frame}
    S = [v for v in minimal_vectors(L).vectors if _line(v) not in taken]
    ortho = {i: {j for j in range(len(S)) if j > i and L.inner(S[i], S[j]) == 0} for i in range(len(S))}
    chosen: list[int] = []

    def generates_all() -> bool:
        B = lattice_basis(list(frame) + [S[i] for i in chosen])
        return abs(determinant(RationalMatrix.from_columns(B))) == 1

    def rec(cands: set[int]) -> bool:
        if len(chosen) == n:
            return generates_all()
        if len(chosen) + len(cands) < n:
            return False
        for i in sorted(cands):
            chosen.append(i)
            if rec(cands & ortho[i]):
                return True
            chosen.pop()
        return False

    return [S[i] for i in chosen] if rec(set(range(len(S)))) else None


def frame_relation(name: str, n: int | None = None) -> TwoBasisRelation:
    """sum p_{e_i} = sum p_{e'_i} between two orthogonal frames of minimal vectors.

    D_n: e' is the image of the frame under the coordinate permutation
    (2,3)(4,5)...(n-2,n-1). E7, E8: e' is the frame found by ``second_frame``.
    """
    key = name.upper()
    if key in ("E7", "E8"):
        n = int(key[1])
    emb = root_system(key, n if key == "DN" else None)
    frame = _frame_eps(key, n)
    if key == "DN":
        perm = list(range(n))
        for i in range(1, n - 2, 2):
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        second = [tuple(v[perm[k]] for k in range(n)) for v in frame]
        label = f"D{n} frame"
    else:
        label = f"{key} frame"
    e = [emb.coords(v) for v in frame]
    if key == "DN":
        ep = [emb.coords(v) for v in second]
    else:
        ep = second_frame(emb.lattice, e)
        if ep is None:
            raise CatalogError(f"no second frame found in {key}")
    if {_line(v) for v in e} & {_line(v) for v in ep}:
        raise CatalogError("the second frame shares a line with the first")
    ones = (1,) * len(e)
    return TwoBasisRelation(emb.lattice, tuple(e), tuple(ep), ones, ones, label)


def _line(v):
    first = next(x for x in v if x)
    return tuple(x if first > 0 else -x for x in v)


# --- lattices glued over a sublattice -----------------------------------------


def glued_lattice(G0, generators: Sequence[Sequence], label: str = "") -> tuple[Lattice, RationalMatrix]:
    """Lattice spanned by rational ``generators`` (coordinates on a basis with Gram G0).

    Returns the lattice on an HNF basis and the basis matrix B (columns), so that
    a vector with coordinates v on the G0-basis has lattice coordinates B^{-1} v.
    """
    G0 = G0 if isinstance(G0, RationalMatrix) else RationalMatrix.from_rows(G0)
    B = RationalMatrix.from_columns(lattice_basis(generators))
    return Lattice(B.T @ G0 @ B, label), B


def _to_coords(B: RationalMatrix, v) -> tuple[int, ...]:
    c = solve(B, [as_rational(x) for x in v])
    if c is None or any(x.denominator != 1 for x in c):
        raise CatalogError(f"{v} is not in the glued lattice")
    return tuple(int(x) for x in c)


def irregular_e8_relation() -> TwoBasisRelation:
    """sum_{i odd} p_{e_i} + 3 sum_{i even} p_{e_i} = 2 sum_j p_{e'_j} in E8.

    Built on an orthogonal frame with Gram 2 I_8, with f_1 = e4+e6+e8,
    f_3 = e2-e4+e8, f_5 = e2+e4-e6, f_7 = e2+e6-e8 and e'_i, e'_{i+1} = (+-e_i + f_i)/2.
    """
    frame = [tuple(Fraction(int(i == k)) for k in range(8)) for i in range(8)]

    def comb(*pairs):
        return tuple(sum((c * frame[i - 1][k] for i, c in pairs), Fraction(0)) for k in range(8))

    f = {1: comb((4, 1), (6, 1), (8, 1)), 3: comb((2, 1), (4, -1), (8, 1)),
         5: comb((2, 1), (4, 1), (6, -1)), 7: comb((2, 1), (6, 1), (8, -1))}
    second = []
    for i in (1, 3, 5, 7):
        second.append(tuple((frame[i - 1][k] + f[i][k]) / 2 for k in range(8)))
        second.append(tuple((-frame[i - 1][k] + f[i][k]) / 2 for k in range(8)))
    G0 = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    L, B = glued_lattice(G0, frame + second, "E8")
    e = tuple(_to_coords(B, v) for v in frame)
    ep = tuple(_to_coords(B, v) for v in second)
    return TwoBasisRelation(L, e, ep, (1, 3) * 4, (2,) * 8, "E8 irregular")


def watson_ansatz_gram(d: int, a: Sequence[int]) -> RationalMatrix:
    """Gram of f_1..f_l with N(f_i) = 1 and f_i . f_j constant on pairs of coefficient classes.

    The constants solve f . f_i = 1/2 for every class, where f = (sum a_i f_i)/d.
    """
    a = [abs(int(x)) for x in a]
    if sum(a) != 2 * d:
        raise CatalogError(f"the ansatz needs sum |a_i| = 2d, got {sum(a)} and d = {d}")
    classes = sorted(set(a))
    size = {c: a.count(c) for c in classes}
    pairs = [(p, q) for i, p in enumerate(classes) for q in classes[i:] if p != q or size[p] > 1]
    if len(pairs) != len(classes):
        raise CatalogError(f"ansatz system has {len(pairs)} unknowns for {len(classes)} equations")
    # equation for class p: a_p + sum_{j != i} a_j x_{p, cls(j)} = d/2
    rows, rhs = [], []
    for p in classes:
        row = []
        for (u, v) in pairs:
            coef = 0
            if p in (u, v):
                q = v if p == u else u
                coef = q * (size[q] - (1 if q == p else 0))
            row.append(coef)
        rows.append(row)
        rhs.append(Fraction(d, 2) - p)
    x = solve(RationalMatrix.from_rows(rows), rhs)
    if x is None:
        raise CatalogError("ansatz system is inconsistent")
    if len(classes) > 1 and any(r == [0] * len(pairs) for r in rows):
        raise CatalogError("ansatz system is degenerate")
    val = {}
    for (u, v), s in zip(pairs, x):
        val[(u, v)] = val[(v, u)] = s
    n = len(a)
    return RationalMatrix.from_rows(
        [[Fraction(1) if i == j else val[(a[i], a[j])] for j in range(n)] for i in range(n)]
    )


def watson_lattice(G0, a: Sequence[int], d: int, label: str = "") -> tuple[Lattice, WatsonDatum]:
    """Lambda = <f_i, (sum a_i f_i)/d> over the Gram G0 of the f_i, with its Watson datum."""
    n = len(a)
    units = [tuple(Fraction(int(i == k)) for k in range(n)) for i in range(n)]
    glue = tuple(Fraction(x, d) for x in a)
    L, B = glued_lattice(G0, units + [glue], label)
    basis = tuple(_to_coords(B, u) for u in units)
    return L, WatsonDatum(L, basis, tuple(a), d)


def watson_ansatz_lattice(d: int, a: Sequence[int]) -> tuple[Lattice, WatsonDatum]:
    G0 = watson_ansatz_gram(d, a)
    L, w = watson_lattice(G0, a, d, f"watson d={d} a={tuple(a)}")
    if L.minimum != 1:
        raise CatalogError(f"ansatz lattice has minimum {L.minimum}, not 1")
    return L, w


@dataclass(frozen=True)
class Example61:
    lattice: Lattice
    relation: TwoBasisRelation
    f: tuple[int, ...]
    glue: tuple[int, ...]


def example_6_1() -> Example61:
    """Index-4 relation in dimension 7 over Lambda_0 with Gram 2 I_7 and glue (e1+..+e4+2e5+2e6+2e7)/4."""
    n = 7
    units = [tuple(Fraction(int(i == k)) for k in range(n)) for i in range(n)]
    e = tuple(Fraction(x, 4) for x in (1, 1, 1, 1, 2, 2, 2))
    f = tuple(Fraction(x, 2) for x in (1, 1, 1, 1, 0, 0, 0))

    def minus(v, *idx):
        return tuple(v[k] - sum(units[i - 1][k] for i in idx) for k in range(n))

    second = [e, minus(e, 6, 7), minus(e, 5, 7), minus(e, 5, 6), minus(f, 3, 4), minus(f, 2, 4), minus(f, 2, 3)]
    G0 = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    L, B = glued_lattice(G0, units + [e], "example 6.1")
    rel = TwoBasisRelation(
        L, tuple(_to_coords(B, u) for u in units), tuple(_to_coords(B, v) for v in second),
        (1,) * n, (1,) * n, "example 6.1",
    )
    return Example61(L, rel, _to_coords(B, f), _to_coords(B, e))


def zahareva_lattice(alpha, beta=0) -> tuple[Lattice, WatsonDatum]:
    """Dimension-8 lattice <f_i, f> with f = (f1+..+f4 + 2(f5+..+f8))/5 and N(f_i) = 1.

    Inner products: alpha inside the first four, beta across, alpha + 2 beta
    inside the last four; with that choice every f - f_i (i > 4) has norm 1.
    """
    alpha, beta = as_rational(alpha), as_rational(beta)
    gamma = alpha + 2 * beta
    cls = [0] * 4 + [1] * 4
    table = {(0, 0): alpha, (0, 1): beta, (1, 0): beta, (1, 1): gamma}
    G0 = [[Fraction(1) if i == j else table[(cls[i], cls[j])] for j in range(8)] for i in range(8)]
    return watson_lattice(G0, (1,) * 4 + (2,) * 4, 5, f"zahareva alpha={alpha} beta={beta}")


ZAHAREVA_ALPHA = Fraction(1, 6)


def zahareva_example() -> TwoBasisRelation:
    L, w = zahareva_lattice(ZAHAREVA_ALPHA)
    if L.minimum != 1:
        raise CatalogError(f"realization has minimum {L.minimum}")
    return zahareva_relation(w, "zahareva d=5")


# --- named entries ----------------------------------------------------------

E6DUAL_PAPER_RELATION_DIM = 9


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    lattice: Lattice
    relations: tuple[TwoBasisRelation, ...] = ()
    expected: dict = field(default_factory=dict)
    tags: tuple[str, ...] = ()
    notes: str = ""

    @property
    def relation(self) -> TwoBasisRelation | None:
        return self.relations[0] if self.relations else None


def _lattice_entry(name, L, exp, tags, notes=""):
    return CatalogEntry(name, L, (), exp, tags, notes)


def _relation_entry(name, rel, exp, tags, notes=""):
    return CatalogEntry(name, rel.lattice, (rel,), exp, tags, notes)


def _build(name: str) -> CatalogEntry:
    if name == "Z4":
        return _lattice_entry(name, root_lattice("Zn", 4), dict(min=1, s=4, r=4), ("z",))
    if name in ("D4", "E6", "E7", "E8", "E6dual"):
        exp = {
            "D4": dict(min=2, s=12, r=10, relation_dim=2),
            "E6": dict(min=2, s=36, r=21, relation_dim=15),
            "E7": dict(min=2, s=63, r=28, relation_dim=35),
            "E8": dict(min=2, s=120, r=36, relation_dim=84),
            "E6dual": dict(min=Fraction(4, 3), s=27, r=21, relation_dim=6),
        }[name]
        L = root_lattice("Dn", 4) if name == "D4" else root_lattice(name)
        notes = ""
        if name == "E6dual":
            notes = f"computed relation dimension 6; the value printed for E6* is {E6DUAL_PAPER_RELATION_DIM}"
        return _lattice_entry(name, L, exp, (name.lower(), "root"), notes)
    if name in ("d4-frame", "d6-frame", "d8-frame"):
        n = int(name[1])
        k = 2 ** ((n - 2) // 2)
        return _relation_entry(name, frame_relation("Dn", n), dict(min=2, index=k, index_prime=k),
                               ("frame", f"d{n}", "2-elementary"))
    if name in ("e7-frame", "e8-frame"):
        k = {"e7-frame": 8, "e8-frame": 16}[name]
        return _relation_entry(name, frame_relation(name[:2]), dict(min=2, index=k, index_prime=k),
                               ("frame", name[:2], "2-elementary"))
    if name == "e8-irregular":
        return _relation_entry(name, irregular_e8_relation(),
                               dict(min=2, s=120, index=16, factors=(2, 2, 2, 2), factors_prime=(3, 3)),
                               ("e8", "irregular", "2-elementary"))
    if name == "thm5.1":
        L, w = watson_ansatz_lattice(3, (1,) * 6)
        return _relation_entry(name, watson_relation(w, "watson index 3"), dict(min=1, index=3, factors=(3,)),
                               ("watson", "index3"))
    if name == "ex6.2":
        L, w = watson_ansatz_lattice(4, (1,) * 6 + (2,))
        return _relation_entry(name, watson_relation(w, "example 6.2"), dict(min=1, index=4, factors=(4,)),
                               ("watson", "index4"))
    if name == "ex6.3":
        L, w = watson_ansatz_lattice(4, (1,) * 8)
        return _relation_entry(name, watson_relation(w, "example 6.3"), dict(min=1, index=4, factors=(4,)),
                               ("watson", "index4"))
    if name == "ex6.1":
        ex = example_6_1()
        return _relation_entry(name, ex.relation, dict(min=2, index=4, factors=(4,)), ("index4",))
    if name == "zahareva-d5":
        return _relation_entry(name, zahareva_example(), dict(min=1, index=5, factors=(5,)),
                               ("zahareva", "index5"))
    raise CatalogError(f"unknown catalog entry {name!r}")


ENTRY_NAMES = (
    "Z4", "D4", "E6", "E6dual", "E7", "E8",
    "d4-frame", "d6-frame", "d8-frame", "e7-frame", "e8-frame", "e8-irregular",
    "thm5.1", "ex6.1", "ex6.2", "ex6.3", "zahareva-d5",
)

ALIASES = {
    "watson-index3": "thm5.1",
    "example-6.1": "ex6.1",
    "example-6.2": "ex6.2",
    "example-6.3": "ex6.3",
    "E6*": "E6dual",
}


def verify_entry(entry: CatalogEntry) -> dict:
    """Recompute every expected invariant; raise CatalogError naming the first mismatch."""
    exp = entry.expected
    got = {}
    L = entry.lattice
    if "min" in exp:
        got["min"] = L.minimum
    if {"s", "r", "relation_dim"} & exp.keys():
        S = minimal_vectors(L)
        prof = perfection_rank(S.vectors)
        got.update(s=prof.s, r=prof.r, relation_dim=prof.relation_dim)
    if entry.relation is not None:
        q, qp = relation_quotient(entry.relation), relation_quotient(entry.relation, prime=True)
        got.update(index=q.index, index_prime=qp.index, factors=q.invariant_factors,
                   factors_prime=qp.invariant_factors)
    for key, value in exp.items():
        if got.get(key) != value:
            raise CatalogError(f"{entry.name}: expected {key} = {value}, computed {got.get(key)}")
    return {k: got[k] for k in exp}


def load_entry(name: str) -> CatalogEntry:
    return _load_verified(ALIASES.get(name, name))


@lru_cache(maxsize=None)
def _load_verified(name: str) -> CatalogEntry:
    entry = _build(name)
    verify_entry(entry)
    return entry


def relation_entries() -> list[CatalogEntry]:
    return [load_entry(n) for n in ENTRY_NAMES if load_entry(n).relations]
