"""Exact rational linear algebra and a small polynomial engine over Gram entries.

Scalars are :class:`fractions.Fraction` throughout. Nothing here touches a float.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, NamedTuple, Sequence

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as an exact rational")


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry count does not match the stated shape")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "RationalMatrix":
        data = tuple(tuple(as_rational(x) for x in r) for r in rows)
        ncols = len(data[0]) if data else 0
        return cls(len(data), ncols, data)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "RationalMatrix":
        return cls.from_rows(zip(*cols)) if cols else cls(0, 0, ())

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, tuple((Fraction(0),) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence) -> "RationalMatrix":
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ())

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ocols = other.columns()
        return RationalMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ocols) for r in self.entries),
        )

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum((a * as_rational(b) for a, b in zip(r, v)), Fraction(0)) for r in self.entries)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RationalMatrix(
            self.rows, self.cols,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "RationalMatrix":
        c = as_rational(c)
        return RationalMatrix(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.entries))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == self.entries[j][i] for i in range(self.rows) for j in range(i)
        )

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def __str__(self):
        return "\n".join(" ".join(str(a) for a in r) for r in self.entries)


def _as_rows(M) -> list[list[Fraction]]:
    if isinstance(M, RationalMatrix):
        return M.tolist()
    return [[as_rational(x) for x in r] for r in M]


def _integer_rows(rows: list[list[Fraction]]) -> list[list[int]]:
    # Row scaling does not change rank, kernel or the vanishing pattern of minors.
    out = []
    for r in rows:
        den = reduce(lcm, (x.denominator for x in r), 1)
        out.append([int(x * den) for x in r])
    return out


def _bareiss_echelon(A: list[list[int]]) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free echelon form. Returns (matrix, pivot columns, sign of row permutation)."""
    M = [list(r) for r in A]
    m = len(M)
    n = len(M[0]) if M else 0
    prev = 1
    r = 0
    sign = 1
    pivots = []
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            M[r], M[p] = M[p], M[r]
            sign = -sign
        piv = M[r][c]
        for i in range(r + 1, m):
            mi = M[i][c]
            row_i = M[i]
            row_r = M[r]
            for j in range(c + 1, n):
                row_i[j] = (row_i[j] * piv - mi * row_r[j]) // prev
            row_i[c] = 0
        # entries left of c in rows below r are already zero
        prev = piv
        pivots.append(c)
        r += 1
    return M, pivots, sign


def rank_exact(M) -> int:
    """Rank over the rationals by fraction-free elimination."""
    rows = _as_rows(M)
    if not rows or not rows[0]:
        return 0
    _, pivots, _ = _bareiss_echelon(_integer_rows(rows))
    return len(pivots)


def determinant(M) -> Fraction:
    """Exact determinant of a square matrix (Bareiss)."""
    rows = _as_rows(M)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    scale = 1
    ints = []
    for r in rows:
        den = reduce(lcm, (x.denominator for x in r), 1)
        scale *= den
        ints.append([int(x * den) for x in r])
    E, pivots, sign = _bareiss_echelon(ints)
    if len(pivots) < n:
        return Fraction(0)
    return Fraction(sign * E[n - 1][n - 1], scale)


def leading_minors(M) -> list[Fraction]:
    rows = _as_rows(M)
    return [determinant([r[:k] for r in rows[:k]]) for k in range(1, len(rows) + 1)]


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals, with its pivot columns."""
    R = _as_rows(M)
    m = len(R)
    n = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def primitive_integer(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to coprime integers, first nonzero entry positive."""
    v = [as_rational(x) for x in v]
    den = reduce(lcm, (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, ints, 0)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    first = next(x for x in ints if x != 0)
    if first < 0:
        g = -g
    return tuple(x // g for x in ints)


def nullspace_basis(M) -> list[tuple[int, ...]]:
    """Canonical basis of the right kernel: primitive integer vectors, lex-sorted."""
    rows = _as_rows(M)
    if isinstance(M, RationalMatrix):
        n = M.cols
    else:
        n = len(rows[0]) if rows else 0
    R, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(primitive_integer(v))
    return sorted(basis)


def solve(M, b) -> tuple[Fraction, ...] | None:
    """One solution x of M x = b, or None if the system is inconsistent."""
    rows = _as_rows(M)
    n = len(rows[0]) if rows else 0
    aug = [r + [as_rational(x)] for r, x in zip(rows, b)]
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = R[i][n]
    return tuple(x)


def inverse(M) -> RationalMatrix:
    rows = _as_rows(M)
    n = len(rows)
    aug = [r + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return RationalMatrix.from_rows([r[n:] for r in R])


def inertia(M) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric rational matrix.

    Symmetric elimination by congruences; a zero diagonal with a nonzero
    off-diagonal entry is repaired by adding one basis vector to another.
    """
    S = _as_rows(M)
    n = len(S)
    if any(S[i][j] != S[j][i] for i in range(n) for j in range(i)):
        raise ValueError("inertia needs a symmetric matrix")
    pos = neg = 0
    active = list(range(n))
    while active:
        p = next((i for i in active if S[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in active for j in active if i != j and S[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # x_i -> x_i + x_j on both sides
            for k in range(n):
                S[i][k] += S[j][k]
            for k in range(n):
                S[k][i] += S[k][j]
            p = i
        a = S[p][p]
        if a > 0:
            pos += 1
        else:
            neg += 1
        active.remove(p)
        for k in active:
            f = S[k][p] / a
            if f:
                for l in active:
                    S[k][l] -= f * S[p][l]
        for k in active:
            S[k][p] = S[p][k] = Fraction(0)
    return pos, neg, n - pos - neg


# --- integer normal forms -------------------------------------------------


class SmithForm(NamedTuple):
    factors: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]


def _to_int_matrix(A) -> list[list[int]]:
    rows = _as_rows(A)
    if any(x.denominator != 1 for r in rows for x in r):
        raise ValueError("Smith normal form needs an integer matrix")
    return [[int(x) for x in r] for r in rows]


def smith_normal_form(A) -> SmithForm:
    """Smith normal form ``U A V = D`` with unimodular ``U`` and ``V``.

    ``factors`` is the diagonal of ``D`` (length ``min(rows, cols)``), each
    dividing the next, zeros last.
    """
    D = _to_int_matrix(A)
    m = len(D)
    n = len(D[0]) if D else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row dst += k * row src
        D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        for r in D:
            r[dst] += k * r[src]
        for r in V:
            r[dst] += k * r[src]

    for t in range(min(m, n)):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j] != 0]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, -q)
                    if D[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # pivot must divide the whole remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    factors = tuple(D[i][i] for i in range(min(m, n)))
    return SmithForm(factors, tuple(map(tuple, U)), tuple(map(tuple, V)))


def hermite_row_basis(generators: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis (row Hermite normal form) of the integer span of the given rows."""
    H = [list(map(int, g)) for g in generators]
    if not H:
        return []
    n = len(H[0])
    basis = []
    r = 0
    for c in range(n):
        rows = [i for i in range(r, len(H)) if H[i][c] != 0]
        if not rows:
            continue
        # gcd-reduce column c into a single row
        while len(rows) > 1:
            rows.sort(key=lambda i: abs(H[i][c]))
            p = rows[0]
            for i in rows[1:]:
                q = H[i][c] // H[p][c]
                H[i] = [a - q * b for a, b in zip(H[i], H[p])]
            rows = [i for i in rows if H[i][c] != 0]
        p = rows[0]
        H[r], H[p] = H[p], H[r]
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
        r += 1
    return [tuple(h) for h in H[:r]]


def lattice_basis(generators: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Basis of the Z-span of rational generator vectors (Hermite form after clearing denominators)."""
    gens = [[as_rational(x) for x in g] for g in generators]
    den = reduce(lcm, (x.denominator for g in gens for x in g), 1)
    H = hermite_row_basis([[int(x * den) for x in g] for g in gens])
    return [tuple(Fraction(x, den) for x in h) for h in H]


# --- formal polynomials in Gram entries -----------------------------------


def _var_index(n: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    # row-major over the upper triangle, 0-based
    return i * n - i * (i - 1) // 2 + (j - i)


class GramPolynomial:
    """Polynomial in the symbols t_{i,j} = e_i . e_j of an n-dimensional Gram matrix.

    Terms are stored sparsely; each monomial is a dense exponent tuple over
    the n(n+1)/2 symbols in the order t11, t12, ..., t1n, t22, ...
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        nv = n * (n + 1) // 2
        clean = {}
        for mono, c in (terms or {}).items():
            if len(mono) != nv:
                raise ValueError("monomial length does not match dimension")
            c = as_rational(c)
            if c:
                clean[tuple(mono)] = c
        self.terms = clean

    @classmethod
    def constant(cls, n: int, c) -> "GramPolynomial":
        return cls(n, {(0,) * (n * (n + 1) // 2): c})

    @classmethod
    def variable(cls, n: int, i: int, j: int) -> "GramPolynomial":
        """The symbol t_{i,j} (0-based indices, order irrelevant)."""
        mono = [0] * (n * (n + 1) // 2)
        mono[_var_index(n, i, j)] = 1
        return cls(n, {tuple(mono): 1})

    def _check(self, other):
        if not isinstance(other, GramPolynomial) or other.n != self.n:
            raise ValueError("polynomials live in different dimensions")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return GramPolynomial(self.n, out)

    def __neg__(self):
        return GramPolynomial(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, GramPolynomial):
            c = as_rational(other)
            return GramPolynomial(self.n, {m: c * v for m, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return GramPolynomial(self.n, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, GramPolynomial) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, i: int, j: int) -> Fraction:
        """Coefficient of the linear monomial t_{i,j}."""
        mono = [0] * (self.n * (self.n + 1) // 2)
        mono[_var_index(self.n, i, j)] = 1
        return self.terms.get(tuple(mono), Fraction(0))

    def evaluate(self, gram) -> Fraction:
        """Substitute t_{i,j} = gram[i][j]."""
        G = _as_rows(gram)
        n = self.n
        values = [G[i][j] for i in range(n) for j in range(i, n)]
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = c
            for v, e in zip(values, mono):
                if e:
                    term *= v ** e
            total += term
        return total

    def _symbols(self):
        return [f"t{i + 1},{j + 1}" for i in range(self.n) for j in range(i, self.n)]

    def __repr__(self):
        if not self.terms:
            return "0"
        names = self._symbols()
        parts = []
        for mono, c in sorted(self.terms.items(), reverse=True):
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e]
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


def formal_norm(coords: Sequence) -> GramPolynomial:
    """N(x) = sum_{k,l} x_k x_l t_{k,l} as a polynomial in the Gram symbols."""
    x = [as_rational(c) for c in coords]
    n = len(x)
    nv = n * (n + 1) // 2
    terms = {}
    for k in range(n):
        for l in range(k, n):
            c = x[k] * x[l] * (1 if k == l else 2)
            if c:
                mono = [0] * nv
                mono[_var_index(n, k, l)] = 1
                terms[tuple(mono)] = c
    return GramPolynomial(n, terms)


def weighted_norm_sum(terms: Sequence[tuple], n: int | None = None) -> GramPolynomial:
    """sum of c * N(x) over (c, x) pairs."""
    if n is None:
        if not terms:
            raise ValueError("cannot infer the dimension of an empty sum")
        n = len(terms[0][1])
    total = GramPolynomial(n)
    for c, x in terms:
        if len(x) != n:
            raise ValueError("coordinate vectors of unequal length")
        total = total + formal_norm(x) * as_rational(c)
    return total


def verify_formal_identity(lhs_terms: Sequence[tuple], rhs_terms: Sequence[tuple]) -> bool:
    """True iff sum c N(x) over lhs equals the same over rhs as polynomials in t_{i,j}.

    Either side may be empty (the zero polynomial).
    """
    sample = next(iter(list(lhs_terms) + list(rhs_terms)), None)
    if sample is None:
        return True
    n = len(sample[1])
    return weighted_norm_sum(lhs_terms, n) == weighted_norm_sum(rhs_terms, n)
