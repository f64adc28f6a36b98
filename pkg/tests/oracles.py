"""Independent reference computations used to cross-check the library.

Nothing here imports perfrel: ranks, kernels and Smith forms come from sympy,
formal norms from sympy's symbolic expansion, and short vectors from brute
force over a coefficient box or from explicit root systems.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import isqrt

import numpy as np
import sympy


def to_sympy(rows) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in rows])


def rank(rows) -> int:
    return to_sympy(rows).rank()


def det(rows) -> Fraction:
    d = to_sympy(rows).det()
    return Fraction(int(d.p), int(d.q))


def invariant_factors(rows) -> tuple[int, ...]:
    from sympy.matrices.normalforms import invariant_factors as inv

    return tuple(int(abs(x)) for x in inv(sympy.Matrix(rows), domain=sympy.ZZ))


def vectorized_projections(vectors) -> list[list[int]]:
    """Rows (x_i x_j for i <= j) in the order diagonal first, then off-diagonal row-major."""
    out = []
    for x in vectors:
        n = len(x)
        out.append([x[i] * x[i] for i in range(n)] + [x[i] * x[j] for i in range(n) for j in range(i + 1, n)])
    return out


def formal_norm_sum(terms, n: int) -> sympy.Expr:
    """sum c * x^T T x with a symbolic symmetric matrix T."""
    t = {}
    for i in range(n):
        for j in range(i, n):
            t[(i, j)] = t[(j, i)] = sympy.Symbol(f"t{i}_{j}")
    total = sympy.Integer(0)
    for c, x in terms:
        xs = [sympy.nsimplify(Fraction(v)) for v in x]
        total += sympy.nsimplify(Fraction(c)) * sum(xs[i] * xs[j] * t[(i, j)] for i in range(n) for j in range(n))
    return sympy.expand(total)


def box_short_vectors(gram, radius: int):
    """Brute force: every nonzero integer x with |x_i| <= radius; returns (min, {x up to sign})."""
    G = np.array([[float(Fraction(v)) for v in r] for r in gram])
    n = len(gram)
    best, found = None, set()
    Gf = [[Fraction(v) for v in r] for r in gram]
    for x in product(range(-radius, radius + 1), repeat=n):
        if not any(x):
            continue
        first = next(v for v in x if v)
        if first < 0:
            continue
        approx = float(np.array(x) @ G @ np.array(x))
        if best is not None and approx > float(best) + 1e-6:
            continue
        exact = sum(Gf[i][j] * x[i] * x[j] for i in range(n) for j in range(n))
        if best is None or exact < best:
            best, found = exact, {x}
        elif exact == best:
            found.add(x)
    return best, found


def box_radius(gram, bound) -> int:
    """|x_i| <= sqrt(bound * (G^{-1})_{ii}) for every x with N(x) <= bound."""
    inv = to_sympy(gram).inv()
    r = 0
    for i in range(len(gram)):
        q = Fraction(bound) * Fraction(int(sympy.fraction(inv[i, i])[0]), int(sympy.fraction(inv[i, i])[1]))
        r = max(r, isqrt(q.numerator // q.denominator) + 1)
    return r


def e8_roots() -> list[tuple[Fraction, ...]]:
    """The 240 roots of E8 = D8 + (D8 + (1/2,...,1/2)) with an even number of minus signs."""
    roots = []
    for i, j in combinations(range(8), 2):
        for si, sj in product((1, -1), repeat=2):
            v = [Fraction(0)] * 8
            v[i], v[j] = Fraction(si), Fraction(sj)
            roots.append(tuple(v))
    for signs in product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(tuple(Fraction(s, 2) for s in signs))
    return roots


def e7_roots() -> list[tuple[Fraction, ...]]:
    """Roots of E8 orthogonal to eps7 + eps8."""
    return [r for r in e8_roots() if r[6] + r[7] == 0]


def d_roots(n: int) -> list[tuple[int, ...]]:
    roots = []
    for i, j in combinations(range(n), 2):
        for si, sj in product((1, -1), repeat=2):
            v = [0] * n
            v[i], v[j] = si, sj
            roots.append(tuple(v))
    return roots


def lines(vectors) -> set:
    out = set()
    for v in vectors:
        first = next(x for x in v if x)
        out.add(tuple(x if first > 0 else -x for x in v))
    return out


def inertia_by_eigenvalues(rows) -> tuple[int, int, int]:
    """Signs of the eigenvalues of an exact symmetric matrix, via sympy's characteristic polynomial roots count."""
    M = to_sympy(rows)
    x = sympy.Symbol("x")
    p = sympy.Poly(M.charpoly(x).as_expr(), x)
    zero = 0
    while p.eval(0) == 0 and p.degree() > 0:
        p = sympy.Poly(sympy.quo(p.as_expr(), x), x)
        zero += 1
    pos = len([r for r in sympy.real_roots(p) if r > 0])
    return pos, M.rows - zero - pos, zero
