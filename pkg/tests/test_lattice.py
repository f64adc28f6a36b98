from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from perfrel.lattice import (
    DependentVectors,
    Lattice,
    LatticeError,
    NotPositiveDefinite,
    components_in_basis,
    dual_products,
    is_well_rounded,
    minimal_vectors,
    short_vectors,
    sublattice_gram,
)

H = Fraction(1, 2)


def gram_of(basis):
    return [[sum(a * b for a, b in zip(u, v)) for v in basis] for u in basis]


def unit(n, i):
    return tuple(Fraction(int(k == i)) for k in range(n))


def e8_simple_roots():
    e = [unit(8, i) for i in range(8)]
    roots = [tuple(H * s for s in (1, -1, -1, -1, -1, -1, -1, 1))]
    roots.append(tuple(a + b for a, b in zip(e[0], e[1])))
    for i in range(6):
        roots.append(tuple(a - b for a, b in zip(e[i + 1], e[i])))
    return roots


def d4_basis():
    return [(1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1), (0, 0, 1, 1)]


def ambient(basis, x):
    n = len(basis[0])
    return tuple(sum(Fraction(x[i]) * basis[i][k] for i in range(len(basis))) for k in range(n))


def test_rejects_bad_gram():
    with pytest.raises(NotPositiveDefinite):
        Lattice([[1, 2], [2, 1]])
    with pytest.raises(LatticeError):
        Lattice([[1, 2], [3, 1]])
    with pytest.raises(LatticeError):
        Lattice([[1, 0]])


def test_integer_lattice():
    S = minimal_vectors(Lattice([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert S.min == 1 and S.s == 3


def test_d4_matches_brute_force():
    G = gram_of(d4_basis())
    S = minimal_vectors(Lattice(G))
    bmin, found = oracles.box_short_vectors(G, oracles.box_radius(G, 2))
    assert S.min == bmin == 2
    assert set(S.vectors) == found
    assert S.s == 12
    assert oracles.lines(ambient(d4_basis(), x) for x in S.vectors) == oracles.lines(oracles.d_roots(4))


def test_e8_roots_match_explicit_enumeration():
    B = e8_simple_roots()
    L = Lattice(gram_of(B))
    assert L.determinant == 1
    S = minimal_vectors(L)
    assert S.min == 2 and S.s == 120
    assert oracles.lines(ambient(B, x) for x in S.vectors) == oracles.lines(oracles.e8_roots())


def test_e7_as_sublattice_of_e8():
    B = e8_simple_roots()
    sub = [B[i] for i in range(7)]
    # alpha_1..alpha_7 are orthogonal to the fundamental weight dual to alpha_8, giving E7
    L = Lattice(gram_of(sub))
    S = minimal_vectors(L)
    assert S.min == 2 and S.s == 63
    assert L.determinant == 2
    assert len(oracles.e7_roots()) == 126


def test_minimal_vectors_canonical_and_ordered():
    S = minimal_vectors(Lattice(gram_of(d4_basis())))
    assert list(S.vectors) == sorted(S.vectors, reverse=True)
    for v in S.vectors:
        assert next(x for x in v if x) > 0


def test_short_vectors_bound():
    L = Lattice(gram_of(d4_basis()))
    sv = short_vectors(L, 4)
    assert {x for v, x in sv if v == 2} == set(minimal_vectors(L).vectors)
    # D4 has 24 vectors of norm 4, 12 up to sign (frozen from brute force below)
    G = gram_of(d4_basis())
    r = oracles.box_radius(G, 4)
    from itertools import product

    brute = 0
    for x in product(range(-r, r + 1), repeat=4):
        if any(x) and next(c for c in x if c) > 0:
            if sum(G[i][j] * x[i] * x[j] for i in range(4) for j in range(4)) == 4:
                brute += 1
    assert sum(1 for v, _ in sv if v == 4) == brute == 12


def test_components_in_basis_example():
    # (1,1,1,1) on the basis e1, e2, e3, e1+e2+e3+2e4 has every component 1/2
    L = Lattice(gram_of(d4_basis()))
    c = components_in_basis(L, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 1, 2)], (1, 1, 1, 1))
    assert c == (H, H, H, H)
    assert dual_products(L, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 1, 2)], (1, 1, 1, 1)) == c
    with pytest.raises(DependentVectors):
        components_in_basis(L, [(1, 0, 0, 0)] * 4, (1, 0, 0, 0))


def test_well_rounded():
    assert is_well_rounded(Lattice(gram_of(d4_basis())))
    assert not is_well_rounded(Lattice([[1, 0], [0, 2]]))


def test_sublattice_gram():
    L = Lattice([[1, 0], [0, 1]])
    assert sublattice_gram(L, [(1, 1), (1, -1)]).gram.entries == ((2, 0), (0, 2))
    with pytest.raises(DependentVectors):
        sublattice_gram(L, [(1, 1), (2, 2)])


def test_permutation_invariance_d4():
    G = gram_of(d4_basis())
    base = minimal_vectors(Lattice(G))
    for perm in list(permutations(range(4)))[:8]:
        Gp = [[G[perm[i]][perm[j]] for j in range(4)] for i in range(4)]
        S = minimal_vectors(Lattice(Gp))
        assert S.min == base.min and S.s == base.s


@st.composite
def small_grams(draw):
    n = draw(st.integers(1, 3))
    B = draw(st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n))
    assume(oracles.det(B) != 0)
    return gram_of(B)


@settings(max_examples=120, deadline=None)
@given(small_grams())
def test_minimal_vectors_match_box_search(G):
    S = minimal_vectors(Lattice(G))
    bound = min(G[i][i] for i in range(len(G)))
    bmin, found = oracles.box_short_vectors(G, oracles.box_radius(G, bound))
    assert S.min == bmin
    assert set(S.vectors) == found
