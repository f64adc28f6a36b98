from __future__ import annotations

from fractions import Fraction

import pytest

import oracles
from perfrel.catalog import example_6_1, frame_relation, load_entry, orthogonal_frame, root_lattice, root_system
from perfrel.exactla import RationalMatrix, smith_normal_form, verify_formal_identity
from perfrel.lattice import Lattice, minimal_vectors
from perfrel.perfection import (
    PerfectionRelation,
    ProjectionLine,
    RelationError,
    TwoBasisRelation,
    a_coefficients,
    contains_relation,
    decompose_perf_irreducible,
    duality_report,
    inertia_signature,
    is_perf_irreducible,
    perfection_rank,
    projection_row,
    relation_space,
    relation_vmin,
    split_two_sided,
    verify_vmin,
)


def units(n):
    return [tuple(int(i == k) for k in range(n)) for i in range(n)]


def test_projection_line_validation():
    assert ProjectionLine.of((-2, 4)).coords == (1, -2)
    with pytest.raises(ValueError):
        ProjectionLine((2, 4))
    with pytest.raises(ValueError):
        ProjectionLine((-1, 2))


def test_projection_row_convention():
    # diagonal first, then upper off-diagonals row-major, unscaled
    assert projection_row((1, 2, 3)) == (1, 4, 9, 2, 3, 6)
    assert list(projection_row((1, 2, 3))) == oracles.vectorized_projections([(1, 2, 3)])[0]


def test_rank_of_coordinate_lines():
    prof = perfection_rank(units(5))
    assert (prof.n, prof.s, prof.r) == (5, 5, 5)
    assert prof.relation_dim == 0 and prof.cell_dim == 10 and not prof.perfect


def test_d4_perfect():
    prof = perfection_rank(minimal_vectors(root_lattice("Dn", 4)).vectors)
    assert (prof.s, prof.r, prof.relation_dim, prof.cell_dim) == (12, 10, 2, 0)
    assert prof.perfect


def test_example_6_1_ranks():
    ex = example_6_1()
    rel = ex.relation
    lines = [ProjectionLine.of(v) for v in rel.e + rel.e_prime]
    assert len(set(lines)) == 14
    assert perfection_rank(lines).r == 13
    assert perfection_rank(lines + [ProjectionLine.of(ex.f)]).r == 13
    assert oracles.rank(oracles.vectorized_projections([ln.coords for ln in lines])) == 13


def test_relation_space_trivial():
    assert relation_space(units(4)) == []


def test_two_d4_frames_give_one_relation():
    rel = frame_relation("Dn", 4)
    lines = [ProjectionLine.of(v) for v in rel.e + rel.e_prime]
    space = relation_space(lines)
    assert len(space) == 1
    assert contains_relation(lines, rel.as_relation()) is not None
    (only,) = space
    assert set(only.coefficients) == {1, -1}


def test_relation_space_is_gram_free():
    # same lines, two different lattices: the relation space depends only on the coordinates
    S = minimal_vectors(root_lattice("Dn", 4)).vectors
    a = relation_space(S)
    L2 = root_lattice("Dn", 4).scaled(Fraction(7, 3))
    b = relation_space(minimal_vectors(L2).vectors)
    assert a == b
    assert len(a) == 2


def test_relation_validation():
    with pytest.raises(RelationError):
        PerfectionRelation((ProjectionLine((1, 0)),), (1,))
    with pytest.raises(RelationError):
        PerfectionRelation((ProjectionLine((1, 0)), ProjectionLine((1, 0))), (1, -1))
    with pytest.raises(RelationError):
        # 1 * p(2,0) - 4 * p(1,0) cancels to nothing
        PerfectionRelation.combine([(1, (2, 0)), (-4, (1, 0))])
    with pytest.raises(RelationError):
        PerfectionRelation((ProjectionLine((1, 0)), ProjectionLine((0, 1))), (1, -1))


def test_combine_rescales_non_primitive_vectors():
    # p(1,1) + p(1,-1) = 2 (p(1,0) + p(0,1)); written with (2,2) the weight scales by 1/4
    rel = PerfectionRelation.combine([(Fraction(1, 4), (2, 2)), (1, (1, -1)), (-2, (1, 0)), (-2, (0, 1))])
    assert dict(zip(rel.lines, rel.coefficients))[ProjectionLine((1, 1))] == 1


# --- splitting -------------------------------------------------------------


def test_split_watson_index3():
    rel = load_entry("thm5.1").relation
    split = split_two_sided(rel.as_relation().normalized())
    assert set(split.left_coefficients) == set(split.right_coefficients) == {1}
    sides = {frozenset(split.left), frozenset(split.right)}
    e = frozenset(ProjectionLine.of(v) for v in rel.e)
    ep = frozenset(ProjectionLine.of(v) for v in rel.e_prime)
    assert sides == {e, ep}
    # e' = e - e_i for the glue e = (e_1 + ... + e_6)/3 written on the lattice basis
    glue = [sum(Fraction(v[k]) for v in rel.e) / 3 for k in range(6)]
    assert {ProjectionLine.of([glue[k] - v[k] for k in range(6)]) for v in rel.e} == ep


def test_split_irregular_e8():
    rel = load_entry("e8-irregular").relation
    assert rel.lam == (1, 3, 1, 3, 1, 3, 1, 3)
    assert rel.lam_prime == (2,) * 8
    split = split_two_sided(rel.as_relation())
    assert sorted(split.left_coefficients) == sorted(rel.lam)
    assert sorted(split.right_coefficients) == sorted(rel.lam_prime)


def test_negation_swaps_sides():
    rel = frame_relation("Dn", 4).as_relation()
    a, b = split_two_sided(rel), split_two_sided(-rel)
    assert (a.left, a.right) == (b.right, b.left)


def test_all_positive_weights_never_vanish():
    rel = frame_relation("Dn", 4).as_relation()
    with pytest.raises(RelationError):
        PerfectionRelation(rel.lines, tuple(abs(c) for c in rel.coefficients))


# --- inertia ---------------------------------------------------------------


def test_inertia_examples():
    I2 = [[1, 0], [0, 1]]
    assert inertia_signature(units(3), (1, 1, 1), [[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (3, 0, 0)
    assert inertia_signature(units(2), (1, -1), I2) == (1, 1, 0)
    # a fixed independent system in dimension 6 and a Gram that is not the identity
    E = [(1, 2, 0, 0, 1, 0), (0, 1, -1, 0, 0, 2), (3, 0, 1, 1, 0, 0),
         (0, 0, 0, 1, -1, 1), (1, 0, 0, 0, 2, 1), (0, 1, 1, 1, 1, 1)]
    assert oracles.det(E) != 0
    G = [[2 if i == j else (1 if abs(i - j) == 1 else 0) for j in range(6)] for i in range(6)]
    assert inertia_signature(E, (1, 2, -3, 0, 1, 1), G) == (4, 1, 1)


# --- two-basis relations ---------------------------------------------------


def test_two_basis_validation():
    L = Lattice([[1, 0], [0, 1]])
    with pytest.raises(RelationError):
        TwoBasisRelation(L, units(2), units(2), (1, 1), (1, 2))
    with pytest.raises(RelationError):
        TwoBasisRelation(L, units(2), units(2), (1, 0), (1, 0))
    with pytest.raises(RelationError):
        TwoBasisRelation(L, [(1, 1), (1, -1)], [(2, 0), (0, 2)], (1, 1), (Fraction(1, 2),) * 2)


def test_a_coefficients_identical_bases():
    L = root_lattice("Dn", 4)
    e = orthogonal_frame("Dn", 4)
    rel = TwoBasisRelation(L, e, e, (1, 2, 3, 4), (1, 2, 3, 4))
    A, Ap = a_coefficients(rel)
    assert A == Ap == (0, 0, 0, 0)


def test_a_coefficients_watson_index3():
    A, Ap = a_coefficients(load_entry("thm5.1").relation)
    # with e'_i = e - e_i the primed coefficients are (6 - n)/9 = 0; by symmetry so are the others
    assert Ap == (0,) * 6
    assert A == (0,) * 6


def test_a_coefficients_irregular_e8():
    rel = load_entry("e8-irregular").relation
    A, Ap = a_coefficients(rel)
    assert sum(l * a for l, a in zip(rel.lam, A)) == 0
    assert sum(l * a for l, a in zip(rel.lam_prime, Ap)) == 0


def test_duality_report_on_catalog():
    for name in ("d4-frame", "e7-frame", "e8-irregular", "thm5.1", "ex6.1", "ex6.2"):
        rep = duality_report(load_entry(name).relation)
        assert rep.passed, (name, rep.failures[:3])
        assert rep.count("cross") == load_entry(name).relation.n ** 2


def test_duality_report_detects_perturbation():
    rel = load_entry("e8-irregular").relation
    # same vectors, one coefficient changed; bypass the constructor's own identity check
    bad = object.__new__(TwoBasisRelation)
    for k in ("lattice", "e", "e_prime", "lam_prime", "label"):
        object.__setattr__(bad, k, getattr(rel, k))
    object.__setattr__(bad, "lam", (2,) + rel.lam[1:])
    rep = duality_report(bad)
    assert not rep.passed
    assert any(c.name == "cross" for c in rep.failures)


def test_duality_report_exchange_symmetry():
    rel = load_entry("e8-irregular").relation
    a, b = duality_report(rel), duality_report(rel.swapped())
    assert a.passed and b.passed
    assert a.count("cross") == b.count("cross")
    ca = {c.indices: (c.lhs, c.rhs) for c in a.checks if c.name == "cross"}
    cb = {c.indices: (c.lhs, c.rhs) for c in b.checks if c.name == "cross"}
    assert all(ca[(j, k)] == cb[(k, j)][::-1] for j, k in ca)


def test_decompose_irreducible():
    assert decompose_perf_irreducible(load_entry("e8-irregular").relation) == [(tuple(range(8)), tuple(range(8)))]
    L = root_lattice("Dn", 4)
    e = orthogonal_frame("Dn", 4)
    same = TwoBasisRelation(L, e, e, (1,) * 4, (1,) * 4)
    assert decompose_perf_irreducible(same) == [((i,), (i,)) for i in range(4)]
    assert is_perf_irreducible(frame_relation("Dn", 4))


def test_decompose_direct_sum_of_d4_frames():
    rel = frame_relation("Dn", 4)
    G = rel.lattice.gram
    big = [[G[i % 4, j % 4] if (i < 4) == (j < 4) else 0 for j in range(8)] for i in range(8)]
    L = Lattice(big)
    pad = lambda v, left: tuple(v) + (0,) * 4 if left else (0,) * 4 + tuple(v)
    e = [pad(v, True) for v in rel.e] + [pad(v, False) for v in rel.e]
    ep = [pad(v, True) for v in rel.e_prime] + [pad(v, False) for v in rel.e_prime]
    two = TwoBasisRelation(L, e, ep, (1,) * 8, (1,) * 8)
    blocks = decompose_perf_irreducible(two)
    assert [(len(I), len(J)) for I, J in blocks] == [(4, 4), (4, 4)]


def test_verify_vmin():
    assert relation_vmin(load_entry("thm5.1").relation)
    assert not verify_vmin((1, 1), (2, 2), (1, 1), (2, 4), 2)
    with pytest.raises(ValueError):
        verify_vmin((1,), (2,), (), (), 2)


def test_formal_bridge_on_catalog():
    for name in ("d6-frame", "e8-frame", "ex6.3"):
        rel = load_entry(name).relation
        assert verify_formal_identity(list(zip(rel.lam, rel.e)), list(zip(rel.lam_prime, rel.e_prime)))


def test_d4_frame_snf():
    # the frame's coordinate matrix on the D4 basis has invariant factors (1,1,1,2)
    cols = orthogonal_frame("Dn", 4)
    M = [list(r) for r in zip(*cols)]
    assert smith_normal_form(M).factors == (1, 1, 1, 2) == oracles.invariant_factors(M)


def test_d4_frame_gram_and_components():
    from perfrel.lattice import components_in_basis, sublattice_gram

    emb = root_system("Dn", 4)
    frame = orthogonal_frame("Dn", 4)
    assert sublattice_gram(emb.lattice, frame).gram == RationalMatrix.diagonal([2] * 4)
    x = emb.coords((1, 0, 1, 0))
    assert components_in_basis(emb.lattice, frame, x) == (Fraction(1, 2),) * 4
