from __future__ import annotations

from fractions import Fraction

import pytest

import oracles
from perfrel.catalog import (
    ALIASES,
    ENTRY_NAMES,
    CatalogError,
    NoFrame,
    example_6_1,
    find_orthogonal_frame,
    frame_relation,
    load_entry,
    orthogonal_frame,
    root_lattice,
    root_system,
    verify_entry,
)
from perfrel.lattice import is_well_rounded, minimal_vectors
from perfrel.perfection import perfection_rank
from perfrel.quotient import relation_quotient


def test_root_lattice_counts():
    assert minimal_vectors(root_lattice("Dn", 4)).s == 12
    assert minimal_vectors(root_lattice("E7")).s == 63
    assert minimal_vectors(root_lattice("E8")).s == 120
    assert minimal_vectors(root_lattice("An", 3)).s == 6
    assert minimal_vectors(root_lattice("Zn", 3)).s == 3


def test_root_systems_match_explicit_roots():
    for name, roots in (("E8", oracles.e8_roots()), ("E7", oracles.e7_roots())):
        emb = root_system(name)
        got = oracles.lines(emb.ambient(x) for x in minimal_vectors(emb.lattice).vectors)
        assert got == oracles.lines(roots)


def test_e7_well_rounded():
    assert is_well_rounded(root_lattice("E7"))


def test_e6_dual():
    L = root_lattice("E6dual")
    S = minimal_vectors(L)
    assert S.min == Fraction(4, 3) and S.s == 27
    prof = perfection_rank(S.vectors)
    assert prof.r == 21 and prof.relation_dim == 6


def test_d4_frame_is_the_displayed_one():
    emb = root_system("Dn", 4)
    frame = {emb.ambient(x) for x in orthogonal_frame("Dn", 4)}
    expected = {(1, 1, 0, 0), (1, -1, 0, 0), (0, 0, 1, 1), (0, 0, 1, -1)}
    assert frame == {tuple(Fraction(c) for c in v) for v in expected}


@pytest.mark.parametrize("n", range(3, 9))
def test_dn_frame_exists_iff_even(n):
    L = root_lattice("Dn", n)
    found = find_orthogonal_frame(L)
    assert (found is not None) == (n % 2 == 0 and n >= 4)
    if found:
        assert all(L.inner(u, v) == 0 for i, u in enumerate(found) for v in found[i + 1:])


def test_frame_errors():
    with pytest.raises(NoFrame):
        orthogonal_frame("Dn", 5)
    with pytest.raises(NoFrame):
        frame_relation("Dn", 7)


def test_e8_frame_inside_d8():
    emb = root_system("E8")
    for x in orthogonal_frame("E8"):
        v = emb.ambient(x)
        assert all(c.denominator == 1 for c in v) and sum(v) % 2 == 0


def test_frame_relations():
    rel = frame_relation("Dn", 4)
    assert rel.lam == rel.lam_prime == (1,) * 4
    for n, order in ((6, 4), (8, 8)):
        rel = frame_relation("Dn", n)
        assert relation_quotient(rel).index == order == relation_quotient(rel, prime=True).index


def test_example_6_1():
    ex = example_6_1()
    assert ex.lattice.minimum == 2
    q = relation_quotient(ex.relation)
    assert q.is_cyclic and q.index == 4


def test_load_entry_and_aliases():
    assert load_entry("thm5.1").relation.n == 6
    assert load_entry("e8-irregular").relation.label == "E8 irregular"
    assert load_entry("watson-index3") is load_entry("thm5.1")
    assert set(ALIASES.values()) <= set(ENTRY_NAMES)
    with pytest.raises(CatalogError):
        load_entry("bogus")


@pytest.mark.parametrize("name", [n for n in ENTRY_NAMES if n not in ("E8", "E7", "E6")])
def test_every_entry_verifies(name):
    e = load_entry(name)
    got = verify_entry(e)
    assert got == e.expected


def test_corrupted_entry_is_caught():
    from dataclasses import replace

    e = load_entry("d4-frame")
    bad = replace(e, expected=dict(e.expected, index=3))
    with pytest.raises(CatalogError):
        verify_entry(bad)


def test_two_elementary_entries():
    two = set()
    for name in ENTRY_NAMES:
        rel = load_entry(name).relation
        if rel is not None and relation_quotient(rel).is_elementary(2):
            two.add(name)
    assert two == {"d4-frame", "d6-frame", "d8-frame", "e7-frame", "e8-frame", "e8-irregular"}


def test_watson_vectors_present():
    # the f_i and every f - f_i occur among the minimal vectors of the entry lattice
    for name in ("thm5.1", "ex6.2", "ex6.3"):
        rel = load_entry(name).relation
        S = set(minimal_vectors(rel.lattice).vectors)
        from perfrel.lattice import canonical_sign

        assert {canonical_sign(v) for v in rel.e + rel.e_prime} <= S
