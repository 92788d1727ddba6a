import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import canon, fixture
from specseq import cellio
from specseq.errors import DimensionMismatch, MissingDifferential, NotAComplex, NotCollapsed
from specseq.filtered import page, stabilization_index
from specseq.formal import (COHOMOLOGICAL, HOMOLOGICAL, FormalPage, check_target, diagonal_extensions,
                            edge_injectivity_constraint, forced_zero_scan, from_spectral_page, turn_page, turn_to)
from specseq.generators import random_filtered_complex
from specseq.rings import F2, ZZ


def hopf(d=None):
    P = cellio.load_formal(fixture("hopf_e2"))
    if d is None:
        return P
    return FormalPage(P.ring, P.orientation, P.r, P.entries, {(2, 2, 0): cellio_matrix(d)}, (), P.target)


def cellio_matrix(d):
    from specseq.linalg import ExactMatrix
    return ExactMatrix.from_rows(ZZ, [[d]])


@pytest.mark.parametrize("d,consistent,left", [
    (1, True, {(0, 0): (0,), (2, 1): (0,)}),
    (-1, True, {(0, 0): (0,), (2, 1): (0,)}),
    (0, False, {(0, 0): (0,), (0, 1): (0,), (2, 0): (0,), (2, 1): (0,)}),
    (3, False, {(0, 0): (0,), (0, 1): (3,), (2, 1): (0,)}),
])
def test_hopf_branches(d, consistent, left):
    P = turn_to(hopf(d), 3)
    assert P.canonical() == left
    assert forced_zero_scan(P).collapses
    assert check_target(P).consistent is consistent


def test_fixture_differential_is_one():
    P = hopf()
    assert P.differential(2, 0).to_lists() == [[1]]
    scan = forced_zero_scan(P)
    assert scan.unforced[2] == (((2, 0), (0, 1)),)
    assert scan.verdict() == "collapses at E_3"


def test_missing_differential():
    P = hopf()
    bare = FormalPage(P.ring, P.orientation, 2, P.entries)
    with pytest.raises(MissingDifferential) as exc:
        turn_page(bare)
    assert exc.value.positions == [(2, 0)]
    assert turn_page(bare.with_differential(2, 0, [[1]])).canonical() == turn_to(P, 3).canonical()


def test_validation():
    with pytest.raises(ValueError):
        FormalPage(ZZ, "sideways", 2, {})
    with pytest.raises(DimensionMismatch):
        FormalPage(ZZ, HOMOLOGICAL, 2, {(0, 0): (1,)})
    with pytest.raises(DimensionMismatch):
        FormalPage(F2, HOMOLOGICAL, 2, {(0, 0): (2,)})
    e = {(2, 0): (0,), (0, 1): (0, 0)}
    with pytest.raises(DimensionMismatch):
        FormalPage(ZZ, HOMOLOGICAL, 2, e).with_differential(2, 0, [[1]])
    # Z/2 -> Z is only the zero map
    with pytest.raises(DimensionMismatch):
        FormalPage(ZZ, HOMOLOGICAL, 2, {(2, 0): (2,), (0, 1): (0,)}).with_differential(2, 0, [[1]])
    FormalPage(ZZ, HOMOLOGICAL, 2, {(2, 0): (2,), (0, 1): (4,)}).with_differential(2, 0, [[2]])
    chain = FormalPage(ZZ, HOMOLOGICAL, 2, {(4, 0): (0,), (2, 1): (0,), (0, 2): (0,)})
    with pytest.raises(NotAComplex):
        chain.with_differential(4, 0, [[1]]).with_differential(2, 1, [[1]])


def test_not_collapsed():
    with pytest.raises(NotCollapsed):
        diagonal_extensions(hopf(), 1)


def test_empty_page():
    P = FormalPage(ZZ, COHOMOLOGICAL, 2, {})
    assert forced_zero_scan(P).collapses
    assert turn_page(P).canonical() == {}
    assert diagonal_extensions(P, 3).candidates == ((),)


def test_constraints():
    P = cellio.load_formal(fixture("bordism"))
    assert forced_zero_scan(P).collapses
    bare = FormalPage(P.ring, P.orientation, P.r, P.entries)
    scan = forced_zero_scan(bare)
    assert not scan.collapses
    assert ((5, 0), (0, 4)) in scan.unforced[5]
    again = edge_injectivity_constraint(bare, "vertical")
    assert forced_zero_scan(again).collapses
    with pytest.raises(ValueError):
        edge_injectivity_constraint(bare, "diagonal")


def test_torsion_diagonal():
    P = cellio.load_formal(fixture("c4_homology_e4"))
    T = diagonal_extensions(P, 1)
    assert set(T.labels()) == {"Z/2+Z/2", "Z/4"}


def test_turning_is_idempotent_past_collapse():
    P = cellio.load_formal(fixture("cp3_ahss"))
    assert forced_zero_scan(P).collapses
    Q = turn_to(P, 6)
    assert Q.canonical() == P.canonical()


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_export_bridge_turns_like_the_engine(seed, over_z):
    ring = ZZ if over_z else F2
    FC = random_filtered_complex(random.Random(seed), ring, max_dim=7)
    for r in range(1, stabilization_index(FC) + 1):
        P = from_spectral_page(page(FC, r))
        nxt = turn_page(P)
        want = {pq: canon(ring, f) for pq, f in page(FC, r + 1).factors().items()}
        assert nxt.canonical() == want
        if ring.is_field:
            assert sum(map(len, nxt.entries.values())) <= sum(map(len, P.entries.values()))
