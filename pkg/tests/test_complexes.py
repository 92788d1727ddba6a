import random

import pytest
from hypothesis import given, strategies as st

from specseq.complexes import DENSE_LIMIT, BasedComplex, homology, poincare_series, validate_complex
from specseq.errors import DimensionMismatch, NotAComplex, NotAField
from specseq.generators import random_filtered_complex
from specseq.groups import GroupModule, cochain_complex, cyclic_group
from specseq.rings import F2, GF, QQ, ZZ

S2_BASIS = [("a", 0), ("b", 0), ("c", 0), ("A", 1), ("B", 1), ("C", 1), ("P", 2), ("Q", 2)]
S2_BD = {"A": {"b": 1, "a": -1}, "B": {"c": 1, "a": -1}, "C": {"c": 1, "b": -1},
         "P": {"C": 1, "B": -1, "A": 1}, "Q": {"C": 1, "B": -1, "A": 1}}

# RP^2 with one cell per dimension: d(e1) = 0, d(e2) = 2 e1
RP2 = ([("v", 0), ("e", 1), ("f", 2)], {"f": {"e": 2}})


def nonzero(H):
    return {n: f for n, f in H.factors().items() if f}


def test_s2_homology():
    C = BasedComplex.from_boundaries(ZZ, S2_BASIS, S2_BD)
    H = homology(C)
    assert nonzero(H) == {0: (0,), 2: (0,)}
    assert H.labels() == {0: "Z", 1: "0", 2: "Z"}


def test_s2_generator_of_h2():
    C = BasedComplex.from_boundaries(ZZ, S2_BASIS, S2_BD)
    rep = homology(C)[2].representatives.column(0)
    assert rep in ((1, -1), (-1, 1))


def test_not_a_complex():
    with pytest.raises(NotAComplex) as exc:
        BasedComplex.from_boundaries(ZZ, [("x", 0), ("y", 1), ("z", 2)], {"y": {"x": 1}, "z": {"y": 1}})
    assert exc.value.degree == 2


def test_wrong_degree_and_unknown_cell():
    with pytest.raises(DimensionMismatch):
        BasedComplex.from_boundaries(ZZ, [("x", 0), ("y", 2)], {"y": {"x": 1}})
    with pytest.raises(DimensionMismatch):
        BasedComplex.from_boundaries(ZZ, [("x", 0), ("y", 1)], {"y": {"w": 1}})


def test_single_generator_and_zero_complex():
    C = BasedComplex.from_boundaries(ZZ, [("x", 3)], {})
    assert homology(C).factors() == {3: (0,)}
    E = BasedComplex.from_boundaries(ZZ, [], {})
    assert homology(E).factors() == {}


@pytest.mark.parametrize("ring,expected", [
    (ZZ, {0: (0,), 1: (2,)}),
    (F2, {0: (0,), 1: (0,), 2: (0,)}),
    (GF(3), {0: (0,)}),
    (QQ, {0: (0,)}),
])
def test_rp2(ring, expected):
    C = BasedComplex.from_boundaries(ring, *RP2)
    assert nonzero(homology(C)) == expected


def test_from_matrices_matches_boundaries():
    C = BasedComplex.from_matrices(ZZ, S2_BASIS, {
        1: [[-1, -1, 0], [1, 0, -1], [0, 1, 1]],
        2: [[1, 1], [-1, -1], [1, 1]],
    })
    assert C.boundary == BasedComplex.from_boundaries(ZZ, S2_BASIS, S2_BD).boundary
    with pytest.raises(DimensionMismatch):
        BasedComplex.from_matrices(ZZ, S2_BASIS, {1: [[1, 0]]})


def test_cohomological_orientation():
    # cochains of an interval: δ(v0) = -e, δ(v1) = e
    C = BasedComplex.from_boundaries(ZZ, [("v0", 0), ("v1", 0), ("e", 1)], {"v0": {"e": -1}, "v1": {"e": 1}},
                                     cohomological=True)
    assert nonzero(homology(C)) == {0: (0,)}
    assert C.differential(C.stored_degree(0)).rows == 1


def test_sparse_path_agrees_with_known_cohomology():
    # 4^5 = 1024 cells in degree 5 forces the reduction path
    G = cyclic_group(4)
    C = cochain_complex(G, GroupModule.trivial(G, ZZ), 5)
    assert max(C.dim(n) for n in C.stored_degrees()) > DENSE_LIMIT
    H = homology(C, degrees=range(5))
    assert [H[n].invariant_factors for n in range(5)] == [(0,), (), (4,), (), (4,)]
    # representatives are genuine cocycles
    d = C.differential(C.stored_degree(4))
    for col in H[4].representatives.columns():
        assert not any(d.apply(col))


@given(st.integers(0, 10_000))
def test_reduced_and_dense_homology_agree(seed):
    rng = random.Random(seed)
    FC = random_filtered_complex(rng, ZZ if seed % 2 else F2, max_dim=10)
    C = FC.complex
    S = C.to_sparse(track=True)
    S.reduce()
    from specseq.complexes import reduced_complex
    R, _ = reduced_complex(C, S)
    dense = homology(C).factors()
    red = homology(R).factors()
    assert {n: f for n, f in dense.items() if f} == {n: f for n, f in red.items() if f}


def test_poincare_series():
    C = BasedComplex.from_boundaries(F2, *RP2)
    assert poincare_series(homology(C), 3) == [1, 1, 1, 0]
    with pytest.raises(NotAField):
        poincare_series(homology(BasedComplex.from_boundaries(ZZ, *RP2)), 2)
    assert poincare_series(homology(BasedComplex.from_boundaries(F2, [], {})), 2) == [0, 0, 0]


def test_validate_is_identity_on_valid_input():
    C = BasedComplex.from_boundaries(ZZ, S2_BASIS, S2_BD, validate=False)
    assert validate_complex(C) is C
