import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from specseq.errors import DimensionMismatch, NotContained
from specseq.linalg import (ExactMatrix, FgModulePresentation, Submodule, factors_label, image_basis, intersect,
                            kernel_basis, module_homology, normalize_factors, preimage, rank, smith_normal_form,
                            subquotient)
from specseq.rings import F2, GF, QQ, ZZ, Ring


def M(ring, rows, ncols=None):
    return ExactMatrix.from_rows(ring, rows, ncols)


def _det(rows):
    n = len(rows)
    if n == 0:
        return 1
    a = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for i in range(n):
        piv = next((k for k in range(i, n) if a[k][i]), None)
        if piv is None:
            return 0
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            det = -det
        det *= a[i][i]
        for k in range(i + 1, n):
            f = a[k][i] / a[i][i]
            for j in range(i, n):
                a[k][j] -= f * a[i][j]
    return int(det)


def determinantal_factors(rows):
    """Invariant factors from gcds of k x k minors (oracle independent of elimination)."""
    m, n = len(rows), len(rows[0]) if rows else 0
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for I in itertools.combinations(range(m), k):
            for J in itertools.combinations(range(n), k):
                g = math.gcd(g, _det([[rows[i][j] for j in J] for i in I]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


small = st.integers(-6, 6)


@st.composite
def int_matrices(draw, max_rows=4, max_cols=4):
    m = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    return [[draw(small) for _ in range(n)] for _ in range(m)]


class TestRing:
    def test_parse(self):
        assert Ring.parse("Z") == ZZ and Ring.parse("F2") == F2 and Ring.parse("F_3") == GF(3)
        assert Ring.parse("Q") == QQ

    def test_bad_prime(self):
        with pytest.raises(ValueError):
            GF(4)

    def test_field_normalization(self):
        assert GF(5)(-1) == 4
        assert GF(5)(Fraction(1, 2)) == 3


class TestSnf:
    def test_identity(self):
        S = smith_normal_form(ExactMatrix.identity(ZZ, 3))
        assert S.diagonal == (1, 1, 1) and S.rank == 3

    def test_small_example(self):
        S = smith_normal_form(M(ZZ, [[2, 4], [6, 8]]))
        assert S.diagonal == (2, 4)

    def test_zero(self):
        S = smith_normal_form(ExactMatrix.zeros(ZZ, 2, 3))
        assert S.rank == 0 and S.D.is_zero()

    @given(int_matrices())
    def test_factorization_and_oracle(self, rows):
        A = M(ZZ, rows)
        S = smith_normal_form(A, inverse=True)
        assert S.U @ A @ S.V == S.D
        assert S.U @ S.U_inv == ExactMatrix.identity(ZZ, A.rows)
        d = [x for x in S.diagonal if x]
        assert all(b % a == 0 for a, b in zip(d, d[1:]))
        assert d == determinantal_factors(rows)

    @given(int_matrices())
    def test_rank_over_f2(self, rows):
        A = M(F2, rows)
        S = smith_normal_form(A)
        assert S.U @ A @ S.V == S.D
        assert S.rank == rank(A)


class TestSubmodules:
    S2_EDGES = [[-1, -1, 0], [1, 0, -1], [0, 1, 1]]  # columns A, B, C on rows a, b, c

    def test_kernel_of_s2_edges(self):
        K = kernel_basis(M(ZZ, self.S2_EDGES))
        assert K.rank == 1
        v = K.vectors()[0]
        assert v in ((1, -1, 1), (-1, 1, -1))

    def test_kernel_trivial_cases(self):
        assert kernel_basis(ExactMatrix.identity(ZZ, 3)).rank == 0
        assert kernel_basis(ExactMatrix.zeros(ZZ, 2, 3)).rank == 3

    def test_image(self):
        d2 = M(ZZ, [[1, 1], [-1, -1], [1, 1]])
        I = image_basis(d2)
        assert I.rank == 1 and I.vectors()[0] in ((1, -1, 1), (-1, 1, -1))
        assert image_basis(ExactMatrix.zeros(ZZ, 2, 2)).rank == 0
        J = image_basis(M(ZZ, [[2, 0], [0, 0]]))
        assert J.contains((2, 0)) and not J.contains((1, 0))

    def test_intersect(self):
        e1 = Submodule.span(ZZ, 2, [(1, 0)])
        e2 = Submodule.span(ZZ, 2, [(0, 1)])
        assert intersect(e1, e2).rank == 0
        W = intersect(Submodule.span(ZZ, 1, [(2,)]), Submodule.span(ZZ, 1, [(3,)]))
        assert W.contains((6,)) and not W.contains((2,)) and not W.contains((3,))
        U = Submodule.span(ZZ, 2, [(2, 4), (0, 3)])
        X = intersect(U, U)
        assert all(X.contains(v) for v in U.vectors()) and all(U.contains(v) for v in X.vectors())

    def test_preimage_trivial(self):
        A = M(ZZ, [[1, 2], [3, 4]])
        assert preimage(A, Submodule.full(ZZ, 2)).rank == 2
        assert preimage(A, Submodule.zero(ZZ, 2)).rank == kernel_basis(A).rank

    @pytest.mark.parametrize("diag,expected", [((1, 1), [(2, 0)]), ((1, 0), [(2, 0), (0, 1)])])
    def test_preimage_against_brute_force(self, diag, expected):
        A = M(ZZ, [[diag[0], 0], [0, diag[1]]])
        T = Submodule.span(ZZ, 2, [(2, 0)])
        P = preimage(A, T)
        box = range(-4, 5)
        for x in itertools.product(box, box):
            assert P.contains(x) == T.contains(A.apply(x))
        assert all(P.contains(v) for v in expected)

    def test_dimension_checks(self):
        with pytest.raises(DimensionMismatch):
            intersect(Submodule.zero(ZZ, 2), Submodule.zero(ZZ, 3))

    @given(int_matrices(3, 3), int_matrices(3, 3))
    def test_intersection_membership(self, a, b):
        n = 3
        U = Submodule.span(ZZ, n, [tuple((r + [0] * n)[:n]) for r in a])
        V = Submodule.span(ZZ, n, [tuple((r + [0] * n)[:n]) for r in b])
        W = intersect(U, V)
        for w in W.vectors():
            assert U.contains(w) and V.contains(w)


class TestSubquotient:
    def test_z_mod_2(self):
        Q = subquotient(Submodule.span(ZZ, 1, [(1,)]), Submodule.span(ZZ, 1, [(2,)]))
        assert Q.invariant_factors == (2,)

    def test_cycles_of_two_triangles(self):
        V = Submodule.span(ZZ, 2, [(1, -1)])
        Q = subquotient(V, Submodule.zero(ZZ, 2))
        assert Q.invariant_factors == (0,)
        assert Q.representatives.column(0) in ((1, -1), (-1, 1))

    def test_equal_is_zero(self):
        V = Submodule.span(ZZ, 2, [(1, 2), (0, 3)])
        assert subquotient(V, V).is_zero

    def test_not_contained(self):
        with pytest.raises(NotContained):
            subquotient(Submodule.span(ZZ, 1, [(2,)]), Submodule.span(ZZ, 1, [(1,)]))

    def test_coordinates(self):
        Q = subquotient(Submodule.full(ZZ, 2), Submodule.span(ZZ, 2, [(2, 0), (0, 3)]))
        assert normalize_factors(ZZ, Q.invariant_factors) == (6,)
        c = Q.coordinates((1, 1))
        assert c != (0,)
        assert Q.coordinates((2, 3)) == (0,)
        with pytest.raises(NotContained):
            subquotient(Submodule.span(ZZ, 2, [(1, 0)]), Submodule.zero(ZZ, 2)).coordinates((0, 1))

    @given(int_matrices(3, 3))
    def test_cokernel_matches_snf(self, rows):
        A = M(ZZ, rows)
        Q = subquotient(Submodule.full(ZZ, A.rows), image_basis(A) if A.cols else Submodule.zero(ZZ, A.rows))
        S = smith_normal_form(A)
        expected = [d for d in S.diagonal if d not in (0, 1)] + [0] * (A.rows - S.rank)
        assert normalize_factors(ZZ, Q.invariant_factors) == normalize_factors(ZZ, expected)


class TestModules:
    def test_labels(self):
        assert factors_label(ZZ, (2, 0, 0)) == "Z^2+Z/2"
        assert factors_label(F2, (0, 0, 0)) == "F_2^3"
        assert factors_label(ZZ, ()) == "0"

    def test_normalize(self):
        assert normalize_factors(ZZ, (6, 1, 0, 2)) == (2, 6, 0)
        assert normalize_factors(ZZ, (2, 3)) == (6,)

    def test_isomorphic(self):
        a = FgModulePresentation.from_factors(ZZ, (2, 3))
        b = FgModulePresentation.from_factors(ZZ, (6,))
        assert a.isomorphic(b) and a.order == 6

    def test_module_homology(self):
        # Z --2--> Z --0--> Z: homology at the middle is Z/2
        H = module_homology(ZZ, (0,), M(ZZ, [[2]]), M(ZZ, [[0]]), (0,))
        assert H.invariant_factors == (2,)
        # Z/4 --> Z/2 by 1: kernel is 2Z/4Z
        K = module_homology(ZZ, (4,), None, M(ZZ, [[1]]), (2,))
        assert K.invariant_factors == (2,)
