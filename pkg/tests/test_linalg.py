import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latorbits import linalg as la


def test_smith_known_example():
    A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    P, D, Q = la.smith_normal_form(A)
    assert D == [[2, 0, 0], [0, 6, 0], [0, 0, 12]]
    assert la.mat_mul(la.mat_mul(P, A), Q) == D


def test_smith_rectangular_and_zero_rows():
    assert la.smith_diagonal([[0, 0], [0, 0]]) == [0, 0]
    assert la.smith_diagonal([[4, 6]]) == [2]
    assert la.smith_diagonal([[1, 2], [3, 4], [5, 6]]) == [1, 2]


def test_det_and_inverse_exact():
    A = [[2, 1], [7, 4]]
    assert la.det(A) == 1
    assert la.inverse(A) == [[4, -1], [-7, 2]]
    B = [[2, 0], [0, 3]]
    assert la.inverse(B) == [[Fraction(1, 2), 0], [0, Fraction(1, 3)]]


def test_hnf_rows_canonical():
    H = la.hnf_rows([[2, 4], [3, 6], [0, 0]])
    assert H == [[1, 2]]
    assert la.hnf_rows([[4, 0], [0, 6], [2, 3]]) == la.hnf_rows([[2, 3], [0, 6]])


def test_reduce_mod_and_span():
    H = la.hnf_rows([[2, 0], [0, 3]])
    assert la.reduce_mod([5, 7], H) == (1, 1)
    assert la.in_span([4, -3], H)
    assert not la.in_span([1, 0], H)


def test_saturation():
    sat = la.saturation([[2, 2, 0]])
    assert la.hnf_rows(sat) == [[1, 1, 0]]


def test_xgcd():
    g, x, y = la.xgcd(240, 46)
    assert g == 2 and 240 * x + 46 * y == 2


def test_inertia_of_hyperbolic_plane():
    assert la.inertia([[0, 1], [1, 0]]) == (1, 1, 0)
    assert la.inertia([[-2, 1], [1, -2]]) == (0, 2, 0)


def test_kernel_rational():
    K = la.kernel_rational([[1, 2, 3]])
    assert len(K) == 2
    for v in K:
        assert la.dot([1, 2, 3], v) == 0


matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@settings(max_examples=500, deadline=None)
@given(matrices)
def test_smith_identities(A):
    P, D, Q = la.smith_normal_form(A)
    assert la.mat_mul(la.mat_mul(P, A), Q) == D
    assert abs(la.det(P)) == 1 and abs(la.det(Q)) == 1
    m, n = len(A), len(A[0])
    diag = [D[i][i] for i in range(min(m, n))]
    for i in range(m):
        for j in range(n):
            if i != j:
                assert D[i][j] == 0
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert diag[: len(nz)] == nz  # zeros trail
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=4))
def test_hnf_is_invariant_under_row_operations(rows):
    H = la.hnf_rows(rows)
    mixed = [list(r) for r in rows] + [[a + b for a, b in zip(rows[0], rows[-1])]]
    assert la.hnf_rows(mixed) == H
    for r in rows:
        assert la.in_span(r, H) if H else not any(r)


@pytest.mark.parametrize("row", [[3, 0, 0, 0], [0, 0, 0, 5], [2, 0, 0, 4, 0], [0, 6, 0, 0], [0, 0, 0]])
def test_single_row_with_zero_blocks(row):
    P, D, Q = la.smith_normal_form([row])
    assert la.mat_mul(la.mat_mul(P, [row]), Q) == D
    assert abs(la.det(Q)) == 1
    assert D[0][0] == abs(math.gcd(*row))
