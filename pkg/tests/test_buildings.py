from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latorbits import linalg as la
from latorbits.buildings import (
    building_ascend,
    building_context,
    building_descend,
    building_maximal,
    congruence_level,
    dumps_building,
    is_maximal,
    isotropic_vector_orbits,
    loads_building,
    split_maximal_overlattice,
    tau,
    to_dot,
    to_first_basis_vector,
)
from latorbits.lattice import LatticeError, build_lattice, lattice, primitive_part
from latorbits.ogroup import GroupSpec, stable_plus


@st.composite
def isotropic_vectors(draw):
    """Primitive isotropic vectors of 2U+A2: solve ``ab + cd = -q(z)`` for ``d``."""
    a = draw(st.integers(-9, 9))
    b = draw(st.integers(-9, 9))
    z = draw(st.lists(st.integers(-5, 5), min_size=2, max_size=2))
    num = -(-z[0] * z[0] - z[0] * z[1] - z[1] * z[1]) - a * b
    if num == 0:
        c, d = draw(st.integers(1, 9)), 0
    else:
        divs = [k for k in range(1, abs(num) + 1) if num % k == 0]
        c = draw(st.sampled_from(divs)) * draw(st.sampled_from([1, -1]))
        d = num // c
    v = [a, b, c, d] + z
    return primitive_part(v)[1]


@settings(max_examples=100, deadline=None)
@given(isotropic_vectors(), isotropic_vectors())
def test_tau_moves_isotropic_vectors(two_u_a2, x, y):
    assert two_u_a2.norm(x) == two_u_a2.norm(y) == 0
    t = tau(two_u_a2, x, y)
    assert t(list(x)) == y
    assert t.is_integral() and t.inverse.is_integral()
    assert t.spinor == 1


def test_first_basis_vector_examples(two_u_a2):
    for x in ([0, 1, 0, 0, 0, 0], [1, 1, 1, -1, 0, 0], [3, 5, 2, -7, 1, 0]):
        if two_u_a2.norm(x) != 0:
            continue
        h = to_first_basis_vector(two_u_a2, x)
        assert h(list(x)) == [1, 0, 0, 0, 0, 0]


def test_first_basis_vector_needs_divisor_one():
    Lp = build_lattice("2U+A2")
    with pytest.raises(LatticeError):
        to_first_basis_vector(Lp, [2, 0, 0, 0, 0, 0])


def test_split_overlattice():
    L = build_lattice("2U(2)+A2")
    Lp, E = split_maximal_overlattice(L)
    assert la.mat_mul(la.mat_mul(la.transpose(E), Lp.gram), E) == [list(r) for r in L.gram]
    assert is_maximal(Lp) and not is_maximal(L)
    assert abs(la.det(E)) == 4


def test_context_requirements():
    with pytest.raises(LatticeError):
        building_context(build_lattice("U+A2"))
    with pytest.raises(LatticeError):
        building_context(build_lattice("3U"))


@pytest.mark.parametrize("expr, level", [("2U+A2", 3), ("2U+<-6>+<-2>", 12), ("2U(2)+A2", 12)])
def test_congruence_level(expr, level):
    assert congruence_level(building_context(build_lattice(expr))) == level


def _plane_quotient(Lp, plane):
    """Gram matrix of ``plane^perp / plane``."""
    from latorbits.lattice import orthogonal_complement_of

    perp = orthogonal_complement_of(Lp, [list(c) for c in plane.basis])
    G = [[Lp.ip(u, v) for v in perp] for u in perp]
    _, D, Q = la.smith_normal_form(G)
    r = sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i])
    basis = la.columns(Q)[:r]
    return [[la.bilinear(G, u, v) for v in basis] for u in basis]


def test_maximal_building_with_two_genus_classes():
    from latorbits.isometry import is_isometric_definite

    L0 = [[-2, -1], [-1, -12]]
    L = lattice(la.block_diag([[0, 1], [1, 0]], [[0, 1], [1, 0]], L0))
    B = building_maximal(building_context(L))
    assert B.shape == (1, 2, 2)
    K = [lattice(_plane_quotient(B.lattice, p)) for p in B.plane_nodes]
    assert K[0].det == K[1].det == 23
    assert is_isometric_definite(K[0], lattice(L0))
    assert not is_isometric_definite(K[1], lattice(L0))


def test_building_2u_a2(ctx_2u_a2):
    B = building_descend(ctx_2u_a2, stable_plus(ctx_2u_a2.L))
    assert B.complete and B.shape == (1, 1, 1)
    assert B.cosets.transversal.index == 2


def _divisor(L, v):
    d = 0
    for i in range(L.rank):
        d = gcd(d, la.normalize(L.ip(v, [int(i == j) for j in range(L.rank)])))
    return d


def _max_divisor_in_plane(L, plane, R=4):
    u, w = [list(c) for c in plane.basis]
    best = 0
    for a in range(-R, R + 1):
        for b in range(-R, R + 1):
            if gcd(a, b) == 1:
                best = max(best, _divisor(L, [a * x + b * y for x, y in zip(u, w)]))
    return best


@pytest.fixture(scope="module")
def gk_building(ctx_gk):
    return building_descend(ctx_gk, stable_plus(ctx_gk.L))


def test_building_gk_shape(gk_building):
    B = gk_building
    assert B.complete and B.shape == (2, 2, 3)
    assert B.edges == [(0, 0), (0, 1), (1, 1)]


def test_building_gk_nodes_are_distinct(gk_building):
    B = gk_building
    L = B.lattice
    assert sorted(_divisor(L, list(s.basis[0])) for s in B.line_nodes) == [1, 2]
    assert sorted(_max_divisor_in_plane(L, p) for p in B.plane_nodes) == [1, 2]


def test_building_gk_ascent(ctx_gk, gk_building):
    A = building_ascend(ctx_gk, gk_building, GroupSpec(ctx_gk.L, require_spinor_positive=True))
    assert A.shape == gk_building.shape and A.edges == gk_building.edges


def test_isotropic_vector_orbits(ctx_gk):
    lines = isotropic_vector_orbits(ctx_gk, stable_plus(ctx_gk.L))
    assert len(lines) == 2


def test_descent_needs_plus(ctx_2u_a2):
    with pytest.raises(ValueError):
        building_descend(ctx_2u_a2, GroupSpec(ctx_2u_a2.L, disc_condition="trivial"))


GOLDEN_DOT = """graph building {
  node [shape=circle, fixedsize=true, width=0.4];
  l0 [label="0", style=filled, fillcolor=black, fontcolor=white];
  l1 [label="1", style=filled, fillcolor=black, fontcolor=white];
  p0 [label="0", style=solid, color=black];
  p1 [label="1", style=solid, color=black];
  l0 -- p0;
  l0 -- p1;
  l1 -- p1;
}
"""


def test_dot_output(gk_building):
    assert to_dot(gk_building) == GOLDEN_DOT


def test_serialization_round_trip(gk_building):
    text = dumps_building(gk_building)
    assert text.startswith("latorbits-building 1\n")
    B = loads_building(text)
    assert B.shape == gk_building.shape and B.edges == gk_building.edges
    assert [s.canonical for s in B.plane_nodes] == [s.canonical for s in gk_building.plane_nodes]
    assert dumps_building(B) == text


@pytest.mark.parametrize("text", ["", "latorbits-building 9\n", "latorbits-building 1\nline 0 (1,0)\n", "latorbits-building 1\nbogus\n"])
def test_serialization_errors(text):
    with pytest.raises(ValueError):
        loads_building(text)
