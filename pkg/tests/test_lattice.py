from fractions import Fraction

import pytest

from latorbits import linalg as la
from latorbits.discform import FiniteQuadraticForm, disc_form_of, iso_fqf
from latorbits.lattice import (
    LatticeError,
    ParseError,
    build_lattice,
    discriminant_group,
    divisor_and_star,
    is_primitive,
    lattice,
    maximal_overlattice,
    orthogonal_complement,
    overlattice,
    primitive_part,
    sublattice,
)


@pytest.mark.parametrize(
    "expr, sig, det, factors",
    [
        ("A2", (0, 2), 3, (3,)),
        ("A3", (0, 3), -4, (4,)),
        ("D4", (0, 4), 4, (2, 2)),
        ("E8", (0, 8), 1, ()),
        ("U(2)", (1, 1), -4, (2, 2)),
        ("<-6>+<-2>", (0, 2), 12, (2, 6)),
        ("2U+A2", (2, 4), 3, (3,)),
        ("U(3)+A2", (1, 3), -27, (3, 3, 3)),
        ("2*U", (2, 2), 1, ()),
    ],
)
def test_invariants(expr, sig, det, factors):
    L = build_lattice(expr)
    assert L.signature == sig
    assert L.det == det
    assert discriminant_group(L).invariant_factors == factors


def test_parser_forms_agree():
    assert build_lattice("2U").gram == build_lattice("U + U").gram == build_lattice("2*U").gram
    assert build_lattice("gram [[0,2],[2,0]]").gram == build_lattice("U(2)").gram
    assert build_lattice("A1(3)").gram == build_lattice("<-6>").gram


@pytest.mark.parametrize("bad", ["", "U+", "Q", "A0", "<-2", "gram [[1,2]", "2U+A2)"])
def test_parse_errors_carry_position(bad):
    with pytest.raises(ParseError) as exc:
        build_lattice(bad)
    assert exc.value.pos >= 0


def test_odd_lattice_rejected():
    with pytest.raises(LatticeError):
        lattice([[1]])


def test_generator_lifts_lie_in_dual():
    L = build_lattice("U(3)+A2")
    D = discriminant_group(L)
    for g, d in zip(D.generator_lifts, D.invariant_factors):
        assert la.is_integral_vector(L.hat(g))
        assert la.is_integral_vector([d * x for x in g])
        assert not la.is_integral_vector(g)


def test_divisor():
    L = build_lattice("U+A3")
    d, star = divisor_and_star(L, [4, 4, 1, 2, -1])
    assert d == 4
    assert star == [1, 1, Fraction(1, 4), Fraction(1, 2), Fraction(-1, 4)]
    assert divisor_and_star(L, [0, 0, 1, 0, 0])[0] == 1


def test_primitive_part():
    assert primitive_part([Fraction(3, 2), 3, 0]) == (Fraction(2, 3), [1, 2, 0])
    assert is_primitive([2, 3])
    assert not is_primitive([2, 4])


def test_orthogonal_complement_u_a3():
    L = build_lattice("U+A3")
    K = orthogonal_complement(L, [1, -1, 0, 0, 0])
    assert [list(c) for c in K.basis] == [[1, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]
    for c in K.basis:
        assert L.ip(c, [1, -1, 0, 0, 0]) == 0


def test_sublattice_canonical_form():
    L = build_lattice("2U")
    a = sublattice(L, [[2, 0, 0, 0]])
    b = sublattice(L, [[1, 0, 0, 0]])
    assert a.canonical == b.canonical
    assert b.saturated and not a.saturated


def test_maximal_overlattice_gk():
    L = build_lattice("2U+<-6>+<-2>")
    Lp, E = maximal_overlattice(L)
    assert Lp.gram == build_lattice("2U+A2").gram
    assert abs(la.det(E)) == 2
    assert la.mat_mul(la.mat_mul(la.transpose(E), Lp.gram), E) == [list(r) for r in L.gram]
    q = FiniteQuadraticForm.diagonal((2, 2, 3), (Fraction(-1, 2), Fraction(-3, 2), Fraction(-2, 3)))
    assert next(iso_fqf(disc_form_of(L), q), None) is not None


def test_overlattice_from_glue():
    L = build_lattice("U(2)")
    Lp, E = overlattice(L, [[Fraction(1, 2), 0]])
    assert Lp.det == -1
    assert la.mat_mul(la.mat_mul(la.transpose(E), Lp.gram), E) == [list(r) for r in L.gram]


def test_maximal_lattice_is_fixed():
    L = build_lattice("2U+A2")
    Lp, E = maximal_overlattice(L)
    assert Lp.gram == L.gram and E == la.identity(6)
