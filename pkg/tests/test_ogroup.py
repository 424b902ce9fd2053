from functools import reduce

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latorbits import linalg as la
from latorbits.discform import disc_form_of, identity_map
from latorbits.lattice import build_lattice
from latorbits.ogroup import (
    GroupSpec,
    OrthError,
    OrthMap,
    disc_action,
    eichler_transvection,
    is_member,
    is_stable,
    minus_identity_on_planes,
    parse_group_flags,
    reflection,
    stable_plus,
    stab_line_generators,
    stab_plane_generators,
    theta,
)

L = build_lattice("2U+A2")
N = L.rank
# reflections in short vectors of both signs: a varied pool with both spinor values
_POOL_VECS = [
    [1, 1, 0, 0, 0, 0], [1, -1, 0, 0, 0, 0], [0, 0, 1, 1, 0, 0], [0, 0, 1, -1, 0, 0],
    [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1], [0, 0, 0, 0, 1, -1], [1, 0, 1, -1, 1, 0],
    [1, 2, 0, 0, 1, 1], [0, 1, 1, 0, 0, 1],
]
POOL = [reflection(L, v) for v in _POOL_VECS if L.norm(v) in (2, -2)]
words = st.lists(st.integers(0, len(POOL) - 1), min_size=1, max_size=6)


def word(ws):
    return reduce(lambda a, b: a @ b, [POOL[i] for i in ws])


def test_pool_is_integral_with_both_spinors():
    assert all(g.is_integral() for g in POOL)
    assert {g.spinor for g in POOL} == {1, -1}


def test_reflection_spinor_convention():
    assert reflection(L, [1, -1, 0, 0, 0, 0]).spinor == 1  # norm -2
    assert reflection(L, [1, 1, 0, 0, 0, 0]).spinor == -1  # norm +2


def test_minus_identity_on_planes():
    g = minus_identity_on_planes(L)
    assert g.det == 1 and g.spinor == 1 and is_stable(L, g)


def test_theta():
    g = theta(L, [[1, 1], [0, 1]], [[2, 1], [1, 1]])
    assert g.preserves_form() and g.is_integral() and g.det == 1 and g.spinor == 1
    assert is_stable(L, g)
    with pytest.raises(OrthError):
        theta(L, [[2, 0], [0, 1]], [[1, 0], [0, 1]])


def test_transvection_validation():
    with pytest.raises(OrthError):
        eichler_transvection(L, [1, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0])
    with pytest.raises(OrthError):
        eichler_transvection(L, [1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0])


def test_transvection_is_stable_plus():
    t = eichler_transvection(L, [1, 0, 0, 0, 0, 0], [0, 0, 1, 2, 1, -1])
    assert is_member(GroupSpec(L, require_det_one=True, require_spinor_positive=True, disc_condition="trivial"), t)


def test_group_flags_and_membership():
    swap = OrthMap(la.block_diag(la.identity(4), [[0, -1], [-1, 0]]), L)
    assert is_member(parse_group_flags(L, "plus"), swap)
    assert not is_member(stable_plus(L), swap)
    assert parse_group_flags(L, "stable,plus,so").describe() == "stable,plus,so"
    with pytest.raises(ValueError):
        parse_group_flags(L, "bogus")


def test_stabilizer_generators_fix_their_spaces():
    from latorbits.vinberg import oplus_generators

    gL1 = oplus_generators(build_lattice("U+A2"), [1, 1, 0, 0])
    for g in stab_line_generators(L, gL1):
        assert g([1, 0, 0, 0, 0, 0]) in ([1, 0, 0, 0, 0, 0], [-1, 0, 0, 0, 0, 0])
    for g in stab_plane_generators(L, [[[0, -1], [-1, 0]]]):
        for v in ([1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]):
            img = g(v)
            assert img[1] == img[3] == img[4] == img[5] == 0


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_spinor_norm_is_multiplicative(w1, w2):
    g, h = word(w1), word(w2)
    assert (g @ h).spinor == g.spinor * h.spinor


@settings(max_examples=100, deadline=None)
@given(words, words)
def test_disc_action_is_a_homomorphism(w1, w2):
    g, h = word(w1), word(w2)
    assert disc_action(L, g @ h) == disc_action(L, g).compose(disc_action(L, h))
    assert disc_action(L, OrthMap.identity(L)) == identity_map(disc_form_of(L))


vecs = st.lists(st.integers(-4, 4), min_size=N, max_size=N)


@settings(max_examples=200, deadline=None)
@given(words, vecs, vecs)
def test_transvection_additive(ws, r1, r2):
    g = word(ws)
    e = g([1, 0, 0, 0, 0, 0])
    f = g([0, 1, 0, 0, 0, 0])  # (e, f) = 1

    def perp(r):
        return [a - L.ip(e, r) * b for a, b in zip(r, f)]

    a, b = perp(r1), perp(r2)
    assert L.ip(e, a) == 0 and L.ip(e, b) == 0
    ab = [x + y for x, y in zip(a, b)]
    assert eichler_transvection(L, e, ab) == eichler_transvection(L, e, a) @ eichler_transvection(L, e, b)


def test_spinor_matches_cone_on_lorentzian():
    from itertools import product

    from latorbits.ogroup import in_positive_cone_component

    L = build_lattice("U+A2")
    refl = [reflection(L, v) for v in ([1, -1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 1, 1, -1], [1, 0, 0, 1])]
    for a, b, c in product(range(len(refl)), repeat=3):
        g = refl[a] @ refl[b] @ refl[c]
        assert (g.spinor == 1) == in_positive_cone_component(L, g)
