import pytest

from latorbits import linalg as la
from latorbits.cosets import (
    DoubleCosets,
    SublatticeCosetKey,
    coset_key_for,
    coset_transversal,
    double_cosets,
    gamma_n_transversal,
    member_via_embedding,
    stab_coset_transversal,
    verify_closed,
)
from latorbits.lattice import sublattice
from latorbits.ogroup import GroupSpec, OrthMap, disc_action, is_member, stable_plus


@pytest.mark.parametrize("N, size", [(1, 1), (2, 6), (3, 24), (4, 48)])
def test_gamma_n_transversal(N, size):
    T = gamma_n_transversal(N)
    assert T.index == size
    residues = set()
    for M in T.representatives:
        assert la.det(M) == 1
        residues.add(tuple(x % N for r in M for x in r))
    assert len(residues) == size


def test_gamma_n_rejects_zero():
    with pytest.raises(ValueError):
        gamma_n_transversal(0)


def _stable_transversal(ctx, spec=None):
    spec = spec or stable_plus(ctx.L)
    key = coset_key_for(spec, ctx.Lp, ctx.embed)
    return coset_transversal(ctx.G2_gens, key=key), spec


def test_index_two_for_2u_a2(ctx_2u_a2):
    T, spec = _stable_transversal(ctx_2u_a2)
    assert T.complete and T.index == 2
    r0, r1 = T.representatives
    assert is_member(spec, r0)
    assert not disc_action(ctx_2u_a2.L, r1).is_identity()
    assert not is_member(spec, r1 @ r0.inverse)
    # the coordinate map swapping and negating the A2 entries represents the other coset
    swap = la.identity(6)
    swap[4][4] = swap[5][5] = 0
    swap[4][5] = swap[5][4] = -1
    s = OrthMap(swap, ctx_2u_a2.Lp)
    assert T.lookup.find(s) == 1
    assert verify_closed(T, ctx_2u_a2.G2_gens)


def test_gk_lattice_index(ctx_gk):
    T, _ = _stable_transversal(ctx_gk)
    assert T.complete and T.index == 72


def test_whole_group_has_one_coset(ctx_2u_a2):
    spec = GroupSpec(ctx_2u_a2.L, require_spinor_positive=True)
    T, _ = _stable_transversal(ctx_2u_a2, spec)
    assert T.index == 1


def test_budget_marks_incomplete(ctx_gk):
    key = coset_key_for(stable_plus(ctx_gk.L), ctx_gk.Lp, ctx_gk.embed)
    T = coset_transversal(ctx_gk.G2_gens, key=key, budget=10)
    assert not T.complete and T.index == 10


def _compare_searches(ctx):
    spec = stable_plus(ctx.L)
    key = coset_key_for(spec, ctx.Lp, ctx.embed)
    member = member_via_embedding(spec, ctx.Lp, ctx.embed)
    by_key = coset_transversal(ctx.G2_gens, key=key)
    by_member = coset_transversal(ctx.G2_gens, member_G1=member)
    assert by_member.index == by_key.index
    assert sorted(key(r) for r in by_member) == sorted(by_key.keys)


def test_membership_search_matches_keys(ctx_2u_a2):
    _compare_searches(ctx_2u_a2)


@pytest.mark.slow
def test_membership_search_matches_keys_index_72(ctx_gk):
    _compare_searches(ctx_gk)


def test_key_validation(ctx_2u_a2):
    with pytest.raises(ValueError):
        SublatticeCosetKey(ctx_2u_a2.Lp, ctx_2u_a2.L, ctx_2u_a2.embed, disc="subgroup")
    with pytest.raises(ValueError):
        coset_transversal([])


def test_stabilizer_transversal(ctx_gk):
    E = sublattice(ctx_gk.Lp, [ctx_gk.line0])
    key = coset_key_for(stable_plus(ctx_gk.L), ctx_gk.Lp, ctx_gk.embed)
    T = stab_coset_transversal(E, ctx_gk.line_stab, key=key)
    assert T.complete and T.index >= 1
    with pytest.raises(ValueError):
        stab_coset_transversal(E, ctx_gk.G2_gens, key=key)


def test_double_cosets_partition(ctx_gk):
    T, spec = _stable_transversal(ctx_gk)
    dc = double_cosets(T, ctx_gk.line_stab)
    assert isinstance(dc, DoubleCosets)
    assert dc.count == 2
    assert sorted(set(dc.labels)) == list(range(dc.count))
    member = member_via_embedding(spec, ctx_gk.Lp, ctx_gk.embed)
    for i, y in enumerate(T.representatives):
        assert member(y @ dc.paths[i].inverse)
