import pytest

from latorbits import linalg as la
from latorbits.lattice import LatticeError, build_lattice, lattice
from latorbits.vinberg import (
    candidate_root_norms,
    chamber_symmetries,
    default_control_vector,
    finite_volume,
    is_root,
    oplus_generators,
    vinberg_roots,
)


def _normalise(roots):
    out = set()
    for v in roots:
        v = list(v)
        lead = next(a for a in v if a)
        out.add(tuple(v if lead > 0 else [-a for a in v]))
    return out


def test_u_a2_roots():
    L = build_lattice("U+A2")
    res = vinberg_roots(L, [1, 1, 0, 0])
    assert res.terminated
    assert _normalise(res.roots) == _normalise([(1, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, 1), (0, 1, 1, -1)])
    for v in res.roots:
        assert L.ip(v, [1, 1, 0, 0]) >= 0
    assert all(L.ip(u, v) >= 0 for u in res.roots for v in res.roots if u != v)


@pytest.mark.parametrize(
    "expr, count",
    [("U+A1", 3), ("U+A3", 5), ("U+<-6>", 3), ("U+A2(2)", 4), ("U+<-6>+<-2>", 5), ("U+A1+A1", 5)],
)
def test_root_counts(expr, count):
    L = build_lattice(expr)
    res = vinberg_roots(L, default_control_vector(L))
    assert res.terminated and len(res.roots) == count
    assert all(is_root(L, v) for v in res.roots)
    assert finite_volume(L, res.roots)


def test_u_minus6_roots():
    res = vinberg_roots(build_lattice("U+<-6>"), [1, 1, 0])
    assert _normalise(res.roots) == _normalise([(0, 0, 1), (1, -1, 0), (0, 3, -1)])


def test_chamber_symmetries_u_a2():
    L = build_lattice("U+A2")
    res = vinberg_roots(L, [1, 1, 0, 0])
    syms = chamber_symmetries(L, res.roots)
    assert len(syms) == 1
    g = syms[0]
    assert g.is_integral() and g.preserves_form()
    assert _normalise(g(list(v)) for v in res.roots) == _normalise(res.roots)


def test_candidate_norms():
    assert candidate_root_norms(build_lattice("U+<-6>")) == [-2, -4, -6, -12]
    assert candidate_root_norms(build_lattice("U+A2")) == [-2, -6]


def test_is_root():
    L = build_lattice("U+<-6>")
    assert is_root(L, [0, 0, 1])
    assert not is_root(L, [0, 0, 2])
    assert not is_root(L, [1, 1, 0])


def test_generators_preserve_cone():
    from latorbits.ogroup import in_positive_cone_component

    L = build_lattice("U+A3")
    for g in oplus_generators(L):
        assert g.is_integral() and in_positive_cone_component(L, g)


def test_non_reflective_case_gives_up():
    L = lattice(la.block_diag([[0, 1], [1, 0]], [[-2, -1], [-1, -12]]))
    res = vinberg_roots(L, [1, 1, 0, 0], work=20000)
    assert not res.terminated


def test_signature_checks():
    with pytest.raises(LatticeError):
        vinberg_roots(build_lattice("2U+A2"), [1, 1, 0, 0, 0, 0])
    with pytest.raises(LatticeError):
        vinberg_roots(build_lattice("U+A2"), [1, 0, 0, 0])
