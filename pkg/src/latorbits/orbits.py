"""Orbit equivalence of non-isotropic vectors under arithmetic subgroups.

Two vectors are compared by splitting ``L`` along the primitive line through
each of them: ``<w> ⊕ K ⊂ L`` with ``K = w^⊥``. An isometry of the pieces
extends to ``L`` exactly when it respects the glue group ``H = L/(<w> ⊕ K)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from . import linalg as la
from .binary import binary_automorphism_generators, binary_isometry
from .discform import (
    FiniteQuadraticForm,
    FqfMap,
    disc_form_of,
    generated_subgroup,
    iso_fqf,
    unique_genus_check,
)
from .isometry import Budget, iso_definite, reduce_definite, represents_norm
from .lattice import Lattice, LatticeError, discriminant_group, lattice, orthogonal_complement, primitive_part
from .ogroup import GroupSpec, OrthMap, disc_action, is_member

Elem = tuple[int, ...]


@dataclass
class OrbitVerdict:
    equivalent: bool
    witness: OrthMap | None = None
    inconclusive_reason: str | None = None
    disc_map: FqfMap | None = None
    glue: tuple | None = None
    reason: str = ""

    @property
    def status(self) -> str:
        if self.inconclusive_reason is not None:
            return "inconclusive"
        return "equivalent" if self.equivalent else "not equivalent"


def _inconclusive(why: str, **kw) -> OrbitVerdict:
    return OrbitVerdict(False, inconclusive_reason=why, **kw)


def _scale_test(L: Lattice, v1, v2) -> tuple[Fraction, list[int], list[int]] | OrbitVerdict:
    c1, w1 = primitive_part(v1)
    c2, w2 = primitive_part(v2)
    n1 = la.bilinear(L.gram, v1, v1)
    if n1 == 0:
        raise LatticeError("v1 is isotropic; isotropic orbits come from the building")
    if n1 != la.bilinear(L.gram, v2, v2):
        return OrbitVerdict(False, reason="norms differ")
    if c1 != c2:
        return OrbitVerdict(False, reason="primitive scale factors differ")
    return c1, w1, w2


@dataclass
class Splitting:
    """``<w> ⊕ K ⊂ L`` with ``iota = (w | k_1 | ... )``."""

    w: list[int]
    K_basis: list[list[int]]
    K: Lattice

    @property
    def iota(self):
        return la.from_columns([self.w] + self.K_basis)


def split(L: Lattice, w: Sequence[int]) -> Splitting:
    sub = orthogonal_complement(L, w)
    basis = [list(c) for c in sub.basis]
    return Splitting(list(w), basis, lattice(sub.gram(L)))


# ---------------------------------------------------------------------------
# definite complement


def equiv_definite_complement(L: Lattice, spec: GroupSpec, v1, v2,
                              budget: Budget | None = None) -> OrbitVerdict:
    """Decide ``v1 ~ v2`` under ``spec`` when ``v1^⊥`` is definite, with an
    explicit witness ``θ = ι2 (φ ⊕ ψ) ι1^{-1}``."""
    pre = _scale_test(L, v1, v2)
    if isinstance(pre, OrbitVerdict):
        return pre
    _, w1, w2 = pre
    s1, s2 = split(L, w1), split(L, w2)
    if s1.K.rank and not s1.K.is_definite():
        raise LatticeError("complement is indefinite; use the indefinite algorithm")
    if s1.K.signature != s2.K.signature:
        return OrbitVerdict(False, reason="complements have different signatures")
    i1inv = la.inverse(s1.iota)
    i2 = s2.iota
    for psi in _definite_isometries(s1.K, s2.K, budget):
        blk = la.block_diag([[1]], psi) if psi else [[1]]
        theta = la.normalize_matrix(la.mat_mul(la.mat_mul(i2, blk), i1inv))
        if not la.is_integral(theta):
            continue
        g = OrthMap(theta, L)
        if is_member(spec, g):
            assert g(w1) == w2
            return OrbitVerdict(True, witness=g, reason="witness found")
    return OrbitVerdict(False, reason="no isometry of complements extends into the group")


def _definite_isometries(K1: Lattice, K2: Lattice, budget) -> Iterator[list[list[int]]]:
    if K1.rank == 0:
        yield []
        return
    R1, T1 = reduce_definite(K1)
    R2, T2 = reduce_definite(K2)
    T1i = la.inverse(T1)
    for p in iso_definite(R1, R2, budget):
        yield [[int(x) for x in r] for r in la.mat_mul(la.mat_mul(T2, p), T1i)]


# ---------------------------------------------------------------------------
# glue data


@dataclass
class GlueData:
    """Glue between ``<w>`` and ``K = w^⊥`` inside ``D(<w>) ⊕ D(K)``.

    Elements are tuples ``(a, b_1, ..., b_r)`` with ``a`` modulo ``|w^2|`` and
    ``b`` in the canonical generators of ``D(K)``.
    """

    split: Splitting
    qK: FiniteQuadraticForm
    orders: tuple[int, ...]
    lam: list[Elem]          # images of the basis of L
    H: frozenset
    iota: list[Elem]         # images of the generators of D(L)

    @property
    def order(self) -> int:
        return len(self.H)

    @property
    def H_K(self) -> frozenset:
        return frozenset(h[1:] for h in self.H)

    @property
    def H_w(self) -> frozenset:
        return frozenset(h[:1] for h in self.H)

    def reduce(self, x) -> Elem:
        return tuple(a % d for a, d in zip(x, self.orders))

    def coset_key(self, x) -> Elem:
        return min(self.reduce([a + b for a, b in zip(x, h)]) for h in self.H)


def _project(L: Lattice, s: Splitting, DK, x) -> Elem:
    """Class of ``x ∈ L^v`` in ``D(<w>) ⊕ D(K)``."""
    ww = L.norm(s.w)
    a = la.normalize(L.ip(x, s.w) * (1 if ww > 0 else -1)) % abs(ww)
    pair = [L.ip(k, x) for k in s.K_basis]
    c = la.mat_vec(s.K.gram_inverse, pair)
    b = DK.exponents(c, s.K) if DK.invariant_factors else ()
    return (a,) + tuple(b)


def glue_data(L: Lattice, w: Sequence[int]) -> GlueData:
    s = split(L, w)
    DK = discriminant_group(s.K)
    qK = disc_form_of(s.K)
    orders = (abs(L.norm(s.w)),) + DK.invariant_factors
    n = L.rank
    lam = [_project(L, s, DK, [int(i == j) for i in range(n)]) for j in range(n)]
    H: set = {tuple(0 for _ in orders)}
    frontier = list(H)
    while frontier:
        nxt = []
        for x in frontier:
            for g in lam:
                y = tuple((a + b) % d for a, b, d in zip(x, g, orders))
                if y not in H:
                    H.add(y)
                    nxt.append(y)
        frontier = nxt
    DL = discriminant_group(L)
    iota = [_project(L, s, DK, u) for u in DL.generator_lifts]
    return GlueData(s, qK, orders, lam, frozenset(H), iota)


def _apply(psi: FqfMap, x: Elem, orders) -> Elem:
    b = psi(x[1:]) if len(x) > 1 else ()
    return (x[0] % orders[0],) + tuple(b)


def induced_disc_map(L: Lattice, g1: GlueData, g2: GlueData, psi: FqfMap) -> FqfMap | None:
    """``ι2^{-1} ∘ (1 ⊕ ψ̄) ∘ ι1`` on ``D(L)``, or ``None`` if ``1 ⊕ ψ̄`` does not
    carry ``H1`` onto ``H2``."""
    if {_apply(psi, h, g2.orders) for h in g1.H} != set(g2.H):
        return None
    DL = discriminant_group(L)
    table = {}
    for e in DL.elements():
        img = [0] * len(g2.orders)
        for k, t in zip(e, g2.iota):
            img = [a + k * b for a, b in zip(img, t)]
        table[g2.coset_key(img)] = e
    images = []
    for t in g1.iota:
        key = g2.coset_key(_apply(psi, t, g2.orders))
        images.append(table[key])
    return FqfMap.from_images(images, DL.invariant_factors, DL.invariant_factors)


# ---------------------------------------------------------------------------
# indefinite complement


def _realised_disc_isos(g1: GlueData, g2: GlueData) -> tuple[list[FqfMap] | None, str]:
    """Maps ``D(K1) -> D(K2)`` induced by isometries ``K1 -> K2``.

    Returns ``(maps, note)``; ``maps`` is ``None`` when this cannot be decided.
    """
    K1, K2 = g1.split.K, g2.split.K
    q1, q2 = g1.qK, g2.qK
    if K1.signature != K2.signature:
        return [], "complements have different signatures"
    if next(iso_fqf(q1, q2), None) is None:
        return [], "complements have non-isomorphic discriminant forms"
    if K1.rank == 2:
        psi = binary_isometry(K1.gram, K2.gram)
        if psi is None:
            return [], "binary complements are not isometric"
        D1, D2 = discriminant_group(K1), discriminant_group(K2)
        psibar = FqfMap.from_images([D2.exponents(la.mat_vec(psi, u), K2) for u in D1.generator_lifts],
                                    D1.invariant_factors, D2.invariant_factors)
        auts = [disc_action(K1, OrthMap(a, K1)) for a in binary_automorphism_generators(K1.gram)]
        group = generated_subgroup(auts, q1) if q1.rank else []
        if not q1.rank:
            return [psibar], "binary complements are isometric"
        return sorted({psibar.compose(a) for a in group}, key=lambda m: m.matrix), "binary complements"
    if unique_genus_check(K1.signature, q1) != "applies":
        return None, "complement is not covered by the unique-genus criterion"
    return list(iso_fqf(q1, q2)), "complements lie in a one-class genus"


def equiv_indefinite(L: Lattice, A: GroupSpec, v1, v2) -> OrbitVerdict:
    """Decide ``v1 ~ v2`` under ``O_A(L)`` for an indefinite complement.

    Only the discriminant condition of ``A`` is used. The verdict records the
    map on ``D(L)`` and the two glue data; no integral witness is built.
    """
    pre = _scale_test(L, v1, v2)
    if isinstance(pre, OrbitVerdict):
        return pre
    _, w1, w2 = pre
    g1, g2 = glue_data(L, w1), glue_data(L, w2)
    if g1.split.K.is_definite():
        raise LatticeError("complement is definite; use the definite algorithm")
    glue = (g1, g2)
    if g1.order != g2.order or g1.qK.order_profile != g2.qK.order_profile:
        return OrbitVerdict(False, glue=glue, reason="glue or discriminant groups differ")
    maps, note = _realised_disc_isos(g1, g2)
    if maps is None:
        return _inconclusive(note, glue=glue)
    for psi in maps:
        m = induced_disc_map(L, g1, g2, psi)
        if m is not None and A.contains_disc(m):
            return OrbitVerdict(True, disc_map=m, glue=glue, reason=note)
    return OrbitVerdict(False, glue=glue, reason=note or "no compatible discriminant isometry")


def upgrade_to_so_plus(L: Lattice, A: GroupSpec, v1, v2, base: OrbitVerdict) -> OrbitVerdict:
    """Transfer an ``O_A`` verdict to ``SO⁺_A`` when ``v1^⊥`` represents both
    ``2`` and ``-2``."""
    if base.inconclusive_reason is not None or not base.equivalent:
        return base
    _, w1 = primitive_part(v1)
    K = split(L, w1).K
    found = []
    for t in (2, -2):
        v, _ = represents_norm(K, t)
        if v is None:
            return _inconclusive(f"complement: no vector of norm {t} found", glue=base.glue)
        found.append(v)
    return OrbitVerdict(True, disc_map=base.disc_map, glue=base.glue,
                        reason="complement represents 2 and -2")


def equivalent(L: Lattice, spec: GroupSpec, v1, v2) -> OrbitVerdict:
    """Dispatch on the complement: definite goes through the witness search,
    indefinite through the glue test (then the ``±2`` upgrade if the group
    asks for determinant or spinor conditions)."""
    _, w1 = primitive_part(v1)
    if la.bilinear(L.gram, w1, w1) == 0:
        raise LatticeError("v1 is isotropic")
    K = split(L, w1).K
    if K.rank == 0 or K.is_definite():
        return equiv_definite_complement(L, spec, v1, v2)
    base = equiv_indefinite(L, spec, v1, v2)
    if spec.require_det_one or spec.require_spinor_positive:
        return upgrade_to_so_plus(L, spec, v1, v2, base)
    return base
