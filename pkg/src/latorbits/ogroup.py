"""Isometries of lattices: reflections, spinor norm, discriminant action,
Eichler transvections, the SL2 x SL2 embedding, generator sets and
membership specifications."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg as la
from .discform import FiniteQuadraticForm, FqfMap, disc_form_of, generated_subgroup, identity_map
from .lattice import Lattice, LatticeError, discriminant_group


class OrthError(ValueError):
    pass


def _freeze(M) -> tuple[tuple, ...]:
    return tuple(tuple(la.normalize(x) for x in row) for row in M)


@dataclass(frozen=True, eq=False)
class OrthMap:
    """An isometry of ``L ⊗ Q`` acting on coordinate columns."""

    matrix: tuple[tuple, ...]
    home: Lattice = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", _freeze(self.matrix))

    # equality and hashing only look at the matrix
    def __eq__(self, other):
        return isinstance(other, OrthMap) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    @classmethod
    def checked(cls, M, home: Lattice) -> "OrthMap":
        g = cls(M, home)
        if not g.preserves_form():
            raise OrthError("matrix does not preserve the bilinear form")
        return g

    @classmethod
    def identity(cls, home: Lattice) -> "OrthMap":
        return cls(la.identity(home.rank), home)

    @property
    def n(self) -> int:
        return len(self.matrix)

    def preserves_form(self) -> bool:
        M = self.matrix
        G = self.home.gram
        return la.normalize_matrix(la.mat_mul(la.mat_mul(la.transpose(M), G), M)) == [list(r) for r in G]

    def __matmul__(self, other: "OrthMap") -> "OrthMap":
        return OrthMap(la.mat_mul(self.matrix, other.matrix), self.home)

    def __call__(self, v: Sequence) -> list:
        return [la.normalize(x) for x in la.mat_vec(self.matrix, v)]

    @cached_property
    def inverse(self) -> "OrthMap":
        # g^{-1} = G^{-1} g^T G for an isometry
        G = self.home.gram
        Gi = self.home.gram_inverse
        return OrthMap(la.mat_mul(la.mat_mul(Gi, la.transpose(self.matrix)), G), self.home)

    def is_integral(self) -> bool:
        return la.is_integral(self.matrix)

    @cached_property
    def det(self):
        return la.det(self.matrix)

    @cached_property
    def spinor(self) -> int:
        return spinor_norm(self.home, self)

    def is_identity(self) -> bool:
        n = self.n
        return all(self.matrix[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))

    def __repr__(self):
        return f"OrthMap({[list(r) for r in self.matrix]})"


# ---------------------------------------------------------------------------
# reflections and spinor norm


def reflection(L: Lattice, w: Sequence) -> OrthMap:
    """``σ_w: x ↦ x - 2(x,w)/(w,w) w``."""
    ww = Fraction(L.norm(w))
    if ww == 0:
        raise OrthError("cannot reflect in an isotropic vector")
    hw = L.hat(w)
    n = L.rank
    M = [[Fraction(int(i == j)) - 2 * Fraction(w[i]) * hw[j] / ww for j in range(n)] for i in range(n)]
    return OrthMap(M, L)


def _ip(G, u, v):
    return la.bilinear(G, u, v)


def spinor_norm(L: Lattice, g: OrthMap | Sequence[Sequence]) -> int:
    """Real spinor norm ``±1`` via an explicit reflection decomposition."""
    M = g.matrix if isinstance(g, OrthMap) else g
    G = L.gram
    n = L.rank
    P, _ = la.congruent_diagonalize(G)
    basis = la.columns(P)
    h = [list(map(Fraction, r)) for r in M]
    sign = 1

    def refl_apply(w, ww, H):
        # returns σ_w ∘ H
        hw = [la.dot(w, col) for col in zip(*G)]
        out = [row[:] for row in H]
        for j in range(n):
            col = [H[i][j] for i in range(n)]
            c = 2 * la.dot(hw, col) / ww
            if c:
                for i in range(n):
                    out[i][j] -= c * w[i]
        return out

    for b in basis:
        hb = la.mat_vec(h, b)
        if hb == [Fraction(x) for x in b]:
            continue
        w = [x - y for x, y in zip(hb, b)]
        ww = _ip(G, w, w)
        if ww != 0:
            h = refl_apply(w, ww, h)
            sign *= 1 if -ww > 0 else -1
        else:
            w2 = [x + y for x, y in zip(hb, b)]
            ww2 = _ip(G, w2, w2)
            h = refl_apply(w2, ww2, h)
            sign *= 1 if -ww2 > 0 else -1
            bb = _ip(G, b, b)
            h = refl_apply([Fraction(x) for x in b], bb, h)
            sign *= 1 if -bb > 0 else -1
    return sign


def in_positive_cone_component(L: Lattice, g: OrthMap) -> bool:
    """For Lorentzian ``L`` (one positive direction): does ``g`` preserve the
    positive cone? Decided with a timelike rational vector."""
    p, m = L.signature
    if p != 1:
        raise OrthError("cone test needs signature (1, n)")
    P, D = la.congruent_diagonalize(L.gram)
    k = next(i for i in range(L.rank) if D[i][i] > 0)
    x = [P[r][k] for r in range(L.rank)]
    return _ip(L.gram, g(x), x) > 0


# ---------------------------------------------------------------------------
# discriminant action


def disc_action(L: Lattice, g: OrthMap) -> FqfMap:
    if not g.is_integral() or not g.inverse.is_integral():
        raise OrthError("discriminant action needs an integral isometry")
    D = discriminant_group(L)
    imgs = [D.exponents(g(v), L) for v in D.generator_lifts]
    return FqfMap.from_images(imgs, D.invariant_factors, D.invariant_factors)


def is_stable(L: Lattice, g: OrthMap) -> bool:
    return disc_action(L, g).is_identity()


# ---------------------------------------------------------------------------
# Eichler transvections and SL2 x SL2


def eichler_transvection(L: Lattice, e: Sequence, a: Sequence) -> OrthMap:
    """``t(e,a): v ↦ v - (a,v)e + (e,v)a - (a,a)/2 (e,v) e``."""
    if L.norm(e) != 0:
        raise OrthError("e must be isotropic")
    if L.ip(e, a) != 0:
        raise OrthError("a must be orthogonal to e")
    n = L.rank
    he, ha = L.hat(e), L.hat(a)
    aa = Fraction(L.norm(a))
    M = [[int(i == j) - ha[j] * e[i] + he[j] * a[i] - aa / 2 * he[j] * e[i] for j in range(n)] for i in range(n)]
    return OrthMap(M, L)


def _split_check(L: Lattice, planes: int = 2) -> None:
    G = L.gram
    k = 2 * planes
    if L.rank < k:
        raise OrthError("lattice does not start with the required hyperbolic planes")
    for i in range(k):
        for j in range(L.rank):
            want = 1 if (i // 2 == j // 2 and i != j and j < k) else 0
            if G[i][j] != want:
                raise OrthError("lattice does not start with the required hyperbolic planes")


def iota(x: Sequence) -> list[list]:
    """``2U ∋ (x1,x2,x3,x4) ↦ [[x3, -x2], [x1, x4]]``; the form becomes 2·det."""
    return [[x[2], -x[1]], [x[0], x[3]]]


def iota_inv(X) -> list:
    return [X[1][0], -X[0][1], X[0][0], X[1][1]]


def theta(L: Lattice, A, B) -> OrthMap:
    """Image of ``(A, B) ∈ SL2(Z)²`` acting by ``X ↦ A X B^{-1}`` on the first
    two hyperbolic planes, identity elsewhere."""
    for Z in (A, B):
        if la.det(Z) != 1:
            raise OrthError("SL2 matrices must have determinant 1")
    _split_check(L)
    Binv = la.inverse(B)
    n = L.rank
    M = la.identity(n)
    for j in range(4):
        e = [int(i == j) for i in range(4)]
        img = iota_inv(la.mat_mul(la.mat_mul(A, iota(e)), Binv))
        for i in range(4):
            M[i][j] = la.normalize(img[i])
    return OrthMap(M, L)


def sl2_embed(L: Lattice, Z, side: str = "left") -> OrthMap:
    I2 = [[1, 0], [0, 1]]
    if side == "left":
        return theta(L, Z, I2)
    if side == "right":
        return theta(L, I2, Z)
    raise ValueError("side must be 'left' or 'right'")


def minus_identity_on_planes(L: Lattice, planes: int = 2) -> OrthMap:
    n = L.rank
    return OrthMap([[(-1 if i < 2 * planes else 1) * int(i == j) for j in range(n)] for i in range(n)], L)


# ---------------------------------------------------------------------------
# generator sets


def extend_block(L: Lattice, block, offset: int) -> OrthMap:
    """Embed a square block acting on coordinates ``offset..`` by identity elsewhere."""
    n = L.rank
    M = la.identity(n)
    k = len(block)
    for i in range(k):
        for j in range(k):
            M[offset + i][offset + j] = block[i][j]
    return OrthMap(M, L)


def _unit(n, i):
    return [int(j == i) for j in range(n)]


def generators_Oplus_split(L: Lattice, gens_L1: Sequence) -> list[OrthMap]:
    """Generators of ``O⁺(U ⊕ L1)``: transvections along the first hyperbolic
    plane over a basis of ``L1`` plus the ``L1`` generators."""
    _split_check(L, 1)
    n = L.rank
    x1, x2 = _unit(n, 0), _unit(n, 1)
    out = []
    for j in range(2, n):
        out.append(eichler_transvection(L, x1, _unit(n, j)))
    for j in range(2, n):
        out.append(eichler_transvection(L, x2, _unit(n, j)))
    for g in gens_L1:
        out.append(extend_block(L, _matrix(g), 2))
    return out


def _matrix(g):
    return g.matrix if isinstance(g, OrthMap) else g


def stab_line_generators(L: Lattice, gens_L1: Sequence) -> list[OrthMap]:
    """Generators of the stabilizer of ``⟨x1⟩`` in ``O⁺(L)`` for the
    standard split basis; ``gens_L1`` act on coordinates ``3..``."""
    _split_check(L)
    n = L.rank
    x1 = _unit(n, 0)
    out = [eichler_transvection(L, x1, _unit(n, j)) for j in range(2, n)]
    out += [extend_block(L, _matrix(g), 2) for g in gens_L1]
    out.append(minus_identity_on_planes(L))
    return out


def stab_plane_generators(L: Lattice, gens_L0: Sequence) -> list[OrthMap]:
    """Generators of the stabilizer of ``⟨x1, x3⟩`` in ``O⁺(L)``."""
    _split_check(L)
    n = L.rank
    x = [_unit(n, i) for i in range(n)]
    out = [
        eichler_transvection(L, x[0], x[3]),
        eichler_transvection(L, x[1], x[2]),
        eichler_transvection(L, x[0], x[2]),
    ]
    for j in range(4, n):
        out.append(eichler_transvection(L, x[0], x[j]))
        out.append(eichler_transvection(L, x[2], x[j]))
    out += [extend_block(L, _matrix(g), 4) for g in gens_L0]
    S = [[0, -1], [1, 0]]
    T = [[1, 1], [0, 1]]
    out += [sl2_embed(L, S), sl2_embed(L, T)]
    out.append(minus_identity_on_planes(L))
    return out


def orthogonal_group_definite(L0: Lattice) -> list[list[list[int]]]:
    """A generating set of ``O(L0)`` for definite ``L0`` (a subset of all automorphisms)."""
    from .isometry import automorphisms_definite

    if L0.rank == 0:
        return []
    auts = automorphisms_definite(L0)
    auts.sort(key=lambda M: [list(r) for r in M])
    gens: list = []
    closure = {tuple(map(tuple, la.identity(L0.rank)))}
    for A in auts:
        key = tuple(map(tuple, A))
        if key in closure:
            continue
        gens.append(A)
        closure = _matrix_closure(gens, L0.rank)
        if len(closure) == len(auts):
            break
    return gens


def _matrix_closure(gens, n):
    start = tuple(map(tuple, la.identity(n)))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(map(tuple, la.mat_mul(g, x)))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# group specifications


@dataclass
class GroupSpec:
    """A subgroup of ``O(L ⊗ Q)`` cut out by membership predicates.

    ``disc_condition`` is ``"any"``, ``"trivial"`` (stable subgroup) or a list
    of ``FqfMap`` generating a subgroup ``A`` of ``O(D(L))``.
    """

    ambient: Lattice
    require_integral: bool = True
    require_det_one: bool = False
    require_spinor_positive: bool = False
    disc_condition: object = "any"
    extra_generators: list = field(default_factory=list)

    @cached_property
    def disc_form(self) -> FiniteQuadraticForm:
        return disc_form_of(self.ambient)

    @cached_property
    def disc_subgroup(self) -> frozenset:
        if isinstance(self.disc_condition, str):
            raise OrthError("no explicit discriminant subgroup")
        maps = [FqfMap(m.matrix, m.src_orders, m.dst_orders, True) for m in self.disc_condition]
        return generated_subgroup(maps, self.disc_form)

    def describe(self) -> str:
        parts = []
        if self.disc_condition == "trivial":
            parts.append("stable")
        elif not isinstance(self.disc_condition, str):
            parts.append(f"disc-subgroup(order {len(self.disc_subgroup)})")
        if self.require_spinor_positive:
            parts.append("plus")
        if self.require_det_one:
            parts.append("so")
        return ",".join(parts) or "full"

    def contains_disc(self, act: FqfMap) -> bool:
        if self.disc_condition == "any":
            return True
        if self.disc_condition == "trivial":
            return act.is_identity()
        return FqfMap(act.matrix, act.src_orders, act.dst_orders, True) in self.disc_subgroup


def stable_plus(L: Lattice) -> GroupSpec:
    return GroupSpec(L, require_spinor_positive=True, disc_condition="trivial")


def is_member(spec: GroupSpec, g: OrthMap) -> bool:
    L = spec.ambient
    if g.home.gram != L.gram:
        raise OrthError("map lives on a different lattice")
    if not g.preserves_form():
        return False
    integral = g.is_integral() and g.inverse.is_integral()
    if spec.require_integral and not integral:
        return False
    if spec.require_det_one and g.det != 1:
        return False
    if spec.require_spinor_positive and g.spinor != 1:
        return False
    if spec.disc_condition != "any":
        if not integral:
            return False
        if not spec.contains_disc(disc_action(L, g)):
            return False
    return True


def parse_group_flags(L: Lattice, flags: str, disc_maps: Sequence[FqfMap] | None = None) -> GroupSpec:
    spec = GroupSpec(L)
    for tok in [t.strip() for t in flags.split(",") if t.strip()]:
        if tok == "stable":
            spec.disc_condition = "trivial"
        elif tok == "plus":
            spec.require_spinor_positive = True
        elif tok == "so":
            spec.require_det_one = True
        elif tok == "full":
            pass
        elif tok.startswith("disc="):
            if disc_maps is None:
                raise ValueError("disc= flag needs a loaded subgroup")
            spec.disc_condition = list(disc_maps)
        else:
            raise ValueError(f"unknown group flag {tok!r}")
    return spec


def fqf_identity(L: Lattice) -> FqfMap:
    return identity_map(disc_form_of(L))
