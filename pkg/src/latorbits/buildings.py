"""Tits buildings of arithmetic subgroups of ``O⁺(L)`` for lattices of
signature ``(2, n)``.

Everything is computed inside a maximal overlattice ``L'`` in split form
``2U ⊕ L0`` (basis ``x1..x4`` for the two hyperbolic planes, then ``L0``).
Write ``G2 = O⁺(L')`` and ``ℓ0 = <x1>``, ``Π0 = <x1, x3>``. For a subgroup
``G1 ⊂ G2`` of finite index, the ``G1``-orbits of isotropic lines are the
double cosets ``G1 \\ G2 / Stab(ℓ0)`` (when ``G2`` is transitive on lines),
and likewise for planes. Incidences come from single right cosets: the coset
``G1 y`` contributes the edge between the orbits of ``y ℓ0`` and ``y Π0``.
Because ``Stab(Π0)`` acts transitively on the lines of ``Π0``, these are all
the edges.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Sequence

from . import linalg as la
from .cosets import (
    DEFAULT_BUDGET,
    CosetIndex,
    Transversal,
    coset_key_for,
    coset_transversal,
    double_cosets,
    gamma_n_transversal,
    member_via_embedding,
)
from .discform import disc_form_of, isotropic_elements
from .isometry import enumerate_genus_definite, is_isometric_definite
from .lattice import Lattice, LatticeError, Sublattice, lattice, maximal_overlattice, primitive_part, sublattice
from .ogroup import (
    GroupSpec,
    OrthError,
    OrthMap,
    _split_check,
    eichler_transvection,
    generators_Oplus_split,
    is_member,
    iota,
    orthogonal_group_definite,
    stab_line_generators,
    stab_plane_generators,
    theta,
)

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


# ---------------------------------------------------------------------------
# maximal split overlattice


def _scaled_hyperbolic_prefix(L: Lattice) -> list[int]:
    """Scales ``m`` of leading blocks ``U(m)`` orthogonal to everything else."""
    G = L.gram
    n = L.rank
    out = []
    k = 0
    while k + 2 <= n:
        m = G[k][k + 1]
        if G[k][k] or G[k + 1][k + 1] or m <= 0:
            break
        if any(G[i][j] for i in (k, k + 1) for j in range(n) if j not in (k, k + 1)):
            break
        out.append(m)
        k += 2
    return out


def split_maximal_overlattice(L: Lattice) -> tuple[Lattice, list[list[int]]]:
    """A maximal even overlattice of ``L``, keeping leading ``U(m)`` blocks
    as ``U`` (through ``diag(m, 1)``) so that split form survives.

    Returns ``(L', E)`` with the columns of ``E`` the basis of ``L`` in ``L'``
    coordinates.
    """
    ms = _scaled_hyperbolic_prefix(L)
    k = 2 * len(ms)
    n = L.rank
    D = la.identity(n)
    for i, m in enumerate(ms):
        D[2 * i][2 * i] = m
    mid = lattice(la.block_diag(*([[[0, 1], [1, 0]]] * len(ms)), [row[k:] for row in L.gram[k:]]))
    Lp, E = maximal_overlattice(mid)
    E = la.normalize_matrix(la.mat_mul(E, D))
    assert la.mat_mul(la.mat_mul(la.transpose(E), Lp.gram), E) == [list(r) for r in L.gram]
    return Lp, E


def is_maximal(L: Lattice) -> bool:
    q = disc_form_of(L)
    return not any(any(x) for x in isotropic_elements(q))


@dataclass
class SplitBasis:
    """The standard basis ``x1..x_{n+2}`` of ``2U ⊕ L0``."""

    vectors: list[list[int]]

    @classmethod
    def of(cls, Lp: Lattice) -> "SplitBasis":
        _split_check(Lp)
        return cls([list(r) for r in la.identity(Lp.rank)])

    def __getitem__(self, i: int) -> list[int]:
        """1-based access, ``basis[1] = x1``."""
        return self.vectors[i - 1]


@dataclass
class BuildingContext:
    """Maximal-lattice data shared by the building algorithms.

    Generator sets are computed on first use: ``G2_gens`` for ``O⁺(L')``,
    ``line_stab`` and ``plane_stab`` for the stabilizers of ``ℓ0`` and ``Π0``.
    """

    L: Lattice
    Lp: Lattice
    embed: list
    L0: Lattice
    budget: int = DEFAULT_BUDGET

    @cached_property
    def gens_L0(self) -> list:
        return orthogonal_group_definite(self.L0)

    @cached_property
    def gens_L1(self) -> list:
        from .vinberg import oplus_generators

        L1 = lattice(la.block_diag([[0, 1], [1, 0]], self.L0.gram))
        return oplus_generators(L1, [1, 1] + [0] * self.L0.rank)

    @cached_property
    def G2_gens(self) -> list:
        return generators_Oplus_split(self.Lp, self.gens_L1)

    @cached_property
    def line_stab(self) -> list:
        return stab_line_generators(self.Lp, self.gens_L1)

    @cached_property
    def plane_stab(self) -> list:
        return stab_plane_generators(self.Lp, self.gens_L0)

    @property
    def basis(self) -> SplitBasis:
        return SplitBasis.of(self.Lp)

    @cached_property
    def embed_inverse(self):
        return la.inverse(self.embed)

    def to_L(self, v) -> list:
        return [la.normalize(a) for a in la.mat_vec(self.embed_inverse, v)]

    def map_to_L(self, g: OrthMap) -> OrthMap:
        M = la.mat_mul(la.mat_mul(self.embed_inverse, [list(r) for r in g.matrix]), self.embed)
        return OrthMap(la.normalize_matrix(M), self.L)

    @property
    def line0(self) -> list[int]:
        return self.basis[1]

    @property
    def plane0(self) -> list[list[int]]:
        return [self.basis[1], self.basis[3]]


def building_context(L: Lattice, budget: int = DEFAULT_BUDGET) -> BuildingContext:
    """Find the maximal split overlattice ``L' = 2U ⊕ L0`` of ``L``."""
    p, m = L.signature
    if (p, m) != (2, L.rank - 2) or L.rank < 4:
        raise LatticeError("buildings need signature (2, n) with n >= 2")
    Lp, E = split_maximal_overlattice(L)
    try:
        _split_check(Lp)
    except OrthError as exc:
        raise LatticeError("the maximal overlattice is not of the form 2U + L0") from exc
    if not is_maximal(Lp):
        raise LatticeError("overlattice construction did not reach a maximal lattice")
    L0 = lattice([row[4:] for row in Lp.gram[4:]])
    return BuildingContext(L=L, Lp=Lp, embed=E, L0=L0, budget=budget)


def congruence_level(ctx: BuildingContext) -> int:
    """Exponent of ``L^v / M L'`` with ``M`` the exponent of ``L'/L``."""
    M = la.smith_diagonal([[int(a) for a in r] for r in ctx.embed])[-1]
    dual_cols = la.mat_mul(ctx.embed, ctx.L.gram_inverse)  # L^v basis in L' coordinates
    # M L' expressed in the basis of L^v
    C = la.normalize_matrix([[M * a for a in r] for r in la.inverse(dual_cols)])
    return la.smith_diagonal(C)[-1]


# ---------------------------------------------------------------------------
# transitivity on isotropic vectors


def _sl2_normalise(Lp: Lattice, x) -> tuple[OrthMap, list]:
    """``θ(A, B)`` with ``θ x`` supported on ``x3, x4, L0`` and the ``x3``
    coefficient dividing the ``x4`` one."""
    X = [[int(a) for a in r] for r in iota(x[:4])]
    P, _, Q = la.smith_normal_form(X)
    F = [[-1, 0], [0, 1]]
    if la.det(P) == -1:
        P = la.mat_mul(F, P)
    if la.det(Q) == -1:
        Q = la.mat_mul(Q, F)
    g = theta(Lp, P, la.inverse(Q))
    return g, g(list(x))


def _pairing_combination(p: Sequence[int]) -> tuple[int, list[int]]:
    """``(g, c)`` with ``sum c_i p_i = g = gcd(p)``."""
    g, c = 0, [0] * len(p)
    for i, a in enumerate(p):
        d, s, t = la.xgcd(g, a)
        c = [s * ci for ci in c]
        c[i] += t
        g = d
    if g < 0:
        g, c = -g, [-ci for ci in c]
    return g, c


def to_first_basis_vector(Lp: Lattice, x: Sequence[int]) -> OrthMap:
    """An element ``h ∈ O⁺(L')`` with ``h x = x1`` for primitive isotropic ``x``
    of divisor one, built from ``θ`` and two Eichler transvections."""
    _split_check(Lp)
    n = Lp.rank
    x = [int(a) for a in x]
    if not any(x) or Lp.norm(x) != 0:
        raise LatticeError("x must be a nonzero isotropic vector")
    if primitive_part(x)[0] != 1:
        raise LatticeError("x must be primitive")
    unit = [[int(i == j) for j in range(n)] for i in range(n)]
    h, y = _sl2_normalise(Lp, x)
    # pull a divisor-one coefficient onto x1 with t(x1, a), a in <x3, x4> + L0
    idx = list(range(2, n))
    delta, c = _pairing_combination([Lp.ip(unit[i], y) for i in idx])
    if delta != 1:
        raise LatticeError(f"x has divisor {delta}; isotropic vectors are not all equivalent")
    a = [0] * n
    for ci, i in zip(c, idx):
        a[i] = -ci
    t1 = eichler_transvection(Lp, unit[0], a)
    h = t1 @ h
    y = t1(y)
    assert y[0] == 1 and y[1] == 0
    g2, y = _sl2_normalise(Lp, y)
    h = g2 @ h
    if y[2] == -1:
        neg = theta(Lp, [[-1, 0], [0, -1]], [[1, 0], [0, 1]])
        h, y = neg @ h, neg(y)
    assert y[:3] == [0, 0, 1], y
    z = [0, 0, 0, 0] + [-b for b in y[4:]]
    t2 = eichler_transvection(Lp, unit[3], z)
    h = t2 @ h
    y = t2(y)
    s = theta(Lp, [[0, -1], [1, 0]], [[1, 0], [0, 1]])
    h = s @ h
    if s(y) != unit[0]:
        raise AssertionError("normalisation to x1 failed")
    return h


def tau(Lp: Lattice, x: Sequence[int], y: Sequence[int]) -> OrthMap:
    """An integral ``τ ∈ O⁺(L')`` with ``τ x = y`` for primitive isotropic
    ``x, y`` in the maximal split lattice ``L'``."""
    hx = to_first_basis_vector(Lp, x)
    hy = to_first_basis_vector(Lp, y)
    t = hy.inverse @ hx
    if t(list(x)) != [int(a) for a in y] or not t.is_integral() or t.spinor != 1:
        raise AssertionError("τ failed verification")
    return OrthMap(la.normalize_matrix(t.matrix), Lp)


# ---------------------------------------------------------------------------
# building data


@dataclass
class TitsBuilding:
    """Bipartite graph of isotropic line and plane orbits.

    Node representatives are sublattices of ``lattice`` (the lattice whose
    orthogonal group contains the group). ``witnesses[(i, j)]`` is a group
    element mapping line ``i`` into plane ``j``.
    """

    line_nodes: list[Sublattice]
    plane_nodes: list[Sublattice]
    edges: list[tuple[int, int]]
    group_label: str
    lattice: Lattice | None = None
    witnesses: dict = field(default_factory=dict, repr=False)
    complete: bool = True
    note: str = ""
    cosets: object = field(default=None, repr=False, compare=False)

    @property
    def shape(self) -> tuple[int, int, int]:
        return len(self.line_nodes), len(self.plane_nodes), len(self.edges)

    def degree(self, kind: str, i: int) -> int:
        pos = 0 if kind == "line" else 1
        return sum(1 for e in self.edges if e[pos] == i)


@dataclass
class _CosetData:
    spec: GroupSpec
    transversal: Transversal
    lines: object
    planes: object


def _line_sub(ctx: BuildingContext, v) -> Sublattice:
    _, w = primitive_part(ctx.to_L(v))
    return sublattice(ctx.L, [w])


def _plane_sub(ctx: BuildingContext, cols) -> Sublattice:
    vs = []
    for c in cols:
        _, w = primitive_part(ctx.to_L(c))
        vs.append(w)
    return sublattice(ctx.L, la.saturation(vs))


def contains_line(L: Lattice, plane: Sublattice, v) -> bool:
    cols = [list(c) for c in plane.basis]
    return la.rank(cols + [list(v)]) == len(cols)


def _genus_plane(ctx: BuildingContext, K: Lattice, radius: int = 3) -> list[list[int]] | None:
    """An isotropic plane ``<x1, v>`` of ``L'`` whose complement is
    isometric to ``K``; ``v`` is searched in ``U ⊕ L0`` by coordinate size."""
    Lp = ctx.Lp
    n = Lp.rank
    L1 = lattice([row[2:] for row in Lp.gram[2:]])
    for r in range(1, radius + 1):
        for v in product(range(-r, r + 1), repeat=n - 2):
            if max(abs(a) for a in v) != r or L1.norm(v) != 0:
                continue
            if primitive_part(list(v))[0] != 1:
                continue
            Kv = _isotropic_quotient(L1, list(v))
            if is_isometric_definite(Kv, K):
                return [[1] + [0] * (n - 1), [0, 0] + list(v)]
    return None


def _isotropic_quotient(L1: Lattice, v: list[int]) -> Lattice:
    from .lattice import orthogonal_complement

    W = [list(c) for c in orthogonal_complement(L1, v).basis]
    B = la.from_columns(W)
    Bt = la.transpose(B)
    c = [int(a) for a in la.mat_vec(la.inverse(la.mat_mul(Bt, B)), la.mat_vec(Bt, v))]
    _, _, Q = la.smith_normal_form([c])
    U = la.transpose(la.inverse(Q))  # first column ±c
    B = la.mat_mul(la.from_columns(W), U)
    cols = la.columns(B)[1:]
    return lattice([[L1.ip(a, b) for b in cols] for a in cols])


def building_maximal(ctx: BuildingContext) -> TitsBuilding:
    """``B(O⁺(L'))``: one line orbit and one plane orbit per class in the
    genus of ``L0``, each plane joined to the line."""
    classes = enumerate_genus_definite(ctx.L0.rank, (0, ctx.L0.rank), disc_form_of(ctx.L0))
    classes.sort(key=lambda K: not is_isometric_definite(K, ctx.L0))
    planes = []
    for m, K in enumerate(classes):
        cols = ctx.plane0 if m == 0 else _genus_plane(ctx, K)
        if cols is None:
            raise LatticeError(f"no plane found for genus class {m}")
        planes.append(sublattice(ctx.Lp, cols))
    line = sublattice(ctx.Lp, [ctx.line0])
    ident = OrthMap.identity(ctx.Lp)
    return TitsBuilding(
        line_nodes=[line],
        plane_nodes=planes,
        edges=[(0, m) for m in range(len(planes))],
        group_label="O+(L')",
        lattice=ctx.Lp,
        witnesses={(0, m): ident for m in range(len(planes))},
    )


# ---------------------------------------------------------------------------
# descent to a finite-index subgroup


def _check_subgroup_spec(spec: GroupSpec, ctx: BuildingContext) -> None:
    if spec.ambient.gram != ctx.L.gram:
        raise ValueError("group specification lives on a different lattice")
    if not spec.require_spinor_positive:
        raise ValueError("buildings are computed for subgroups of O+; add the 'plus' flag")


def _transversal(ctx: BuildingContext, spec: GroupSpec, budget: int | None) -> Transversal:
    key = coset_key_for(spec, ctx.Lp, ctx.embed)
    member = None if key is not None else member_via_embedding(spec, ctx.Lp, ctx.embed)
    return coset_transversal(ctx.G2_gens, member, budget or ctx.budget, key)


def _moves(T: Transversal, dc, i: int) -> OrthMap:
    """``y_i · path_i^{-1}``: an element of ``G1`` taking the class root's
    node to the node of coset ``i``."""
    return T.representatives[i] @ dc.paths[i].inverse


def building_descend(ctx: BuildingContext, spec_G1: GroupSpec, B2: TitsBuilding | None = None,
                     budget: int | None = None, cross_check: bool = True) -> TitsBuilding:
    """``B(G1)`` for ``G1 ⊂ O⁺(L')`` given by ``spec_G1`` on ``L``."""
    _check_subgroup_spec(spec_G1, ctx)
    if B2 is not None and len(B2.plane_nodes) != 1:
        raise NotImplementedError("descent is implemented when L0 has class number one")
    label = spec_G1.describe()
    T = _transversal(ctx, spec_G1, budget)
    if not T.complete:
        return TitsBuilding([], [], [], label, ctx.L, complete=False,
                            note=f"coset budget exhausted after {T.index} cosets")
    log.info("index %d; computing line and plane orbits", T.index)
    lines = double_cosets(T, ctx.line_stab)
    planes = double_cosets(T, ctx.plane_stab)
    reps = T.representatives
    line_nodes = [_line_sub(ctx, reps[r](ctx.line0)) for r in lines.roots]
    plane_nodes = [_plane_sub(ctx, [reps[r](c) for c in ctx.plane0]) for r in planes.roots]

    edges: dict[tuple[int, int], OrthMap] = {}
    for i in range(T.index):
        e = (lines.labels[i], planes.labels[i])
        if e in edges:
            continue
        w = _moves(T, planes, i).inverse @ _moves(T, lines, i)
        edges[e] = ctx.map_to_L(w)

    note = ""
    if cross_check:
        extra = _congruence_edges(ctx, T, lines, planes) - set(edges)
        if extra:
            raise AssertionError(f"congruence edge search found unexpected edges {sorted(extra)}")
        note = f"edges cross-checked with SL2(Z/{congruence_level(ctx)})"

    B = TitsBuilding(line_nodes, plane_nodes, sorted(edges), label, ctx.L,
                     {e: edges[e] for e in sorted(edges)}, True, note,
                     _CosetData(spec_G1, T, lines, planes))
    verify_building(B, spec_G1)
    return B


def _congruence_edges(ctx: BuildingContext, T: Transversal, lines, planes) -> set:
    """Edges found by moving ``ℓ0`` inside each plane representative with
    ``θ(h, 1)`` for ``h`` in a transversal of ``Γ(N)``."""
    N = congruence_level(ctx)
    J = gamma_n_transversal(N)
    I2 = [[1, 0], [0, 1]]
    out = set()
    thetas = [theta(ctx.Lp, h, I2) for h in J.representatives]
    for b, r in enumerate(planes.roots):
        y = T.representatives[r]
        for t in thetas:
            j = T.lookup.find(y @ t)
            if j is None:
                raise AssertionError("transversal does not cover SL2 moves")
            out.add((lines.labels[j], b))
    return out


def verify_building(B: TitsBuilding, spec: GroupSpec) -> None:
    """Exact checks: isotropy of all representatives and edge witnesses."""
    L = B.lattice
    for s in B.line_nodes + B.plane_nodes:
        cols = [list(c) for c in s.basis]
        if any(L.ip(u, v) for u in cols for v in cols):
            raise AssertionError("node representative is not totally isotropic")
    for (i, j), w in B.witnesses.items():
        if not is_member(spec, w):
            raise AssertionError("edge witness is not in the group")
        if not contains_line(L, B.plane_nodes[j], w(list(B.line_nodes[i].basis[0]))):
            raise AssertionError("edge witness does not map the line into the plane")


def isotropic_vector_orbits(ctx: BuildingContext, spec: GroupSpec, budget: int | None = None) -> list[Sublattice]:
    """Representatives of the ``G1``-orbits of isotropic lines."""
    _check_subgroup_spec(spec, ctx)
    T = _transversal(ctx, spec, budget)
    if not T.complete:
        raise LatticeError(f"coset budget exhausted after {T.index} cosets")
    lines = double_cosets(T, ctx.line_stab)
    return [_line_sub(ctx, T.representatives[r](ctx.line0)) for r in lines.roots]


# ---------------------------------------------------------------------------
# ascent to an intermediate group


class _Merger:
    """Union of ``G1``-classes under ``G2`` with transport elements
    ``φ_a ∈ G2`` taking the merged class's root node to class ``a``'s node."""

    def __init__(self, T, dc, coset2):
        n = dc.count
        self.adj: list[list] = [[] for _ in range(n)]
        first: dict[int, int] = {}
        for i, c2 in enumerate(coset2):
            j = first.setdefault(c2, i)
            if j == i:
                continue
            a, b = dc.labels[j], dc.labels[i]
            if a == b:
                continue
            # y_j y_i^{-1} ∈ G2 sends y_i E to y_j E
            g = T.representatives[j] @ T.representatives[i].inverse
            m = _moves(T, dc, j).inverse @ g @ _moves(T, dc, i)  # node b -> node a
            self.adj[b].append((a, m))
            self.adj[a].append((b, m.inverse))
        self.label = [-1] * n
        self.phi: list = [None] * n
        self.roots: list[int] = []
        for a0 in range(n):
            if self.label[a0] >= 0:
                continue
            k = len(self.roots)
            self.roots.append(a0)
            self.label[a0] = k
            self.phi[a0] = OrthMap.identity(T.representatives[0].home)
            queue = [a0]
            while queue:
                a = queue.pop(0)
                for b, m in self.adj[a]:  # m: node a -> node b
                    if self.label[b] < 0:
                        self.label[b] = k
                        self.phi[b] = m @ self.phi[a]
                        queue.append(b)


def building_ascend(ctx: BuildingContext, B1: TitsBuilding, spec_G2: GroupSpec) -> TitsBuilding:
    """``B(G2)`` from ``B(G1)`` for ``G1 ⊂ G2 ⊂ O⁺(L')`` by identifying
    nodes: two ``G1``-cosets in one ``G2``-coset give ``G2``-equivalent
    nodes."""
    _check_subgroup_spec(spec_G2, ctx)
    data = B1.cosets
    if data is None:
        raise ValueError("ascent needs a building produced by building_descend")
    if not B1.complete:
        return B1
    T = data.transversal
    key = coset_key_for(spec_G2, ctx.Lp, ctx.embed)
    member = None if key is not None else member_via_embedding(spec_G2, ctx.Lp, ctx.embed)
    idx = CosetIndex(key, member)
    coset2 = [idx.find_or_add(y)[0] for y in T.representatives]
    ml = _Merger(T, data.lines, coset2)
    mp = _Merger(T, data.planes, coset2)
    line_nodes = [B1.line_nodes[a] for a in ml.roots]
    plane_nodes = [B1.plane_nodes[b] for b in mp.roots]
    edges: dict = {}
    for (a, b), w1 in B1.witnesses.items():
        e = (ml.label[a], mp.label[b])
        if e in edges:
            continue
        phi = ctx.map_to_L(ml.phi[a])
        psi = ctx.map_to_L(mp.phi[b])
        edges[e] = psi.inverse @ w1 @ phi
    B = TitsBuilding(line_nodes, plane_nodes, sorted(edges), spec_G2.describe(), ctx.L,
                     {e: edges[e] for e in sorted(edges)}, True,
                     f"ascended from {B1.group_label}; {len(idx.reps)} cosets of G2")
    verify_building(B, spec_G2)
    return B


# ---------------------------------------------------------------------------
# output


def to_dot(B: TitsBuilding, name: str = "building") -> str:
    """DOT graph: line orbits as filled black nodes, plane orbits hollow."""
    out = [f"graph {name} {{"]
    out.append('  node [shape=circle, fixedsize=true, width=0.4];')
    for i in range(len(B.line_nodes)):
        out.append(f'  l{i} [label="{i}", style=filled, fillcolor=black, fontcolor=white];')
    for j in range(len(B.plane_nodes)):
        out.append(f'  p{j} [label="{j}", style=solid, color=black];')
    for i, j in B.edges:
        out.append(f"  l{i} -- p{j};")
    out.append("}")
    return "\n".join(out) + "\n"


def _fmt_vec(v) -> str:
    return "(" + ",".join(str(a) for a in v) + ")"


def dumps_building(B: TitsBuilding) -> str:
    """Plain-text serialization with a versioned header."""
    lines = [f"latorbits-building {FORMAT_VERSION}", f"group {B.group_label}"]
    if B.lattice is not None:
        lines.append("gram " + " ".join(_fmt_vec(r) for r in B.lattice.gram))
    lines.append(f"complete {'yes' if B.complete else 'no'}")
    for i, s in enumerate(B.line_nodes):
        lines.append(f"line {i} " + " ".join(_fmt_vec(c) for c in s.basis))
    for j, s in enumerate(B.plane_nodes):
        lines.append(f"plane {j} " + " ".join(_fmt_vec(c) for c in s.basis))
    for i, j in B.edges:
        lines.append(f"edge {i} {j}")
    return "\n".join(lines) + "\n"


def _parse_vec(tok: str) -> list[int]:
    if not (tok.startswith("(") and tok.endswith(")")):
        raise ValueError(f"bad vector {tok!r}")
    return [int(a) for a in tok[1:-1].split(",") if a]


def loads_building(text: str) -> TitsBuilding:
    rows = [r for r in text.splitlines() if r.strip()]
    if not rows or not rows[0].startswith("latorbits-building "):
        raise ValueError("missing building header")
    version = int(rows[0].split()[1])
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported building format version {version}")
    label, L, complete = "", None, True
    lines, planes, edges = [], [], []
    for r in rows[1:]:
        head, _, rest = r.partition(" ")
        toks = rest.split()
        if head == "group":
            label = rest
        elif head == "gram":
            L = lattice([_parse_vec(t) for t in toks])
        elif head == "complete":
            complete = rest.strip() == "yes"
        elif head in ("line", "plane"):
            if L is None:
                raise ValueError("node listed before the Gram matrix")
            sub = sublattice(L, [_parse_vec(t) for t in toks[1:]])
            (lines if head == "line" else planes).append(sub)
        elif head == "edge":
            edges.append((int(toks[0]), int(toks[1])))
        else:
            raise ValueError(f"unknown record {head!r}")
    return TitsBuilding(lines, planes, edges, label, L, complete=complete)
