"""Right coset transversals ``G1 \\ G2`` by breadth-first search.

Two elements ``x, y`` of ``G2`` lie in the same right coset when
``x y^{-1} ∈ G1``. Searches accept either a membership predicate for ``G1``
(pairwise tests) or a *coset key*: a function with ``key(x) == key(y)``
exactly when ``G1 x = G1 y``, which turns the search into hashing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Hashable, Sequence

from . import linalg as la
from .lattice import Lattice, Sublattice, discriminant_group
from .ogroup import GroupSpec, OrthMap

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10000


@dataclass
class Transversal:
    representatives: list
    complete: bool = True
    keys: list = field(default_factory=list, repr=False)
    lookup: object = field(default=None, repr=False, compare=False)

    @property
    def index(self) -> int:
        return len(self.representatives)

    def __len__(self) -> int:
        return len(self.representatives)

    def __iter__(self):
        return iter(self.representatives)


# ---------------------------------------------------------------------------
# coset keys


class SublatticeCosetKey:
    """Key for right cosets of ``Õ(L)``-type subgroups inside ``O(L')``.

    ``L`` sits in ``L'`` through ``embed`` (columns: the basis of ``L`` in
    ``L'`` coordinates). For ``x ∈ O(L')`` the coset ``G1 x`` is determined by
    the sublattice ``x^{-1} L`` together with the classes of
    ``x^{-1} λ`` modulo it, for ``λ`` running over generators of ``D(L)``.
    ``disc`` selects which of these data enter the key: ``"trivial"`` (stable
    subgroup) or ``"any"`` (full ``O(L)``). ``det_one`` adds the determinant.
    """

    def __init__(self, Lp: Lattice, L: Lattice, embed, disc: str = "trivial", det_one: bool = False):
        if disc not in ("trivial", "any"):
            raise ValueError("coset keys support the stable or full discriminant condition")
        self.Lp = Lp
        self.L = L
        self.embed = [list(r) for r in embed]
        self.disc = disc
        self.det_one = det_one
        cols = la.columns(self.embed)
        D = discriminant_group(L)
        lifts = [la.mat_vec(self.embed, u) for u in D.generator_lifts] if disc == "trivial" else []
        den = 1
        for v in lifts:
            den = la.lcm(den, la.vector_denominator(v))
        self.den = den
        self.cols = [[den * a for a in c] for c in cols]
        self.lifts = [[int(den * a) for a in v] for v in lifts]

    def __call__(self, x: OrthMap) -> Hashable:
        xi = x.inverse
        M = [[int(a) for a in r] for r in xi.matrix]
        H = la.hnf_rows([la.mat_vec(M, c) for c in self.cols])
        res = tuple(la.reduce_mod(la.mat_vec(M, v), H) for v in self.lifts)
        key = (tuple(map(tuple, H)), res)
        if self.det_one:
            key = key + (x.det,)
        return key


def coset_key_for(spec: GroupSpec, Lp: Lattice, embed) -> Callable | None:
    """A coset key for ``spec`` (living on ``L``) inside ``O(L')``, or ``None``
    when only pairwise membership tests apply."""
    if not isinstance(spec.disc_condition, str):
        return None
    return SublatticeCosetKey(Lp, spec.ambient, embed, spec.disc_condition, spec.require_det_one)


def member_via_embedding(spec: GroupSpec, Lp: Lattice, embed) -> Callable[[OrthMap], bool]:
    """Membership in ``spec`` for elements of ``O(L' ⊗ Q)`` given in ``L'``
    coordinates."""
    from .ogroup import is_member

    E = [list(r) for r in embed]
    Ei = la.inverse(E)
    L = spec.ambient

    def member(g: OrthMap) -> bool:
        M = la.normalize_matrix(la.mat_mul(la.mat_mul(Ei, [list(r) for r in g.matrix]), E))
        return is_member(spec, OrthMap(M, L))

    return member


# ---------------------------------------------------------------------------
# transversals


class CosetIndex:
    """Lookup of right cosets ``G1 x`` among those seen so far, by exact key
    when one is available and by pairwise membership tests otherwise."""

    def __init__(self, key: Callable | None = None, member: Callable[[OrthMap], bool] | None = None):
        if key is None and member is None:
            raise ValueError("need a membership predicate or a coset key")
        self.key = key
        self.member = member
        self.reps: list = []
        self.keys: list = []
        self._table: dict = {}

    def find(self, x: OrthMap) -> int | None:
        if self.key is not None:
            return self._table.get(self.key(x))
        for i, r in enumerate(self.reps):
            if self.member(x @ r.inverse):
                return i
        return None

    def find_or_add(self, x: OrthMap) -> tuple[int, bool]:
        if self.key is not None:
            k = self.key(x)
            i = self._table.get(k)
            if i is not None:
                return i, False
            self._table[k] = len(self.reps)
            self.keys.append(k)
        else:
            i = self.find(x)
            if i is not None:
                return i, False
        self.reps.append(x)
        return len(self.reps) - 1, True


def coset_transversal(gens: Sequence[OrthMap], member_G1: Callable[[OrthMap], bool] | None = None,
                      budget: int = DEFAULT_BUDGET, key: Callable | None = None,
                      start: OrthMap | None = None) -> Transversal:
    """Representatives of ``G1 \\ G2`` with ``G2 = <gens>``, in BFS order.

    Exceeding ``budget`` returns the cosets found so far with
    ``complete=False``.
    """
    if not gens and start is None:
        raise ValueError("need generators or a start element")
    idx = CosetIndex(key, member_G1)
    idx.find_or_add(start if start is not None else OrthMap.identity(gens[0].home))
    i = 0
    while i < len(idx.reps):
        y = idx.reps[i]
        i += 1
        for s in gens:
            x = y @ s
            if idx.find(x) is not None:
                continue
            if len(idx.reps) >= budget:
                log.info("coset budget %d exhausted", budget)
                return Transversal(idx.reps, False, idx.keys, idx)
            idx.find_or_add(x)
            if len(idx.reps) % 100 == 0:
                log.info("%d cosets", len(idx.reps))
    T = Transversal(idx.reps, True, idx.keys, idx)
    if not verify_closed(T, gens):
        raise AssertionError("coset search closed but the transversal is not")
    return T


def stabilizes(g: OrthMap, E: Sublattice) -> bool:
    imgs = [g(list(c)) for c in E.basis]
    if not all(la.is_integral_vector(v) for v in imgs):
        return False
    return tuple(map(tuple, la.hnf_rows(la.saturation([[int(a) for a in v] for v in imgs])))) == E.canonical


def stab_coset_transversal(E: Sublattice, stab_gens: Sequence[OrthMap],
                           member_G1: Callable[[OrthMap], bool] | None = None,
                           budget: int = DEFAULT_BUDGET, key: Callable | None = None) -> Transversal:
    """``Stab_{G1}(E) \\ Stab_{G2}(E)`` for generators of ``Stab_{G2}(E)``."""
    for g in stab_gens:
        if not stabilizes(g, E):
            raise ValueError("generator does not stabilize the sublattice")
    return coset_transversal(stab_gens, member_G1, budget, key)


def verify_closed(T: Transversal, gens: Sequence[OrthMap]) -> bool:
    """Every ``r s`` lies in a listed coset."""
    return all(T.lookup.find(r @ s) is not None for r in T.representatives for s in gens)


# ---------------------------------------------------------------------------
# double cosets


@dataclass
class DoubleCosets:
    """Partition of a right-coset transversal of ``G1 \\ G2`` into double
    cosets ``G1 y S``.

    ``labels[i]`` is the class of coset ``i``; ``roots[c]`` the first coset of
    class ``c``; ``paths[i] = y_root s_1 ... s_k`` lies in ``G1 y_i`` with all
    ``s_j ∈ S``, so ``y_i paths[i]^{-1} ∈ G1`` and it maps ``y_root E`` to
    ``y_i E`` for any ``E`` fixed by ``S``.
    """

    labels: list[int]
    roots: list[int]
    paths: list

    @property
    def count(self) -> int:
        return len(self.roots)


def double_cosets(T: Transversal, right_gens: Sequence[OrthMap]) -> DoubleCosets:
    n = len(T.representatives)
    labels: list[int | None] = [None] * n
    paths: list = [None] * n
    roots: list[int] = []
    for i0 in range(n):
        if labels[i0] is not None:
            continue
        c = len(roots)
        roots.append(i0)
        labels[i0] = c
        paths[i0] = T.representatives[i0]
        queue = [i0]
        while queue:
            j = queue.pop(0)
            for s in right_gens:
                q = paths[j] @ s
                m = T.lookup.find(q)
                if m is None:
                    raise ValueError("transversal is not closed under the right generators")
                if labels[m] is None:
                    labels[m] = c
                    paths[m] = q
                    queue.append(m)
    return DoubleCosets(labels, roots, paths)


# ---------------------------------------------------------------------------
# principal congruence subgroups


def _sl2_lift(a, b, c, d, N) -> list[list[int]]:
    if N == 1:
        return [[1, 0], [0, 1]]
    # lift the bottom row to a coprime pair
    c0 = c % N
    d0 = d % N
    cc = c0 if c0 else N
    dd = d0
    while la.xgcd(cc, dd)[0] != 1:
        dd += N
    g, s, t = la.xgcd(cc, dd)
    # s cc + t dd = 1  ->  top row (t, -s) has det t dd + s cc = 1
    a0, b0 = t, -s
    for k in range(N):
        aa, bb = a0 + k * cc, b0 + k * dd
        if (aa - a) % N == 0 and (bb - b) % N == 0:
            return [[aa, bb], [cc, dd]]
    raise AssertionError("no lift found")


def gamma_n_transversal(N: int) -> Transversal:
    """One lift in ``SL(2, Z)`` for each element of ``SL(2, Z/N)``."""
    if N < 1:
        raise ValueError("N must be positive")
    reps = []
    for a, b, c, d in product(range(N), repeat=4):
        if N == 1 or (a * d - b * c) % N == 1 % N:
            reps.append(_sl2_lift(a, b, c, d, N))
            if N == 1:
                break
    return Transversal(reps, True, [])
