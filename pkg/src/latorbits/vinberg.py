"""Vinberg's algorithm for Lorentzian lattices of small rank.

The form has signature ``(1, n)``; roots are primitive vectors ``v`` with
``v^2 < 0`` whose reflection is integral. The chamber containing the
control vector ``x0`` is ``{x : (x, v) >= 0}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from . import linalg as la
from .isometry import Budget, BudgetExceeded, fincke_pohst
from .lattice import Lattice, LatticeError, discriminant_group
from .ogroup import OrthMap, reflection


@dataclass
class VinbergResult:
    roots: list[list[int]]
    terminated: bool
    stabilizer_count: int
    norms: tuple[int, ...]
    symmetries: list[OrthMap] = field(default_factory=list)

    def reflections(self, L: Lattice) -> list[OrthMap]:
        return [reflection(L, v) for v in self.roots]

    def generators(self, L: Lattice) -> list[OrthMap]:
        """Reflections in the walls plus the symmetries of the chamber."""
        return self.reflections(L) + list(self.symmetries)


def candidate_root_norms(L: Lattice) -> list[int]:
    """Negative even ``k`` with ``|k|`` dividing twice the exponent of ``D(L)``,
    largest first."""
    D = discriminant_group(L)
    ex = 1
    for d in D.invariant_factors:
        ex = la.lcm(ex, d)
    return sorted((-k for k in range(2, 2 * ex + 1, 2) if (2 * ex) % k == 0), reverse=True)


def is_root(L: Lattice, v: Sequence[int]) -> bool:
    vv = L.norm(v)
    if vv >= 0:
        return False
    g = 0
    for a in v:
        g = gcd(g, a)
    if g != 1:
        return False
    return all((2 * h) % vv == 0 for h in L.hat(v))


def _positive_form(L: Lattice, x0):
    """``-G + 2 (G x0)(G x0)^T / x0^2``: positive definite for timelike x0."""
    hx = L.hat(x0)
    xx = Fraction(L.norm(x0))
    n = L.rank
    return [[-L.gram[i][j] + 2 * hx[i] * hx[j] / xx for j in range(n)] for i in range(n)]


def _roots_up_to(L, x0, norms, level, F, work=None):
    """Roots with ``(x0,v)^2/|v^2| <= level`` (both signs for level-0 roots,
    otherwise the sign with ``(x0, v) > 0``)."""
    xx = Fraction(L.norm(x0))
    kmax = max(-k for k in norms)
    bound = kmax * (1 + 2 * Fraction(level) / xx)
    out = []
    for v in fincke_pohst(F, bound, work):
        if not any(v):
            continue
        vv = L.norm(v)
        if vv not in norms:
            continue
        m = L.ip(v, x0)
        if m < 0:
            continue
        if Fraction(m * m, -vv) > level:
            continue
        if is_root(L, v):
            out.append(v)
    return out


def _stabilizer_roots(L, x0, cands, functional):
    zero = [v for v in cands if L.ip(v, x0) == 0]
    pos = [v for v in zero if la.dot(functional, L.hat(v)) > 0]
    pos.sort(key=lambda v: (la.dot(functional, L.hat(v)), v))
    chosen: list[list[int]] = []
    for v in pos:
        if all(L.ip(v, u) >= 0 for u in chosen):
            chosen.append(v)
    return chosen


def _default_functional(L, x0, cands):
    """A vector pairing nonzero with every root orthogonal to ``x0``."""
    zero = [v for v in cands if L.ip(v, x0) == 0]
    n = L.rank
    k = 1
    while True:
        t = [k ** (n - 1 - i) * (-1) ** i for i in range(n)]
        if all(la.dot(t, L.hat(v)) != 0 for v in zero):
            return t
        k += 1


def _lead_positive(v):
    for a in v:
        if a:
            return a > 0
    return False


def _is_simple_system(L, simple, roots) -> bool:
    """Every root is an integral combination of ``simple`` with coefficients
    of one sign."""
    if not simple:
        return not roots
    B = la.from_columns(simple)
    Bt = la.transpose(B)
    P = la.inverse(la.mat_mul(Bt, B))
    for v in roots:
        c = la.mat_vec(P, la.mat_vec(Bt, v))
        if la.mat_vec(B, c) != list(v) or not la.is_integral_vector(c):
            return False
        if any(x > 0 for x in c) and any(x < 0 for x in c):
            return False
    return True


def _basis_first_simple_roots(L, x0, cands):
    """Simple roots for the stabilizer of ``x0`` built from the shortest
    supported roots first (later basis positions first), flipping signs so
    that pairings stay nonnegative. Returns ``None`` if this greedy choice is
    not a simple system."""
    zero = [v for v in cands if L.ip(v, x0) == 0]
    reps = [v for v in zero if _lead_positive(v)]

    def key(v):
        supp = [i for i, a in enumerate(v) if a]
        return (len(supp), [-i for i in reversed(supp)], [-a for a in v])

    reps.sort(key=key)
    target = la.rank(zero) if zero else 0
    chosen: list[list[int]] = []
    for v in reps:
        if len(chosen) == target:
            break
        if chosen and la.rank(chosen + [v]) == len(chosen):
            continue
        for s in (1, -1):
            w = [s * a for a in v]
            if all(L.ip(w, u) >= 0 for u in chosen):
                chosen.append(w)
                break
    if len(chosen) != target or not _is_simple_system(L, chosen, zero):
        return None
    return chosen


def finite_volume(L: Lattice, roots: Sequence[Sequence[int]]) -> bool:
    """Every extremal ray of the chamber cone lies in the closed light cone,
    and the roots span (so the cone is pointed)."""
    n = L.rank
    if not roots or la.rank(roots) < n:
        return False
    hats = [L.hat(v) for v in roots]
    for S in combinations(range(len(roots)), n - 1):
        A = [hats[i] for i in S]
        if la.rank(A) < n - 1:
            continue
        r = la.kernel_rational(A)[0]
        for sgn in (1, -1):
            rr = [sgn * x for x in r]
            if all(la.dot(h, rr) >= 0 for h in hats):
                if la.bilinear(L.gram, rr, rr) < 0:
                    return False
    return True


def vinberg_roots(L: Lattice, x0: Sequence[int], norms: Sequence[int] | None = None,
                  budget: int = 64, functional: Sequence | None = None,
                  max_rounds: int = 10, work: int | None = 200_000) -> VinbergResult:
    """Fundamental roots of the reflection group generated by roots of the
    given norms (default: norm -2 when that subgroup has finite covolume,
    otherwise every crystallographic norm).

    ``work`` caps the number of lattice points visited by the enumeration;
    running out, like hitting ``budget`` roots or ``max_rounds`` levels,
    returns an unterminated result.
    """
    p, m = L.signature
    if p != 1 or L.rank > 5:
        raise LatticeError("Vinberg's algorithm is implemented for signature (1, n), n <= 4")
    if L.norm(x0) <= 0:
        raise LatticeError("control vector must have positive norm")
    if norms is None:
        first = vinberg_roots(L, x0, [-2], budget, functional, min(max_rounds, 7), work)
        if first.terminated:
            return first
        return vinberg_roots(L, x0, candidate_root_norms(L), budget, functional, max_rounds, work)
    norms = tuple(sorted(set(norms), reverse=True))
    F = _positive_form(L, x0)
    meter = Budget(work)
    try:
        return _vinberg_rounds(L, x0, norms, budget, functional, max_rounds, F, meter)
    except BudgetExceeded:
        return VinbergResult([], False, 0, norms)


def _vinberg_rounds(L, x0, norms, budget, functional, max_rounds, F, meter) -> VinbergResult:
    level0 = _roots_up_to(L, x0, norms, 0, F, meter)
    roots = None
    if functional is None:
        roots = _basis_first_simple_roots(L, x0, level0)
    if roots is None:
        t = functional if functional is not None else _default_functional(L, x0, level0)
        roots = _stabilizer_roots(L, x0, level0, t)
    nstab = len(roots)
    done = finite_volume(L, roots)
    seen_level = Fraction(0)
    level = Fraction(1, 2)
    rounds = 0
    while not done and len(roots) < budget and rounds < max_rounds:
        rounds += 1
        batch = [v for v in _roots_up_to(L, x0, norms, level, F, meter) if L.ip(v, x0) > 0]
        batch = [v for v in batch if Fraction(L.ip(v, x0) ** 2, -L.norm(v)) > seen_level]
        batch.sort(key=lambda v: (Fraction(L.ip(v, x0) ** 2, -L.norm(v)), -L.norm(v), v))
        for v in batch:
            if all(L.ip(v, u) >= 0 for u in roots):
                roots.append(v)
                if finite_volume(L, roots):
                    done = True
                    break
        seen_level = level
        level *= 2
    res = VinbergResult(roots, done, nstab, norms)
    res.work = meter.used
    if done:
        res.symmetries = chamber_symmetries(L, roots)
    return res


def chamber_symmetries(L: Lattice, roots: Sequence[Sequence[int]]) -> list[OrthMap]:
    """Non-identity integral isometries permuting the wall roots (the symmetry
    group of the chamber), found by backtracking over root permutations."""
    k = len(roots)
    n = L.rank
    Gr = [[L.ip(u, v) for v in roots] for u in roots]
    basis_idx: list[int] = []
    for i in range(k):
        if la.rank([roots[j] for j in basis_idx + [i]]) > len(basis_idx):
            basis_idx.append(i)
        if len(basis_idx) == n:
            break
    B = la.from_columns([roots[i] for i in basis_idx])
    Binv = la.inverse(B)
    out = []
    perm: list[int] = []

    def rec(i):
        if i == k:
            if perm == list(range(k)):
                return
            img = la.from_columns([roots[perm[j]] for j in basis_idx])
            M = la.normalize_matrix(la.mat_mul(img, Binv))
            if not la.is_integral(M):
                return
            g = OrthMap(M, L)
            if all(g(roots[j]) == list(roots[perm[j]]) for j in range(k)) and g.preserves_form():
                out.append(g)
            return
        for j in range(k):
            if j in perm or Gr[j][j] != Gr[i][i]:
                continue
            if all(Gr[perm[a]][j] == Gr[a][i] for a in range(i)):
                perm.append(j)
                rec(i + 1)
                perm.pop()

    rec(0)
    return out


def oplus_generators(L: Lattice, x0: Sequence[int] | None = None) -> list[OrthMap]:
    """Generators of ``O⁺(L)`` for Lorentzian ``L``: wall reflections of a
    Vinberg chamber together with its symmetries."""
    if x0 is None:
        x0 = default_control_vector(L)
    res = vinberg_roots(L, x0)
    if not res.terminated:
        raise LatticeError("Vinberg's algorithm did not terminate within budget")
    return res.generators(L)


def default_control_vector(L: Lattice) -> list[int]:
    """``e1 + e2`` when the lattice starts with a hyperbolic plane, otherwise
    the first short positive vector found."""
    G = L.gram
    if L.rank >= 2 and G[0][0] == 0 and G[1][1] == 0 and G[0][1] == 1:
        return [1, 1] + [0] * (L.rank - 2)
    from itertools import product

    for r in range(1, 6):
        for v in product(range(-r, r + 1), repeat=L.rank):
            if L.norm(v) > 0:
                return list(v)
    raise LatticeError("no positive vector found")
