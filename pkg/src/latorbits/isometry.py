"""Definite lattices: short vectors, isometries, norm search and small genera."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Iterator, Sequence

from . import linalg as la
from .discform import FiniteQuadraticForm, disc_form_of, iso_fqf
from .lattice import Lattice, LatticeError, lattice


class Budget:
    """Cooperative cancellation token for long enumerations."""

    def __init__(self, limit: int | None = None):
        self.limit = limit
        self.used = 0

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(self.used)


class BudgetExceeded(RuntimeError):
    pass


def definite_sign(G) -> int:
    """+1 for positive definite, -1 for negative definite."""
    p, n, z = la.inertia(G)
    if z or (p and n):
        raise LatticeError("lattice is not definite")
    return 1 if p else -1


def _ceil_sqrt_bound(t: Fraction) -> int:
    """An integer ``s`` with ``s >= sqrt(t)``."""
    if t <= 0:
        return 0
    return isqrt(t.numerator // t.denominator) + 1


def fincke_pohst(G, bound, budget: Budget | None = None) -> Iterator[list[int]]:
    """All integer ``x`` with ``x^T G x <= bound`` for positive definite ``G``
    (including 0 and both signs)."""
    n = len(G)
    mu, q = la.ldl_positive(G)
    bound = Fraction(bound)
    x = [0] * n

    def rec(i, remaining):
        if i < 0:
            yield list(x)
            return
        c = -sum((mu[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        s = _ceil_sqrt_bound(remaining / q[i])
        lo = (c - s).__floor__()
        hi = (c + s).__ceil__()
        for v in range(lo, hi + 1):
            t = q[i] * (v - c) ** 2
            if t <= remaining:
                if budget:
                    budget.tick()
                x[i] = v
                yield from rec(i - 1, remaining - t)
        x[i] = 0

    if n == 0:
        yield []
        return
    yield from rec(n - 1, bound)


def _leading_positive(v: Sequence[int]) -> bool:
    for a in v:
        if a:
            return a > 0
    return False


def short_vectors(K: Lattice | Sequence[Sequence[int]], bound: int) -> list[tuple[list[int], int]]:
    """Nonzero vectors with ``|v^2| <= bound``, one per ``±`` pair (first
    nonzero coordinate positive), sorted lexicographically."""
    G = K.gram if isinstance(K, Lattice) else K
    s = definite_sign(G)
    Gp = [[s * a for a in row] for row in G]
    out = []
    for v in fincke_pohst(Gp, bound):
        if _leading_positive(v):
            out.append((v, la.normalize(la.bilinear(G, v, v))))
    out.sort()
    return out


def vectors_of_norm(G, norm: int) -> list[list[int]]:
    """Every vector (both signs) of the given exact norm in a definite Gram."""
    s = definite_sign(G)
    Gp = [[s * a for a in row] for row in G]
    return [v for v in fincke_pohst(Gp, s * norm) if any(v) and la.bilinear(G, v, v) == norm]


# ---------------------------------------------------------------------------
# isometries


def iso_definite(K1, K2, budget: Budget | None = None) -> Iterator[list[list[int]]]:
    """Isometries ``ψ: K1 -> K2`` as integer matrices whose columns are the
    images of the ``K1`` basis in ``K2`` coordinates, so that
    ``ψ^T G(K2) ψ = G(K1)``."""
    G1 = K1.gram if isinstance(K1, Lattice) else K1
    G2 = K2.gram if isinstance(K2, Lattice) else K2
    n = len(G1)
    if n != len(G2):
        raise LatticeError("rank mismatch")
    if n == 0:
        yield []
        return
    if definite_sign(G1) != definite_sign(G2) or la.det(G1) != la.det(G2):
        return
    norms = sorted({G1[i][i] for i in range(n)})
    pools = {m: vectors_of_norm(G2, m) for m in norms}
    if any(len(pools[m]) != len(vectors_of_norm(G1, m)) for m in norms):
        return
    # fewest candidates first keeps the search tree narrow
    order = sorted(range(n), key=lambda i: (len(pools[G1[i][i]]), i))
    hat = {}
    for m, vs in pools.items():
        for v in vs:
            hat[tuple(v)] = [la.dot(v, col) for col in zip(*G2)]
    images: dict[int, list[int]] = {}

    def rec(k):
        if k == n:
            M = la.from_columns([images[i] for i in range(n)])
            if abs(la.det(M)) == 1:
                yield M
            return
        i = order[k]
        for y in pools[G1[i][i]]:
            if budget:
                budget.tick()
            hy = hat[tuple(y)]
            if all(la.dot(hy, images[order[j]]) == G1[i][order[j]] for j in range(k)):
                images[i] = y
                yield from rec(k + 1)
                del images[i]

    yield from rec(0)


def is_isometric_definite(K1, K2) -> bool:
    return next(iso_definite(K1, K2), None) is not None


def automorphisms_definite(K) -> list[list[list[int]]]:
    return list(iso_definite(K, K))


# ---------------------------------------------------------------------------
# reduction


def lll_gram(G, delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """LLL on a positive definite Gram matrix; returns ``T`` (columns = new
    basis) with ``T^T G T`` reduced."""
    n = len(G)
    T = la.identity(n)
    B = [list(map(Fraction, r)) for r in G]

    def gram_of(T):
        return la.mat_mul(la.mat_mul(la.transpose(T), B), T)

    def gso(M):
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = M[i][j] - sum((mu[j][k] * mu[i][k] * bstar[k] for k in range(j)), Fraction(0))
                mu[i][j] = s / bstar[j]
            bstar[i] = M[i][i] - sum((mu[i][k] ** 2 * bstar[k] for k in range(i)), Fraction(0))
        return mu, bstar

    k = 1
    while k < n:
        M = gram_of(T)
        mu, bstar = gso(M)
        for j in range(k - 1, -1, -1):
            r = round(mu[k][j])
            if r:
                for row in T:
                    row[k] -= r * row[j]
                M = gram_of(T)
                mu, bstar = gso(M)
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            for row in T:
                row[k], row[k - 1] = row[k - 1], row[k]
            k = max(k - 1, 1)
    return T


def reduce_definite(L: Lattice) -> tuple[Lattice, list[list[int]]]:
    """LLL-reduced basis of a definite lattice, signs chosen so that pairings
    with the first vector are nonpositive.

    Returns ``(L', T)`` with ``G(L') = T^T G(L) T``.
    """
    if L.rank == 0:
        return L, []
    s = definite_sign(L.gram)
    T = lll_gram([[s * a for a in row] for row in L.gram])
    G = la.mat_mul(la.mat_mul(la.transpose(T), L.gram), T)
    for i in range(1, L.rank):
        if G[0][i] > 0:
            for row in T:
                row[i] = -row[i]
            G = la.mat_mul(la.mat_mul(la.transpose(T), L.gram), T)
    return lattice(G), T


# ---------------------------------------------------------------------------
# norm representation


def represents_norm(K: Lattice, target: int, bound: int | None = None) -> tuple[list[int] | None, bool]:
    """Search for ``v`` with ``v^2 = target``.

    Returns ``(v, exact)``. For definite ``K`` the answer is exact. For
    indefinite ``K`` boxes of growing radius up to ``bound`` (default
    ``10*|target|``) are scanned and a miss is inconclusive.
    """
    if target == 0:
        raise ValueError("target must be nonzero")
    p, n = K.signature
    if p == 0 or n == 0:
        s = 1 if p else -1
        if s * target < 0:
            return None, True
        vs = vectors_of_norm(K.gram, target)
        vs.sort(key=lambda v: (sum(abs(a) for a in v), [-a for a in v]))
        return (vs[0] if vs else None), True
    limit = bound if bound is not None else 10 * abs(target)
    r = K.rank
    for radius in range(1, limit + 1):
        for v in _shell(r, radius):
            if K.norm(v) == target:
                return v, False
    return None, False


def _shell(n: int, radius: int) -> Iterator[list[int]]:
    """Integer vectors with sup-norm exactly ``radius``, small entries first."""
    rng = sorted(range(-radius, radius + 1), key=lambda a: (abs(a), -a))
    for v in product(rng, repeat=n):
        if max(abs(a) for a in v) == radius:
            yield list(v)


# ---------------------------------------------------------------------------
# genus enumeration at small rank


def _hermite_bound(rank: int, det: int) -> int:
    # g11 <= (4/3)^((r-1)/2) * det^(1/r); compared via exact powers
    r = rank
    g = 0
    while True:
        nxt = g + 1
        # nxt^(2r) <= (4/3)^(r(r-1)) * det^2
        if 3 ** (r * (r - 1)) * nxt ** (2 * r) <= 4 ** (r * (r - 1)) * det * det:
            g = nxt
        else:
            return g


def enumerate_genus_definite(rank: int, sig: tuple[int, int], q: FiniteQuadraticForm,
                             budget: Budget | None = None) -> list[Lattice]:
    """Representatives of the even definite lattices of the given rank and
    signature whose discriminant form is isomorphic to ``q``.

    Brute force over reduced Gram matrices; supported for rank at most 3.
    """
    if rank > 3:
        raise NotImplementedError("genus enumeration is implemented for rank <= 3 only")
    tp, tm = sig
    if tp + tm != rank or (tp and tm):
        raise LatticeError("signature must be definite and match the rank")
    sign = 1 if tm == 0 else -1
    det = q.order
    if rank == 0:
        return [lattice([])] if det == 1 else []
    found: list[Lattice] = []
    for G in _reduced_even_grams(rank, det):
        if budget:
            budget.tick()
        K = lattice([[sign * a for a in row] for row in G])
        if next(iso_fqf(disc_form_of(K), q), None) is None:
            continue
        if any(is_isometric_definite(K, M) for M in found):
            continue
        found.append(K)
    return found


def _reduced_even_grams(rank: int, det: int) -> Iterator[list[list[int]]]:
    h = _hermite_bound(rank, det)
    if rank == 1:
        if det % 2 == 0:
            yield [[det]]
        return
    # product of the diagonal of a reduced form is bounded by c_r * det
    c_num, c_den = (4, 3) if rank == 2 else (2, 1)
    for a in range(2, h + 1, 2):
        if rank == 2:
            for b in range(a, c_num * det // (c_den * a) + 1, 2):
                for x in range(-a, a + 1):
                    G = [[a, x], [x, b]]
                    if abs(x) <= b and la.det(G) == det:
                        yield G
        else:
            for b in range(a, c_num * det // (c_den * a) + 1, 2):
                for c in range(b, c_num * det // (c_den * a * b) + 1, 2):
                    for x, y in product(range(-a, a + 1), repeat=2):
                        for z in range(-b, b + 1):
                            G = [[a, x, y], [x, b, z], [y, z, c]]
                            if la.det(G) == det and la.inertia(G)[0] == 3:
                                yield G
