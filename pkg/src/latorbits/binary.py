"""Indefinite even lattices of rank two.

An even binary Gram ``[[2a, b], [b, 2c]]`` is the form ``ax^2 + bxy + cy^2``
with discriminant ``Δ = b^2 - 4ac > 0``. Anisotropic lattices (``Δ`` not a
square) are handled by Gauss reduction and cycles of reduced forms; isotropic
ones by a normal form attached to each of the two isotropic lines.

Isometries follow the convention of :func:`isometry.iso_definite`: a matrix
``ψ`` whose columns are images of the source basis, with
``ψ^T G2 ψ = G1``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from . import linalg as la
from .lattice import LatticeError

Mat = list[list[int]]


def _abc(G) -> tuple[int, int, int]:
    if len(G) != 2 or G[0][1] != G[1][0] or G[0][0] % 2 or G[1][1] % 2:
        raise LatticeError("expected an even symmetric 2x2 Gram matrix")
    return G[0][0] // 2, G[0][1], G[1][1] // 2


def discriminant(G) -> int:
    a, b, c = _abc(G)
    return b * b - 4 * a * c


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _transform(G, M) -> Mat:
    return la.mat_mul(la.mat_mul(la.transpose(M), G), M)


def _lt_sqrt(t: int, D: int) -> bool:
    """``t < sqrt(D)`` for non-square ``D > 0``."""
    return t < 0 or t * t < D


def _gt_sqrt(t: int, D: int) -> bool:
    return t > 0 and t * t > D


def is_reduced(G) -> bool:
    a, b, c = _abc(G)
    D = b * b - 4 * a * c
    return b > 0 and _lt_sqrt(b, D) and _lt_sqrt(2 * abs(a) - b, D) and _gt_sqrt(2 * abs(a) + b, D)


def _rho(G) -> tuple[Mat, Mat]:
    a, b, c = _abc(G)
    D = b * b - 4 * a * c
    m = 2 * abs(c)
    if c * c > D:
        lo = -abs(c) + 1
        bp = (-b - lo) % m + lo
    else:
        s0 = isqrt(D)
        bp = s0 - (s0 + b) % m
    s = (bp + b) // (2 * c)
    M = [[0, -1], [1, s]]
    Gp = _transform(G, M)
    assert Gp[0][1] == bp
    return Gp, M


def reduce_form(G, limit: int = 100000) -> tuple[Mat, Mat]:
    """A reduced form properly equivalent to ``G`` and the transform ``T``
    with ``T^T G T`` reduced."""
    D = discriminant(G)
    if D <= 0 or _is_square(D):
        raise LatticeError("reduction needs a positive non-square discriminant")
    T = la.identity(2)
    G = [list(r) for r in G]
    for _ in range(limit):
        if is_reduced(G):
            return G, T
        G, M = _rho(G)
        T = la.mat_mul(T, M)
    raise LatticeError("reduction did not terminate")


def cycle(Gr) -> list[tuple[Mat, Mat]]:
    """The cycle of reduced forms through ``Gr`` with cumulative transforms
    (the last entry returns to ``Gr``)."""
    out = [([list(r) for r in Gr], la.identity(2))]
    G, C = out[0]
    while True:
        G, M = _rho(G)
        C = la.mat_mul(C, M)
        out.append((G, C))
        if G == out[0][0]:
            return out


def _proper_equivalence(G1, G2) -> Mat | None:
    """``M`` with ``det M = 1`` and ``M^T G1 M = G2``, if any."""
    R1, T1 = reduce_form(G1)
    R2, T2 = reduce_form(G2)
    for Gk, Ck in cycle(R1)[:-1]:
        if Gk == R2:
            # Gk = Ck^T T1^T G1 T1 Ck = T2^T G2 T2
            return la.mat_mul(la.mat_mul(T1, Ck), la.inverse(T2))
    return None


_FLIP = [[1, 0], [0, -1]]


def _anisotropic_iso(G1, G2) -> Mat | None:
    M = _proper_equivalence(G2, G1)
    if M is None:
        M2 = _proper_equivalence(G2, _transform(G1, _FLIP))
        if M2 is None:
            return None
        # M2^T G2 M2 = F G1 F
        M = la.mat_mul(M2, _FLIP)
    return [[int(x) for x in row] for row in M]


def _anisotropic_auts(G) -> list[Mat]:
    R, T = reduce_form(G)
    period = cycle(R)[-1][1]
    Ti = la.inverse(T)
    gens = [[[-1, 0], [0, -1]], la.mat_mul(la.mat_mul(T, period), Ti)]
    M = _proper_equivalence(G, _transform(G, _FLIP))
    if M is not None:
        gens.append(la.mat_mul(M, _FLIP))
    return [[[int(x) for x in row] for row in g] for g in gens]


# isotropic case -------------------------------------------------------------


def _isotropic_lines(G) -> list[list[int]]:
    a, b, c = _abc(G)
    r = isqrt(b * b - 4 * a * c)
    out = []
    if a == 0:
        out.append([1, 0])
        # remaining root of y(bx + cy) = 0
        out.append(_prim([c, -b]) if b else None)
    else:
        for s in (r, -r):
            # a t^2 + b t + c = 0 with t = x / y
            t = Fraction(-b + s, 2 * a)
            out.append(_prim([t.numerator, t.denominator]))
    lines = []
    for v in out:
        if v is not None and v not in lines and [-x for x in v] not in lines:
            lines.append(v)
    return lines


def _prim(v):
    g = gcd(v[0], v[1])
    return [v[0] // g, v[1] // g]


def _complete(e) -> list[int]:
    """``f`` with ``det(e | f) = 1``."""
    g, s, t = la.xgcd(e[0], e[1])
    # s e0 + t e1 = 1
    return [-t, s]


def _canonical_bases(G) -> list[tuple[Mat, Mat]]:
    """For each isotropic line and sign, the basis ``(e, f)`` with Gram
    ``[[0, m], [m, r]]``, ``m > 0`` and ``0 <= r < 2m``."""
    out = []
    for e0 in _isotropic_lines(G):
        for sgn in (1, -1):
            e = [sgn * x for x in e0]
            f = _complete(e)
            B = la.from_columns([e, f])
            H = _transform(G, B)
            m = H[0][1]
            if m < 0:
                f = [-x for x in f]
                m = -m
            r = la.bilinear(G, f, f)
            k = -(r // (2 * m))
            f = [fi + k * ei for fi, ei in zip(f, e)]
            B = la.from_columns([e, f])
            out.append((_transform(G, B), B))
    return out


def _isotropic_iso(G1, G2) -> Mat | None:
    can2 = _canonical_bases(G2)
    for H1, B1 in _canonical_bases(G1):
        for H2, B2 in can2:
            if H1 == H2:
                return [[int(x) for x in r] for r in la.mat_mul(B2, la.inverse(B1))]
    return None


def _isotropic_auts(G) -> list[Mat]:
    can = _canonical_bases(G)
    H0, B0 = can[0]
    B0i = la.inverse(B0)
    out = []
    for H, B in can:
        if H == H0:
            out.append([[int(x) for x in r] for r in la.mat_mul(B, B0i)])
    return out


# public ----------------------------------------------------------------------


def binary_isometry(G1, G2) -> Mat | None:
    """An isometry from the lattice with Gram ``G1`` to the one with ``G2``."""
    D = discriminant(G1)
    if D <= 0:
        raise LatticeError("binary form is not indefinite")
    if D != discriminant(G2):
        return None
    psi = _isotropic_iso(G1, G2) if _is_square(D) else _anisotropic_iso(G1, G2)
    if psi is not None:
        assert _transform(G2, psi) == [list(r) for r in G1]
    return psi


def binary_automorphism_generators(G) -> list[Mat]:
    """Generators of the full isometry group of an indefinite binary lattice
    (all of its elements in the isotropic case, where it is finite)."""
    D = discriminant(G)
    if D <= 0:
        raise LatticeError("binary form is not indefinite")
    gens = _isotropic_auts(G) if _is_square(D) else _anisotropic_auts(G)
    for g in gens:
        assert _transform(G, g) == [list(r) for r in G]
    return gens
