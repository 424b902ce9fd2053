"""Even nondegenerate lattices, their duals, complements and overlattices."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd
from typing import Sequence

from . import linalg as la


class LatticeError(ValueError):
    pass


class ParseError(LatticeError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


def _freeze(M) -> tuple[tuple, ...]:
    return tuple(tuple(la.normalize(x) for x in row) for row in M)


@dataclass(frozen=True)
class Lattice:
    """An even, nondegenerate integral lattice given by its Gram matrix.

    Vectors are coordinate columns relative to the basis the Gram matrix
    was written in.
    """

    gram: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        G = _freeze(self.gram)
        object.__setattr__(self, "gram", G)
        n = len(G)
        if any(len(row) != n for row in G):
            raise LatticeError("Gram matrix must be square")
        if any(G[i][j] != G[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("Gram matrix must be symmetric")
        if any(isinstance(x, Fraction) for row in G for x in row):
            raise LatticeError("Gram matrix must be integral")
        if any(G[i][i] % 2 for i in range(n)):
            raise LatticeError("lattice is not even: odd diagonal entry")
        if n and la.det(G) == 0:
            raise LatticeError("Gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return la.det(self.gram)

    @cached_property
    def signature(self) -> tuple[int, int]:
        p, n, _ = la.inertia(self.gram)
        return p, n

    @cached_property
    def gram_inverse(self):
        return la.inverse(self.gram)

    def ip(self, u: Sequence, v: Sequence):
        return la.normalize(la.bilinear(self.gram, u, v))

    def norm(self, v: Sequence):
        return self.ip(v, v)

    def hat(self, x: Sequence) -> list:
        """Row vector ``x^T G``: the pairings of ``x`` with the basis."""
        return [la.normalize(la.dot(x, col)) for col in zip(*self.gram)]

    def is_definite(self) -> bool:
        p, n = self.signature
        return p == 0 or n == 0

    def __str__(self) -> str:
        return self.name or f"Lattice(rank={self.rank})"


def lattice(gram, name: str = "") -> Lattice:
    return Lattice(_freeze(gram), name)


# --------------------------------------------------------------------------
# construction


def gram_U(m: int = 1):
    return [[0, m], [m, 0]]


def gram_A(n: int):
    """Negative definite A_n."""
    G = la.zeros(n, n)
    for i in range(n):
        G[i][i] = -2
        if i + 1 < n:
            G[i][i + 1] = G[i + 1][i] = -1
    return G


def direct_sum(*lats: Lattice) -> Lattice:
    return lattice(la.block_diag(*(L.gram for L in lats)), " + ".join(str(L) for L in lats))


def rescale(L: Lattice, m: int) -> Lattice:
    return lattice([[m * x for x in row] for row in L.gram], f"({L})({m})")


_TOKEN = re.compile(r"\s*(?:(\d+)\s*\*\s*)?")


def build_lattice(expr: str) -> Lattice:
    """Parse a lattice expression such as ``2*U + A2``, ``U(2)``,
    ``<-6> + <-2>`` or ``gram [[0,1],[1,0]]``.

    Grammar::

        EXPR := TERM ('+' TERM)*
        TERM := [k '*'] BASE ['(' int ')']
        BASE := 'U' | 'A' int | 'D' int | 'E' int | '<' even-int '>' | 'gram' matrix

    A leading integer ``k`` without ``*`` is also accepted (``2U``).
    """
    parser = _Parser(expr)
    blocks = parser.parse()
    G = la.block_diag(*blocks)
    return lattice(G, expr.strip())


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise ParseError(msg, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, s: str) -> bool:
        self.skip()
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def integer(self) -> int:
        self.skip()
        m = re.compile(r"[+-]?\d+").match(self.text, self.pos)
        if not m:
            self.error("expected integer")
        self.pos = m.end()
        return int(m.group())

    def parse(self):
        blocks = []
        while True:
            blocks.extend(self.term())
            if not self.eat("+"):
                break
        if self.peek():
            self.error("unexpected input")
        if not blocks:
            self.error("empty expression")
        return blocks

    def term(self):
        mult = 1
        if self.peek().isdigit():
            mult = self.integer()
            self.eat("*")
        base = self.base()
        if self.eat("("):
            m = self.integer()
            if not self.eat(")"):
                self.error("expected ')'")
            base = [[m * x for x in row] for row in base]
        return [base] * mult

    def base(self):
        self.skip()
        if self.eat("gram"):
            return self.matrix()
        if self.eat("<"):
            d = self.integer()
            if not self.eat(">"):
                self.error("expected '>'")
            return [[d]]
        c = self.peek()
        if c == "U":
            self.pos += 1
            return gram_U()
        if c in "ADE":
            self.pos += 1
            n = self.integer()
            if n < 1:
                self.error("root lattice index must be positive")
            return {"A": gram_A, "D": gram_D, "E": gram_E}[c](n)
        self.error("expected lattice term")

    def matrix(self):
        if not self.eat("["):
            self.error("expected '['")
        rows = []
        while True:
            if not self.eat("["):
                self.error("expected '['")
            row = [self.integer()]
            while self.eat(","):
                row.append(self.integer())
            if not self.eat("]"):
                self.error("expected ']'")
            rows.append(row)
            if not self.eat(","):
                break
        if not self.eat("]"):
            self.error("expected ']'")
        return rows


def gram_D(n: int):
    if n < 3:
        raise LatticeError("D_n needs n >= 3")
    G = gram_A(n)
    # branch node: last vertex hangs off vertex n-3
    G[n - 1][n - 2] = G[n - 2][n - 1] = 0
    G[n - 1][n - 3] = G[n - 3][n - 1] = -1
    return G


def gram_E(n: int):
    if n not in (6, 7, 8):
        raise LatticeError("E_n needs n in 6..8")
    G = gram_A(n - 1)
    G = la.block_diag(G, [[-2]])
    G[n - 1][2] = G[2][n - 1] = -1
    return G


# --------------------------------------------------------------------------
# discriminant group and divisors


@dataclass(frozen=True)
class DiscGroup:
    """Invariant factors of ``L^v/L`` with lifts of the generators in ``L^v``."""

    invariant_factors: tuple[int, ...]
    generator_lifts: tuple[tuple, ...]
    # rows mapping the pairing vector G·u (u in L^v) to generator exponents
    coordinate_map: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def exponents(self, u: Sequence, lat: Lattice) -> tuple[int, ...]:
        """Generator exponents of the class of ``u ∈ L^v``."""
        y = lat.hat(u)
        if not la.is_integral_vector(y):
            raise LatticeError("vector is not in the dual lattice")
        return tuple(
            la.normalize(la.dot(row, y)) % d for row, d in zip(self.coordinate_map, self.invariant_factors)
        )

    def element(self, exps: Sequence[int]) -> list:
        v = [0] * (len(self.generator_lifts[0]) if self.generator_lifts else 0)
        for e, g in zip(exps, self.generator_lifts):
            v = [a + e * b for a, b in zip(v, g)]
        return [la.normalize(x) for x in v]

    def elements(self):
        return product(*(range(d) for d in self.invariant_factors))


def discriminant_group(L: Lattice) -> DiscGroup:
    P, D, _ = la.smith_normal_form(L.gram)
    n = L.rank
    lifts_all = la.columns(la.mat_mul(L.gram_inverse, la.inverse(P)))
    factors, lifts, rows = [], [], []
    for i in range(n):
        d = D[i][i]
        if d > 1:
            factors.append(d)
            lifts.append(tuple(_reduce_dual(lifts_all[i])))
            rows.append(tuple(P[i]))
    return DiscGroup(tuple(factors), tuple(lifts), tuple(rows))


def _reduce_dual(v):
    """Shift a rational vector by an integral one into ``[0,1)`` coordinates."""
    out = []
    for x in v:
        x = Fraction(x)
        out.append(la.normalize(x - (x.numerator // x.denominator)))
    return out


def divisor_and_star(L: Lattice, x: Sequence[int]) -> tuple[int, list]:
    if not any(x):
        raise LatticeError("divisor of the zero vector is undefined")
    g = 0
    for a in L.hat(x):
        g = gcd(g, int(a))
    return g, [la.normalize(Fraction(a, g)) for a in x]


def is_primitive(x: Sequence) -> bool:
    if not la.is_integral_vector(x) or not any(x):
        return False
    g = 0
    for a in x:
        g = gcd(g, int(a))
    return g == 1


def primitive_part(v: Sequence) -> tuple[Fraction, list[int]]:
    """Return ``(c, w)`` with ``c > 0`` minimal such that ``w = c v`` is integral."""
    den = la.vector_denominator(v)
    w = [int(Fraction(x) * den) for x in v]
    g = 0
    for a in w:
        g = gcd(g, a)
    if g == 0:
        raise LatticeError("zero vector")
    return Fraction(den, g), [a // g for a in w]


# --------------------------------------------------------------------------
# sublattices


@dataclass(frozen=True)
class Sublattice:
    """A sublattice given by basis columns in ambient coordinates.

    ``canonical`` is the row-HNF of the saturation, so primitive sublattices
    with the same ``Q``-span compare equal via it.
    """

    basis: tuple[tuple[int, ...], ...]
    saturated: bool
    canonical: tuple[tuple[int, ...], ...]
    degenerate: bool = False

    @property
    def rank(self) -> int:
        return len(self.basis)

    def gram(self, L: Lattice):
        cols = self.basis
        return [[L.ip(u, v) for v in cols] for u in cols]


def sublattice(L: Lattice, cols: Sequence[Sequence[int]]) -> Sublattice:
    cols = [tuple(int(x) for x in c) for c in cols]
    if cols and la.rank(cols) != len(cols):
        raise LatticeError("basis columns are linearly dependent")
    sat = la.saturation(cols)
    canon = tuple(tuple(r) for r in la.hnf_rows(sat))
    own = tuple(tuple(r) for r in la.hnf_rows(cols))
    G = [[L.ip(u, v) for v in cols] for u in cols]
    degenerate = bool(cols) and la.det(G) == 0
    return Sublattice(tuple(cols), own == canon, canon, degenerate)


def line(L: Lattice, v: Sequence) -> Sublattice:
    """The primitive rank-1 sublattice through ``v``."""
    _, w = primitive_part(v)
    return sublattice(L, [w])


def orthogonal_complement(L: Lattice, w: Sequence[int]) -> Sublattice:
    """``w^⊥ ⊂ L`` from columns ``2..n`` of the Smith column transform of ``ŵ``."""
    if not is_primitive(w):
        raise LatticeError("orthogonal complement needs a primitive vector")
    _, _, Q = la.smith_normal_form([L.hat(w)])
    cols = la.columns(Q)[1:]
    return sublattice(L, cols)


def complement_lattice(L: Lattice, sub: Sublattice) -> Lattice:
    return lattice(sub.gram(L))


def orthogonal_complement_of(L: Lattice, cols: Sequence[Sequence[int]]) -> list[list[int]]:
    """Integral basis of the orthogonal complement of a set of vectors."""
    A = [L.hat(c) for c in cols]
    ker = la.kernel_rational(A)
    ker_int = []
    for v in ker:
        d = la.vector_denominator(v)
        ker_int.append([int(x * d) for x in v])
    return la.saturation(ker_int)


# --------------------------------------------------------------------------
# overlattices


def overlattice(L: Lattice, glue: Sequence[Sequence]) -> tuple[Lattice, list[list[int]]]:
    """The overlattice ``L + Z glue``; returns ``(Lp, embed)`` with
    ``embed`` mapping L-coordinates to Lp-coordinates."""
    n = L.rank
    den = 1
    for g in glue:
        den = la.lcm(den, la.vector_denominator(g))
    gens = [[den * int(i == j) for j in range(n)] for i in range(n)]
    gens += [[int(Fraction(x) * den) for x in g] for g in glue]
    H = la.hnf_rows(gens)
    B = la.transpose([[Fraction(x, den) for x in row] for row in H])  # columns = new basis
    B = la.normalize_matrix(B)
    G = la.normalize_matrix(la.mat_mul(la.mat_mul(la.transpose(B), L.gram), B))
    return lattice(G), la.inverse(B)


def _unimodular_prefix(L: Lattice) -> int:
    """Size of the leading hyperbolic block ``kU`` of the Gram matrix."""
    k = 0
    G = L.gram
    n = L.rank
    while k + 2 <= n:
        blk_ok = G[k][k] == 0 and G[k + 1][k + 1] == 0 and G[k][k + 1] == 1
        rest_ok = all(G[i][j] == 0 for i in (k, k + 1) for j in range(n) if j not in (k, k + 1))
        if not (blk_ok and rest_ok):
            break
        k += 2
    return k


def maximal_overlattice(L: Lattice) -> tuple[Lattice, list[list[int]]]:
    """A maximal even overlattice built by greedily adjoining isotropic
    discriminant elements in lexicographic exponent order.

    When the Gram matrix starts with hyperbolic planes, those coordinates
    are kept and only the complementary block is changed and, if definite,
    reduced.
    """
    from .discform import disc_form_of

    k = _unimodular_prefix(L)
    if k:
        L0 = lattice([row[k:] for row in L.gram[k:]])
        L0p, emb0 = maximal_overlattice(L0)
        if L0p.is_definite() and L0p != L0:
            from .isometry import reduce_definite

            L0p, T = reduce_definite(L0p)
            emb0 = la.mat_mul(la.inverse(T), emb0)
        G = la.block_diag([row[:k] for row in L.gram[:k]], L0p.gram)
        E = la.block_diag(la.identity(k), emb0)
        return lattice(G), la.normalize_matrix(E)

    q = disc_form_of(L)
    chosen: list[tuple[int, ...]] = []
    while True:
        x = _next_isotropic(q, chosen)
        if x is None:
            break
        chosen.append(x)
    if not chosen:
        return L, la.identity(L.rank)
    glue = [q.element_lift(x) for x in chosen]
    return overlattice(L, glue)


def _next_isotropic(q, chosen):
    span = q.span(chosen)
    for x in q.elements():
        if x in span:
            continue
        if q.q(x) != 0:
            continue
        if any(q.b(x, h) != 0 for h in chosen):
            continue
        return x
    return None


def index_of(embed) -> int:
    return abs(la.det(embed))
