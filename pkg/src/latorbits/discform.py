"""Finite quadratic forms on discriminant groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd
from typing import Iterator, Sequence

from . import linalg as la

Elem = tuple[int, ...]


def _mod(x, m) -> Fraction:
    x = Fraction(x)
    return x - m * ((x / m).numerator // (x / m).denominator)


@dataclass(frozen=True)
class FiniteQuadraticForm:
    """A quadratic form ``q: A -> Q/2Z`` on ``A = ⊕ C_{d_i}``.

    ``matrix`` holds exact rational values: ``q(g_i)`` on the diagonal and
    ``b(g_i, g_j)`` off it. Diagonal entries are kept modulo 2 and the others
    modulo 1, so two forms with the same data compare equal.
    """

    orders: tuple[int, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    lifts: tuple[tuple, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.orders)
        M = [[Fraction(self.matrix[i][j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                M[i][j] = _mod(M[i][j], 2 if i == j else 1)
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in M))
        object.__setattr__(self, "orders", tuple(int(d) for d in self.orders))
        for i, d in enumerate(self.orders):
            if d < 1:
                raise ValueError("orders must be positive")
            if _mod(d * d * M[i][i], 2) != 0:
                raise ValueError("q(d_i g_i) must vanish")
            for j in range(n):
                if _mod(d * M[i][j], 1) != 0:
                    raise ValueError("b(d_i g_i, g_j) must vanish")

    # construction -----------------------------------------------------------

    @classmethod
    def diagonal(cls, orders: Sequence[int], values: Sequence) -> "FiniteQuadraticForm":
        n = len(orders)
        M = [[Fraction(values[i]) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        return cls(tuple(orders), tuple(tuple(r) for r in M))

    # group structure ----------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.orders)

    @cached_property
    def order(self) -> int:
        out = 1
        for d in self.orders:
            out *= d
        return out

    @property
    def length(self) -> int:
        """Minimal number of generators of the underlying group."""
        best = 0
        for p in _primes_dividing(self.order):
            best = max(best, sum(1 for d in self.orders if d % p == 0))
        return best

    def zero(self) -> Elem:
        return (0,) * self.rank

    def reduce(self, x: Sequence[int]) -> Elem:
        return tuple(int(a) % d for a, d in zip(x, self.orders))

    def add(self, x: Elem, y: Elem) -> Elem:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def neg(self, x: Elem) -> Elem:
        return tuple((-a) % d for a, d in zip(x, self.orders))

    def scale(self, k: int, x: Elem) -> Elem:
        return tuple((k * a) % d for a, d in zip(x, self.orders))

    def element_order(self, x: Elem) -> int:
        out = 1
        for a, d in zip(x, self.orders):
            out = la.lcm(out, d // gcd(a, d))
        return out

    def elements(self) -> Iterator[Elem]:
        """All elements in lexicographic exponent order."""
        return product(*(range(d) for d in self.orders))

    def span(self, gens: Sequence[Elem]) -> frozenset[Elem]:
        seen = {self.zero()}
        frontier = [self.zero()]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    # values -------------------------------------------------------------------

    def q(self, x: Sequence[int]) -> Fraction:
        M = self.matrix
        n = self.rank
        s = Fraction(0)
        for i in range(n):
            if x[i]:
                s += x[i] * x[i] * M[i][i]
                for j in range(i + 1, n):
                    if x[j]:
                        s += 2 * x[i] * x[j] * M[i][j]
        return _mod(s, 2)

    def b(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        M = self.matrix
        s = Fraction(0)
        for i, a in enumerate(x):
            if a:
                for j, c in enumerate(y):
                    if c:
                        s += a * c * M[i][j]
        return _mod(s, 1)

    def b_from_q(self, x: Elem, y: Elem) -> Fraction:
        return _mod((self.q(self.add(x, y)) - self.q(x) - self.q(y)) / 2, 1)

    def element_lift(self, x: Sequence[int]) -> list:
        if self.lifts is None:
            raise ValueError("form carries no lifts")
        v = [Fraction(0)] * len(self.lifts[0])
        for a, g in zip(x, self.lifts):
            if a:
                v = [s + a * t for s, t in zip(v, g)]
        return [la.normalize(s) for s in v]

    def __neg__(self) -> "FiniteQuadraticForm":
        return FiniteQuadraticForm(self.orders, tuple(tuple(-x for x in r) for r in self.matrix))

    def __add__(self, other: "FiniteQuadraticForm") -> "FiniteQuadraticForm":
        M = la.block_diag(self.matrix, other.matrix)
        return FiniteQuadraticForm(self.orders + other.orders, tuple(tuple(r) for r in M))

    @cached_property
    def order_profile(self) -> tuple:
        """Multiset of (element order, q-value) pairs; an isomorphism invariant."""
        counts: dict = {}
        for x in self.elements():
            key = (self.element_order(x), self.q(x))
            counts[key] = counts.get(key, 0) + 1
        return tuple(sorted(counts.items()))

    def __str__(self) -> str:
        if not self.orders:
            return "trivial"
        parts = " + ".join(f"C{d}" for d in self.orders)
        return f"{parts} with q-matrix {[[str(v) for v in r] for r in self.matrix]}"


def _primes_dividing(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------


def disc_form_of(L) -> FiniteQuadraticForm:
    from .lattice import discriminant_group

    D = discriminant_group(L)
    lifts = D.generator_lifts
    M = [[L.ip(u, v) for v in lifts] for u in lifts]
    return FiniteQuadraticForm(D.invariant_factors, tuple(tuple(r) for r in M), tuple(lifts))


def form_from_lifts(L, lifts: Sequence[Sequence], orders: Sequence[int]) -> FiniteQuadraticForm:
    """Form on the subgroup of ``D(L)`` spanned by the given lifts."""
    M = [[L.ip(u, v) for v in lifts] for u in lifts]
    return FiniteQuadraticForm(tuple(orders), tuple(tuple(r) for r in M), tuple(tuple(v) for v in lifts))


def isotropic_elements(q: FiniteQuadraticForm) -> list[Elem]:
    return [x for x in q.elements() if q.q(x) == 0]


def isotropic_subgroups_exist(q: FiniteQuadraticForm) -> bool:
    return any(any(x) for x in isotropic_elements(q))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FqfMap:
    """A group homomorphism between finite quadratic forms.

    Column ``i`` of ``matrix`` holds the exponents of the image of the
    ``i``-th source generator.
    """

    matrix: tuple[tuple[int, ...], ...]
    src_orders: tuple[int, ...]
    dst_orders: tuple[int, ...]
    compatible: bool = True

    @classmethod
    def from_images(cls, images: Sequence[Elem], src_orders, dst_orders, compatible=True) -> "FqfMap":
        m, n = len(dst_orders), len(src_orders)
        M = tuple(tuple(images[j][i] % dst_orders[i] for j in range(n)) for i in range(m))
        return cls(M, tuple(src_orders), tuple(dst_orders), compatible)

    @property
    def images(self) -> list[Elem]:
        m = len(self.dst_orders)
        return [tuple(self.matrix[i][j] for i in range(m)) for j in range(len(self.src_orders))]

    def __call__(self, x: Sequence[int]) -> Elem:
        out = [0] * len(self.dst_orders)
        for j, a in enumerate(x):
            if a:
                for i in range(len(out)):
                    out[i] += a * self.matrix[i][j]
        return tuple(v % d for v, d in zip(out, self.dst_orders))

    def compose(self, other: "FqfMap") -> "FqfMap":
        """``self ∘ other``."""
        return FqfMap.from_images([self(y) for y in other.images], other.src_orders, self.dst_orders,
                                  self.compatible and other.compatible)

    def __mul__(self, other: "FqfMap") -> "FqfMap":
        return self.compose(other)

    def is_identity(self) -> bool:
        if self.src_orders != self.dst_orders:
            return False
        n = len(self.src_orders)
        return all(self.images[j] == tuple(int(i == j) % self.dst_orders[i] for i in range(n)) for j in range(n))

    def inverse(self, src: FiniteQuadraticForm, dst: FiniteQuadraticForm) -> "FqfMap":
        table = {self(x): x for x in src.elements()}
        if len(table) != src.order or src.order != dst.order:
            raise ValueError("map is not bijective")
        n = dst.rank
        gens = [tuple(int(i == j) for i in range(n)) for j in range(n)]
        return FqfMap.from_images([table[dst.reduce(g)] for g in gens], self.dst_orders, self.src_orders,
                                  self.compatible)

    def preserves(self, src: FiniteQuadraticForm, dst: FiniteQuadraticForm) -> bool:
        imgs = self.images
        n = src.rank
        for i in range(n):
            if dst.q(imgs[i]) != src.matrix[i][i]:
                return False
            for j in range(i + 1, n):
                if dst.b(imgs[i], imgs[j]) != src.matrix[i][j]:
                    return False
        return True


def identity_map(q: FiniteQuadraticForm) -> FqfMap:
    n = q.rank
    return FqfMap.from_images([tuple(int(i == j) for i in range(n)) for j in range(n)], q.orders, q.orders)


def iso_fqf(q1: FiniteQuadraticForm, q2: FiniteQuadraticForm) -> Iterator[FqfMap]:
    """Every isomorphism ``g`` with ``q2 ∘ g = q1``, by backtracking over
    generator images."""
    if q1.order != q2.order or q1.order_profile != q2.order_profile:
        return
    n = q1.rank
    orders = [q1.element_order(q1.reduce([int(i == j) for i in range(n)])) for j in range(n)]
    by_key: dict = {}
    for y in q2.elements():
        by_key.setdefault((q2.element_order(y), q2.q(y)), []).append(y)
    cands = [by_key.get((orders[j], q1.matrix[j][j]), []) for j in range(n)]
    M1 = q1.matrix
    images: list[Elem] = []

    def rec(j):
        if j == n:
            if len(q2.span(images)) == q2.order:
                yield FqfMap.from_images(list(images), q1.orders, q2.orders)
            return
        for y in cands[j]:
            if all(q2.b(images[i], y) == M1[i][j] for i in range(j)):
                images.append(y)
                yield from rec(j + 1)
                images.pop()

    yield from rec(0)


def orthogonal_group(q: FiniteQuadraticForm) -> list[FqfMap]:
    return list(iso_fqf(q, q))


def generated_subgroup(maps: Sequence[FqfMap], q: FiniteQuadraticForm) -> frozenset[FqfMap]:
    """Closure of a set of automorphisms of ``q`` under composition."""
    e = identity_map(q)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in maps:
                y = g.compose(x)
                y = FqfMap(y.matrix, y.src_orders, y.dst_orders, True)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def unique_genus_check(sig: tuple[int, int], q: FiniteQuadraticForm) -> str:
    """``"applies"`` when the classical indefinite criterion guarantees a
    single class in the genus and surjectivity onto ``O(q)``."""
    tp, tm = sig
    ok = tp >= 1 and tm >= 1 and tp + tm >= 3 and tp + tm >= 2 + q.length
    return "applies" if ok else "inconclusive"
