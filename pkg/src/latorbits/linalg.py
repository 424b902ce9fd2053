"""Exact integer and rational matrix kernel.

Matrices are plain row-major lists of lists holding ``int`` or
``fractions.Fraction`` entries. Nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list  # list[list[int | Fraction]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def copy(A: Sequence[Sequence]) -> Matrix:
    return [list(row) for row in A]


def transpose(A: Sequence[Sequence]) -> Matrix:
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def bilinear(G: Sequence[Sequence], u: Sequence, v: Sequence):
    """Return ``u^T G v``."""
    return dot(u, mat_vec(G, v))


def block_diag(*blocks: Sequence[Sequence]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(b)
    return out


def columns(A: Sequence[Sequence]) -> list[list]:
    return transpose(A)


def from_columns(cols: Sequence[Sequence]) -> Matrix:
    return transpose(cols)


def normalize(x):
    """Demote integral Fractions to int so matrices compare cleanly."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def normalize_matrix(A: Sequence[Sequence]) -> Matrix:
    return [[normalize(x) for x in row] for row in A]


def is_integral(A: Sequence[Sequence]) -> bool:
    return all(not isinstance(x, Fraction) or x.denominator == 1 for row in A for x in row)


def is_integral_vector(v: Sequence) -> bool:
    return all(not isinstance(x, Fraction) or x.denominator == 1 for x in v)


def denominator(A: Sequence[Sequence]) -> int:
    d = 1
    for row in A:
        for x in row:
            if isinstance(x, Fraction):
                d = d * x.denominator // gcd(d, x.denominator)
    return d


def vector_denominator(v: Sequence) -> int:
    return denominator([v])


def det(A: Sequence[Sequence]):
    """Determinant by fraction-free Bareiss elimination (exact for ints)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(map(Fraction, row)) for row in A]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev
        prev = M[k][k]
    return normalize(sign * M[n - 1][n - 1])


def inverse(A: Sequence[Sequence]) -> Matrix:
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return normalize_matrix([row[n:] for row in M])


def solve(A: Sequence[Sequence], b: Sequence) -> list:
    """Solve ``A x = b`` for square nonsingular ``A``."""
    return [normalize(x) for x in mat_vec(inverse(A), b)]


def rank(A: Sequence[Sequence]) -> int:
    M = [list(map(Fraction, row)) for row in A]
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
    return r


def kernel_rational(A: Sequence[Sequence]) -> list[list]:
    """Basis of the right kernel of ``A`` over Q."""
    ncols = len(A[0]) if A else 0
    M = [list(map(Fraction, row)) for row in A]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -M[i][free]
        basis.append([normalize(x) for x in v])
    return basis


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else 0


# --------------------------------------------------------------------------
# Smith normal form


def _row_smith(a: list[int]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith form of a single row with a structured column transform.

    The pivot column of Q is the shortest suffix combination reaching the
    content of the row (or a unit vector when some entry already equals
    it); the remaining columns clear the other coordinates against it.
    """
    n = len(a)
    g = 0
    for x in a:
        g = gcd(g, x)
    if g == 0:
        return [[1]], [list(a)], identity(n)
    hits = [j for j, x in enumerate(a) if abs(x) == g]
    if hits:
        s = hits[-1]
        pivot = [0] * n
        pivot[s] = 1 if a[s] > 0 else -1
        cols = [pivot]
        for j in range(n):
            if j != s:
                v = [0] * n
                v[j] = 1
                c = a[j] // g
                v[s] -= c * pivot[s]
                cols.append(v)
        Q = from_columns(cols)
    else:
        # shortest suffix whose gcd already equals g
        s = n - 1
        h = 0
        while True:
            h = gcd(h, a[s])
            if h == g:
                break
            s -= 1
        pivot, kernel = _suffix_combination(a, s)
        cols = [pivot]
        for j in range(s):
            v = [0] * n
            v[j] = 1
            c = a[j] // g
            v = [vi - c * pi for vi, pi in zip(v, pivot)]
            cols.append(v)
        cols.extend(kernel)
        Q = from_columns(cols)
    D = [[g] + [0] * (n - 1)]
    return [[1]], D, Q


def _suffix_combination(a: list[int], s: int) -> tuple[list[int], list[list[int]]]:
    """Pivot vector supported on ``a[s:]`` reaching gcd(a[s:]), plus a
    completion of it to a unimodular basis of that coordinate block."""
    n = len(a)
    if s == n - 1:
        p = [0] * n
        p[s] = 1 if a[s] >= 0 else -1
        return p, []
    inner, kernel = _suffix_combination(a, s + 1)
    b = sum(x * y for x, y in zip(a, inner))
    if a[s] == 0 and b == 0:
        e = [0] * n
        e[s] = 1
        return inner, [e] + kernel
    g, x, y = xgcd(a[s], b)
    p = [y * v for v in inner]
    p[s] += x
    k = [-(a[s] // g) * v for v in inner]
    k[s] += b // g
    return p, [k] + kernel


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(P, D, Q)`` with ``P A Q = D`` in Smith normal form.

    P and Q are unimodular; the diagonal of D is nonnegative with each
    nonzero entry dividing the next and zeros trailing.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 1 and n >= 1:
        return _row_smith([int(x) for x in A[0]])
    D = [[int(x) for x in row] for row in A]
    P = identity(m)
    Q = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for M in (D, Q):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        D[dst] = [x + c * y for x, y in zip(D[dst], D[src])]
        P[dst] = [x + c * y for x, y in zip(P[dst], P[src])]

    def add_col(dst, src, c):  # col_dst += c * col_src
        for M in (D, Q):
            for row in M:
                row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        # smallest nonzero |entry| in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = D[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(i, t, -q)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(j, t, -q)
                    if D[t][j]:
                        done = False
            if not done:
                best = None
                for i in range(t, m):
                    if D[i][t] and (best is None or abs(D[i][t]) < best[0]):
                        best = (abs(D[i][t]), i, "r")
                for j in range(t, n):
                    if D[t][j] and (best is None or abs(D[t][j]) < best[0]):
                        best = (abs(D[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % D[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            P[t] = [-x for x in P[t]]
        t += 1
    return P, D, Q


def smith_diagonal(A: Sequence[Sequence[int]]) -> list[int]:
    _, D, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


# --------------------------------------------------------------------------
# Hermite normal form and lattice reduction of residues


def hnf_rows(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Canonical row-style HNF basis of the Z-span of integer vectors.

    Rows are echelon with positive pivots; entries above each pivot are
    reduced into ``[0, pivot)``. Zero rows are dropped.
    """
    rows = [[int(x) for x in v] for v in vectors if any(v)]
    if not rows:
        return []
    n = len(rows[0])
    basis: list[list[int]] = []
    r = 0
    for c in range(n):
        cand = [i for i in range(r, len(rows)) if rows[i][c]]
        if not cand:
            continue
        while True:
            cand = [i for i in range(r, len(rows)) if rows[i][c]]
            if len(cand) == 1:
                break
            p = min(cand, key=lambda i: abs(rows[i][c]))
            for i in cand:
                if i != p:
                    q = rows[i][c] // rows[p][c]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[p])]
        p = cand[0]
        rows[r], rows[p] = rows[p], rows[r]
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
        for i in range(r):
            q = rows[i][c] // rows[r][c]
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    basis = [row for row in rows[:r]]
    return basis


def pivot_columns(hnf: Sequence[Sequence[int]]) -> list[int]:
    return [next(j for j, x in enumerate(row) if x) for row in hnf]


def reduce_mod(v: Sequence[int], hnf: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Canonical residue of an integer vector modulo a full-rank HNF lattice."""
    v = list(v)
    for row in hnf:
        c = next(j for j, x in enumerate(row) if x)
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return tuple(v)


def in_span(v: Sequence[int], hnf: Sequence[Sequence[int]]) -> bool:
    return not any(reduce_mod(v, hnf))


def saturation(cols: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis (as columns) of ``span_Q(cols) ∩ Z^n``."""
    k = len(cols)
    if k == 0:
        return []
    B = from_columns(cols)
    P, D, _ = smith_normal_form(B)
    r = sum(1 for i in range(min(len(D), k)) if D[i][i])
    Pinv = inverse(P)
    return [col for col in columns(Pinv)[:r]]


# --------------------------------------------------------------------------
# Congruent diagonalization over Q


def congruent_diagonalize(G: Sequence[Sequence]) -> tuple[Matrix, Matrix]:
    """Return ``(P, D)`` with ``P^T G P = D`` diagonal over the rationals."""
    n = len(G)
    A = [list(map(Fraction, row)) for row in G]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def col_op(dst, src, c):  # column dst += c*column src, congruently
        for row in P:
            row[dst] += c * row[src]
        for row in A:
            row[dst] += c * row[src]
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]

    def swap(i, j):
        for row in P:
            row[i], row[j] = row[j], row[i]
        for row in A:
            row[i], row[j] = row[j], row[i]
        A[i], A[j] = A[j], A[i]

    for k in range(n):
        if A[k][k] == 0:
            j = next((j for j in range(k + 1, n) if A[j][j] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if A[k][j] != 0), None)
                if j is None:
                    continue
                # (x+y) substitution creates a nonzero diagonal entry
                col_op(k, j, Fraction(1))
        for j in range(k + 1, n):
            if A[k][j] != 0:
                col_op(j, k, -A[k][j] / A[k][k])
    return normalize_matrix(P), normalize_matrix(A)


def inertia(G: Sequence[Sequence]) -> tuple[int, int, int]:
    """Return ``(positive, negative, zero)`` counts of a symmetric matrix."""
    _, D = congruent_diagonalize(G)
    pos = sum(1 for i in range(len(D)) if D[i][i] > 0)
    neg = sum(1 for i in range(len(D)) if D[i][i] < 0)
    return pos, neg, len(D) - pos - neg


def ldl_positive(G: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Exact LDL^T of a positive definite matrix: returns (mu, q) with
    ``x^T G x = sum_i q_i (x_i + sum_{j>i} mu[i][j] x_j)^2``."""
    n = len(G)
    A = [list(map(Fraction, row)) for row in G]
    q = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        q[i] = A[i][i]
        if q[i] <= 0:
            raise ValueError("matrix is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = A[i][j] / q[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                A[j][k] -= mu[i][j] * A[i][k]
                A[k][j] = A[j][k]
    return mu, q
