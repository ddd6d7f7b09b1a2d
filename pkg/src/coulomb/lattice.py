"""Exact integer-lattice linear algebra.

Everything here works on plain Python integers.  Lattices are always Z^k with
an explicit basis; an :class:`IntMatrix` is just a rectangular block of
integers that remembers its column count even when it has no rows.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionError, EmbeddingDegenerateError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ncols:
                raise DimensionError(f"ragged row {r!r}, expected {self.ncols} columns")
            for x in r:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise TypeError(f"non-integer entry {x!r}")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise DimensionError("cannot infer column count of an empty matrix")
            ncols = len(rows[0])
        return cls(rows, ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls(tuple((0,) * n for _ in range(m)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)) if self.rows else tuple(() for _ in range(self.ncols)), self.nrows)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.T.rows
        return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows), other.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def __str__(self):
        return str(self.tolist())


def as_matrix(M, ncols: int | None = None) -> IntMatrix:
    if isinstance(M, IntMatrix):
        return M
    return IntMatrix.from_rows(M, ncols)


def pairing(a: Sequence[int], lam: Sequence[int]) -> int:
    """Exact dot product of a covector with a vector."""
    if len(a) != len(lam):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(lam)}")
    return sum(x * y for x, y in zip(a, lam))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def smith_normal_form(M) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form with unimodular witnesses.

    Returns ``(U, D, V)`` with ``U @ M @ V == D``, ``U`` and ``V`` unimodular,
    ``D`` diagonal, nonnegative, and ``D[i][i]`` dividing ``D[i+1][i+1]``.
    """
    M = as_matrix(M)
    m, n = M.shape
    A = [list(r) for r in M.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row[dst] += k * row[src]
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            # bring the smallest nonzero entry of the trailing block to (t, t)
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        if best is None:
            break

    return (IntMatrix(tuple(map(tuple, U)), m), IntMatrix(tuple(map(tuple, A)), n), IntMatrix(tuple(map(tuple, V)), n))


def smith_invariants(M) -> list[int]:
    """Nonzero invariant factors of M."""
    _, D, _ = smith_normal_form(M)
    return [D[i, i] for i in range(min(D.shape)) if D[i, i]]


def rank(M) -> int:
    """Rank over Q; plain row lists may hold Fractions."""
    rows = M.rows if isinstance(M, IntMatrix) else [list(r) for r in M]
    return len(echelon_pivots(rows))


def echelon_pivots(rows: Sequence[Sequence]) -> list[int]:
    """Pivot columns of a fraction-free (Bareiss) row echelon form."""
    _, pivots = bareiss_echelon(rows)
    return pivots


def bareiss_echelon(rows: Sequence[Sequence]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of an integer (or rational) matrix.

    Rational input is cleared row by row first, which leaves the row space
    unchanged.  Returns the nonzero echelon rows and their pivot columns.
    """
    A = [_integer_row(r) for r in rows]
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    pivots = []
    prev = 1
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        for i in range(r + 1, m):
            a = A[i][c]
            A[i] = [(p * x - a * y) // prev for x, y in zip(A[i], A[r])]
            A[i][c] = 0
        prev = p
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A[:r], pivots


def _integer_row(r: Sequence) -> list[int]:
    den = 1
    for x in r:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    return [int(x * den) for x in r]


def nullspace(M, ncols: int | None = None) -> list[tuple[int, ...]]:
    """Primitive integer basis of the rational right kernel of M.

    Forward elimination is fraction-free; back substitution is done in
    exact rationals and each kernel vector is scaled to a primitive
    integer vector.
    """
    rows = M.rows if isinstance(M, IntMatrix) else [list(r) for r in M]
    if isinstance(M, IntMatrix):
        n = M.ncols
    elif ncols is not None:
        n = ncols
    elif rows:
        n = len(rows[0])
    else:
        raise DimensionError("cannot infer column count")
    E, pivots = bareiss_echelon(rows) if rows else ([], [])
    # back-eliminate in integers so each pivot column is a multiple of a unit vector
    for k in reversed(range(len(pivots))):
        c = pivots[k]
        for i in range(k):
            a = E[i][c]
            if a:
                p = E[k][c]
                E[i] = [p * x - a * y for x, y in zip(E[i], E[k])]
                g = 0
                for x in E[i]:
                    g = gcd(g, x)
                if g > 1:
                    E[i] = [x // g for x in E[i]]
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    lcm = 1
    for k, c in enumerate(pivots):
        p = abs(E[k][c])
        lcm = lcm * p // gcd(lcm, p)
    basis = []
    for f in free:
        x = [0] * n
        x[f] = lcm
        for k, c in enumerate(pivots):
            if E[k][f]:
                x[c] = -E[k][f] * (lcm // E[k][c])
        basis.append(primitive(x))
    return basis


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    if all(isinstance(x, int) for x in v):
        g = 0
        for x in v:
            g = gcd(g, x)
        return tuple(x // g for x in v) if g > 1 else tuple(v)
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def hermite_normal_form(M) -> IntMatrix:
    """Row-style Hermite normal form of the row lattice, zero rows dropped.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``.  Two matrices have the same row lattice iff their HNFs
    are equal.
    """
    M = as_matrix(M)
    A = [list(r) for r in M.rows]
    m, n = M.shape
    r = 0
    for c in range(n):
        for i in range(r + 1, m):
            if A[i][c] == 0:
                continue
            a, b = A[r][c], A[i][c]
            x, y, g = xgcd(a, b)
            ra, rb = A[r], A[i]
            A[r] = [x * u + y * v for u, v in zip(ra, rb)]
            A[i] = [(a // g) * v - (b // g) * u for u, v in zip(ra, rb)]
        if r < m and A[r][c] != 0:
            if A[r][c] < 0:
                A[r] = [-x for x in A[r]]
            p = A[r][c]
            for i in range(r):
                q = A[i][c] // p
                if q:
                    A[i] = [u - q * v for u, v in zip(A[i], A[r])]
            r += 1
        elif r < m:
            # column had no pivot among remaining rows
            pass
        if r == m:
            break
    return IntMatrix(tuple(tuple(row) for row in A[:r] if any(row)), n)


def inverse_unimodular(M) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    M = as_matrix(M)
    n = M.nrows
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M.rows)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [x / p for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    out = []
    for r in A:
        row = r[n:]
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(x) for x in row))
    return IntMatrix(tuple(out), n)


def determinant(M) -> int:
    M = as_matrix(M)
    if M.nrows != M.ncols:
        raise DimensionError("determinant of a non-square matrix")
    n = M.nrows
    if n == 0:
        return 1
    A = [list(r) for r in M.rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def saturate(M) -> IntMatrix:
    """HNF basis of (Q-span of the rows of M) intersected with Z^n."""
    M = as_matrix(M)
    _, D, V = smith_normal_form(M)
    r = sum(1 for i in range(min(D.shape)) if D[i, i])
    Vinv = inverse_unimodular(V)
    return hermite_normal_form(IntMatrix(Vinv.rows[:r], M.ncols))


def embedding_index(B) -> int:
    """Index of the image of B in its saturation (1 iff the cokernel is torsion-free)."""
    B = as_matrix(B)
    out = 1
    for d in smith_invariants(B):
        out *= d
    return out


def cokernel_charges(B) -> IntMatrix:
    """Rows spanning the saturated left kernel of a torus embedding B.

    ``B`` is d x k with full column rank.  The result C is (d-k) x d in
    Hermite normal form with ``C @ B == 0``.
    """
    B = as_matrix(B)
    d, k = B.shape
    if rank(B) != k:
        raise EmbeddingDegenerateError(f"inclusion matrix {B.tolist()} does not have full column rank {k}")
    U, _, _ = smith_normal_form(B)
    C = hermite_normal_form(IntMatrix(U.rows[k:], d))
    return C if C.nrows else IntMatrix.zeros(0, d)


def restrict_weights(B) -> IntMatrix:
    """Weights of the coordinate characters of C^d restricted along B: the rows of B."""
    B = as_matrix(B)
    return IntMatrix(B.rows, B.ncols)


@dataclass(frozen=True)
class DualSequence:
    """1 -> T -> (C*)^d -> T_F -> 1 together with its dual sequence."""

    inclusion: IntMatrix
    quotient: IntMatrix
    dual_inclusion: IntMatrix
    index: int = 1

    @property
    def saturated(self) -> bool:
        return self.index == 1

    @classmethod
    def from_inclusion(cls, B) -> "DualSequence":
        B = as_matrix(B)
        C = cokernel_charges(B)
        idx = embedding_index(B)
        if idx != 1:
            log.warning("embedding %s is not saturated (index %d); torsion is not modeled", B.tolist(), idx)
        return cls(B, C, C.T, idx)
