"""Exact integer linear algebra.

Everything here works on Python ints, so there is no overflow to detect.
Matrices are small (desk scale) and stored as tuples of row tuples.

Conventions
-----------
* ``hermite_normal_form`` is *column style*: ``M @ U == H`` with ``U``
  unimodular and ``H`` in lower column echelon form.  Pivots are positive
  and the entries to the left of a pivot, in the pivot row, lie in
  ``[0, pivot)``.  The trailing ``cols - rank`` columns of ``U`` span the
  integer kernel of ``M``.
* ``smith_normal_form`` returns ``U @ M @ V == S``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple[int, ...]


class BudgetExceeded(RuntimeError):
    """A configured work budget would be exceeded."""


class IntMatrix:
    """Immutable integer matrix."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int | None = None) -> "IntMatrix":
        cols = [tuple(c) for c in cols]
        if not cols:
            return cls([() for _ in range(nrows or 0)], ncols=0)
        return cls(zip(*cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls([[0] * n for _ in range(m)], ncols=n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_columns(self.rows, nrows=self.ncols) if self.nrows else IntMatrix.zeros(self.ncols, 0)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            return IntMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self.rows],
                ncols=other.ncols,
            )
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.rows]})"

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix([[self.rows[i][j] for j in cols] for i in rows], ncols=len(cols))

    def det(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("determinant of non-square matrix")
        return bareiss_det([list(r) for r in self.rows])

    def rank(self) -> int:
        return hermite_normal_form(self).rank


def as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix(m)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
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


def content(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Vector:
    g = content(v)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free determinant; ``a`` is consumed."""
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


# --------------------------------------------------------------------------
# Hermite normal form


@dataclass(frozen=True)
class HermiteForm:
    H: IntMatrix
    U: IntMatrix
    rank: int
    pivots: tuple[tuple[int, int], ...]  # (row, col) of each pivot

    def kernel_basis(self) -> list[Vector]:
        return [self.U.column(j) for j in range(self.rank, self.U.ncols)]


def hermite_normal_form(M) -> HermiteForm:
    M = as_matrix(M)
    m, n = M.shape
    # work on columns: A[j] is column j
    A = [list(c) for c in M.columns()]
    U = [[int(i == j) for i in range(n)] for j in range(n)]  # U[j] = column j of U

    def combine(r, j, x, y, p, q):
        # col_r <- x col_r + y col_j ; col_j <- p col_r + q col_j
        for cols in (A, U):
            cr, cj = cols[r], cols[j]
            cols[r] = [x * a + y * b for a, b in zip(cr, cj)]
            cols[j] = [p * a + q * b for a, b in zip(cr, cj)]

    r = 0
    pivots = []
    for i in range(m):
        if r == n:
            break
        for j in range(r + 1, n):
            b = A[j][i]
            if b == 0:
                continue
            a = A[r][i]
            x, y, g = xgcd(a, b)
            combine(r, j, x, y, -b // g, a // g)
        piv = A[r][i]
        if piv == 0:
            continue
        if piv < 0:
            A[r] = [-v for v in A[r]]
            U[r] = [-v for v in U[r]]
            piv = -piv
        for c in range(r):
            q = A[c][i] // piv
            if q:
                A[c] = [a - q * b for a, b in zip(A[c], A[r])]
                U[c] = [a - q * b for a, b in zip(U[c], U[r])]
        pivots.append((i, r))
        r += 1
    H = IntMatrix.from_columns(A, nrows=m) if n else IntMatrix.zeros(m, 0)
    Umat = IntMatrix.from_columns(U, nrows=n) if n else IntMatrix.zeros(0, 0)
    return HermiteForm(H, Umat, r, tuple(pivots))


def solve_integer(M, b: Sequence[int]) -> Vector | None:
    """An integer solution ``x`` of ``M x = b``, or ``None`` if there is none."""
    M = as_matrix(M)
    b = tuple(b)
    if len(b) != M.nrows:
        raise ValueError("dimension mismatch")
    hf = hermite_normal_form(M)
    H = hf.H
    z = [0] * M.ncols
    pivot_rows = {}
    for i, c in hf.pivots:
        pivot_rows[i] = c
    for i in range(M.nrows):
        s = sum(H.rows[i][c] * z[c] for c in range(hf.rank))
        if i in pivot_rows:
            c = pivot_rows[i]
            num = b[i] - s + H.rows[i][c] * z[c]
            q, rem = divmod(num, H.rows[i][c])
            if rem:
                return None
            z[c] = q
        elif s != b[i]:
            return None
    return hf.U @ z


def integer_kernel(M) -> list[Vector]:
    return hermite_normal_form(M).kernel_basis()


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    S: IntMatrix
    U: IntMatrix
    V: IntMatrix
    elementary_divisors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.elementary_divisors)


def smith_normal_form(M) -> SmithForm:
    M = as_matrix(M)
    m, n = M.shape
    A = [list(r) for r in M.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row_dst += q row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            piv = A[t][t]
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    divisors = tuple(A[i][i] for i in range(min(m, n)) if A[i][i])
    return SmithForm(IntMatrix(A, ncols=n), IntMatrix(U, ncols=m), IntMatrix(V, ncols=n), divisors)


def lattice_index(generators: Sequence[Sequence[int]]) -> int | None:
    """Index of the lattice spanned by ``generators`` in ``Z^N`` (``None`` if not full rank)."""
    gens = [tuple(g) for g in generators]
    N = len(gens[0])
    snf = smith_normal_form(IntMatrix.from_columns(gens, nrows=N))
    if snf.rank < N:
        return None
    return math.prod(snf.elementary_divisors)


# --------------------------------------------------------------------------
# Sublattices


def sublattice_coordinates(points: Sequence[Sequence[int]]):
    """Coordinates of ``points`` in the lattice of their affine span.

    Returns ``(origin, basis, coords)`` where ``basis`` is an ``N x k`` matrix
    whose columns form a basis of ``(affine span ∩ Z^N) - origin`` in column
    Hermite form, and ``origin + basis @ c == p`` for each point ``p`` and its
    coordinate vector ``c``.
    """
    pts = [tuple(p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    N = len(pts[0])
    origin = pts[0]
    diffs = [tuple(a - o for a, o in zip(p, origin)) for p in pts]
    nonzero = [d for d in diffs if any(d)]
    if not nonzero:
        return origin, IntMatrix.zeros(N, 0), [() for _ in pts]
    snf = smith_normal_form(IntMatrix.from_columns(nonzero, nrows=N))
    k = snf.rank
    Uinv = inverse_unimodular(snf.U)
    basis = IntMatrix.from_columns(Uinv.columns()[:k], nrows=N)
    basis = hermite_normal_form(basis).H
    coords = []
    for d in diffs:
        c = solve_integer(basis, d)
        assert c is not None
        coords.append(c)
    return origin, basis, coords


def inverse_unimodular(U: IntMatrix) -> IntMatrix:
    n = U.nrows
    cols = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        x = solve_integer(U, e)
        if x is None:
            raise ValueError("matrix is not unimodular")
        cols.append(x)
    return IntMatrix.from_columns(cols, nrows=n)


def rational_inverse(M: IntMatrix) -> list[list[Fraction]]:
    n = M.nrows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M.rows)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    pts = [tuple(p) for p in points]
    if len(pts) <= 1:
        return 0
    o = pts[0]
    return IntMatrix([[a - b for a, b in zip(p, o)] for p in pts[1:]]).rank()


def is_unimodular_simplex(points: Sequence[Sequence[int]]) -> bool:
    """Whether ``points`` are the vertices of a unimodular simplex in their affine lattice."""
    pts = list(dict.fromkeys(tuple(p) for p in points))
    if len(pts) != len(points) or not pts:
        return False
    _, basis, coords = sublattice_coordinates(pts)
    k = basis.ncols
    if len(pts) != k + 1:
        return False
    edges = IntMatrix([[a - b for a, b in zip(c, coords[0])] for c in coords[1:]], ncols=k)
    return abs(edges.det()) == 1


def is_totally_unimodular(M, budget: int = 2_000_000) -> bool:
    """Exhaustive total-unimodularity test.

    Raises ``BudgetExceeded`` if the number of square submatrices exceeds
    ``budget``.
    """
    M = as_matrix(M)
    if any(x not in (-1, 0, 1) for row in M.rows for x in row):
        return False
    m, n = M.shape
    work = sum(math.comb(m, k) * math.comb(n, k) for k in range(2, min(m, n) + 1))
    if work > budget:
        raise BudgetExceeded(f"TU check needs {work} minors, budget is {budget}")
    rows = M.rows
    for k in range(2, min(m, n) + 1):
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                d = bareiss_det([[rows[i][j] for j in ci] for i in ri])
                if d not in (-1, 0, 1):
                    return False
    return True
