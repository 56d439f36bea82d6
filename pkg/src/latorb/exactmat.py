"""Exact integer and rational matrix algebra.

Everything in this module is pure and exact: arbitrary-precision integers,
:class:`fractions.Fraction` for rationals, no floating point anywhere.
Matrices are immutable values; every operation returns a new matrix.

Row-vector convention: vectors are rows and maps act on the right
(``x -> x @ m``), so the kernel of ``m`` is ``{x : x @ m = 0}`` and the row
span of ``m`` is the image of ``Z^rows``.  All normal forms (HNF, SNF) are
deterministic: identical inputs give identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


class ShapeError(ValueError):
    """Matrix dimensions do not fit the requested operation."""


class NoSolution(Exception):
    """The linear system passed to :func:`solve_exact` is inconsistent."""


def _as_int(x: object) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"integer entry expected, got {x!r}")
    return x


def _as_frac(x: object) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"rational entry expected, got {x!r}")


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix; ``entries`` is a row-major tuple of tuples."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("negative matrix dimension")
        if len(self.entries) != self.rows:
            raise ShapeError("row count does not match entries")
        for row in self.entries:
            if len(row) != self.cols:
                raise ShapeError("ragged rows")
            for e in row:
                _as_int(e)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(_as_int(e) for e in row) for row in rows)
        if cols is None:
            if not data:
                raise ShapeError("column count required for a matrix with no rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(tuple(self.entries[i][j] for i in range(self.rows))
                               for j in range(self.cols)))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("size mismatch in addition")
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(a + b for a, b in zip(ra, rb))
                               for ra, rb in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(-a for a in row) for row in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(k * a for a in row) for row in self.entries))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ShapeError("size mismatch in multiplication")
        bt = other.transpose().entries
        return IntMatrix(self.rows, other.cols,
                         tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in bt)
                               for row in self.entries))

    def __pow__(self, k: int) -> "IntMatrix":
        if self.rows != self.cols:
            raise ShapeError("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative power")
        out = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return all(all(e == 0 for e in row) for row in self.entries)

    def is_identity(self) -> bool:
        return (self.rows == self.cols
                and all(e == (1 if i == j else 0)
                        for i, row in enumerate(self.entries) for j, e in enumerate(row)))

    def to_rat(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols,
                         tuple(tuple(Fraction(e) for e in row) for row in self.entries))


@dataclass(frozen=True)
class RatMatrix:
    """Immutable rational matrix; every entry is a normalized Fraction."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("negative matrix dimension")
        if len(self.entries) != self.rows:
            raise ShapeError("row count does not match entries")
        coerced = tuple(tuple(_as_frac(e) for e in row) for row in self.entries)
        for row in coerced:
            if len(row) != self.cols:
                raise ShapeError("ragged rows")
        object.__setattr__(self, "entries", coerced)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[Rational]], cols: int | None = None) -> "RatMatrix":
        data = tuple(tuple(_as_frac(e) for e in row) for row in rows)
        if cols is None:
            if not data:
                raise ShapeError("column count required for a matrix with no rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return IntMatrix.identity(n).to_rat()

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         tuple(tuple(self.entries[i][j] for i in range(self.rows))
                               for j in range(self.cols)))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("size mismatch in addition")
        return RatMatrix(self.rows, self.cols,
                         tuple(tuple(a + b for a, b in zip(ra, rb))
                               for ra, rb in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + (-other)

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols,
                         tuple(tuple(-a for a in row) for row in self.entries))

    def scale(self, k: Rational) -> "RatMatrix":
        kf = _as_frac(k)
        return RatMatrix(self.rows, self.cols,
                         tuple(tuple(kf * a for a in row) for row in self.entries))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ShapeError("size mismatch in multiplication")
        bt = other.transpose().entries
        return RatMatrix(self.rows, other.cols,
                         tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in bt)
                               for row in self.entries))

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for row in self.entries for e in row)

    def to_int(self) -> IntMatrix:
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(int(e) for e in row) for row in self.entries))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows) for j in range(i + 1, self.cols))


@dataclass(frozen=True)
class SmithDecomposition:
    """SNF data: ``u @ a @ v`` is the diagonal of ``invariant_factors``.

    ``invariant_factors`` has ``min(rows, cols)`` nonnegative entries with
    d1 | d2 | ... ; trailing zeros pad out rank deficiency.  ``u`` and ``v``
    are unimodular.
    """

    invariant_factors: tuple[int, ...]
    u: IntMatrix
    v: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d != 0)


def _hnf_transform(m: IntMatrix) -> tuple[list[list[int]], list[list[int]]]:
    """Row HNF with transform: returns (h, u) with u unimodular, u @ m = h.

    Zero rows of h sit at the bottom; pivots are positive and entries above
    each pivot are reduced into [0, pivot).
    """
    n, c = m.rows, m.cols
    h = [list(row) for row in m.entries]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    piv = 0
    for col in range(c):
        # Euclid downward in this column until at most one nonzero remains.
        while True:
            nz = [i for i in range(piv, n) if h[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(h[i][col]), i))
            if i0 != piv:
                h[piv], h[i0] = h[i0], h[piv]
                u[piv], u[i0] = u[i0], u[piv]
            p = h[piv][col]
            done = True
            for i in range(piv + 1, n):
                if h[i][col] != 0:
                    q = h[i][col] // p
                    h[i] = [a - q * b for a, b in zip(h[i], h[piv])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[piv])]
                    if h[i][col] != 0:
                        done = False
            if done:
                break
        if piv < n and h[piv][col] != 0:
            if h[piv][col] < 0:
                h[piv] = [-a for a in h[piv]]
                u[piv] = [-a for a in u[piv]]
            p = h[piv][col]
            for i in range(piv):
                q = h[i][col] // p
                if q:
                    h[i] = [a - q * b for a, b in zip(h[i], h[piv])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[piv])]
            piv += 1
    return h, u


def hnf(m: IntMatrix) -> IntMatrix:
    """Row-style Hermite normal form with zero rows dropped.

    The integer row span is preserved exactly; pivots are positive, strictly
    right of the pivot above, and entries above a pivot lie in [0, pivot).
    """
    h, _ = _hnf_transform(m)
    kept = [row for row in h if any(e != 0 for e in row)]
    return IntMatrix.from_rows(kept, cols=m.cols)


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Basis of the saturated integer kernel ``{x : x @ m = 0}``.

    The rows returned extend to a basis of Z^rows, so the kernel lattice is
    primitive (saturated); the basis itself is put in HNF for determinism.
    """
    h, u = _hnf_transform(m)
    kernel_rows = [u[i] for i in range(m.rows) if all(e == 0 for e in h[i])]
    if not kernel_rows:
        return IntMatrix(0, m.rows, ())
    return hnf(IntMatrix.from_rows(kernel_rows, cols=m.rows))


def snf(m: IntMatrix) -> SmithDecomposition:
    """Smith normal form with both unimodular transforms (always computed)."""
    r, c = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row_dst -= q * row_src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    k = 0
    n = min(r, c)
    while k < n:
        # Locate a pivot: smallest nonzero |entry| in the trailing block.
        best = None
        for i in range(k, r):
            for j in range(k, c):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(k, best[0])
        swap_cols(k, best[1])
        # Clear row and column k; repeat while reductions reintroduce entries.
        while True:
            dirty = False
            for i in range(k + 1, r):
                if a[i][k] != 0:
                    q = a[i][k] // a[k][k]
                    add_row(k, i, q)
                    if a[i][k] != 0:
                        swap_rows(k, i)
                        dirty = True
            for j in range(k + 1, c):
                if a[k][j] != 0:
                    q = a[k][j] // a[k][k]
                    add_col(k, j, q)
                    if a[k][j] != 0:
                        swap_cols(k, j)
                        dirty = True
            if not dirty:
                break
        # Enforce divisibility of the trailing block by the pivot.
        d = a[k][k]
        offender = None
        for i in range(k + 1, r):
            for j in range(k + 1, c):
                if a[i][j] % d != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, k, -1)  # row_k += row_offender
            continue
        k += 1

    for i in range(min(r, c)):
        if i < r and a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]
    factors = tuple(a[i][i] if i < r and i < c else 0 for i in range(n))
    return SmithDecomposition(factors, IntMatrix.from_rows(u, cols=r) if r else IntMatrix(0, 0, ()),
                              IntMatrix.from_rows(v, cols=c) if c else IntMatrix(0, 0, ()))


def det(m: IntMatrix | RatMatrix) -> Fraction:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ShapeError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    if isinstance(m, RatMatrix):
        scale = Fraction(1)
        rows = []
        for row in m.entries:
            d = 1
            for e in row:
                d = lcm(d, e.denominator)
            scale *= d
            rows.append([int(e * d) for e in row])
        return Fraction(_bareiss(rows)) / scale
    return Fraction(_bareiss([list(row) for row in m.entries]))


def _bareiss(a: list[list[int]]) -> int:
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve_exact(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    """Solve ``x @ a = b`` exactly; raises :class:`NoSolution` if inconsistent.

    ``a`` is n x m and ``b`` is k x m; the result is k x n.  When the system
    is underdetermined the solution with zero free coordinates is returned,
    which makes the output canonical.
    """
    if a.cols != b.cols:
        raise ShapeError("right-hand side has wrong width")
    n, m_ = a.rows, a.cols
    k = b.rows
    # Transpose to column form: a^T y = b^T with y = x^T.
    aug = [[a.entries[j][i] for j in range(n)] + [b.entries[t][i] for t in range(k)]
           for i in range(m_)]
    pivots: list[int] = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, m_) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][col]
        aug[row] = [e / pv for e in aug[row]]
        for i in range(m_):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [e - f * p for e, p in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
        if row == m_:
            break
    for i in range(row, m_):
        if any(e != 0 for e in aug[i][n:]):
            raise NoSolution("inconsistent linear system")
    x = [[Fraction(0)] * n for _ in range(k)]
    for r_i, col in enumerate(pivots):
        for t in range(k):
            x[t][col] = aug[r_i][n + t]
    return RatMatrix.from_rows(x, cols=n)


def inverse(a: RatMatrix) -> RatMatrix:
    """Exact inverse of a square nonsingular rational matrix."""
    if a.rows != a.cols:
        raise ShapeError("inverse of a non-square matrix")
    try:
        # x @ a = I forces a to have full rank, so x is the two-sided inverse.
        return solve_exact(a, RatMatrix.identity(a.rows))
    except NoSolution:
        raise NoSolution("matrix is singular") from None
