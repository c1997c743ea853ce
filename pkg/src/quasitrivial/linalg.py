"""Exact linear algebra over the rationals.

Everything here works with :class:`fractions.Fraction` entries and returns
new objects; a :class:`Matrix` is never mutated after construction.

Subspaces are passed around as matrices whose *columns* span them.  The
canonical representative of a subspace is the list of nonzero rows of the
reduced row echelon form of the transposed spanning set, so two subspaces
are equal exactly when their canonical bases are equal.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "DimensionError",
    "SingularMatrixError",
    "Matrix",
    "to_fraction",
    "format_rational",
    "parse_rational",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "span_basis",
    "span_sum",
    "span_intersection",
    "block_diag",
]


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class SingularMatrixError(ValueError):
    """An invertible matrix was required."""


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def parse_rational(s: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; floats are refused."""
    s = s.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational literal: {s!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {s!r}")
    return Fraction(p, q)


def format_rational(x: Fraction) -> str:
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Matrix:
    """Immutable dense matrix of Fractions, stored row-major."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(to_fraction(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for row in data:
            if len(row) != ncols:
                raise DimensionError("ragged rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def _wrap(cls, rows: tuple, ncols: int) -> "Matrix":
        # trusted constructor: rows already tuples of Fractions
        m = object.__new__(cls)
        m._rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        z = Fraction(0)
        return cls._wrap(tuple((z,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        z = Fraction(0)
        rows = []
        for i, e in enumerate(entries):
            row = [z] * n
            row[i] = to_fraction(e)
            rows.append(tuple(row))
        return cls._wrap(tuple(rows), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        cols = [tuple(to_fraction(x) for x in c) for c in columns]
        if nrows is None:
            if not cols:
                raise DimensionError("cannot infer row count from no columns")
            nrows = len(cols[0])
        for c in cols:
            if len(c) != nrows:
                raise DimensionError("columns of unequal length")
        rows = tuple(tuple(c[i] for c in cols) for i in range(nrows))
        return cls._wrap(rows, len(cols))

    @classmethod
    def column(cls, entries: Sequence) -> "Matrix":
        return cls([[x] for x in entries], ncols=1)

    # -- access ---------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self._rows)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.col(j) for j in range(self.ncols)]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.ncols, self._rows))

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_rational(x) for x in r) + "]" for r in self._rows)
        return f"Matrix([{body}])"

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    # -- arithmetic -----------------------------------------------------

    def _check_same(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._wrap(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._wrap(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(tuple(tuple(-a for a in r) for r in self._rows), self.ncols)

    def scale(self, c) -> "Matrix":
        c = to_fraction(c)
        return Matrix._wrap(tuple(tuple(c * a for a in r) for r in self._rows), self.ncols)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        out = []
        for r in self._rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(sum((a * c[k] for k, a in nz), Fraction(0)) for c in cols))
        return Matrix._wrap(tuple(out), other.ncols)

    def apply(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Matrix-vector product with a plain sequence."""
        if len(v) != self.ncols:
            raise DimensionError("vector length mismatch")
        nz = [(k, a) for k, a in enumerate(v) if a]
        return tuple(sum((r[k] * a for k, a in nz), Fraction(0)) for r in self._rows)

    @property
    def T(self) -> "Matrix":
        if not self.nrows:
            return Matrix.zeros(self.ncols, 0)
        return Matrix._wrap(tuple(zip(*self._rows)), self.nrows)

    def commutator(self, other: "Matrix") -> "Matrix":
        return self @ other - other @ self

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise DimensionError("hstack needs equal row counts")
        return Matrix._wrap(
            tuple(r + s for r, s in zip(self._rows, other._rows)), self.ncols + other.ncols
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise DimensionError("vstack needs equal column counts")
        return Matrix._wrap(self._rows + other._rows, self.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._wrap(tuple(tuple(self._rows[i][j] for j in cols) for i in rows), len(cols))

    def det(self) -> Fraction:
        if not self.is_square():
            raise DimensionError("determinant of a non-square matrix")
        m = [list(r) for r in self._rows]
        n = len(m)
        d = Fraction(1)
        for c in range(n):
            p = next((i for i in range(c, n) if m[i][c]), None)
            if p is None:
                return Fraction(0)
            if p != c:
                m[c], m[p] = m[p], m[c]
                d = -d
            piv = m[c][c]
            d *= piv
            for i in range(c + 1, n):
                f = m[i][c]
                if f:
                    f /= piv
                    ri, rc = m[i], m[c]
                    for j in range(c, n):
                        if rc[j]:
                            ri[j] -= f * rc[j]
        return d

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        n = self.nrows
        red, piv = rref(self.hstack(Matrix.identity(n)))
        if [p for p in piv if p < n] != list(range(n)):
            raise SingularMatrixError("matrix is singular")
        return red.submatrix(range(n), range(n, 2 * n))

    def is_invertible(self) -> bool:
        return self.is_square() and rank(self) == self.nrows


def block_diag(*blocks: Matrix) -> Matrix:
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    z = Fraction(0)
    rows = []
    off = 0
    for b in blocks:
        for r in b.rows:
            rows.append((z,) * off + r + (z,) * (nc - off - b.ncols))
        off += b.ncols
    return Matrix._wrap(tuple(rows), nc) if rows else Matrix.zeros(nr, nc)


# ---------------------------------------------------------------------------
# elimination


def _rref_rows(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """In-place Gauss-Jordan on a list of row lists; returns (nonzero rows, pivots)."""
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = None
        for i in range(r, nrows):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        inv = 1 / prow[c]
        if inv != 1:
            for j in range(c, ncols):
                if prow[j]:
                    prow[j] *= inv
        support = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i != r:
                row = rows[i]
                f = row[c]
                if f:
                    for j in support:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns of ``m``."""
    rows = [list(r) for r in m.rows]
    red, pivots = _rref_rows(rows, m.ncols)
    z = Fraction(0)
    full = [tuple(r) for r in red] + [(z,) * m.ncols] * (m.nrows - len(red))
    return Matrix._wrap(tuple(full), m.ncols), pivots


def _int_rows(rows: Iterable[Sequence]) -> list[list[int]]:
    out = []
    for r in rows:
        den = 1
        for x in r:
            if x:
                d = x.denominator if isinstance(x, Fraction) else 1
                den = den * d // gcd(den, d)
        ir = [int(x * den) for x in r]
        if any(ir):
            out.append(ir)
    return out


def _rank_int(rows: list[list[int]], ncols: int) -> int:
    # fraction-free elimination with content removal; rows are consumed
    rk = 0
    for c in range(ncols):
        p = None
        for i in range(rk, len(rows)):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        rows[rk], rows[p] = rows[p], rows[rk]
        prow = rows[rk]
        a = prow[c]
        support = [j for j in range(c, ncols) if prow[j]]
        for i in range(rk + 1, len(rows)):
            row = rows[i]
            b = row[c]
            if b:
                g = gcd(a, b)
                fa, fb = a // g, b // g
                for j in range(c, ncols):
                    if row[j]:
                        row[j] *= fa
                for j in support:
                    row[j] -= fb * prow[j]
                cont = reduce(gcd, row, 0)
                if cont > 1:
                    rows[i] = [x // cont for x in row]
        rk += 1
        if rk == len(rows):
            break
    return rk


def rank_of_rows(rows: Iterable[Sequence], ncols: int) -> int:
    """Rank of a matrix given as an iterable of rational rows."""
    return _rank_int(_int_rows(rows), ncols)


def rank(m: Matrix) -> int:
    if m.nrows <= m.ncols:
        return rank_of_rows(m.rows, m.ncols)
    return rank_of_rows(zip(*m.rows), m.nrows)


def nullspace(m: Matrix) -> list[Matrix]:
    """Basis of the right kernel, one column vector per free variable (in order)."""
    red, pivots = rref(m)
    n = m.ncols
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i, f]
        basis.append(Matrix.column(v))
    return basis


def nullity(m: Matrix) -> int:
    return m.ncols - rank(m)


def solve(m: Matrix, b: Matrix) -> Matrix | None:
    """A particular solution of ``m x = b`` or None if ``b`` is not in the column span."""
    if b.nrows != m.nrows:
        raise DimensionError("right-hand side has the wrong length")
    if b.ncols != 1:
        raise DimensionError("right-hand side must be a column vector")
    red, pivots = rref(m.hstack(b))
    n = m.ncols
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = red[i, n]
    return Matrix.column(x)


def span_basis(vectors: Iterable[Sequence], dim: int) -> tuple[tuple[Fraction, ...], ...]:
    """Canonical basis (RREF rows) of the span of ``vectors`` in Q^dim."""
    rows = [[to_fraction(x) for x in v] for v in vectors]
    for r in rows:
        if len(r) != dim:
            raise DimensionError("vector of the wrong length")
    red, _ = _rref_rows(rows, dim)
    return tuple(tuple(r) for r in red)


def _as_span(u: Matrix) -> Matrix:
    basis = span_basis(u.columns(), u.nrows)
    if not basis:
        return Matrix.zeros(u.nrows, 0)
    return Matrix.from_columns(basis, u.nrows)


def span_sum(u: Matrix, w: Matrix) -> Matrix:
    """Canonical spanning matrix (columns) of colspan(u) + colspan(w)."""
    if u.nrows != w.nrows:
        raise DimensionError("subspaces of different ambient spaces")
    return _as_span(u.hstack(w))


def span_intersection(u: Matrix, w: Matrix) -> Matrix:
    """Canonical spanning matrix of colspan(u) ∩ colspan(w).

    Solves ``u a = w b`` through the nullspace of ``[u | -w]``.
    """
    if u.nrows != w.nrows:
        raise DimensionError("subspaces of different ambient spaces")
    k = u.ncols
    vecs = []
    for z in nullspace(u.hstack(-w)):
        a = Matrix.column(z.col(0)[:k])
        vecs.append((u @ a).col(0))
    if not vecs:
        return Matrix.zeros(u.nrows, 0)
    return _as_span(Matrix.from_columns(vecs, u.nrows))
