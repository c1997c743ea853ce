"""Commuting-matrix model of the Quot scheme of points on affine 3-space.

A point of Quot(O^r, n) is a module Q = Q^n over Q[x, y, z], given by three
commuting n x n matrices, together with r framing vectors generating Q.
The kernel sheaf E of O^r -> Q is never built explicitly; every question
about E is answered from this data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .linalg import (
    DimensionError,
    Matrix,
    SingularMatrixError,
    block_diag,
    format_rational,
    nullspace,
    rank_of_rows,
    rref,
    span_basis,
    to_fraction,
)

Vector = tuple  # tuple of Fractions


class UnsupportedInputError(ValueError):
    """The joint spectrum of the module is not rational."""


@dataclass(frozen=True)
class QuotPoint:
    """Commuting triple (A, B, C) on Q^n plus framing vectors v_1..v_r.

    ``framing`` is the n x r matrix whose i-th column is v_i.
    """

    A: Matrix
    B: Matrix
    C: Matrix
    framing: Matrix

    def __post_init__(self):
        n = self.A.nrows
        for name in ("A", "B", "C"):
            m = getattr(self, name)
            if m.shape != (n, n):
                raise DimensionError(f"{name} has shape {m.shape}, expected {(n, n)}")
        if self.framing.nrows != n:
            raise DimensionError(f"framing vectors have length {self.framing.nrows}, expected {n}")

    @classmethod
    def build(cls, A, B, C, vectors: Sequence[Sequence]) -> "QuotPoint":
        """Convenience constructor from nested lists and a list of framing vectors."""
        A, B, C = (m if isinstance(m, Matrix) else Matrix(m) for m in (A, B, C))
        if not vectors:
            raise DimensionError("at least one framing vector is required")
        return cls(A, B, C, Matrix.from_columns(vectors, A.nrows))

    @property
    def n(self) -> int:
        return self.A.nrows

    @property
    def r(self) -> int:
        return self.framing.ncols

    @property
    def operators(self) -> tuple[Matrix, Matrix, Matrix]:
        return self.A, self.B, self.C

    @property
    def vectors(self) -> list[Vector]:
        return self.framing.columns()

    def module(self) -> "Module":
        return Module(self.A, self.B, self.C)

    def to_json(self) -> dict:
        def mat(m):
            return [[format_rational(x) for x in row] for row in m.rows]

        return {
            "n": self.n,
            "r": self.r,
            "A": mat(self.A),
            "B": mat(self.B),
            "C": mat(self.C),
            "framing": [[format_rational(x) for x in v] for v in self.vectors],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuotPoint":
        for key in ("n", "r", "A", "B", "C", "framing"):
            if key not in data:
                raise KeyError(f"missing field {key!r}")
        n, r = data["n"], data["r"]
        if any(not isinstance(x, int) or isinstance(x, bool) or x < 1 for x in (n, r)):
            raise ValueError("fields 'n' and 'r' must be positive integers")

        def entries(key, count, length):
            rows = data[key]
            if not isinstance(rows, list) or len(rows) != count or any(
                    not isinstance(row, list) or len(row) != length for row in rows):
                raise DimensionError(f"field {key!r} must be a {count}x{length} array")
            try:
                return [[to_fraction(x) for x in row] for row in rows]
            except (TypeError, ValueError) as exc:
                raise ValueError(f"field {key!r}: {exc}") from None

        A, B, C = (Matrix(entries(key, n, n)) for key in ("A", "B", "C"))
        return cls(A, B, C, Matrix.from_columns(entries("framing", r, n), n))


@dataclass(frozen=True)
class Module:
    """A finite-length Q[x,y,z]-module given by commuting matrices (no framing)."""

    A: Matrix
    B: Matrix
    C: Matrix

    @property
    def n(self) -> int:
        return self.A.nrows

    @property
    def operators(self) -> tuple[Matrix, Matrix, Matrix]:
        return self.A, self.B, self.C

    @classmethod
    def point(cls, a, b, c) -> "Module":
        """The one-dimensional module at the point (a, b, c)."""
        return cls(Matrix([[a]]), Matrix([[b]]), Matrix([[c]]))

    def direct_sum(self, other: "Module") -> "Module":
        return Module(block_diag(self.A, other.A), block_diag(self.B, other.B),
                      block_diag(self.C, other.C))


def _as_module(m) -> Module:
    if isinstance(m, Module):
        return m
    if isinstance(m, QuotPoint):
        return m.module()
    raise TypeError(f"expected module data, got {type(m).__name__}")


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: str | None = None  # "commutator" | "cyclicity"
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"ok": self.ok}
        if not self.ok:
            out["violation"] = self.violation
            out["witness"] = self.detail
        return out


def commutator_witness(A: Matrix, B: Matrix, C: Matrix) -> dict | None:
    """First nonzero commutator entry, or None if the triple commutes."""
    for (x, X), (y, Y) in ((("A", A), ("B", B)), (("A", A), ("C", C)), (("B", B), ("C", C))):
        K = X.commutator(Y)
        for i, row in enumerate(K.rows):
            for j, e in enumerate(row):
                if e:
                    return {"pair": x + y, "row": i, "col": j, "value": format_rational(e)}
    return None


def validate(qp: QuotPoint) -> ValidationReport:
    """Check commutativity and cyclicity of the framing.

    Shape problems raise :class:`DimensionError` (at construction time);
    invariant violations are reported, not raised.
    """
    w = commutator_witness(*qp.operators)
    if w is not None:
        return ValidationReport(False, "commutator", w)
    sub = krylov_closure(qp, qp.vectors)
    if sub.length < qp.n:
        return ValidationReport(
            False,
            "cyclicity",
            {"closure_dim": sub.length,
             "closure_basis": [[format_rational(x) for x in v] for v in sub.basis]},
        )
    return ValidationReport(True)


# ---------------------------------------------------------------------------
# invariant subspaces


class _Echelon:
    """Incrementally grown RREF basis used for saturation."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    def reduce(self, v: Sequence[Fraction]) -> list[Fraction]:
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            f = v[p]
            if f:
                for j in range(p, self.dim):
                    if row[j]:
                        v[j] -= f * row[j]
        return v

    def add(self, v: Sequence[Fraction]) -> bool:
        v = self.reduce(v)
        p = next((j for j, x in enumerate(v) if x), None)
        if p is None:
            return False
        inv = 1 / v[p]
        v = [x * inv for x in v]
        for row in self.rows:
            f = row[p]
            if f:
                for j in range(p, self.dim):
                    if v[j]:
                        row[j] -= f * v[j]
        k = 0
        while k < len(self.pivots) and self.pivots[k] < p:
            k += 1
        self.rows.insert(k, v)
        self.pivots.insert(k, p)
        return True

    def __contains__(self, v) -> bool:
        return not any(self.reduce(v))

    def basis(self) -> tuple[Vector, ...]:
        return tuple(tuple(r) for r in self.rows)


@dataclass(frozen=True)
class Submodule:
    """An A,B,C-invariant subspace M of Q^n.

    ``framing_preimage_dim`` is dim W(M), where W(M) is the space of framing
    combinations lambda with sum(lambda_i v_i) in M.
    """

    basis: tuple[Vector, ...]
    length: int
    framing_preimage_dim: int


def framing_preimage_dim(qp: QuotPoint, basis: Sequence[Vector]) -> int:
    """dim W(M) = r - rank of the framing modulo M."""
    rows = list(basis) + qp.vectors
    return qp.r - (rank_of_rows(rows, qp.n) - len(basis))


def framing_preimage(qp: QuotPoint, basis: Sequence[Vector]) -> tuple[Vector, ...]:
    """Canonical basis of W(M) inside Q^r."""
    k = len(basis)
    if k:
        cols = list(basis) + qp.vectors
        system = Matrix.from_columns(cols, qp.n)
    else:
        system = qp.framing
    vecs = [z.col(0)[k:] for z in nullspace(system)]
    return span_basis(vecs, qp.r)


def submodule(qp: QuotPoint, basis: Iterable[Sequence]) -> Submodule:
    b = span_basis(basis, qp.n)
    return Submodule(b, len(b), framing_preimage_dim(qp, b))


def krylov_closure(qp: QuotPoint | Module, seeds: Iterable[Sequence]) -> Submodule:
    """Smallest A,B,C-invariant subspace containing ``seeds``.

    Worklist saturation: every vector that enlarges the span is pushed through
    the three operators; at most n enlargements happen.
    """
    mod = _as_module(qp)
    ech = _Echelon(mod.n)
    work = [tuple(to_fraction(x) for x in s) for s in seeds]
    for s in work:
        if len(s) != mod.n:
            raise DimensionError("seed vector of the wrong length")
    while work:
        v = work.pop()
        if ech.add(v):
            work.extend(X.apply(v) for X in mod.operators)
    basis = ech.basis()
    fpd = framing_preimage_dim(qp, basis) if isinstance(qp, QuotPoint) else 0
    return Submodule(basis, len(basis), fpd)


def is_invariant(mod: QuotPoint | Module, basis: Sequence[Vector]) -> bool:
    mod = _as_module(mod)
    ech = _Echelon(mod.n)
    for v in basis:
        ech.add(v)
    return all(X.apply(v) in ech for X in mod.operators for v in basis)


# ---------------------------------------------------------------------------
# support decomposition


@dataclass(frozen=True)
class SupportPoint:
    coords: tuple[Fraction, Fraction, Fraction]
    multiplicity: int
    basis: tuple[Vector, ...]  # canonical basis of the joint generalized eigenspace

    def coords_json(self) -> list[str]:
        return [format_rational(x) for x in self.coords]


def charpoly(M: Matrix) -> list[Fraction]:
    """Characteristic polynomial det(tI - M), coefficients from the constant term up.

    Faddeev-LeVerrier recursion, exact over the rationals.
    """
    n = M.nrows
    coeffs = [Fraction(0)] * n + [Fraction(1)]
    Mk = Matrix.zeros(n, n)
    I = Matrix.identity(n)
    c = Fraction(1)
    for k in range(1, n + 1):
        Mk = M @ (Mk + I.scale(c))
        c = -sum(Mk[i, i] for i in range(n)) / k
        coeffs[n - k] = c
    return coeffs


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    lb = b[-1]
    while len(a) >= len(b) and any(a):
        f = a[-1] / lb
        d = len(a) - len(b)
        q[d] = f
        for i, bc in enumerate(b):
            a[i + d] -= f * bc
        a = _poly_trim(a[:-1]) if len(a) > 1 else a
    return q, _poly_trim(a) if a else [Fraction(0)]


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _poly_trim(a), _poly_trim(b)
    while any(b):
        _, r = _poly_divmod(a, b)
        a, b = b, r
    return [x / a[-1] for x in a]


def _poly_eval(p: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _divisors(m: int) -> list[int]:
    m = abs(m)
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def _primitive(p: Sequence[Fraction]) -> list[int]:
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = reduce(gcd, ints, 0) or 1
    return [x // g for x in ints]


def rational_roots(p: Sequence[Fraction]) -> list[Fraction] | None:
    """Distinct rational roots of ``p``, or None if ``p`` does not split over Q.

    Roots of the squarefree part are guessed numerically and confirmed by
    exact evaluation; whatever is left is searched with the rational root
    theorem when its coefficients are small enough to factor.
    """
    p = _poly_trim([to_fraction(c) for c in p])
    if len(p) == 1:
        return []
    deriv = _poly_trim([c * i for i, c in enumerate(p)][1:])
    sqfree, _ = _poly_divmod(p, _poly_gcd(p, deriv))
    sqfree = [Fraction(c) for c in _primitive(_poly_trim(sqfree))]
    deg = len(sqfree) - 1
    lead = abs(int(sqfree[-1]))
    roots: list[Fraction] = []
    for z in np.roots([float(c) for c in reversed(sqfree)]):
        if abs(z.imag) > 1e-6 * max(1.0, abs(z.real)):
            continue
        for x in (Fraction(round(z.real)), Fraction(float(z.real)).limit_denominator(lead)):
            if x not in roots and _poly_eval(sqfree, x) == 0:
                roots.append(x)
                break
    if len(roots) < deg:
        left = sqfree
        for x in roots:
            left, _ = _poly_divmod(left, [-x, Fraction(1)])
        left = _primitive(_poly_trim(left))
        if left[0] == 0:
            roots.append(Fraction(0))
            left = left[1:]
        if len(left) > 1 and max(abs(left[0]), abs(left[-1])) < 10**10:
            lf = [Fraction(c) for c in left]
            for num in _divisors(left[0]):
                for den in _divisors(left[-1]):
                    for x in (Fraction(num, den), Fraction(-num, den)):
                        if x not in roots and _poly_eval(lf, x) == 0:
                            roots.append(x)
    if len(roots) != deg:
        return None
    return sorted(roots)


def _restrict(M: Matrix, P: Matrix) -> Matrix:
    """Matrix of M on the invariant subspace spanned by the columns of P."""
    return _solve_many(P, M @ P)


def _solve_many(P: Matrix, Y: Matrix) -> Matrix:
    # P has full column rank
    k = P.ncols
    red, piv = rref(P.hstack(Y))
    if piv[:k] != list(range(k)) or (len(piv) > k):
        raise ValueError("columns are not in the span")
    return red.submatrix(range(k), range(k, k + Y.ncols))


def _generalized_eigenspaces(M: Matrix) -> list[tuple[Fraction, Matrix]]:
    """Pairs (eigenvalue, basis matrix of the generalized eigenspace) for rational M."""
    n = M.nrows
    roots = rational_roots(charpoly(M))
    if roots is None:
        raise UnsupportedInputError("characteristic polynomial does not split over the rationals")
    out = []
    for lam in roots:
        N = M - Matrix.identity(n).scale(lam)
        Nk = N
        for _ in range(n - 1):
            Nk = Nk @ N
        vecs = [v.col(0) for v in nullspace(Nk)]
        basis = span_basis(vecs, n)
        out.append((lam, Matrix.from_columns(basis, n)))
    if sum(P.ncols for _, P in out) != n:
        raise UnsupportedInputError("spectrum is not fully rational")
    return out


def support_decomposition(qp: QuotPoint | Module) -> list[SupportPoint]:
    """Joint generalized eigenspaces of (A, B, C), sorted by coordinates."""
    mod = _as_module(qp)
    n = mod.n
    blocks: list[tuple[tuple[Fraction, ...], Matrix]] = [((), Matrix.identity(n))]
    for X in mod.operators:
        nxt = []
        for coords, P in blocks:
            XP = _restrict(X, P)
            for lam, Q in _generalized_eigenspaces(XP):
                nxt.append((coords + (lam,), P @ Q))
        blocks = nxt
    pts = []
    for coords, P in blocks:
        basis = span_basis(P.columns(), n)
        pts.append(SupportPoint(coords, len(basis), basis))
    pts.sort(key=lambda s: s.coords)
    return pts


def is_reduced_support(qp: QuotPoint | Module, support: list[SupportPoint] | None = None) -> bool:
    """True iff the module splits into distinct one-dimensional point modules."""
    if support is None:
        support = support_decomposition(qp)
    return all(s.multiplicity == 1 for s in support)


def support_multiset(qp: QuotPoint | Module) -> tuple[tuple[Fraction, ...], ...]:
    """Support points repeated by multiplicity, sorted."""
    out = []
    for s in support_decomposition(qp):
        out.extend([s.coords] * s.multiplicity)
    return tuple(out)


# ---------------------------------------------------------------------------
# Hilbert polynomials


@dataclass(frozen=True)
class HilbertPoly:
    """Polynomial in t with rational coefficients, constant term first."""

    coeffs: tuple[Fraction, ...]

    def __call__(self, t) -> Fraction:
        return _poly_eval(list(self.coeffs), to_fraction(t))

    @property
    def degree(self) -> int:
        c = _poly_trim(list(self.coeffs))
        return len(c) - 1 if any(c) else -1


def hilbert_poly_point(d: int = 3) -> HilbertPoly:
    """P_X(t) = binom(t + d, d), the Hilbert polynomial of projective d-space."""
    p = [Fraction(1)]
    for k in range(1, d + 1):
        # multiply by (t + k) / k
        q = [Fraction(0)] * (len(p) + 1)
        for i, c in enumerate(p):
            q[i] += c
            q[i + 1] += c / k
        p = q
    return HilbertPoly(tuple(p))


def hilbert_poly_kernel(r: int, n: int, d: int = 3) -> HilbertPoly:
    """Hilbert polynomial r*P_X(t) - n of the kernel of O^r -> Q with length(Q) = n."""
    px = hilbert_poly_point(d).coeffs
    c = [r * x for x in px]
    c[0] -= n
    return HilbertPoly(tuple(c))


def compare_reduced(p: HilbertPoly, s: int, q: HilbertPoly, r: int) -> str:
    """Compare p/s with q/r from the top coefficient down: 'less', 'equal' or 'greater'."""
    if s <= 0 or r <= 0:
        raise ValueError("ranks must be positive")
    m = max(len(p.coeffs), len(q.coeffs))
    a = list(p.coeffs) + [Fraction(0)] * (m - len(p.coeffs))
    b = list(q.coeffs) + [Fraction(0)] * (m - len(q.coeffs))
    for x, y in zip(reversed(a), reversed(b)):
        x, y = x / s, y / r
        if x != y:
            return "greater" if x > y else "less"
    return "equal"


# ---------------------------------------------------------------------------
# group actions and sums


def apply_glr(qp: QuotPoint, g: Matrix) -> QuotPoint:
    """Action of g in GL_r: new v_i = sum_j g[j, i] v_j."""
    if g.shape != (qp.r, qp.r):
        raise DimensionError(f"g must be {qp.r}x{qp.r}")
    if not g.is_invertible():
        raise SingularMatrixError("g is singular")
    return QuotPoint(qp.A, qp.B, qp.C, qp.framing @ g)


def conjugate(qp: QuotPoint, h: Matrix) -> QuotPoint:
    """Change of basis of Q^n: X -> h X h^-1, v_i -> h v_i."""
    if h.shape != (qp.n, qp.n):
        raise DimensionError(f"h must be {qp.n}x{qp.n}")
    hinv = h.inverse()
    return QuotPoint(h @ qp.A @ hinv, h @ qp.B @ hinv, h @ qp.C @ hinv, h @ qp.framing)


def direct_sum(qp1: QuotPoint, qp2: QuotPoint) -> QuotPoint:
    """Quot point of E1 + E2: block-diagonal operators and block framing."""
    return QuotPoint(
        block_diag(qp1.A, qp2.A),
        block_diag(qp1.B, qp2.B),
        block_diag(qp1.C, qp2.C),
        block_diag(qp1.framing, qp2.framing),
    )


def point_ideal(point: Sequence) -> QuotPoint:
    """Rank-1 data of the ideal sheaf of a single reduced point."""
    a, b, c = (to_fraction(x) for x in point)
    return QuotPoint(Matrix([[a]]), Matrix([[b]]), Matrix([[c]]), Matrix([[1]]))


def reduced_ideal(points: Sequence[Sequence]) -> QuotPoint:
    """Rank-1 data of the ideal sheaf of distinct reduced points."""
    return diagonal_point(points, [[1] for _ in points])


def diagonal_point(points: Sequence[Sequence], alphas: Sequence[Sequence]) -> QuotPoint:
    """Reduced model: diagonal operators at ``points``; row j of the framing is alphas[j]."""
    pts = [tuple(to_fraction(x) for x in p) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("support points must be distinct")
    if len(alphas) != len(pts):
        raise DimensionError("one framing row per point is required")
    A = Matrix.diag([p[0] for p in pts])
    B = Matrix.diag([p[1] for p in pts])
    C = Matrix.diag([p[2] for p in pts])
    return QuotPoint(A, B, C, Matrix(alphas))
