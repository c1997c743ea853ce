"""Gieseker/GIT (semi)stability of kernel sheaves, Jordan-Hölder data, isomorphism.

For a Quot point with kernel E, a proper nonzero framing subspace W of Q^r
generates a submodule M of Q; the induced subsheaf has rank dim W and
reduced Hilbert polynomial P_X - length(M)/dim W.  So E is unstable iff some
invariant M satisfies ``length(M) * r < dim W(M) * n`` with W(M) nonzero, and
strictly semistable iff the best case is an equality with W(M) proper.

With reduced support every invariant subspace is a sum of eigenlines and the
test is a finite enumeration.  Otherwise a witness search is used and the
verdict is marked uncertified unless it found an actual violation.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import DimensionError, Matrix, format_rational, nullspace, rank_of_rows, span_basis
from .quot import (
    QuotPoint,
    Submodule,
    SupportPoint,
    UnsupportedInputError,
    diagonal_point,
    framing_preimage,
    krylov_closure,
    support_decomposition,
    validate,
)

STABLE = "stable"
SEMISTABLE = "strictly-semistable"
UNSTABLE = "unstable"

MAX_SUBSET_POINTS = 16


class InvalidQuotPointError(ValueError):
    """The data does not define a point of the Quot scheme."""


class NotSemistableError(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    framing_subspace: tuple[tuple[Fraction, ...], ...]  # basis of W inside Q^r
    submodule: Submodule

    def to_json(self) -> dict:
        def vecs(vs):
            return [[format_rational(x) for x in v] for v in vs]

        return {
            "framing_subspace": vecs(self.framing_subspace),
            "submodule": {
                "basis": vecs(self.submodule.basis),
                "length": self.submodule.length,
                "framing_preimage_dim": self.submodule.framing_preimage_dim,
            },
        }


@dataclass(frozen=True)
class StabilityVerdict:
    status: str
    certified: bool
    witness: Witness | None = None

    @property
    def is_semistable(self) -> bool:
        return self.status != UNSTABLE

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "certified": self.certified,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def _require_valid(qp: QuotPoint) -> None:
    rep = validate(qp)
    if not rep.ok:
        raise InvalidQuotPointError(f"invalid Quot point ({rep.violation}): {rep.detail}")


def _witness(qp: QuotPoint, basis) -> Witness:
    basis = span_basis(basis, qp.n)
    W = framing_preimage(qp, basis)
    return Witness(W, Submodule(basis, len(basis), len(W)))


# ---------------------------------------------------------------------------
# reduced support: exact enumeration


@dataclass(frozen=True)
class ReducedData:
    """Eigenline coordinates of a reduced Quot point.

    ``alphas[p]`` is the row of coefficients of v_1..v_r on the eigenline of
    ``support[p]``.
    """

    support: tuple[SupportPoint, ...]
    alphas: tuple[tuple[Fraction, ...], ...]

    @property
    def points(self):
        return [s.coords for s in self.support]


def reduced_data(qp: QuotPoint, support: Sequence[SupportPoint] | None = None) -> ReducedData:
    if support is None:
        support = support_decomposition(qp)
    if any(s.multiplicity != 1 for s in support):
        raise UnsupportedInputError("support is not reduced")
    lines = [s.basis[0] for s in support]
    P = Matrix.from_columns(lines, qp.n)
    coords = P.inverse() @ qp.framing
    return ReducedData(tuple(support), coords.rows)


def subset_preimage_dims(data: ReducedData) -> list[int]:
    """d_S = dim W(M_S) for every subset S of support points, indexed by bitmask."""
    n = len(data.alphas)
    r = len(data.alphas[0]) if n else 0
    dims = [0] * (1 << n)
    for mask in range(1 << n):
        outside = [data.alphas[p] for p in range(n) if not mask >> p & 1]
        dims[mask] = r - rank_of_rows(outside, r)
    return dims


def _reduced_verdict(qp: QuotPoint, data: ReducedData) -> StabilityVerdict:
    n, r = qp.n, qp.r
    full = (1 << n) - 1
    dims = subset_preimage_dims(data)
    worst = None  # (length, d, mask) minimizing length/d among violations
    tie = None  # equality subset: minimal d, then smallest mask
    for mask in range(full):
        d = dims[mask]
        if d == 0:
            continue
        assert d < r, "a proper invariant subspace contains every framing vector"
        length = bin(mask).count("1")
        if length * r < d * n:
            if worst is None or length * worst[1] < worst[0] * d:
                worst = (length, d, mask)
        elif length * r == d * n:
            if tie is None or d < tie[0]:
                tie = (d, mask)
    if worst is not None:
        return StabilityVerdict(UNSTABLE, True, _witness(qp, _lines(data, worst[2])))
    if tie is not None:
        return StabilityVerdict(SEMISTABLE, True, _witness(qp, _lines(data, tie[1])))
    return StabilityVerdict(STABLE, True)


def _lines(data: ReducedData, mask: int):
    return [s.basis[0] for p, s in enumerate(data.support) if mask >> p & 1]


# ---------------------------------------------------------------------------
# general case: witness search


def _candidate_submodules(qp: QuotPoint, samples: int, seed: int, cap: int = 256):
    r = qp.r
    seeds = []
    for lam in itertools.product((0, 1, -1), repeat=r):
        nz = [x for x in lam if x]
        if nz and nz[0] == 1:
            seeds.append(lam)
    rng = random.Random(seed)
    for _ in range(samples):
        seeds.append(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(r)))
    found: dict = {(): krylov_closure(qp, [])}
    for lam in seeds:
        v = qp.framing.apply([Fraction(x) for x in lam])
        sub = krylov_closure(qp, [v])
        found.setdefault(sub.basis, sub)
    # close under sums of submodules
    frontier = list(found.values())
    while frontier and len(found) < cap:
        new = []
        current = list(found.values())
        for a in frontier:
            for b in current:
                s = krylov_closure(qp, a.basis + b.basis)
                if s.basis not in found and len(found) < cap:
                    found[s.basis] = s
                    new.append(s)
        frontier = new
    return list(found.values())


def _search_verdict(qp: QuotPoint, samples: int, seed: int) -> StabilityVerdict:
    n, r = qp.n, qp.r
    worst = None
    tie = None
    for sub in _candidate_submodules(qp, samples, seed):
        d = sub.framing_preimage_dim
        if d == 0 or sub.length == n:
            continue
        if sub.length * r < d * n:
            key = (Fraction(sub.length, d), sub.basis)
            if worst is None or key < worst[0]:
                worst = (key, sub)
        elif sub.length * r == d * n:
            key = (d, sub.basis)
            if tie is None or key < tie[0]:
                tie = (key, sub)
    if worst is not None:
        return StabilityVerdict(UNSTABLE, True, _witness(qp, worst[1].basis))
    if tie is not None:
        return StabilityVerdict(SEMISTABLE, False, _witness(qp, tie[1].basis))
    return StabilityVerdict(STABLE, False)


def check_stability(
    qp: QuotPoint,
    samples: int = 16,
    seed: int = 0,
    max_points: int = MAX_SUBSET_POINTS,
) -> StabilityVerdict:
    """Decide (semi)stability of the kernel sheaf of ``qp``.

    Exact for reduced support with at most ``max_points`` points, for r = 1,
    and whenever a violation is found; otherwise ``certified`` is False.
    """
    _require_valid(qp)
    if qp.r == 1:
        # no proper nonzero framing subspace exists
        return StabilityVerdict(STABLE, True)
    kernel = [z.col(0) for z in nullspace(qp.framing)]
    if kernel:
        # O^dim(kernel) sits inside E
        return StabilityVerdict(UNSTABLE, True, _witness(qp, []))
    try:
        support = support_decomposition(qp)
    except UnsupportedInputError:
        support = None
    if support is not None and len(support) == qp.n and qp.n <= max_points:
        return _reduced_verdict(qp, reduced_data(qp, support))
    return _search_verdict(qp, samples, seed)


# ---------------------------------------------------------------------------
# Jordan-Hölder filtrations


@dataclass(frozen=True)
class Factor:
    """A stable graded piece: its rank, support multiset and model data."""

    rank: int
    points: tuple[tuple[Fraction, ...], ...]
    qp: QuotPoint

    @property
    def length(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "length": self.length,
            "support": [[format_rational(x) for x in p] for p in self.points],
        }


@dataclass(frozen=True)
class JHFiltration:
    factors: tuple[Factor, ...]

    @property
    def is_trivial(self) -> bool:
        """One-step filtration 0 < E, i.e. E is stable."""
        return len(self.factors) == 1

    def graded(self) -> tuple:
        return tuple(sorted((f.rank, f.points) for f in self.factors))

    def to_json(self) -> dict:
        return {"trivial": self.is_trivial, "factors": [f.to_json() for f in self.factors]}


def _support_points(qp: QuotPoint) -> tuple:
    out = []
    for s in support_decomposition(qp):
        out.extend([s.coords] * s.multiplicity)
    return tuple(sorted(out))


def _split(data: ReducedData, mask: int, W: Sequence[Sequence[Fraction]]):
    """Sub and quotient Quot points for the subobject (W, M_S)."""
    n = len(data.alphas)
    r = len(data.alphas[0])
    inside = [p for p in range(n) if mask >> p & 1]
    outside = [p for p in range(n) if not mask >> p & 1]
    Lam = Matrix.from_columns(W, r)
    sub_rows = [Matrix([data.alphas[p]]) @ Lam for p in inside]
    sub = diagonal_point([data.support[p].coords for p in inside], [m.row(0) for m in sub_rows])
    pivots = [next(j for j, x in enumerate(w) if x) for w in W]
    keep = [j for j in range(r) if j not in pivots]
    quo = diagonal_point(
        [data.support[p].coords for p in outside],
        [[data.alphas[p][j] for j in keep] for p in outside],
    )
    return sub, quo


def _jh_factors(qp: QuotPoint) -> list[Factor]:
    verdict = check_stability(qp)
    if verdict.status == UNSTABLE:
        raise NotSemistableError("no JH filtration for unstable sheaf")
    if verdict.status == STABLE:
        if not verdict.certified:
            raise UnsupportedInputError("stability is not certified for this input")
        return [Factor(qp.r, _support_points(qp), qp)]
    if not verdict.certified:
        raise UnsupportedInputError("JH filtrations need certified (reduced) input")
    data = reduced_data(qp)
    dims = subset_preimage_dims(data)
    n, r = qp.n, qp.r
    best = None
    for mask in range((1 << n) - 1):
        d = dims[mask]
        if 1 <= d < r and bin(mask).count("1") * r == d * n:
            if best is None or d < best[0]:
                best = (d, mask)
    mask = best[1]
    lines = _lines(data, mask)
    W = framing_preimage(qp, span_basis(lines, n))
    # framing_preimage is computed in the original basis of Q^r, which is the
    # same basis the eigenline coordinates use
    sub, quo = _split(data, mask, W)
    assert krylov_closure(sub, sub.vectors).length == sub.n
    return _jh_factors(sub) + _jh_factors(quo)


def jordan_holder(qp: QuotPoint) -> JHFiltration:
    """A Jordan-Hölder filtration, as its ordered list of stable factors.

    Among equality subobjects the one with the smallest framing rank is split
    off first, ties going to the smallest subset bitmask; only the graded
    object is independent of this choice.
    """
    return JHFiltration(tuple(_jh_factors(qp)))


def s_equivalence_class(qp: QuotPoint) -> tuple:
    """Sorted multiset of the support multisets of the JH factors."""
    return tuple(sorted(f.points for f in jordan_holder(qp).factors))


def polystable_representative(qp: QuotPoint) -> QuotPoint:
    """Direct sum of the JH factors."""
    from .quot import direct_sum

    factors = jordan_holder(qp).factors
    out = factors[0].qp
    for f in factors[1:]:
        out = direct_sum(out, f.qp)
    return out


# ---------------------------------------------------------------------------
# isomorphism


@dataclass(frozen=True)
class IsoResult:
    """``isomorphic`` is None when the bounded search was inconclusive."""

    isomorphic: bool | None
    f: Matrix | None = None
    g: Matrix | None = None

    def __bool__(self) -> bool:
        return bool(self.isomorphic)

    def to_json(self) -> dict:
        out = {"isomorphic": self.isomorphic}
        if self.f is not None:
            out["f"] = [[format_rational(x) for x in row] for row in self.f.rows]
            out["g"] = [[format_rational(x) for x in row] for row in self.g.rows]
        return out


ISO_GRID = 2
ISO_MAX_COMBINATIONS = 10_000


def isomorphism_space(qp1: QuotPoint, qp2: QuotPoint) -> list[tuple[Matrix, Matrix]]:
    """Basis of pairs (f, g) with f X1 = X2 f for X in A,B,C and f F1 = F2 g."""
    if (qp1.n, qp1.r) != (qp2.n, qp2.r):
        raise DimensionError("isomorphism test needs equal (n, r)")
    n, r = qp1.n, qp1.r
    nf = n * n
    nvar = nf + r * r
    rows = []

    def fi(i, j):
        return i * n + j

    for X1, X2 in zip(qp1.operators, qp2.operators):
        for i in range(n):
            for k in range(n):
                row = [Fraction(0)] * nvar
                for j in range(n):
                    row[fi(i, j)] += X1[j, k]
                    row[fi(j, k)] -= X2[i, j]
                rows.append(row)
    F1, F2 = qp1.framing, qp2.framing
    for a in range(n):
        for i in range(r):
            row = [Fraction(0)] * nvar
            for b in range(n):
                row[fi(a, b)] += F1[b, i]
            for j in range(r):
                row[nf + j * r + i] -= F2[a, j]
            rows.append(row)
    basis = []
    for z in nullspace(Matrix(rows, nvar)):
        v = z.col(0)
        f = Matrix([v[i * n:(i + 1) * n] for i in range(n)])
        g = Matrix([v[nf + j * r: nf + (j + 1) * r] for j in range(r)])
        basis.append((f, g))
    return basis


def is_isomorphic(qp1: QuotPoint, qp2: QuotPoint) -> IsoResult:
    """Decide whether the two kernel sheaves are isomorphic.

    The solution space of the linear conditions is searched over integer
    combinations with coefficients in [-2, 2] (at most 10,000 of them) for a
    pair with det(f) det(g) != 0.  False is returned when the space is zero,
    when the supports differ, or when the whole grid was searched and has
    more than n + r values per coordinate (a nonzero polynomial of that
    degree cannot vanish on it).  Otherwise a failed search gives None.
    """
    basis = isomorphism_space(qp1, qp2)
    if not basis:
        return IsoResult(False)
    try:
        if _support_points(qp1) != _support_points(qp2):
            return IsoResult(False)
    except UnsupportedInputError:
        pass
    n, r = qp1.n, qp1.r
    width = 2 * ISO_GRID + 1
    coeff_range = range(-ISO_GRID, ISO_GRID + 1)
    for coeffs in itertools.islice(itertools.product(coeff_range, repeat=len(basis)),
                                   ISO_MAX_COMBINATIONS):
        if not any(coeffs):
            continue
        f = Matrix.zeros(n, n)
        g = Matrix.zeros(r, r)
        for c, (bf, bg) in zip(coeffs, basis):
            if c:
                f = f + bf.scale(c)
                g = g + bg.scale(c)
        if f.det() != 0 and g.det() != 0:
            return IsoResult(True, f, g)
    if width ** len(basis) <= ISO_MAX_COMBINATIONS and width > n + r:
        return IsoResult(False)
    return IsoResult(None)
