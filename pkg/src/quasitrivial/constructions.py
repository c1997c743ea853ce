"""Explicit kernel sheaves: rank-2 unbalanced sheaves, rank induction, samplers."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .homology import koszul_ext
from .linalg import Matrix, block_diag, rank_of_rows, to_fraction
from .quot import (
    Module,
    QuotPoint,
    diagonal_point,
    direct_sum,
    is_reduced_support,
    point_ideal,
    reduced_ideal,
    support_decomposition,
    validate,
)
from .stability import STABLE, StabilityVerdict, check_stability


class ConstructionError(ValueError):
    pass


class ExhaustedError(ConstructionError):
    """No stable extension was found within the allowed number of tries."""

    def __init__(self, message: str, verdicts: list):
        super().__init__(message)
        self.verdicts = verdicts


Point = tuple  # (a, b, c) of Fractions


def _point(p) -> Point:
    p = tuple(to_fraction(x) for x in p)
    if len(p) != 3:
        raise ValueError(f"points need three coordinates, got {len(p)}")
    return p


@dataclass(frozen=True)
class Rank2Spec:
    points: tuple[Point, ...]
    alphas: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pts = tuple(_point(p) for p in self.points)
        als = tuple(tuple(to_fraction(x) for x in a) for a in self.alphas)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "alphas", als)
        if len(pts) != len(als):
            raise ConstructionError("need one alpha per point")
        if len(set(pts)) != len(pts):
            raise ConstructionError("points must be pairwise distinct")
        for a in als:
            if len(a) != 2:
                raise ConstructionError("alphas live in Q^2")
        for i in range(len(als)):
            for j in range(i):
                if rank_of_rows([als[i], als[j]], 2) < 2:
                    raise ConstructionError(f"alpha_{j} and alpha_{i} are proportional")
        if len(als) == 1 and not any(als[0]):
            raise ConstructionError("alpha must be nonzero")


def random_rank2_spec(n: int, rng: random.Random, bound: int = 6) -> Rank2Spec:
    """n random points with pairwise independent integer alphas."""
    pts = random_points(n, rng)
    alphas: list[tuple[int, int]] = []
    seen = set()
    while len(alphas) < n:
        a = (rng.randint(-bound, bound), rng.randint(-bound, bound))
        if a == (0, 0):
            continue
        g = gcd(*a)
        line = (a[0] // g, a[1] // g)
        if line < (0, 0):
            line = (-line[0], -line[1])
        if line not in seen:
            seen.add(line)
            alphas.append(a)
    return Rank2Spec(tuple(pts), tuple(alphas))


def build_rank2(spec: Rank2Spec) -> QuotPoint:
    """Diagonal model at the points with framing rows alpha_j."""
    return diagonal_point(spec.points, spec.alphas)


@dataclass(frozen=True)
class ExtensionSpec:
    base: QuotPoint
    new_point: Point
    u: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "new_point", _point(self.new_point))
        object.__setattr__(self, "u", tuple(to_fraction(x) for x in self.u))
        if len(self.u) != self.base.n:
            raise ConstructionError(f"u must have length {self.base.n}")


def _check_base(base: QuotPoint, new_point: Point) -> StabilityVerdict:
    support = support_decomposition(base)
    if any(s.coords == new_point for s in support):
        raise ConstructionError("new point lies in the support of the base")
    verdict = check_stability(base)
    if verdict.status != STABLE or not verdict.certified:
        raise ConstructionError(f"base must be (certified) stable, got {verdict.status}")
    if not is_reduced_support(base, support):
        raise ConstructionError("base must have reduced support")
    return verdict


def _extend(base: QuotPoint, p: Point, u: Sequence[Fraction]) -> QuotPoint:
    a, b, c = p
    n, r = base.n, base.r
    top = base.framing.hstack(Matrix.column(u))
    bottom = Matrix([[0] * r + [1]])
    return QuotPoint(
        block_diag(base.A, Matrix([[a]])),
        block_diag(base.B, Matrix([[b]])),
        block_diag(base.C, Matrix([[c]])),
        top.vstack(bottom),
    )


def extend_by_point(spec: ExtensionSpec) -> QuotPoint:
    """Extension 0 -> F -> E -> I_p -> 0 realized by framing augmentation.

    Q_E = Q_F + k_p, w_i = (v_i, 0) for i < r and w_r = (u, 1).  The first
    r - 1 framing directions recover F; whether E is stable depends on u.
    """
    _check_base(spec.base, spec.new_point)
    return _extend(spec.base, spec.new_point, spec.u)


@dataclass
class ExtensionResult:
    qp: QuotPoint
    tries: int
    verdicts: list = field(default_factory=list)


def _retry(base: QuotPoint, new_point, rng: random.Random, max_tries: int,
           per_round: int = 4) -> ExtensionResult:
    p = _point(new_point)
    _check_base(base, p)
    box = 1
    verdicts = []
    for t in range(1, max_tries + 1):
        u = [Fraction(rng.randint(-box, box)) for _ in range(base.n)]
        qp = _extend(base, p, u)
        v = check_stability(qp)
        verdicts.append(v.status)
        if v.status == STABLE and v.certified:
            return ExtensionResult(qp, t, verdicts)
        if t % per_round == 0:
            box *= 2
    raise ExhaustedError(f"no stable extension in {max_tries} tries", verdicts)


def retry_stable_extension(base: QuotPoint, new_point, seed: int = 0,
                           max_tries: int = 64) -> QuotPoint:
    """Sample u from a growing integer box until the extension is certified stable."""
    return _retry(base, new_point, random.Random(seed), max_tries).qp


def random_points(k: int, rng: random.Random, bound: int = 5) -> list[Point]:
    pts: list[Point] = []
    seen = set()
    while len(pts) < k:
        p = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(3))
        if p not in seen:
            seen.add(p)
            pts.append(p)
    return pts


def iterate_construction_with_stats(r: int, n: int, seed: int = 0,
                                    max_tries: int = 64) -> tuple[QuotPoint, list[int]]:
    """Like :func:`iterate_construction`, also returning the tries per extension step."""
    if r > n:
        raise ConstructionError(f"no semistable sheaves with r > n (r={r}, n={n})")
    if r < 1:
        raise ConstructionError("rank must be positive")
    rng = random.Random(seed)
    pts = random_points(n, rng)
    if r == n:
        qp = point_ideal(pts[0])
        for p in pts[1:]:
            qp = direct_sum(qp, point_ideal(p))
        return qp, []
    qp = reduced_ideal(pts[: n - r + 1])
    tries = []
    for p in pts[n - r + 1:]:
        res = _retry(qp, p, rng, max_tries)
        tries.append(res.tries)
        qp = res.qp
    return qp, tries


def iterate_construction(r: int, n: int, seed: int = 0, max_tries: int = 64) -> QuotPoint:
    """Stable rank-r kernel sheaf with reduced support of length n (r < n).

    Starts from the ideal of n - r + 1 random points and adds one point and
    one rank at a time.  For r = n the polystable sum of point ideals is
    returned.
    """
    return iterate_construction_with_stats(r, n, seed, max_tries)[0]


def count_point_quotient_homs(qp: QuotPoint, probes: Sequence = ()) -> dict:
    """hom(E, I_q) for each support point q, and for each probe point.

    Hom(E, I_q) = Ext^1(Q_E, I_q) = Hom(Q_E, O_q), the module maps from Q_E to
    the one-dimensional module at q.
    """
    module = qp.module()
    out = {}
    for s in support_decomposition(qp):
        out[s.coords] = koszul_ext(module, Module.point(*s.coords)).hom
    for p in probes:
        p = _point(p)
        out[p] = koszul_ext(module, Module.point(*p)).hom
    return out


# ---------------------------------------------------------------------------
# random corpus


def random_monomial_block(k: int, rng: random.Random) -> list[tuple[int, int, int]]:
    """A random order ideal of k monomials (exponent triples) containing 1."""
    mons = [(0, 0, 0)]
    have = {(0, 0, 0)}
    while len(mons) < k:
        cands = set()
        for m in mons:
            for axis in range(3):
                e = list(m)
                e[axis] += 1
                e = tuple(e)
                if e in have:
                    continue
                divisors_ok = all(
                    tuple(e[i] - (i == ax) for i in range(3)) in have
                    for ax in range(3) if e[ax] > 0
                )
                if divisors_ok:
                    cands.add(e)
        e = rng.choice(sorted(cands))
        have.add(e)
        mons.append(e)
    return mons


def monomial_module(mons: Sequence[tuple[int, int, int]], point=(0, 0, 0)) -> Module:
    """k[x,y,z]/I on the standard monomials ``mons``, shifted to ``point``."""
    index = {m: i for i, m in enumerate(mons)}
    k = len(mons)
    mats = []
    for axis, shift in enumerate(_point(point)):
        rows = [[Fraction(0)] * k for _ in range(k)]
        for m, j in index.items():
            e = list(m)
            e[axis] += 1
            i = index.get(tuple(e))
            if i is not None:
                rows[i][j] = Fraction(1)
            rows[j][j] += shift
        mats.append(Matrix(rows))
    return Module(*mats)


def random_partition(n: int, rng: random.Random) -> list[int]:
    parts = []
    left = n
    while left:
        k = rng.randint(1, left)
        parts.append(k)
        left -= k
    return parts


def random_quot_point(n: int, r: int, reduced: bool = True, seed: int = 0,
                      max_tries: int = 1000) -> QuotPoint:
    """Deterministic random valid Quot point (resamples the framing until cyclic)."""
    if n < 1 or r < 1:
        raise ValueError("n and r must be positive")
    rng = random.Random(seed)
    if reduced:
        pts = random_points(n, rng)
        mod = Module(Matrix.diag([p[0] for p in pts]), Matrix.diag([p[1] for p in pts]),
                     Matrix.diag([p[2] for p in pts]))
    else:
        parts = random_partition(n, rng)
        pts = random_points(len(parts), rng)
        mod = None
        for k, p in zip(parts, pts):
            block = monomial_module(random_monomial_block(k, rng), p)
            mod = block if mod is None else mod.direct_sum(block)
    for _ in range(max_tries):
        F = Matrix([[rng.randint(-2, 2) for _ in range(r)] for _ in range(n)])
        qp = QuotPoint(mod.A, mod.B, mod.C, F)
        if validate(qp).ok:
            return qp
    raise ConstructionError("could not find a cyclic framing")
