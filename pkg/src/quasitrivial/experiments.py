"""Batch checks of the emptiness, symmetric-product and dimension statements.

Each ``verify_*`` function returns a JSON-ready report with an ``ok`` flag and
the list of failures; reports depend only on the arguments.
"""
from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

from .constructions import (
    count_point_quotient_homs,
    iterate_construction_with_stats,
    monomial_module,
    random_monomial_block,
    random_points,
    random_partition,
    random_quot_point,
)
from .homology import (
    adhm_tangent,
    cohomology_of_kernel,
    commuting_tangent_dim,
    ext1_E_E,
    formula_ext1_component,
    hom_E_Q,
)
from .linalg import Matrix, format_rational
from .quot import QuotPoint, diagonal_point, direct_sum, point_ideal, support_multiset
from .stability import (
    SEMISTABLE,
    STABLE,
    UNSTABLE,
    check_stability,
    is_isomorphic,
    s_equivalence_class,
)


def _subseeds(seed: int, k: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.randrange(2 ** 31) for _ in range(k)]


def _map(fn, args: list, jobs: int) -> list:
    if jobs <= 1 or len(args) < 2:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, args, chunksize=max(1, len(args) // (4 * jobs))))


def _pts_json(points) -> list:
    return [[format_rational(x) for x in p] for p in points]


# ---------------------------------------------------------------------------


def _empty_trial(args) -> dict | None:
    r, n, t, s = args
    qp = random_quot_point(n, r, reduced=(t % 2 == 0), seed=s)
    v = check_stability(qp)
    if v.status != UNSTABLE:
        return {"trial": t, "seed": s, "status": v.status, "qp": qp.to_json()}
    return None


def verify_empty(r: int, n: int, trials: int = 200, seed: int = 0, jobs: int = 1) -> dict:
    """Every valid Quot point with r > n must be unstable."""
    if r <= n:
        raise ValueError(f"emptiness is only claimed for r > n (got r={r}, n={n})")
    args = [(r, n, t, s) for t, s in enumerate(_subseeds(seed, trials))]
    bad = [x for x in _map(_empty_trial, args, jobs) if x is not None]
    return {"check": "empty", "r": r, "n": n, "trials": trials, "seed": seed,
            "counterexamples": bad, "ok": not bad}


# ---------------------------------------------------------------------------


def _random_alphas(n: int, r: int, rng: random.Random) -> list[list[int]]:
    rows = []
    for _ in range(n):
        a = [0] * r
        while not any(a):
            a = [rng.randint(-2, 2) for _ in range(r)]
        rows.append(a)
    return rows


def _polystable(points) -> QuotPoint:
    qp = point_ideal(points[0])
    for p in points[1:]:
        qp = direct_sum(qp, point_ideal(p))
    return qp


def _symn_trial(args) -> dict:
    n, t, s = args
    rng = random.Random(s)
    pts = random_points(n, rng)
    qp = diagonal_point(pts, _random_alphas(n, n, rng))
    v = check_stability(qp)
    out = {"trial": t, "status": v.status, "failures": []}
    fail = out["failures"]
    if n >= 2 and v.status == STABLE:
        fail.append("stable point with r = n")
    if n == 1 and v.status != STABLE:
        fail.append("rank-1 point ideal is not stable")
    if v.status != SEMISTABLE:
        return out
    expected = tuple(sorted((p,) for p in pts))
    cls = s_equivalence_class(qp)
    if cls != expected:
        fail.append("class differs from the support multiset")
    # same points in another order, with a fresh framing
    perm = list(pts)
    rng.shuffle(perm)
    twin = diagonal_point(perm, _random_alphas(n, n, rng))
    if check_stability(twin).status == SEMISTABLE:
        if s_equivalence_class(twin) != cls:
            fail.append("equal point multisets gave different classes")
        if is_isomorphic(_polystable(sorted(pts)), _polystable(sorted(perm))).isomorphic is not True:
            fail.append("polystable representatives of equal classes are not isomorphic")
    # move one point
    moved = list(pts)
    taken = set(pts)
    a, b, c = moved[0]
    while (a, b, c) in taken:
        a += 1
    moved[0] = (a, b, c)
    other = diagonal_point(moved, _random_alphas(n, n, rng))
    if check_stability(other).status == SEMISTABLE:
        if s_equivalence_class(other) == cls:
            fail.append("different point multisets gave equal classes")
        if is_isomorphic(_polystable(sorted(pts)), _polystable(sorted(moved))).isomorphic is not False:
            fail.append("polystable representatives of distinct classes are isomorphic")
    return out


def verify_symn(n: int, trials: int = 100, seed: int = 0, jobs: int = 1) -> dict:
    """Random reduced r = n models: never stable (n >= 2); classes are point multisets."""
    if n < 1:
        raise ValueError("n must be positive")
    args = [(n, t, s) for t, s in enumerate(_subseeds(seed, trials))]
    results = _map(_symn_trial, args, jobs)
    counts = Counter(x["status"] for x in results)
    bad = [x for x in results if x["failures"]]
    return {"check": "symn", "n": n, "r": n, "trials": trials, "seed": seed,
            "statuses": dict(sorted(counts.items())), "failures": bad, "ok": not bad}


# ---------------------------------------------------------------------------


def dimension_checks(qp: QuotPoint, probes: int = 5, seed: int = 0) -> dict:
    """Per-sheaf checks for a stable reduced construction output."""
    r, n = qp.r, qp.n
    v = check_stability(qp)
    fail = []
    if v.status != STABLE or not v.certified:
        fail.append(f"not certified stable ({v.status})")
        return {"failures": fail}
    ext1 = ext1_E_E(qp, v)
    expected = formula_ext1_component(r, n, 3)
    if ext1 != expected:
        fail.append(f"ext1 = {ext1}, expected {expected}")
    adhm, homol = adhm_tangent(qp), hom_E_Q(qp)
    if adhm != homol:
        fail.append(f"adhm tangent {adhm} != hom(E,Q) {homol}")
    coh = cohomology_of_kernel(qp)
    if coh.h0 != 0 or coh.h1 != n - r:
        fail.append(f"cohomology h0={coh.h0}, h1={coh.h1}")
    rng = random.Random(seed)
    support = set(support_multiset(qp))
    probe_pts = [p for p in random_points(probes + n, rng, bound=7) if p not in support][:probes]
    homs = count_point_quotient_homs(qp, probe_pts)
    for p, k in homs.items():
        want = 1 if p in support else 0
        if k != want:
            fail.append(f"hom(E, I_q) = {k} at {_pts_json([p])[0]}, expected {want}")
    return {"ext1": ext1, "tangent": adhm, "failures": fail}


def _dimension_trial(args) -> dict:
    r, n, t, s = args
    qp, tries = iterate_construction_with_stats(r, n, seed=s)
    res = dimension_checks(qp, seed=s)
    res.update({"trial": t, "seed": s, "tries": tries})
    return res


def verify_dimension(r: int, n: int, trials: int = 10, seed: int = 0, jobs: int = 1) -> dict:
    """Constructed stable sheaves have ext^1(E,E) = n(r+2) - r^2 + 1 on P^3."""
    if not 1 <= r < n:
        raise ValueError(f"the dimension statement needs 1 <= r < n (got r={r}, n={n})")
    args = [(r, n, t, s) for t, s in enumerate(_subseeds(seed, trials))]
    results = _map(_dimension_trial, args, jobs)
    bad = [x for x in results if x["failures"]]
    retry_hist = Counter(k for x in results for k in x["tries"])
    return {
        "check": "dimension", "r": r, "n": n, "trials": trials, "seed": seed,
        "expected_ext1": formula_ext1_component(r, n, 3),
        "seeds": [x["seed"] for x in results],
        "ext1": [x.get("ext1") for x in results],
        "retry_histogram": {str(k): v for k, v in sorted(retry_hist.items())},
        "failures": bad,
        "ok": not bad,
    }


# ---------------------------------------------------------------------------


def random_commuting_triple(n: int, kind: str, rng: random.Random):
    """A commuting triple: conjugated diagonal ('diagonal') or nilpotent monomial blocks."""
    if kind == "diagonal":
        pts = random_points(n, rng, bound=4)
        D = [Matrix.diag([p[i] for p in pts]) for i in range(3)]
        while True:
            h = Matrix([[rng.randint(-1, 1) for _ in range(n)] for _ in range(n)])
            if h.det() != 0:
                break
        hinv = h.inverse()
        return tuple(h @ X @ hinv for X in D)
    if kind == "nilpotent":
        mod = None
        for k in random_partition(n, rng):
            block = monomial_module(random_monomial_block(k, rng))
            mod = block if mod is None else mod.direct_sum(block)
        return mod.operators
    raise ValueError(f"unknown kind {kind!r}")


def commvar_tangent_sample(n: int, trials: int = 20, seed: int = 0) -> dict:
    """Tangent dimensions of the commuting variety C(3, n) at random points."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    samples = []
    for t in range(trials):
        kind = "diagonal" if t % 2 == 0 else "nilpotent"
        A, B, C = random_commuting_triple(n, kind, rng)
        samples.append({"trial": t, "kind": kind, "dim": commuting_tangent_dim(A, B, C)})
    dims = [s["dim"] for s in samples]
    hist = Counter(dims)
    return {
        "check": "commvar", "n": n, "trials": trials, "seed": seed,
        "generic_dim": n * n + 2 * n,
        "min": min(dims) if dims else None,
        "max": max(dims) if dims else None,
        "histogram": {str(k): v for k, v in sorted(hist.items())},
        "samples": samples,
    }
