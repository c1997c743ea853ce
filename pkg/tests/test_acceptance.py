"""The ten acceptance criteria, each at its stated size and tolerance.

Run with pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly: ``python tests/test_acceptance.py``.
"""
import functools
import json
import random
import subprocess
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from oracles import brute_force_verdict, sign_spanned_subspaces, witness_violates  # noqa: E402
from quasitrivial.constructions import (  # noqa: E402
    build_rank2,
    count_point_quotient_homs,
    iterate_construction,
    monomial_module,
    random_monomial_block,
    random_partition,
    random_points,
    random_quot_point,
    random_rank2_spec,
)
from quasitrivial.homology import (  # noqa: E402
    adhm_tangent,
    cohomology_of_kernel,
    ext1_E_E,
    hom_E_Q,
    koszul_ext,
)
from quasitrivial.linalg import format_rational  # noqa: E402
from quasitrivial.quot import Module, diagonal_point, support_multiset, validate  # noqa: E402
from quasitrivial.stability import STABLE, UNSTABLE, check_stability  # noqa: E402

RESULTS: dict = {}

DIMENSION_PAIRS = [(2, 3), (2, 4), (2, 5), (2, 6), (3, 4), (3, 5), (3, 6), (4, 5), (4, 6), (5, 6)]
EMPTY_PAIRS = [(2, 1), (3, 2), (4, 3), (5, 2)]
SEED = 1


def cli(*argv, stdin=None) -> tuple[int, str]:
    proc = subprocess.run([sys.executable, "-m", "quasitrivial.cli", *map(str, argv)],
                          input=stdin, capture_output=True, text=True)
    return proc.returncode, proc.stdout


def _dimension_argv(r, n):
    return ("verify", "dimension", "--r", r, "--n", n, "--trials", 10, "--seed", SEED)


def _empty_argv(r, n):
    return ("verify", "empty", "--r", r, "--n", n, "--trials", 200, "--seed", SEED)


def _symn_argv(n):
    return ("verify", "symn", "--n", n, "--trials", 100, "--seed", SEED)


@functools.lru_cache(maxsize=None)
def first_run(argv):
    return cli(*argv)


def record(k, ok, detail):
    RESULTS[k] = (ok, detail)
    return ok


def _pt(p):
    return "(" + ",".join(format_rational(x) for x in p) + ")"


# ---------------------------------------------------------------------------


def criterion_1():
    start = time.time()
    bad = []
    for r, n in DIMENSION_PAIRS:
        code, out = first_run(_dimension_argv(r, n))
        rep = json.loads(out)
        want = n * (r + 2) - r * r + 1
        if code != 0 or rep["ext1"] != [want] * 10 or len(rep["seeds"]) != 10:
            bad.append(f"(r={r},n={n}) ext1={rep['ext1']} want {want}")
    elapsed = time.time() - start
    if elapsed >= 300:
        bad.append(f"runtime {elapsed:.0f}s")
    return record(1, not bad, "; ".join(bad) or f"10 pairs x 10 trials exact, {elapsed:.1f}s")


def _criterion_1_outputs():
    for r, n in DIMENSION_PAIRS:
        rep = json.loads(first_run(_dimension_argv(r, n))[1])
        for s in rep["seeds"]:
            yield iterate_construction(r, n, seed=s)


def _criterion_2_outputs():
    rng = random.Random(SEED)
    for n in range(3, 9):
        for _ in range(20):
            yield build_rank2(random_rank2_spec(n, rng))


def criterion_2():
    bad = []
    count = 0
    for qp in _criterion_2_outputs():
        count += 1
        v = check_stability(qp)
        if v.status != STABLE or not v.certified:
            bad.append(f"n={qp.n}: {v.status}")
            continue
        if ext1_E_E(qp, v) != 4 * qp.n - 3:
            bad.append(f"n={qp.n}: ext1={ext1_E_E(qp, v)}")
    return record(2, not bad and count == 120, "; ".join(bad[:5]) or f"{count} specs certified stable, ext1 = 4n-3")


def criterion_3():
    bad = []
    for r, n in EMPTY_PAIRS:
        code, out = first_run(_empty_argv(r, n))
        rep = json.loads(out) if out else {}
        if code != 0 or rep.get("counterexamples") or rep.get("trials") != 200:
            bad.append(f"(r={r},n={n}) exit {code}, {len(rep.get('counterexamples', []))} counterexamples")
    return record(3, not bad, "; ".join(bad) or "800 points, all unstable")


def criterion_4():
    bad = []
    summary = []
    for n in (2, 3, 4):
        code, out = first_run(_symn_argv(n))
        rep = json.loads(out) if out else {}
        if code != 0 or rep.get("failures") or "stable" in rep.get("statuses", {}):
            bad.append(f"n={n}: exit {code}, failures {rep.get('failures', [])[:2]}")
        summary.append(f"n={n} {rep.get('statuses')}")
    return record(4, not bad, "; ".join(bad) or "; ".join(summary))


def criterion_5():
    rng = random.Random(SEED)
    bad = []
    count = 0
    for qp in list(_criterion_1_outputs()) + list(_criterion_2_outputs()):
        count += 1
        support = set(support_multiset(qp))
        probes = [p for p in random_points(qp.n + 5, rng, bound=7) if p not in support][:5]
        homs = count_point_quotient_homs(qp, probes)
        for p, k in homs.items():
            if k != (1 if p in support else 0):
                bad.append(f"hom(E,I_q)={k} at {_pt(p)} (n={qp.n}, r={qp.r})")
        if len(homs) != qp.n + 5:
            bad.append("missing points")
    return record(5, not bad, "; ".join(bad[:5]) or f"{count} sheaves, 1 on support, 0 on 5 probes")


def criterion_6():
    rng = random.Random(SEED)
    bad = []
    kinds = {True: 0, False: 0}
    for t in range(500):
        n, r = rng.randint(1, 6), rng.randint(1, 4)
        reduced = t % 2 == 0
        qp = random_quot_point(n, r, reduced=reduced, seed=rng.randrange(2 ** 31))
        kinds[reduced] += 1
        a, h = adhm_tangent(qp), hom_E_Q(qp)
        if a != h:
            bad.append(f"n={n} r={r}: adhm {a} != hom {h}")
    return record(6, not bad, "; ".join(bad[:5]) or f"500 points ({kinds[True]} reduced, {kinds[False]} not), all equal")


def _random_module(rng, n, points):
    mod = None
    for k in random_partition(n, rng):
        block = monomial_module(random_monomial_block(k, rng), rng.choice(points))
        mod = block if mod is None else mod.direct_sum(block)
    return mod


def criterion_7():
    bad = []
    if koszul_ext(Module.point(0, 0, 0), Module.point(0, 0, 0)).dims != (1, 3, 3, 1):
        bad.append("single point is not (1,3,3,1)")
    rng = random.Random(SEED)
    disjoint = 0
    for t in range(200):
        pts = random_points(4, rng, bound=2)
        if t % 2 == 0:
            left, right = pts[:2], pts[2:]
        else:
            left = right = pts[:2]
        M = _random_module(rng, rng.randint(1, 4), left)
        N = _random_module(rng, rng.randint(1, 4), right)
        mn, nm = koszul_ext(M, N), koszul_ext(N, M)
        if mn.euler_characteristic or nm.euler_characteristic:
            bad.append(f"pair {t}: Euler characteristic")
        if (mn.hom, mn.ext1) != (nm.ext3, nm.ext2):
            bad.append(f"pair {t}: duality {mn.dims} vs {nm.dims}")
        if not set(support_multiset(M)) & set(support_multiset(N)):
            disjoint += 1
            if mn.dims != (0, 0, 0, 0):
                bad.append(f"pair {t}: disjoint support gave {mn.dims}")
    if disjoint < 100:
        bad.append(f"only {disjoint} disjoint pairs")
    return record(7, not bad, "; ".join(bad[:5]) or f"200 pairs ({disjoint} disjoint): Euler, vanishing, duality hold")


def criterion_8():
    bad = []
    count = 0
    for qp in _criterion_1_outputs():
        count += 1
        c = cohomology_of_kernel(qp)
        if (c.h0, c.h1, c.h2, c.h3) != (0, qp.n - qp.r, 0, 0):
            bad.append(f"(r={qp.r},n={qp.n}): {c}")
    return record(8, not bad and count == 100, "; ".join(bad[:5]) or f"{count} sheaves: h0 = 0, h1 = n - r")


def _criterion_9_corpus():
    rng = random.Random(SEED)
    for n in range(1, 6):
        for r in range(1, 5):
            for _ in range(4):
                yield random_quot_point(n, r, reduced=True, seed=rng.randrange(2 ** 31))
            for _ in range(4):
                # framing rows in {-1,0,1}: many equality cases
                alphas = []
                while len(alphas) < n:
                    a = [rng.randint(-1, 1) for _ in range(r)]
                    if any(a):
                        alphas.append(a)
                qp = diagonal_point(random_points(n, rng), alphas)
                if validate(qp).ok:
                    yield qp


def criterion_9():
    bad = []
    tally = {"agree": 0, "oracle weaker": 0}
    subspaces = {r: sign_spanned_subspaces(r) for r in range(1, 5)}
    for qp in _criterion_9_corpus():
        v = check_stability(qp)
        if not v.certified:
            bad.append(f"uncertified reduced point n={qp.n} r={qp.r}")
            continue
        oracle = brute_force_verdict(qp, subspaces[qp.r])
        rank = {UNSTABLE: 0, "strictly-semistable": 1, STABLE: 2}
        if rank[oracle] < rank[v.status]:
            bad.append(f"oracle found {oracle}, checker said {v.status} (n={qp.n}, r={qp.r})")
        elif oracle == v.status:
            tally["agree"] += 1
        else:
            tally["oracle weaker"] += 1
        if v.witness is not None:
            length, d = witness_violates(qp, v.witness)
            if not (length * qp.r < d * qp.n if v.status == UNSTABLE else length * qp.r == d * qp.n):
                bad.append("witness does not violate")
    total = sum(tally.values())
    return record(9, not bad, "; ".join(bad[:5]) or
                  f"{total} reduced points: {tally['agree']} identical, {tally['oracle weaker']} where the oracle missed a witness")


def _determinism_invocations():
    """The CLI surface of criteria 1-9: batch runs plus per-sheaf subcommands."""
    calls = [_dimension_argv(r, n) for r, n in DIMENSION_PAIRS]
    calls += [_empty_argv(r, n) for r, n in EMPTY_PAIRS]
    calls += [_symn_argv(n) for n in (2, 3, 4)]
    calls += [("sample", "--n", 5, "--r", 3, "--seed", s) for s in range(3)]
    calls += [("sample", "--n", 4, "--r", 2, "--nonreduced", "--seed", s) for s in range(3)]
    calls += [("construct", "induct", "--r", 3, "--n", 5, "--seed", s) for s in range(3)]
    calls += [("construct", "rank2", "--points", "0,0,0;1,0,0;0,1,0;1,1,1",
               "--alphas", "1,0;0,1;1,1;1,-1")]
    calls += [("commvar", "--n", 2, "--trials", 6, "--seed", SEED)]
    return calls


_PER_SHEAF = [("stability",), ("jh",), ("ext",), ("tangent",), ("cohomology",),
              ("probe-homs", "--probe", "7,7,7", "--probe", "1/2,0,0"), ("support",)]


def criterion_10():
    bad = []
    count = 0
    for argv in _determinism_invocations():
        a = first_run(argv)
        b = cli(*argv)
        count += 1
        if a != b:
            bad.append(" ".join(map(str, argv)))
        if argv[0] in ("sample", "construct"):
            for extra in _PER_SHEAF:
                x, y = cli(*extra, stdin=a[1]), cli(*extra, stdin=a[1])
                count += 1
                if x != y:
                    bad.append(" ".join(map(str, (argv[0],) + extra)))
    return record(10, not bad, "; ".join(bad[:5]) or f"{count} invocations byte-identical across two runs")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def test_criterion_1_dimension_formula():
    assert criterion_1(), RESULTS[1][1]


def test_criterion_2_rank2_component():
    assert criterion_2(), RESULTS[2][1]


def test_criterion_3_emptiness():
    assert criterion_3(), RESULTS[3][1]


def test_criterion_4_symmetric_product():
    assert criterion_4(), RESULTS[4][1]


def test_criterion_5_point_homs():
    assert criterion_5(), RESULTS[5][1]


def test_criterion_6_tangent_cross_check():
    assert criterion_6(), RESULTS[6][1]


def test_criterion_7_koszul_self_test():
    assert criterion_7(), RESULTS[7][1]


def test_criterion_8_cohomology():
    assert criterion_8(), RESULTS[8][1]


def test_criterion_9_oracle_agreement():
    assert criterion_9(), RESULTS[9][1]


def test_criterion_10_cli_determinism():
    assert criterion_10(), RESULTS[10][1]


def summary_lines():
    return [f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
            for k, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for fn in CRITERIA:
        try:
            fn()
        except Exception as exc:  # report and keep going
            record(int(fn.__name__.split("_")[1]), False, f"{type(exc).__name__}: {exc}")
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
