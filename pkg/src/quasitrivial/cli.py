"""Command-line entry point: JSON in, JSON out.

Exit codes: 0 success, 1 a check or verdict failed, 2 the answer is not
certified, 3 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import constructions, experiments, homology, stability
from .linalg import format_rational, parse_rational
from .quot import QuotPoint, UnsupportedInputError, support_decomposition, validate

OK, FAILED, UNCERTIFIED, BAD_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _points_json(points) -> list:
    return [[format_rational(x) for x in p] for p in points]


def _read_json(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _read_qp(path: str, check: bool = True) -> QuotPoint:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    try:
        qp = QuotPoint.from_json(data)
    except KeyError as exc:
        raise InputError(f"{path}: {exc.args[0]}") from None
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None
    if check:
        rep = validate(qp)
        if not rep.ok:
            raise InputError(f"{path}: not a Quot point ({rep.violation}): "
                             + json.dumps(rep.detail, sort_keys=True))
    return qp


def _parse_point(text: str, size: int = 3) -> tuple:
    parts = text.split(",")
    if len(parts) != size:
        raise InputError(f"expected {size} comma-separated rationals, got {text!r}")
    try:
        return tuple(parse_rational(x) for x in parts)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _parse_list(text: str, size: int) -> list:
    return [_parse_point(item, size) for item in text.split(";") if item.strip()]


def _emit(args, obj) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# subcommands; each returns (json object, exit code)


def cmd_validate(args):
    qp = _read_qp(args.input, check=False)
    rep = validate(qp)
    return rep.to_json(), OK if rep.ok else BAD_INPUT


def cmd_support(args):
    qp = _read_qp(args.input)
    support = support_decomposition(qp)
    return {
        "points": [{"point": s.coords_json(), "multiplicity": s.multiplicity} for s in support],
        "reduced": all(s.multiplicity == 1 for s in support),
    }, OK


def cmd_stability(args):
    qp = _read_qp(args.input)
    v = stability.check_stability(qp, samples=args.samples, seed=args.seed)
    return v.to_json(), OK if v.certified else UNCERTIFIED


def cmd_jh(args):
    qp = _read_qp(args.input)
    try:
        jh = stability.jordan_holder(qp)
    except stability.NotSemistableError as exc:
        return {"error": str(exc)}, FAILED
    except UnsupportedInputError as exc:
        return {"error": str(exc)}, UNCERTIFIED
    return jh.to_json(), OK


def cmd_sclass(args):
    qp = _read_qp(args.input)
    try:
        cls = stability.s_equivalence_class(qp)
    except stability.NotSemistableError as exc:
        return {"error": str(exc)}, FAILED
    except UnsupportedInputError as exc:
        return {"error": str(exc)}, UNCERTIFIED
    return {"class": [_points_json(f) for f in cls]}, OK


def cmd_iso(args):
    a, b = _read_qp(args.input), _read_qp(args.other)
    res = stability.is_isomorphic(a, b)
    return res.to_json(), UNCERTIFIED if res.isomorphic is None else OK


def cmd_ext(args):
    qp = _read_qp(args.input)
    qq = homology.koszul_ext(qp, qp)
    out = {"QQ": qq.to_json(), "hom_E_Q": homology.hom_E_Q(qp, qq)}
    verdict = stability.check_stability(qp)
    if verdict.status == stability.STABLE and verdict.certified:
        hom_iz = homology.hom_IZ_OZ(qp)
        derived = homology.formula_dim_family(hom_iz, qp.r, qp.n)
        variant = homology.formula_dim_family_variant(hom_iz, qp.r, qp.n)
        out["ext1_E_E"] = homology.ext1_E_E(qp, verdict)
        out["dim_family"] = {
            "hom_IZ_OZ": hom_iz,
            "derived": derived,
            "variant": variant,
            "note": "the variant adds (r-1)(n-1) where the derivation gives (n-r-1)(r-1); "
                    "they differ whenever r > 1" if derived != variant else "forms agree",
        }
    else:
        out["ext1_E_E"] = None
    if args.pair:
        other = _read_qp(args.pair)
        out["QP"] = homology.koszul_ext(qp, other).to_json()
        out["PQ"] = homology.koszul_ext(other, qp).to_json()
    return out, OK


def cmd_cohomology(args):
    return homology.cohomology_of_kernel(_read_qp(args.input)).to_json(), OK


def cmd_tangent(args):
    qp = _read_qp(args.input)
    adhm, homol = homology.adhm_tangent(qp), homology.hom_E_Q(qp)
    return {"adhm": adhm, "homological": homol, "equal": adhm == homol}, OK if adhm == homol else FAILED


def cmd_construct(args):
    if args.kind == "rank2":
        if not args.points or not args.alphas:
            raise InputError("rank2 needs --points and --alphas")
        spec = constructions.Rank2Spec(tuple(_parse_list(args.points, 3)),
                                       tuple(_parse_list(args.alphas, 2)))
        qp = constructions.build_rank2(spec)
    else:
        if args.r is None or args.n is None:
            raise InputError("induct needs --r and --n")
        qp = constructions.iterate_construction(args.r, args.n, seed=args.seed,
                                                max_tries=args.max_tries)
    return qp.to_json(), OK


def cmd_probe_homs(args):
    qp = _read_qp(args.input)
    probes = [_parse_point(p) for p in args.probe or []]
    homs = constructions.count_point_quotient_homs(qp, probes)
    return {"homs": [{"point": _points_json([p])[0], "hom": k} for p, k in homs.items()]}, OK


def cmd_sample(args):
    qp = constructions.random_quot_point(args.n, args.r, reduced=not args.nonreduced,
                                         seed=args.seed)
    return qp.to_json(), OK


def cmd_verify(args):
    if args.check == "empty":
        rep = experiments.verify_empty(args.r, args.n, args.trials, args.seed, args.jobs)
    elif args.check == "symn":
        if args.r is not None and args.r != args.n:
            raise InputError("symn checks r = n")
        rep = experiments.verify_symn(args.n, args.trials, args.seed, args.jobs)
    else:
        rep = experiments.verify_dimension(args.r, args.n, args.trials, args.seed, args.jobs)
    return rep, OK if rep["ok"] else FAILED


def cmd_commvar(args):
    return experiments.commvar_tangent_sample(args.n, args.trials, args.seed), OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasitrivial",
                                     description="Quot points, stability and Ext dimensions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help, needs_input=True):
        p = sub.add_parser(name, help=help)
        if needs_input:
            p.add_argument("--in", dest="input", default="-", help="Quot point JSON (default stdin)")
        p.add_argument("--out", default="-", help="output file (default stdout)")
        p.set_defaults(func=fn)
        return p

    add("validate", cmd_validate, "check commutativity and cyclicity")
    add("support", cmd_support, "support points with multiplicities")
    p = add("stability", cmd_stability, "stability verdict with witness")
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    add("jh", cmd_jh, "Jordan-Hölder factors")
    add("sclass", cmd_sclass, "S-equivalence class")
    p = add("iso", cmd_iso, "isomorphism test for two kernel sheaves")
    p.add_argument("--other", required=True)
    p = add("ext", cmd_ext, "Koszul Ext tables and derived dimensions")
    p.add_argument("--pair")
    add("cohomology", cmd_cohomology, "h^i of the kernel sheaf")
    add("tangent", cmd_tangent, "tangent dimension two ways")
    p = add("construct", cmd_construct, "build a stable kernel sheaf", needs_input=False)
    p.add_argument("kind", choices=["rank2", "induct"])
    p.add_argument("--points", help="'x,y,z;x,y,z;...'")
    p.add_argument("--alphas", help="'a,b;a,b;...'")
    p.add_argument("--r", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-tries", type=int, default=64)
    p = add("probe-homs", cmd_probe_homs, "hom(E, I_q) at support and probe points")
    p.add_argument("--probe", action="append", help="x,y,z (repeatable)")
    p = add("sample", cmd_sample, "random valid Quot point", needs_input=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nonreduced", action="store_true")
    p = add("verify", cmd_verify, "batch checks", needs_input=False)
    p.add_argument("check", choices=["empty", "symn", "dimension"])
    p.add_argument("--r", type=int)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p = add("commvar", cmd_commvar, "commuting-variety tangent sampling", needs_input=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    return parser


_DEFAULT_TRIALS = {"empty": 200, "symn": 100, "dimension": 10}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "check", None) is not None:
        if args.trials is None:
            args.trials = _DEFAULT_TRIALS[args.check]
        if args.check != "symn" and args.r is None:
            print(f"error: verify {args.check} needs --r", file=sys.stderr)
            return BAD_INPUT
    try:
        obj, code = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except constructions.ExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    _emit(args, obj)
    if code == BAD_INPUT and args.command == "validate":
        print(f"error: not a Quot point ({obj['violation']})", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
