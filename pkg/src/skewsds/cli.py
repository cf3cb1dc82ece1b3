"""Command-line front end.

stdout carries only the report (byte-identical for identical inputs,
whatever the worker count); diagnostics and the run manifest go to stderr.
Exit codes: 0 ok, 1 certification failure, 2 usage/format error,
3 infeasible parameters, 4 node budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from pathlib import Path

from . import __version__
from .core import (
    InfeasibleParameters,
    ParameterError,
    SdsPair,
    derive_params,
    is_sds,
    is_skew,
)
from .constructions import qr_skew_sds
from .doptimal import classify_dopt, feasible_dopt_params, sds_to_dopt
from .fixtures import pair_to_record, record_to_pair, table3_pair
from .matrices import (
    build_design,
    exact_determinant,
    parse_matrix,
    verify_c1c3,
    verify_gram_pair,
)
from .search import (
    DEFAULT_NODE_BUDGET,
    BudgetExceeded,
    ClassificationResult,
    classify,
    classify_all,
)

EXIT_OK = 0
EXIT_CERT = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_BUDGET = 4


def _budget_arg(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        return int(float(text))


def _emit(payload, fmt: str, text_renderer) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in text_renderer(payload):
            print(line)


def _manifest(command: str, seconds: float, **extra) -> None:
    record = {
        "command": command,
        "version": __version__,
        "python": platform.python_version(),
        "seconds": round(seconds, 3),
    }
    record.update(extra)
    print(json.dumps(record), file=sys.stderr)


def _params_payload(p) -> dict:
    return {
        "v": p.v,
        "r": p.r,
        "k": p.k,
        "lambda": p.lam,
        "alpha": p.alpha,
        "beta": p.beta,
    }


def _result_payload(result: ClassificationResult) -> dict:
    stats = {key: val for key, val in result.stats.items() if key != "seconds"}
    payload = {
        "params": _params_payload(result.params),
        "attempted": result.attempted,
        "count": result.count,
        "representatives": [pair_to_record(rep) for rep in result.representatives],
        "stats": stats,
    }
    if not result.attempted:
        payload["reason"] = result.reason
    return payload


# ---------------------------------------------------------------------------
# subcommands


def cmd_params(args) -> int:
    t0 = time.perf_counter()
    rows = []
    for v in range(3, args.max_v + 1, 2):
        for k in range((v - 1) // 2):
            p = derive_params(v, k)
            if p is not None:
                rows.append(_params_payload(p))

    def render(rows):
        for row in rows:
            yield (
                f"({row['v']:>3}, {row['r']:>3}, {row['k']:>3}, {row['lambda']:>3})"
                f"  alpha={row['alpha']} beta={row['beta']}"
            )

    _emit(rows, args.format, render)
    _manifest("params", time.perf_counter() - t0, max_v=args.max_v)
    return EXIT_OK


def cmd_classify(args) -> int:
    t0 = time.perf_counter()
    try:
        params = derive_params(args.v, args.k)
    except (ParameterError, InfeasibleParameters) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if params is None:
        print(
            f"infeasible: no integer lambda for v={args.v}, k={args.k}",
            file=sys.stderr,
        )
        return EXIT_INFEASIBLE
    try:
        result = classify(
            params, jobs=args.jobs, budget=args.budget, cache_dir=args.cache
        )
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        _manifest(
            "classify",
            time.perf_counter() - t0,
            params=_params_payload(params),
            budget=args.budget,
            jobs=args.jobs,
            attempted=False,
            estimate=exc.estimate,
        )
        return EXIT_BUDGET

    def render(payload):
        p = payload["params"]
        yield (
            f"(v, r, k, lambda) = ({p['v']}, {p['r']}, {p['k']}, {p['lambda']})"
            f"  alpha={p['alpha']} beta={p['beta']}"
        )
        yield f"classes: {payload['count']}"
        for rec in payload["representatives"]:
            yield f"representative: A={rec['A']} B={rec['B']}"
        stats = payload["stats"]
        yield "stats: " + " ".join(f"{key}={stats[key]}" for key in sorted(stats))

    _emit(_result_payload(result), args.format, render)
    _manifest(
        "classify",
        time.perf_counter() - t0,
        params=_params_payload(params),
        budget=args.budget,
        jobs=args.jobs,
        attempted=True,
        seconds_search=round(result.stats.get("seconds", 0.0), 3),
    )
    return EXIT_OK


def cmd_classify_all(args) -> int:
    t0 = time.perf_counter()
    results = classify_all(
        args.max_v, jobs=args.jobs, budget=args.budget, cache_dir=args.cache
    )
    payload = [_result_payload(res) for res in results]

    def render(payload):
        for row in payload:
            p = row["params"]
            n = row["count"] if row["attempted"] else "?"
            yield f"({p['v']:>3}, {p['r']:>3}, {p['k']:>3}, {p['lambda']:>3})  N={n}"

    _emit(payload, args.format, render)
    _manifest(
        "classify-all",
        time.perf_counter() - t0,
        max_v=args.max_v,
        budget=args.budget,
        jobs=args.jobs,
    )
    return EXIT_OK


def cmd_dparams(args) -> int:
    t0 = time.perf_counter()
    rows = [
        {
            "n": dp.n,
            "r": dp.r,
            "k": dp.k,
            "two_squares_ok": dp.two_squares_ok,
            "bound": dp.bound,
        }
        for dp in feasible_dopt_params(args.n_max)
    ]

    def render(rows):
        for row in rows:
            two = "yes" if row["two_squares_ok"] else "no"
            yield f"({row['n']:>4}, {row['r']:>3}, {row['k']:>3})  two_squares={two}"

    _emit(rows, args.format, render)
    _manifest("dparams", time.perf_counter() - t0, n_max=args.n_max)
    return EXIT_OK


def cmd_dclassify(args) -> int:
    t0 = time.perf_counter()
    try:
        result = classify_dopt(
            args.n, jobs=args.jobs, budget=args.budget, cache_dir=args.cache
        )
    except ParameterError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE

    def render(payload):
        p = payload["params"]
        n = payload["count"] if payload["attempted"] else "?"
        yield f"order {2 * p['v']}: N={n}"
        for rec in payload["representatives"]:
            yield f"representative: A={rec['A']} B={rec['B']}"

    _emit(_result_payload(result), args.format, render)
    _manifest(
        "dclassify",
        time.perf_counter() - t0,
        n=args.n,
        budget=args.budget,
        jobs=args.jobs,
        attempted=result.attempted,
    )
    return EXIT_OK if result.attempted else EXIT_BUDGET


def _load_record(path: str) -> SdsPair:
    text = Path(path).read_text()
    record = json.loads(text)
    return record_to_pair(record)


def cmd_verify(args) -> int:
    try:
        pair = _load_record(args.file)
    except (OSError, ValueError, ParameterError) as exc:
        print(f"malformed record: {exc}", file=sys.stderr)
        return EXIT_USAGE
    checks: list[tuple[str, bool]] = []
    sds_ok = is_sds(pair)
    checks.append(("is_sds", sds_ok))
    skew_ok = is_skew(pair.A)
    checks.append(("is_skew", skew_ok))
    gram = verify_gram_pair(pair.A, pair.B, pair.params)
    checks.append(("gram", gram.holds))
    cert = verify_c1c3(build_design(pair.A, pair.B))
    checks.append(("c1c3", cert.holds))
    payload = {
        "record": pair_to_record(pair),
        "is_sds": sds_ok,
        "is_skew": skew_ok,
        "gram": {"alpha": gram.alpha, "beta": gram.beta, "holds": gram.holds},
        "c1c3": {
            "alpha": cert.alpha,
            "beta": cert.beta,
            "holds": cert.holds,
            "violation": cert.violation,
        },
        "ok": all(ok for _, ok in checks),
    }
    print(json.dumps(payload, indent=2))
    if not payload["ok"]:
        first = next(name for name, ok in checks if not ok)
        print(f"certification failed: {first}", file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def cmd_design(args) -> int:
    try:
        if args.from_table3 is not None:
            pair = table3_pair(args.from_table3)
        elif args.file is not None:
            pair = _load_record(args.file)
        else:
            print("design needs --from-table3 V or a record file", file=sys.stderr)
            return EXIT_USAGE
    except (OSError, ValueError, ParameterError) as exc:
        print(f"cannot load record: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        certified = sds_to_dopt(pair)
    except ParameterError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_CERT
    n = certified.design.order
    payload = {
        "n": n,
        "record": pair_to_record(pair),
        "gram": {
            "alpha": certified.certificate.alpha,
            "beta": certified.certificate.beta,
        },
        "determinant": certified.determinant,
        "bound": certified.bound,
        "meets_ehlich_bound": certified.meets_bound,
    }

    def render(payload):
        yield f"order: {payload['n']}"
        yield f"|det|: {abs(payload['determinant'])}"
        yield f"bound: {payload['bound']}"
        yield f"meets Ehlich bound: {str(payload['meets_ehlich_bound']).lower()}"

    _emit(payload, args.format, render)
    return EXIT_OK


def cmd_det(args) -> int:
    try:
        matrix = parse_matrix(Path(args.file).read_text())
    except (OSError, ValueError) as exc:
        print(f"malformed matrix file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(exact_determinant(matrix))
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.family != "qr":
        print(f"unknown construction family: {args.family}", file=sys.stderr)
        return EXIT_USAGE
    try:
        pair = qr_skew_sds(args.p, args.k)
    except ParameterError as exc:
        print(f"cannot construct: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(pair_to_record(pair), indent=2))
    return EXIT_OK


# ---------------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "text"), default="text")


def _add_search_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--jobs", type=int, default=1, metavar="N")
    parser.add_argument(
        "--budget", type=_budget_arg, default=DEFAULT_NODE_BUDGET, metavar="NODES"
    )
    parser.add_argument("--cache", default=None, metavar="DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewsds",
        description="Classify skew-symmetric supplementary difference sets "
        "and certify the circulant D-optimal designs they induce.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="feasible (v, r, k, lambda) rows")
    p.add_argument("--max-v", type=int, required=True, dest="max_v")
    _add_common(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("classify", help="classify one parameter tuple")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    _add_common(p)
    _add_search_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("classify-all", help="classify all tuples with v <= max-v")
    p.add_argument("--max-v", type=int, required=True, dest="max_v")
    _add_common(p)
    _add_search_flags(p)
    p.set_defaults(func=cmd_classify_all)

    p = sub.add_parser("dparams", help="feasible design orders (n, r, k)")
    p.add_argument("n_max", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_dparams)

    p = sub.add_parser("dclassify", help="classify designs of one order")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    _add_search_flags(p)
    p.set_defaults(func=cmd_dclassify)

    p = sub.add_parser("verify", help="check an SDS record file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("design", help="build and certify a design from a record")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--from-table3", type=int, default=None, dest="from_table3")
    _add_common(p)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("det", help="exact determinant of a matrix file")
    p.add_argument("file")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("construct", help="emit a generated SDS record")
    p.add_argument("family", choices=("qr",))
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.set_defaults(func=cmd_construct)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry() -> None:  # console-script hook
    sys.exit(main())
