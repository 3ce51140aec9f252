"""Command-line front end: exact/DP/randomized solving, claim checks, sweeps.

Single entry point with --mode dispatch.  Exit codes: 0 success, 1 solver or
checker failure, 2 usage error.  SPLIT_SEED in the environment overrides
--seed for reproducing runs without editing scripts.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .generators import FamilySpec, generate
from .graph import EdgeListError, Graph, induced_edge_count, read_edge_list
from .oracle import (
    SizeLimitError,
    check_split,
    exact_f,
    is_splittable_dp,
    min_deletion_split,
)
from .probability import MC_CLAIMS, monte_carlo_verdict
from .splitter import SplitError, SplitParams, split

MODES = ("exact", "dp-split", "randomized", "min-deletion", "verify-claims", "sweep")

SWEEP_HEADER = ("family", "n", "seed", "k", "gap", "deletions", "branch", "ms")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqsplit",
        description="Find two equal-size vertex sets inducing equally many edges.",
    )
    parser.add_argument("--mode", required=True, choices=MODES)
    parser.add_argument("--input", help="edge-list file ('n m' header, then 'u v' lines)")
    parser.add_argument(
        "--family",
        action="append",
        default=[],
        help="family spec like gnp:n=1000,p=0.5,seed=7 (repeatable for sweeps)",
    )
    parser.add_argument("--epsilon", type=float, default=0.1)
    parser.add_argument("--beta", type=float, default=None)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=100_000)
    parser.add_argument("--attempts", type=int, default=20)
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--out", help="write output here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--trace", action="store_true", help="include attempt traces")
    parser.add_argument("--claim", choices=MC_CLAIMS, help="claim id for verify-claims")
    parser.add_argument("--budget", type=int, default=None, help="min-deletion budget")
    return parser


def _load_graph(args) -> Graph:
    if args.input and args.family:
        raise UsageError("give either --input or --family, not both")
    if args.input:
        return read_edge_list(args.input)
    if args.family:
        if len(args.family) > 1:
            raise UsageError("multiple --family specs are only valid in sweep mode")
        return generate(FamilySpec.parse(args.family[0]))
    raise UsageError("this mode needs --input or --family")


class UsageError(ValueError):
    pass


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _result_record(g: Graph, result, elapsed_ms: float, traces=None) -> dict:
    ok = check_split(g, result.a, result.b)
    record = dict(result.to_json())
    record["n"] = g.n
    record["checker"] = "pass" if ok else "fail"
    record["ms"] = round(elapsed_ms, 3)
    if traces is not None:
        record["traces"] = [t.to_json() for t in traces]
    return record


def _run_single(args) -> int:
    g = _load_graph(args)
    traces = [] if args.trace else None
    start = time.monotonic()
    if args.mode == "exact":
        result = exact_f(g)
    elif args.mode == "dp-split":
        verdict = is_splittable_dp(g)
        elapsed = (time.monotonic() - start) * 1000.0
        payload = {
            "n": g.n,
            "splittable": bool(verdict),
            "reason": verdict.reason,
            "ms": round(elapsed, 3),
        }
        if verdict:
            s = verdict.splitting
            payload["a"] = sorted(s.a)
            payload["b"] = sorted(s.b)
            payload["edges_each"] = induced_edge_count(g, s.a)
            if not check_split(g, s.a, s.b):
                _emit(args, json.dumps(payload, sort_keys=True) + "\n")
                return 1
        _emit(args, json.dumps(payload, sort_keys=True) + "\n")
        return 0
    elif args.mode == "randomized":
        params = SplitParams(
            epsilon=args.epsilon, beta=args.beta, seed=args.seed, max_attempts=args.attempts
        )
        result = split(g, args.epsilon, seed=args.seed, params=params, collect_traces=traces)
    elif args.mode == "min-deletion":
        budget = args.budget if args.budget is not None else g.n
        result = min_deletion_split(g, budget, seed=args.seed)
        if result is None:
            _emit(args, json.dumps({"n": g.n, "error": "no splitting within budget"}) + "\n")
            return 1
    else:
        raise UsageError(f"mode {args.mode} not handled here")
    elapsed = (time.monotonic() - start) * 1000.0
    record = _result_record(g, result, elapsed, traces)
    _emit(args, json.dumps(record, sort_keys=True) + "\n")
    return 0 if record["checker"] == "pass" else 1


def _run_verify(args) -> int:
    claims = [args.claim] if args.claim else list(MC_CLAIMS)
    verdicts = [monte_carlo_verdict(c, trials=args.trials, seed=args.seed) for c in claims]
    _emit(args, json.dumps([v.to_json() for v in verdicts], sort_keys=True) + "\n")
    return 0 if all(v.holds for v in verdicts) else 1


def _sweep_instance(task):
    """Worker: one (family-spec, config) instance to one CSV row."""
    text, epsilon, beta, attempts = task
    spec = FamilySpec.parse(text)
    g = generate(spec)
    start = time.monotonic()
    try:
        if g.n <= 12:
            result = exact_f(g)
            branch = "exact"
        else:
            params = SplitParams(epsilon=epsilon, beta=beta, seed=spec.seed, max_attempts=attempts)
            traces = []
            result = split(g, epsilon, seed=spec.seed, params=params, collect_traces=traces)
            branch = traces[-1].branch if traces else "?"
        ms = (time.monotonic() - start) * 1000.0
        if not check_split(g, result.a, result.b):
            return (spec.family, g.n, spec.seed, "", "", "", "checker-fail", round(ms, 3))
        gap = g.n // 2 - result.k
        return (
            spec.family,
            g.n,
            spec.seed,
            result.k,
            gap,
            len(result.deleted),
            branch,
            round(ms, 3),
        )
    except (SplitError, SizeLimitError, ValueError) as exc:
        ms = (time.monotonic() - start) * 1000.0
        return (spec.family, g.n, spec.seed, "", "", "", f"error:{type(exc).__name__}", round(ms, 3))


def _run_sweep(args) -> int:
    if not args.family:
        raise UsageError("sweep mode needs at least one --family spec")
    tasks = [(text, args.epsilon, args.beta, args.attempts) for text in args.family]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_instance, tasks))
    else:
        rows = [_sweep_instance(t) for t in tasks]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    writer.writerows(rows)
    _emit(args, buf.getvalue())
    return 1 if any("fail" in str(r[6]) or str(r[6]).startswith("error") for r in rows) else 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    env_seed = os.environ.get("SPLIT_SEED")
    if env_seed is not None:
        try:
            args.seed = int(env_seed)
        except ValueError:
            print("error: SPLIT_SEED must be an integer", file=sys.stderr)
            return 2
    try:
        if args.mode == "verify-claims":
            return _run_verify(args)
        if args.mode == "sweep":
            return _run_sweep(args)
        return _run_single(args)
    except EdgeListError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, SizeLimitError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SplitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
