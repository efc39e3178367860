"""Command-line front end.

    escgen un      --spec SPEC --n N            renewal table u_0..u_n
    escgen kdist   --spec SPEC --n N            law of K_n given E_n
    escgen sample  --spec SPEC --n N            partitions, one per line
    escgen bench   --spec SPEC --n N            naive vs fast timings
    escgen verify  [--max-n M]                  cross-route consistency checks

SPEC is a JSON object such as '{"kind": "geometric", "params": {"p": 0.5}}'
or a path to a file holding one.

Exit codes: 0 ok, 2 usage error, 3 unreachable n, 4 verification failure,
5 rejection sampler exhausted.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from escgen import bench as bench_mod
from escgen.distributions import ClusterSizeSpec
from escgen.errors import CapabilityError, SamplerExhausted, UnreachableError
from escgen.kdist import composition_table, k_distribution, k_distribution_closed
from escgen.renewal import closed_form_terms, prob_en_closed, renewal_table
from escgen.samplers import (
    DEFAULT_MAX_ATTEMPTS,
    MODES,
    assemble_partition,
    make_rng,
    prepare,
    sample_sizes,
    sample_sizes_naive,
)
from escgen.verify import run_checks

DEFAULT_SEED = 20230601

EXIT_USAGE = 2
EXIT_UNREACHABLE = 3
EXIT_VERIFY = 4
EXIT_EXHAUSTED = 5


def _fmt(x: float) -> str:
    return repr(float(x))


def _json_num(x: float):
    x = float(x)
    return x if math.isfinite(x) else None


def parse_spec(text: str) -> ClusterSizeSpec:
    path = Path(text)
    if not text.lstrip().startswith("{") and path.is_file():
        text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"--spec is neither a JSON object nor a readable file: {exc}") from None
    return ClusterSizeSpec.from_dict(data)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("ESC_SEED")
    return int(env) if env else DEFAULT_SEED


def _closed_u(spec: ClusterSizeSpec, n: int):
    try:
        closed_form_terms(spec, 1)
    except CapabilityError:
        return None
    return [1.0] + [math.exp(prob_en_closed(spec, m)) for m in range(1, n + 1)]


def cmd_un(args, out) -> int:
    spec = args.spec_obj
    table = renewal_table(spec, args.n)
    closed = _closed_u(spec, args.n)
    if args.format == "json":
        payload = {
            "n": args.n,
            "spec": spec.to_dict(),
            "u": [_json_num(v) for v in table.u],
            "log_u": [_json_num(v) for v in table.log_u],
        }
        if closed is not None:
            payload["u_closed"] = closed
        out.write(json.dumps(payload) + "\n")
        return 0
    header = ["m", "u_m", "log_u_m"] + (["u_m_closed"] if closed is not None else [])
    out.write(",".join(header) + "\n")
    for m in range(args.n + 1):
        row = [str(m), _fmt(table.u[m]), _fmt(table.log_u[m])]
        if closed is not None:
            row.append(_fmt(closed[m]))
        out.write(",".join(row) + "\n")
    return 0


def cmd_kdist(args, out) -> int:
    spec = args.spec_obj
    dist = k_distribution(composition_table(spec, args.n), renewal_table(spec, args.n))
    try:
        closed = k_distribution_closed(spec, args.n).probs
    except CapabilityError:
        closed = None
    if args.format == "json":
        payload = {"n": args.n, "spec": spec.to_dict(), "probs": dist.probs.tolist()}
        if closed is not None:
            payload["probs_closed"] = closed.tolist()
        out.write(json.dumps(payload) + "\n")
        return 0
    out.write("k,prob" + (",prob_closed" if closed is not None else "") + "\n")
    for k in range(1, args.n + 1):
        row = [str(k), _fmt(dist.probs[k - 1])]
        if closed is not None:
            row.append(_fmt(closed[k - 1]))
        out.write(",".join(row) + "\n")
    return 0


def cmd_sample(args, out) -> int:
    spec = args.spec_obj
    rng = make_rng(_seed(args))
    if args.method == "fast":
        tables = prepare(spec, args.n, args.mode)
    elif not renewal_table(spec, args.n).reachable(args.n):
        # fail fast instead of letting the rejection loop exhaust
        raise UnreachableError(args.n)
    for _ in range(args.samples):
        if args.method == "fast":
            sizes = sample_sizes(tables, rng)
        else:
            sizes = sample_sizes_naive(spec, args.n, rng, args.max_attempts)
        if args.format == "csv":
            out.write(",".join(map(str, sizes)) + "\n")
        else:
            part = assemble_partition(sizes, rng)
            out.write(json.dumps(part.to_dict(), separators=(",", ":")) + "\n")
    return 0


def cmd_bench(args, out) -> int:
    spec = args.spec_obj
    if not renewal_table(spec, args.n).reachable(args.n):
        raise UnreachableError(args.n)
    methods = bench_mod.METHODS if args.method is None else (args.method,)
    records = bench_mod.run_bench(
        spec,
        args.n,
        args.samples,
        args.trials,
        _seed(args),
        mode=args.mode,
        max_attempts=args.max_attempts,
        methods=methods,
        jobs=args.jobs,
    )
    if args.format == "json":
        out.write(json.dumps(bench_mod.records_to_json(records)) + "\n")
    else:
        bench_mod.write_csv(records, out)
    return 0


def cmd_verify(args, out) -> int:
    results = run_checks(max_n=args.max_n, fault=args.inject_fault)
    for r in results:
        out.write(r.line() + "\n")
    failed = [r.name for r in results if not r.passed]
    if failed:
        out.write(f"FAILED: {', '.join(failed)}\n")
        return EXIT_VERIFY
    out.write(f"all {len(results)} checks passed\n")
    return 0


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonnegative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _seed_arg(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--seed", type=_seed_arg, default=None,
                        help=f"64-bit seed; defaults to $ESC_SEED or {DEFAULT_SEED}")

    spec_args = argparse.ArgumentParser(add_help=False)
    spec_args.add_argument("--spec", required=True, help="JSON spec or path to a JSON file")

    parser = argparse.ArgumentParser(prog="escgen", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("un", parents=[common, spec_args], help="renewal probabilities u_0..u_n")
    p.add_argument("--n", type=_nonnegative, required=True)
    p.set_defaults(func=cmd_un, default_format="csv")

    p = sub.add_parser("kdist", parents=[common, spec_args], help="law of K_n given E_n")
    p.add_argument("--n", type=_positive, required=True)
    p.set_defaults(func=cmd_kdist, default_format="csv")

    p = sub.add_parser("sample", parents=[common, spec_args], help="draw partitions")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--samples", type=_positive, default=1)
    p.add_argument("--method", choices=("fast", "naive"), default="fast")
    p.add_argument("--mode", choices=MODES, default="precomputed")
    p.add_argument("--max-attempts", type=_positive, default=DEFAULT_MAX_ATTEMPTS)
    p.set_defaults(func=cmd_sample, default_format="json")

    p = sub.add_parser("bench", parents=[common, spec_args], help="time naive vs fast sampling")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--samples", type=_positive, default=1, help="draws per trial (200 for amortized runs)")
    p.add_argument("--trials", type=_positive, default=20)
    p.add_argument("--method", choices=("fast", "naive"), default=None, help="default: both")
    p.add_argument("--mode", choices=MODES, default="precomputed")
    p.add_argument("--max-attempts", type=_positive, default=DEFAULT_MAX_ATTEMPTS)
    p.add_argument("--jobs", type=_positive, default=1,
                   help="run trials on this many worker processes (timings may interfere)")
    p.set_defaults(func=cmd_bench, default_format="csv")

    p = sub.add_parser("verify", parents=[common], help="run the cross-route consistency checks")
    p.add_argument("--max-n", type=_positive, default=12, help="largest n for the exact-arithmetic checks")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify, default_format="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    if hasattr(args, "spec"):
        try:
            args.spec_obj = parse_spec(args.spec)
        except ValueError as exc:
            parser.error(f"bad --spec: {exc}")

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        return args.func(args, out)
    except UnreachableError as exc:
        print(f"escgen: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except SamplerExhausted as exc:
        print(f"escgen: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
