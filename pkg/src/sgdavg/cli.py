"""Command-line entry point.

    bench run   --synthetic n=1000,p=20,noise=0.1 --lambda 1/n \
                --schemes 0,1,0.5,D,W,W2 --passes 50 --seeds 0,1,2 \
                --evals-per-pass 1 --out runs.csv
    bench verify
    bench fstar --synthetic n=1000,p=20,noise=0.1 --passes 50 --out fstar.json
"""

from __future__ import annotations

import argparse
import sys

from . import bench
from ._backend import backend_name


def _parse_synthetic(text: str) -> bench.SyntheticSpec:
    fields = {}
    for piece in text.split(","):
        key, sep, value = piece.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(
                f"bad synthetic spec piece: {piece!r} (want key=value)"
            )
        fields[key.strip()] = value.strip()
    allowed = {"n", "p", "noise", "seed"}
    unknown = set(fields) - allowed
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown synthetic spec keys: {sorted(unknown)}"
        )
    if "n" not in fields or "p" not in fields:
        raise argparse.ArgumentTypeError("synthetic spec needs n=<int>,p=<int>")
    try:
        return bench.SyntheticSpec(
            n=int(fields["n"]),
            p=int(fields["p"]),
            noise=float(fields.get("noise", 0.0)),
            seed=int(fields.get("seed", 0)),
        )
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_seeds(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed list: {text!r}") from None


def _parse_lambda(text: str):
    if text.strip() == "1/n":
        return "1/n"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f'bad lambda: {text!r} (want a float or "1/n")'
        ) from None


def _add_data_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--data", help="LIBSVM-format dataset path")
    group.add_argument(
        "--synthetic",
        type=_parse_synthetic,
        help="synthetic spec: n=<n>,p=<p>,noise=<f>[,seed=<s>]",
    )
    parser.add_argument(
        "--lambda",
        dest="lam",
        type=_parse_lambda,
        default="1/n",
        help='regularization parameter; a float or the literal "1/n" (default)',
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Projected stochastic subgradient benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scheme/schedule grid and write CSV")
    _add_data_arguments(run)
    run.add_argument(
        "--schemes",
        default=",".join(bench.DEFAULT_SCHEMES),
        help="comma list of scheme names: 0,1,0.5,D,W,W2,poly:<k>,decay:<eta>",
    )
    run.add_argument(
        "--step",
        default=None,
        help="classical | proposed | general:<c>,<b>; default runs the "
        "classical grid plus the (W, proposed) pairing",
    )
    run.add_argument("--passes", type=int, default=50)
    run.add_argument("--seeds", type=_parse_seeds, default=(0,))
    run.add_argument("--evals-per-pass", type=int, default=1)
    run.add_argument("--out", required=True, help="output CSV path")
    run.add_argument(
        "--sampling",
        choices=("with_replacement", "permuted_passes"),
        default="with_replacement",
    )
    run.add_argument("--radius", type=float, default=None, help="project iterates onto a ball of this radius")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--backend", choices=("auto", "compiled", "python"), default=None)

    ver = sub.add_parser("verify", help="run the self-check suite")
    ver.add_argument("--backend", choices=("auto", "compiled", "python"), default=None)

    fstar = sub.add_parser("fstar", help="estimate the optimum by a long reference run")
    _add_data_arguments(fstar)
    fstar.add_argument("--passes", type=int, default=50, help="experiment pass budget being referenced")
    fstar.add_argument("--multiplier", type=int, default=10, help="reference budget multiplier (>= 10)")
    fstar.add_argument("--evals-per-pass", type=int, default=1)
    fstar.add_argument("--radius", type=float, default=None)
    fstar.add_argument("--backend", choices=("auto", "compiled", "python"), default=None)
    fstar.add_argument("--out", required=True, help="output JSON path")

    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    config = bench.ExperimentConfig(
        data_path=args.data,
        synthetic=args.synthetic,
        lam=args.lam,
        scheme_names=tuple(s.strip() for s in args.schemes.split(",") if s.strip()),
        step=args.step,
        passes=args.passes,
        seeds=args.seeds,
        evaluations_per_pass=args.evals_per_pass,
        sampling=args.sampling,
        radius=args.radius,
        workers=args.workers,
        backend=None if args.backend in (None, "auto") else args.backend,
    )
    records = bench.run_experiment(config, out_path=args.out)
    print(f"wrote {len(records)} rows to {args.out} (kernel: {backend_name(config.backend)})")
    if args.radius is not None:
        for line in bench.report_variance_bounds(bench.load_problem(config)):
            print(line)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    backend = None if args.backend in (None, "auto") else args.backend
    results = bench.verify_suite(backend=backend)
    for result in results:
        print(result)
    return 0 if all(r.passed for r in results) else 1


def _cmd_fstar(args: argparse.Namespace) -> int:
    config = bench.ExperimentConfig(
        data_path=args.data,
        synthetic=args.synthetic,
        lam=args.lam,
        passes=args.passes,
        radius=args.radius,
    )
    problem = bench.load_problem(config)
    backend = None if args.backend in (None, "auto") else args.backend
    estimate = bench.estimate_fstar(
        problem,
        base_passes=args.passes,
        budget_multiplier=args.multiplier,
        evaluations_per_pass=args.evals_per_pass,
        backend=backend,
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(estimate.to_json())
    print(f"f* estimate {estimate.value!r} ({estimate.method}, T={estimate.iterations}) -> {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "verify": _cmd_verify, "fstar": _cmd_fstar}
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
