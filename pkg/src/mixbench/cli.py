"""Command-line entry points.

Subcommands:
  simulate          run a configured sweep and write a CSV/JSON report
  rates             run a sweep over one axis and print the fitted slope
  packing           construct a lower-bound family and write it as JSON
  verify            run a verification suite; exit 0 iff every check holds
  bounds            evaluate a closed-form theorem bound at parameters

Outputs are deterministic for fixed inputs (timing is zeroed in reports
unless --timing is passed) and serial/parallel runs agree; the thread count
comes from --threads or the MIXBENCH_THREADS environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bounds import THEOREM_KINDS, theorem_bound
from .errors import MixbenchError
from .harness import emit_report, load_config, run_experiment
from .packing import family_from_json_dict, family_to_json_dict, lower_bound_family
from .verify import SUITES, run_suite, suite_fano


def _add_simulate(sub):
    p = sub.add_parser("simulate", help="run a configured experiment sweep")
    p.add_argument("--config", required=True, help="path to a JSON experiment config")
    p.add_argument("--out", required=True, help="output path (.csv or .json)")
    p.add_argument("--threads", type=int, default=None, help="replicate-level parallelism")
    p.add_argument("--timing", action="store_true", help="keep measured runtimes (breaks byte reproducibility)")


def _add_rates(sub):
    p = sub.add_parser("rates", help="fit a log-log rate slope over one axis")
    p.add_argument("--axis", required=True, choices=["n", "d", "lambda"], help="sweep axis")
    p.add_argument("--config", required=True, help="path to a JSON experiment config")
    p.add_argument("--out", default=None, help="optional CSV/JSON report path")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--timing", action="store_true")


def _add_packing(sub):
    p = sub.add_parser("packing", help="construct a lower-bound hypothesis family")
    p.add_argument("--regime", required=True, choices=["dense", "sparse"])
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--d", required=True, type=int)
    p.add_argument("--s", type=int, default=None, help="internal sparsity (sparse regime)")
    p.add_argument("--lambda", dest="lam", required=True, type=float)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output JSON path")


def _add_verify(sub):
    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--family", default=None, help="packing family JSON (fano suite)")
    p.add_argument("--out", default=None, help="write the JSON array here instead of stdout")


def _add_bounds(sub):
    p = sub.add_parser("bounds", help="evaluate a theorem bound")
    p.add_argument("--kind", required=True, choices=list(THEOREM_KINDS))
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixbench", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    _add_simulate(sub)
    _add_rates(sub)
    _add_packing(sub)
    _add_verify(sub)
    _add_bounds(sub)
    return parser


def _fmt_from_path(path: str) -> str:
    if path.endswith(".json"):
        return "json"
    if path.endswith(".csv"):
        return "csv"
    raise MixbenchError(f"cannot infer format from {path!r}; use a .csv or .json extension")


def _cmd_simulate(args) -> int:
    config = load_config(args.config)
    result = run_experiment(config, threads=args.threads)
    emit_report(result, _fmt_from_path(args.out), args.out, include_timing=args.timing)
    return 0


def _cmd_rates(args) -> int:
    config = load_config(args.config)
    if config.sweep_axis is None:
        raise MixbenchError("rates requires a config with a sweep block")
    if config.sweep_axis != args.axis:
        raise MixbenchError(f"--axis {args.axis} does not match config sweep axis {config.sweep_axis!r}")
    result = run_experiment(config, threads=args.threads)
    report = {
        "axis": args.axis,
        "values": [s.axis_value for s in result.summary],
        "mean_losses": [s.mean_loss for s in result.summary],
        "std_errs": [s.std_err for s in result.summary],
        "fitted_slope": result.fitted_slope,
        "slope_ci95": list(result.slope_ci95) if result.slope_ci95 else None,
    }
    print(json.dumps(report, indent=2, sort_keys=True))
    if args.out:
        emit_report(result, _fmt_from_path(args.out), args.out, include_timing=args.timing)
    return 0


def _cmd_packing(args) -> int:
    family = lower_bound_family(args.regime, args.n, args.d, s=args.s, lam=args.lam, sigma=args.sigma, seed=args.seed)
    with open(args.out, "w") as fh:
        json.dump(family_to_json_dict(family), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


def _cmd_verify(args) -> int:
    if args.suite == "fano" and args.family:
        with open(args.family) as fh:
            family = family_from_json_dict(json.load(fh))
        entries = suite_fano([family])
    else:
        entries = run_suite(args.suite)
    text = json.dumps(entries, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all(e.get("holds", False) for e in entries) else 1


def _cmd_bounds(args) -> int:
    value = theorem_bound(args.kind, n=args.n, d=args.d, s=args.s, lam=args.lam, sigma=args.sigma)
    print(
        json.dumps(
            {
                "kind": args.kind,
                "n": args.n,
                "d": args.d,
                "s": args.s,
                "lambda": args.lam,
                "sigma": args.sigma,
                "bound_value": value,
                "vacuous": value > 0.5,
            },
            indent=2,
            sort_keys=True,
        )
    )
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "rates": _cmd_rates,
        "packing": _cmd_packing,
        "verify": _cmd_verify,
        "bounds": _cmd_bounds,
    }
    try:
        return handlers[args.command](args)
    except MixbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
