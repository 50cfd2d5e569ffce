"""Command-line interface: analyze, scenario, plot, calibrate, validate.

Exit codes: 0 success, 1 data/validation error, 2 usage error.  All numeric
output is deterministic given the arguments (and seed where applicable);
``--json`` emits schema-stable objects with full-precision floats.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict

from . import __version__
from .data import load_dataset, partition, serialize_dataset
from .errors import AuditError
from .montecarlo import ModelParameters, calibrate
from .prediction import analyze_dataset, prediction_interval
from .scenario import build_reversal_scenario
from .svgplot import render_scatter
from .wls import fit_through_origin

DEFAULT_SEED = 20160522


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _error(message: str, as_json: bool, kind: str = "data") -> int:
    if as_json:
        _print_json({"error": {"type": kind, "message": message}})
    else:
        print(f"error: {message}", file=sys.stderr)
    return 1


def cmd_analyze(args: argparse.Namespace) -> int:
    ds = load_dataset(args.input)
    result = analyze_dataset(ds, include_dubious=args.include_dubious, strict=args.strict)
    fit, report = result.fit, result.report
    interval = None
    if args.level is not None:
        _, red = partition(ds, include_dubious_as_red=args.include_dubious)
        interval = prediction_interval(fit, red, args.level)
    if args.json:
        payload = {
            "command": "analyze",
            "variant": report.variant,
            "n_districts": len(ds),
            "n_green": result.n_green,
            "n_red": result.n_red,
            "margin_official": result.margin_official,
            "slope": fit.slope,
            "sigma2": fit.sigma2,
            "slope_var": fit.slope_var,
            "dof": report.dof,
            "red_ballot_c1": report.red_ballot_c1,
            "red_mail_total": report.red_mail_total,
            "red_mail_c1": report.red_mail_c1,
            "reversal_threshold": report.threshold,
            "point_prediction": report.prediction,
            "pred_sd": report.pred_sd,
            "t_stat": report.t_stat,
            "p_reversal": report.p_reversal.value,
            "log10_p_reversal": report.p_reversal.log10,
            "degenerate": report.degenerate,
            "prediction_interval": None
            if interval is None
            else {"level": interval.level, "lower": interval.lower, "upper": interval.upper},
        }
        _print_json(payload)
        return 0
    print(f"districts            : {len(ds)} ({result.n_green} accepted, {result.n_red} contested)")
    print(f"variant              : {report.variant}")
    print(f"official margin (c2) : {result.margin_official}")
    print(f"slope                : {_fmt(fit.slope)}")
    print(f"noise variance       : {_fmt(fit.sigma2)}")
    print(f"slope variance       : {_fmt(fit.slope_var)}")
    print(f"contested ballot c1  : {report.red_ballot_c1}")
    print(f"contested mail total : {report.red_mail_total}")
    print(f"counted mail c1      : {report.red_mail_c1}")
    print(f"reversal threshold   : {_fmt(report.threshold)}")
    print(f"point prediction     : {_fmt(report.prediction)}")
    print(f"prediction sd        : {_fmt(report.pred_sd)}")
    print(f"t statistic          : {_fmt(report.t_stat)}")
    print(f"degrees of freedom   : {report.dof}")
    if report.degenerate:
        print(f"p(reversal)          : {_fmt(report.p_reversal.value)}  [degenerate fit]")
    else:
        print(
            f"p(reversal)          : {report.p_reversal.value:.7g}"
            f"   (log10 = {_fmt(report.p_reversal.log10)})"
        )
    if interval is not None:
        print(
            f"{interval.level:.4g} prediction interval: "
            f"[{_fmt(interval.lower)}, {_fmt(interval.upper)}]"
        )
    return 0


def cmd_scenario(args: argparse.Namespace) -> int:
    ds = load_dataset(args.input)
    _, red = partition(ds, include_dubious_as_red=args.include_dubious)
    votes = args.votes
    if votes is None:
        margin = ds.margin_official
        if margin <= 0:
            raise AuditError(f"official margin is {margin}; no deficit to reassign")
        votes = math.ceil(margin / 2)
    result = build_reversal_scenario(ds, red, votes, base=args.base)
    csv_text = serialize_dataset(result.modified)
    summary = {
        "command": "scenario",
        "votes_moved_total": result.total_moved,
        "votes_moved": result.votes_moved,
        "margin_before_c2_minus_c1": ds.margin_official,
        "resulting_margin_c1_minus_c2": result.resulting_margin,
        "output": args.out or "-",
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
        if args.json:
            _print_json(summary)
        else:
            print(
                f"moved {result.total_moved} mail votes to candidate 1; "
                f"resulting margin {result.resulting_margin:+d} for candidate 1"
            )
            print(f"modified dataset written to {args.out}")
    else:
        if args.json:
            summary["csv"] = csv_text
            _print_json(summary)
        else:
            sys.stdout.write(csv_text)
            print(
                f"moved {result.total_moved} mail votes to candidate 1; "
                f"resulting margin {result.resulting_margin:+d} for candidate 1",
                file=sys.stderr,
            )
    return 0


def cmd_plot(args: argparse.Namespace) -> int:
    ds = load_dataset(args.input)
    title = "Mail vs ballot vote shares - official results"
    if args.votes is not None:
        _, red = partition(ds, include_dubious_as_red=args.include_dubious)
        ds = build_reversal_scenario(ds, red, args.votes, base=args.base).modified
        title = "Mail vs ballot vote shares - modified results"
    svg = render_scatter(ds, include_dubious=args.include_dubious, title=title)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    if not args.json:
        print(f"wrote {args.out}")
    else:
        _print_json({"command": "plot", "output": args.out, "districts": len(ds)})
    return 0


def cmd_calibrate(args: argparse.Namespace) -> int:
    ds = load_dataset(args.input)
    if args.k is None or args.sigma is None:
        green, _ = partition(ds, include_dubious_as_red=args.include_dubious)
        fit = fit_through_origin(green)
        k = args.k if args.k is not None else fit.slope
        sigma = args.sigma if args.sigma is not None else math.sqrt(fit.sigma2)
    else:
        k, sigma = args.k, args.sigma
    params = ModelParameters(k=k, sigma=sigma)
    report = calibrate(
        ds, params, replications=args.reps, seed=args.seed, include_dubious=args.include_dubious
    )
    if args.json:
        payload = asdict(report)
        payload["command"] = "calibrate"
        payload["model_k"] = params.k
        payload["model_sigma"] = params.sigma
        payload["t_stats"] = list(payload["t_stats"])
        payload["quantile_errors"] = {str(k_): v for k_, v in report.quantile_errors.items()}
        _print_json(payload)
        return 0
    print(f"replications         : {report.replications} (failed: {report.failed_replications})")
    print(f"seed                 : {report.seed}")
    print(f"model slope / sigma  : {_fmt(params.k)} / {_fmt(params.sigma)}")
    print(f"degrees of freedom   : {report.dof}")
    print(f"KS distance          : {_fmt(report.ks_distance)}")
    for p, err in sorted(report.quantile_errors.items()):
        print(f"quantile error p={p:<4}: {_fmt(err)}")
    print(f"clamped fraction     : {_fmt(report.clamped_fraction)}")
    print(f"mean contested mail  : {_fmt(report.mean_red_mail_c1)}")
    print(f"model expectation    : {_fmt(report.expected_red_mail_c1)}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    ds = load_dataset(args.input)
    green11, red11 = partition(ds, include_dubious_as_red=False)
    green14, red14 = partition(ds, include_dubious_as_red=True)
    payload = {
        "command": "validate",
        "districts": len(ds),
        "green": ds.count_status("green"),
        "red": ds.count_status("red"),
        "dubious": ds.count_status("dubious"),
        "partition_default": [len(green11), len(red11)],
        "partition_include_dubious": [len(green14), len(red14)],
        "margin_official": ds.margin_official,
        "total_votes": sum(d.total_votes for d in ds),
        "mail_votes": sum(d.mail_total for d in ds),
        "zero_mail_districts": sum(1 for d in ds if d.mail_total == 0),
    }
    if args.json:
        _print_json(payload)
    else:
        print(f"districts        : {payload['districts']}")
        print(
            f"status counts    : {payload['green']} green, {payload['red']} red, "
            f"{payload['dubious']} dubious"
        )
        print(
            f"partitions       : default {tuple(payload['partition_default'])}, "
            f"with dubious {tuple(payload['partition_include_dubious'])}"
        )
        print(f"official margin  : {payload['margin_official']}")
        print(f"total valid votes: {payload['total_votes']}")
        print(f"mail votes       : {payload['mail_votes']}")
        print("dataset OK")
    return 0


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return n


def _reps(value: str) -> int:
    n = int(value)
    if n < 100:
        raise argparse.ArgumentTypeError("need at least 100 replications")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvaudit",
        description="Probabilistic audit of a two-candidate runoff with contested mail votes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, level=False, votes=False, seed=False, out=False):
        p.add_argument("input", help="district results CSV")
        p.add_argument(
            "--include-dubious",
            action="store_true",
            help="treat the dubious districts as contested (14 instead of 11)",
        )
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if level:
            p.add_argument("--level", type=float, help="also report this prediction-interval level")
        if votes:
            p.add_argument("--votes", type=_positive_int, help="mail votes to reassign")
            p.add_argument(
                "--base",
                choices=["mail_total", "mail_c2"],
                default="mail_total",
                help="proportional allocation base (default: mail_total)",
            )
        if seed:
            p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="PRNG seed (u64)")
        if out:
            p.add_argument("--out", help="output file path")

    p = sub.add_parser("analyze", help="fit the model and report the reversal probability")
    common(p, level=True)
    p.add_argument("--strict", action="store_true", help="strict-win threshold (ties lose)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scenario", help="emit a counterfactual dataset with reassigned mail votes")
    common(p, votes=True, out=True)
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("plot", help="emit an SVG scatter of mail vs ballot shares")
    common(p, votes=True, out=True)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("calibrate", help="Monte Carlo check of the t-statistic distribution")
    common(p, seed=True)
    p.add_argument("--reps", type=_reps, default=10_000, help="replications (>= 100)")
    p.add_argument("--k", type=float, help="true model slope (default: fitted)")
    p.add_argument("--sigma", type=float, help="true model noise scale (default: fitted)")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("validate", help="parse a dataset and report its shape")
    common(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "plot" and not args.out:
        parser.error("plot requires --out")
    try:
        return args.func(args)
    except (AuditError, OSError) as exc:
        return _error(str(exc), getattr(args, "json", False))


if __name__ == "__main__":
    sys.exit(main())
