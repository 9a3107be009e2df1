"""Command line interface.

Subcommands: ``compute`` scores a truth/estimate file pair, ``scenario``
writes the study scenarios (or a seeded random one) as track-set files,
``split`` breaks estimated tracks covering several truths, and ``selftest``
replays the golden tables.  Exit codes: 0 ok, 2 parse error, 3 validation
error, 4 configuration error, 5 split non-convergence.

The OSPA and OSPAT summary rows aggregate per-scan values with the
n_t-weighted p-power mean, the same normalization the track-level metric
uses; their per-scan rows are the primary output.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .core import MetricParams, TrackSet
from .errors import (
    BadParametersError,
    NoConvergenceError,
    ParseError,
    ScanMismatchError,
    TooLargeError,
    TrackMetricError,
    ValidationError,
)
from .io import load_track_set, save_track_set
from .ospa import ospa_per_scan
from .ospamt import Mode, ospamt_metric, split_tracks
from .ospat import ospat_global, ospat_per_scan
from .scenarios import FigureId, Scenario, ScenarioSpec, build, random_scenario
from .selftest import run_selftest

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_CONFIG = 4
EXIT_NO_CONVERGENCE = 5

CSV_HEADER = ["t", "metric", "total", "loc", "card", "n_t"]


@dataclass
class MetricRows:
    """Uniform result shape for one metric: summary plus per-scan rows."""

    name: str
    total: float
    loc: float
    card: float
    rows: list[tuple[int, float, float, float, int]]
    assignment_text: str
    extra: dict


def _aggregate(rows: list[tuple[int, float, float, float, int]], p: float) -> tuple[float, float, float]:
    n = sum(r[4] for r in rows)
    if n == 0:
        return 0.0, 0.0, 0.0
    tot = sum(r[1] ** p * r[4] for r in rows)
    loc = sum(r[2] ** p * r[4] for r in rows)
    card = sum(r[3] ** p * r[4] for r in rows)
    return (tot / n) ** (1 / p), (loc / n) ** (1 / p), (card / n) ** (1 / p)


def _pairs_text(pairs, left: TrackSet, right: TrackSet) -> str:
    return ", ".join(
        f"{left.track_label(i)}<->{right.track_label(j)}" for i, j in pairs
    ) or "(none)"


def _eval_ospa(truth: TrackSet, est: TrackSet, params: MetricParams, mode: Mode) -> MetricRows:
    scan_rows = ospa_per_scan(truth, est, params)
    rows = [(r.t, r.total, r.loc, r.card, r.n_t) for r in scan_rows]
    total, loc, card = _aggregate(rows, params.p)
    pair_lines = "; ".join(
        f"t={r.t}: {_pairs_text(r.pairs, truth, est)}" for r in scan_rows
    )
    return MetricRows("ospa", total, loc, card, rows, pair_lines, {})


def _eval_ospat(truth: TrackSet, est: TrackSet, params: MetricParams, mode: Mode) -> MetricRows:
    scan_rows, assignment = ospat_per_scan(truth, est, params)
    rows = [(r.t, r.total, r.loc, r.card, r.n_t) for r in scan_rows]
    total, loc, card = _aggregate(rows, params.p)
    glob = ospat_global(truth, est, params)
    text = "pairing " + _pairs_text(assignment.pairs, truth, est)
    return MetricRows(
        "ospat", total, loc, card, rows, text, {"global_distance": glob.total}
    )


def _eval_ospamt(truth: TrackSet, est: TrackSet, params: MetricParams, mode: Mode) -> MetricRows:
    report = ospamt_metric(truth, est, params, mode=mode)
    rows = [
        (t + 1, report.per_time[t], report.loc_t[t], report.card_t[t], report.n_t[t])
        for t in range(truth.scans)
    ]
    asg = report.assignment
    if asg.direction.value == "est_to_truth":
        src, tgt = est, truth
    else:
        src, tgt = truth, est
    mapping = ", ".join(
        f"{tgt.track_label(i)}<-({', '.join(src.track_label(j) for j in order)})"
        for i, order in enumerate(asg.orders, start=1)
        if order
    )
    unassigned = ", ".join(src.track_label(j) for j in asg.unassigned_sources())
    text = f"direction {asg.direction.value}; {mapping or '(none)'}"
    if unassigned:
        text += f"; unassigned: {unassigned}"
    return MetricRows(
        "ospamt",
        report.total,
        report.loc,
        report.card,
        rows,
        text,
        {"direction": asg.direction.value, "n": report.n},
    )


_EVALUATORS = {"ospa": _eval_ospa, "ospat": _eval_ospat, "ospamt": _eval_ospamt}


def _params_from_args(args: argparse.Namespace) -> MetricParams:
    scale = None
    if args.scale:
        scale = tuple(float(v) for v in args.scale.split(","))
    return MetricParams(
        p=args.p,
        c=args.c,
        delta=args.delta,
        alpha=args.alpha,
        p_prime=args.p_prime,
        scale=scale,
    )


def _mode_from_args(args: argparse.Namespace) -> Mode:
    value = args.mode or os.environ.get("TRACKMETRIC_MODE") or "auto"
    try:
        return Mode(value)
    except ValueError:
        raise BadParametersError(f"unknown mode {value!r}") from None


def _emit_csv(results: list[MetricRows], at_time: int | None, out) -> None:
    writer = csv.writer(out)
    writer.writerow(CSV_HEADER)
    for res in results:
        for t, total, loc, card, n_t in res.rows:
            if at_time is not None and t != at_time:
                continue
            writer.writerow([t, res.name, f"{total!r}", f"{loc!r}", f"{card!r}", n_t])


def _emit_table(
    results: list[MetricRows],
    per_time: bool,
    at_time: int | None,
    report_assignment: bool,
    out,
) -> None:
    print(f"{'metric':8} {'total':>14} {'loc':>14} {'card':>14}", file=out)
    for res in results:
        print(
            f"{res.name:8} {res.total:14.6f} {res.loc:14.6f} {res.card:14.6f}",
            file=out,
        )
        for key, value in res.extra.items():
            print(f"  {key}: {value}", file=out)
    if per_time or at_time is not None:
        print(file=out)
        print(f"{'t':>4} {'metric':8} {'total':>14} {'loc':>14} {'card':>14} {'n_t':>4}", file=out)
        for res in results:
            for t, total, loc, card, n_t in res.rows:
                if at_time is not None and t != at_time:
                    continue
                print(
                    f"{t:4d} {res.name:8} {total:14.6f} {loc:14.6f} {card:14.6f} {n_t:4d}",
                    file=out,
                )
    if report_assignment:
        print(file=out)
        for res in results:
            print(f"{res.name} assignment: {res.assignment_text}", file=out)


def cmd_compute(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    mode = _mode_from_args(args)
    truth = load_track_set(args.truth)
    est = load_track_set(args.est)
    if truth.scans != est.scans:
        raise ScanMismatchError(
            f"scan counts differ: {args.truth} has {truth.scans}, "
            f"{args.est} has {est.scans}"
        )
    names = ["ospa", "ospat", "ospamt"] if args.metric == "all" else [args.metric]
    if args.jobs > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = [
                pool.submit(_EVALUATORS[name], truth, est, params, mode)
                for name in names
            ]
            results = [f.result() for f in futures]
    else:
        results = [_EVALUATORS[name](truth, est, params, mode) for name in names]
    if args.at_time is not None and not (1 <= args.at_time <= truth.scans):
        raise BadParametersError(
            f"--at-time {args.at_time} outside 1..{truth.scans}"
        )
    if args.output == "json":
        doc = {
            "params": {
                "p": params.p,
                "c": params.c,
                "delta": params.delta,
                "alpha": params.alpha,
                "p_prime": params.base_order,
                "scale": list(params.scale) if params.scale else None,
                "mode": mode.value,
            },
            "metrics": {
                res.name: {
                    "total": res.total,
                    "loc": res.loc,
                    "card": res.card,
                    "per_time": [
                        {"t": t, "total": tt, "loc": ll, "card": cc, "n_t": nn}
                        for t, tt, ll, cc, nn in res.rows
                    ],
                    "assignment": res.assignment_text,
                    **res.extra,
                }
                for res in results
            },
        }
        json.dump(doc, sys.stdout, indent=2)
        print()
    elif args.output == "csv":
        _emit_csv(results, args.at_time, sys.stdout)
    else:
        _emit_table(results, args.per_time, args.at_time, args.report_assignment, sys.stdout)
    return EXIT_OK


def cmd_scenario(args: argparse.Namespace) -> int:
    if args.figure == "random":
        if args.seed is None:
            raise BadParametersError("scenario random requires --seed")
        truth, est = random_scenario(
            seed=args.seed,
            n_truth=args.n_truth,
            scans=args.scans,
            miss_rate=args.miss_rate,
            false_rate=args.false_rate,
            break_rate=args.break_rate,
            noise=args.noise,
        )
        scenario = Scenario(truth, est)
    else:
        try:
            figure = FigureId(args.figure)
        except ValueError:
            raise BadParametersError(f"unknown figure id {args.figure!r}") from None
        spec = ScenarioSpec(
            figure, epsilon=args.epsilon, eta=args.eta, beta=args.beta, cutoff=args.c
        )
        scenario = build(spec)
    save_track_set(scenario.truth, args.truth)
    save_track_set(scenario.est, args.est)
    written = [args.truth, args.est]
    if scenario.alt is not None:
        if not args.alt:
            raise BadParametersError(
                f"figure {args.figure} defines a third set; pass --alt PATH"
            )
        save_track_set(scenario.alt, args.alt)
        written.append(args.alt)
    print("wrote " + ", ".join(str(w) for w in written))
    return EXIT_OK


def cmd_split(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    mode = _mode_from_args(args)
    truth = load_track_set(args.truth)
    est = load_track_set(args.est)
    new_est, log = split_tracks(truth, est, params, mode=mode)
    save_track_set(new_est, args.out)
    for entry in log:
        print(
            f"split {entry.track_label} into {entry.fragment_count} fragments "
            f"(cut at scans {', '.join(map(str, entry.cut_scans))})"
        )
    if not log:
        print("assignment already one-to-one; output equals input")
    report = ospamt_metric(truth, new_est, params, mode=mode)
    print(f"post-split ospamt total: {report.total!r}")
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    return EXIT_OK if run_selftest(verbose=True) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trackmetric",
        description="OSPAMT, OSPA and OSPAT distances between track-set files",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params(p: argparse.ArgumentParser) -> None:
        p.add_argument("--p", type=float, default=1.0, help="order parameter (default 1)")
        p.add_argument("--c", type=float, default=80.0, help="cutoff (default 80)")
        p.add_argument("--delta", type=float, default=10.0, help="extra-assignment penalty (default 10)")
        p.add_argument("--alpha", type=float, default=10.0, help="OSPAT label penalty (default 10)")
        p.add_argument("--p-prime", dest="p_prime", type=float, default=None,
                       help="base norm order (defaults to p)")
        p.add_argument("--scale", type=str, default=None,
                       help="comma-separated per-dimension scale factors")
        p.add_argument("--mode", choices=[m.value for m in Mode], default=None,
                       help="assignment search mode (default auto; env TRACKMETRIC_MODE)")

    comp = sub.add_parser("compute", help="score an estimate file against a truth file")
    comp.add_argument("truth")
    comp.add_argument("est")
    comp.add_argument("--metric", choices=["ospa", "ospat", "ospamt", "all"], default="ospamt")
    add_params(comp)
    comp.add_argument("--per-time", action="store_true", help="emit one row per scan")
    comp.add_argument("--at-time", type=int, default=None, help="restrict per-scan output to one scan")
    comp.add_argument("--output", choices=["table", "csv", "json"], default="table")
    comp.add_argument("--report-assignment", action="store_true")
    comp.add_argument("--jobs", type=int, default=1, help="evaluate metrics in parallel")
    comp.set_defaults(func=cmd_compute)

    scen = sub.add_parser("scenario", help="write a study scenario as track-set files")
    scen.add_argument("figure", help="figure id (fig1a..fig13) or 'random'")
    scen.add_argument("--truth", required=True)
    scen.add_argument("--est", required=True)
    scen.add_argument("--alt", default=None, help="third set output (fig13)")
    scen.add_argument("--epsilon", type=float, default=1.0)
    scen.add_argument("--eta", type=float, default=5.0)
    scen.add_argument("--beta", type=float, default=1000.0)
    scen.add_argument("--c", type=float, default=80.0)
    scen.add_argument("--seed", type=int, default=None, help="seed for 'random'")
    scen.add_argument("--n-truth", type=int, default=3)
    scen.add_argument("--scans", type=int, default=10)
    scen.add_argument("--miss-rate", type=float, default=0.0)
    scen.add_argument("--false-rate", type=float, default=0.0)
    scen.add_argument("--break-rate", type=float, default=0.0)
    scen.add_argument("--noise", type=float, default=0.0)
    scen.set_defaults(func=cmd_scenario)

    spl = sub.add_parser("split", help="split estimated tracks covering several truths")
    spl.add_argument("truth")
    spl.add_argument("est")
    spl.add_argument("--out", required=True)
    add_params(spl)
    spl.set_defaults(func=cmd_split)

    self_p = sub.add_parser("selftest", help="replay the golden tables")
    self_p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, ScanMismatchError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NoConvergenceError as exc:
        print(f"split did not converge: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (BadParametersError, TooLargeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TrackMetricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
