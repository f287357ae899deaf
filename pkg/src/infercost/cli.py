"""Command-line entry point.

Exit status: 0 success, 1 input or validation error, 2 infeasible decision.
Data goes to stdout (or ``--out``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import cost, harness, ingest, report, stats
from .domain import ConstraintSet, BenchmarkRecord, validate_constraints
from .errors import InferCostError, MissingPrice, ValidationError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2


class CliError(Exception):
    pass


def _read(path: str, loader):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    try:
        return loader(text)
    except ValidationError as exc:
        where = f"{path}:{exc.line}" if exc.line is not None else path
        raise CliError(f"{where}: {type(exc).__name__}: {exc.message}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"{path}: cannot write: {exc.strerror}") from None


def _records(args, need_workload: bool = True) -> List[BenchmarkRecord]:
    records = _read(args.records, ingest.parse_records_csv)
    if not records:
        raise CliError(f"{args.records}: no records")
    workloads = sorted({r.workload_id for r in records})
    if args.workload is not None:
        records = [r for r in records if r.workload_id == args.workload]
        if not records:
            raise CliError(f"{args.records}: no records for workload {args.workload!r} (have {', '.join(workloads)})")
    elif need_workload and len(workloads) > 1:
        raise CliError(f"{args.records}: several workloads present ({', '.join(workloads)}); pass --workload")
    return records


def _pricing(args) -> ingest.PricingTable:
    return _read(args.pricing, lambda t: ingest.average_pricing(ingest.parse_pricing_json(t)))


def _constraints(args, with_latency: bool = True) -> ConstraintSet:
    raw = {
        "max_latency_ms": args.max_latency if with_latency else None,
        "min_metric": args.min_metric,
        "allowed_precisions": args.precisions,
        "os_filter": args.os,
    }
    return validate_constraints({k: v for k, v in raw.items() if v is not None})


# --- commands ---------------------------------------------------------------------


def cmd_decide(args) -> int:
    records = _records(args)
    decision = cost.select_optimal(records, _pricing(args), _constraints(args))
    print(report.format_decision(decision))
    return EXIT_OK if isinstance(decision, cost.Optimal) else EXIT_INFEASIBLE


def cmd_sweep(args) -> int:
    records = _records(args)
    curve = cost.decision_curve(records, _pricing(args), _constraints(args, with_latency=False))
    text = report.format_curve_csv(curve)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    if args.svg:
        from .plot import plot_curve_svg

        _write(args.svg, plot_curve_svg(curve, title=f"Decision curve: {records[0].workload_id}"))
    return EXIT_OK


def cmd_compare(args) -> int:
    records = _records(args)
    base = report.Selector.parse(args.baseline).resolve(records)
    target = report.Selector.parse(args.target).resolve(records)
    lat = cost.relative_change(target.latency_ms_per_img, base.latency_ms_per_img)
    cost_change = None
    if args.pricing:
        pricing = _pricing(args)
        cost_change = cost.relative_change(
            cost.price(target, pricing).cost_per_million_usd, cost.price(base, pricing).cost_per_million_usd
        )
    print(report.format_comparison(target, base, lat, cost_change))
    return EXIT_OK


def cmd_equivalence(args) -> int:
    pairs = _read(args.pairs, ingest.parse_pairs_csv)
    print(report.format_wilcoxon(stats.wilcoxon_signed_rank(pairs, args.alpha)))
    return EXIT_OK


def cmd_bench(args) -> int:
    spec = harness.parse_backend_spec(args.backend)
    plan = harness.TrialPlan(iterations=args.iterations, warmup=args.warmup, seed=args.seed)
    backend = harness.make_synthetic(spec, seed=args.seed)
    series = harness.run_trial(backend, plan)
    text = ingest.format_timing_csv(series)
    summary = report.format_summary(stats.summarize(series), series.label)
    if args.out:
        _write(args.out, text)
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_report(args) -> int:
    records = _records(args, need_workload=False)
    pricing = _pricing(args)
    constraints = _constraints(args)
    doc = report.ReportDocument(format=args.format)
    doc.sections.append(report.comparison_table(records, pricing))
    workloads = list(dict.fromkeys(r.workload_id for r in records))
    for wl in workloads:
        subset = [r for r in records if r.workload_id == wl]
        doc.sections.append(report.DecisionStatement(wl, cost.select_optimal(subset, pricing, constraints)))
    if args.svg:
        from .plot import plot_curve_svg

        for wl in workloads:
            subset = [r for r in records if r.workload_id == wl]
            curve = cost.decision_curve(subset, pricing, constraints.with_max_latency(None))
            path = args.svg if len(workloads) == 1 else str(Path(args.svg).with_suffix("")) + f"-{wl}.svg"
            _write(path, plot_curve_svg(curve, title=f"Decision curve: {wl}"))
            doc.sections.append(report.CurveReference(wl, path, len(curve)))
    if args.pairs:
        pairs = _read(args.pairs, ingest.parse_pairs_csv)
        doc.sections.append(report.EquivalenceSummary(stats.wilcoxon_signed_rank(pairs, args.alpha)))
    text = doc.render()
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="infercost", description="Cost-optimal inference hardware selection.")
    sub = p.add_subparsers(dest="command", required=True)

    def data_flags(sp, pricing=True, pricing_required=True):
        sp.add_argument("--records", required=True, help="records CSV")
        if pricing:
            sp.add_argument("--pricing", required=pricing_required, help="pricing JSON")
        sp.add_argument("--workload", help="workload id to analyse")

    def constraint_flags(sp, latency=True):
        if latency:
            sp.add_argument("--max-latency", type=float, help="latency bound, ms/img")
        sp.add_argument("--min-metric", type=float, help="output metric floor, fraction in [0, 1]")
        sp.add_argument("--precisions", help="comma separated, e.g. fp32,fp16")
        sp.add_argument("--os", choices=["linux", "windows"])

    sp = sub.add_parser("decide", help="pick the cheapest configuration meeting the constraints")
    data_flags(sp)
    constraint_flags(sp)
    sp.set_defaults(func=cmd_decide)

    sp = sub.add_parser("sweep", help="decision curve over all latency limits")
    data_flags(sp)
    constraint_flags(sp, latency=False)
    sp.add_argument("--out", help="curve CSV path (default stdout)")
    sp.add_argument("--svg", help="write the curve plot here")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("compare", help="relative latency (and cost) change against a named baseline")
    data_flags(sp, pricing_required=False)
    sp.add_argument("--baseline", required=True, help="config[:precision[:os]]")
    sp.add_argument("--target", required=True, help="config[:precision[:os]]")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("equivalence", help="paired Wilcoxon signed-rank test on model outputs")
    sp.add_argument("--pairs", required=True, help="pairs CSV")
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.set_defaults(func=cmd_equivalence)

    sp = sub.add_parser("bench", help="time a synthetic backend")
    sp.add_argument("backend", help=harness.SPEC_GRAMMAR)
    sp.add_argument("--iterations", type=int, default=harness.DEFAULT_ITERATIONS)
    sp.add_argument("--warmup", type=int, default=harness.DEFAULT_WARMUP)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="timing CSV path (default stdout)")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("report", help="comparison table, decisions and optional curve/test sections")
    data_flags(sp)
    constraint_flags(sp)
    sp.add_argument("--format", choices=["md", "csv"], default="md")
    sp.add_argument("--out", help="report path (default stdout)")
    sp.add_argument("--svg", help="write decision curve plot(s) here")
    sp.add_argument("--pairs", help="pairs CSV for an equivalence section")
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.set_defaults(func=cmd_report)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except MissingPrice as exc:
        print(f"error: MissingPrice: {exc}", file=sys.stderr)
    except InferCostError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_INPUT
