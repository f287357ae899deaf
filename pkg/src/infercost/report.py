"""Text renderings of library results.

All numeric work happens in the library modules; functions here only format.
Latency and money are shown with 2 decimals, percentages with 1.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .cost import Decision, DecisionCurve, Infeasible, Optimal, price
from .domain import OS, BenchmarkRecord, Precision, parse_os, parse_precision
from .errors import AmbiguousSelector, NoMatch, ValidationError
from .ingest import PricingTable
from .stats import LatencySummary, WilcoxonResult

CURVE_HEADER = ("t_min_ms", "t_max_ms", "decision", "config", "precision", "cost_usd_per_million")


def fmt_ms(x: float) -> str:
    return f"{x:.2f}"


def fmt_usd(x: float) -> str:
    return f"{x:.2f}"


def fmt_pct(fraction: float) -> str:
    return f"{fraction * 100:+.1f}%"


def _fmt_t(x: float) -> str:
    return "inf" if math.isinf(x) else repr(float(x))


# --- decisions --------------------------------------------------------------------


def format_decision(decision: Decision) -> str:
    if isinstance(decision, Optimal):
        c = decision.candidate
        return f"{c.record.config_id} {c.record.precision.value} {fmt_ms(c.latency_ms)} ms/img ${fmt_usd(c.cost_per_million_usd)}/M"
    msg = f"infeasible: {decision.reason}"
    if decision.min_latency_ms is not None:
        msg += f" (minimum achievable latency {fmt_ms(decision.min_latency_ms)} ms/img)"
    return msg


def format_curve_csv(curve: DecisionCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_HEADER)
    for seg in curve:
        if isinstance(seg.decision, Optimal):
            c = seg.decision.candidate
            row = ["optimal", c.record.config_id, c.record.precision.value, fmt_usd(c.cost_per_million_usd)]
        else:
            row = ["infeasible", "", "", ""]
        w.writerow([_fmt_t(seg.t_min_ms), _fmt_t(seg.t_max_ms)] + row)
    return buf.getvalue()


def parse_curve_csv(text: str) -> List[Tuple[float, float, str, str, str, Optional[float]]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CURVE_HEADER:
        raise ValidationError("bad decision curve header", line=1)
    out = []
    for t_min, t_max, decision, config, precision, cost in rows[1:]:
        out.append((float(t_min), float(t_max), decision, config, precision, float(cost) if cost else None))
    return out


# --- relative change ----------------------------------------------------------------


@dataclass(frozen=True)
class Selector:
    """``config[:precision[:os]]`` narrowing a record set for one workload."""

    config_id: str
    precision: Optional[Precision] = None
    os: Optional[OS] = None

    @classmethod
    def parse(cls, text: str) -> "Selector":
        parts = text.split(":")
        if not 1 <= len(parts) <= 3 or not parts[0]:
            raise ValidationError(f"selector must be config[:precision[:os]], got {text!r}", field="selector")
        precision = parse_precision(parts[1]) if len(parts) > 1 and parts[1] else None
        os_ = parse_os(parts[2]) if len(parts) > 2 and parts[2] else None
        return cls(parts[0], precision, os_)

    def __str__(self) -> str:
        return ":".join(p for p in (self.config_id, self.precision and self.precision.value, self.os and self.os.value) if p)

    def resolve(self, records: Sequence[BenchmarkRecord], workload: Optional[str] = None) -> BenchmarkRecord:
        hits = [
            r
            for r in records
            if r.config_id == self.config_id
            and (workload is None or r.workload_id == workload)
            and (self.precision is None or r.precision is self.precision)
            and (self.os is None or r.os is self.os)
        ]
        if not hits:
            raise NoMatch(f"selector {self} matches no record", field="selector")
        if len(hits) > 1:
            keys = ", ".join(f"{r.workload_id}/{r.config_id}/{r.precision.value}/{r.os.value}" for r in hits)
            raise AmbiguousSelector(f"selector {self} matches {len(hits)} records: {keys}", field="selector")
        return hits[0]


def format_comparison(
    target: BenchmarkRecord,
    baseline: BenchmarkRecord,
    latency_change: float,
    cost_change: Optional[float] = None,
) -> str:
    def name(r):
        return f"{r.config_id} {r.precision.value} {r.os.value}"

    lines = [
        f"{fmt_pct(latency_change)} latency: {name(target)} {fmt_ms(target.latency_ms_per_img)} ms/img "
        f"vs baseline {name(baseline)} {fmt_ms(baseline.latency_ms_per_img)} ms/img"
    ]
    if cost_change is not None:
        lines.append(f"{fmt_pct(cost_change)} cost vs baseline {name(baseline)}")
    return "\n".join(lines)


# --- stats ------------------------------------------------------------------------


def format_wilcoxon(result: WilcoxonResult) -> str:
    if result.reject_at_alpha:
        verdict = f"different: significant output difference at alpha={result.alpha:g}"
    else:
        verdict = f"equivalent: no significant output difference at alpha={result.alpha:g}"
    return "\n".join(
        [
            f"w_plus: {result.w_plus:g}",
            f"n_effective: {result.n_effective}",
            f"p_value: {result.p_value:.4f}",
            f"method: {result.method.value}",
            f"verdict: {verdict}",
        ]
    )


def format_summary(summary: LatencySummary, label: str = "") -> str:
    head = f"{label}: " if label else ""
    return (
        f"{head}mean {summary.mean_ms:.3f} ms, median {summary.median_ms:.3f} ms, "
        f"stddev {summary.stddev_ms:.3f} ms over {summary.n_used} samples "
        f"({summary.n_discarded_warmup} warmup discarded)"
    )


# --- comparison table ------------------------------------------------------------------


@dataclass
class ComparisonTable:
    """Latency and cost rows per workload, one column per configuration."""

    columns: List[str]
    rows: List[Tuple[str, str, List[str]]]  # (workload, quantity, cells)
    title: str = "Inference time and cost per configuration"

    def to_markdown(self) -> str:
        head = ["workload", "quantity"] + self.columns
        out = [f"### {self.title}", "", "| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
        for wl, qty, cells in self.rows:
            out.append("| " + " | ".join([wl, qty] + cells) + " |")
        return "\n".join(out)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["workload", "quantity"] + self.columns)
        for wl, qty, cells in self.rows:
            w.writerow([wl, qty] + cells)
        return buf.getvalue().rstrip("\n")


@dataclass
class DecisionStatement:
    workload: str
    decision: Decision

    def to_markdown(self) -> str:
        return f"**{self.workload}**: {format_decision(self.decision)}"

    def to_csv(self) -> str:
        d = self.decision
        if isinstance(d, Optimal):
            c = d.candidate
            row = [self.workload, "optimal", c.config_id, c.record.precision.value, fmt_ms(c.latency_ms), fmt_usd(c.cost_per_million_usd)]
        else:
            row = [self.workload, "infeasible", "", "", "", ""]
        return ",".join(row)


@dataclass
class CurveReference:
    workload: str
    path: str
    n_segments: int

    def to_markdown(self) -> str:
        return f"Decision curve for {self.workload} ({self.n_segments} segments): `{self.path}`"

    def to_csv(self) -> str:
        return f"{self.workload},curve,{self.path},{self.n_segments}"


@dataclass
class EquivalenceSummary:
    result: WilcoxonResult

    def to_markdown(self) -> str:
        return "```\n" + format_wilcoxon(self.result) + "\n```"

    def to_csv(self) -> str:
        r = self.result
        return f"wilcoxon,{r.w_plus:g},{r.n_effective},{r.p_value:.4f},{r.method.value},{r.reject_at_alpha}"


Section = Union[ComparisonTable, DecisionStatement, CurveReference, EquivalenceSummary]


@dataclass
class ReportDocument:
    sections: List[Section] = field(default_factory=list)
    format: str = "md"

    def render(self) -> str:
        if self.format not in ("md", "csv"):
            raise ValidationError(f"unknown report format {self.format!r}", field="format")
        if self.format == "md":
            return "\n\n".join(s.to_markdown() for s in self.sections) + "\n"
        return "\n".join(s.to_csv() for s in self.sections) + "\n"


def _column_key(r: BenchmarkRecord, show_os: bool) -> str:
    label = f"{r.config_id} {r.precision.value}"
    return f"{label} ({r.os.value})" if show_os else label


def comparison_table(records: Sequence[BenchmarkRecord], pricing: Optional[PricingTable]) -> ComparisonTable:
    """Table-1 shaped grid; without ``pricing`` only latency rows are produced."""
    show_os = len({r.os for r in records}) > 1
    columns: List[str] = []
    by_workload: Dict[str, Dict[str, BenchmarkRecord]] = {}
    for r in records:
        col = _column_key(r, show_os)
        if col not in columns:
            columns.append(col)
        by_workload.setdefault(r.workload_id, {})[col] = r

    rows = []
    for wl, cells in by_workload.items():
        rows.append((wl, "latency (ms/img)", [fmt_ms(cells[c].latency_ms_per_img) if c in cells else "-" for c in columns]))
        if pricing is not None:
            costs = [fmt_usd(price(cells[c], pricing).cost_per_million_usd) if c in cells else "-" for c in columns]
            rows.append((wl, "cost ($/million images)", costs))
    return ComparisonTable(columns, rows)


def render_table(records: Sequence[BenchmarkRecord], pricing: Optional[PricingTable], format: str = "md") -> ReportDocument:
    return ReportDocument([comparison_table(records, pricing)], format)
