"""Inference cost model and hardware selection.

The cost of running ``n`` images is ``latency x n x hourly price``, with the
latency converted from milliseconds to hours. Per million images this reduces
to ``latency_ms * usd_per_hour / 3.6``.

Selection picks the cheapest record that satisfies a :class:`ConstraintSet`.
Sweeping the latency bound gives a step function (:class:`DecisionCurve`)
whose only possible breakpoints are the candidate latencies.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, replace
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .domain import BenchmarkRecord, ConstraintSet, MoneyRate
from .errors import EmptyList, EmptyRecordSet, NonFiniteInput, ValidationError, ZeroBaseline
from .ingest import PricingTable

MS_PER_HOUR = 3.6e6
MILLION = 1_000_000

# relative band within which two costs count as tied
COST_REL_TOL = 1e-9


def cost_per_images(latency_ms_per_img: float, rate: Union[MoneyRate, float], n_images: int = MILLION) -> float:
    """USD to process ``n_images`` at ``latency_ms_per_img`` on hardware billed at ``rate``."""
    usd_per_hour = rate.usd_per_hour if isinstance(rate, MoneyRate) else float(rate)
    for name, v in (("latency_ms_per_img", latency_ms_per_img), ("rate", usd_per_hour), ("n_images", n_images)):
        if not math.isfinite(v):
            raise NonFiniteInput(f"{name} must be finite, got {v!r}", field=name)
    if latency_ms_per_img <= 0:
        raise ValidationError(f"latency_ms_per_img must be > 0, got {latency_ms_per_img!r}", field="latency_ms_per_img")
    if usd_per_hour < 0:
        raise ValidationError(f"rate must be >= 0, got {usd_per_hour!r}", field="rate")
    if n_images <= 0:
        raise ValidationError(f"n_images must be > 0, got {n_images!r}", field="n_images")
    return latency_ms_per_img * n_images * usd_per_hour / MS_PER_HOUR


@dataclass(frozen=True)
class CostedCandidate:
    record: BenchmarkRecord
    rate: MoneyRate
    cost_per_million_usd: float

    @property
    def latency_ms(self) -> float:
        return self.record.latency_ms_per_img

    @property
    def config_id(self) -> str:
        return self.record.config_id

    @property
    def point(self) -> Tuple[float, float]:
        return (self.record.latency_ms_per_img, self.cost_per_million_usd)


@dataclass(frozen=True)
class Optimal:
    candidate: CostedCandidate

    is_feasible = True


@dataclass(frozen=True)
class Infeasible:
    reason: str
    # smallest latency among records passing the non-latency filters
    min_latency_ms: Optional[float] = None

    is_feasible = False


Decision = Union[Optimal, Infeasible]


def price(record: BenchmarkRecord, pricing: PricingTable) -> CostedCandidate:
    rate = pricing.rate(record.config_id)
    return CostedCandidate(record, rate, cost_per_images(record.latency_ms_per_img, rate, MILLION))


def price_all(records: Iterable[BenchmarkRecord], pricing: PricingTable) -> List[CostedCandidate]:
    return [price(r, pricing) for r in records]


def passes_filters(record: BenchmarkRecord, constraints: ConstraintSet) -> bool:
    """Every constraint except the latency bound."""
    if constraints.min_metric is not None and record.metric_score < constraints.min_metric:
        return False
    if record.precision not in constraints.allowed_precisions:
        return False
    if constraints.os_filter is not None and record.os is not constraints.os_filter:
        return False
    return True


def feasible(record: BenchmarkRecord, constraints: ConstraintSet) -> bool:
    if constraints.max_latency_ms is not None and record.latency_ms_per_img > constraints.max_latency_ms:
        return False
    return passes_filters(record, constraints)


def _tiebreak_key(c: CostedCandidate):
    r = c.record
    # exact cost after latency keeps the pick non-dominated inside the tie band
    return (r.latency_ms_per_img, c.cost_per_million_usd, r.config_id, r.precision.order, r.os.value)


def _pick(candidates: Sequence[CostedCandidate]) -> CostedCandidate:
    best = min(c.cost_per_million_usd for c in candidates)
    band = best + abs(best) * COST_REL_TOL
    return min((c for c in candidates if c.cost_per_million_usd <= band), key=_tiebreak_key)


def _select_from_priced(priced: Sequence[CostedCandidate], constraints: ConstraintSet) -> Decision:
    filtered = [c for c in priced if passes_filters(c.record, constraints)]
    if not filtered:
        return Infeasible("no configuration meets the metric, precision and OS filters")
    ok = [c for c in filtered if feasible(c.record, constraints)]
    min_latency = min(c.latency_ms for c in filtered)
    if not ok:
        return Infeasible(
            f"no configuration meets the latency limit of {constraints.max_latency_ms} ms/img", min_latency
        )
    return Optimal(_pick(ok))


def select_optimal(
    records: Sequence[BenchmarkRecord], pricing: PricingTable, constraints: ConstraintSet = ConstraintSet()
) -> Decision:
    """Cheapest feasible record, or :class:`Infeasible` if none qualifies.

    Costs within a relative 1e-9 of the minimum are tied; ties go to the
    lower latency, then config id, then fp32 before fp16.
    """
    if not records:
        raise EmptyRecordSet("no benchmark records given")
    return _select_from_priced(price_all(records, pricing), constraints)


def same_decision(a: Decision, b: Decision) -> bool:
    if isinstance(a, Infeasible) or isinstance(b, Infeasible):
        return isinstance(a, Infeasible) and isinstance(b, Infeasible)
    return a.candidate.record.key == b.candidate.record.key


@dataclass(frozen=True)
class Segment:
    t_min_ms: float
    t_max_ms: float  # math.inf for the last segment
    decision: Decision

    def contains(self, t: float) -> bool:
        # closed on the left: a record with latency exactly t is feasible at t
        return self.t_min_ms <= t < self.t_max_ms


@dataclass(frozen=True)
class DecisionCurve:
    """Optimal decision as a function of the latency limit, over (0, inf)."""

    segments: Tuple[Segment, ...]

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    @property
    def breakpoints(self) -> List[float]:
        return [s.t_min_ms for s in self.segments[1:]]

    def decision_at(self, t: float) -> Decision:
        if not t > 0:
            raise ValueError(f"latency limit must be > 0, got {t!r}")
        return self.segments[bisect.bisect_right(self.breakpoints, t)].decision


def decision_curve(
    records: Sequence[BenchmarkRecord], pricing: PricingTable, base_constraints: ConstraintSet = ConstraintSet()
) -> DecisionCurve:
    """Sweep the latency limit over (0, inf) and return the maximal constant segments."""
    if not records:
        raise EmptyRecordSet("no benchmark records given")
    if base_constraints.max_latency_ms is not None:
        raise ValidationError("decision_curve sweeps the latency bound; pass constraints without one")
    priced = price_all(records, pricing)
    cuts = sorted({c.latency_ms for c in priced if passes_filters(c.record, base_constraints)})
    if not cuts:
        return DecisionCurve((Segment(0.0, math.inf, _select_from_priced(priced, base_constraints)),))

    bounds = [0.0] + cuts + [math.inf]
    raw: List[Segment] = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        # any T in [lo, hi) sees the same feasible set; probe at lo (or mid-interval for the first)
        probe = hi / 2 if lo == 0.0 else lo
        decision = _select_from_priced(priced, base_constraints.with_max_latency(probe))
        if isinstance(decision, Infeasible) and lo == 0.0:
            # describe the whole interval, not the probe point
            decision = replace(decision, reason=f"no configuration meets a latency limit below {hi} ms/img")
        raw.append(Segment(lo, hi, decision))

    merged = [raw[0]]
    for seg in raw[1:]:
        last = merged[-1]
        if same_decision(last.decision, seg.decision):
            merged[-1] = Segment(last.t_min_ms, seg.t_max_ms, last.decision)
        else:
            merged.append(seg)
    return DecisionCurve(tuple(merged))


@dataclass(frozen=True)
class ParetoFrontier:
    """Non-dominated (latency, cost) candidates, latency ascending, cost strictly decreasing."""

    candidates: Tuple[CostedCandidate, ...]

    @property
    def points(self) -> List[Tuple[float, float]]:
        return [c.point for c in self.candidates]


def pareto_frontier(records: Sequence[BenchmarkRecord], pricing: PricingTable) -> ParetoFrontier:
    priced = sorted(price_all(records, pricing), key=lambda c: (c.latency_ms, c.cost_per_million_usd) + _tiebreak_key(c)[2:])
    kept = []
    best = math.inf
    for c in priced:
        if c.cost_per_million_usd < best:
            kept.append(c)
            best = c.cost_per_million_usd
    return ParetoFrontier(tuple(kept))


def relative_change(value: float, baseline: float) -> float:
    """Signed fractional change of ``value`` against ``baseline``."""
    if baseline == 0:
        raise ZeroBaseline("baseline must be nonzero")
    return (value - baseline) / baseline


def mean_relative_change(pairs: Sequence[Tuple[float, float]]) -> float:
    """Arithmetic mean of :func:`relative_change` over ``(value, baseline)`` pairs."""
    if not pairs:
        raise EmptyList("no (value, baseline) pairs given")
    return math.fsum(relative_change(v, b) for v, b in pairs) / len(pairs)
