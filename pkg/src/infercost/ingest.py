"""Readers and writers for the external data files, plus price averaging.

File formats (UTF-8, comma separated, mandatory header, no quoting):

* records CSV  ``workload,config,precision,os,latency_ms_per_img,metric,samples``
* timing CSV   ``iteration,latency_ms``
* pairs CSV    ``id,output_a,output_b``
* pricing JSON ``{"quotes": [{"provider": ..., "config": ..., "usd_per_hour": ...}]}``

Writers emit the canonical form: floats via ``repr`` so that a
parse/serialize cycle reproduces the text byte for byte.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .domain import BenchmarkRecord, HardwareConfig, MoneyRate, check_identifier, validate_record
from .errors import (
    DuplicateId,
    EmptyPairs,
    EmptyQuoteList,
    MalformedHeader,
    MalformedRow,
    MissingPrice,
    NonPositiveLatency,
    UnknownConfig,
    ValidationError,
    WarmupExceedsLength,
)

RECORDS_HEADER = ("workload", "config", "precision", "os", "latency_ms_per_img", "metric", "samples")
TIMING_HEADER = ("iteration", "latency_ms")
PAIRS_HEADER = ("id", "output_a", "output_b")

_RECORD_FIELDS = ("workload_id", "config_id", "precision", "os", "latency_ms_per_img", "metric_score", "samples")


@dataclass(frozen=True)
class PricingQuote:
    provider: str
    config_id: str
    rate: MoneyRate

    def __post_init__(self) -> None:
        if not self.provider:
            raise ValidationError("provider must be non-empty", field="provider")
        check_identifier(self.config_id, "config_id")


@dataclass(frozen=True)
class PricingTable:
    """Averaged hourly rate per hardware config."""

    rates: Mapping[str, MoneyRate]

    def rate(self, config_id: str) -> MoneyRate:
        try:
            return self.rates[config_id]
        except KeyError:
            raise MissingPrice(config_id) from None

    def __contains__(self, config_id: object) -> bool:
        return config_id in self.rates

    def scaled(self, factor: float) -> "PricingTable":
        return PricingTable({k: MoneyRate(v.usd_per_hour * factor) for k, v in self.rates.items()})

    @classmethod
    def from_usd_per_hour(cls, rates: Mapping[str, float]) -> "PricingTable":
        return cls({k: MoneyRate(float(v)) for k, v in rates.items()})


@dataclass(frozen=True)
class MeasurementSeries:
    """Raw per-iteration latencies. Warmup samples are kept and only flagged."""

    latencies_ms: Tuple[float, ...]
    warmup_count: int = 0
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "latencies_ms", tuple(float(x) for x in self.latencies_ms))
        for i, x in enumerate(self.latencies_ms):
            if not x > 0 or math.isinf(x):
                raise NonPositiveLatency(f"latency #{i + 1} must be finite and > 0, got {x!r}", field="latency_ms")
        if self.warmup_count < 0:
            raise ValidationError(f"warmup must be >= 0, got {self.warmup_count}", field="warmup")
        if self.warmup_count >= len(self.latencies_ms):
            raise WarmupExceedsLength(
                f"warmup {self.warmup_count} must be < number of samples {len(self.latencies_ms)}", field="warmup"
            )

    def __len__(self) -> int:
        return len(self.latencies_ms)

    @property
    def post_warmup(self) -> Tuple[float, ...]:
        return self.latencies_ms[self.warmup_count:]


@dataclass(frozen=True)
class PairedOutputs:
    ids: Tuple[str, ...]
    side_a: Tuple[float, ...]
    side_b: Tuple[float, ...]

    def __post_init__(self) -> None:
        for name in ("ids", "side_a", "side_b"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.ids:
            raise EmptyPairs("at least one pair is required")
        if not (len(self.ids) == len(self.side_a) == len(self.side_b)):
            raise ValidationError("ids, side_a and side_b must have equal lengths")
        seen = set()
        for id_ in self.ids:
            if id_ in seen:
                raise DuplicateId(f"duplicate id {id_!r}", field="id")
            seen.add(id_)

    def __len__(self) -> int:
        return len(self.ids)


# --- pricing ---------------------------------------------------------------


def average_pricing(
    quotes: Sequence[PricingQuote], catalog: Optional[Mapping[str, HardwareConfig]] = None
) -> PricingTable:
    """Unweighted arithmetic mean of all quotes per config.

    Callers wanting a weighted average can repeat quotes. When ``catalog`` is
    given, quotes for configs missing from it raise :class:`UnknownConfig`.
    """
    if not quotes:
        raise EmptyQuoteList("no pricing quotes given")
    grouped: Dict[str, List[float]] = defaultdict(list)
    for q in quotes:
        if catalog is not None and q.config_id not in catalog:
            raise UnknownConfig(f"quote for unknown config {q.config_id!r}", field="config")
        grouped[q.config_id].append(q.rate.usd_per_hour)
    # math.fsum keeps the mean independent of quote order
    return PricingTable({cid: MoneyRate(math.fsum(v) / len(v)) for cid, v in sorted(grouped.items())})


def parse_pricing_json(text: str) -> List[PricingQuote]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("quotes"), list):
        raise ValidationError('pricing file must be an object with a "quotes" list', field="quotes")
    quotes = []
    for i, q in enumerate(doc["quotes"]):
        try:
            rate = q["usd_per_hour"]
            if isinstance(rate, bool) or not isinstance(rate, (int, float)):
                raise ValidationError(f"usd_per_hour must be a number, got {rate!r}", field="usd_per_hour")
            quotes.append(PricingQuote(str(q["provider"]), q["config"], MoneyRate(float(rate))))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"quote #{i + 1}: missing or malformed field {exc}", field="quotes") from None
        except ValidationError as exc:
            exc.message = f"quote #{i + 1}: {exc.message}"
            raise
    return quotes


def format_pricing_json(quotes: Iterable[PricingQuote]) -> str:
    doc = {
        "quotes": [
            {"provider": q.provider, "config": q.config_id, "usd_per_hour": q.rate.usd_per_hour} for q in quotes
        ]
    }
    return json.dumps(doc, indent=2) + "\n"


def load_pricing(path: Union[str, Path], catalog: Optional[Mapping[str, HardwareConfig]] = None) -> PricingTable:
    return average_pricing(parse_pricing_json(Path(path).read_text(encoding="utf-8")), catalog)


# --- CSV plumbing ------------------------------------------------------------


def _rows(text: str, header: Tuple[str, ...]) -> Iterable[Tuple[int, List[str]]]:
    lines = text.splitlines()
    if not lines or tuple(c.strip() for c in lines[0].split(",")) != header:
        got = lines[0] if lines else ""
        raise MalformedHeader(f"expected header {','.join(header)!r}, got {got!r}", line=1)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != len(header):
            raise MalformedRow(f"expected {len(header)} columns, got {len(cells)}", line=lineno)
        yield lineno, cells


def _float_cell(cell: str, name: str, lineno: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise MalformedRow(f"{name}: not a number: {cell!r}", field=name, line=lineno) from None


def _fmt(x: float) -> str:
    return repr(float(x))


# --- records -----------------------------------------------------------------


def parse_records_csv(text: str) -> List[BenchmarkRecord]:
    records = []
    seen: set = set()
    for lineno, cells in _rows(text, RECORDS_HEADER):
        try:
            records.append(validate_record(dict(zip(_RECORD_FIELDS, cells)), seen))
        except ValidationError as exc:
            exc.line = lineno
            raise
    return records


def format_records_csv(records: Iterable[BenchmarkRecord]) -> str:
    out = [",".join(RECORDS_HEADER)]
    for r in records:
        out.append(
            ",".join(
                [
                    r.workload_id,
                    r.config_id,
                    r.precision.value,
                    r.os.value,
                    _fmt(r.latency_ms_per_img),
                    _fmt(r.metric_score),
                    str(r.samples),
                ]
            )
        )
    return "\n".join(out) + "\n"


def load_records(path: Union[str, Path]) -> List[BenchmarkRecord]:
    return parse_records_csv(Path(path).read_text(encoding="utf-8"))


# --- timing ------------------------------------------------------------------


def parse_timing_csv(text: str, warmup: int = 0, label: str = "") -> MeasurementSeries:
    latencies = []
    for lineno, (it, lat) in _rows(text, TIMING_HEADER):
        try:
            int(it)
        except ValueError:
            raise MalformedRow(f"iteration: not an integer: {it!r}", field="iteration", line=lineno) from None
        value = _float_cell(lat, "latency_ms", lineno)
        if not value > 0 or math.isinf(value):
            raise NonPositiveLatency(f"latency_ms must be finite and > 0, got {lat}", field="latency_ms", line=lineno)
        latencies.append(value)
    return MeasurementSeries(tuple(latencies), warmup, label)


def format_timing_csv(series: MeasurementSeries) -> str:
    out = [",".join(TIMING_HEADER)]
    out.extend(f"{i},{_fmt(x)}" for i, x in enumerate(series.latencies_ms, start=1))
    return "\n".join(out) + "\n"


# --- pairs -------------------------------------------------------------------


def parse_pairs_csv(text: str) -> PairedOutputs:
    ids, a, b = [], [], []
    seen = set()
    for lineno, (id_, xa, xb) in _rows(text, PAIRS_HEADER):
        if not id_:
            raise MalformedRow("empty id", field="id", line=lineno)
        if id_ in seen:
            raise DuplicateId(f"duplicate id {id_!r}", field="id", line=lineno)
        seen.add(id_)
        ids.append(id_)
        a.append(_float_cell(xa, "output_a", lineno))
        b.append(_float_cell(xb, "output_b", lineno))
    if not ids:
        raise EmptyPairs("pairs file has no rows; the test needs at least one pair")
    return PairedOutputs(tuple(ids), tuple(a), tuple(b))


def format_pairs_csv(pairs: PairedOutputs) -> str:
    out = [",".join(PAIRS_HEADER)]
    out.extend(f"{i},{_fmt(x)},{_fmt(y)}" for i, x, y in zip(pairs.ids, pairs.side_a, pairs.side_b))
    return "\n".join(out) + "\n"
