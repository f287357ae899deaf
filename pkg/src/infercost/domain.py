"""Validated domain types shared across the package.

Units are fixed: latency in milliseconds per image, money in US dollars,
output metrics as fractions in [0, 1]. All types are frozen dataclasses that
check their invariants on construction; the ``validate_*`` functions accept
loosely typed raw mappings (e.g. strings read from a CSV row) and convert
them before construction.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, FrozenSet, Iterable, Mapping, Optional, Set, Tuple

from .errors import (
    DuplicateKey,
    EmptyPrecisionSet,
    MetricOutOfRange,
    NegativeLatencyBound,
    NegativeRate,
    NonFiniteInput,
    NonPositiveLatency,
    UnknownPrecision,
    ValidationError,
)

# absolute slack on range bounds, so values like 1.0 + 1e-12 read from text still pass
ABS_TOL = 1e-9

_IDENT_RE = re.compile(r"^[A-Za-z0-9_-]+$")


class Precision(str, Enum):
    FP32 = "fp32"
    FP16 = "fp16"

    @property
    def order(self) -> int:
        # tie-break rank: fp32 before fp16
        return 0 if self is Precision.FP32 else 1


class OS(str, Enum):
    LINUX = "linux"
    WINDOWS = "windows"


class HardwareKind(str, Enum):
    CPU = "cpu"
    GPU = "gpu"


class Task(str, Enum):
    CLASSIFICATION = "classification"
    SEGMENTATION = "segmentation"


class MetricName(str, Enum):
    ACCURACY = "accuracy"
    DICE = "dice"


_TASK_METRIC = {Task.CLASSIFICATION: MetricName.ACCURACY, Task.SEGMENTATION: MetricName.DICE}

ALL_PRECISIONS: FrozenSet[Precision] = frozenset(Precision)


def check_identifier(value: Any, field_name: str) -> str:
    if not isinstance(value, str) or not _IDENT_RE.match(value):
        raise ValidationError(
            f"{field_name} must be a non-empty identifier of [A-Za-z0-9_-], got {value!r}",
            field=field_name,
        )
    return value


def parse_precision(value: Any, field_name: str = "precision") -> Precision:
    if isinstance(value, Precision):
        return value
    try:
        return Precision(str(value).strip().lower())
    except ValueError:
        raise UnknownPrecision(f"unknown precision {value!r}", field=field_name) from None


def parse_os(value: Any, field_name: str = "os") -> OS:
    if isinstance(value, OS):
        return value
    try:
        return OS(str(value).strip().lower())
    except ValueError:
        raise ValidationError(f"unknown os {value!r}", field=field_name) from None


def _to_float(value: Any, field_name: str) -> float:
    if isinstance(value, bool):
        raise ValidationError(f"{field_name} must be a number, got {value!r}", field=field_name)
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{field_name} must be a number, got {value!r}", field=field_name) from None


def _to_int(value: Any, field_name: str) -> int:
    if isinstance(value, bool):
        raise ValidationError(f"{field_name} must be an integer, got {value!r}", field=field_name)
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    try:
        return int(str(value).strip())
    except ValueError:
        raise ValidationError(f"{field_name} must be an integer, got {value!r}", field=field_name) from None


def _check_latency(value: float, field_name: str) -> None:
    if math.isnan(value) or value <= 0:
        raise NonPositiveLatency(f"{field_name} must be > 0, got {value!r}", field=field_name)
    if math.isinf(value):
        raise NonFiniteInput(f"{field_name} must be finite, got {value!r}", field=field_name)


def _check_fraction(value: float, field_name: str) -> None:
    if not (-ABS_TOL <= value <= 1.0 + ABS_TOL):
        raise MetricOutOfRange(f"{field_name} must lie in [0, 1], got {value!r}", field=field_name)


@dataclass(frozen=True)
class MoneyRate:
    """Hourly price of a hardware configuration in USD."""

    usd_per_hour: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.usd_per_hour):
            raise NonFiniteInput(f"usd_per_hour must be finite, got {self.usd_per_hour!r}", field="usd_per_hour")
        if self.usd_per_hour < 0:
            raise NegativeRate(f"usd_per_hour must be >= 0, got {self.usd_per_hour!r}", field="usd_per_hour")


@dataclass(frozen=True)
class HardwareConfig:
    id: str
    display_name: str
    kind: HardwareKind
    supported_precisions: FrozenSet[Precision]
    notes: str = ""

    def __post_init__(self) -> None:
        check_identifier(self.id, "id")
        if not self.supported_precisions:
            raise EmptyPrecisionSet("supported_precisions must be non-empty", field="supported_precisions")


@dataclass(frozen=True)
class WorkloadSpec:
    id: str
    task: Task
    metric_name: MetricName
    input_shape: Tuple[int, ...]

    def __post_init__(self) -> None:
        check_identifier(self.id, "id")
        if _TASK_METRIC[self.task] is not self.metric_name:
            raise ValidationError(
                f"{self.task.value} workloads are scored by {_TASK_METRIC[self.task].value}, "
                f"not {self.metric_name.value}",
                field="metric_name",
            )
        if not self.input_shape or any(d <= 0 for d in self.input_shape):
            raise ValidationError(f"input_shape entries must be > 0, got {self.input_shape}", field="input_shape")


@dataclass(frozen=True)
class BenchmarkRecord:
    """One measured cell: a workload on one hardware config, precision and OS."""

    workload_id: str
    config_id: str
    precision: Precision
    os: OS
    latency_ms_per_img: float
    metric_score: float
    samples: int

    def __post_init__(self) -> None:
        check_identifier(self.workload_id, "workload_id")
        check_identifier(self.config_id, "config_id")
        if not isinstance(self.precision, Precision):
            raise UnknownPrecision(f"unknown precision {self.precision!r}", field="precision")
        if not isinstance(self.os, OS):
            raise ValidationError(f"unknown os {self.os!r}", field="os")
        _check_latency(self.latency_ms_per_img, "latency_ms_per_img")
        if not math.isfinite(self.metric_score):
            raise MetricOutOfRange(f"metric_score must lie in [0, 1], got {self.metric_score!r}", field="metric_score")
        _check_fraction(self.metric_score, "metric_score")
        if isinstance(self.samples, bool) or not isinstance(self.samples, int) or self.samples <= 0:
            raise ValidationError(f"samples must be a positive integer, got {self.samples!r}", field="samples")

    @property
    def key(self) -> Tuple[str, str, Precision, OS]:
        return (self.workload_id, self.config_id, self.precision, self.os)

    @property
    def label(self) -> str:
        return f"{self.config_id} {self.precision.value}"


@dataclass(frozen=True)
class ConstraintSet:
    """User bounds on a deployment. ``None`` means unconstrained."""

    max_latency_ms: Optional[float] = None
    min_metric: Optional[float] = None
    allowed_precisions: FrozenSet[Precision] = field(default=ALL_PRECISIONS)
    os_filter: Optional[OS] = None

    def __post_init__(self) -> None:
        if self.max_latency_ms is not None:
            if math.isnan(self.max_latency_ms) or self.max_latency_ms <= 0:
                raise NegativeLatencyBound(
                    f"max_latency_ms must be > 0, got {self.max_latency_ms!r}", field="max_latency_ms"
                )
        if self.min_metric is not None:
            if not math.isfinite(self.min_metric):
                raise MetricOutOfRange(f"min_metric must lie in [0, 1], got {self.min_metric!r}", field="min_metric")
            _check_fraction(self.min_metric, "min_metric")
        if not self.allowed_precisions:
            raise EmptyPrecisionSet("allowed_precisions must be non-empty", field="allowed_precisions")
        object.__setattr__(self, "allowed_precisions", frozenset(self.allowed_precisions))

    def with_max_latency(self, max_latency_ms: Optional[float]) -> "ConstraintSet":
        return ConstraintSet(max_latency_ms, self.min_metric, self.allowed_precisions, self.os_filter)


def validate_record(raw: Mapping[str, Any], seen: Optional[Set[tuple]] = None) -> BenchmarkRecord:
    """Build a :class:`BenchmarkRecord` from a raw mapping.

    ``raw`` uses the record field names; string values are converted. When a
    ``seen`` set is passed, the record key is checked against it and added,
    raising :class:`DuplicateKey` on a repeat.
    """
    try:
        rec = BenchmarkRecord(
            workload_id=raw["workload_id"],
            config_id=raw["config_id"],
            precision=parse_precision(raw["precision"]),
            os=parse_os(raw["os"]),
            latency_ms_per_img=_to_float(raw["latency_ms_per_img"], "latency_ms_per_img"),
            metric_score=_to_float(raw["metric_score"], "metric_score"),
            samples=_to_int(raw["samples"], "samples"),
        )
    except KeyError as exc:
        raise ValidationError(f"missing field {exc.args[0]!r}", field=exc.args[0]) from None
    if seen is not None:
        if rec.key in seen:
            raise DuplicateKey(
                "duplicate record for ({}, {}, {}, {})".format(
                    rec.workload_id, rec.config_id, rec.precision.value, rec.os.value
                ),
                field="key",
            )
        seen.add(rec.key)
    return rec


def check_unique(records: Iterable[BenchmarkRecord]) -> None:
    seen: Set[tuple] = set()
    for rec in records:
        if rec.key in seen:
            raise DuplicateKey(f"duplicate record key {rec.key}", field="key")
        seen.add(rec.key)


def record_to_raw(rec: BenchmarkRecord) -> dict:
    return {
        "workload_id": rec.workload_id,
        "config_id": rec.config_id,
        "precision": rec.precision.value,
        "os": rec.os.value,
        "latency_ms_per_img": rec.latency_ms_per_img,
        "metric_score": rec.metric_score,
        "samples": rec.samples,
    }


def parse_precision_set(value: Any) -> FrozenSet[Precision]:
    """Accept ``"fp32,fp16"`` or any iterable of precision names."""
    if isinstance(value, str):
        items = [v for v in (p.strip() for p in value.split(",")) if v]
    else:
        items = list(value)
    return frozenset(parse_precision(v, "allowed_precisions") for v in items)


def validate_constraints(raw: Mapping[str, Any]) -> ConstraintSet:
    max_latency = raw.get("max_latency_ms")
    min_metric = raw.get("min_metric")
    precisions = raw.get("allowed_precisions")
    os_filter = raw.get("os_filter")
    return ConstraintSet(
        max_latency_ms=None if max_latency is None else _to_float(max_latency, "max_latency_ms"),
        min_metric=None if min_metric is None else _to_float(min_metric, "min_metric"),
        allowed_precisions=ALL_PRECISIONS if precisions is None else parse_precision_set(precisions),
        os_filter=None if os_filter is None else parse_os(os_filter, "os_filter"),
    )


def _hw(id, name, kind, precisions, notes=""):
    return HardwareConfig(id, name, kind, frozenset(precisions), notes)


# Configurations benchmarked in the fixture tables. ``supported_precisions``
# lists what the fixtures exercise, not every mode the silicon offers.
DEFAULT_HARDWARE = {
    hw.id: hw
    for hw in [
        _hw("k80", "NVIDIA K80", HardwareKind.GPU, [Precision.FP32]),
        _hw("v100", "NVIDIA V100", HardwareKind.GPU, [Precision.FP32, Precision.FP16]),
        _hw("xeon", "Intel Xeon", HardwareKind.CPU, [Precision.FP32]),
        _hw("i5-cpu-tensorflow", "Intel Core i5-4590S (TensorFlow)", HardwareKind.CPU, [Precision.FP32]),
        _hw("i5-cpu-openvino", "Intel Core i5-4590S (OpenVINO)", HardwareKind.CPU, [Precision.FP32]),
        _hw("i5-cpu-winml", "Intel Core i5-4590S (WinML)", HardwareKind.CPU, [Precision.FP32]),
        _hw("amd-winml", "AMD Radeon E9260 (WinML)", HardwareKind.GPU, [Precision.FP32]),
    ]
}

DEFAULT_WORKLOADS = {
    "inceptionv3": WorkloadSpec("inceptionv3", Task.CLASSIFICATION, MetricName.ACCURACY, (299, 299, 3)),
    "unet": WorkloadSpec("unet", Task.SEGMENTATION, MetricName.DICE, (160, 160, 1)),
}
