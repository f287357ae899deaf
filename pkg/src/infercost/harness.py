"""Timed benchmark trials against a pluggable inference backend.

Only the backend call sits inside the timed region; inputs are generated
beforehand from a seeded generator. Timing uses :func:`time.perf_counter_ns`,
which is monotonic. Iterations run sequentially on the calling thread.

Real accelerator runtimes are not bundled. Adapt one by subclassing
:class:`InferenceBackend`::

    class MyBackend(InferenceBackend):
        label = "my-runtime"
        def setup(self): self.session = load_model(...)
        def infer(self, x): return self.session.run(x)
"""

from __future__ import annotations

import re
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Optional, Tuple

import numpy as np

from .errors import BackendFailure, BackendSpecError, NegativeDelay, ValidationError, WarmupExceedsLength
from .ingest import MeasurementSeries

DEFAULT_ITERATIONS = 5000
DEFAULT_WARMUP = 200

# perf_counter_ns can return equal readings around a trivial call
_MIN_LATENCY_MS = 1e-6


class InferenceBackend(ABC):
    label: str = "backend"

    def setup(self) -> None:
        """One-time preparation (model load, allocation). Not timed."""

    @abstractmethod
    def infer(self, inputs: Any) -> Any:
        ...


def random_input(shape: Tuple[int, ...]) -> Callable[[np.random.Generator], np.ndarray]:
    def make(rng: np.random.Generator) -> np.ndarray:
        return rng.random(shape, dtype=np.float32)

    return make


@dataclass(frozen=True)
class TrialPlan:
    iterations: int = DEFAULT_ITERATIONS
    warmup: int = DEFAULT_WARMUP
    seed: int = 0
    input_factory: Callable[[np.random.Generator], Any] = random_input((16,))

    def __post_init__(self) -> None:
        if self.iterations <= 0:
            raise ValidationError(f"iterations must be > 0, got {self.iterations}", field="iterations")
        if self.warmup < 0:
            raise ValidationError(f"warmup must be >= 0, got {self.warmup}", field="warmup")
        if self.warmup >= self.iterations:
            raise WarmupExceedsLength(
                f"warmup {self.warmup} must be < iterations {self.iterations}", field="warmup"
            )

    def inputs(self) -> Iterator[Any]:
        rng = np.random.default_rng(self.seed)
        for _ in range(self.iterations):
            yield self.input_factory(rng)


def run_trial(backend: InferenceBackend, plan: TrialPlan, label: Optional[str] = None) -> MeasurementSeries:
    """Time ``plan.iterations`` sequential calls of ``backend.infer``.

    The backend must already be set up. Warmup iterations are recorded and
    flagged through ``warmup_count``; :func:`infercost.stats.summarize` drops them.
    """
    clock = time.perf_counter_ns
    latencies = []
    for i, x in enumerate(plan.inputs()):
        try:
            t0 = clock()
            backend.infer(x)
            t1 = clock()
        except Exception as exc:
            raise BackendFailure(i, exc) from exc
        latencies.append(max((t1 - t0) / 1e6, _MIN_LATENCY_MS))
    return MeasurementSeries(tuple(latencies), plan.warmup, label or backend.label)


# --- synthetic backends ----------------------------------------------------------


def _block(ms: float) -> None:
    """Hold the thread for ``ms`` milliseconds: sleep most of it, spin the rest."""
    if ms <= 0:
        return
    deadline = time.perf_counter_ns() + int(ms * 1e6)
    coarse = ms / 1e3 - 1e-3
    if coarse > 0:
        time.sleep(coarse)
    while time.perf_counter_ns() < deadline:
        pass


@dataclass(frozen=True)
class SyntheticBackendSpec:
    """``kind`` is ``const``, ``cold`` or ``noisy``; unused fields stay 0."""

    kind: str
    delay_ms: float = 0.0
    slow_ms: float = 0.0
    fast_ms: float = 0.0
    slow_count: int = 0
    mean_ms: float = 0.0
    jitter_ms: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("const", "cold", "noisy"):
            raise BackendSpecError(f"unknown synthetic backend kind {self.kind!r}", field="kind")
        for name in ("delay_ms", "slow_ms", "fast_ms", "mean_ms", "jitter_ms"):
            if getattr(self, name) < 0:
                raise NegativeDelay(f"{name} must be >= 0, got {getattr(self, name)}", field=name)
        if self.slow_count < 0:
            raise NegativeDelay(f"slow_count must be >= 0, got {self.slow_count}", field="slow_count")

    @classmethod
    def constant(cls, delay_ms: float) -> "SyntheticBackendSpec":
        return cls("const", delay_ms=delay_ms)

    @classmethod
    def cold_start(cls, slow_ms: float, fast_ms: float, slow_count: int) -> "SyntheticBackendSpec":
        return cls("cold", slow_ms=slow_ms, fast_ms=fast_ms, slow_count=slow_count)

    @classmethod
    def noisy(cls, mean_ms: float, jitter_ms: float) -> "SyntheticBackendSpec":
        return cls("noisy", mean_ms=mean_ms, jitter_ms=jitter_ms)


_NUM = r"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
_SPEC_PATTERNS = {
    "const": re.compile(rf"^synthetic:const:{_NUM}$"),
    "cold": re.compile(rf"^synthetic:cold:{_NUM}:{_NUM}:([-+]?\d+)$"),
    "noisy": re.compile(rf"^synthetic:noisy:{_NUM}:{_NUM}$"),
}
SPEC_GRAMMAR = "synthetic:const:<ms> | synthetic:cold:<slow>:<fast>:<count> | synthetic:noisy:<mean>:<jitter>"


def parse_backend_spec(text: str) -> SyntheticBackendSpec:
    for kind, pat in _SPEC_PATTERNS.items():
        m = pat.match(text.strip())
        if m is None:
            continue
        if kind == "const":
            return SyntheticBackendSpec.constant(float(m[1]))
        if kind == "cold":
            return SyntheticBackendSpec.cold_start(float(m[1]), float(m[2]), int(m[3]))
        return SyntheticBackendSpec.noisy(float(m[1]), float(m[2]))
    raise BackendSpecError(f"cannot parse backend spec {text!r}; expected {SPEC_GRAMMAR}", field="backend")


class SyntheticBackend(InferenceBackend):
    """Blocks for a scheduled delay per call and echoes its input."""

    def __init__(self, spec: SyntheticBackendSpec, seed: int = 0):
        self.spec = spec
        self.seed = seed
        self.label = f"synthetic-{spec.kind}"
        self.calls = 0
        self.delays_ms: list = []
        self._rng = np.random.default_rng(seed)

    def setup(self) -> None:
        self.calls = 0
        self.delays_ms = []
        self._rng = np.random.default_rng(self.seed)

    def next_delay_ms(self) -> float:
        s = self.spec
        if s.kind == "const":
            return s.delay_ms
        if s.kind == "cold":
            return s.slow_ms if self.calls < s.slow_count else s.fast_ms
        return max(0.0, s.mean_ms + self._rng.uniform(-s.jitter_ms, s.jitter_ms))

    def infer(self, inputs: Any) -> Any:
        delay = self.next_delay_ms()
        self.calls += 1
        self.delays_ms.append(delay)
        _block(delay)
        return inputs


def make_synthetic(spec: SyntheticBackendSpec, seed: int = 0) -> SyntheticBackend:
    backend = SyntheticBackend(spec, seed)
    backend.setup()
    return backend
