"""Timing a backend: seeded inputs, warmup flagged but kept, only infer() timed.

Real accelerators are out of reach here, so the backends are synthetic
ones with a known delay schedule.

    python demos/05_benchmark_harness.py
"""

from infercost import SyntheticBackendSpec, TrialPlan, make_synthetic, run_trial
from infercost.ingest import format_timing_csv
from infercost.stats import summarize
from infercost.report import format_summary

plan = TrialPlan(iterations=300, warmup=100, seed=1)

for spec in (
    SyntheticBackendSpec.constant(2.0),
    SyntheticBackendSpec.cold_start(50, 5, 100),
    SyntheticBackendSpec.noisy(3.0, 1.0),
):
    series = run_trial(make_synthetic(spec), plan)
    print(format_summary(summarize(series), label=series.label))
    # the raw series still has the slow warmup calls
    print(f"  first call {series.latencies_ms[0]:.2f} ms, {series.warmup_count} warmup samples excluded from stats")

print(format_timing_csv(series).splitlines()[:3])
