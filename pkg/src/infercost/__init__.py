"""Cost-optimal inference hardware selection from benchmark measurements."""

from .cost import (
    CostedCandidate,
    Decision,
    DecisionCurve,
    Infeasible,
    Optimal,
    ParetoFrontier,
    Segment,
    cost_per_images,
    decision_curve,
    feasible,
    mean_relative_change,
    pareto_frontier,
    relative_change,
    select_optimal,
)
from .domain import (
    OS,
    BenchmarkRecord,
    ConstraintSet,
    HardwareConfig,
    MoneyRate,
    Precision,
    WorkloadSpec,
    validate_constraints,
    validate_record,
)
from .harness import InferenceBackend, SyntheticBackendSpec, TrialPlan, make_synthetic, run_trial
from .ingest import (
    MeasurementSeries,
    PairedOutputs,
    PricingQuote,
    PricingTable,
    average_pricing,
    parse_pairs_csv,
    parse_records_csv,
    parse_timing_csv,
)
from .stats import LatencySummary, WilcoxonResult, exact_signed_rank_tail, summarize, wilcoxon_signed_rank

__version__ = "0.1.0"
