"""Latency summaries and the paired Wilcoxon signed-rank test."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.stats import rankdata

from .errors import InvalidAlpha, NoPostWarmupSamples, NTooLarge, ValidationError
from .ingest import MeasurementSeries, PairedOutputs

EXACT_MAX_N = 25


@dataclass(frozen=True)
class LatencySummary:
    mean_ms: float
    median_ms: float
    stddev_ms: float
    n_used: int
    n_discarded_warmup: int


def summarize(series: MeasurementSeries) -> LatencySummary:
    """Mean, median and sample standard deviation of the post-warmup latencies.

    The mean is the headline figure; ``stddev_ms`` uses ``ddof=1`` and is 0 for
    a single sample.
    """
    used = np.asarray(series.post_warmup, dtype=float)
    if used.size == 0:
        raise NoPostWarmupSamples(f"all {len(series)} samples are warmup")
    # sorting first makes the float sums independent of sample order
    used = np.sort(used)
    return LatencySummary(
        mean_ms=math.fsum(used) / used.size,
        median_ms=float(np.median(used)),
        stddev_ms=float(np.std(used, ddof=1)) if used.size > 1 else 0.0,
        n_used=int(used.size),
        n_discarded_warmup=series.warmup_count,
    )


def signed_rank_counts(n: int) -> np.ndarray:
    """Number of subsets of {1..n} with each sum 0..n(n+1)/2.

    Under the null every sign pattern is equally likely, so dividing by 2**n
    gives the distribution of the positive-rank sum.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    total = n * (n + 1) // 2
    counts = np.zeros(total + 1, dtype=np.int64)
    counts[0] = 1
    for k in range(1, n + 1):
        # copy: each rank may join a subset at most once
        counts[k:] += counts[:-k].copy()
    return counts


def exact_signed_rank_tail(w: float, n: int) -> float:
    """P(W+ >= w) for ``n`` untied ranks under the null hypothesis."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}", field="n")
    if n > EXACT_MAX_N:
        raise NTooLarge(f"exact distribution limited to n <= {EXACT_MAX_N}, got {n}", field="n")
    counts = signed_rank_counts(n)
    start = max(0, math.ceil(w))
    if start >= counts.size:
        return 0.0
    return float(counts[start:].sum()) / 2.0**n


class Method(str, Enum):
    EXACT = "exact"
    NORMAL_APPROX = "normal_approx"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class WilcoxonResult:
    w_plus: float
    n_effective: int
    p_value: float
    method: Method
    alpha: float
    reject_at_alpha: bool


def normal_two_sided_p(w_plus: float, ranks: np.ndarray, edgeworth: bool = True) -> float:
    """Two-sided p-value for ``w_plus`` from a continuity-corrected normal approximation.

    ``W+`` is a sum of ``r_i * B_i`` with fair coin flips ``B_i``, so with
    mid-ranks ``r_i`` its mean is ``sum(r)/2``, its variance ``sum(r**2)/4``
    (the usual tie-corrected variance) and its fourth cumulant ``-sum(r**4)/8``.
    With ``edgeworth`` the first Edgeworth term is added, which keeps the
    error against the exact distribution below 1e-3 for untied n >= 10; the
    plain normal curve is off by up to 0.011 at n = 15.
    """
    r = np.asarray(ranks, dtype=float)
    mean = r.sum() / 2.0
    var = float(np.sum(r**2)) / 4.0
    if var <= 0:
        return 1.0
    z = (abs(w_plus - mean) - 0.5) / math.sqrt(var)
    p = math.erfc(z / math.sqrt(2.0))
    if edgeworth:
        kurt = -float(np.sum(r**4)) / 8.0 / (24.0 * var**2)
        p += 2.0 * math.exp(-z * z / 2.0) / math.sqrt(2.0 * math.pi) * kurt * (z**3 - 3.0 * z)
    return min(1.0, max(0.0, p))


def wilcoxon_signed_rank(pairs: PairedOutputs, alpha: float = 0.05) -> WilcoxonResult:
    """Two-sided paired test of zero median difference between ``side_a`` and ``side_b``.

    Zero differences are dropped before ranking. The exact null distribution
    is used for up to 25 nonzero, untied differences; otherwise
    :func:`normal_two_sided_p`.
    """
    if not (0.0 < alpha < 1.0):
        raise InvalidAlpha(f"alpha must lie in (0, 1), got {alpha!r}", field="alpha")
    d = np.asarray(pairs.side_a, dtype=float) - np.asarray(pairs.side_b, dtype=float)
    d = d[d != 0]
    n = int(d.size)
    if n == 0:
        return WilcoxonResult(0.0, 0, 1.0, Method.DEGENERATE, alpha, False)

    abs_d = np.abs(d)
    ranks = rankdata(abs_d)  # mid-ranks for ties
    w_plus = float(ranks[d > 0].sum())
    tied = np.unique(abs_d).size < n

    if n <= EXACT_MAX_N and not tied:
        total = n * (n + 1) // 2
        upper = exact_signed_rank_tail(w_plus, n)
        lower = exact_signed_rank_tail(total - w_plus, n)  # P(W+ <= w) by symmetry
        p = min(1.0, 2.0 * min(upper, lower))
        method = Method.EXACT
    else:
        p = normal_two_sided_p(w_plus, ranks)
        method = Method.NORMAL_APPROX
    return WilcoxonResult(w_plus, n, p, method, alpha, p < alpha)
