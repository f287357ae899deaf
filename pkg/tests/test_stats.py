import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings, strategies as st

from infercost.errors import EmptyPairs, InvalidAlpha, NoPostWarmupSamples, NTooLarge, WarmupExceedsLength
from infercost.ingest import MeasurementSeries, PairedOutputs
from infercost.stats import (
    Method,
    exact_signed_rank_tail,
    normal_two_sided_p,
    signed_rank_counts,
    summarize,
    wilcoxon_signed_rank,
)


def pairs_from_diffs(diffs, base=0.5):
    ids = [f"i{k}" for k in range(len(diffs))]
    return PairedOutputs(tuple(ids), tuple(base + d for d in diffs), tuple(base for _ in diffs))


def brute_force_counts(n):
    """Sum of ranks over every one of the 2**n sign assignments."""
    counts = Counter()
    for signs in itertools.product((0, 1), repeat=n):
        counts[sum(rank for rank, s in zip(range(1, n + 1), signs) if s)] += 1
    return counts


class TestSummarize:
    def test_constant(self):
        s = summarize(MeasurementSeries((5.0,) * 1000, 0))
        assert (s.mean_ms, s.median_ms, s.stddev_ms, s.n_used, s.n_discarded_warmup) == (5.0, 5.0, 0.0, 1000, 0)

    def test_warmup_discard(self):
        s = summarize(MeasurementSeries((50.0,) * 100 + (5.0,) * 900, 100))
        assert s.mean_ms == 5.0 and s.n_used == 900 and s.n_discarded_warmup == 100

    def test_all_warmup(self):
        # the series type already rejects this; summarize guards series built around it
        with pytest.raises(WarmupExceedsLength):
            MeasurementSeries((1.0, 2.0, 3.0), 3)
        series = MeasurementSeries((1.0, 2.0, 3.0), 0)
        object.__setattr__(series, "warmup_count", 3)
        with pytest.raises(NoPostWarmupSamples):
            summarize(series)

    def test_hand_values(self):
        s = summarize(MeasurementSeries((9.0, 1.0, 2.0, 3.0, 4.0), 1))
        assert s.mean_ms == 2.5 and s.median_ms == 2.5
        assert s.stddev_ms == pytest.approx(math.sqrt(5 / 3))

    @given(st.lists(st.floats(0.01, 1e4), min_size=1, max_size=60), st.randoms())
    def test_permutation_invariant(self, lat, rnd):
        shuffled = list(lat)
        rnd.shuffle(shuffled)
        a = summarize(MeasurementSeries([100.0] + lat, 1))
        b = summarize(MeasurementSeries([100.0] + shuffled, 1))
        assert a == b


class TestExactTail:
    def test_full_tail(self):
        for n in range(1, 26):
            assert exact_signed_rank_tail(0, n) == 1.0

    def test_maximum(self):
        for n in range(1, 26):
            assert exact_signed_rank_tail(n * (n + 1) / 2, n) == 2.0**-n

    def test_n3_w4(self):
        # subsets of {1,2,3} with sum >= 4: {1,3}, {2,3}, {1,2,3}
        assert exact_signed_rank_tail(4, 3) == 3 / 8

    def test_beyond_support(self):
        assert exact_signed_rank_tail(7, 3) == 0.0

    def test_too_large(self):
        with pytest.raises(NTooLarge):
            exact_signed_rank_tail(10, 26)

    @pytest.mark.parametrize("n", range(1, 13))
    def test_matches_brute_force(self, n):
        counts = brute_force_counts(n)
        total = n * (n + 1) // 2
        assert list(signed_rank_counts(n)) == [counts[s] for s in range(total + 1)]
        for w in range(total + 1):
            expected = Fraction(sum(c for s, c in counts.items() if s >= w), 2**n)
            assert exact_signed_rank_tail(w, n) == float(expected)


class TestWilcoxon:
    def test_identical_outputs(self):
        vals = tuple(np.linspace(0.5, 0.9, 40))
        r = wilcoxon_signed_rank(PairedOutputs(tuple(f"img{i}" for i in range(40)), vals, vals), 0.05)
        assert r.method is Method.DEGENERATE and r.p_value == 1.0 and not r.reject_at_alpha and r.n_effective == 0

    def test_three_positive(self):
        r = wilcoxon_signed_rank(pairs_from_diffs([0.01, 0.02, 0.03]), 0.05)
        assert r.w_plus == 6 and r.p_value == 0.25 and r.method is Method.EXACT and not r.reject_at_alpha

    def test_five_positive(self):
        r = wilcoxon_signed_rank(pairs_from_diffs([0.01, 0.02, 0.03, 0.04, 0.05]), 0.05)
        assert r.w_plus == 15 and r.p_value == 0.0625 and not r.reject_at_alpha

    def test_six_positive_rejects(self):
        r = wilcoxon_signed_rank(pairs_from_diffs([0.01 * k for k in range(1, 7)]), 0.05)
        assert r.p_value == 2 / 64 and r.reject_at_alpha

    def test_zero_differences_dropped(self):
        r = wilcoxon_signed_rank(pairs_from_diffs([0.0, 0.01, 0.0, 0.02, 0.03]), 0.05)
        assert r.n_effective == 3 and r.p_value == 0.25

    def test_ties_use_normal(self):
        r = wilcoxon_signed_rank(pairs_from_diffs([0.25, 0.25, -0.5, 0.75]), 0.05)
        assert r.method is Method.NORMAL_APPROX
        # |d| = .25,.25,.5,.75 -> mid-ranks 1.5,1.5,3,4; positives sum to 7
        assert r.w_plus == 7.0

    def test_large_n_uses_normal(self):
        rng = np.random.default_rng(1)
        r = wilcoxon_signed_rank(pairs_from_diffs(list(rng.normal(size=30))), 0.05)
        assert r.method is Method.NORMAL_APPROX and r.n_effective == 30

    def test_alpha(self):
        with pytest.raises(InvalidAlpha):
            wilcoxon_signed_rank(pairs_from_diffs([1.0]), 1.5)
        with pytest.raises(InvalidAlpha):
            wilcoxon_signed_rank(pairs_from_diffs([1.0]), 0.0)

    def test_empty(self):
        with pytest.raises(EmptyPairs):
            pairs_from_diffs([])

    @pytest.mark.parametrize("seed", range(20))
    def test_exact_agrees_with_scipy(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 26))
        d = rng.normal(0.2, 1.0, size=n)
        ours = wilcoxon_signed_rank(pairs_from_diffs(list(d)), 0.05)
        ref = scipy.stats.wilcoxon(d, method="exact", alternative="two-sided")
        # scipy reports min(W+, W-); p-values must agree
        assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-9)

    @pytest.mark.parametrize("seed", range(10))
    def test_tied_normal_agrees_with_scipy(self, seed):
        rng = np.random.default_rng(100 + seed)
        d = rng.integers(-4, 5, size=40).astype(float) / 10
        d = d[d != 0]
        ours = normal_two_sided_p(
            float(scipy.stats.rankdata(np.abs(d))[d > 0].sum()), scipy.stats.rankdata(np.abs(d)), edgeworth=False
        )
        ref = scipy.stats.wilcoxon(d, method="approx", correction=True, zero_method="wilcox")
        assert ours == pytest.approx(ref.pvalue, rel=1e-9)


@pytest.mark.parametrize("n", range(15, 26))
def test_normal_approx_within_001_of_exact(n):
    total = n * (n + 1) // 2
    ranks = np.arange(1, n + 1, dtype=float)
    for w in range(total + 1):
        exact = min(1.0, 2 * min(exact_signed_rank_tail(w, n), exact_signed_rank_tail(total - w, n)))
        assert abs(normal_two_sided_p(w, ranks) - exact) <= 0.01


diffs = st.lists(st.floats(-5, 5).filter(lambda x: abs(x) > 1e-6), min_size=1, max_size=40)


@settings(max_examples=200)
@given(diffs)
def test_swap_antisymmetry(d):
    p = pairs_from_diffs(d)
    swapped = PairedOutputs(p.ids, p.side_b, p.side_a)
    a, b = wilcoxon_signed_rank(p), wilcoxon_signed_rank(swapped)
    n = a.n_effective
    assert b.n_effective == n
    assert b.w_plus == pytest.approx(n * (n + 1) / 2 - a.w_plus)
    assert b.p_value == pytest.approx(a.p_value, abs=1e-12)


@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(-50, 50)), min_size=1, max_size=30), st.integers(-1000, 1000))
def test_shift_invariance(values, shift):
    ids = tuple(f"i{k}" for k in range(len(values)))
    a = PairedOutputs(ids, [float(x) for x, _ in values], [float(y) for _, y in values])
    b = PairedOutputs(ids, [float(x + shift) for x, _ in values], [float(y + shift) for _, y in values])
    assert wilcoxon_signed_rank(a) == wilcoxon_signed_rank(b)


@given(diffs)
def test_result_invariants(d):
    r = wilcoxon_signed_rank(pairs_from_diffs(d), 0.05)
    n = r.n_effective
    assert 0 <= r.w_plus <= n * (n + 1) / 2
    assert 0.0 <= r.p_value <= 1.0
    assert r.reject_at_alpha == (r.p_value < 0.05)
