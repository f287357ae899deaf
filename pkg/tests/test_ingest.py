import json

import pytest
from hypothesis import given, strategies as st

from infercost.domain import DEFAULT_HARDWARE, MoneyRate
from infercost.errors import (
    DuplicateId,
    EmptyPairs,
    EmptyQuoteList,
    MalformedHeader,
    MalformedRow,
    NegativeRate,
    NonPositiveLatency,
    UnknownConfig,
    ValidationError,
    WarmupExceedsLength,
)
from infercost.fixtures import PRICING, TABLE1, TABLE2, fixture_path
from infercost.ingest import (
    RECORDS_HEADER,
    MeasurementSeries,
    PairedOutputs,
    PricingQuote,
    average_pricing,
    format_pairs_csv,
    format_pricing_json,
    format_records_csv,
    format_timing_csv,
    parse_pairs_csv,
    parse_pricing_json,
    parse_records_csv,
    parse_timing_csv,
)

HEADER = ",".join(RECORDS_HEADER)


def q(provider, config, usd):
    return PricingQuote(provider, config, MoneyRate(usd))


class TestAveragePricing:
    def test_two_quotes(self):
        table = average_pricing([q("A", "v100", 3.06), q("B", "v100", 3.14)])
        assert table.rate("v100").usd_per_hour == pytest.approx(3.10, rel=1e-12)

    def test_single_quote(self):
        assert average_pricing([q("A", "k80", 0.90)]).rates == {"k80": MoneyRate(0.90)}

    def test_empty(self):
        with pytest.raises(EmptyQuoteList):
            average_pricing([])

    def test_negative_rate(self):
        with pytest.raises(NegativeRate):
            q("A", "k80", -1.0)

    def test_catalog(self):
        quotes = [q("A", "tpu", 1.0)]
        assert "tpu" in average_pricing(quotes)
        with pytest.raises(UnknownConfig):
            average_pricing(quotes, DEFAULT_HARDWARE)
        average_pricing([q("A", "v100", 3.0)], DEFAULT_HARDWARE)

    @given(st.lists(st.tuples(st.sampled_from(["k80", "v100", "xeon"]), st.floats(0, 100)), min_size=1), st.randoms())
    def test_permutation_invariant(self, items, rnd):
        quotes = [q(f"p{i}", c, r) for i, (c, r) in enumerate(items)]
        shuffled = list(quotes)
        rnd.shuffle(shuffled)
        assert average_pricing(quotes) == average_pricing(shuffled)

    @given(st.floats(0, 1e4), st.integers(1, 50))
    def test_copies_equal_single(self, rate, k):
        single = average_pricing([q("A", "v100", rate)]).rate("v100").usd_per_hour
        many = average_pricing([q("A", "v100", rate)] * k).rate("v100").usd_per_hour
        assert many == pytest.approx(single, rel=1e-12, abs=1e-300)


class TestPricingJson:
    def test_fixture(self):
        table = average_pricing(parse_pricing_json(fixture_path(PRICING).read_text()))
        assert {k: v.usd_per_hour for k, v in table.rates.items()} == {"k80": 0.90, "v100": 3.10, "xeon": 0.305}

    def test_round_trip_canonical(self):
        text = fixture_path(PRICING).read_text()
        assert format_pricing_json(parse_pricing_json(text)) == text

    @pytest.mark.parametrize(
        "doc",
        [
            "not json",
            "[]",
            '{"quotes": [{"provider": "A", "config": "k80"}]}',
            '{"quotes": [{"provider": "A", "config": "k80", "usd_per_hour": "1"}]}',
            '{"quotes": [{"provider": "A", "config": "k80", "usd_per_hour": -1}]}',
        ],
    )
    def test_bad(self, doc):
        with pytest.raises(ValidationError):
            parse_pricing_json(doc)


class TestRecordsCsv:
    def test_fp16_row(self):
        recs = parse_records_csv(HEADER + "\ninceptionv3,v100,fp16,linux,3.34,0.94,1000\n")
        assert len(recs) == 1 and recs[0].latency_ms_per_img == 3.34

    def test_header_only(self):
        assert parse_records_csv(HEADER + "\n") == []

    def test_six_columns(self):
        with pytest.raises(MalformedRow) as exc:
            parse_records_csv(HEADER + "\ninceptionv3,v100,fp16,linux,3.34,0.94\n")
        assert exc.value.line == 2

    def test_bad_header(self):
        with pytest.raises(MalformedHeader):
            parse_records_csv("a,b,c\n")
        with pytest.raises(MalformedHeader):
            parse_records_csv("")

    def test_validation_error_carries_line(self):
        text = HEADER + "\nunet,k80,fp32,linux,7.73,0.9,40\nunet,k80,fp32,linux,0,0.9,40\n"
        with pytest.raises(NonPositiveLatency) as exc:
            parse_records_csv(text)
        assert exc.value.line == 3

    def test_duplicate(self):
        text = HEADER + "\nunet,k80,fp32,linux,7.73,0.9,40\nunet,k80,fp32,linux,7.0,0.9,40\n"
        with pytest.raises(ValidationError, match="duplicate"):
            parse_records_csv(text)

    @pytest.mark.parametrize("name", [TABLE1, TABLE2])
    def test_fixture_round_trip(self, name):
        text = fixture_path(name).read_text()
        assert format_records_csv(parse_records_csv(text)) == text


class TestTimingCsv:
    def test_three_rows(self):
        s = parse_timing_csv("iteration,latency_ms\n1,5.0\n2,5.2\n3,4.8\n", warmup=1)
        assert s.latencies_ms == (5.0, 5.2, 4.8) and s.warmup_count == 1

    def test_warmup_too_large(self):
        with pytest.raises(WarmupExceedsLength):
            parse_timing_csv("iteration,latency_ms\n1,5.0\n2,5.2\n3,4.8\n", warmup=3)

    def test_negative_latency(self):
        with pytest.raises(NonPositiveLatency) as exc:
            parse_timing_csv("iteration,latency_ms\n1,5.0\n2,-1.0\n")
        assert exc.value.line == 3

    def test_malformed(self):
        with pytest.raises(MalformedRow):
            parse_timing_csv("iteration,latency_ms\nx,5.0\n")
        with pytest.raises(MalformedRow):
            parse_timing_csv("iteration,latency_ms\n1,abc\n")

    @given(st.lists(st.floats(min_value=1e-6, max_value=1e5), min_size=1, max_size=50))
    def test_round_trip(self, lat):
        text = format_timing_csv(MeasurementSeries(tuple(lat)))
        assert format_timing_csv(parse_timing_csv(text)) == text
        assert parse_timing_csv(text).latencies_ms == tuple(lat)


class TestPairsCsv:
    def test_two_pairs(self):
        p = parse_pairs_csv("id,output_a,output_b\nimg1,0.91,0.91\nimg2,0.88,0.87\n")
        assert len(p) == 2 and p.side_a == (0.91, 0.88) and p.side_b == (0.91, 0.87)

    def test_duplicate_id(self):
        with pytest.raises(DuplicateId):
            parse_pairs_csv("id,output_a,output_b\nimg1,0.91,0.91\nimg1,0.88,0.87\n")

    def test_empty(self):
        with pytest.raises(EmptyPairs):
            parse_pairs_csv("id,output_a,output_b\n")

    def test_direct_construction_checks(self):
        with pytest.raises(EmptyPairs):
            PairedOutputs((), (), ())
        with pytest.raises(ValidationError):
            PairedOutputs(("a",), (1.0,), ())

    @given(st.lists(st.tuples(st.floats(allow_nan=False, allow_infinity=False), st.floats(allow_nan=False, allow_infinity=False)), min_size=1, max_size=30))
    def test_round_trip(self, values):
        pairs = PairedOutputs(tuple(f"img{i}" for i in range(len(values))), [a for a, _ in values], [b for _, b in values])
        text = format_pairs_csv(pairs)
        assert parse_pairs_csv(text) == pairs
        assert format_pairs_csv(parse_pairs_csv(text)) == text
