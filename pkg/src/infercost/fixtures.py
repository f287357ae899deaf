"""Bundled fixture data.

``table1_records.csv`` and ``table2_records.csv`` hold the published
per-image latencies; their ``metric`` column is a placeholder (accuracy
0.95 for InceptionV3 with 0.94 under fp16, dice 0.90 for Unet) since only
the relative 1-point fp16 drop is known. ``pricing.json`` holds hourly
rates back-solved from the published cost cells.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import List

from .domain import BenchmarkRecord
from .ingest import PricingTable, load_pricing, load_records

TABLE1 = "table1_records.csv"
TABLE2 = "table2_records.csv"
PRICING = "pricing.json"


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("infercost") / "data" / name))


def table1_records() -> List[BenchmarkRecord]:
    return load_records(fixture_path(TABLE1))


def table2_records() -> List[BenchmarkRecord]:
    return load_records(fixture_path(TABLE2))


def backsolved_pricing() -> PricingTable:
    return load_pricing(fixture_path(PRICING))
