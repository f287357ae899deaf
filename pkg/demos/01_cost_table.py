"""Turn measured latencies into a dollar cost per million images.

A machine rented at R $/hour that needs t ms per image costs
t * R / 3.6 dollars per million images. Run from the repository root:

    python demos/01_cost_table.py
"""

from infercost import cost_per_images
from infercost.cost import price_all
from infercost.fixtures import backsolved_pricing, table1_records
from infercost.report import render_table

records = table1_records()
pricing = backsolved_pricing()

print("hourly rates:", {k: v.usd_per_hour for k, v in sorted(pricing.rates.items())})
print()
print(render_table(records, pricing, "md").render())

# the same numbers, one candidate at a time
for c in price_all(records, pricing):
    print(f"{c.record.workload_id:12s} {c.record.label:16s} {c.latency_ms:6.2f} ms/img -> ${c.cost_per_million_usd:.2f}/M")

# costs scale linearly with both inputs
assert abs(cost_per_images(10.0, 3.6) - 10.0) < 1e-12
