"""Percent changes between configurations, with an explicit baseline.

    python demos/03_relative_changes.py
"""

from infercost import mean_relative_change, relative_change
from infercost.fixtures import backsolved_pricing, table1_records, table2_records
from infercost.report import Selector, format_comparison

records = table1_records() + table2_records()
pricing = backsolved_pricing()


def pick(selector, workload):
    return Selector.parse(selector).resolve(records, workload)


xeon, k80 = pick("xeon", "inceptionv3"), pick("k80", "inceptionv3")
print("xeon vs k80 latency:", f"{relative_change(xeon.latency_ms_per_img, k80.latency_ms_per_img):+.1%}")

for wl in ("inceptionv3", "unet"):
    amd, tf = pick("amd-winml", wl), pick("i5-cpu-tensorflow", wl)
    change = relative_change(amd.latency_ms_per_img, tf.latency_ms_per_img)
    print(format_comparison(amd, tf, change, None))

# fp16 on V100 against fp32 on K80, averaged over both workloads
pairs = []
for wl in ("inceptionv3", "unet"):
    fast, slow = pick("v100:fp16", wl), pick("k80", wl)
    pairs.append(
        (
            fast.latency_ms_per_img * pricing.rate("v100").usd_per_hour / 3.6,
            slow.latency_ms_per_img * pricing.rate("k80").usd_per_hour / 3.6,
        )
    )
print("mean cost change, v100 fp16 vs k80:", f"{mean_relative_change(pairs):+.1%}")
