"""Do two backends produce the same outputs? A paired signed-rank test.

Small samples without ties get an exact p-value; larger ones use a
normal approximation with tie and continuity corrections.

    python demos/04_equivalence.py
"""

import numpy as np

from infercost import PairedOutputs
from infercost.report import format_wilcoxon
from infercost.stats import wilcoxon_signed_rank

rng = np.random.default_rng(0)
truth = rng.uniform(0.5, 0.99, size=40)
ids = [f"img{i:03d}" for i in range(40)]

# fp16 rounding: tiny noise with no direction
fp16 = truth + rng.normal(0, 1e-3, size=40)
print("fp32 vs fp16:     ", format_wilcoxon(wilcoxon_signed_rank(PairedOutputs(ids, truth, fp16))))

# a biased backend that scores everything a little lower
biased = truth - np.abs(rng.normal(0.01, 0.005, size=40))
print("fp32 vs biased:   ", format_wilcoxon(wilcoxon_signed_rank(PairedOutputs(ids, truth, biased))))

# a dozen biased pairs: the exact null distribution is used
print("12 pairs (exact): ", format_wilcoxon(wilcoxon_signed_rank(PairedOutputs(ids[:12], truth[:12], biased[:12]))))
