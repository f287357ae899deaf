"""Which hardware is cheapest as the latency budget loosens?

The decision only changes at measured latencies, so the whole answer is a
short list of intervals. Writes curve CSV and SVG files to the current
directory.

    python demos/02_decision_curve.py
"""

from infercost import ConstraintSet, Precision, decision_curve, pareto_frontier, select_optimal
from infercost.cost import same_decision
from infercost.fixtures import backsolved_pricing, table1_records
from infercost.plot import plot_curve_svg
from infercost.report import format_curve_csv, format_decision

pricing = backsolved_pricing()
inception = [r for r in table1_records() if r.workload_id == "inceptionv3"]

for name, base in [
    ("all-precisions", ConstraintSet()),
    ("fp32-only", ConstraintSet(allowed_precisions=frozenset({Precision.FP32}))),
]:
    curve = decision_curve(inception, pricing, base)
    print(f"--- {name}")
    print(format_curve_csv(curve), end="")
    plot_curve_svg(curve, f"inception-{name}.svg", title=f"inceptionv3, {name}")

    # a point query agrees with the curve lookup
    for t in (2.0, 10.0, 25.0):
        d = select_optimal(inception, pricing, base.with_max_latency(t))
        assert same_decision(d, curve.decision_at(t))
        print(f"  T={t:5.1f} ms  {format_decision(d)}")

# candidates worth considering at any budget
front = pareto_frontier(inception, pricing)
print("pareto frontier:", [c.record.label for c in front.candidates])
