"""SVG rendering of a decision curve.

Each curve segment becomes one SVG group with id ``segment-<i>``: a
horizontal cost line for optimal segments, a hatched band for infeasible
ones. The unbounded last segment is drawn to 25% past the final breakpoint.
"""

from __future__ import annotations

import io
import math
from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .cost import DecisionCurve, Optimal  # noqa: E402
from .report import fmt_usd  # noqa: E402


def plot_curve_svg(curve: DecisionCurve, out: Union[str, Path, None] = None, title: Optional[str] = None) -> str:
    """Draw ``curve`` as a step function and return the SVG text; also write it to ``out`` if given."""
    # fixed salt -> stable clip/hatch ids, so identical curves give identical files
    with matplotlib.rc_context({"svg.hashsalt": "infercost", "svg.fonttype": "none"}):
        svg = _draw(curve, title)
    if out is not None:
        Path(out).write_text(svg, encoding="utf-8")
    return svg


def _draw(curve: DecisionCurve, title: Optional[str]) -> str:
    finite = [s.t_max_ms for s in curve if math.isfinite(s.t_max_ms)]
    x_end = max(finite) * 1.25 if finite else 10.0
    costs = [s.decision.candidate.cost_per_million_usd for s in curve if isinstance(s.decision, Optimal)]
    y_top = max(costs) * 1.25 if costs else 1.0

    fig, ax = plt.subplots(figsize=(7, 4))
    for i, seg in enumerate(curve):
        hi = seg.t_max_ms if math.isfinite(seg.t_max_ms) else x_end
        mid = (seg.t_min_ms + hi) / 2
        if isinstance(seg.decision, Optimal):
            c = seg.decision.candidate
            cost = c.cost_per_million_usd
            (line,) = ax.plot([seg.t_min_ms, hi], [cost, cost], color="C0", lw=2.5, solid_capstyle="butt")
            line.set_gid(f"segment-{i}")
            label = f"{c.config_id} {c.record.precision.value}\n${fmt_usd(cost)}/M"
            ax.text(mid, cost + 0.03 * y_top, label, ha="center", va="bottom", fontsize=8)
        else:
            band = ax.axvspan(seg.t_min_ms, hi, facecolor="0.85", edgecolor="0.5", hatch="//", lw=0)
            band.set_gid(f"segment-{i}")
            ax.text(mid, 0.5 * y_top, "no feasible\nconfiguration", ha="center", va="center", fontsize=8)
    for t in curve.breakpoints:
        ax.axvline(t, color="0.6", lw=0.8, ls=":")

    ax.set_xlim(0, x_end)
    ax.set_ylim(0, y_top)
    ax.set_xlabel("Inference time limit (ms/img)")
    ax.set_ylabel("Inference cost ($/million images)")
    if title:
        ax.set_title(title)
    fig.tight_layout()

    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()
