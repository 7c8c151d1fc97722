"""Figures written next to reports and bench CSVs."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .solver import RunTrace  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.dpi": 120,
    "savefig.bbox": "tight",
}


def plot_run(trace: RunTrace, path: str | Path, opt_value: float | None = None) -> Path:
    """Trajectory of F(y(t)) and of the largest coordinate against 1 - e^-t."""
    ts = [s.t for s in trace.steps] + [1.0]
    F = [s.F for s in trace.steps] + [trace.F_final]
    max_y = [max(s.y) for s in trace.steps] + [max(trace.y_final)]
    with plt.rc_context(STYLE):
        fig, (ax_f, ax_y) = plt.subplots(1, 2, figsize=(7.0, 2.8))
        ax_f.plot(ts, F, marker="o", ms=3, label="F(y(t))")
        if opt_value is not None:
            ax_f.axhline(opt_value, color="k", lw=0.8, ls="--", label="f(OPT)")
            bound = (1.0 / math.e - 2.0 * trace.config.epsilon) * opt_value
            ax_f.axhline(bound, color="tab:red", lw=0.8, ls=":", label="(1/e - 2eps) f(OPT)")
        ax_f.set_xlabel("t")
        ax_f.set_ylabel("multilinear value")
        ax_f.legend(loc="lower right")

        fine = [k / 200 for k in range(201)]
        ax_y.plot(fine, [1 - math.exp(-t) for t in fine], color="k", lw=0.8, label="1 - exp(-t)")
        ax_y.plot(ts, max_y, marker="o", ms=3, ls="none", label="max_i y_i(t)")
        ax_y.set_xlabel("t")
        ax_y.set_ylabel("coordinate")
        ax_y.legend(loc="lower right")
        fig.suptitle(f"{trace.config.baseline} update, eps={trace.config.epsilon:g}, n={trace.n}, r={trace.rank}")
        path = Path(path)
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_bench(rows: Sequence[dict[str, Any]], path: str | Path) -> Path:
    """Value calls against 1/eps (log-log), and achieved ratio, per instance size."""
    by_n: dict[tuple[int, int], list[dict[str, Any]]] = {}
    for row in rows:
        by_n.setdefault((row["n"], row["r"]), []).append(row)
    with plt.rc_context(STYLE):
        fig, (ax_c, ax_r) = plt.subplots(1, 2, figsize=(7.0, 2.8))
        for (n, r), group in sorted(by_n.items()):
            group = sorted(group, key=lambda row: row["epsilon"])
            inv = [1.0 / row["epsilon"] for row in group]
            ax_c.loglog(inv, [row["value_calls"] for row in group], marker="o", ms=3, label=f"n={n}, r={r}")
            ratios = [row["ratio"] for row in group]
            if any(v is not None for v in ratios):
                ax_r.plot(inv, [float("nan") if v is None else v for v in ratios], marker="o", ms=3, label=f"n={n}")
        ax_c.set_xlabel("1/eps")
        ax_c.set_ylabel("value oracle calls")
        ax_c.legend()
        ax_r.axhline(1.0 / math.e, color="k", lw=0.8, ls="--", label="1/e")
        ax_r.set_xlabel("1/eps")
        ax_r.set_ylabel("F(y(1)) / f(OPT)")
        ax_r.legend()
        path = Path(path)
        fig.savefig(path)
        plt.close(fig)
    return path
