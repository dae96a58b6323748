"""Static figures written next to the CSV output of the command-line tool."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["plot_bound_table", "plot_polynomial", "plot_trace", "plot_norm_curves"]

STYLE = {
    "figure.figsize": (6.4, 4.0),
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
    "savefig.dpi": 150,
}


def _save(fig, path):
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)


def plot_bound_table(rows, path) -> None:
    """CFL bound versus ``m``, with the limit as a dashed line."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        finite = [r for r in rows if r.bounded and not r.is_limit]
        limit = [r for r in rows if r.is_limit]
        unbounded = [r for r in rows if not r.bounded]
        if finite:
            prop = finite[0].property.value
            ax.plot([r.m for r in finite], [r.s for r in finite], "o-", label=f"$s_m$ ({prop})")
        for r in limit:
            ax.axhline(r.s, ls="--", color="0.4", label=f"limit {r.s:.6g}")
        if unbounded:
            ax.annotate(
                "unbounded for m = " + ", ".join(str(r.m) for r in unbounded),
                xy=(0.02, 0.95),
                xycoords="axes fraction",
                va="top",
            )
        ax.set_xlabel("m (interior grid points)")
        ax.set_ylabel("CFL bound s")
        ax.legend(loc="best")
        _save(fig, path)


def plot_polynomial(kind: str, n: int, xs: Sequence[float], values: Sequence[float], path) -> None:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(xs, values, label=f"${kind}_{{{n}}}(x)$")
        ax.axhline(0.0, color="k", lw=0.8)
        ax.set_xlabel("x")
        ax.legend(loc="best")
        _save(fig, path)


def plot_trace(trace, path) -> None:
    """Initial and final states plus the max-norm history."""
    with plt.rc_context(STYLE):
        fig, (ax_w, ax_n) = plt.subplots(1, 2, figsize=(9.0, 3.6))
        xs = trace.config.grid.nodes() if trace.config is not None else np.arange(1, trace.states.shape[1] + 1)
        ax_w.plot(xs, trace.states[0], "s--", label="$w_0$")
        ax_w.plot(xs, trace.states[-1], "o-", label=f"$w_{{{len(trace.states) - 1}}}$")
        ax_w.axhline(0.0, color="k", lw=0.8)
        ax_w.set_xlabel("x")
        ax_w.legend(loc="best")
        ax_n.plot(trace.times, trace.norms, "o-")
        ax_n.set_xlabel("t")
        ax_n.set_ylabel(r"$\|w_n\|_\infty$")
        _save(fig, path)


def plot_norm_curves(curves: dict, path) -> None:
    """``||A_m(s)||_inf`` against ``s`` for several ``m``; ``curves[m] = (s, norms)``."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for m, (s, norms) in sorted(curves.items()):
            ax.plot(s, norms, label=f"m = {m}")
        ax.axhline(1.0, color="k", lw=0.8)
        ax.set_xlabel("s")
        ax.set_ylabel(r"$\|A_m(s)\|_\infty$")
        ax.legend(loc="best")
        _save(fig, path)
