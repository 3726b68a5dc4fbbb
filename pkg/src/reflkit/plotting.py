"""Figures for the report paths of the CLI."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

GOLDEN = (math.sqrt(5) - 1.0) / 2.0

PARAMS = {
    "axes.labelsize": 10,
    "font.size": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "lines.markersize": 5,
    "figure.dpi": 100,
    "savefig.dpi": 150,
}


def new_figure(width: float = 5.0, height: float | None = None):
    plt.rcParams.update(PARAMS)
    fig, ax = plt.subplots(figsize=(width, height or width * GOLDEN))
    return fig, ax


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_goedel_sweep(rows, control_steps: int, path: str | Path) -> Path:
    """Steps spent by gamma and not-gamma against the budget, log-log.

    Both curves sitting on the diagonal means every budget was exhausted.
    """
    fig, ax = new_figure()
    budgets = [r.budget for r in rows]
    ax.plot(budgets, budgets, color="0.7", ls="--", label="budget")
    ax.plot(budgets, [r.steps_gamma for r in rows], "o-", label="gamma")
    ax.plot(budgets, [r.steps_neg_gamma for r in rows], "s:", label="not gamma")
    ax.axhline(max(control_steps, 1), color="tab:green", lw=0.8, label="control (true)")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("budget (steps)")
    ax.set_ylabel("steps spent")
    ax.set_title("neither is provable within any listed budget", fontsize=9)
    ax.legend(loc="upper left")
    return _save(fig, path)


def plot_trace(report, path: str | Path) -> Path:
    """Per-step agreement of a belief with the machine it explains."""
    fig, ax = new_figure(width=6.0, height=2.2)
    idx = [s.index for s in report.steps]
    ax.step(idx, [1 if s.predicted_output == s.true_output else 0 for s in report.steps],
            where="mid", label="output matches")
    ax.step(idx, [0.05 + (1 if s.next_belief_matches else 0) for s in report.steps],
            where="mid", ls="--", label="next belief matches")
    d = report.first_divergence
    if d is not None:
        ax.axvline(d, color="tab:red", lw=0.8, label=f"first divergence ({d})")
    ax.set_ylim(-0.2, 1.3)
    ax.set_yticks([0, 1])
    ax.set_yticklabels(["no", "yes"])
    ax.set_xlabel("step")
    ax.xaxis.set_major_locator(MaxNLocator(integer=True))
    ax.legend(loc="lower left", ncol=3, frameon=False)
    return _save(fig, path)


def plot_suite(result, path: str | Path) -> Path:
    """Passed / failed / skipped counts per law as horizontal bars."""
    names = list(result.laws)
    fig, ax = new_figure(width=5.0, height=0.4 * len(names) + 1.0)
    passed = [result.laws[n].passed for n in names]
    failed = [result.laws[n].failed for n in names]
    skipped = [result.laws[n].skipped for n in names]
    ax.barh(names, passed, color="tab:green", label="pass")
    ax.barh(names, failed, left=passed, color="tab:red", label="fail")
    ax.barh(names, skipped, left=[p + f for p, f in zip(passed, failed)], color="0.75",
            label="skipped")
    ax.invert_yaxis()
    ax.set_xlabel("cases")
    ax.set_title(f"suite {result.suite}, seed {result.seed}", fontsize=9)
    ax.legend(loc="lower right", frameon=False)
    return _save(fig, path)
