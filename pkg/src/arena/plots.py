"""Figures rendered next to the CSV reports."""

from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .chargingboul import adapt_E, bid_interval, late_phase_threshold, utility_goal  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.dpi": 120,
}


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_standings(standings, path: str | Path) -> Path:
    rows = standings.agents
    x = np.arange(len(rows))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(max(4.0, 1.1 * len(rows) + 2), 3.2))
        ax.bar(x - 0.2, [r.mean_utility for r in rows], 0.4, label="individual utility")
        ax.bar(x + 0.2, [r.mean_welfare / 2 for r in rows], 0.4, label="social welfare / 2")
        ax.set_xticks(x, [r.agent for r in rows], rotation=20, ha="right")
        ax.set_ylim(0, 1)
        ax.set_ylabel("mean over sessions")
        ax.legend(frameon=False, loc="upper right")
        return _save(fig, Path(path))


def plot_session_utilities(outcomes, path: str | Path) -> Path:
    """Mean utility per session index for each agent, across all its pairings."""
    series: dict[str, dict[int, list[float]]] = defaultdict(lambda: defaultdict(list))
    counters: dict[tuple, int] = defaultdict(int)
    for row in outcomes:
        key = (row.scenario, row.agent_a, row.agent_b)
        k = counters[key]
        counters[key] += 1
        series[row.agent_a][k].append(row.util_a)
        if row.agent_b != row.agent_a:
            series[row.agent_b][k].append(row.util_b)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 3.2))
        for agent in sorted(series):
            ks = sorted(series[agent])
            ax.plot(ks, [np.mean(series[agent][k]) for k in ks], label=agent, lw=1.2)
        ax.set_xlabel("session within pairing")
        ax.set_ylabel("mean utility")
        ax.set_ylim(0, 1.02)
        ax.legend(frameon=False, ncol=2)
        return _save(fig, Path(path))


def bidding_trace(m: float = 0.5, E: float = 0.1, epsilon: float = 0.05, points: int = 201):
    """Rows of (t, goal, lo, hi) for the default bidding curve."""
    rows = []
    for t in np.linspace(0.0, 1.0, points):
        g = utility_goal(float(t), m, E)
        lo, hi = bid_interval(float(t), g, epsilon)
        rows.append((float(t), g, lo, hi))
    return rows


def opponent_trace(ubi: int = 5, m: float = 0.5, points: int = 201):
    """Rows of (t, estimated opponent goal, remaining concession fraction, late flag)."""
    E = adapt_E(ubi)
    start = late_phase_threshold(ubi)
    rows = []
    for t in np.linspace(0.0, 1.0, points):
        g = utility_goal(float(t), m, E)
        rows.append((float(t), g, (g - m) / (1 - m), int(t > start)))
    return rows


def write_traces(out_dir: str | Path, render: bool = True) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    bid_rows = bidding_trace()
    opp_rows = opponent_trace()
    for name, header, rows in (
        ("bidding_strategy", ["t", "goal", "lo", "hi"], bid_rows),
        ("opponent_strategy", ["t", "opponent_goal", "remaining_fraction", "late_phase"], opp_rows),
    ):
        path = out / f"{name}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        written.append(path)
    if not render:
        return written

    with plt.rc_context(STYLE):
        t, g, lo, hi = map(np.array, zip(*bid_rows))
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.fill_between(t, lo, hi, alpha=0.25, label="selection interval")
        ax.plot(t, g, lw=1.5, label="utility goal")
        ax.set_xlabel("normalized time t")
        ax.set_ylabel("own utility")
        ax.set_ylim(0, 1.02)
        ax.legend(frameon=False, loc="lower left")
        written.append(_save(fig, out / "bidding_strategy.png"))

        t, g, _, late = map(np.array, zip(*opp_rows))
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.plot(t, g, lw=1.5, label="estimated opponent goal (ubi=5)")
        start = late_phase_threshold(5)
        ax.axvspan(start, 1.0, color="tab:red", alpha=0.2, label="late concession phase")
        ax.set_xlabel("normalized time t")
        ax.set_ylabel("opponent utility")
        ax.set_ylim(0, 1.02)
        ax.legend(frameon=False, loc="lower left")
        written.append(_save(fig, out / "opponent_strategy.png"))
    return written


def render_report_figures(result, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    return [
        plot_standings(result.standings, out / "standings.png"),
        plot_session_utilities(result.outcomes, out / "session_utilities.png"),
    ]
