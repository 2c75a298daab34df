"""Figures written next to the CLI reports."""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 11,
    "axes.titlesize": 11,
    "legend.fontsize": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_orbit_lengths(report: dict, path) -> Path:
    counts = Counter(o["length"] for o in report["orbits"])
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        lengths = sorted(counts)
        ax.bar([str(L) for L in lengths], [counts[L] for L in lengths], color="0.35")
        ax.set_xlabel("orbit length L")
        ax.set_ylabel("number of orbits")
        ax.set_title(f"{report['spins']} sites, {report['total_states']} states")
        return _save(fig, path)


def plot_chain_spectrum(rows: list[tuple], path, title: str = "") -> Path:
    """``rows`` are (orbit_rep, L, r, re, im) tuples."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        xs = [row[1] for row in rows]
        ys = [row[3] for row in rows]
        ax.scatter(xs, ys, s=12, color="k", alpha=0.5)
        ax.set_xlabel("orbit length L")
        ax.set_ylabel("eigenvalue (real part)")
        if title:
            ax.set_title(title)
        return _save(fig, path)


def plot_cogwheel_spectrum(values, path, N: int) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        ax.plot(range(1, len(values) + 1), values, "o-", color="k", ms=3)
        ax.set_xlabel("n")
        ax.set_ylabel("eigenvalue")
        ax.set_title(f"cogwheel, N = {N}")
        return _save(fig, path)


def plot_trace(trace: list[dict], path, title: str = "") -> Path:
    t = [r["t"] for r in trace]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        ax.plot(t, [r["weight"] for r in trace], "o-", color="k", ms=3, label="superposition weight")
        if all(r.get("entropy") is not None for r in trace):
            ax.plot(t, [r["entropy"] for r in trace], "s--", color="0.5", ms=3, label="entropy (nats)")
        ax.set_xlabel("t")
        ax.legend(frameon=False)
        if title:
            ax.set_title(title)
        return _save(fig, path)
