"""Report figures rendered to files next to their CSV counterparts."""

from __future__ import annotations

import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .angles import AngleStats
from .evaluation import EvalReport
from .sets import EmbeddingSet


def plot_angle_histogram(stats: AngleStats, path, title: str | None = None) -> None:
    """Density histogram of sampled angles with a fitted normal overlay."""
    lowers = np.array([b[0] for b in stats.histogram])
    uppers = np.array([b[1] for b in stats.histogram])
    densities = np.array([b[2] for b in stats.histogram])
    centers = (lowers + uppers) / 2.0

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.bar(centers, densities, width=uppers - lowers, color="#4878cf", edgecolor="none", label="sampled")
    if stats.variance > 0:
        grid = np.linspace(lowers[0], uppers[-1], 400)
        pdf = np.exp(-((grid - stats.mean) ** 2) / (2 * stats.variance)) / math.sqrt(
            2 * math.pi * stats.variance
        )
        ax.plot(grid, pdf, color="#d65f5f", lw=1.6, label="normal fit")
    ax.axvline(math.pi / 2, color="0.4", lw=0.8, ls="--")
    ax.set_xlabel("angle (rad)")
    ax.set_ylabel("density")
    ax.set_xlim(0, math.pi)
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_variance_vs_dimension(results: Sequence[tuple[int, AngleStats]], path) -> None:
    """Angle variance against dimension on log-log axes."""
    dims = [d for d, _ in results]
    variances = [s.variance for _, s in results]
    fig, ax = plt.subplots(figsize=(5.6, 4.0))
    ax.loglog(dims, variances, "o-", color="#4878cf")
    ax.set_xlabel("dimension")
    ax.set_ylabel("angle variance (rad$^2$)")
    ax.grid(True, which="both", lw=0.3, alpha=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_suite(reports: Sequence[EvalReport], path, sets: Sequence[EmbeddingSet] = ()) -> None:
    """Grouped bar chart of suite scores (x100), one group per dataset."""
    set_names: list[str] = []
    datasets: list[str] = []
    for r in reports:
        if r.set_name not in set_names:
            set_names.append(r.set_name)
        if r.dataset not in datasets:
            datasets.append(r.dataset)
    values = {(r.set_name, r.dataset): r.value for r in reports}

    fig, ax = plt.subplots(figsize=(max(6.0, 1.6 * len(datasets)), 4.2))
    group_width = 0.8
    bar_width = group_width / max(1, len(set_names))
    x = np.arange(len(datasets))
    for pos, name in enumerate(set_names):
        heights = [
            0.0 if math.isnan(values.get((name, d), math.nan)) else values[(name, d)] * 100
            for d in datasets
        ]
        offsets = x - group_width / 2 + (pos + 0.5) * bar_width
        ax.bar(offsets, heights, width=bar_width, label=name)
    ax.set_xticks(x)
    ax.set_xticklabels(datasets)
    ax.set_ylabel("score x100")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
