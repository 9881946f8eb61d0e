"""Figure rendering for the report paths (compare overlays, verify summaries).

Everything writes PNG files next to the CSV/JSON outputs; nothing opens a
window (the Agg backend is forced before pyplot loads).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["save_compare_figure", "save_verify_figure"]


def save_compare_figure(path, histogram: dict, analytic_centers, analytic_density,
                        title: str) -> None:
    """Empirical density with 3-sigma error bars against the analytic curve."""
    edges = np.asarray(histogram["bin_edges"])
    centers = 0.5 * (edges[:-1] + edges[1:])
    density = np.asarray(histogram["density"])
    stderr = np.asarray(histogram["stderr"])

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.errorbar(centers, density, yerr=3.0 * stderr, fmt=".", ms=4, capsize=2,
                lw=0.8, label="Metropolis samples (3$\\sigma$)", color="#0173b2")
    ax.plot(analytic_centers, analytic_density, "-", lw=1.5,
            label="analytic marginal", color="#d55e00")
    ax.set_xlabel("reflection eigenvalue $R$")
    ax.set_ylabel("density")
    ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_verify_figure(path, results) -> None:
    """Horizontal bar chart of measured error over tolerance per check."""
    names = [r.name for r in results]
    ratios = []
    for r in results:
        if r.tolerance > 0 and np.isfinite(r.error):
            ratios.append(max(r.error / r.tolerance, 1e-16))
        else:
            ratios.append(1e-16 if r.passed else 10.0)
    colors = ["#029e73" if r.passed else "#d55e00" for r in results]

    fig, ax = plt.subplots(figsize=(8.0, 0.32 * len(names) + 1.2))
    ax.barh(range(len(names)), ratios, color=colors)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=7)
    ax.axvline(1.0, color="k", lw=1.0, ls="--")
    ax.set_xscale("log")
    ax.set_xlabel("measured error / tolerance (1 = at tolerance)")
    ax.invert_yaxis()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
