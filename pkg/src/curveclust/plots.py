"""Static SVG figures: example cluster curves and affinity heatmaps.

Output is byte-deterministic: the SVG hash salt is fixed and the date
metadata is stripped.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "curveclust"

import matplotlib.pyplot as plt
import numpy as np

from .datagen import Dataset


def _save(fig, path: str | os.PathLike) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_cluster_curves(d: Dataset, path: str | os.PathLike) -> None:
    """One panel per cluster (per coordinate dimension), all curves overlaid."""
    if d.labels is None:
        raise ValueError("dataset has no labels to group by")
    ks = np.unique(d.labels)
    dim = d.curves[0].dim
    fig, axes = plt.subplots(
        dim, len(ks), figsize=(3.2 * len(ks), 2.4 * dim), squeeze=False, sharex=True
    )
    for col, lab in enumerate(ks):
        members = [c for c, l in zip(d.curves, d.labels) if l == lab]
        for row in range(dim):
            ax = axes[row][col]
            for c in members:
                ax.plot(c.grid, c.samples[:, row], lw=0.8)
            if row == 0:
                ax.set_title(f"cluster {int(lab)}")
            if dim > 1 and col == 0:
                ax.set_ylabel(f"dim {row}")
    fig.tight_layout()
    _save(fig, path)


def plot_affinity(A: np.ndarray, labels: np.ndarray | None, path: str | os.PathLike) -> None:
    """Heatmap of the affinity, rows/columns grouped by label when given."""
    A = np.asarray(A, dtype=np.float64)
    if labels is not None:
        order = np.argsort(np.asarray(labels), kind="stable")
        A = A[np.ix_(order, order)]
    fig, ax = plt.subplots(figsize=(4.0, 3.6))
    im = ax.imshow(A, cmap="viridis", interpolation="nearest")
    fig.colorbar(im, ax=ax, fraction=0.046)
    ax.set_xticks([])
    ax.set_yticks([])
    fig.tight_layout()
    _save(fig, path)
