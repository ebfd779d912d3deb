"""Figure rendering for experiment outputs.

Everything draws through the Agg backend so rendering works headless, and
each figure is saved via a temp file and rename like the data files. These
are companion views of the CSVs written next to them, not an independent
data path.
"""

from __future__ import annotations

import os
import tempfile
from collections.abc import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .experiment import ExperimentResult

__all__ = [
    "render_first_vertices",
    "render_scalars",
    "render_vertex_profile",
]


def _save_atomic(fig, path: str | os.PathLike) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp.", suffix=".png")
    os.close(fd)
    try:
        fig.savefig(tmp, format="png", dpi=120)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    finally:
        plt.close(fig)


def render_vertex_profile(
    counts: Sequence[int], vertex: int, path: str | os.PathLike
) -> None:
    """Line plot of one vertex's neighborhood size against depth."""
    ks = list(range(1, len(counts) + 1))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ks, list(counts), marker="o")
    ax.set_xlabel("depth k")
    ax.set_ylabel("neighborhood size")
    ax.set_title(f"Walk neighborhoods of vertex {vertex}")
    ax.set_xticks(ks)
    ax.grid(True, alpha=0.3)
    _save_atomic(fig, path)


def render_first_vertices(
    rows: Sequence[tuple[int, int, int]], path: str | os.PathLike
) -> None:
    """Grouped bars: neighborhood size per depth, one group per vertex.

    rows are (vertex, depth, count) triples as written to the grouped CSV.
    """
    by_vertex: dict[int, list[tuple[int, int]]] = {}
    for v, k, c in rows:
        by_vertex.setdefault(v, []).append((k, c))
    fig, ax = plt.subplots(figsize=(7, 4))
    vertices = sorted(by_vertex)
    depths = sorted({k for _, k, _ in rows})
    width = 0.8 / max(len(vertices), 1)
    for i, v in enumerate(vertices):
        series = dict(by_vertex[v])
        xs = [k + (i - (len(vertices) - 1) / 2) * width for k in depths]
        ax.bar(xs, [series.get(k, 0) for k in depths], width=width, label=f"vertex {v}")
    ax.set_xlabel("depth k")
    ax.set_ylabel("neighborhood size")
    ax.set_title("Walk neighborhoods of the first vertices")
    ax.set_xticks(depths)
    if vertices:
        ax.legend()
    ax.grid(True, axis="y", alpha=0.3)
    _save_atomic(fig, path)


def render_scalars(result: ExperimentResult, path: str | os.PathLike) -> None:
    """Scatter of per-graph scalar values in population order, colored by
    true cluster, with the cluster mean drawn through each block."""
    fig, ax = plt.subplots(figsize=(8, 4))
    by_label: dict[int, list[tuple[int, float]]] = {}
    for r in result.per_graph:
        by_label.setdefault(r.true_label, []).append((r.graph_index, r.scalar))
    for label in sorted(by_label):
        pts = by_label[label]
        ax.scatter(
            [i for i, _ in pts],
            [s for _, s in pts],
            s=14,
            label=f"cluster {label}",
        )
        if label < len(result.centroids):
            ax.hlines(
                result.centroids[label],
                min(i for i, _ in pts),
                max(i for i, _ in pts),
                colors="gray",
                linestyles="dotted",
                linewidth=1,
            )
    ax.set_xlabel("graph index")
    ax.set_ylabel("scalar profile value")
    ax.set_title("Per-graph scalar values by cluster")
    ax.legend()
    ax.grid(True, alpha=0.3)
    _save_atomic(fig, path)
