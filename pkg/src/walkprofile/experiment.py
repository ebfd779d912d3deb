"""Clustered random-graph experiment: generate, profile, cluster, score.

The pipeline samples several clusters of G(n, p) graphs at different edge
probabilities, reduces every graph to one scalar (the mean of its averaged
walk-neighborhood counts), clusters those scalars with exact 1-D k-means,
and scores the clustering against the known generation labels. Everything
is deterministic given the config, including the master-seed-to-graph-seed
derivation, so runs are reproducible bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import permutations

from .distance import MODES, NORMS, scalar_summary
from .graph import MAX_SEED, Graph, generate_er_gnp
from .profiles import DEFAULT_DEPTH, GraphProfile, all_vertex_profiles

__all__ = [
    "ClusterSpec",
    "ExperimentConfig",
    "ExperimentResult",
    "GraphRecord",
    "MAX_CLUSTERS",
    "atomic_write_text",
    "cluster_accuracy",
    "derive_seed",
    "generate_population",
    "kmeans_1d",
    "run_experiment",
    "write_experiment_outputs",
]

MAX_CLUSTERS = 8

_GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    """Finalizer of the splitmix64 generator; bijective on 64-bit ints."""
    x &= _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """Per-graph seed: the (index+1)-th output of splitmix64 run from
    master_seed. Stable under parallel generation because each graph's
    seed depends only on (master_seed, index), not on generation order.
    """
    if index < 0:
        raise ValueError(f"index must be >= 0, got {index}")
    return _splitmix64(master_seed + (index + 1) * _GOLDEN)


@dataclass(frozen=True)
class ClusterSpec:
    """One cluster of the population: count graphs from G(n, p)."""

    p: float
    count: int
    n: int

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"edge probability must be in [0, 1], got {self.p}")
        if self.count < 1:
            raise ValueError(f"cluster graph count must be >= 1, got {self.count}")
        if self.n < 1:
            raise ValueError(f"nodes per graph must be >= 1, got {self.n}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Full experiment description; equal configs give equal results.

    mode and norm are carried so a config round-trips through JSON with
    the same fields the distance tooling uses, but clustering always runs
    on scalar values; only normalize affects the pipeline (it rescales
    each graph's averaged counts by 1/(n-1) before the scalar summary).
    """

    clusters: tuple[ClusterSpec, ...]
    seed: int
    depth: int = DEFAULT_DEPTH
    mode: str = "scalar"
    norm: str = "l1"
    normalize: bool = False

    def __post_init__(self):
        if not self.clusters:
            raise ValueError("config needs at least one cluster")
        if len(self.clusters) > MAX_CLUSTERS:
            raise ValueError(
                f"at most {MAX_CLUSTERS} clusters supported "
                "(accuracy search is factorial in the cluster count)"
            )
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError(
                f"seed must be an unsigned 64-bit integer, got {self.seed}"
            )
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.norm not in NORMS:
            raise ValueError(f"norm must be one of {NORMS}, got {self.norm!r}")
        if self.normalize and any(c.n < 2 for c in self.clusters):
            raise ValueError("normalize requires every cluster to have n >= 2")

    @property
    def total_graphs(self) -> int:
        return sum(c.count for c in self.clusters)

    @classmethod
    def from_json_dict(cls, data: object) -> "ExperimentConfig":
        """Parse the config JSON shape; unknown or missing keys are errors."""
        if not isinstance(data, dict):
            raise ValueError("config must be a JSON object")
        allowed = {"clusters", "K", "seed", "mode", "norm", "normalize"}
        unknown = sorted(set(data) - allowed)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        for key in ("clusters", "seed"):
            if key not in data:
                raise ValueError(f"config is missing required key {key!r}")
        raw_clusters = data["clusters"]
        if not isinstance(raw_clusters, list):
            raise ValueError("config key 'clusters' must be a list")
        clusters = []
        for i, entry in enumerate(raw_clusters):
            if not isinstance(entry, dict) or set(entry) != {"p", "count", "n"}:
                raise ValueError(
                    f"cluster {i} must be an object with keys p, count, n"
                )
            if not isinstance(entry["p"], (int, float)) or isinstance(entry["p"], bool):
                raise ValueError(f"cluster {i}: p must be a number")
            if not isinstance(entry["count"], int) or isinstance(entry["count"], bool):
                raise ValueError(f"cluster {i}: count must be an integer")
            if not isinstance(entry["n"], int) or isinstance(entry["n"], bool):
                raise ValueError(f"cluster {i}: n must be an integer")
            clusters.append(
                ClusterSpec(p=float(entry["p"]), count=entry["count"], n=entry["n"])
            )
        seed = data["seed"]
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ValueError("config key 'seed' must be an integer")
        depth = data.get("K", DEFAULT_DEPTH)
        if not isinstance(depth, int) or isinstance(depth, bool):
            raise ValueError("config key 'K' must be an integer")
        mode = data.get("mode", "scalar")
        norm = data.get("norm", "l1")
        normalize = data.get("normalize", False)
        if not isinstance(mode, str):
            raise ValueError("config key 'mode' must be a string")
        if not isinstance(norm, str):
            raise ValueError("config key 'norm' must be a string")
        if not isinstance(normalize, bool):
            raise ValueError("config key 'normalize' must be a boolean")
        return cls(
            clusters=tuple(clusters),
            seed=seed,
            depth=depth,
            mode=mode,
            norm=norm,
            normalize=normalize,
        )

    def to_json_dict(self) -> dict:
        return {
            "clusters": [
                {"p": c.p, "count": c.count, "n": c.n} for c in self.clusters
            ],
            "K": self.depth,
            "seed": self.seed,
            "mode": self.mode,
            "norm": self.norm,
            "normalize": self.normalize,
        }


def generate_population(config: ExperimentConfig) -> list[tuple[Graph, int]]:
    """All graphs of the experiment with their cluster labels.

    Cluster-major order: every graph of cluster 0, then cluster 1, and so
    on. Graph i uses seed derive_seed(config.seed, i) with i global across
    clusters, so any single graph can be regenerated in isolation.
    """
    population: list[tuple[Graph, int]] = []
    index = 0
    for label, cluster in enumerate(config.clusters):
        for _ in range(cluster.count):
            g = generate_er_gnp(cluster.n, cluster.p, derive_seed(config.seed, index))
            population.append((g, label))
            index += 1
    return population


def kmeans_1d(values: Sequence[float], k: int) -> list[int]:
    """Globally optimal 1-D k-means labels, 0..k-1 ascending by value.

    Optimal 1-D clusters are contiguous in sorted order, so dynamic
    programming over the sorted values with prefix sums finds the exact
    minimum within-cluster sum of squared deviations. Deterministic: cost
    ties are broken by keeping earlier clusters as small as possible.
    """
    n = len(values)
    if k < 1:
        raise ValueError(f"cluster count must be >= 1, got {k}")
    if k > n:
        raise ValueError(f"cannot split {n} values into {k} clusters")
    order = sorted(range(n), key=lambda i: (values[i], i))
    xs = [float(values[i]) for i in order]

    ps = [0.0] * (n + 1)
    ps2 = [0.0] * (n + 1)
    for i, x in enumerate(xs):
        ps[i + 1] = ps[i] + x
        ps2[i + 1] = ps2[i] + x * x

    def block_cost(a: int, b: int) -> float:
        # sum of squared deviations of xs[a:b] from its mean
        s = ps[b] - ps[a]
        s2 = ps2[b] - ps2[a]
        return max(s2 - s * s / (b - a), 0.0)

    inf = math.inf
    cost = [[inf] * (n + 1) for _ in range(k + 1)]
    split = [[0] * (n + 1) for _ in range(k + 1)]
    cost[0][0] = 0.0
    for j in range(1, k + 1):
        for i in range(j, n + 1):
            best = inf
            best_m = j - 1
            for m in range(j - 1, i):
                if cost[j - 1][m] == inf:
                    continue
                c = cost[j - 1][m] + block_cost(m, i)
                if c < best:
                    best = c
                    best_m = m
            cost[j][i] = best
            split[j][i] = best_m

    bounds = [n]
    i = n
    for j in range(k, 0, -1):
        i = split[j][i]
        bounds.append(i)
    bounds.reverse()

    labels_sorted = [0] * n
    for cluster in range(k):
        for pos in range(bounds[cluster], bounds[cluster + 1]):
            labels_sorted[pos] = cluster
    labels = [0] * n
    for pos, original in enumerate(order):
        labels[original] = labels_sorted[pos]
    return labels


def cluster_accuracy(
    true_labels: Sequence[int], predicted_labels: Sequence[int], k: int
) -> tuple[list[float], float]:
    """Accuracy under the best matching of predicted to true labels.

    Tries every permutation of the k labels (hence the k <= 8 cluster cap)
    and keeps the one maximizing overall accuracy. Returns per-true-cluster
    accuracies and the overall fraction correct; a label absent from
    true_labels scores 1.0 vacuously.
    """
    if len(true_labels) != len(predicted_labels):
        raise ValueError(
            f"label lists differ in length: {len(true_labels)} "
            f"vs {len(predicted_labels)}"
        )
    for lab in list(true_labels) + list(predicted_labels):
        if not 0 <= lab < k:
            raise ValueError(f"label {lab} outside range 0..{k - 1}")
    total = len(true_labels)
    if total == 0:
        return [1.0] * k, 1.0

    confusion = [[0] * k for _ in range(k)]
    for t, p in zip(true_labels, predicted_labels):
        confusion[t][p] += 1

    best_correct = -1
    best_map: tuple[int, ...] = tuple(range(k))
    for perm in permutations(range(k)):
        # perm maps predicted label q to true label perm[q]
        correct = sum(confusion[perm[q]][q] for q in range(k))
        if correct > best_correct:
            best_correct = correct
            best_map = perm

    inverse = [0] * k
    for q in range(k):
        inverse[best_map[q]] = q
    sizes = [sum(row) for row in confusion]
    per_cluster = [
        confusion[c][inverse[c]] / sizes[c] if sizes[c] else 1.0 for c in range(k)
    ]
    return per_cluster, best_correct / total


@dataclass(frozen=True)
class GraphRecord:
    """One population graph's outcome."""

    graph_index: int
    true_label: int
    predicted_label: int
    scalar: float


@dataclass(frozen=True)
class ExperimentResult:
    """Scored experiment outcome; centroids are mean scalars per true cluster."""

    config: ExperimentConfig
    per_graph: tuple[GraphRecord, ...]
    per_cluster_accuracy: tuple[float, ...]
    overall_accuracy: float
    centroids: tuple[float, ...]

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_json_dict(),
            "per_graph": [
                {
                    "graph_index": r.graph_index,
                    "true_label": r.true_label,
                    "predicted_label": r.predicted_label,
                    "scalar": r.scalar,
                }
                for r in self.per_graph
            ],
            "per_cluster_accuracy": list(self.per_cluster_accuracy),
            "overall_accuracy": self.overall_accuracy,
            "centroids": list(self.centroids),
        }


def _graph_scalar(g: Graph, config: ExperimentConfig) -> float:
    profile = GraphProfile.of(g, config.depth)
    avg = profile.avg
    if config.normalize:
        avg = tuple(c / (g.n - 1) for c in avg)
    return scalar_summary(avg)


def run_experiment(
    config: ExperimentConfig,
    population: list[tuple[Graph, int]] | None = None,
) -> ExperimentResult:
    """Generate (unless given), profile, cluster, and score.

    Passing a pre-generated population skips regeneration; it must come
    from generate_population(config) for the result to be meaningful.
    """
    if population is None:
        population = generate_population(config)
    k = len(config.clusters)
    true_labels = [label for _, label in population]
    scalars = [_graph_scalar(g, config) for g, _ in population]
    predicted = kmeans_1d(scalars, k)
    per_cluster, overall = cluster_accuracy(true_labels, predicted, k)

    centroids = []
    for c in range(k):
        members = [s for s, t in zip(scalars, true_labels) if t == c]
        centroids.append(math.fsum(members) / len(members))

    records = tuple(
        GraphRecord(i, t, p, s)
        for i, (t, p, s) in enumerate(zip(true_labels, predicted, scalars))
    )
    return ExperimentResult(
        config=config,
        per_graph=records,
        per_cluster_accuracy=tuple(per_cluster),
        overall_accuracy=overall,
        centroids=tuple(centroids),
    )


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write text via a temp file and rename, so readers never see a
    partial file."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _scalars_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["graph_index", "true_label", "predicted_label", "diag_scalar"])
    for r in result.per_graph:
        writer.writerow(
            [r.graph_index, r.true_label, r.predicted_label, f"{r.scalar:.12f}"]
        )
    return buf.getvalue()


def _vertex_profile_csv(counts: Sequence[int] | None) -> str:
    lines = ["k,count"]
    if counts is not None:
        lines.extend(f"{k},{c}" for k, c in enumerate(counts, start=1))
    return "\n".join(lines) + "\n"


def _first_vertices_csv(rows: Sequence[tuple[int, int, int]]) -> str:
    lines = ["vertex,k,count"]
    lines.extend(f"{v},{k},{c}" for v, k, c in rows)
    return "\n".join(lines) + "\n"


def write_experiment_outputs(
    result: ExperimentResult,
    population: list[tuple[Graph, int]],
    out_dir: str | os.PathLike,
    include_figures: bool = True,
    profile_graph: int = 0,
    profile_vertex: int = 0,
    first_vertices: int = 3,
) -> list[str]:
    """Write result.json, scalars.csv, and plot data under out_dir.

    Plot CSVs cover one chosen (graph, vertex) profile and the profiles of
    the first few vertices of that graph. With include_figures, PNG
    renderings of the three data files land alongside them. An empty
    population yields header-only CSVs and no figures. Returns the paths
    written.
    """
    out = os.fspath(out_dir)
    os.makedirs(out, exist_ok=True)
    written: list[str] = []

    def emit(name: str, text: str) -> None:
        path = os.path.join(out, name)
        atomic_write_text(path, text)
        written.append(path)

    emit("result.json", json.dumps(result.to_json_dict(), indent=2) + "\n")
    emit("scalars.csv", _scalars_csv(result))

    vertex_counts = None
    group_rows: list[tuple[int, int, int]] = []
    if population:
        if not 0 <= profile_graph < len(population):
            raise ValueError(
                f"profile graph index {profile_graph} outside population "
                f"of {len(population)} graphs"
            )
        g = population[profile_graph][0]
        counts = all_vertex_profiles(g, result.config.depth)
        if not 0 <= profile_vertex < g.n:
            raise ValueError(
                f"profile vertex {profile_vertex} outside graph with {g.n} vertices"
            )
        vertex_counts = counts[profile_vertex].tolist()
        for v in range(min(first_vertices, g.n)):
            for k, c in enumerate(counts[v].tolist(), start=1):
                group_rows.append((v, k, c))
    emit("vertex_profile.csv", _vertex_profile_csv(vertex_counts))
    emit("first_vertices.csv", _first_vertices_csv(group_rows))

    if include_figures and population:
        from . import plotting

        path = os.path.join(out, "vertex_profile.png")
        plotting.render_vertex_profile(vertex_counts, profile_vertex, path)
        written.append(path)
        path = os.path.join(out, "first_vertices.png")
        plotting.render_first_vertices(group_rows, path)
        written.append(path)
        if result.per_graph:
            path = os.path.join(out, "scalars.png")
            plotting.render_scalars(result, path)
            written.append(path)
    return written
