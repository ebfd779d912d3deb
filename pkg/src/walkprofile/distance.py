"""Profile-based graph distance and a brute-force cut-distance baseline.

The profile distance compares two graphs through their walk-neighborhood
profiles only, so it needs no vertex correspondence and tolerates different
vertex counts. It is a pseudometric: distinct graphs with equal profiles sit
at distance zero.

The cut distance is the classical baseline: the largest discrepancy in
crossing-edge counts over all bipartitions, scaled by 1/n. It does require a
shared vertex set, and the exhaustive version here is exponential by design.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, GraphDataError
from .profiles import DEFAULT_DEPTH, GraphProfile

__all__ = [
    "CUT_BRUTEFORCE_LIMIT",
    "DistanceMatrix",
    "DistanceOptions",
    "MODES",
    "NORMS",
    "cut_distance_bruteforce",
    "cut_weight",
    "profile_distance",
    "distance_matrix",
    "scalar_summary",
]

MODES = ("scalar", "vector")
NORMS = ("l1", "l2", "linf")

CUT_BRUTEFORCE_LIMIT = 20


@dataclass(frozen=True)
class DistanceOptions:
    """How to turn two graph profiles into one number.

    mode "scalar" reduces each profile to its mean count and takes the
    absolute difference; mode "vector" applies the chosen norm to the
    pointwise profile difference. With normalize on, every averaged count
    is divided by n - 1 first (its own graph's n), mapping entries into
    [0, 1] so graphs of different orders compare on one scale.
    """

    mode: str = "scalar"
    norm: str = "l1"
    normalize: bool = False
    depth: int = DEFAULT_DEPTH

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.norm not in NORMS:
            raise ValueError(f"norm must be one of {NORMS}, got {self.norm!r}")
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")


def scalar_summary(avg_counts: Sequence[float]) -> float:
    """Mean of the averaged counts over all depths."""
    if not avg_counts:
        raise ValueError("cannot summarize an empty profile")
    return math.fsum(avg_counts) / len(avg_counts)


def _comparison_vector(profile: GraphProfile, opts: DistanceOptions) -> tuple[float, ...]:
    if not opts.normalize:
        return profile.avg
    if profile.n < 2:
        raise ValueError(
            "normalize requires graphs with at least 2 vertices, "
            f"got n={profile.n}"
        )
    return tuple(c / (profile.n - 1) for c in profile.avg)


def _distance_between(
    p1: GraphProfile, p2: GraphProfile, opts: DistanceOptions
) -> float:
    v1 = _comparison_vector(p1, opts)
    v2 = _comparison_vector(p2, opts)
    if opts.mode == "scalar":
        return abs(scalar_summary(v1) - scalar_summary(v2))
    diffs = [abs(a - b) for a, b in zip(v1, v2)]
    if opts.norm == "l1":
        return math.fsum(diffs)
    if opts.norm == "l2":
        return math.sqrt(math.fsum(d * d for d in diffs))
    return max(diffs)


def profile_distance(
    g1: Graph, g2: Graph, opts: DistanceOptions | None = None
) -> float:
    """Distance between two graphs' walk-neighborhood profiles.

    Both profiles use the same depth from opts, so graphs of different
    vertex counts are directly comparable. Empty graphs have no profile
    and are rejected.
    """
    opts = opts or DistanceOptions()
    for g in (g1, g2):
        if g.n == 0:
            raise GraphDataError("profile distance undefined for an empty graph")
    p1 = GraphProfile.of(g1, opts.depth)
    p2 = GraphProfile.of(g2, opts.depth)
    return _distance_between(p1, p2, opts)


@dataclass(frozen=True)
class DistanceMatrix:
    """Pairwise profile distances for an ordered population."""

    labels: tuple[str, ...]
    opts: DistanceOptions
    values: np.ndarray = field(repr=False)

    def to_json_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "mode": self.opts.mode,
            "norm": self.opts.norm,
            "K": self.opts.depth,
            "values": [[float(v) for v in row] for row in self.values],
        }

    def to_csv(self) -> str:
        """Upper-triangle CSV with header "label_i,label_j,distance"."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["label_i", "label_j", "distance"])
        k = len(self.labels)
        for i in range(k):
            for j in range(i + 1, k):
                writer.writerow(
                    [self.labels[i], self.labels[j], f"{self.values[i, j]:.12f}"]
                )
        return buf.getvalue()


def distance_matrix(
    graphs: Sequence[Graph],
    opts: DistanceOptions | None = None,
    labels: Sequence[str] | None = None,
) -> DistanceMatrix:
    """All pairwise profile distances; each profile is computed once.

    Labels default to "G1", "G2", ... in input order.
    """
    opts = opts or DistanceOptions()
    if labels is None:
        labels = [f"G{i + 1}" for i in range(len(graphs))]
    if len(labels) != len(graphs):
        raise ValueError(
            f"{len(labels)} labels for {len(graphs)} graphs"
        )
    for g in graphs:
        if g.n == 0:
            raise GraphDataError("profile distance undefined for an empty graph")
    profiles = [GraphProfile.of(g, opts.depth) for g in graphs]
    k = len(graphs)
    values = np.zeros((k, k), dtype=np.float64)
    for i in range(k):
        for j in range(i + 1, k):
            d = _distance_between(profiles[i], profiles[j], opts)
            values[i, j] = d
            values[j, i] = d
    return DistanceMatrix(labels=tuple(labels), opts=opts, values=values)


def cut_weight(g: Graph, subset: Sequence[int] | set[int]) -> int:
    """Number of edges with one endpoint in the subset and one outside."""
    s = set(subset)
    for v in s:
        if not 0 <= v < g.n:
            raise ValueError(f"subset member {v} outside vertex range 0..{g.n - 1}")
    return sum(1 for u, v in g.edges() if (u in s) != (v in s))


def _crossing_counts(g: Graph, membership: list[np.ndarray]) -> np.ndarray:
    """Crossing-edge count of g for every enumerated bipartition."""
    total = np.zeros(membership[0].size, dtype=np.int32)
    for u, v in g.edges():
        total += membership[u] ^ membership[v]
    return total


def cut_distance_bruteforce(g1: Graph, g2: Graph, force: bool = False) -> float:
    """Exact cut distance: max over bipartitions (S, S-complement) of
    |crossings in g1 - crossings in g2| / n.

    Complementary subsets give the same value, so vertex n-1 is pinned to
    one side and 2^(n-1) subsets are enumerated. Refuses n > 20 unless
    force is set; that is already half a million bipartitions.
    """
    if g1.n != g2.n:
        raise ValueError(
            f"cut distance needs equal vertex counts, got {g1.n} and {g2.n}"
        )
    n = g1.n
    if n == 0:
        return 0.0
    if n > CUT_BRUTEFORCE_LIMIT and not force:
        raise ValueError(
            f"refusing brute force at n={n} (limit {CUT_BRUTEFORCE_LIMIT}); "
            "pass force to override"
        )
    idx = np.arange(2 ** (n - 1), dtype=np.uint64)
    membership = [
        ((idx >> np.uint64(v)) & np.uint64(1)).astype(np.uint8)
        for v in range(n - 1)
    ]
    membership.append(np.zeros(idx.size, dtype=np.uint8))
    c1 = _crossing_counts(g1, membership)
    c2 = _crossing_counts(g2, membership)
    return float(np.abs(c1 - c2).max()) / n
