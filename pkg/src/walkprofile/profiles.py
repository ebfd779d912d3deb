"""Walk-neighborhood profiles.

For a vertex a, the depth-1 neighborhood is its neighbor set. The depth-(k+1)
neighborhood is the union of the neighbors of the depth-k set, with a itself
removed at every level. Equivalently, b is in the depth-k set exactly when
some walk of length k runs from a to b without revisiting a in between.
These sets are not "vertices at shortest-path distance k": on bipartite
graphs they oscillate between the two sides, and once a level is empty all
deeper levels stay empty.

A vertex's profile is the tuple of set sizes at depths 1..K; the graph
profile averages those tuples over all vertices. Profiles are cheap,
permutation-invariant summaries suitable for comparing graphs of equal order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphDataError

__all__ = [
    "DEFAULT_DEPTH",
    "GraphProfile",
    "all_vertex_profiles",
    "graph_profile",
    "k_neighborhood",
    "profile_sum",
    "vertex_profile",
    "walk_reachability_oracle",
]

DEFAULT_DEPTH = 4


def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.n:
        raise GraphDataError(
            f"vertex {v} out of range for a graph with {g.n} vertices"
        )


def k_neighborhood(g: Graph, alpha: int, k: int) -> set[int]:
    """Depth-k walk neighborhood of alpha, by direct set recursion."""
    if k < 1:
        raise ValueError(f"depth must be >= 1, got {k}")
    _check_vertex(g, alpha)
    adj = g.adjacency
    current = set(adj[alpha])
    for _ in range(k - 1):
        if not current:
            break
        nxt: set[int] = set()
        for v in current:
            nxt |= adj[v]
        nxt.discard(alpha)
        current = nxt
    return current


def vertex_profile(g: Graph, alpha: int, depth: int = DEFAULT_DEPTH) -> tuple[int, ...]:
    """Sizes of alpha's walk neighborhoods at depths 1..depth."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    _check_vertex(g, alpha)
    adj = g.adjacency
    counts = []
    current = set(adj[alpha])
    counts.append(len(current))
    for _ in range(depth - 1):
        nxt: set[int] = set()
        for v in current:
            nxt |= adj[v]
        nxt.discard(alpha)
        current = nxt
        counts.append(len(current))
    return tuple(counts)


def all_vertex_profiles(g: Graph, depth: int = DEFAULT_DEPTH) -> np.ndarray:
    """Profiles for every vertex at once, as an (n, depth) integer array.

    Row a equals ``vertex_profile(g, a, depth)``. Runs the recursion for all
    start vertices simultaneously: F holds one boolean reachability row per
    start vertex, one matrix product per depth advances every row a step,
    and zeroing the diagonal removes each start vertex from its own row.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    a = g.adjacency_matrix()
    counts = np.zeros((g.n, depth), dtype=np.int64)
    reach = a.copy()
    counts[:, 0] = reach.sum(axis=1)
    for k in range(1, depth):
        reach = (reach.astype(np.float64) @ a) > 0
        np.fill_diagonal(reach, False)
        counts[:, k] = reach.sum(axis=1)
    return counts


def graph_profile(g: Graph, depth: int = DEFAULT_DEPTH) -> tuple[float, ...]:
    """Per-depth neighborhood sizes averaged over all vertices.

    Undefined (raises) on the empty graph; sums exactly in integers before
    the single division per depth.
    """
    if g.n == 0:
        raise ValueError("graph profile undefined for a graph with no vertices")
    totals = all_vertex_profiles(g, depth).sum(axis=0)
    return tuple(float(t) / g.n for t in totals.tolist())


def profile_sum(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Componentwise sum of two equal-length profiles."""
    if len(p) != len(q):
        raise ValueError(f"profile lengths differ: {len(p)} vs {len(q)}")
    return tuple(x + y for x, y in zip(p, q))


def walk_reachability_oracle(g: Graph, alpha: int, k: int) -> set[int]:
    """Depth-k neighborhood of alpha via matrix algebra, for cross-checking.

    Deliberately avoids the set recursion: delete alpha's row and column
    from the adjacency matrix, apply the remainder (k-1) times to alpha's
    neighbor row, and read off the reachable vertices. The deletion encodes
    "never revisit alpha mid-walk"; a plain k-th power of the full matrix
    would instead let walks bounce off alpha (a star center would look
    3-reachable to its leaves through center-leaf-center-leaf walks).
    Intended for small n; the dense products cost O(k n^2) per call.
    """
    if k < 1:
        raise ValueError(f"depth must be >= 1, got {k}")
    _check_vertex(g, alpha)
    a = g.adjacency_matrix()
    vec = a[alpha].copy()
    masked = a.copy()
    masked[alpha, :] = False
    masked[:, alpha] = False
    for _ in range(k - 1):
        vec = (vec.astype(np.float64) @ masked) > 0
    return {int(beta) for beta in np.flatnonzero(vec)}


@dataclass(frozen=True)
class GraphProfile:
    """A computed profile plus enough context to serialize it.

    ``counts`` is the (n, depth) per-vertex array; ``avg`` the graph-level
    average tuple. Instances are frozen; the array is owned, not shared.
    """

    n: int
    depth: int
    counts: np.ndarray
    avg: tuple[float, ...]

    @classmethod
    def of(cls, g: Graph, depth: int = DEFAULT_DEPTH) -> "GraphProfile":
        if g.n == 0:
            raise ValueError("profile undefined for a graph with no vertices")
        counts = all_vertex_profiles(g, depth)
        totals = counts.sum(axis=0)
        avg = tuple(float(t) / g.n for t in totals.tolist())
        return cls(n=g.n, depth=depth, counts=counts, avg=avg)
