"""Simple undirected graphs: construction, seeded G(n,p) sampling, edge-list I/O.

Vertices are the integers 0..n-1. Graphs are unweighted, with no self-loops
and no parallel edges. The vertex count is stored explicitly so isolated
vertices survive serialization.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Graph",
    "GraphDataError",
    "MAX_SEED",
    "generate_er_gnp",
    "read_edge_list",
    "write_edge_list",
]

MAX_SEED = 2**64 - 1


class GraphDataError(Exception):
    """Malformed or out-of-range graph data (bad vertex id, bad file, ...)."""


class Graph:
    """Adjacency-set representation of a simple undirected graph.

    Mutation (``add_edge``) is intended for single-owner construction;
    a fully built graph is treated as immutable and is safe to share
    across threads.
    """

    __slots__ = ("n", "_adj")

    def __init__(self, n: int):
        if n < 0:
            raise ValueError(f"vertex count must be >= 0, got {n}")
        self.n = n
        self._adj: list[set[int]] = [set() for _ in range(n)]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise GraphDataError(
                f"vertex {v} out of range for a graph with {self.n} vertices"
            )

    def add_edge(self, u: int, v: int) -> None:
        """Insert the undirected edge {u, v}; re-adding it is a no-op."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise GraphDataError(f"self-loop at vertex {u} rejected")
        self._adj[u].add(v)
        self._adj[v].add(u)

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return v in self._adj[u]

    def neighbors(self, v: int) -> list[int]:
        """Neighbor ids of v, sorted ascending."""
        self._check_vertex(v)
        return sorted(self._adj[v])

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self._adj[v])

    @property
    def adjacency(self) -> list[set[int]]:
        """Internal adjacency sets, indexed by vertex. Treat as read-only."""
        return self._adj

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self._adj) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges as (u, v) with u < v, in lexicographic order."""
        for u in range(self.n):
            for v in sorted(self._adj[u]):
                if u < v:
                    yield u, v

    def adjacency_matrix(self) -> np.ndarray:
        """Dense boolean adjacency matrix (zero diagonal)."""
        a = np.zeros((self.n, self.n), dtype=bool)
        for u in range(self.n):
            for v in self._adj[u]:
                a[u, v] = True
        return a

    def relabeled(self, perm: Sequence[int]) -> "Graph":
        """Copy with vertex v renamed to perm[v]; perm must be a permutation."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm is not a permutation of the vertex set")
        g = Graph(self.n)
        for u, v in self.edges():
            g.add_edge(perm[u], perm[v])
        return g

    def validate(self) -> None:
        """Check symmetry, absence of self-loops, and id ranges; raise on breach."""
        for u, nbrs in enumerate(self._adj):
            for v in nbrs:
                if not 0 <= v < self.n:
                    raise GraphDataError(f"neighbor {v} of {u} out of range")
                if v == u:
                    raise GraphDataError(f"self-loop at vertex {u}")
                if u not in self._adj[v]:
                    raise GraphDataError(f"asymmetric edge ({u}, {v})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def _check_seed(seed: int) -> None:
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")


def generate_er_gnp(n: int, p: float, seed: int) -> Graph:
    """Sample G(n, p): every unordered pair is an edge with probability p.

    Deterministic for a fixed (n, p, seed). One PCG64 uniform draw is made
    per pair, in the fixed order (u, v) with u < v, u ascending then v
    ascending, so equal arguments always reproduce the same edge set.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must be in [0, 1], got {p}")
    _check_seed(seed)
    g = Graph(n)
    if n < 2:
        return g
    rng = np.random.Generator(np.random.PCG64(seed))
    row, col = np.triu_indices(n, k=1)
    keep = rng.random(row.size) < p
    for u, v in zip(row[keep].tolist(), col[keep].tolist()):
        g.add_edge(u, v)
    return g


def write_edge_list(g: Graph) -> str:
    """Canonical edge-list text: header line with n, then one "u v" line per
    edge with u < v, sorted lexicographically, LF endings."""
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> Graph:
    """Parse edge-list text (see ``write_edge_list`` for the canonical form).

    Lines starting with '#' and blank lines are skipped. The first other
    line must be the vertex count; every remaining line must be "u v" with
    0 <= u, v < n and u != v. Raises GraphDataError naming the offending
    line number.
    """
    g: Graph | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if g is None:
            try:
                n = int(line)
            except ValueError:
                raise GraphDataError(
                    f"line {lineno}: expected integer vertex count, got {raw!r}"
                ) from None
            if n < 0:
                raise GraphDataError(f"line {lineno}: vertex count must be >= 0")
            g = Graph(n)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphDataError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphDataError(
                f"line {lineno}: non-integer vertex id in {raw!r}"
            ) from None
        try:
            g.add_edge(u, v)
        except GraphDataError as exc:
            raise GraphDataError(f"line {lineno}: {exc}") from None
    if g is None:
        raise GraphDataError("missing vertex-count header line")
    return g
