"""Immutable directed graphs and exact property oracles.

Every oracle here runs in O(V + E) and is exact. They are the ground truth
the gadget constructions and streaming algorithms are checked against.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, NamedTuple, Sequence


class GraphError(ValueError):
    """Raised for malformed graphs (endpoint out of range, bad source)."""


class Edge(NamedTuple):
    tail: int
    head: int

    def __str__(self) -> str:
        return f"{self.tail}->{self.head}"


class Digraph:
    """A directed graph on vertices ``0..vertex_count-1``.

    Duplicate edges collapse to one. Instances are not meant to be mutated;
    adjacency lists are built once at construction.
    """

    __slots__ = ("vertex_count", "edges", "_succ", "_pred")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]] = ()):
        if vertex_count < 0:
            raise GraphError(f"vertex_count must be non-negative, got {vertex_count}")
        edge_set = frozenset(Edge(*e) for e in edges)
        succ: list[list[int]] = [[] for _ in range(vertex_count)]
        pred: list[list[int]] = [[] for _ in range(vertex_count)]
        for u, v in edge_set:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphError(
                    f"edge ({u}, {v}) has an endpoint outside 0..{vertex_count - 1}"
                )
            succ[u].append(v)
            pred[v].append(u)
        self.vertex_count = vertex_count
        self.edges = edge_set
        self._succ = succ
        self._pred = pred

    def __len__(self) -> int:
        return len(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges))

    def __repr__(self) -> str:
        return f"Digraph(vertex_count={self.vertex_count}, edges={len(self.edges)})"

    def successors(self, v: int) -> Sequence[int]:
        return self._succ[v]

    def predecessors(self, v: int) -> Sequence[int]:
        return self._pred[v]

    def reversed(self) -> Digraph:
        return Digraph(self.vertex_count, ((v, u) for u, v in self.edges))


def digraph_from_edges(vertex_count: int, edges: Iterable[tuple[int, int]]) -> Digraph:
    return Digraph(vertex_count, edges)


def _visit_count(adj: list[list[int]], start: int) -> int:
    seen = bytearray(len(adj))
    seen[start] = 1
    count = 1
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = 1
                count += 1
                queue.append(w)
    return count


def is_acyclic(g: Digraph) -> bool:
    """Kahn elimination: acyclic iff every vertex is eventually peeled."""
    indeg = [len(p) for p in g._pred]
    ready = [v for v, d in enumerate(indeg) if d == 0]
    removed = 0
    while ready:
        u = ready.pop()
        removed += 1
        for w in g._succ[u]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return removed == g.vertex_count


def is_strongly_connected(g: Digraph) -> bool:
    # Zero or one vertex is vacuously strongly connected.
    if g.vertex_count <= 1:
        return True
    n = g.vertex_count
    return _visit_count(g._succ, 0) == n and _visit_count(g._pred, 0) == n


def reaches_all(g: Digraph, s: int) -> bool:
    if not 0 <= s < g.vertex_count:
        raise GraphError(f"source {s} outside 0..{g.vertex_count - 1}")
    return _visit_count(g._succ, s) == g.vertex_count
