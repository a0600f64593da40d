"""Reference streaming algorithms spanning the memory/accuracy range.

* :class:`FullStore` keeps every edge and answers exactly.
* :class:`SampledIndex` keeps ``B`` bits of ``x`` chosen by shared coins.
* :class:`Constant` keeps nothing.
* :class:`UnionFind` is the undirected-connectivity baseline, whose state
  stays at O(n log n) bits however many edges arrive.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Optional

from digadget.gadgets import PropertyTag, evaluate, property_from_bit
from digadget.graph_core import Digraph, Edge, GraphError
from digadget.stream_model import (
    BitReader,
    BitString,
    BitWriter,
    MalformedMessageError,
    PublicParams,
    StreamingAlgorithm,
    derive_rng,
    width_for,
)


class MalformedInstanceError(ValueError):
    """The second-phase edges do not have the shape of any gadget."""


def _write_edges(w: BitWriter, edges: Iterable[Edge], width: int) -> None:
    for u, v in edges:
        w.write(u, width)
        w.write(v, width)


def _read_edges(r: BitReader, count: int, width: int, vertex_count: int) -> list[Edge]:
    out = []
    for _ in range(count):
        u, v = r.read(width), r.read(width)
        if u >= vertex_count or v >= vertex_count:
            raise MalformedMessageError(f"decoded edge ({u}, {v}) out of range")
        out.append(Edge(u, v))
    return out


def full_store_decide(prop: PropertyTag, edges: Iterable[Edge], params: PublicParams) -> bool:
    return evaluate(prop, Digraph(params.vertex_count, edges), params.source)


class FullStore(StreamingAlgorithm):
    """Stores the edge set; state is a count followed by sorted edge pairs.

    The count field is wide enough for ``V*V`` edges, each endpoint takes
    ``ceil(log2 V)`` bits.
    """

    def __init__(self, budget_bits: Optional[int] = None):
        # budget is accepted for factory symmetry and not enforced
        self.budget_bits = budget_bits
        self.params: Optional[PublicParams] = None
        self.edges: set[Edge] = set()

    def begin(self, params: PublicParams) -> None:
        self.params = params
        self.edges = set()

    def absorb(self, edge: Edge) -> None:
        self.edges.add(Edge(*edge))

    def _widths(self) -> tuple[int, int]:
        v = self.params.vertex_count
        return (v * v).bit_length(), width_for(v)

    def snapshot(self) -> BitString:
        count_width, width = self._widths()
        w = BitWriter()
        w.write(len(self.edges), count_width)
        _write_edges(w, sorted(self.edges), width)
        return w.getvalue()

    def restore(self, params: PublicParams, state: BitString) -> None:
        self.begin(params)
        count_width, width = self._widths()
        r = BitReader(state)
        count = r.read(count_width)
        if r.remaining != 2 * width * count:
            raise MalformedMessageError(
                f"header says {count} edges but {r.remaining} payload bits follow"
            )
        self.edges = set(_read_edges(r, count, width, params.vertex_count))

    def decide(self) -> bool:
        return full_store_decide(self.params.property, self.edges, self.params)


def infer_position(prop: PropertyTag, edges: Iterable[Edge], n: int) -> tuple[int, int]:
    """Recover ``(j, k)`` from the edges of a gadget that do not run L->R.

    Acyclicity: the single R->L edge ``n+k -> j``. Strong connectivity: ``n+k``
    is the vertex with out-degree ``2n-1`` and ``j`` the one with in-degree
    ``2n-1``. Reachability: ``j`` is the head of the edge out of ``s``, ``k``
    the common tail of the R->L edges (``k = 0`` when ``n = 1``).
    """
    prop = PropertyTag.parse(prop)
    edges = list(edges)
    if prop is PropertyTag.ACYCLICITY:
        back = [(u, v) for u, v in edges if n <= u < 2 * n and v < n]
        if len(back) != 1:
            raise MalformedInstanceError(f"expected one R->L edge, found {len(back)}")
        u, v = back[0]
        return v, u - n
    if prop is PropertyTag.STRONG_CONNECTIVITY:
        if not edges:
            raise MalformedInstanceError("no second-phase edges")
        out_deg = Counter(u for u, _ in edges)
        in_deg = Counter(v for _, v in edges)
        hubs_out = [u for u, d in out_deg.items() if d == 2 * n - 1 and n <= u < 2 * n]
        hubs_in = [v for v, d in in_deg.items() if d == 2 * n - 1 and v < n]
        if len(hubs_out) != 1 or len(hubs_in) != 1 or len(edges) != 4 * n - 3:
            raise MalformedInstanceError("edges are not two stars of size 2n-1")
        return hubs_in[0], hubs_out[0] - n
    s = 2 * n
    from_s = [v for u, v in edges if u == s]
    if len(from_s) != 1 or not from_s[0] < n:
        raise MalformedInstanceError("expected exactly one edge s -> L")
    j = from_s[0]
    tails = {u for u, v in edges if n <= u < 2 * n and v < n}
    back_count = sum(1 for u, v in edges if n <= u < 2 * n and v < n)
    if n == 1:
        if tails:
            raise MalformedInstanceError("unexpected R->L edge for n = 1")
        return j, 0
    if len(tails) != 1 or back_count != n - 1:
        raise MalformedInstanceError("R->L edges must all leave one vertex, n-1 of them")
    return j, tails.pop() - n


class SampledIndex(StreamingAlgorithm):
    """Remembers ``min(B, m)`` bits of ``x`` at positions drawn from the seed.

    Positions are recomputed from ``params.rng_seed`` on restore, so the
    boundary state is exactly ``min(B, m)`` bits. After the boundary the
    non-L->R edges are kept (``2*ceil(log2 V)`` bits each) so the queried
    position can be read off the gadget structure at decide time. Unsampled
    queries are answered with a coin from the same seed.
    """

    def __init__(self, budget_bits: int):
        if budget_bits < 0:
            raise ValueError("budget must be non-negative")
        self.budget_bits = budget_bits
        self.params: Optional[PublicParams] = None
        self.positions: list[int] = []
        self._slot: dict[int, int] = {}
        self.recorded = bytearray()
        self.extra: set[Edge] = set()

    def begin(self, params: PublicParams) -> None:
        self.params = params
        size = min(self.budget_bits, params.m)
        if size == params.m:
            positions = list(range(params.m))
        else:
            chosen = derive_rng(params.rng_seed, 0).choice(params.m, size=size, replace=False)
            positions = sorted(int(p) for p in chosen)
        self.positions = positions
        self._slot = {p: idx for idx, p in enumerate(positions)}
        self.recorded = bytearray(size)
        self.extra = set()

    def absorb(self, edge: Edge) -> None:
        u, v = edge
        n = self.params.n
        if u < n and n <= v < 2 * n:
            idx = self._slot.get(u * n + v - n)
            if idx is not None:
                self.recorded[idx] = 1
        else:
            self.extra.add(Edge(u, v))

    def snapshot(self) -> BitString:
        w = BitWriter()
        for b in self.recorded:
            w.write(b, 1)
        _write_edges(w, sorted(self.extra), width_for(self.params.vertex_count))
        return w.getvalue()

    def restore(self, params: PublicParams, state: BitString) -> None:
        self.begin(params)
        r = BitReader(state)
        if len(state) < len(self.recorded):
            raise MalformedMessageError(
                f"state has {len(state)} bits, budget needs {len(self.recorded)}"
            )
        for idx in range(len(self.recorded)):
            self.recorded[idx] = r.read(1)
        width = width_for(params.vertex_count)
        if r.remaining % (2 * width):
            raise MalformedMessageError("trailing bits do not form whole edges")
        self.extra = set(_read_edges(r, r.remaining // (2 * width), width, params.vertex_count))

    def decide(self) -> bool:
        return sampled_index_decide(self)

    def coin(self) -> bool:
        return bool(derive_rng(self.params.rng_seed, 1).integers(2))


def sampled_index_decide(alg: SampledIndex) -> bool:
    params = alg.params
    j, k = infer_position(params.property, alg.extra, params.n)
    idx = alg._slot.get(j * params.n + k)
    if idx is None:
        return alg.coin()
    return property_from_bit(params.property, alg.recorded[idx])


class Constant(StreamingAlgorithm):
    """Zero-bit state; always answers ``answer``."""

    def __init__(self, answer: bool = True):
        self.answer = answer

    def begin(self, params: PublicParams) -> None:
        self.params = params

    def absorb(self, edge: Edge) -> None:
        pass

    def snapshot(self) -> BitString:
        return BitString()

    def restore(self, params: PublicParams, state: BitString) -> None:
        if len(state):
            raise MalformedMessageError("constant algorithm has no state")
        self.begin(params)

    def decide(self) -> bool:
        return self.answer


class UnionFind:
    """Union by rank with path compression over ``0..n-1``.

    Serialized as ``n`` parent fields of ``ceil(log2 n)`` bits followed by
    ``n`` rank fields wide enough for ``floor(log2 n)``.
    """

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("n must be non-negative")
        self.n = n
        self.parent = list(range(n))
        self.rank = [0] * n
        self.components = n

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.components -= 1
        return True

    def absorb(self, edge: tuple[int, int]) -> None:
        u, v = edge
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise GraphError(f"edge ({u}, {v}) outside 0..{self.n - 1}")
        self.union(u, v)

    def _widths(self) -> tuple[int, int]:
        return width_for(self.n), max(self.n.bit_length() - 1, 0).bit_length()

    def snapshot(self) -> BitString:
        pw, rw = self._widths()
        w = BitWriter()
        for p in self.parent:
            w.write(p, pw)
        for r in self.rank:
            w.write(r, rw)
        return w.getvalue()

    @classmethod
    def restore(cls, n: int, state: BitString) -> "UnionFind":
        uf = cls(n)
        pw, rw = uf._widths()
        if len(state) != n * (pw + rw):
            raise MalformedMessageError(f"expected {n * (pw + rw)} bits, got {len(state)}")
        r = BitReader(state)
        uf.parent = [r.read(pw) for _ in range(n)]
        uf.rank = [r.read(rw) for _ in range(n)]
        if any(p >= n for p in uf.parent):
            raise MalformedMessageError("parent pointer out of range")
        uf.components = sum(1 for v, p in enumerate(uf.parent) if v == p)
        return uf


def union_find_profile(n: int, edges: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Component count and the largest state size seen at any checkpoint."""
    uf = UnionFind(n)
    peak = len(uf.snapshot())
    for e in edges:
        uf.absorb(e)
        peak = max(peak, len(uf.snapshot()))
    return uf.components, peak


def union_find_components(n: int, edges: Iterable[tuple[int, int]]) -> int:
    uf = UnionFind(n)
    for e in edges:
        uf.absorb(e)
    return uf.components
