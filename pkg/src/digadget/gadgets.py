"""INDEX-reduction gadget graphs for acyclicity, strong connectivity and
reachability from a source.

Vertex layout is fixed: the left side ``L`` is ``0..n-1``, the right side
``R`` is ``n..2n-1`` and the source ``s`` (reachability only) is ``2n``.
Indices are 0-based, so bit position ``i`` splits as ``i = j*n + k`` with
``j`` naming a vertex of ``L`` and ``k`` a vertex of ``R``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from digadget.graph_core import (
    Digraph,
    Edge,
    is_acyclic,
    is_strongly_connected,
    reaches_all,
)


class PropertyTag(str, enum.Enum):
    ACYCLICITY = "acyc"
    STRONG_CONNECTIVITY = "sc"
    REACHABILITY = "reach"

    @classmethod
    def parse(cls, value: "str | PropertyTag") -> "PropertyTag":
        if isinstance(value, cls):
            return value
        aliases = {
            "acyclicity": cls.ACYCLICITY,
            "strong_connectivity": cls.STRONG_CONNECTIVITY,
            "reachability": cls.REACHABILITY,
        }
        try:
            return cls(value)
        except ValueError:
            if value in aliases:
                return aliases[value]
            raise ValueError(f"unknown property {value!r}; expected acyc, sc or reach") from None

    @property
    def has_source(self) -> bool:
        return self is PropertyTag.REACHABILITY

    @property
    def label(self) -> str:
        """Name used when printing an oracle result."""
        return {
            PropertyTag.ACYCLICITY: "acyclic",
            PropertyTag.STRONG_CONNECTIVITY: "strongly_connected",
            PropertyTag.REACHABILITY: "reaches_all",
        }[self]


@dataclass(frozen=True)
class BitVector:
    bits: tuple[int, ...]

    def __post_init__(self):
        if not self.bits:
            raise ValueError("bit-vector must have length >= 1")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bit-vector entries must be 0 or 1")

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def from_int(cls, value: int, m: int) -> "BitVector":
        """Bit ``p`` of the vector is bit ``m-1-p`` of ``value`` (string order)."""
        return cls(tuple((value >> (m - 1 - p)) & 1 for p in range(m)))

    @property
    def m(self) -> int:
        return len(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, p: int) -> int:
        return self.bits[p]

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def popcount(self) -> int:
        return sum(self.bits)


@dataclass(frozen=True)
class IndexInstance:
    x: BitVector
    i: int

    def __post_init__(self):
        if isinstance(self.x, str):
            object.__setattr__(self, "x", BitVector.from_string(self.x))
        if not 0 <= self.i < self.x.m:
            raise ValueError(f"index {self.i} outside 0..{self.x.m - 1}")

    @property
    def m(self) -> int:
        return self.x.m

    @property
    def bit(self) -> int:
        return self.x[self.i]


@dataclass(frozen=True)
class GadgetParams:
    n: int
    j: int
    k: int


def side_length(m: int) -> int:
    """Smallest n with n*n >= m."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return math.isqrt(m - 1) + 1


def derive_params(m: int, i: int) -> GadgetParams:
    n = side_length(m)
    if not 0 <= i < m:
        raise ValueError(f"index {i} outside 0..{m - 1}")
    k = i % n
    j = (i - k) // n
    return GadgetParams(n=n, j=j, k=k)


def vertex_count_for(prop: PropertyTag, n: int) -> int:
    return 2 * n + 1 if PropertyTag.parse(prop).has_source else 2 * n


def build_e1(x: BitVector) -> frozenset[Edge]:
    """Bipartite L->R edges: ``j -> n+k`` for every set bit at ``j*n + k``.

    Positions ``m..n*n-1`` are implicitly zero.
    """
    n = side_length(x.m)
    return frozenset(Edge(p // n, n + p % n) for p, b in enumerate(x.bits) if b)


def build_e2(prop: PropertyTag, params: GadgetParams) -> frozenset[Edge]:
    """Bob's edges; they depend only on ``(n, j, k)``."""
    prop = PropertyTag.parse(prop)
    n, j, k = params.n, params.j, params.k
    rk = n + k
    if prop is PropertyTag.ACYCLICITY:
        return frozenset({Edge(rk, j)})
    if prop is PropertyTag.STRONG_CONNECTIVITY:
        out_of_k = {Edge(rk, v) for v in range(2 * n) if v != rk}
        into_j = {Edge(v, j) for v in range(2 * n) if v != j}
        return frozenset(out_of_k | into_j)
    s = 2 * n
    edges = {Edge(s, j)}
    edges.update(Edge(j, n + r) for r in range(n) if r != k)
    edges.update(Edge(rk, left) for left in range(n) if left != j)
    return frozenset(edges)


@dataclass(frozen=True)
class GadgetInstance:
    property: PropertyTag
    m: int
    i: int
    params: GadgetParams
    vertex_count: int
    s: Optional[int]
    e1: frozenset[Edge] = field(repr=False)
    e2: frozenset[Edge] = field(repr=False)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def edges(self) -> frozenset[Edge]:
        return self.e1 | self.e2

    def graph(self) -> Digraph:
        return Digraph(self.vertex_count, self.edges)

    def x(self) -> BitVector:
        """Recover Alice's bit-vector from ``e1`` (padding positions dropped)."""
        n = self.params.n
        bits = [0] * self.m
        for u, v in self.e1:
            bits[u * n + (v - n)] = 1
        return BitVector(tuple(bits))


def build_instance(prop: PropertyTag, inst: IndexInstance) -> GadgetInstance:
    prop = PropertyTag.parse(prop)
    params = derive_params(inst.m, inst.i)
    n = params.n
    return GadgetInstance(
        property=prop,
        m=inst.m,
        i=inst.i,
        params=params,
        vertex_count=vertex_count_for(prop, n),
        s=2 * n if prop.has_source else None,
        e1=build_e1(inst.x),
        e2=build_e2(prop, params),
    )


def evaluate(prop: PropertyTag, graph: Digraph, s: Optional[int] = None) -> bool:
    """Run the exact oracle that matches ``prop``."""
    prop = PropertyTag.parse(prop)
    if prop is PropertyTag.ACYCLICITY:
        return is_acyclic(graph)
    if prop is PropertyTag.STRONG_CONNECTIVITY:
        return is_strongly_connected(graph)
    if s is None:
        s = graph.vertex_count - 1
    return reaches_all(graph, s)


def check_instance(instance: GadgetInstance) -> bool:
    return evaluate(instance.property, instance.graph(), instance.s)


def property_from_bit(prop: PropertyTag, bit: int) -> bool:
    """Truth value of ``prop`` on a gadget whose encoded bit is ``bit``."""
    if PropertyTag.parse(prop) is PropertyTag.ACYCLICITY:
        return bit == 0
    return bit == 1


def bit_from_property(prop: PropertyTag, value: bool) -> int:
    """Inverse of :func:`property_from_bit`."""
    if PropertyTag.parse(prop) is PropertyTag.ACYCLICITY:
        return 0 if value else 1
    return 1 if value else 0


def ground_truth(prop: PropertyTag, inst: IndexInstance) -> bool:
    return property_from_bit(prop, inst.bit)


def all_index_instances(m: int) -> Iterable[IndexInstance]:
    for value in range(1 << m):
        x = BitVector.from_int(value, m)
        for i in range(m):
            yield IndexInstance(x, i)
