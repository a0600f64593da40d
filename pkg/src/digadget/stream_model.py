"""One-pass edge streams, bit-packed algorithm state and memory accounting.

Memory is the length of the serialized state at edge boundaries. The state
at the E1/E2 boundary is exactly the message Alice hands to Bob.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from digadget.gadgets import GadgetInstance, PropertyTag
from digadget.graph_core import Edge


class CheckpointError(RuntimeError):
    """snapshot/restore did not round-trip."""


class MalformedMessageError(ValueError):
    """A serialized state could not be decoded."""


@dataclass(frozen=True)
class BitString:
    """A finite bit sequence stored MSB-first in ``value``.

    ``len()`` is the size in bits. Leading zero bits are significant.
    """

    value: int = 0
    length: int = 0

    def __post_init__(self):
        if self.length < 0 or self.value < 0 or self.value >> self.length:
            raise ValueError("value does not fit in length bits")

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitString":
        value = 0
        length = 0
        for b in bits:
            value = (value << 1) | (1 if b else 0)
            length += 1
        return cls(value, length)

    @classmethod
    def from_str(cls, text: str) -> "BitString":
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(int(text, 2) if text else 0, len(text))

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(int(c) for c in str(self))


class BitWriter:
    def __init__(self):
        self._value = 0
        self._length = 0

    def write(self, field: int, width: int) -> None:
        if field < 0 or field >> width:
            raise ValueError(f"{field} does not fit in {width} bits")
        self._value = (self._value << width) | field
        self._length += width

    def getvalue(self) -> BitString:
        return BitString(self._value, self._length)


class BitReader:
    def __init__(self, bits: BitString):
        self._bits = bits
        self.pos = 0

    @property
    def remaining(self) -> int:
        return self._bits.length - self.pos

    def read(self, width: int) -> int:
        if width > self.remaining:
            raise MalformedMessageError(
                f"need {width} bits at offset {self.pos}, only {self.remaining} left"
            )
        self.pos += width
        shift = self._bits.length - self.pos
        return (self._bits.value >> shift) & ((1 << width) - 1)


def width_for(count: int) -> int:
    """Bits needed to write any value in ``0..count-1`` (ceil log2)."""
    return max(count - 1, 0).bit_length()


def derive_rng(seed: int, *labels: int) -> np.random.Generator:
    """Independent generator for ``(seed, *labels)``; same key, same stream."""
    return np.random.default_rng([int(seed), *labels])


def derive_seed(seed: int, *labels: int) -> int:
    ss = np.random.SeedSequence([int(seed), *labels])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class PublicParams:
    """Everything both parties know; only ``x`` and ``i`` stay private."""

    vertex_count: int
    m: int
    n: int
    property: PropertyTag
    rng_seed: int = 0

    @classmethod
    def for_instance(cls, instance: GadgetInstance, rng_seed: int = 0) -> "PublicParams":
        return cls(instance.vertex_count, instance.m, instance.n, instance.property, rng_seed)

    @property
    def source(self) -> Optional[int]:
        return 2 * self.n if self.property.has_source else None


@dataclass(frozen=True)
class MemoryProfile:
    max_state_bits: int
    boundary_state_bits: int


class StreamingAlgorithm(abc.ABC):
    """A one-pass algorithm whose whole persistent state is serializable.

    ``restore(params, snapshot())`` followed by any edge suffix must decide
    exactly as the uninterrupted run would.
    """

    @abc.abstractmethod
    def begin(self, params: PublicParams) -> None: ...

    @abc.abstractmethod
    def absorb(self, edge: Edge) -> None: ...

    @abc.abstractmethod
    def snapshot(self) -> BitString: ...

    @abc.abstractmethod
    def restore(self, params: PublicParams, state: BitString) -> None: ...

    @abc.abstractmethod
    def decide(self) -> bool: ...


@dataclass(frozen=True)
class EdgeStream:
    vertex_count: int
    edges: tuple[Edge, ...]
    boundary: int

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def first(self) -> tuple[Edge, ...]:
        return self.edges[: self.boundary]

    @property
    def second(self) -> tuple[Edge, ...]:
        return self.edges[self.boundary :]


def order_edges(edges: Iterable[Edge], seed: Optional[int] = None) -> list[Edge]:
    """Lexicographic order, or a seeded uniform shuffle of it when ``seed`` is given."""
    ordered = sorted(edges)
    if seed is None or len(ordered) < 2:
        return ordered
    perm = derive_rng(seed).permutation(len(ordered))
    return [ordered[p] for p in perm]


def make_stream(instance: GadgetInstance, order: str = "canonical", seed: int = 0) -> EdgeStream:
    if order == "canonical":
        first, second = order_edges(instance.e1), order_edges(instance.e2)
    elif order == "shuffled":
        first = order_edges(instance.e1, derive_seed(seed, 1))
        second = order_edges(instance.e2, derive_seed(seed, 2))
    else:
        raise ValueError(f"order must be 'canonical' or 'shuffled', got {order!r}")
    return EdgeStream(instance.vertex_count, tuple(first + second), len(first))


def feed(alg: StreamingAlgorithm, edges: Iterable[Edge]) -> None:
    for e in edges:
        alg.absorb(e)


def _checkpoint(alg: StreamingAlgorithm, params: PublicParams, verify: bool) -> int:
    state = alg.snapshot()
    if verify:
        alg.restore(params, state)
        again = alg.snapshot()
        if again != state:
            raise CheckpointError(
                f"{type(alg).__name__}: restore(snapshot()) changed the state "
                f"({len(state)} -> {len(again)} bits)"
            )
    return len(state)


def run_streaming(
    alg: StreamingAlgorithm,
    stream: EdgeStream,
    params: PublicParams,
    verify: bool = False,
) -> tuple[bool, MemoryProfile]:
    """Feed ``stream`` once through ``alg``, measuring state size after every edge.

    The post-``begin`` state counts as the first checkpoint, so an empty E1
    gives a boundary equal to the initial state size. With ``verify`` each
    checkpoint is also round-tripped through restore.
    """
    if params.vertex_count != stream.vertex_count:
        raise ValueError("params.vertex_count does not match the stream")
    alg.begin(params)
    peak = _checkpoint(alg, params, verify)
    boundary = peak if stream.boundary == 0 else None
    for pos, e in enumerate(stream.edges, start=1):
        alg.absorb(e)
        size = _checkpoint(alg, params, verify)
        peak = max(peak, size)
        if pos == stream.boundary:
            boundary = size
    assert boundary is not None
    return alg.decide(), MemoryProfile(max_state_bits=peak, boundary_state_bits=boundary)


def run_with_checkpoint(
    make_alg,
    stream: Sequence[Edge] | EdgeStream,
    params: PublicParams,
    cut: int,
) -> bool:
    """Run ``cut`` edges, hand the snapshot to a fresh instance, finish there."""
    edges = stream.edges if isinstance(stream, EdgeStream) else tuple(stream)
    head = make_alg()
    head.begin(params)
    feed(head, edges[:cut])
    state = head.snapshot()
    tail = make_alg()
    tail.restore(params, state)
    feed(tail, edges[cut:])
    return tail.decide()
