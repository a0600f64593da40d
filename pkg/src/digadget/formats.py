"""Text formats: gadget instance files and sweep CSVs.

Instance file::

    digadget <acyc|sc|reach> m=<m> n=<n> i=<i> s=<vertex|none>
    u v          # E1 edges, one per line
    ---          # always present, even when E1 is empty
    u v          # E2 edges
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, Optional, Sequence, TextIO

from digadget.gadgets import (
    GadgetInstance,
    PropertyTag,
    derive_params,
    vertex_count_for,
)
from digadget.graph_core import Edge
from digadget.protocol import SuccessEstimate

MAGIC = "digadget"
BOUNDARY = "---"

SWEEP_COLUMNS = (
    "property",
    "m",
    "budget_bits",
    "trials",
    "successes",
    "rate",
    "ci95",
    "epsilon_hat",
    "max_message_bits",
    "seed",
)


class InstanceFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def render_instance(
    instance: GadgetInstance,
    e1_order: Optional[Sequence[Edge]] = None,
    e2_order: Optional[Sequence[Edge]] = None,
) -> str:
    """Serialize ``instance``; edge order defaults to lexicographic."""
    s = "none" if instance.s is None else str(instance.s)
    lines = [
        f"{MAGIC} {instance.property.value} m={instance.m} n={instance.n} "
        f"i={instance.i} s={s}"
    ]
    lines += [f"{u} {v}" for u, v in (e1_order if e1_order is not None else sorted(instance.e1))]
    lines.append(BOUNDARY)
    lines += [f"{u} {v}" for u, v in (e2_order if e2_order is not None else sorted(instance.e2))]
    return "\n".join(lines) + "\n"


def _header_fields(lineno: int, tokens: list[str]) -> dict[str, str]:
    fields = {}
    for tok in tokens:
        key, eq, value = tok.partition("=")
        if not eq or key not in ("m", "n", "i", "s"):
            raise InstanceFormatError(lineno, f"unexpected header field {tok!r}")
        fields[key] = value
    missing = {"m", "n", "i", "s"} - fields.keys()
    if missing:
        raise InstanceFormatError(lineno, f"header missing {', '.join(sorted(missing))}")
    return fields


def _int_field(lineno: int, fields: dict[str, str], key: str) -> int:
    try:
        return int(fields[key])
    except ValueError:
        raise InstanceFormatError(lineno, f"{key}={fields[key]!r} is not an integer") from None


def parse_instance(text: str) -> GadgetInstance:
    lines = text.splitlines()
    if not lines:
        raise InstanceFormatError(1, "empty file")
    tokens = lines[0].split()
    if len(tokens) < 2 or tokens[0] != MAGIC:
        raise InstanceFormatError(1, f"header must start with '{MAGIC} <property>'")
    try:
        prop = PropertyTag.parse(tokens[1])
    except ValueError as exc:
        raise InstanceFormatError(1, str(exc)) from None
    fields = _header_fields(1, tokens[2:])
    m, n, i = (_int_field(1, fields, k) for k in ("m", "n", "i"))
    try:
        params = derive_params(m, i)
    except ValueError as exc:
        raise InstanceFormatError(1, str(exc)) from None
    if params.n != n:
        raise InstanceFormatError(1, f"n={n} but m={m} requires n={params.n}")
    vertex_count = vertex_count_for(prop, n)
    expected_s = 2 * n if prop.has_source else None
    s = None if fields["s"] == "none" else _int_field(1, fields, "s")
    if s != expected_s:
        raise InstanceFormatError(1, f"s={fields['s']} but {prop.value} requires s={expected_s}")

    e1: set[Edge] = set()
    e2: set[Edge] = set()
    target = e1
    seen_boundary = False
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line:
            continue
        if line == BOUNDARY:
            if seen_boundary:
                raise InstanceFormatError(lineno, "second boundary marker")
            seen_boundary = True
            target = e2
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InstanceFormatError(lineno, f"expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise InstanceFormatError(lineno, f"non-integer vertex in {line!r}") from None
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise InstanceFormatError(lineno, f"edge {u} {v} outside 0..{vertex_count - 1}")
        target.add(Edge(u, v))
    if not seen_boundary:
        raise InstanceFormatError(len(lines) + 1, f"missing boundary marker '{BOUNDARY}'")
    return GadgetInstance(
        property=prop,
        m=m,
        i=i,
        params=params,
        vertex_count=vertex_count,
        s=s,
        e1=frozenset(e1),
        e2=frozenset(e2),
    )


def sweep_row(est: SuccessEstimate) -> list[str]:
    return [
        est.property.value,
        str(est.m),
        str(est.memory_budget_bits),
        str(est.trials),
        str(est.successes),
        f"{est.rate:.6f}",
        f"{est.ci95_halfwidth:.6f}",
        f"{est.epsilon_hat:.6f}",
        str(est.max_message_bits),
        str(est.seed),
    ]


def write_sweep_csv(rows: Iterable[SuccessEstimate], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for est in rows:
        writer.writerow(sweep_row(est))


def sweep_csv(rows: Iterable[SuccessEstimate]) -> str:
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    return buf.getvalue()


def read_sweep_csv(text: str) -> list[dict[str, str]]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != SWEEP_COLUMNS:
        raise ValueError(f"sweep CSV header must be {','.join(SWEEP_COLUMNS)}")
    return list(reader)
