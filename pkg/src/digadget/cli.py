"""Command-line entry point: ``digadget {gen,verify,check,sweep}``.

Exit codes: 0 success, 1 mismatch found, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from digadget.algorithms import SampledIndex
from digadget.formats import InstanceFormatError, parse_instance, render_instance, sweep_csv
from digadget.gadgets import (
    BitVector,
    IndexInstance,
    PropertyTag,
    build_instance,
    check_instance,
)
from digadget.protocol import (
    MAX_EXHAUSTIVE_M,
    PRIVATE,
    SHARED,
    SuccessEstimate,
    estimate_success,
    exhaustive_verify,
    random_verify,
)
from digadget.stream_model import derive_rng, make_stream

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2
PROPERTIES = [p.value for p in PropertyTag]
MIN_SWEEP_TRIALS = 100


class UsageError(Exception):
    pass


def _emit(text: str, out: Optional[str]) -> None:
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def random_bits(m: int, seed: int) -> BitVector:
    return BitVector(tuple(int(b) for b in derive_rng(seed, 4).integers(0, 2, size=m)))


def cmd_gen(args) -> int:
    if args.m < 1:
        raise UsageError("--m must be >= 1")
    if args.i is None or not 0 <= args.i < args.m:
        raise UsageError(f"--i must be in 0..{args.m - 1}")
    if args.x is not None:
        try:
            x = BitVector.from_string(args.x)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if x.m != args.m:
            raise UsageError(f"--x has {x.m} bits but --m is {args.m}")
    else:
        x = random_bits(args.m, args.seed)
    instance = build_instance(PropertyTag.parse(args.property), IndexInstance(x, args.i))
    stream = make_stream(instance, args.order, args.seed)
    _emit(render_instance(instance, stream.first, stream.second), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    prop = PropertyTag.parse(args.property)
    if args.random:
        report = random_verify(prop, args.m, args.random, args.seed, protocol=args.protocol)
    else:
        if not 1 <= args.m <= MAX_EXHAUSTIVE_M:
            raise UsageError(
                f"exhaustive verify needs 1 <= m <= {MAX_EXHAUSTIVE_M}; use --random for larger m"
            )
        if args.order == "shuffled":
            orders = [args.seed + r for r in range(args.orders)]
        else:
            orders = [None]
        report = exhaustive_verify(prop, args.m, orders)
    print(report.summary())
    for mm in report.mismatches[:20]:
        print(f"  {mm}")
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_check(args) -> int:
    text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
    try:
        instance = parse_instance(text)
    except InstanceFormatError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    value = check_instance(instance)
    print(f"{instance.property.label}: {str(value).lower()}")
    return EXIT_OK


def parse_budgets(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        budgets = [int(b) for b in text.split(",") if b.strip()]
    except ValueError:
        raise UsageError(f"--budgets must be comma-separated integers, got {text!r}") from None
    if any(b < 0 for b in budgets):
        raise UsageError("budgets must be non-negative")
    return budgets


def run_sweep(prop, m, budgets, trials, seed, coins=SHARED) -> list[SuccessEstimate]:
    return [
        estimate_success(SampledIndex, prop, m, b, trials, seed, coins) for b in budgets
    ]


def bits_per_epsilon(rows: Sequence[SuccessEstimate]) -> Optional[float]:
    """Least-squares slope of budget against measured epsilon, if defined."""
    eps = np.array([r.epsilon_hat for r in rows])
    if len(rows) < 2 or np.ptp(eps) == 0:
        return None
    budgets = np.array([r.memory_budget_bits for r in rows], dtype=float)
    return float(np.polyfit(eps, budgets, 1)[0])


def cmd_sweep(args) -> int:
    if args.trials < MIN_SWEEP_TRIALS:
        raise UsageError(f"--trials must be >= {MIN_SWEEP_TRIALS}")
    if args.m < 1:
        raise UsageError("--m must be >= 1")
    budgets = parse_budgets(args.budgets)
    rows = run_sweep(PropertyTag.parse(args.property), args.m, budgets, args.trials,
                     args.seed, args.coins)
    _emit(sweep_csv(rows), args.out)
    log = sys.stderr if not args.out or args.out == "-" else sys.stdout
    print(f"algorithm=sampled-index coins={args.coins}", file=log)
    for r in rows:
        print(
            f"  B={r.memory_budget_bits:>6} rate={r.rate:.4f} +-{r.ci95_halfwidth:.4f} "
            f"eps={max(r.epsilon_hat, 0.0):.4f} bits={r.max_message_bits}"
            + (f" violations={r.budget_violations}" if r.budget_violations else ""),
            file=log,
        )
    slope = bits_per_epsilon(rows)
    if slope is not None:
        print(f"  bits per unit epsilon ~ {slope:.2f} (m={args.m})", file=log)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="digadget",
        description="INDEX-reduction gadgets for one-pass digraph connectivity testing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_property(p):
        p.add_argument("--property", required=True, choices=PROPERTIES)

    g = sub.add_parser("gen", help="write a gadget instance file")
    add_property(g)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--i", type=int, required=True)
    g.add_argument("--x", help="explicit bit string of length m (default: random from --seed)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--order", choices=["canonical", "shuffled"], default="canonical")
    g.add_argument("--out", help="output path (default stdout)")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check the gadget iff claims and protocol recovery")
    add_property(v)
    v.add_argument("--m", type=int, required=True)
    v.add_argument("--order", choices=["canonical", "shuffled"], default="canonical")
    v.add_argument("--orders", type=int, default=5, help="number of shuffled orders")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--random", type=int, default=0, metavar="COUNT",
                   help="sample COUNT random (x, i) instead of enumerating")
    v.add_argument("--protocol", action="store_true",
                   help="with --random, also run the full-store protocol")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("check", help="evaluate the exact oracle on an instance file")
    c.add_argument("file", help="instance file, or - for stdin")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("sweep", help="success rate vs memory budget for sampled-index")
    add_property(s)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--budgets", default="", help="comma-separated bit budgets")
    s.add_argument("--trials", type=int, default=10000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--coins", choices=[SHARED, PRIVATE], default=SHARED)
    s.add_argument("--out", help="CSV path (default stdout)")
    s.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"digadget {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"digadget {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
