"""The one-way INDEX protocol driven by a streaming algorithm.

Alice streams the edges fixed by ``x`` and sends the algorithm's state;
Bob restores it, streams the edges fixed by ``i`` and reads ``x_i`` off the
decision. Neither function receives the other party's input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from digadget.algorithms import FullStore
from digadget.gadgets import (
    BitVector,
    IndexInstance,
    PropertyTag,
    all_index_instances,
    bit_from_property,
    build_e1,
    build_e2,
    build_instance,
    check_instance,
    derive_params,
    ground_truth,
    side_length,
    vertex_count_for,
)
from digadget.stream_model import (
    BitString,
    PublicParams,
    StreamingAlgorithm,
    derive_rng,
    derive_seed,
    feed,
    order_edges,
)

AlgorithmFactory = Callable[[int], StreamingAlgorithm]

SHARED = "shared"
PRIVATE = "private"


def public_params(prop: PropertyTag, m: int, coin_seed: int) -> PublicParams:
    prop = PropertyTag.parse(prop)
    n = side_length(m)
    return PublicParams(vertex_count_for(prop, n), m, n, prop, coin_seed)


def alice_message(
    alg: StreamingAlgorithm,
    prop: PropertyTag,
    x: BitVector,
    order_seed: Optional[int] = None,
    coin_seed: int = 0,
) -> BitString:
    """Stream E1 (``order_seed=None`` means lexicographic) and return the state."""
    alg.begin(public_params(prop, x.m, coin_seed))
    feed(alg, order_edges(build_e1(x), order_seed))
    return alg.snapshot()


def bob_decide(
    alg: StreamingAlgorithm,
    prop: PropertyTag,
    message: BitString,
    m: int,
    i: int,
    order_seed: Optional[int] = None,
    coin_seed: int = 0,
) -> int:
    """Return Bob's claimed value of ``x_i`` (0 or 1)."""
    prop = PropertyTag.parse(prop)
    params = derive_params(m, i)
    alg.restore(public_params(prop, m, coin_seed), message)
    feed(alg, order_edges(build_e2(prop, params), order_seed))
    return bit_from_property(prop, alg.decide())


@dataclass(frozen=True)
class TrialResult:
    property: PropertyTag
    m: int
    i: int
    message_bits: int
    decision: bool
    truth: bool

    @property
    def correct(self) -> bool:
        return self.decision == self.truth


def run_trial(
    alg_factory: Callable[[], StreamingAlgorithm],
    prop: PropertyTag,
    inst: IndexInstance,
    order_seed: Optional[int] = None,
    alice_coins: int = 0,
    bob_coins: Optional[int] = None,
) -> TrialResult:
    """One protocol run with separate algorithm objects for each party."""
    prop = PropertyTag.parse(prop)
    if bob_coins is None:
        bob_coins = alice_coins
    e2_seed = None if order_seed is None else derive_seed(order_seed, 2)
    msg = alice_message(alg_factory(), prop, inst.x, order_seed, alice_coins)
    claimed = bob_decide(alg_factory(), prop, msg, inst.m, inst.i, e2_seed, bob_coins)
    truth = ground_truth(prop, inst)
    return TrialResult(
        property=prop,
        m=inst.m,
        i=inst.i,
        message_bits=len(msg),
        decision=(claimed == 1) != (prop is PropertyTag.ACYCLICITY),
        truth=truth,
    )


@dataclass
class Mismatch:
    x: str
    i: int
    kind: str
    detail: str = ""

    def __str__(self) -> str:
        return f"x={self.x} i={self.i}: {self.kind} {self.detail}".rstrip()


@dataclass
class VerifyReport:
    property: PropertyTag
    m: int
    cases: int = 0
    protocol_runs: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        status = "OK" if self.ok else "FAIL"
        return (
            f"{status} property={self.property.value} m={self.m} cases={self.cases} "
            f"protocol_runs={self.protocol_runs} mismatches={len(self.mismatches)}"
        )


MAX_EXHAUSTIVE_M = 14


def verify_instances(
    prop: PropertyTag,
    instances: Iterable[IndexInstance],
    m: int,
    order_seeds: Sequence[Optional[int]] = (None,),
) -> VerifyReport:
    """Check oracle-vs-truth and full-store protocol recovery on ``instances``.

    Alice's message is computed once per (x, order) since it cannot depend on i.
    """
    prop = PropertyTag.parse(prop)
    report = VerifyReport(prop, m)
    messages: dict[tuple[BitVector, Optional[int]], BitString] = {}
    for inst in instances:
        report.cases += 1
        truth = ground_truth(prop, inst)
        got = check_instance(build_instance(prop, inst))
        if got != truth:
            report.mismatches.append(
                Mismatch(str(inst.x), inst.i, "oracle", f"oracle={got} truth={truth}")
            )
        for order_seed in order_seeds:
            key = (inst.x, order_seed)
            msg = messages.get(key)
            if msg is None:
                msg = alice_message(FullStore(), prop, inst.x, order_seed)
                messages[key] = msg
            e2_seed = None if order_seed is None else derive_seed(order_seed, 2)
            claimed = bob_decide(FullStore(), prop, msg, inst.m, inst.i, e2_seed)
            report.protocol_runs += 1
            if claimed != inst.bit:
                report.mismatches.append(
                    Mismatch(str(inst.x), inst.i, "protocol",
                             f"order={order_seed} claimed={claimed} bit={inst.bit}")
                )
        if len(messages) > 64:
            messages.clear()
    return report


def exhaustive_verify(
    prop: PropertyTag,
    m: int,
    order_seeds: Sequence[Optional[int]] = (None,),
) -> VerifyReport:
    """Every ``x`` in ``{0,1}^m`` and every ``i``; ``m`` is capped at 14."""
    if not 1 <= m <= MAX_EXHAUSTIVE_M:
        raise ValueError(f"exhaustive verification needs 1 <= m <= {MAX_EXHAUSTIVE_M}")
    return verify_instances(prop, all_index_instances(m), m, order_seeds)


def random_instance(m: int, seed: int) -> IndexInstance:
    rng = derive_rng(seed, 3)
    bits = tuple(int(b) for b in rng.integers(0, 2, size=m))
    return IndexInstance(BitVector(bits), int(rng.integers(m)))


def random_verify(prop: PropertyTag, m: int, count: int, seed: int,
                  protocol: bool = False) -> VerifyReport:
    """Oracle-vs-truth on ``count`` random ``(x, i)``; optionally the protocol too."""
    prop = PropertyTag.parse(prop)
    instances = [random_instance(m, derive_seed(seed, t)) for t in range(count)]
    if protocol:
        return verify_instances(prop, instances, m)
    report = VerifyReport(prop, m)
    for inst in instances:
        report.cases += 1
        truth = ground_truth(prop, inst)
        got = check_instance(build_instance(prop, inst))
        if got != truth:
            report.mismatches.append(
                Mismatch(str(inst.x), inst.i, "oracle", f"oracle={got} truth={truth}")
            )
    return report


@dataclass(frozen=True)
class SuccessEstimate:
    property: PropertyTag
    m: int
    trials: int
    successes: int
    memory_budget_bits: int
    max_message_bits: int
    min_message_bits: int
    budget_violations: int
    coins: str
    seed: int

    @property
    def rate(self) -> float:
        return self.successes / self.trials

    @property
    def ci95_halfwidth(self) -> float:
        r = self.rate
        return 1.96 * math.sqrt(r * (1 - r) / self.trials)

    @property
    def standard_error(self) -> float:
        r = self.rate
        return math.sqrt(r * (1 - r) / self.trials)

    @property
    def epsilon_hat(self) -> float:
        return 2 * self.rate - 1


def indexed_trial(
    alg_factory: AlgorithmFactory,
    prop: PropertyTag,
    m: int,
    budget_bits: int,
    master_seed: int,
    t: int,
    coins: str = SHARED,
) -> TrialResult:
    """Trial number ``t``; all its randomness is keyed by ``(master_seed, t)``."""
    inst = random_instance(m, derive_seed(master_seed, t, 0))
    order_seed = derive_seed(master_seed, t, 1)
    alice_coins = derive_seed(master_seed, t, 2)
    bob_coins = alice_coins if coins == SHARED else derive_seed(master_seed, t, 3)
    return run_trial(
        lambda: alg_factory(budget_bits), prop, inst, order_seed, alice_coins, bob_coins
    )


def estimate_success(
    alg_factory: AlgorithmFactory,
    prop: PropertyTag,
    m: int,
    budget_bits: int,
    trials: int,
    master_seed: int = 0,
    coins: str = SHARED,
) -> SuccessEstimate:
    """Monte-Carlo success rate over uniform ``(x, i)``, stream order and coins.

    With ``coins="private"`` Bob's coins are independent of Alice's.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if coins not in (SHARED, PRIVATE):
        raise ValueError(f"coins must be {SHARED!r} or {PRIVATE!r}")
    prop = PropertyTag.parse(prop)
    results = [
        indexed_trial(alg_factory, prop, m, budget_bits, master_seed, t, coins)
        for t in range(trials)
    ]
    return summarize(results, prop, m, budget_bits, coins, master_seed)


def summarize(
    results: Sequence[TrialResult],
    prop: PropertyTag,
    m: int,
    budget_bits: int,
    coins: str,
    seed: int,
) -> SuccessEstimate:
    bits = [r.message_bits for r in results]
    return SuccessEstimate(
        property=PropertyTag.parse(prop),
        m=m,
        trials=len(results),
        successes=sum(r.correct for r in results),
        memory_budget_bits=budget_bits,
        max_message_bits=max(bits),
        min_message_bits=min(bits),
        budget_violations=sum(b > budget_bits for b in bits),
        coins=coins,
        seed=seed,
    )
