import math

import pytest

from digadget import BitVector, IndexInstance, PropertyTag, build_instance
from digadget.algorithms import Constant, FullStore, SampledIndex
from digadget.protocol import (
    PRIVATE,
    SHARED,
    alice_message,
    bob_decide,
    estimate_success,
    exhaustive_verify,
    indexed_trial,
    public_params,
    random_instance,
    run_trial,
    summarize,
)
from digadget.stream_model import (
    BitString,
    MalformedMessageError,
    PublicParams,
    derive_seed,
    make_stream,
    run_streaming,
)

ACYC, SC, REACH = PropertyTag.ACYCLICITY, PropertyTag.STRONG_CONNECTIVITY, PropertyTag.REACHABILITY
FIG_X = BitVector.from_string("001011010")


def test_full_store_message_decodes_to_e1():
    msg = alice_message(FullStore(), ACYC, FIG_X)
    decoded = FullStore()
    decoded.restore(public_params(ACYC, 9, 0), msg)
    assert decoded.edges == {(0, 5), (1, 4), (1, 5), (2, 4)}


@pytest.mark.parametrize("make", [FullStore, lambda: SampledIndex(2), Constant])
def test_empty_e1_message_is_initial_state(make):
    x = BitVector.from_string("0000")
    alg = make()
    alg.begin(public_params(SC, 4, 5))
    assert alice_message(make(), SC, x, coin_seed=5) == alg.snapshot()


def test_full_budget_sampler_sends_x():
    x = BitVector.from_string("1101000111010")
    msg = alice_message(SampledIndex(x.m), REACH, x, order_seed=4, coin_seed=9)
    assert len(msg) == x.m
    assert str(msg) == str(x)


def test_bob_decide_examples():
    msg = alice_message(FullStore(), ACYC, FIG_X)
    assert bob_decide(FullStore(), ACYC, msg, 9, 5) == 1
    zero = alice_message(FullStore(), SC, BitVector.from_string("0000"))
    assert bob_decide(FullStore(), SC, zero, 4, 3) == 0


@pytest.mark.parametrize("prop", list(PropertyTag))
def test_full_store_recovers_every_bit_m4(prop):
    cases = 0
    for value in range(16):
        x = BitVector.from_int(value, 4)
        msg = alice_message(FullStore(), prop, x)
        for i in range(4):
            assert bob_decide(FullStore(), prop, msg, 4, i) == x[i]
            cases += 1
    assert cases == 64


def test_malformed_message_is_rejected():
    with pytest.raises(MalformedMessageError):
        bob_decide(FullStore(), SC, BitString.from_str("1"), 9, 5)


@pytest.mark.parametrize(
    "prop,m,cases",
    [(ACYC, 9, 4608), (SC, 1, 2), (REACH, 12, 49152)],
)
def test_exhaustive_verify_examples(prop, m, cases):
    report = exhaustive_verify(prop, m)
    assert report.cases == cases
    assert report.ok, report.mismatches[:5]


def test_exhaustive_verify_caps_m():
    with pytest.raises(ValueError):
        exhaustive_verify(ACYC, 15)


def test_exhaustive_verify_reports_mismatches(monkeypatch):
    import digadget.protocol as protocol

    monkeypatch.setattr(protocol, "ground_truth", lambda prop, inst: True)
    report = exhaustive_verify(ACYC, 2)
    assert not report.ok
    assert {mm.kind for mm in report.mismatches} == {"oracle"}


def test_protocol_sound_under_shuffles():
    for prop in PropertyTag:
        for t in range(300):
            inst = random_instance(30, derive_seed(99, t))
            result = run_trial(FullStore, prop, inst, order_seed=t)
            assert result.correct


def test_message_equals_boundary_state():
    for t in range(200):
        prop = list(PropertyTag)[t % 3]
        inst = random_instance(25, derive_seed(5, t))
        budget = t % 26
        for make in (FullStore, lambda: SampledIndex(budget)):
            result = run_trial(make, prop, inst, order_seed=None, alice_coins=t)
            gadget = build_instance(prop, inst)
            _, profile = run_streaming(make(), make_stream(gadget), PublicParams.for_instance(gadget, t))
            assert result.message_bits == profile.boundary_state_bits


def test_full_store_rate_is_exactly_one():
    est = estimate_success(FullStore, SC, 9, 10**6, 10_000, master_seed=1)
    assert est.successes == est.trials == 10_000
    assert est.rate == 1.0


def test_zero_budget_is_a_guess():
    est = estimate_success(SampledIndex, ACYC, 64, 0, 10_000, master_seed=2)
    assert abs(est.rate - 0.5) <= 0.02
    assert est.max_message_bits == 0


def test_half_budget_rate():
    est = estimate_success(SampledIndex, REACH, 64, 32, 10_000, master_seed=3)
    assert abs(est.rate - 0.75) <= 0.02
    assert abs(est.epsilon_hat - 0.5) <= 0.04
    assert est.max_message_bits == est.min_message_bits == 32


def test_tradeoff_within_three_standard_errors():
    m, trials = 64, 4000
    rates = []
    for budget in (0, m // 4, m // 2, m):
        est = estimate_success(SampledIndex, SC, m, budget, trials, master_seed=11)
        p = (1 + budget / m) / 2
        se = math.sqrt(p * (1 - p) / trials)
        assert abs(est.rate - p) <= 3 * se
        rates.append(est.rate)
    assert all(b >= a - 0.02 for a, b in zip(rates, rates[1:]))


def test_private_coins_lose_the_advantage():
    shared = estimate_success(SampledIndex, SC, 64, 32, 3000, master_seed=4, coins=SHARED)
    private = estimate_success(SampledIndex, SC, 64, 32, 3000, master_seed=4, coins=PRIVATE)
    assert private.rate < shared.rate - 0.15
    assert abs(private.rate - 0.5) < 0.1


def test_budget_violations_are_counted():
    est = estimate_success(FullStore, ACYC, 16, 8, 200, master_seed=6)
    assert est.rate == 1.0
    assert est.budget_violations == 200
    assert est.max_message_bits > 8


def test_estimate_independent_of_trial_order():
    args = (SampledIndex, SC, 36, 9)
    forward = [indexed_trial(*args, 17, t) for t in range(300)]
    backward = [indexed_trial(*args, 17, t) for t in reversed(range(300))]
    a = summarize(forward, SC, 36, 9, SHARED, 17)
    b = summarize(backward, SC, 36, 9, SHARED, 17)
    assert a == b == estimate_success(*args, 300, 17)


def test_success_estimate_fields():
    est = estimate_success(SampledIndex, SC, 16, 4, 400, master_seed=0)
    assert 0 <= est.rate <= 1
    assert est.epsilon_hat == pytest.approx(2 * est.rate - 1)
    assert est.ci95_halfwidth == pytest.approx(1.96 * math.sqrt(est.rate * (1 - est.rate) / 400))


def test_estimate_rejects_bad_arguments():
    with pytest.raises(ValueError):
        estimate_success(SampledIndex, SC, 16, 4, 0)
    with pytest.raises(ValueError):
        estimate_success(SampledIndex, SC, 16, 4, 10, coins="public")


def test_random_instance_is_seeded():
    assert random_instance(50, 3) == random_instance(50, 3)
    assert isinstance(random_instance(50, 3), IndexInstance)
