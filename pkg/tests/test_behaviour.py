import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from climgov.behaviour import (
    DecisionContext,
    DecisionKind,
    OptionKind,
    apply_moa,
    choose_option,
    conformity_satisfaction,
    decide,
    decide_batch,
    draw_satisfactions,
    evaluate,
    is_available,
    total_satisfaction,
)
from climgov.config import MOTIVES, VALUE_MOTIVES, BehaviourConfig
from climgov.errors import ContractError, NumericError
from climgov.population import MoaProfile, PopulationConfig, generate_population

unit = st.floats(0.0, 1.0)
signed = st.floats(-1.0, 1.0)
FULL_MOA = MoaProfile(1.0, 1.0, 1.0, 1.0)


def point_spec(act, not_act, alignment=(1, 1, -1, -1)):
    """Satisfaction spec with zero-variance draws for every kind and motive."""
    table = {
        m: {"act": {"mean": act, "sd": 0.0, "lo": -1, "hi": 1},
            "not_act": {"mean": not_act, "sd": 0.0, "lo": -1, "hi": 1},
            "alignment": a}
        for m, a in zip(VALUE_MOTIVES, alignment)
    }
    return BehaviourConfig(satisfaction={k.value: table for k in DecisionKind})


class Citizen:
    def __init__(self, weights, id=0):
        self.id = id
        self.motive_weights = weights


def test_total_satisfaction_zero_weights():
    w = dict.fromkeys(MOTIVES, 0.0)
    s = dict.fromkeys(MOTIVES, 0.7)
    assert total_satisfaction(w, s) == 0.0


def test_total_satisfaction_unit_projection():
    w = {m: 0.0 for m in MOTIVES} | {"climate_concern": 1.0}
    s = {m: -0.3 for m in MOTIVES} | {"climate_concern": 0.6}
    assert total_satisfaction(w, s) == 0.6


def test_total_satisfaction_matches_dot_product(rng):
    for _ in range(500):
        w = dict(zip(MOTIVES, rng.random(5)))
        s = dict(zip(MOTIVES, rng.uniform(-1, 1, 5)))
        assert abs(total_satisfaction(w, s) - oracles.dot(w, s)) <= 1e-12


def test_total_satisfaction_key_mismatch():
    with pytest.raises(ContractError):
        total_satisfaction({"a": 1.0}, {"b": 1.0})


@pytest.mark.parametrize("act,not_act,expected", [
    (0.5, 0.2, OptionKind.ACT),
    (0.3, 0.3, OptionKind.NOT_ACT),
    (-0.1, 0.0, OptionKind.NOT_ACT),
])
def test_choose_option(act, not_act, expected):
    assert choose_option(act, not_act) is expected


def test_choose_option_rejects_non_finite():
    with pytest.raises(NumericError):
        choose_option(math.nan, 0.0)
    with pytest.raises(NumericError):
        choose_option(0.0, math.inf)


@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(-20, 20))
def test_choice_invariant_under_common_shift(a, b, shift):
    # integer shifts of dyadic rationals stay exact
    a, b = round(a, 3), round(b, 3)
    assert choose_option(a, b) is choose_option(a + shift, b + shift)


def test_conformity_closed_forms():
    assert conformity_satisfaction(0.5) == (0.0, 0.0)
    assert conformity_satisfaction(1.0) == (1.0, -1.0)
    assert conformity_satisfaction(0.0) == (-1.0, 1.0)
    with pytest.raises(ContractError):
        conformity_satisfaction(1.2)


@given(unit)
def test_conformity_antisymmetry(p):
    s_act, s_not = conformity_satisfaction(p)
    assert s_act + s_not == 0.0
    assert (s_act, s_not) == oracles.conformity(p)


def test_apply_moa_cases():
    half = MoaProfile(0.2, 0.4, 0.6, 0.8)
    assert apply_moa(0.8, half, -1) == 0.8
    assert apply_moa(0.8, FULL_MOA, 1) == 0.8
    assert apply_moa(0.8, MoaProfile(0, 0, 0, 0), 1) == 0.0
    assert apply_moa(0.8, half, 1) == pytest.approx(0.8 * 0.5)
    with pytest.raises(ContractError):
        apply_moa(1.5, half, 1)


@given(signed, st.tuples(unit, unit, unit, unit), st.sampled_from([-1, 0, 1]))
def test_moa_never_flips_or_creates_motivation(s, factors, alignment):
    out = apply_moa(s, MoaProfile(*factors), alignment)
    if s <= 0 or alignment <= 0:
        assert out == s
    else:
        assert 0.0 <= out <= s


def _ctx(p=0.5, engo=True, aware=True, moa=FULL_MOA, alignment="aligned"):
    return DecisionContext(peer_share=p, engo_exists=engo, aware=aware, moa=moa, activist_alignment=alignment)


def test_join_unavailable_without_engo(rng):
    citizen = Citizen(dict.fromkeys(MOTIVES, 1.0))
    option, reason = evaluate(citizen, DecisionKind.JOIN_ENGO, _ctx(engo=False), point_spec(1, -1), rng)
    assert option is OptionKind.NOT_ACT
    assert reason == "unavailable"


def test_protest_requires_awareness(rng):
    citizen = Citizen(dict.fromkeys(MOTIVES, 1.0))
    assert decide(citizen, "action_protest", _ctx(p=1.0, aware=False), point_spec(1, -1), rng) is OptionKind.NOT_ACT


def test_degenerate_satisfactions_choose_act(rng):
    citizen = Citizen(dict.fromkeys(MOTIVES, 1.0))
    for kind in DecisionKind:
        assert decide(citizen, kind, _ctx(p=1.0), point_spec(1.0, -1.0), rng) is OptionKind.ACT


@settings(max_examples=60)
@given(st.lists(unit, min_size=5, max_size=5), signed, signed)
def test_act_region_is_an_up_set_in_peer_share(weights, act, not_act):
    spec = point_spec(act, not_act, alignment=(0, 0, 0, 0))
    citizen = Citizen(dict(zip(MOTIVES, weights)))
    grid = np.linspace(0, 1, 41)
    acts = [decide(citizen, "join_engo", _ctx(p=float(p)), spec, np.random.default_rng(0)) is OptionKind.ACT
            for p in grid]
    first = acts.index(True) if True in acts else len(acts)
    assert all(acts[first:])


@settings(max_examples=60)
@given(st.lists(st.floats(0.05, 1.0), min_size=5, max_size=5), st.sampled_from([0.25, 0.5, 2.0, 4.0]),
       st.integers(0, 2**32 - 1))
def test_choice_scale_invariant_in_weights(weights, c, seed):
    spec = BehaviourConfig()
    ctx = _ctx(p=0.3, moa=MoaProfile(0.5, 0.5, 0.5, 0.5))
    base = Citizen(dict(zip(MOTIVES, weights)))
    scaled = Citizen({m: c * w for m, w in base.motive_weights.items()})
    a = decide(base, "action_protest", ctx, spec, np.random.default_rng(seed))
    b = decide(scaled, "action_protest", ctx, spec, np.random.default_rng(seed))
    assert a is b


def test_batch_agrees_with_scalar_decide():
    pop = generate_population(PopulationConfig(size=200), np.random.default_rng(1))
    spec = BehaviourConfig()
    shares = np.random.default_rng(2).random(200)
    available = np.random.default_rng(3).random(200) < 0.8
    for kind in DecisionKind:
        batch = decide_batch(pop.weights, pop.moa, pop.alignment, shares, available, kind, spec,
                             np.random.default_rng(4))
        # The batch draws every citizen's satisfactions from one stream;
        # replay the same rows through the scalar path.
        s_act, s_not = draw_satisfactions(spec.satisfaction[kind.value], 200, np.random.default_rng(4))
        for i in range(200):
            c = pop[i]
            ctx = DecisionContext(shares[i], bool(available[i]), bool(available[i]), c.moa_profile,
                                  c.activist_alignment)
            option = _scalar_with_rows(c, kind, ctx, spec, s_act[i], s_not[i])
            assert (option is OptionKind.ACT) == bool(batch[i])


def _scalar_with_rows(citizen, kind, ctx, spec, act_row, not_row):
    """Scalar evaluation with pre-drawn satisfactions, built from the public pieces."""
    if not is_available(kind, ctx):
        return OptionKind.NOT_ACT
    table = spec.satisfaction[kind.value]
    act = dict(zip(VALUE_MOTIVES, act_row))
    not_act = dict(zip(VALUE_MOTIVES, not_row))
    act["conformity"], not_act["conformity"] = conformity_satisfaction(ctx.peer_share)
    aligned = not (kind is DecisionKind.DISRUPTIVE_PROTEST and ctx.activist_alignment != "aligned")
    for m in VALUE_MOTIVES:
        if aligned:
            act[m] = apply_moa(act[m], ctx.moa, table[m].alignment)
        elif table[m].alignment > 0 and act[m] > 0:
            act[m] = 0.0
    return choose_option(total_satisfaction(citizen.motive_weights, act),
                         total_satisfaction(citizen.motive_weights, not_act))


def test_batch_is_independent_of_worker_count():
    pop = generate_population(PopulationConfig(size=1000), np.random.default_rng(5))
    shares = np.random.default_rng(6).random(1000)
    available = np.ones(1000, dtype=bool)
    runs = [
        decide_batch(pop.weights, pop.moa, pop.alignment, shares, available, "action_protest",
                     BehaviourConfig(), np.random.default_rng(7), workers=w)
        for w in (1, 3, 8)
    ]
    assert all(np.array_equal(runs[0], r) for r in runs[1:])
