import numpy as np
import pytest
from conftest import make_config

from climgov.config import DECISION_KINDS
from climgov.engine import (
    initialise,
    replay_counters,
    replay_pressure,
    run,
    step,
)
from climgov.errors import ConfigurationError, ContractError
from climgov.politics import Decision
from climgov.reporting import summary_json

SMALL = {"size": 300}
NET = {"target_mean_degree": 8.0}


def _active_config(**extra):
    """Small world with a pre-existing, busy eNGO."""
    engo = {"preexisting": True, "initial_member_share": 0.1, "resources": 0.8, "cultural_trust": 0.7,
            "strategic_orientation": 0.8}
    engo.update(extra.pop("engo", {}))
    return make_config(population=SMALL, network=NET, engo=engo, **extra)


def test_initialise_default(small_config):
    state = initialise(small_config, seed=1)
    assert len(state.population) == 300
    assert state.timestep == 0 and state.news_log == []
    assert state.engo.cumulative_pressure == 0.0
    assert not state.engo.exists


def test_initialise_preexisting():
    state = initialise(_active_config(), seed=1)
    assert state.engo.exists
    assert len(state.engo.members) == 30 == int(state.population.member.sum())


def test_initialise_is_reproducible(small_config):
    a, b = initialise(small_config, seed=5), initialise(small_config, seed=5)
    assert np.array_equal(a.population.weights, b.population.weights)
    assert np.array_equal(a.population.moa, b.population.moa)
    assert np.array_equal(a.network.edges, b.network.edges)


def test_seed_is_mandatory(small_config):
    with pytest.raises(ConfigurationError):
        initialise(small_config)


def test_inert_step():
    cfg = make_config(population=SMALL, network=NET, media={"news_frequency": 0.0},
                      engo={"founding_threshold": 301})
    state = initialise(cfg, seed=3)
    before = state.population.weights.copy()
    step(state)
    assert state.timestep == 1
    assert np.array_equal(state.population.weights, before)
    assert not state.engo.exists and not state.population.member.any()
    assert state.news_log == [] and state.engo.cumulative_pressure == 0.0
    rec = state.steps[0]
    assert (rec.joined, rec.action_participants, rec.disruptive_participants) == (0, 0, 0)


def test_certain_news_every_step():
    state = initialise(make_config(population=SMALL, network=NET, media={"news_frequency": 1.0}), seed=4)
    for _ in range(12):
        step(state)
        assert len(state.news_log) == state.timestep


def test_cannot_step_past_horizon():
    state = initialise(make_config(population=SMALL, network=NET, engine={"horizon": 2}), seed=4)
    step(state)
    step(state)
    with pytest.raises(ContractError):
        step(state)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_event_log_replays_counters_and_pressure(seed):
    summary = run(_active_config(), seed=seed)
    state = summary.state
    assert replay_counters(state.events) == state.counters
    replayed = replay_pressure(state.events, state.horizon, state.config.engo.pressure, state.engo.founded_at)
    assert replayed == [rec.cumulative_pressure for rec in state.steps]


def test_horizon_gives_one_record_per_step(small_config):
    summary = run(small_config, seed=8)
    assert [r.timestep for r in summary.state.steps] == list(range(1, 13))


def test_counts_are_conserved():
    state = run(_active_config(), seed=9).state
    pop = state.population
    for kind in DECISION_KINDS:
        assert len(pop.history[kind]) == state.horizon
    for t, rec in enumerate(state.steps):
        assert rec.joined == int(pop.history["join_engo"][t].sum())
        assert rec.action_participants == int(pop.history["action_protest"][t].sum())
        assert rec.disruptive_participants == int(pop.history["disruptive_protest"][t].sum())
    assert state.steps[-1].members == int(pop.member.sum()) == len(state.engo.members)
    totals = {k: sum(int(h.sum()) for h in pop.history[k]) for k in DECISION_KINDS}
    assert totals == state.counters["participation"]


def test_membership_absorbing_and_pressure_monotone():
    state = initialise(_active_config(), seed=10)
    prev_members = state.population.member.copy()
    prev_c = 0.0
    while state.timestep < state.horizon:
        step(state)
        assert np.all(state.population.member >= prev_members)
        assert state.engo.cumulative_pressure >= prev_c
        prev_members, prev_c = state.population.member.copy(), state.engo.cumulative_pressure


def test_weights_never_decrease_during_a_run():
    state = initialise(_active_config(media={"news_frequency": 1.0}), seed=11)
    prev = state.population.weights.copy()
    while state.timestep < state.horizon:
        step(state)
        assert np.all(state.population.weights >= prev)
        prev = state.population.weights.copy()


def test_unanimous_configuration_accepts():
    data = make_config(population=SMALL, network=NET).model_dump()
    data["media"]["news_frequency"] = 0.0
    data["engo"]["founding_threshold"] = 301
    data["proposal"].update(institutional_assessment=1.0, counter_mobilisation_share=0.0)
    data["politics"]["decisiveness"] = 0.0
    for p in data["politics"]["politicians"]:
        p["stance"] = 1.0
    summary = run(make_config(**data), seed=12)
    assert summary.decision is Decision.ACCEPT
    assert all(r.preliminary is Decision.ACCEPT and r.final is Decision.ACCEPT for r in summary.outcome.records)


def test_parallel_workers_do_not_change_results():
    cfg = _active_config()
    one = summary_json(run(cfg, seed=13, workers=1))
    eight = summary_json(run(cfg, seed=13, workers=8))
    assert one == eight


def test_summary_decision_matches_votes():
    d = run(_active_config(), seed=14).to_dict()
    top = max(d["votes"].values())
    leaders = [k for k, v in d["votes"].items() if v == top]
    assert d["decision"] == (leaders[0] if len(leaders) == 1 else "revise")
