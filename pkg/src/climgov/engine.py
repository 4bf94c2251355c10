"""Monthly scheduler tying citizens, eNGO, media and politicians together.

Phase order within a step:

1. media: draw at most one news item, expose citizens, update salience;
2. membership: found an eNGO or let non-members decide whether to join;
3. eNGO actions: select from the eligible repertoire and execute them in
   the order direct, indirect, protest, disruptive protest;
4. pressure: fold this step's total intensity into the cumulative stock;
5. bookkeeping.

Awareness of protest calls is per step; weights and membership persist.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .behaviour import DecisionKind, decide_batch
from .config import DECISION_KINDS, MOTIVES, SimulationConfig, coerce
from .engo import (
    ACTION_ORDER,
    ActionEvent,
    ActionType,
    EngoState,
    accumulate_pressure,
    action_intensity,
    announce,
    eligible_actions,
    emit_indirect_signal,
    maybe_form_engo,
    select_actions,
    state_from_config,
)
from .errors import ConfigurationError, ContractError
from .influence import diffuse_awareness, peer_shares
from .media import Frame, apply_framing_batch, expose, generate_news
from .politics import SignalBundle, decide_proposal
from .population import build_homophily_network, generate_population
from .streams import SPLITTING_RULE, Stream, substream

_PROTEST_KIND = {
    ActionType.PROTEST: (DecisionKind.ACTION_PROTEST, "action"),
    ActionType.DISRUPTIVE_PROTEST: (DecisionKind.DISRUPTIVE_PROTEST, "disruptive"),
}


@dataclass
class NewsRecord:
    timestep: int
    frame: str
    channels: tuple
    origin: str
    exposed: int


@dataclass
class StepRecord:
    timestep: int
    joined: int
    action_participants: int
    disruptive_participants: int
    members: int
    engo_exists: bool
    cumulative_pressure: float
    intensity: float
    news_frame: str
    news_channels: str
    news_exposed: int
    actions: str
    protest_size: float
    disruptive_size: float
    signal_exposed: int
    aware_action: int
    aware_disruptive: int
    mean_weights: dict


@dataclass
class SimulationState:
    config: SimulationConfig
    seed: int
    timestep: int
    population: object
    network: object
    engo: EngoState
    choices: dict
    mobilised: np.ndarray
    news_log: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    events: list = field(default_factory=list)
    counters: dict = field(default_factory=dict)
    lineage: dict = field(default_factory=dict)
    workers: int = 1

    @property
    def horizon(self):
        return self.config.engine.horizon


def _resolve_seed(config, seed):
    seed = config.seed if seed is None else seed
    if seed is None:
        raise ConfigurationError("a master seed is required", [("seed", "missing")])
    if int(seed) < 0:
        raise ConfigurationError("seed must be non-negative", [("seed", str(seed))])
    return int(seed)


def _enroll(state, ids):
    ids = np.asarray(ids, dtype=np.int64)
    state.population.member[ids] = True
    state.engo.members.update(int(i) for i in ids)


def initialise(config, seed=None, workers=1) -> SimulationState:
    config = coerce(SimulationConfig, config)
    seed = _resolve_seed(config, seed)
    pop = generate_population(config.population, substream(seed, Stream.POPULATION))
    net = build_homophily_network(pop, config.network, substream(seed, Stream.NETWORK))
    n = len(pop)
    state = SimulationState(
        config=config,
        seed=seed,
        timestep=0,
        population=pop,
        network=net,
        engo=EngoState(exists=False),
        choices={k: np.zeros(n, dtype=bool) for k in DECISION_KINDS},
        mobilised=np.zeros(n, dtype=bool),
        counters={
            "news_items": 0,
            "pro_environment": 0,
            "pro_economic": 0,
            "participation": {k: 0 for k in DECISION_KINDS},
        },
        lineage={"master_seed": seed, "rule": SPLITTING_RULE},
        workers=max(1, int(workers)),
    )
    if config.engo.preexisting:
        state.engo = state_from_config(config.engo, timestep=0)
        k = int(round(config.engo.initial_member_share * n))
        if k:
            rng = substream(seed, Stream.SETUP)
            founders = np.sort(rng.choice(n, size=k, replace=False))
            _enroll(state, founders)
            state.mobilised[founders] = True
        state.choices["join_engo"] = pop.member.copy()
    return state


def seed_members(state, ids):
    """Make ``ids`` members of the existing eNGO (scenario set-up helper)."""
    if not state.engo.exists:
        raise ContractError("no eNGO to seed")
    _enroll(state, ids)
    state.mobilised[np.asarray(ids, dtype=np.int64)] = True
    state.choices["join_engo"] = state.population.member.copy()


def _decide(state, kind, available, active_snapshot, rng):
    pop = state.population
    shares = peer_shares(state.network, active_snapshot)
    return decide_batch(
        pop.weights, pop.moa, pop.alignment, shares, available, kind,
        state.config.behaviour, rng, workers=state.workers,
    )


def _media_phase(state, t):
    cfg = state.config
    item = generate_news(cfg.media, substream(state.seed, Stream.MEDIA, t), t)
    if item is None:
        return None
    exposed = expose(state.population, item, substream(state.seed, Stream.MEDIA_EXPOSURE, t))
    apply_framing_batch(state.population, item, exposed, cfg.influence)
    rec = NewsRecord(t, item.frame.value, item.channels, item.origin, int(exposed.sum()))
    state.news_log.append(rec)
    state.counters["news_items"] += 1
    state.counters["pro_environment" if item.frame is Frame.PRO_ENVIRONMENT else "pro_economic"] += 1
    state.events.append({"t": t, "phase": "media", "frame": item.frame.value, "exposed": rec.exposed})
    return rec


def _membership_phase(state, t):
    pop = state.population
    kind = DecisionKind.JOIN_ENGO
    rng = substream(state.seed, Stream.BEHAVIOUR, t, 0)
    if state.engo.exists:
        act = _decide(state, kind, ~pop.member, pop.member.copy(), rng)
        joined = act & ~pop.member
        _enroll(state, np.flatnonzero(joined))
    else:
        # Founding willingness: the join module with the existence gate waived.
        willing = _decide(state, kind, np.ones(len(pop), dtype=bool), pop.member.copy(), rng)
        formed = maybe_form_engo(np.flatnonzero(willing), state.config.engo, state.engo, timestep=t)
        joined = np.zeros(len(pop), dtype=bool)
        if formed is not None:
            state.engo = formed
            joined = willing
            pop.member[willing] = True
            state.events.append({"t": t, "phase": "founded", "members": int(willing.sum())})
    state.choices["join_engo"] = pop.member.copy()
    state.mobilised |= joined
    count = int(joined.sum())
    state.counters["participation"]["join_engo"] += count
    state.events.append({"t": t, "phase": "participate", "kind": "join_engo", "count": count})
    return joined


def _action_phase(state, t):
    cfg = state.config
    pop = state.population
    n = len(pop)
    out = {
        "actions": [],
        "intensity": 0.0,
        "participation": {k: np.zeros(n, dtype=bool) for k in DECISION_KINDS[1:]},
        "sizes": {ActionType.PROTEST: 0.0, ActionType.DISRUPTIVE_PROTEST: 0.0},
        "signal_exposed": 0,
    }
    if not state.engo.exists:
        return out
    engo = state.engo
    eligible = eligible_actions(engo, cfg.engo.thresholds)
    selected = select_actions(eligible, engo, substream(state.seed, Stream.ENGO, t), cfg.engo.base_rates)
    for sub, action in enumerate(ACTION_ORDER):
        if action not in selected:
            continue
        out["actions"].append(action.value)
        signal_rng = substream(state.seed, Stream.ENGO_SIGNAL, t, sub)
        exposure_rng = substream(state.seed, Stream.ENGO_EXPOSURE, t, sub)
        if action is ActionType.DIRECT:
            intensity = action_intensity(action, engo)
            engo.action_log.append(ActionEvent(action, t, intensity=intensity))
        elif action is ActionType.INDIRECT:
            item = emit_indirect_signal(engo, cfg.engo, signal_rng, t)
            exposed = expose(pop, item, exposure_rng)
            apply_framing_batch(pop, item, exposed, cfg.influence)
            out["signal_exposed"] += int(exposed.sum())
            engo.action_log.append(ActionEvent(action, t, channels=item.channels))
            intensity = 0.0
        else:
            kind, event = _PROTEST_KIND[action]
            call = announce(engo, cfg.engo, signal_rng, event, t)
            aware = diffuse_awareness(pop, engo, event, expose(pop, call, exposure_rng))
            rng = substream(state.seed, Stream.BEHAVIOUR, t, DECISION_KINDS.index(kind.value))
            act = _decide(state, kind, aware, state.choices[kind.value], rng)
            state.choices[kind.value] = act
            state.mobilised |= act
            out["participation"][kind.value] = act
            size = float(act.sum()) / n
            out["sizes"][action] = size
            intensity = action_intensity(action, engo, size)
            engo.action_log.append(ActionEvent(action, t, intensity=intensity, protest_size=size,
                                               channels=call.channels))
            count = int(act.sum())
            state.counters["participation"][kind.value] += count
            state.events.append({"t": t, "phase": "participate", "kind": kind.value, "count": count})
        if intensity:
            state.events.append({"t": t, "phase": "intensity", "action": action.value, "intensity": intensity})
        out["intensity"] += intensity
    return out


def step(state) -> SimulationState:
    """Advance one month in place and return the state."""
    if state.timestep >= state.horizon:
        raise ContractError(f"cannot step past horizon {state.horizon}")
    t = state.timestep + 1
    pop = state.population
    pop.aware_action[:] = False
    pop.aware_disruptive[:] = False

    news = _media_phase(state, t)
    joined = _membership_phase(state, t)
    acted = _action_phase(state, t)

    engo = state.engo
    if engo.exists:
        engo.cumulative_pressure = accumulate_pressure(engo.cumulative_pressure, acted["intensity"],
                                                       state.config.engo.pressure)
    pop.history["join_engo"].append(joined.copy())
    for k, v in acted["participation"].items():
        pop.history[k].append(v.copy())

    state.timestep = t
    state.steps.append(StepRecord(
        timestep=t,
        joined=int(joined.sum()),
        action_participants=int(acted["participation"]["action_protest"].sum()),
        disruptive_participants=int(acted["participation"]["disruptive_protest"].sum()),
        members=int(pop.member.sum()),
        engo_exists=bool(engo.exists),
        cumulative_pressure=float(engo.cumulative_pressure),
        intensity=float(acted["intensity"]),
        news_frame=news.frame if news else "",
        news_channels="|".join(news.channels) if news else "",
        news_exposed=news.exposed if news else 0,
        actions="|".join(acted["actions"]),
        protest_size=acted["sizes"][ActionType.PROTEST],
        disruptive_size=acted["sizes"][ActionType.DISRUPTIVE_PROTEST],
        signal_exposed=acted["signal_exposed"],
        aware_action=int(pop.aware_action.sum()),
        aware_disruptive=int(pop.aware_disruptive.sum()),
        mean_weights={m: float(pop.weights[:, j].mean()) for j, m in enumerate(MOTIVES)},
    ))
    return state


def signal_bundle(state) -> SignalBundle:
    cfg = state.config
    n = len(state.population)
    mobilised = int(state.mobilised.sum())
    counter = int(round(cfg.proposal.counter_mobilisation_share * n))
    if cfg.engo.direction < 0:
        support, oppose = counter, mobilised
    else:
        support, oppose = mobilised, counter
    return SignalBundle(
        institutional_assessment=cfg.proposal.institutional_assessment,
        n_support=support,
        n_oppose=oppose,
        n_pro_env=state.counters["pro_environment"],
        n_pro_econ=state.counters["pro_economic"],
        pressure=state.engo.cumulative_pressure,
        pressure_direction=cfg.engo.direction,
        salience_society=mobilised / n,
        salience_media=state.counters["news_items"] / max(state.timestep, 1),
    )


@dataclass
class RunSummary:
    seed: int
    config_digest: str
    outcome: object
    bundle: SignalBundle
    state: SimulationState

    @property
    def decision(self):
        return self.outcome.decision

    def to_dict(self):
        from .reporting import summary_dict

        return summary_dict(self)


def run(config, seed=None, workers=1) -> RunSummary:
    config = coerce(SimulationConfig, config)
    state = initialise(config, seed, workers)
    while state.timestep < state.horizon:
        step(state)
    bundle = signal_bundle(state)
    outcome = decide_proposal(bundle, config.politics, config.proposal,
                              substream(state.seed, Stream.POLITICS))
    return RunSummary(state.seed, config.digest(), outcome, bundle, state)


def replay_counters(events):
    """Rebuild participation and news counters from the event log."""
    counters = {
        "news_items": 0,
        "pro_environment": 0,
        "pro_economic": 0,
        "participation": {k: 0 for k in DECISION_KINDS},
    }
    for ev in events:
        if ev["phase"] == "media":
            counters["news_items"] += 1
            counters[ev["frame"]] += 1
        elif ev["phase"] == "participate":
            counters["participation"][ev["kind"]] += ev["count"]
    return counters


def replay_pressure(events, horizon, params, exists_from=None):
    """Cumulative pressure per step recomputed from logged intensities."""
    per_step = [0.0] * (horizon + 1)
    for ev in events:
        if ev["phase"] == "intensity":
            per_step[ev["t"]] += ev["intensity"]
    c, out = 0.0, []
    for t in range(1, horizon + 1):
        if exists_from is not None and t >= exists_from:
            c = accumulate_pressure(c, per_step[t], params)
        out.append(c)
    return out
