"""The eNGO agent: formation, repertoire, intensity and cumulative pressure."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .config import EngoBaseRates, EngoConfig, EngoThresholds, PressureConfig, coerce
from .errors import ContractError
from .media import INSTITUTIONAL, SOCIAL, Frame, NewsItem

PressureParams = PressureConfig


class ActionType(str, Enum):
    DIRECT = "direct"
    INDIRECT = "indirect"
    PROTEST = "protest"
    DISRUPTIVE_PROTEST = "disruptive_protest"


# Execution order inside a step.
ACTION_ORDER = (ActionType.DIRECT, ActionType.INDIRECT, ActionType.PROTEST, ActionType.DISRUPTIVE_PROTEST)
PRESSURE_ACTIONS = frozenset({ActionType.DIRECT, ActionType.PROTEST, ActionType.DISRUPTIVE_PROTEST})


@dataclass
class ActionEvent:
    type: ActionType
    timestep: int
    intensity: Optional[float] = None
    protest_size: Optional[float] = None
    channels: tuple = ()

    def __post_init__(self):
        if (self.intensity is not None) != (self.type in PRESSURE_ACTIONS):
            raise ContractError(f"{self.type.value}: intensity must be present iff it builds pressure")


@dataclass
class EngoState:
    exists: bool = False
    resources: float = 0.0
    experience_years: float = 0.0
    strategic_orientation: float = 0.0
    cultural_trust: float = 0.0
    experience_cap: float = 20.0
    members: set = field(default_factory=set)
    cumulative_pressure: float = 0.0
    action_log: list = field(default_factory=list)
    founded_at: Optional[int] = None

    def __post_init__(self):
        for name in ("resources", "strategic_orientation", "cultural_trust"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ContractError(f"{name}={v} outside [0, 1]")
        if self.experience_years < 0:
            raise ContractError("experience_years must be non-negative")

    @property
    def normalised_experience(self) -> float:
        return min(self.experience_years / self.experience_cap, 1.0)


def state_from_config(cfg: EngoConfig, members=(), exists=True, timestep=None) -> EngoState:
    return EngoState(
        exists=exists,
        resources=cfg.resources,
        experience_years=cfg.experience_years,
        strategic_orientation=cfg.strategic_orientation,
        cultural_trust=cfg.cultural_trust,
        experience_cap=cfg.experience_cap,
        members=set(int(m) for m in members),
        founded_at=timestep,
    )


def maybe_form_engo(willing_founders, founding_config, existing=None, timestep=None):
    """Found an eNGO when enough citizens are willing; otherwise ``None``."""
    cfg = coerce(EngoConfig, founding_config, "engo")
    if existing is not None and existing.exists:
        raise ContractError("an eNGO already exists")
    founders = set(int(i) for i in willing_founders)
    if len(founders) < cfg.founding_threshold:
        return None
    return state_from_config(cfg, founders, timestep=timestep)


def eligible_actions(state, thresholds=None) -> set:
    th = coerce(EngoThresholds, thresholds, "engo.thresholds")
    if not state.exists:
        raise ContractError("eligibility queried for a non-existent eNGO")
    out = {ActionType.INDIRECT}
    if state.resources >= th.direct_resources and state.cultural_trust >= th.direct_trust:
        out.add(ActionType.DIRECT)
    if state.resources >= th.protest_resources:
        out.add(ActionType.PROTEST)
    if state.strategic_orientation >= th.disruptive_orientation:
        out.add(ActionType.DISRUPTIVE_PROTEST)
    return out


def selection_probabilities(state, base_rates=None) -> dict:
    rates = coerce(EngoBaseRates, base_rates, "engo.base_rates")
    raw = {
        ActionType.DIRECT: rates.direct * state.cultural_trust,
        ActionType.INDIRECT: rates.indirect * state.resources,
        ActionType.PROTEST: rates.protest * state.strategic_orientation,
        ActionType.DISRUPTIVE_PROTEST: rates.disruptive * state.strategic_orientation,
    }
    return {a: min(max(p, 0.0), 1.0) for a, p in raw.items()}


def select_actions(eligible, state, rng, base_rates=None) -> set:
    """Independent Bernoulli selection of each eligible action.

    One uniform is drawn per action type in :data:`ACTION_ORDER` whether or
    not it is eligible.
    """
    probs = selection_probabilities(state, base_rates)
    u = rng.random(len(ACTION_ORDER))
    return {a for a, x in zip(ACTION_ORDER, u) if a in eligible and x < probs[a]}


def action_intensity(action, state, protest_size=None) -> float:
    action = ActionType(action)
    r, e = state.resources, state.normalised_experience
    if action is ActionType.DIRECT:
        return 10.0 * r + 8.0 * e + 5.0 * state.cultural_trust
    if action in (ActionType.PROTEST, ActionType.DISRUPTIVE_PROTEST):
        if protest_size is None or not 0.0 <= protest_size <= 1.0:
            raise ContractError(f"protest size {protest_size} outside [0, 1]")
        return 5.0 * r + 5.0 * e + 10.0 * protest_size
    raise ContractError("indirect actions emit signals, not intensity")


def accumulate_pressure(c, intensity, params=None) -> float:
    """``C + gamma * I * exp(-delta * C)``."""
    params = coerce(PressureConfig, params, "engo.pressure")
    if c < 0 or intensity < 0:
        raise ContractError(f"negative pressure input (C={c}, I={intensity})")
    return c + params.gamma * intensity * math.exp(-params.delta * c)


def coverage_probability(resources, cfg) -> float:
    return min(max(cfg.coverage_scale * resources, 0.0), 1.0)


def dissemination_channels(state, cfg, rng) -> tuple:
    """Social media always; conventional media above the resource gate,
    then only if the coverage draw succeeds.  Consumes one uniform."""
    cfg = coerce(EngoConfig, cfg, "engo")
    u = rng.random()
    if state.resources >= cfg.thresholds.conventional_resources and u < coverage_probability(state.resources, cfg):
        return (INSTITUTIONAL, SOCIAL)
    return (SOCIAL,)


def emit_indirect_signal(state, media_config, rng, timestep=0) -> NewsItem:
    """Pro-environment information item from an indirect action."""
    channels = dissemination_channels(state, media_config, rng)
    return NewsItem(frame=Frame.PRO_ENVIRONMENT, channels=channels, origin="engo", timestep=timestep)


def announce(state, cfg, rng, event, timestep=0) -> NewsItem:
    """Call to action for a protest event, spread over the eNGO's channels."""
    channels = dissemination_channels(state, cfg, rng)
    return NewsItem(frame=None, channels=channels, origin="engo", timestep=timestep, event=event)
