"""Citizen choice: weighted motive satisfaction, MOA attenuation and gating."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import VALUE_MOTIVES, BehaviourConfig
from .errors import ContractError, NumericError
from .population import ALIGNED, truncated_normal

log = logging.getLogger(__name__)


class DecisionKind(str, Enum):
    JOIN_ENGO = "join_engo"
    ACTION_PROTEST = "action_protest"
    DISRUPTIVE_PROTEST = "disruptive_protest"


class OptionKind(str, Enum):
    ACT = "act"
    NOT_ACT = "not_act"


UNAVAILABLE = "unavailable"
EVALUATED = "evaluated"


def total_satisfaction(weights, satisfactions) -> float:
    """Weighted sum of motive satisfactions over a shared motive set."""
    if set(weights) != set(satisfactions):
        raise ContractError(
            f"motive sets differ: {sorted(set(weights) ^ set(satisfactions))}"
        )
    return math.fsum(weights[m] * satisfactions[m] for m in weights)


def choose_option(score_act, score_not) -> OptionKind:
    """Act only on a strictly higher score; ties keep the status quo."""
    if not (math.isfinite(score_act) and math.isfinite(score_not)):
        raise NumericError(f"non-finite satisfaction ({score_act}, {score_not})")
    return OptionKind.ACT if score_act > score_not else OptionKind.NOT_ACT


def conformity_satisfaction(peer_share):
    if not 0.0 <= peer_share <= 1.0:
        raise ContractError(f"peer share {peer_share} outside [0, 1]")
    return 2.0 * peer_share - 1.0, 1.0 - 2.0 * peer_share


def moa_factor(moa) -> float:
    """Mean of the opportunity pair mean and the ability pair mean."""
    opportunity = (moa.time_availability + moa.system_responsiveness) / 2.0
    ability = (moa.political_self_efficacy + moa.civic_engagement) / 2.0
    return (opportunity + ability) / 2.0


def apply_moa(s, moa, alignment) -> float:
    if not -1.0 <= s <= 1.0:
        raise ContractError(f"satisfaction {s} outside [-1, 1]")
    if alignment <= 0 or s <= 0:
        return s
    return s * moa_factor(moa)


@dataclass
class DecisionContext:
    peer_share: float
    engo_exists: bool
    aware: bool
    moa: object
    activist_alignment: str

    def __post_init__(self):
        if not 0.0 <= self.peer_share <= 1.0:
            raise ContractError(f"peer share {self.peer_share} outside [0, 1]")


def is_available(kind, context) -> bool:
    kind = DecisionKind(kind)
    if kind is DecisionKind.JOIN_ENGO:
        return bool(context.engo_exists)
    return bool(context.aware)


def draw_satisfactions(table, n, rng):
    """Draw (n, 4) Act and NotAct satisfactions for the value motives.

    Draw order per motive is Act then NotAct, motives in canonical order.
    """
    s_act = np.empty((n, len(VALUE_MOTIVES)))
    s_not = np.empty((n, len(VALUE_MOTIVES)))
    for j, m in enumerate(VALUE_MOTIVES):
        s_act[:, j] = truncated_normal(rng, table[m].act, n)
        s_not[:, j] = truncated_normal(rng, table[m].not_act, n)
    return s_act, s_not


def evaluate(citizen, kind, context, spec, rng):
    """Return ``(OptionKind, reason)`` for one citizen and decision module."""
    kind = DecisionKind(kind)
    spec = spec if isinstance(spec, BehaviourConfig) else BehaviourConfig.model_validate(spec)
    if not is_available(kind, context):
        log.debug("citizen %s %s: %s", getattr(citizen, "id", "?"), kind.value, UNAVAILABLE)
        return OptionKind.NOT_ACT, UNAVAILABLE
    table = spec.satisfaction[kind.value]
    s_act, s_not = draw_satisfactions(table, 1, rng)
    act = dict(zip(VALUE_MOTIVES, s_act[0]))
    not_act = dict(zip(VALUE_MOTIVES, s_not[0]))
    act["conformity"], not_act["conformity"] = conformity_satisfaction(context.peer_share)

    use_moa = True
    moa = context.moa
    if kind is DecisionKind.DISRUPTIVE_PROTEST and context.activist_alignment != "aligned":
        use_moa = False
    for m in VALUE_MOTIVES:
        sign = table[m].alignment
        if use_moa:
            act[m] = apply_moa(act[m], moa, sign)
        elif spec.suppress_unaligned_disruptive and sign > 0 and act[m] > 0:
            act[m] = 0.0
    weights = citizen.motive_weights
    choice = choose_option(total_satisfaction(weights, act), total_satisfaction(weights, not_act))
    return choice, EVALUATED


def decide(citizen, kind, context, spec, rng) -> OptionKind:
    return evaluate(citizen, kind, context, spec, rng)[0]


def _scores(weights, moa, alignment, peer_share, s_act, s_not, signs, kind, suppress):
    opportunity = (moa[:, 0] + moa[:, 1]) / 2.0
    ability = (moa[:, 2] + moa[:, 3]) / 2.0
    factor = (opportunity + ability) / 2.0
    if kind is DecisionKind.DISRUPTIVE_PROTEST:
        factor = np.where(alignment == ALIGNED, factor, 0.0 if suppress else 1.0)
    boost = (signs[None, :] > 0) & (s_act > 0)
    s_act = np.where(boost, s_act * factor[:, None], s_act)
    conf = 2.0 * peer_share - 1.0
    # Explicit left-to-right sums keep every row bit-identical however the
    # population is chunked.
    score_act = weights[:, 4] * conf
    score_not = weights[:, 4] * -conf
    for j in range(len(VALUE_MOTIVES)):
        score_act = score_act + weights[:, j] * s_act[:, j]
        score_not = score_not + weights[:, j] * s_not[:, j]
    return score_act, score_not


def decide_batch(weights, moa, alignment, peer_share, available, kind, spec, rng, workers=1):
    """Vectorised :func:`decide` over a whole population.

    Satisfactions are drawn for every citizen before any gating so the draw
    count never depends on state; the arithmetic afterwards is split into
    contiguous chunks, optionally on a thread pool, without changing the
    result.
    """
    kind = DecisionKind(kind)
    table = spec.satisfaction[kind.value]
    n = len(weights)
    s_act, s_not = draw_satisfactions(table, n, rng)
    signs = np.array([table[m].alignment for m in VALUE_MOTIVES], dtype=float)
    peer_share = np.asarray(peer_share, dtype=float)
    if n and (peer_share.min() < 0.0 or peer_share.max() > 1.0):
        raise ContractError("peer shares outside [0, 1]")
    suppress = spec.suppress_unaligned_disruptive

    def chunk(sl):
        a, b = _scores(weights[sl], moa[sl], alignment[sl], peer_share[sl], s_act[sl], s_not[sl],
                       signs, kind, suppress)
        return a, b

    if workers <= 1 or n < 2:
        score_act, score_not = chunk(slice(0, n))
    else:
        bounds = np.linspace(0, n, workers + 1).astype(int)
        slices = [slice(bounds[i], bounds[i + 1]) for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk, slices))
        score_act = np.concatenate([p[0] for p in parts])
        score_not = np.concatenate([p[1] for p in parts])
    if not (np.isfinite(score_act).all() and np.isfinite(score_not).all()):
        raise NumericError("non-finite satisfaction score")
    return np.asarray(available, dtype=bool) & (score_act > score_not)


__all__ = [
    "DecisionKind", "OptionKind", "DecisionContext",
    "total_satisfaction", "choose_option", "conformity_satisfaction", "moa_factor",
    "apply_moa", "evaluate", "decide", "decide_batch", "draw_satisfactions", "is_available",
]
