"""News generation, channel exposure and framing-driven salience updates."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .config import CHANNELS, MOTIVES, InfluenceConfig, MediaConfig, coerce
from .errors import ContractError
from .influence import update_motive_weight, update_motive_weights

INSTITUTIONAL, SOCIAL = CHANNELS


class Frame(str, Enum):
    PRO_ENVIRONMENT = "pro_environment"
    PRO_ECONOMIC = "pro_economic"


FRAME_TARGETS = {
    Frame.PRO_ENVIRONMENT: ("climate_concern", "nature_concern"),
    Frame.PRO_ECONOMIC: ("economic_security", "growth_first"),
}


@dataclass(frozen=True)
class NewsItem:
    """A piece of information reaching citizens over one or two channels.

    ``frame`` is ``None`` for eNGO calls to action, which raise awareness
    but carry no framing.
    """

    frame: Optional[Frame]
    channels: tuple
    origin: str = "media"
    timestep: int = 0
    event: Optional[str] = None

    def __post_init__(self):
        if not set(self.channels) <= set(CHANNELS) or not self.channels:
            raise ContractError(f"bad channel set {self.channels!r}")
        if self.origin == "media" and INSTITUTIONAL not in self.channels:
            raise ContractError("media items always run on the institutional channel")
        if self.origin not in ("media", "engo"):
            raise ContractError(f"unknown origin {self.origin!r}")


def generate_news(config, rng, timestep=0) -> Optional[NewsItem]:
    """At most one media item per step.

    Three uniforms are consumed on every call (occurrence, frame, social
    amplification) so downstream draws never shift with the outcome.
    """
    config = coerce(MediaConfig, config, "media")
    u_occur, u_frame, u_social = rng.random(3)
    if not u_occur < config.news_frequency:
        return None
    frame = Frame.PRO_ENVIRONMENT if u_frame < config.pro_environment_share else Frame.PRO_ECONOMIC
    channels = (INSTITUTIONAL, SOCIAL) if u_social < config.social_amplification else (INSTITUTIONAL,)
    return NewsItem(frame=frame, channels=channels, origin="media", timestep=timestep)


def expose(population, item, rng, members=None) -> np.ndarray:
    """Boolean exposure mask over citizens.

    Each channel on the item is an independent Bernoulli trial with the
    citizen's channel probability; one success suffices.  For eNGO items
    every member in ``members`` (default: the population's member flags) is
    exposed regardless.
    """
    if item is None:
        raise ContractError("no item to expose")
    n = len(population)
    u = rng.random((n, len(CHANNELS)))
    hit = np.zeros(n, dtype=bool)
    for j, channel in enumerate(CHANNELS):
        if channel in item.channels:
            hit |= u[:, j] < population.exposure[:, j]
    if item.origin == "engo":
        hit |= population.member if members is None else np.asarray(members, dtype=bool)
    return hit


def exposed_ids(mask) -> set:
    return {int(i) for i in np.flatnonzero(mask)}


def apply_framing(citizen, item, update_params=None) -> dict:
    """Updated motive weights for one exposed citizen (input is not mutated)."""
    params = coerce(InfluenceConfig, update_params, "influence")
    weights = dict(citizen.motive_weights)
    if item.frame is None:
        return weights
    for m in FRAME_TARGETS[Frame(item.frame)]:
        weights[m] = update_motive_weight(weights[m], params)
    return weights


def apply_framing_batch(population, item, exposed, params):
    """In-place framing update for every exposed citizen."""
    if item.frame is None:
        return
    rows = np.flatnonzero(exposed)
    if not len(rows):
        return
    for m in FRAME_TARGETS[Frame(item.frame)]:
        j = MOTIVES.index(m)
        population.weights[rows, j] = update_motive_weights(population.weights[rows, j], params.k, params.tau)
