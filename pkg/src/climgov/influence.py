"""Peer shares, bounded logistic motive updating and awareness diffusion."""

from __future__ import annotations

import numpy as np
from scipy.special import expit

from .config import InfluenceConfig, coerce
from .errors import ContractError, UnknownIdError

MotiveUpdateParams = InfluenceConfig


def _kind_key(kind):
    return getattr(kind, "value", kind)


def peer_share(network, choices, i, kind) -> float:
    """Fraction of ``i``'s neighbours whose current choice for ``kind`` is Act.

    ``choices`` maps decision kind to a boolean vector over citizen ids.
    Isolated citizens get 0.
    """
    if not 0 <= int(i) < network.n:
        raise UnknownIdError(f"unknown citizen id {i}")
    nbrs = network.neighbor_array(int(i))
    if len(nbrs) == 0:
        return 0.0
    active = np.asarray(choices[_kind_key(kind)], dtype=bool)
    return float(np.count_nonzero(active[nbrs])) / len(nbrs)


def peer_shares(network, active) -> np.ndarray:
    """:func:`peer_share` for every citizen at once."""
    active = np.asarray(active, dtype=np.float64)
    counts = network.adjacency @ active
    deg = network.degree
    out = np.zeros(network.n)
    np.divide(counts, deg, out=out, where=deg > 0)
    return out


def sensitivity(w, k, tau):
    """Logistic responsiveness ``1 / (1 + exp(-k (w - tau)))``."""
    return expit(k * (np.asarray(w, dtype=float) - tau))


def update_motive_weight(w, params=None) -> float:
    """One exposure step: ``w + (1 - w) * sensitivity(w)``."""
    params = coerce(InfluenceConfig, params, "influence")
    if not 0.0 <= w <= 1.0:
        raise ContractError(f"motive weight {w} outside [0, 1]")
    return float(w + (1.0 - w) * expit(params.k * (w - params.tau)))


def update_motive_weights(w, k, tau):
    """Array form of :func:`update_motive_weight`; result stays in ``[w, 1]``."""
    w = np.asarray(w, dtype=float)
    return w + (1.0 - w) * sensitivity(w, k, tau)


def diffuse_awareness(population, engo_state, event, exposed):
    """Mark citizens aware of ``event`` ("action" or "disruptive").

    Members of an existing eNGO always learn of its calls; anyone else needs
    an exposure this step.  Flags are only ever set, never cleared.
    """
    flags = {"action": population.aware_action, "disruptive": population.aware_disruptive}
    if event not in flags:
        raise ContractError(f"unknown awareness event {event!r}")
    aware = flags[event]
    if engo_state is not None and engo_state.exists:
        aware |= population.member
    aware |= np.asarray(exposed, dtype=bool)
    return aware
