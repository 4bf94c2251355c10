"""Two-stage political decision on the proposal, then a majority vote."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import POLITICAL_INPUTS, PoliticsConfig, ProposalConfig, coerce
from .errors import ConfigurationError, ContractError, UnknownIdError


class Decision(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    REVISE = "revise"


DECISION_ORDER = (Decision.ACCEPT, Decision.REJECT, Decision.REVISE)


@dataclass
class Politician:
    id: str
    party: str
    stance: float
    strategic_type: str = "policy_seeking"
    base_weights: dict = field(default_factory=lambda: {i: 1.0 for i in POLITICAL_INPUTS})

    def __post_init__(self):
        if not -1.0 <= self.stance <= 1.0:
            raise ContractError(f"stance {self.stance} outside [-1, 1]")
        if any(w < 0 for w in self.base_weights.values()):
            raise ContractError("base weights must be non-negative")


@dataclass
class Party:
    id: str
    stance: float
    similarity: dict = field(default_factory=dict)


@dataclass
class SignalBundle:
    """End-of-horizon inputs shared by every politician.

    Counts are oriented to the proposal: ``n_support`` citizens mobilised for
    it, ``n_oppose`` against it.  ``pressure_direction`` is +1 when the eNGO
    pushes for the proposal and -1 when it pushes against.
    """

    institutional_assessment: float
    n_support: float = 0.0
    n_oppose: float = 0.0
    n_pro_env: float = 0.0
    n_pro_econ: float = 0.0
    pressure: float = 0.0
    pressure_direction: int = -1
    salience_society: float = 0.0
    salience_media: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.institutional_assessment <= 1.0:
            raise ContractError("institutional assessment outside [0, 1]")
        if min(self.n_support, self.n_oppose, self.n_pro_env, self.n_pro_econ, self.pressure) < 0:
            raise ContractError("signal counts must be non-negative")


@dataclass
class DirectionalComponents:
    signed: dict
    accept: dict
    reject: dict

    @classmethod
    def from_signed(cls, signed):
        return cls(
            signed=dict(signed),
            accept={k: max(v, 0.0) for k, v in signed.items()},
            reject={k: max(-v, 0.0) for k, v in signed.items()},
        )


def log_ratio_tanh(a, b, epsilon=1.0) -> float:
    # Difference of logs keeps the transform exactly odd in (a, b).
    return math.tanh(math.log(a + epsilon) - math.log(b + epsilon))


def transform_signals(bundle, proposal_frame="development", stance=0.0, party_stance=0.0,
                      epsilon=1.0, pressure_scale=10.0, assessment_inverted=False):
    """Signed per-input scalars in ``[-1, 1]``, split into accept/reject parts."""
    u = 2.0 * bundle.institutional_assessment - 1.0
    if assessment_inverted:
        u = -u
    s = log_ratio_tanh(bundle.n_support, bundle.n_oppose, epsilon)
    if proposal_frame == "development":
        pro, anti = bundle.n_pro_econ, bundle.n_pro_env
    elif proposal_frame == "environment":
        pro, anti = bundle.n_pro_env, bundle.n_pro_econ
    else:
        raise ConfigurationError(f"unknown proposal frame {proposal_frame!r}", [("proposal.frame", "unknown")])
    m = log_ratio_tanh(pro, anti, epsilon)
    d = bundle.pressure_direction * math.tanh(bundle.pressure / pressure_scale)
    signed = {"U": u, "S": s, "M": m, "D": d, "P": float(stance), "PP": float(party_stance)}
    return DirectionalComponents.from_signed(signed)


def modulate_weights(base, salience_society, salience_media, strategic_type, multipliers) -> dict:
    """Salience and strategic scaling of the base weights, normalised to one."""
    raw = {i: float(base[i]) for i in POLITICAL_INPUTS}
    raw["S"] *= 1.0 + salience_society
    raw["M"] *= 1.0 + salience_media
    for name, factor in multipliers.get(strategic_type, {}).items():
        raw[name] *= factor
    total = math.fsum(raw.values())
    if not total > 0.0:
        raise ConfigurationError(
            "modulated weights are all zero", [("politics.politicians.base_weights", "all zero after modulation")]
        )
    return {i: raw[i] / total for i in POLITICAL_INPUTS}


def compute_utilities(weights, components):
    accept = math.fsum(weights[i] * components.accept[i] for i in POLITICAL_INPUTS)
    reject = math.fsum(weights[i] * components.reject[i] for i in POLITICAL_INPUTS)
    return accept, reject


def preliminary_decision(u_accept, u_reject, delta) -> Decision:
    if delta < 0:
        raise ContractError("decisiveness threshold must be non-negative")
    if u_accept > u_reject + delta:
        return Decision.ACCEPT
    if u_reject > u_accept + delta:
        return Decision.REJECT
    return Decision.REVISE


class PartyTable:
    """Party stances and pairwise similarity lookup."""

    def __init__(self, parties):
        self.parties = {p.id: p for p in parties}

    @classmethod
    def from_config(cls, cfg):
        cfg = coerce(PoliticsConfig, cfg, "politics")
        parties = []
        for p in cfg.parties:
            stance = p.stance
            if stance is None:
                stance = float(np.mean([x.stance for x in cfg.politicians if x.party == p.id]))
            parties.append(Party(id=p.id, stance=stance, similarity=dict(p.similarity)))
        return cls(parties)

    def stance(self, party_id) -> float:
        try:
            return self.parties[party_id].stance
        except KeyError:
            raise ConfigurationError(f"unknown party {party_id!r}", [("politics.parties", party_id)]) from None

    def similarity(self, a, b) -> float:
        if a not in self.parties or b not in self.parties:
            raise ConfigurationError(f"unknown party pair ({a!r}, {b!r})", [("politics.parties", f"{a}/{b}")])
        if a == b:
            return 1.0
        if b in self.parties[a].similarity:
            return self.parties[a].similarity[b]
        if a in self.parties[b].similarity:
            return self.parties[b].similarity[a]
        return 1.0 - abs(self.parties[a].stance - self.parties[b].stance) / 2.0


def similarity(p_i, p_j, party_table) -> float:
    return party_table.similarity(p_i.party, p_j.party)


def support_vector(i, politicians, preliminary, party_table) -> dict:
    me = politicians[i]
    support = {d: 0.0 for d in DECISION_ORDER}
    for j, other in enumerate(politicians):
        if j == i:
            continue
        support[preliminary[other.id]] += similarity(me, other, party_table)
    return support


def switch_probabilities(own, support, inertia) -> dict:
    total = math.fsum(support.values())
    if total <= 0.0:
        return {d: float(d == own) for d in DECISION_ORDER}
    return {d: inertia * (d == own) + (1.0 - inertia) * support[d] / total for d in DECISION_ORDER}


def peer_adjust(politicians, preliminary, rng, party_table, inertia=0.5) -> dict:
    """One synchronous round of similarity-weighted peer adjustment.

    Every politician consumes one uniform in roster order.
    """
    if not 0.0 <= inertia <= 1.0:
        raise ContractError("inertia must lie in [0, 1]")
    for p in politicians:
        if p.id not in preliminary:
            raise UnknownIdError(f"no preliminary decision for {p.id}")
    u = rng.random(len(politicians))
    final = {}
    for i, p in enumerate(politicians):
        own = Decision(preliminary[p.id])
        q = switch_probabilities(own, support_vector(i, politicians, preliminary, party_table), inertia)
        acc = 0.0
        final[p.id] = own
        for d in DECISION_ORDER:
            acc += q[d]
            if q[d] > 0.0 and u[i] < acc:
                final[p.id] = d
                break
    return final


def majority_vote(decisions) -> Decision:
    decisions = [Decision(d) for d in decisions]
    if not decisions:
        raise ContractError("majority vote over no decisions")
    counts = {d: decisions.count(d) for d in DECISION_ORDER}
    top = max(counts.values())
    winners = [d for d, c in counts.items() if c == top]
    return winners[0] if len(winners) == 1 else Decision.REVISE


@dataclass
class PoliticianRecord:
    id: str
    party: str
    weights: dict
    components: DirectionalComponents
    u_accept: float
    u_reject: float
    preliminary: Decision
    final: Decision = None


@dataclass
class PoliticalOutcome:
    decision: Decision
    records: list


def roster_from_config(cfg):
    cfg = coerce(PoliticsConfig, cfg, "politics")
    return [
        Politician(id=p.id, party=p.party, stance=p.stance, strategic_type=p.strategic_type,
                   base_weights=dict(p.base_weights))
        for p in cfg.politicians
    ]


def run_pipeline(bundle, roster, party_table, rng, *, decisiveness=0.1, epsilon=1.0,
                 pressure_scale=10.0, inertia=0.5, multipliers=None, proposal_frame="development",
                 assessment_inverted=False) -> PoliticalOutcome:
    """Stage 1 for every politician, one synchronous Stage 2 round, then the vote."""
    multipliers = multipliers or {}
    records = []
    for pol in roster:
        comps = transform_signals(
            bundle, proposal_frame, stance=pol.stance, party_stance=party_table.stance(pol.party),
            epsilon=epsilon, pressure_scale=pressure_scale, assessment_inverted=assessment_inverted,
        )
        w = modulate_weights(pol.base_weights, bundle.salience_society, bundle.salience_media,
                             pol.strategic_type, multipliers)
        ua, ur = compute_utilities(w, comps)
        records.append(PoliticianRecord(pol.id, pol.party, w, comps, ua, ur,
                                        preliminary_decision(ua, ur, decisiveness)))
    prelim = {r.id: r.preliminary for r in records}
    final = peer_adjust(roster, prelim, rng, party_table, inertia)
    for r in records:
        r.final = final[r.id]
    return PoliticalOutcome(majority_vote([r.final for r in records]), records)


def decide_proposal(bundle, politics_cfg, proposal_cfg, rng) -> PoliticalOutcome:
    politics_cfg = coerce(PoliticsConfig, politics_cfg, "politics")
    proposal_cfg = coerce(ProposalConfig, proposal_cfg, "proposal")
    return run_pipeline(
        bundle, roster_from_config(politics_cfg), PartyTable.from_config(politics_cfg), rng,
        decisiveness=politics_cfg.decisiveness, epsilon=politics_cfg.epsilon,
        pressure_scale=politics_cfg.pressure_scale, inertia=politics_cfg.inertia,
        multipliers=politics_cfg.multipliers, proposal_frame=proposal_cfg.frame,
        assessment_inverted=proposal_cfg.assessment_inverted,
    )
