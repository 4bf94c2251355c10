"""Scenario schema, defaults and validation.

A scenario is a YAML (or JSON) document whose top-level sections mirror
:class:`SimulationConfig`.  Every section has defaults, so an empty file is a
valid scenario apart from the seed, which the CLI always takes explicitly.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ConfigurationError

MOTIVES = ("climate_concern", "nature_concern", "growth_first", "economic_security", "conformity")
VALUE_MOTIVES = MOTIVES[:4]
MOA_FACTORS = ("time_availability", "system_responsiveness", "political_self_efficacy", "civic_engagement")
CHANNELS = ("institutional", "social")
ALIGNMENTS = ("aligned", "neutral", "opposed")
DECISION_KINDS = ("join_engo", "action_protest", "disruptive_protest")
POLITICAL_INPUTS = ("U", "S", "M", "D", "P", "PP")
STRATEGIC_TYPES = ("vote_seeking", "policy_seeking", "office_seeking")
HOMOPHILY_ATTRIBUTES = ("age", "gender", "education", "political_orientation")

SHARE_TOLERANCE = 1e-9


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, validate_default=True)


def _check_shares(values, name):
    if any(v < 0 for v in values):
        raise ValueError(f"{name} must be non-negative")
    if abs(sum(values) - 1.0) > SHARE_TOLERANCE:
        raise ValueError(f"{name} must sum to 1 (got {sum(values):.12g})")
    return values


class TruncNormal(_Section):
    """Normal distribution truncated to ``[lo, hi]``; ``sd = 0`` is a point mass."""

    mean: float
    sd: float = Field(0.0, ge=0.0)
    lo: float = 0.0
    hi: float = 1.0

    @model_validator(mode="after")
    def _bounds(self):
        if not self.lo <= self.hi:
            raise ValueError("lo must not exceed hi")
        if not self.lo <= self.mean <= self.hi:
            raise ValueError("mean must lie within [lo, hi]")
        return self


def _tn(mean, sd, lo=0.0, hi=1.0):
    return TruncNormal(mean=mean, sd=sd, lo=lo, hi=hi)


def _unit_interval(spec: TruncNormal, name: str) -> TruncNormal:
    if spec.lo < 0.0 or spec.hi > 1.0:
        raise ValueError(f"{name} bounds must lie within [0, 1]")
    return spec


class EngineConfig(_Section):
    horizon: int = Field(12, ge=1)


class PopulationConfig(_Section):
    size: int = Field(2000, ge=1)
    age_band_shares: list[float] = [0.18, 0.2, 0.22, 0.2, 0.2]
    gender_shares: list[float] = [0.49, 0.49, 0.02]
    education_shares: list[float] = [0.25, 0.4, 0.35]
    orientation_shares: list[float] = [0.1, 0.2, 0.35, 0.2, 0.15]
    motive_weights: dict[str, TruncNormal] = {
        "climate_concern": _tn(0.55, 0.2),
        "nature_concern": _tn(0.5, 0.2),
        "growth_first": _tn(0.45, 0.2),
        "economic_security": _tn(0.5, 0.2),
        "conformity": _tn(0.4, 0.2),
    }
    moa: dict[str, TruncNormal] = {
        "time_availability": _tn(0.5, 0.25),
        "system_responsiveness": _tn(0.5, 0.2),
        "political_self_efficacy": _tn(0.5, 0.25),
        "civic_engagement": _tn(0.45, 0.25),
    }
    exposure: dict[str, TruncNormal] = {
        "institutional": _tn(0.5, 0.2),
        "social": _tn(0.4, 0.25),
    }
    alignment_shares: dict[str, float] = {"aligned": 0.2, "neutral": 0.5, "opposed": 0.3}

    @field_validator("age_band_shares", "gender_shares", "education_shares", "orientation_shares")
    @classmethod
    def _shares(cls, v, info):
        if len(v) < 1:
            raise ValueError(f"{info.field_name} needs at least one category")
        if info.field_name == "orientation_shares" and len(v) < 2:
            raise ValueError("orientation_shares needs at least two levels")
        return _check_shares(v, info.field_name)

    @field_validator("alignment_shares")
    @classmethod
    def _alignment(cls, v):
        if set(v) != set(ALIGNMENTS):
            raise ValueError(f"alignment_shares keys must be exactly {list(ALIGNMENTS)}")
        _check_shares([v[a] for a in ALIGNMENTS], "alignment_shares")
        return v

    @field_validator("motive_weights")
    @classmethod
    def _motives(cls, v):
        if set(v) != set(MOTIVES):
            raise ValueError(f"motive_weights keys must be exactly {list(MOTIVES)}")
        for name, spec in v.items():
            _unit_interval(spec, name)
        return v

    @field_validator("moa")
    @classmethod
    def _moa(cls, v):
        if set(v) != set(MOA_FACTORS):
            raise ValueError(f"moa keys must be exactly {list(MOA_FACTORS)}")
        for name, spec in v.items():
            _unit_interval(spec, name)
        return v

    @field_validator("exposure")
    @classmethod
    def _exposure(cls, v):
        if set(v) != set(CHANNELS):
            raise ValueError(f"exposure keys must be exactly {list(CHANNELS)}")
        for name, spec in v.items():
            _unit_interval(spec, name)
        return v


class NetworkConfig(_Section):
    target_mean_degree: float = Field(12.0, gt=0.0)
    dissimilarity_penalty: dict[str, float] = {
        "age": 0.3,
        "gender": 0.6,
        "education": 0.5,
        "political_orientation": 0.2,
    }

    @field_validator("dissimilarity_penalty")
    @classmethod
    def _penalties(cls, v):
        if set(v) != set(HOMOPHILY_ATTRIBUTES):
            raise ValueError(f"dissimilarity_penalty keys must be exactly {list(HOMOPHILY_ATTRIBUTES)}")
        for name, p in v.items():
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"penalty for {name} must lie in [0, 1]")
        return v


class MotiveSatisfaction(_Section):
    act: TruncNormal
    not_act: TruncNormal
    alignment: Literal[-1, 0, 1] = 0

    @model_validator(mode="after")
    def _range(self):
        for spec in (self.act, self.not_act):
            if spec.lo < -1.0 or spec.hi > 1.0:
                raise ValueError("satisfaction bounds must lie within [-1, 1]")
        return self


def _ms(act, not_act, alignment, sd=0.2):
    return MotiveSatisfaction(
        act=_tn(act, sd, -1.0, 1.0), not_act=_tn(not_act, sd, -1.0, 1.0), alignment=alignment
    )


def _default_satisfaction():
    return {
        "join_engo": {
            "climate_concern": _ms(0.4, -0.1, 1),
            "nature_concern": _ms(0.3, -0.1, 1),
            "growth_first": _ms(-0.4, 0.2, -1),
            "economic_security": _ms(-0.3, 0.3, -1),
        },
        "action_protest": {
            "climate_concern": _ms(0.5, -0.1, 1),
            "nature_concern": _ms(0.4, -0.1, 1),
            "growth_first": _ms(-0.5, 0.2, -1),
            "economic_security": _ms(-0.3, 0.2, -1),
        },
        "disruptive_protest": {
            "climate_concern": _ms(0.5, -0.1, 1),
            "nature_concern": _ms(0.4, -0.1, 1),
            "growth_first": _ms(-0.6, 0.3, -1),
            "economic_security": _ms(-0.5, 0.3, -1),
        },
    }


class BehaviourConfig(_Section):
    satisfaction: dict[str, dict[str, MotiveSatisfaction]] = Field(default_factory=_default_satisfaction)
    # Non-aligned citizens get a zero MOA factor for disruptive protest.
    suppress_unaligned_disruptive: bool = True

    @field_validator("satisfaction")
    @classmethod
    def _complete(cls, v):
        if set(v) != set(DECISION_KINDS):
            raise ValueError(f"satisfaction keys must be exactly {list(DECISION_KINDS)}")
        for kind, table in v.items():
            if "conformity" in table:
                raise ValueError(f"{kind}: conformity satisfaction is computed from peers, not configured")
            if set(table) != set(VALUE_MOTIVES):
                raise ValueError(f"{kind} keys must be exactly {list(VALUE_MOTIVES)}")
        return v


class InfluenceConfig(_Section):
    k: float = Field(10.0, gt=0.0)
    tau: float = Field(0.5, ge=0.0, le=1.0)


class EngoThresholds(_Section):
    direct_resources: float = Field(0.6, ge=0.0, le=1.0)
    direct_trust: float = Field(0.5, ge=0.0, le=1.0)
    protest_resources: float = Field(0.3, ge=0.0, le=1.0)
    disruptive_orientation: float = Field(0.7, ge=0.0, le=1.0)
    conventional_resources: float = Field(0.6, ge=0.0, le=1.0)


class EngoBaseRates(_Section):
    direct: float = Field(0.5, ge=0.0)
    indirect: float = Field(0.8, ge=0.0)
    protest: float = Field(0.6, ge=0.0)
    disruptive: float = Field(0.4, ge=0.0)


class PressureConfig(_Section):
    gamma: float = Field(0.1, gt=0.0)
    delta: float = Field(0.05, gt=0.0)


class EngoConfig(_Section):
    preexisting: bool = False
    initial_member_share: float = Field(0.0, ge=0.0, le=1.0)
    founding_threshold: int = Field(20, ge=1)
    resources: float = Field(0.5, ge=0.0, le=1.0)
    experience_years: float = Field(5.0, ge=0.0)
    experience_cap: float = Field(20.0, gt=0.0)
    strategic_orientation: float = Field(0.7, ge=0.0, le=1.0)
    cultural_trust: float = Field(0.5, ge=0.0, le=1.0)
    coverage_scale: float = Field(1.0, ge=0.0)
    direction: Literal[-1, 1] = -1
    thresholds: EngoThresholds = EngoThresholds()
    base_rates: EngoBaseRates = EngoBaseRates()
    pressure: PressureConfig = PressureConfig()


class MediaConfig(_Section):
    news_frequency: float = Field(0.5, ge=0.0, le=1.0)
    pro_environment_share: float = Field(0.5, ge=0.0, le=1.0)
    social_amplification: float = Field(0.5, ge=0.0, le=1.0)


class PartyConfig(_Section):
    id: str
    stance: Optional[float] = Field(None, ge=-1.0, le=1.0)
    similarity: dict[str, float] = {}

    @field_validator("similarity")
    @classmethod
    def _sim(cls, v):
        for other, s in v.items():
            if not 0.0 <= s <= 1.0:
                raise ValueError(f"similarity to {other} must lie in [0, 1]")
        return v


class PoliticianConfig(_Section):
    id: str
    party: str
    stance: float = Field(ge=-1.0, le=1.0)
    strategic_type: Literal["vote_seeking", "policy_seeking", "office_seeking"] = "policy_seeking"
    base_weights: dict[str, float] = {i: 1.0 for i in POLITICAL_INPUTS}

    @field_validator("base_weights")
    @classmethod
    def _weights(cls, v):
        if set(v) != set(POLITICAL_INPUTS):
            raise ValueError(f"base_weights keys must be exactly {list(POLITICAL_INPUTS)}")
        if any(w < 0 for w in v.values()):
            raise ValueError("base_weights must be non-negative")
        return v


def _default_parties():
    return [
        PartyConfig(id="green", stance=None),
        PartyConfig(id="centre", stance=None),
        PartyConfig(id="growth", stance=None),
    ]


def _default_politicians():
    roster = [
        ("g1", "green", -0.8, "policy_seeking"),
        ("g2", "green", -0.6, "vote_seeking"),
        ("g3", "green", -0.5, "office_seeking"),
        ("c1", "centre", -0.1, "vote_seeking"),
        ("c2", "centre", 0.1, "office_seeking"),
        ("c3", "centre", 0.2, "vote_seeking"),
        ("c4", "centre", 0.0, "policy_seeking"),
        ("d1", "growth", 0.5, "office_seeking"),
        ("d2", "growth", 0.7, "policy_seeking"),
        ("d3", "growth", 0.6, "vote_seeking"),
        ("d4", "growth", 0.8, "policy_seeking"),
    ]
    return [PoliticianConfig(id=i, party=p, stance=s, strategic_type=t) for i, p, s, t in roster]


def _default_multipliers():
    return {
        "vote_seeking": {"S": 1.5, "M": 1.5},
        "policy_seeking": {"P": 1.5, "PP": 1.5},
        "office_seeking": {"PP": 1.5, "U": 1.5},
    }


class PoliticsConfig(_Section):
    decisiveness: float = Field(0.1, ge=0.0)
    epsilon: float = Field(1.0, gt=0.0)
    pressure_scale: float = Field(10.0, gt=0.0)
    inertia: float = Field(0.5, ge=0.0, le=1.0)
    multipliers: dict[str, dict[str, float]] = Field(default_factory=_default_multipliers)
    parties: list[PartyConfig] = Field(default_factory=_default_parties)
    politicians: list[PoliticianConfig] = Field(default_factory=_default_politicians)

    @field_validator("multipliers")
    @classmethod
    def _multipliers(cls, v):
        unknown = set(v) - set(STRATEGIC_TYPES)
        if unknown:
            raise ValueError(f"unknown strategic types {sorted(unknown)}")
        for stype, table in v.items():
            for name, factor in table.items():
                if name not in POLITICAL_INPUTS:
                    raise ValueError(f"{stype}: unknown input {name!r}")
                if factor < 0:
                    raise ValueError(f"{stype}: multiplier for {name} must be non-negative")
        return v

    @model_validator(mode="after")
    def _roster(self):
        if not self.politicians:
            raise ValueError("politicians must not be empty")
        party_ids = [p.id for p in self.parties]
        if len(set(party_ids)) != len(party_ids):
            raise ValueError("party ids must be unique")
        pol_ids = [p.id for p in self.politicians]
        if len(set(pol_ids)) != len(pol_ids):
            raise ValueError("politician ids must be unique")
        for pol in self.politicians:
            if pol.party not in party_ids:
                raise ValueError(f"politician {pol.id} references unknown party {pol.party!r}")
        for party in self.parties:
            for other in party.similarity:
                if other not in party_ids:
                    raise ValueError(f"party {party.id} similarity references unknown party {other!r}")
            if party.stance is None and not any(p.party == party.id for p in self.politicians):
                raise ValueError(f"party {party.id} has no stance and no members")
        return self


class ProposalConfig(_Section):
    frame: Literal["development", "environment"] = "development"
    institutional_assessment: float = Field(0.6, ge=0.0, le=1.0)
    assessment_inverted: bool = False
    counter_mobilisation_share: float = Field(0.1, ge=0.0, le=1.0)


class SimulationConfig(_Section):
    seed: Optional[int] = Field(None, ge=0)
    engine: EngineConfig = EngineConfig()
    population: PopulationConfig = PopulationConfig()
    network: NetworkConfig = NetworkConfig()
    behaviour: BehaviourConfig = BehaviourConfig()
    influence: InfluenceConfig = InfluenceConfig()
    engo: EngoConfig = EngoConfig()
    media: MediaConfig = MediaConfig()
    politics: PoliticsConfig = PoliticsConfig()
    proposal: ProposalConfig = ProposalConfig()

    @model_validator(mode="after")
    def _cross(self):
        n = self.population.size
        if self.network.target_mean_degree >= n - 1:
            raise ValueError("network.target_mean_degree must be below population.size - 1")
        return self

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form, seed excluded."""
        payload = self.model_dump(mode="json", exclude={"seed"})
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _format_errors(err: ValidationError):
    out = []
    for e in err.errors():
        loc = ".".join(str(p) for p in e["loc"])
        msg = e["msg"]
        if msg.startswith("Value error, "):
            msg = msg[len("Value error, "):]
        out.append((loc or "<root>", msg))
    return out


def coerce(model_cls, obj, prefix=""):
    """Accept a model instance or a mapping; raise ConfigurationError on failure."""
    if isinstance(obj, model_cls):
        return obj
    try:
        return model_cls.model_validate(obj or {})
    except ValidationError as err:
        violations = [(f"{prefix}.{p}" if prefix else p, m) for p, m in _format_errors(err)]
        lines = "; ".join(f"{p}: {m}" for p, m in violations)
        raise ConfigurationError(f"invalid {model_cls.__name__}: {lines}", violations) from None


def validate_dict(data) -> list[tuple[str, str]]:
    """Return every violation in ``data`` as ``(field_path, message)``."""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        return [("<root>", "scenario must be a mapping")]
    try:
        SimulationConfig.model_validate(data)
    except ValidationError as err:
        return _format_errors(err)
    return []


def config_from_dict(data) -> SimulationConfig:
    violations = validate_dict(data)
    if violations:
        lines = "; ".join(f"{p}: {m}" for p, m in violations)
        raise ConfigurationError(f"invalid scenario: {lines}", violations)
    return SimulationConfig.model_validate(data or {})


def read_scenario(path) -> dict:
    """Parse a scenario file into a plain mapping (no validation)."""
    text = Path(path).read_text()
    data = yaml.safe_load(text)
    return {} if data is None else data


def load_config(path) -> SimulationConfig:
    return config_from_dict(read_scenario(path))


def set_path(data: dict, dotted: str, value) -> dict:
    """Return a deep copy of ``data`` with ``dotted`` set to ``value``.

    Missing intermediate sections are created; the result still has to pass
    validation, which is where an unresolvable path is reported.
    """
    out = json.loads(json.dumps(data))
    parts = dotted.split(".")
    node = out
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigurationError(f"parameter path {dotted!r} does not resolve", [(dotted, "not a section")])
    node[parts[-1]] = value
    return out


def resolve_path(dotted: str) -> None:
    """Raise unless ``dotted`` names a field in the scenario schema."""
    model = SimulationConfig
    parts = dotted.split(".")
    for i, part in enumerate(parts):
        fields = getattr(model, "model_fields", None)
        if fields is None:
            # Free-form mapping below this point (e.g. motive tables); accept.
            return
        if part not in fields:
            raise ConfigurationError(
                f"parameter path {dotted!r} does not resolve", [(dotted, f"unknown field {part!r}")]
            )
        annotation = fields[part].annotation
        model = annotation if isinstance(annotation, type) and issubclass(annotation, BaseModel) else None
        if model is None and i < len(parts) - 1:
            return
