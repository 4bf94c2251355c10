"""Synthetic citizens and the demographic-homophily social network."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.special import ndtr, ndtri
from scipy.stats import truncnorm

from .config import (
    ALIGNMENTS,
    CHANNELS,
    DECISION_KINDS,
    HOMOPHILY_ATTRIBUTES,
    MOA_FACTORS,
    MOTIVES,
    NetworkConfig,
    PopulationConfig,
    TruncNormal,
    coerce,
)
from .errors import ConfigurationError, ContractError, UnknownIdError

ALIGNED, NEUTRAL, OPPOSED = range(3)


def truncated_normal(rng, spec: TruncNormal, size):
    """Draw ``size`` values from ``spec``; a zero sd returns the mean exactly."""
    if spec.sd == 0.0 or spec.lo == spec.hi:
        return np.full(size, float(spec.mean))
    a = (spec.lo - spec.mean) / spec.sd
    b = (spec.hi - spec.mean) / spec.sd
    if a <= 0.0 <= b:
        # mean inside the bounds: inverse-CDF sampling keeps full precision
        lo, hi = ndtr(a), ndtr(b)
        z = ndtri(lo + rng.random(size) * (hi - lo))
        out = spec.mean + spec.sd * z
    else:
        out = truncnorm.rvs(a, b, loc=spec.mean, scale=spec.sd, size=size, random_state=rng)
    return np.clip(out, spec.lo, spec.hi)


@dataclass
class MoaProfile:
    time_availability: float
    system_responsiveness: float
    political_self_efficacy: float
    civic_engagement: float

    def __post_init__(self):
        for name in MOA_FACTORS:
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ContractError(f"MOA factor {name}={v} outside [0, 1]")

    def as_array(self):
        return np.array([getattr(self, n) for n in MOA_FACTORS], dtype=float)


@dataclass
class CitizenProfile:
    """Read-only snapshot of one citizen, assembled from :class:`Population`."""

    id: int
    age_band: int
    gender: int
    education: int
    political_orientation: float
    motive_weights: dict
    moa_profile: MoaProfile
    media_exposure: dict
    activist_alignment: str
    engo_member: bool = False
    aware_of_action: bool = False
    aware_of_disruptive: bool = False
    history: dict = field(default_factory=dict)


@dataclass
class Population:
    """Column store of citizen attributes indexed by citizen id.

    The engine works on whole columns at once; indexing with ``pop[i]``
    returns a :class:`CitizenProfile` copy for inspection.
    """

    age_band: np.ndarray
    gender: np.ndarray
    education: np.ndarray
    orientation_level: np.ndarray
    orientation_levels: int
    weights: np.ndarray  # (N, len(MOTIVES))
    moa: np.ndarray  # (N, len(MOA_FACTORS))
    exposure: np.ndarray  # (N, len(CHANNELS))
    alignment: np.ndarray  # codes into ALIGNMENTS
    member: np.ndarray = None
    aware_action: np.ndarray = None
    aware_disruptive: np.ndarray = None
    # kind -> list of per-step boolean participation vectors
    history: dict = None

    def __post_init__(self):
        n = len(self.age_band)
        if self.member is None:
            self.member = np.zeros(n, dtype=bool)
        if self.aware_action is None:
            self.aware_action = np.zeros(n, dtype=bool)
        if self.aware_disruptive is None:
            self.aware_disruptive = np.zeros(n, dtype=bool)
        if self.history is None:
            self.history = {k: [] for k in DECISION_KINDS}

    def __len__(self):
        return len(self.age_band)

    @property
    def ids(self):
        return np.arange(len(self))

    @property
    def political_orientation(self):
        return self.orientation_level / (self.orientation_levels - 1)

    def __getitem__(self, i):
        if not 0 <= i < len(self):
            raise UnknownIdError(i)
        hist = {
            t: {k: bool(self.history[k][t][i]) for k in DECISION_KINDS}
            for t in range(len(self.history[DECISION_KINDS[0]]))
        }
        return CitizenProfile(
            id=int(i),
            age_band=int(self.age_band[i]),
            gender=int(self.gender[i]),
            education=int(self.education[i]),
            political_orientation=float(self.political_orientation[i]),
            motive_weights={m: float(self.weights[i, j]) for j, m in enumerate(MOTIVES)},
            moa_profile=MoaProfile(*(float(x) for x in self.moa[i])),
            media_exposure={c: float(self.exposure[i, j]) for j, c in enumerate(CHANNELS)},
            activist_alignment=ALIGNMENTS[self.alignment[i]],
            engo_member=bool(self.member[i]),
            aware_of_action=bool(self.aware_action[i]),
            aware_of_disruptive=bool(self.aware_disruptive[i]),
            history=hist,
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def copy(self):
        return Population(
            age_band=self.age_band.copy(),
            gender=self.gender.copy(),
            education=self.education.copy(),
            orientation_level=self.orientation_level.copy(),
            orientation_levels=self.orientation_levels,
            weights=self.weights.copy(),
            moa=self.moa.copy(),
            exposure=self.exposure.copy(),
            alignment=self.alignment.copy(),
            member=self.member.copy(),
            aware_action=self.aware_action.copy(),
            aware_disruptive=self.aware_disruptive.copy(),
            history={k: [h.copy() for h in v] for k, v in self.history.items()},
        )


def generate_population(spec, rng) -> Population:
    """Sample ``spec.size`` citizens.

    Draw order is fixed (demographics, motive weights, MOA, exposure,
    alignment), so the result depends only on ``spec`` and the generator's
    seed.
    """
    spec = coerce(PopulationConfig, spec, "population")
    n = spec.size

    def categorical(shares):
        return rng.choice(len(shares), size=n, p=np.asarray(shares) / np.sum(shares)).astype(np.int64)

    age = categorical(spec.age_band_shares)
    gender = categorical(spec.gender_shares)
    education = categorical(spec.education_shares)
    orientation = categorical(spec.orientation_shares)
    weights = np.column_stack([truncated_normal(rng, spec.motive_weights[m], n) for m in MOTIVES])
    moa = np.column_stack([truncated_normal(rng, spec.moa[f], n) for f in MOA_FACTORS])
    exposure = np.column_stack([truncated_normal(rng, spec.exposure[c], n) for c in CHANNELS])
    alignment = categorical([spec.alignment_shares[a] for a in ALIGNMENTS])
    return Population(
        age_band=age,
        gender=gender,
        education=education,
        orientation_level=orientation,
        orientation_levels=len(spec.orientation_shares),
        weights=weights,
        moa=moa,
        exposure=exposure,
        alignment=alignment,
    )


POPULATION_CSV_COLUMNS = (
    ["id", "age_band", "gender", "education", "political_orientation"]
    + [f"w_{m}" for m in MOTIVES]
    + list(MOA_FACTORS)
    + [f"p_{c}" for c in CHANNELS]
    + ["activist_alignment", "engo_member"]
)


def write_population_csv(population: Population, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(POPULATION_CSV_COLUMNS)
        orient = population.political_orientation
        for i in range(len(population)):
            writer.writerow(
                [i, int(population.age_band[i]), int(population.gender[i]), int(population.education[i]),
                 repr(float(orient[i]))]
                + [repr(float(x)) for x in population.weights[i]]
                + [repr(float(x)) for x in population.moa[i]]
                + [repr(float(x)) for x in population.exposure[i]]
                + [ALIGNMENTS[population.alignment[i]], int(population.member[i])]
            )


class SocialNetwork:
    """Undirected simple graph over citizen ids ``0..n-1``."""

    def __init__(self, n, edges=()):
        edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        edges = edges.reshape(-1, 2)
        if len(edges):
            if (edges < 0).any() or (edges >= n).any():
                raise UnknownIdError("edge endpoint outside the node set")
            if (edges[:, 0] == edges[:, 1]).any():
                raise ContractError("self-loops are not allowed")
            edges = np.sort(edges, axis=1)
            edges = edges[np.lexsort((edges[:, 1], edges[:, 0]))]
            if (np.diff(edges, axis=0) == 0).all(axis=1).any():
                raise ContractError("duplicate edge")
        self.n = int(n)
        self.edges = edges
        self.base_prob = None
        data = np.ones(2 * len(edges), dtype=np.float64)
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        self.adjacency = sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
        self.degree = np.diff(self.adjacency.indptr)

    def __len__(self):
        return self.n

    @property
    def mean_degree(self):
        return 2.0 * len(self.edges) / self.n if self.n else 0.0

    def edge_set(self):
        return {(int(a), int(b)) for a, b in self.edges}

    def neighbor_array(self, i):
        return self.adjacency.indices[self.adjacency.indptr[i]:self.adjacency.indptr[i + 1]]

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edge_set())
        return g


def neighbors(network: SocialNetwork, i) -> set:
    if not 0 <= int(i) < network.n:
        raise UnknownIdError(f"unknown citizen id {i}")
    return {int(j) for j in network.neighbor_array(int(i))}


def _attribute_columns(population: Population):
    return {
        "age": population.age_band,
        "gender": population.gender,
        "education": population.education,
        "political_orientation": population.orientation_level,
    }


# gender is nominal: only an exact match counts
_ORDINAL = {"age": True, "gender": False, "education": True, "political_orientation": True}


def similarity_kernel(population: Population, i, j, penalties) -> float:
    """Product of per-attribute kernels for one pair."""
    cols = _attribute_columns(population)
    k = 1.0
    for attr in HOMOPHILY_ATTRIBUTES:
        gap = abs(int(cols[attr][i]) - int(cols[attr][j]))
        match = gap <= 1 if _ORDINAL[attr] else gap == 0
        if not match:
            k *= penalties[attr]
    return k


def link_probability(population, i, j, base_prob, penalties) -> float:
    return base_prob * similarity_kernel(population, i, j, penalties)


def _profile_kernel(population, penalties):
    """Citizen profile codes and the kernel between every pair of profiles."""
    cols = _attribute_columns(population)
    stacked = np.column_stack([cols[a] for a in HOMOPHILY_ATTRIBUTES])
    profiles, codes = np.unique(stacked, axis=0, return_inverse=True)
    table = np.ones((len(profiles), len(profiles)))
    for j, attr in enumerate(HOMOPHILY_ATTRIBUTES):
        gap = np.abs(profiles[:, None, j] - profiles[None, :, j])
        match = gap <= 1 if _ORDINAL[attr] else gap == 0
        table *= np.where(match, 1.0, penalties[attr])
    return codes.reshape(-1), table


def build_homophily_network(population: Population, params, rng, block=512) -> SocialNetwork:
    """Sample the homophily graph.

    Pair ``(i, j)`` is linked with probability ``base_prob * K(i, j)`` where
    ``K`` multiplies one kernel per attribute (1 on a match, the attribute's
    penalty otherwise).  ``base_prob`` is chosen so the expected mean degree
    equals ``params.target_mean_degree``.
    """
    params = coerce(NetworkConfig, params, "network")
    n = len(population)
    if n < 1:
        raise ContractError("population must be non-empty")
    if params.target_mean_degree >= n - 1:
        raise ConfigurationError(
            "target_mean_degree must be below N - 1",
            [("network.target_mean_degree", f"{params.target_mean_degree} >= {n - 1}")],
        )
    codes, table = _profile_kernel(population, params.dissimilarity_penalty)
    counts = np.bincount(codes, minlength=len(table)).astype(float)
    # sum over unordered pairs i < j
    kernel_sum = (counts @ table @ counts - counts @ np.diag(table)) / 2.0
    if kernel_sum <= 0.0:
        raise ConfigurationError(
            "every pair has zero link probability",
            [("network.dissimilarity_penalty", "penalties annihilate all pairs")],
        )
    base_prob = params.target_mean_degree * n / (2.0 * kernel_sum)
    if base_prob > 1.0:
        raise ConfigurationError(
            "target_mean_degree is unattainable under the configured penalties",
            [("network.target_mean_degree", f"requires base_prob {base_prob:.3f} > 1")],
        )

    prob_table = base_prob * table
    idx = np.arange(n)
    found = []
    for start in range(0, n, block):
        rows = idx[start:start + block]
        u = rng.random((len(rows), n))
        hit = (u < prob_table[codes[rows]][:, codes]) & (idx[None, :] > rows[:, None])
        r, c = np.nonzero(hit)
        found.append(np.column_stack([rows[r], c]))
    edges = np.concatenate(found) if found else np.empty((0, 2), dtype=np.int64)
    net = SocialNetwork(n, edges)
    net.base_prob = base_prob
    return net
