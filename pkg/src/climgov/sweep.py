"""Replicated one-parameter sweeps for sensitivity analysis."""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import yaml

from .config import MOTIVES, config_from_dict, resolve_path, set_path
from .engine import run
from .errors import ConfigurationError
from .streams import derived_seed

SWEEP_COLUMNS = [
    "parameter", "value", "value_index", "replicate", "seed", "decision",
    "cumulative_pressure", "final_participation_rate", "members",
] + [f"mean_{m}" for m in MOTIVES]


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple
    replicates: int = 1
    base_seed: int = 0

    def __post_init__(self):
        problems = []
        if not self.values:
            problems.append(("sweep.values", "grid must not be empty"))
        if self.replicates < 1:
            problems.append(("sweep.replicates", "must be at least 1"))
        if self.base_seed < 0:
            problems.append(("sweep.base_seed", "must be non-negative"))
        if problems:
            raise ConfigurationError("invalid sweep spec", problems)
        resolve_path(self.parameter)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigurationError("sweep spec must be a mapping", [("sweep", "not a mapping")])
        unknown = set(data) - {"parameter", "values", "replicates", "base_seed"}
        if unknown:
            raise ConfigurationError("unknown sweep keys", [(f"sweep.{k}", "unknown key") for k in sorted(unknown)])
        if "parameter" not in data or "values" not in data:
            raise ConfigurationError("sweep spec needs parameter and values",
                                     [("sweep.parameter", "required"), ("sweep.values", "required")])
        return cls(
            parameter=str(data["parameter"]),
            values=tuple(data["values"]),
            replicates=int(data.get("replicates", 1)),
            base_seed=int(data.get("base_seed", 0)),
        )

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(yaml.safe_load(fh))

    def seed_for(self, value_index, replicate):
        return derived_seed(self.base_seed, value_index, replicate)


def summary_row(summary) -> dict:
    state = summary.state
    last = state.steps[-1]
    row = {
        "seed": summary.seed,
        "decision": summary.decision.value,
        "cumulative_pressure": state.engo.cumulative_pressure,
        "final_participation_rate": float(state.mobilised.sum()) / len(state.population),
        "members": last.members,
    }
    row.update({f"mean_{m}": last.mean_weights[m] for m in MOTIVES})
    return row


def _run_job(job):
    data, seed, meta = job
    row = dict(meta)
    row.update(summary_row(run(config_from_dict(data), seed=seed)))
    return row


def build_jobs(base_data, spec):
    jobs = []
    for vi, value in enumerate(spec.values):
        data = set_path(base_data, spec.parameter, value)
        config_from_dict(data)  # fail before any run starts
        for r in range(spec.replicates):
            meta = {"parameter": spec.parameter, "value": value, "value_index": vi, "replicate": r}
            jobs.append((data, spec.seed_for(vi, r), meta))
    return jobs


def run_sweep(base_data, spec, parallelism=1) -> list:
    """Rows ordered by (value_index, replicate) whatever the parallelism."""
    jobs = build_jobs(base_data, spec)
    if parallelism <= 1:
        rows = [_run_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            rows = list(pool.map(_run_job, jobs, chunksize=max(1, len(jobs) // (4 * parallelism))))
    return sorted(rows, key=lambda r: (r["value_index"], r["replicate"]))


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return v


def write_sweep(rows, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in SWEEP_COLUMNS])
