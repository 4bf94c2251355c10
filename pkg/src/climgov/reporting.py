"""Trace CSV and run-summary JSON.

Trace columns, in order::

    timestep, joined, action_participants, disruptive_participants, members,
    engo_exists, cumulative_pressure, intensity, actions, protest_size,
    disruptive_size, aware_action, aware_disruptive, signal_exposed,
    news_frame, news_channels, news_exposed, mean_<motive> for each motive

Floats are written with ``repr`` so the files round-trip exactly.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .config import MOTIVES, POLITICAL_INPUTS

TRACE_COLUMNS = [
    "timestep", "joined", "action_participants", "disruptive_participants", "members",
    "engo_exists", "cumulative_pressure", "intensity", "actions", "protest_size",
    "disruptive_size", "aware_action", "aware_disruptive", "signal_exposed",
    "news_frame", "news_channels", "news_exposed",
] + [f"mean_{m}" for m in MOTIVES]

TRACE_FILENAME = "trace.csv"
SUMMARY_FILENAME = "summary.json"


def _cell(v):
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, float):
        return repr(v)
    return v


def trace_rows(steps):
    for rec in steps:
        row = {c: getattr(rec, c) for c in TRACE_COLUMNS if not c.startswith("mean_")}
        row.update({f"mean_{m}": rec.mean_weights[m] for m in MOTIVES})
        yield [_cell(row[c]) for c in TRACE_COLUMNS]


def write_trace(steps, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        writer.writerows(trace_rows(steps))


def summary_dict(summary) -> dict:
    state = summary.state
    n = len(state.population)
    engo = state.engo
    last = state.steps[-1] if state.steps else None
    b = summary.bundle
    return {
        "seed": summary.seed,
        "config_digest": summary.config_digest,
        "horizon": state.horizon,
        "population_size": n,
        "decision": summary.outcome.decision.value,
        "votes": {
            d: sum(1 for r in summary.outcome.records if r.final.value == d)
            for d in ("accept", "reject", "revise")
        },
        "politicians": [
            {
                "id": r.id,
                "party": r.party,
                "weights": {i: r.weights[i] for i in POLITICAL_INPUTS},
                "accept_components": {i: r.components.accept[i] for i in POLITICAL_INPUTS},
                "reject_components": {i: r.components.reject[i] for i in POLITICAL_INPUTS},
                "u_accept": r.u_accept,
                "u_reject": r.u_reject,
                "stage1": r.preliminary.value,
                "stage2": r.final.value,
            }
            for r in summary.outcome.records
        ],
        "signals": {
            "institutional_assessment": b.institutional_assessment,
            "n_support": b.n_support,
            "n_oppose": b.n_oppose,
            "n_pro_env": b.n_pro_env,
            "n_pro_econ": b.n_pro_econ,
            "pressure": b.pressure,
            "pressure_direction": b.pressure_direction,
            "salience_society": b.salience_society,
            "salience_media": b.salience_media,
        },
        "cumulative_pressure": engo.cumulative_pressure,
        "engo": {
            "exists": engo.exists,
            "founded_at": engo.founded_at,
            "members": len(engo.members),
            "actions": [
                {"timestep": a.timestep, "type": a.type.value, "intensity": a.intensity,
                 "protest_size": a.protest_size}
                for a in engo.action_log
            ],
        },
        "final_participation_rate": float(state.mobilised.sum()) / n,
        "participation": [
            {"timestep": s.timestep, "join_engo": s.joined, "action_protest": s.action_participants,
             "disruptive_protest": s.disruptive_participants, "members": s.members}
            for s in state.steps
        ],
        "mean_weights": [dict(timestep=s.timestep, **s.mean_weights) for s in state.steps],
        "final_mean_weights": dict(last.mean_weights) if last else {},
        "news": {
            "items": state.counters["news_items"],
            "pro_environment": state.counters["pro_environment"],
            "pro_economic": state.counters["pro_economic"],
        },
        "rng": dict(state.lineage),
    }


def summary_json(summary) -> str:
    return json.dumps(summary_dict(summary), indent=2, sort_keys=True) + "\n"


def write_outputs(summary, out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trace_path = out / TRACE_FILENAME
    summary_path = out / SUMMARY_FILENAME
    write_trace(summary.state.steps, trace_path)
    summary_path.write_text(summary_json(summary))
    return trace_path, summary_path
