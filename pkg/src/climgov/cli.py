"""Command line entry point: ``climgov validate|run|sweep``.

Exit status is 0 on success, 1 when a scenario or sweep spec fails
validation, and 2 on runtime errors (unreadable files, I/O failures).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import yaml

from .config import config_from_dict, read_scenario, validate_dict
from .engine import run
from .errors import ConfigurationError
from .population import write_population_csv
from .reporting import write_outputs
from .sweep import SweepSpec, run_sweep, write_sweep

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2

log = logging.getLogger("climgov")


def _read(path):
    """Parse a scenario; returns (data, exit_code)."""
    try:
        return read_scenario(path), EXIT_OK
    except OSError as e:
        print(f"error: cannot read {path}: {e}", file=sys.stderr)
        return None, EXIT_RUNTIME
    except yaml.YAMLError as e:
        print(f"error: cannot parse {path}: {e}", file=sys.stderr)
        return None, EXIT_INVALID


def _report(violations):
    for path, msg in violations:
        print(f"{path}: {msg}", file=sys.stderr)


def cmd_validate(args):
    data, code = _read(args.config)
    if code:
        return code
    violations = validate_dict(data)
    if violations:
        _report(violations)
        return EXIT_INVALID
    print(f"{args.config}: valid")
    return EXIT_OK


def cmd_run(args):
    data, code = _read(args.config)
    if code:
        return code
    try:
        config = config_from_dict(data)
        summary = run(config, seed=args.seed, workers=args.workers)
    except ConfigurationError as e:
        _report(e.violations or [("<root>", str(e))])
        return EXIT_INVALID
    try:
        trace, summary_path = write_outputs(summary, args.out)
        if args.population_csv:
            write_population_csv(summary.state.population, Path(args.out) / "population.csv")
    except OSError as e:
        print(f"error: cannot write outputs: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    log.info("wrote %s and %s", trace, summary_path)
    print(summary.decision.value)
    return EXIT_OK


def cmd_sweep(args):
    data, code = _read(args.config)
    if code:
        return code
    try:
        spec = SweepSpec.load(args.sweep)
        rows = run_sweep(data, spec, parallelism=args.parallelism)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except yaml.YAMLError as e:
        print(f"error: cannot parse {args.sweep}: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ConfigurationError as e:
        _report(e.violations or [("<root>", str(e))])
        return EXIT_INVALID
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        write_sweep(rows, out / "sweep.csv")
    except OSError as e:
        print(f"error: cannot write outputs: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"{len(rows)} runs -> {out / 'sweep.csv'}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="climgov", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="simulate one scenario")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, required=True, help="master seed (no default by design)")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1, help="threads for per-citizen evaluation")
    p.add_argument("--population-csv", action="store_true", help="also dump the synthetic population")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="replicated parameter sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--sweep", required=True, help="sweep spec file (parameter, values, replicates, base_seed)")
    p.add_argument("--out", required=True)
    p.add_argument("--parallelism", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
