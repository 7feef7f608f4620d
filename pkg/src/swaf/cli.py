"""Command-line benchmark runner.

    swaf run --problem G1 --rule deps:CR=0.9 --agents 70 --cycles 2000 \
             --runs 100 --seed 42 --formulation acr --out results.csv

Every flag can also come from a JSON config file (--config run.json) whose
keys match the long flag names; explicit command-line flags win. Relative
output paths are resolved against $SWAF_OUT_DIR when it is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bench import ExperimentConfig, report, run_experiment, write_report, write_trace_csv
from .core import ConfigurationError, EvaluationError, SwafError

_DEFAULTS = {
    "problem": None,
    "rule": "deps:CR=0.9",
    "agents": 70,
    "cycles": 2000,
    "runs": 100,
    "seed": 0,
    "formulation": "bch",
    "out": None,
    "trace": None,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swaf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run a benchmark experiment")
    runp.add_argument("--problem", help='built-in ID ("G1".."G11", "GP", "BR", "H3", "SH") or problem .json file')
    runp.add_argument("--rule", help="rule spec, e.g. ps | de:CR=0.9 | deps:CR=0.1 | rc:[...] | nn:[...]")
    runp.add_argument("--agents", type=int, help="number of agents N")
    runp.add_argument("--cycles", type=int, help="learning cycles T")
    runp.add_argument("--runs", type=int, help="independent runs per experiment")
    runp.add_argument("--seed", type=int, help="master seed; run i uses (seed, i)")
    runp.add_argument("--formulation", help="bch (default) or acr[:options]")
    runp.add_argument("--out", help="write results CSV here")
    runp.add_argument("--trace", help="write per-cycle mean incumbent trace CSV here")
    runp.add_argument("--config", help="JSON file with defaults for the flags above")
    runp.add_argument("--quiet", action="store_true", help="suppress the summary table")
    return parser


def _merge_settings(args: argparse.Namespace) -> dict:
    settings = dict(_DEFAULTS)
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            file_conf = json.load(fh)
        unknown = set(file_conf) - set(_DEFAULTS)
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        settings.update(file_conf)
    for key in _DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if settings["problem"] is None:
        raise ConfigurationError("no problem given (--problem or config file)")
    return settings


def _resolve_out(path: str | None) -> str | None:
    if path is None:
        return None
    base = os.environ.get("SWAF_OUT_DIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _cmd_run(args: argparse.Namespace) -> int:
    settings = _merge_settings(args)
    config = ExperimentConfig(
        problem=settings["problem"],
        rule_spec=settings["rule"],
        formulation=settings["formulation"],
        n_agents=int(settings["agents"]),
        cycles=int(settings["cycles"]),
        runs=int(settings["runs"]),
        seed=int(settings["seed"]),
        collect_traces=settings["trace"] is not None,
    )
    stats = run_experiment(config)
    out = _resolve_out(settings["out"])
    trace = _resolve_out(settings["trace"])
    if out:
        write_report([stats], out)
    if trace:
        write_trace_csv([stats], trace)
    if not args.quiet:
        sys.stdout.write(report([stats], fmt="table"))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        parser.error(f"unknown command {args.command!r}")
    except ConfigurationError as exc:
        print(f"swaf: configuration error: {exc}", file=sys.stderr)
        return 2
    except EvaluationError as exc:
        print(f"swaf: evaluation error: {exc}", file=sys.stderr)
        return 1
    except (OSError, SwafError, ValueError) as exc:
        print(f"swaf: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
