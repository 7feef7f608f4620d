"""Experiment harness: multi-run statistics, success accounting, reporting.

An experiment repeats independent seeded runs of one (problem, swarm
configuration) pair and aggregates them. Per-run seeds derive from the
master seed as SeedSequence([master, run_index]), so any single run can be
reproduced in isolation and results do not depend on execution order.
Runs where the final point never entered the feasible region are excluded
from the objective statistics but counted in the feasibility rate.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .core import ConfigurationError
from .engine import RunResult, SwarmConfig, run
from .problems import (
    CATALOG_ORDER,
    ProblemDef,
    SuccessCriterion,
    default_criterion,
    load_problem,
)

CSV_COLUMNS = (
    "problem",
    "rule",
    "formulation",
    "agents",
    "cycles",
    "runs",
    "mean",
    "best",
    "worst",
    "stddev",
    "success_rate",
    "mean_te",
    "feasibility_rate",
)


@dataclass
class ExperimentConfig:
    """One experiment: a problem, a swarm setup, and a run count."""

    problem: str | dict
    rule_spec: str = "deps:CR=0.9"
    formulation: str = "bch"
    n_agents: int = 70
    cycles: int = 2000
    runs: int = 100
    seed: int = 0
    criterion: SuccessCriterion | None = None
    collect_traces: bool = False

    def __post_init__(self):
        if self.runs < 1:
            raise ConfigurationError("an experiment needs at least one run")


@dataclass
class RunStats:
    """Aggregated results of an experiment.

    Objective statistics are in the problem's reported sign convention and,
    for constrained problems, cover only runs that ended feasible. mean_te
    is the mean evaluation count at first success among successful runs,
    absent when no run succeeded.
    """

    problem: str
    rule: str
    formulation: str
    agents: int
    cycles: int
    runs: int
    mean: float | None
    best: float | None
    worst: float | None
    stddev: float | None
    success_rate: float
    mean_te: float | None
    feasibility_rate: float
    per_run: list = field(default_factory=list, repr=False)
    mean_trace: np.ndarray | None = field(default=None, repr=False)


def success_check(result: RunResult, problem: ProblemDef, criterion: SuccessCriterion):
    """Judge one run against the success criterion.

    Success is decided on the final mapped solution: the objective gap to
    the known optimum must be within tolerance and, where required, the
    final point must be exactly feasible. Returns (success, te) where te is
    the evaluation count when the criterion first held along the incumbent
    history (cycle granularity), or None on failure.
    """
    target = problem.internal_best
    if criterion.mode == "relative_gap":
        if target is None:
            raise ConfigurationError(
                f"{problem.name}: relative success criterion needs a known optimum"
            )
        tol = criterion.tolerance * abs(target)
    else:
        if target is None:
            raise ConfigurationError(
                f"{problem.name}: success criterion needs a known optimum"
            )
        tol = criterion.tolerance

    final = result.final_goodness
    ok = abs(final.f_obj - target) <= tol
    if criterion.require_feasible:
        ok = ok and final.f_con == 0.0
    if not ok:
        return False, None

    held = np.abs(result.history_obj - target) <= tol
    if criterion.require_feasible:
        held &= result.history_con == 0.0
    t_first = int(np.argmax(held))  # final index is True, so argmax is valid
    return True, t_first * result.n_agents


def _aggregate(config, problem, results, criterion) -> RunStats:
    constrained = bool(problem.constraints)
    finals = np.array([r.final_goodness.f_obj for r in results])
    feasible = np.array([r.final_goodness.f_con == 0.0 for r in results])
    eligible = feasible if constrained else np.ones(len(results), dtype=bool)

    per_run = []
    te_values = []
    n_success = 0
    for r, feas in zip(results, feasible):
        success, te = success_check(r, problem, criterion)
        if success:
            n_success += 1
            te_values.append(te)
        per_run.append(
            {
                "objective": problem.report_value(r.final_goodness.f_obj),
                "violation": r.final_goodness.f_con,
                "feasible": bool(feas),
                "success": success,
                "te": te,
            }
        )

    if eligible.any():
        chosen = finals[eligible]
        mean = problem.report_value(float(chosen.mean()))
        best = problem.report_value(float(chosen.min()))
        worst = problem.report_value(float(chosen.max()))
        stddev = float(chosen.std())
    else:
        mean = best = worst = stddev = None

    mean_trace = None
    if config.collect_traces:
        traces = np.stack([r.history_obj for r in results])
        mean_trace = np.array([problem.report_value(v) for v in traces.mean(axis=0)])

    return RunStats(
        problem=problem.name,
        rule=config.rule_spec,
        formulation=config.formulation,
        agents=config.n_agents,
        cycles=config.cycles,
        runs=config.runs,
        mean=mean,
        best=best,
        worst=worst,
        stddev=stddev,
        success_rate=n_success / len(results),
        mean_te=(sum(te_values) / len(te_values)) if te_values else None,
        feasibility_rate=float(feasible.mean()) if constrained else 1.0,
        per_run=per_run,
        mean_trace=mean_trace,
    )


def run_experiment(config: ExperimentConfig) -> RunStats:
    """Execute all runs of an experiment and aggregate the statistics.

    Each run gets a fresh problem instance and the stream derived from
    (master seed, run index); aggregation is over run-index order, so the
    outcome is deterministic.
    """
    reference = load_problem(config.problem)
    criterion = config.criterion or default_criterion(reference)
    results = []
    for i in range(config.runs):
        problem = load_problem(config.problem)
        swarm = SwarmConfig(
            n_agents=config.n_agents,
            max_cycles=config.cycles,
            rule_spec=config.rule_spec,
            formulation=config.formulation,
            seed=[config.seed, i],
        )
        results.append(run(problem, swarm))
    return _aggregate(config, reference, results, criterion)


# ---------------------------------------------------------------------------
# Reporting
# ---------------------------------------------------------------------------

def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _row(stats: RunStats) -> list:
    return [
        stats.problem,
        stats.rule,
        stats.formulation,
        stats.agents,
        stats.cycles,
        stats.runs,
        stats.mean,
        stats.best,
        stats.worst,
        stats.stddev,
        stats.success_rate,
        stats.mean_te,
        stats.feasibility_rate,
    ]


def _catalog_rank(name: str) -> tuple:
    try:
        return (0, CATALOG_ORDER.index(name))
    except ValueError:
        return (1, 0)


def report(stats_list, fmt: str = "csv") -> str:
    """Serialize experiment statistics as CSV or a fixed-width text table.

    Rows follow the canonical catalog order; CSV floats keep full precision
    so a round-trip parse recovers the values exactly.
    """
    ordered = sorted(stats_list, key=lambda s: (_catalog_rank(s.problem), s.rule))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for stats in ordered:
            writer.writerow([_cell(v) for v in _row(stats)])
        return buf.getvalue()
    if fmt == "table":
        headers = ("problem", "rule", "form", "mean", "best", "worst", "stddev",
                   "succ", "mean_te", "feas")
        rows = [headers]
        for s in ordered:
            rows.append((
                s.problem,
                s.rule,
                s.formulation,
                _fmt_num(s.mean),
                _fmt_num(s.best),
                _fmt_num(s.worst),
                _fmt_num(s.stddev),
                f"{s.success_rate:.2f}",
                _fmt_num(s.mean_te, "{:.0f}"),
                f"{s.feasibility_rate:.2f}",
            ))
        widths = [max(len(str(r[c])) for r in rows) for c in range(len(headers))]
        lines = []
        for r in rows:
            lines.append("  ".join(str(v).ljust(w) for v, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"
    raise ConfigurationError(f"unknown report format {fmt!r}")


def _fmt_num(value, pattern="{:.6g}") -> str:
    return "" if value is None else pattern.format(value)


def parse_report_csv(text: str) -> list:
    """Read a report CSV back into a list of row dicts (floats restored)."""
    rows = []
    reader = csv.DictReader(io.StringIO(text))
    for raw in reader:
        row = {}
        for key, value in raw.items():
            if key in ("problem", "rule", "formulation"):
                row[key] = value
            elif value == "":
                row[key] = None
            elif key in ("agents", "cycles", "runs"):
                row[key] = int(value)
            else:
                row[key] = float(value)
        rows.append(row)
    return rows


def write_report(stats_list, path, fmt: str = "csv") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report(stats_list, fmt))


def write_trace_csv(stats_list, path) -> None:
    """Emit per-cycle mean incumbent objectives, one column per experiment."""
    traced = [s for s in stats_list if s.mean_trace is not None]
    if not traced:
        raise ConfigurationError("no traces were collected (set collect_traces)")
    length = max(len(s.mean_trace) for s in traced)
    with open(path, "w", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["cycle"] + [f"{s.problem}|{s.rule}|{s.formulation}" for s in traced])
        for t in range(length):
            row = [t]
            for s in traced:
                row.append(repr(float(s.mean_trace[t])) if t < len(s.mean_trace) else "")
            writer.writerow(row)
