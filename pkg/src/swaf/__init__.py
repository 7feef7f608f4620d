"""Swarm agent framework for numerical optimization.

Agents generate and test candidate points with particle-swarm and
differential-evolution rules over a shared blackboard, evaluate them
through composable formulation rules (periodic boundary mapping,
feasibility-first comparison, adaptive constraint relaxing), and can
deploy rules adaptively through a small winner-take-all network.
"""

from .core import ConfigurationError, EvaluationError, GoodnessPair, SwafError
from .engine import Blackboard, KnowledgePoint, RunResult, SwarmConfig, run
from .bench import ExperimentConfig, RunStats, run_experiment
from .problems import ProblemDef, SuccessCriterion, benchmark_catalog, load_problem, make_problem

__all__ = [
    "Blackboard",
    "ConfigurationError",
    "EvaluationError",
    "ExperimentConfig",
    "GoodnessPair",
    "KnowledgePoint",
    "ProblemDef",
    "RunResult",
    "RunStats",
    "SuccessCriterion",
    "SwafError",
    "SwarmConfig",
    "benchmark_catalog",
    "load_problem",
    "make_problem",
    "run",
    "run_experiment",
]

__version__ = "0.1.0"
