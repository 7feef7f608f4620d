"""Shared numeric primitives: goodness pairs, RNG stream helpers, error types."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class SwafError(Exception):
    """Base class for errors raised by this package."""


class ConfigurationError(SwafError):
    """A run, experiment, or rule configuration is invalid."""


class EvaluationError(SwafError):
    """An objective or constraint evaluation produced a non-finite result.

    Carries the offending point so a failed run can be diagnosed.
    """

    def __init__(self, message: str, x=None):
        super().__init__(message)
        self.x = None if x is None else np.asarray(x, dtype=float).copy()


class GoodnessPair(NamedTuple):
    """Evaluation of a point: objective value and aggregate constraint violation.

    f_con is always >= 0 and is exactly 0 only for feasible points (after
    equality constraints have been converted to banded inequalities).
    Ordering between pairs is defined in :mod:`swaf.formulation`, not here.
    """

    f_obj: float
    f_con: float


# One stream per run, never shared between concurrent contexts.  PCG64 is
# seedable and gives independent streams for distinct seed material.

def make_rng(seed) -> np.random.Generator:
    """Create a deterministic random stream from a seed (int or SeedSequence)."""
    return np.random.Generator(np.random.PCG64(seed))


def spawn_run_rng(master_seed: int, run_index: int) -> np.random.Generator:
    """Derive the stream for one run of a multi-run experiment.

    The per-run seed is SeedSequence([master_seed, run_index]), so every run
    is reproducible in isolation and independent of execution order.
    """
    return make_rng(np.random.SeedSequence([int(master_seed), int(run_index)]))


def uniform_real(rng: np.random.Generator) -> float:
    """Draw one uniform real in [0, 1), advancing the stream."""
    return float(rng.random())


def uniform_int(rng: np.random.Generator, z_l: int, z_u: int) -> int:
    """Draw a uniform integer in [z_l, z_u] inclusive.

    Raises ValueError if z_l > z_u.
    """
    if z_l > z_u:
        raise ValueError(f"empty integer range [{z_l}, {z_u}]")
    return int(rng.integers(z_l, z_u + 1))
