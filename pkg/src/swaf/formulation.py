"""Problem-formulation rules: boundary mapping, goodness, comparison, relaxing.

These rules shape the landscape every generate-and-test rule sees:

* periodic boundary mapping evaluates out-of-box points at their periodic
  image without moving them,
* goodness bundles the objective with the summed constraint violation,
* the basic comparator orders pairs feasibility-first,
* the adaptive relaxing rule clamps violations at a threshold that is
  steered toward zero over the run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import GoodnessPair

# Relaxing-controller defaults (golden-ratio shrink/grow factors).
DEFAULT_R_L = 0.25
DEFAULT_R_U = 0.75
DEFAULT_BETA_L = 0.618
DEFAULT_BETA_U = 1.382
DEFAULT_BETA_F = 0.618


def _pbh_map_list(xs: list, lower: list, upper: list, span: list) -> list:
    """Periodic mapping over plain float lists; returns xs itself when the
    point is already inside the box."""
    out = xs
    for d, v in enumerate(xs):
        l = lower[d]
        u = upper[d]
        if v < l:
            if out is xs:
                out = list(xs)
            # a % s over positive a stays in [0, s), so the image is in the box
            out[d] = u - (l - v) % span[d]
        elif v > u:
            if out is xs:
                out = list(xs)
            out[d] = l + (v - u) % span[d]
    return out


def pbh_map(x: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Map a point to its periodic image inside the box [lower, upper].

    In-bounds coordinates pass through unchanged; out-of-bounds coordinates
    wrap with a non-negative modulus so the image always lands in the box.
    The input array is never modified.
    """
    span = upper - lower
    z = _pbh_map_list(list(map(float, x)), lower.tolist(), upper.tolist(), span.tolist())
    return np.array(z, dtype=float)


def goodness(problem, x: np.ndarray) -> GoodnessPair:
    """Evaluate a point: objective at its boundary-mapped image, plus the
    summed positive parts of the constraint values (unit weights).

    Costs exactly one raw evaluation.
    """
    z = _pbh_map_list(x.tolist(), problem.lower_list, problem.upper_list, problem.span_list)
    f, gs = problem.evaluate_raw(z)
    f_con = 0.0
    for g in gs:
        if g > 0.0:
            f_con += g
    return GoodnessPair(f, f_con)


def bch_compare(a: GoodnessPair, b: GoodnessPair) -> bool:
    """Feasibility-first ordering: True iff a is better than or equal to b.

    a <= b holds when a violates less, or both violate equally and a's
    objective is no larger. Induces a total preorder.
    """
    if a.f_con < b.f_con:
        return True
    return a.f_con == b.f_con and a.f_obj <= b.f_obj


def acr_apply(gp: GoodnessPair, epsilon_r: float) -> GoodnessPair:
    """Clamp the violation at the relax threshold before comparison.

    Points with f_con <= epsilon_r become mutually "quasi feasible" and
    compare on objective alone. epsilon_r = 0 is the identity.
    """
    if gp.f_con >= epsilon_r:
        return gp
    return GoodnessPair(gp.f_obj, epsilon_r)


class Comparator:
    """The active ordering used for all point comparisons in a run.

    epsilon_r = 0 gives the plain feasibility-first ordering; a positive
    epsilon_r applies the relax clamp to both sides first. The engine owns
    one instance per run and updates epsilon_r at cycle boundaries.
    """

    __slots__ = ("epsilon_r",)

    def __init__(self, epsilon_r: float = 0.0):
        self.epsilon_r = epsilon_r

    def key(self, gp: GoodnessPair) -> tuple:
        c = gp.f_con
        e = self.epsilon_r
        return (c if c > e else e, gp.f_obj)

    def leq(self, a: GoodnessPair, b: GoodnessPair) -> bool:
        """True iff a compares better-or-equal to b."""
        return self.key(a) <= self.key(b)

    def strictly_better(self, a: GoodnessPair, b: GoodnessPair) -> bool:
        return self.key(a) < self.key(b)


@dataclass(frozen=True)
class AcrParams:
    """Controller parameters for the adaptive relax threshold.

    t_th is the cycle index from which the forcing branch may engage
    (defaults to half the run length, set by the engine).
    """

    r_l: float = DEFAULT_R_L
    r_u: float = DEFAULT_R_U
    beta_l: float = DEFAULT_BETA_L
    beta_u: float = DEFAULT_BETA_U
    beta_f: float = DEFAULT_BETA_F
    t_th: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.r_l < self.r_u <= 1.0:
            raise ValueError(f"need 0 <= r_l < r_u <= 1, got ({self.r_l}, {self.r_u})")
        if not 0.0 < self.beta_l < 1.0 < self.beta_u < 1.0 / self.beta_l:
            raise ValueError(
                f"need 0 < beta_l < 1 < beta_u < 1/beta_l, got ({self.beta_l}, {self.beta_u})"
            )
        if not 0.0 < self.beta_f < 1.0:
            raise ValueError(f"need 0 < beta_f < 1, got {self.beta_f}")
        if self.t_th < 0.0:
            raise ValueError(f"t_th must be >= 0, got {self.t_th}")


@dataclass
class AcrState:
    """Current relax threshold plus the population statistics that steer it."""

    epsilon_r: float
    n_eps: int = 0
    eps_min: float = 0.0
    eps_max: float = 0.0


def initial_acr_state(published: Sequence[GoodnessPair]) -> AcrState:
    """Start the threshold at the worst violation in the initial population."""
    if not published:
        raise ValueError("cannot initialize relax threshold from an empty set")
    eps_max = max(gp.f_con for gp in published)
    eps_min = min(gp.f_con for gp in published)
    return AcrState(epsilon_r=eps_max, n_eps=0, eps_min=eps_min, eps_max=eps_max)


def acr_update(
    state: AcrState, params: AcrParams, t: int, published: Sequence[GoodnessPair]
) -> AcrState:
    """One controller step, run once per cycle after all agents have acted.

    Recomputes the violation statistics of the published set against the
    current threshold, then applies the first matching sub-rule: force the
    threshold down after t_th while no published point is feasible,
    otherwise shrink/grow it to keep the outside-threshold ratio between
    r_l and r_u. Ties at the ratio bounds match inclusively.
    """
    if not published:
        raise ValueError("relax threshold update requires a nonempty published set")
    eps = state.epsilon_r
    n_k = len(published)
    n_eps = 0
    eps_min = eps_max = published[0].f_con
    for gp in published:
        c = gp.f_con
        if c > eps:
            n_eps += 1
        if c < eps_min:
            eps_min = c
        elif c > eps_max:
            eps_max = c

    if t >= params.t_th and eps_min > 0.0:
        eps = params.beta_f * eps
    elif n_eps / n_k <= params.r_l:
        eps = params.beta_l * eps
    elif n_eps / n_k >= params.r_u:
        eps = params.beta_u * eps
    return AcrState(epsilon_r=eps, n_eps=n_eps, eps_min=eps_min, eps_max=eps_max)
