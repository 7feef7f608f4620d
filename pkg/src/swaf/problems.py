"""Optimization problem abstraction and the built-in benchmark catalog.

Fifteen standard test problems: four unconstrained 2-3 dimensional
multimodal functions (GP, BR, H3, SH) and the eleven classic constrained
problems G1-G11. Problems stated as maximization in the literature
(G2, G3, G8) are negated internally so the whole engine minimizes;
``report_value`` restores the published sign convention.

Equality constraints are pre-converted to banded inequalities
|h(x)| - eps_h <= 0 with eps_h = 1e-4.

Objective and constraint callables take the point as a sequence of floats
(the engine passes plain lists; ndarrays work too). User-defined problems
can be loaded from a JSON file (see ``load_problem``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import ConfigurationError, EvaluationError
from .expressions import compile_expression

EPS_H = 1e-4

# Returned instead of a non-finite value at the measure-zero singular points
# of G2 and G8 (division by zero at the box corner); large enough to lose
# every comparison.
SINGULAR_PENALTY = 1e10


@dataclass
class ProblemDef:
    """A box-bounded minimization problem with optional inequality constraints.

    ``objective`` and each entry of ``constraints`` map a point (sequence of
    ``dimension`` floats) to a float; a constraint is satisfied when <= 0.
    ``known_best`` is the published optimum in the problem's reported sign
    convention (see ``maximize``). ``eval_count`` increments by exactly one
    per ``evaluate_raw`` call; instances are not meant to be shared between
    concurrent runs.
    """

    name: str
    dimension: int
    bounds: list
    objective: Callable
    constraints: tuple = ()
    known_best: float | None = None
    maximize: bool = False
    eval_count: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.dimension <= 0:
            raise ConfigurationError(f"{self.name}: dimension must be positive")
        if len(self.bounds) != self.dimension:
            raise ConfigurationError(
                f"{self.name}: {len(self.bounds)} bound pairs for dimension {self.dimension}"
            )
        lower = np.array([b[0] for b in self.bounds], dtype=float)
        upper = np.array([b[1] for b in self.bounds], dtype=float)
        if not (lower < upper).all():
            raise ConfigurationError(f"{self.name}: every bound must satisfy l < u")
        self.lower = lower
        self.upper = upper
        # list mirrors for the scalar hot path
        self.lower_list = lower.tolist()
        self.upper_list = upper.tolist()
        self.span_list = (upper - lower).tolist()
        self.constraints = tuple(self.constraints)

    def evaluate_raw(self, x):
        """Evaluate objective and all constraint functions at x.

        x may lie outside the bounds (boundary mapping happens upstream).
        Returns (f, [g_1 .. g_m]) and bumps the evaluation counter; raises
        EvaluationError carrying x if any value comes back non-finite.
        """
        if len(x) != self.dimension:
            raise ValueError(
                f"{self.name}: point has length {len(x)}, expected {self.dimension}"
            )
        f = self.objective(x)
        total = f
        gs = []
        for g_fn in self.constraints:
            g = g_fn(x)
            gs.append(g)
            total += g
        if not math.isfinite(total):
            # distinguish a genuine non-finite value from summation overflow
            if not math.isfinite(f) or any(not math.isfinite(g) for g in gs):
                raise EvaluationError(f"{self.name}: non-finite evaluation", x=x)
        self.eval_count += 1
        return f, gs

    def report_value(self, f_internal: float) -> float:
        """Convert an internal (minimization) objective to the reported sign."""
        return -f_internal if self.maximize else f_internal

    @property
    def internal_best(self) -> float | None:
        """known_best expressed in the internal minimization convention."""
        if self.known_best is None:
            return None
        return -self.known_best if self.maximize else self.known_best


@dataclass(frozen=True)
class SuccessCriterion:
    """How a run counts as successful: gap mode, tolerance, feasibility gate."""

    mode: str = "relative_gap"  # or "absolute_gap"
    tolerance: float = 0.02
    require_feasible: bool = False

    def __post_init__(self):
        if self.mode not in ("relative_gap", "absolute_gap"):
            raise ConfigurationError(f"unknown success mode {self.mode!r}")
        if self.tolerance <= 0:
            raise ConfigurationError("success tolerance must be positive")


def convert_equality(h: Callable, eps_h: float) -> Callable:
    """Turn an equality constraint h(x) = 0 into g(x) = |h(x)| - eps_h <= 0."""
    if eps_h <= 0:
        raise ValueError(f"eps_h must be positive, got {eps_h}")

    def g(x):
        return abs(h(x)) - eps_h

    return g


# ---------------------------------------------------------------------------
# Unconstrained catalog entries
# ---------------------------------------------------------------------------

def _gp_objective(x):
    x1, x2 = x[0], x[1]
    a = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2
    )
    b = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2
    )
    return a * b


def _br_objective(x):
    x1, x2 = x[0], x[1]
    t = x2 - 5.1 / (4.0 * math.pi**2) * x1 * x1 + 5.0 / math.pi * x1 - 6.0
    return t * t + 10.0 * (1.0 - 1.0 / (8.0 * math.pi)) * math.cos(x1) + 10.0


_H3_A = ((3.0, 10.0, 30.0), (0.1, 10.0, 35.0), (3.0, 10.0, 30.0), (0.1, 10.0, 35.0))
_H3_C = (1.0, 1.2, 3.0, 3.2)
_H3_P = (
    (0.3689, 0.1170, 0.2673),
    (0.4699, 0.4387, 0.7470),
    (0.1091, 0.8732, 0.5547),
    (0.0381, 0.5743, 0.8828),
)


def _h3_objective(x):
    total = 0.0
    for c, a, p in zip(_H3_C, _H3_A, _H3_P):
        d = (
            a[0] * (x[0] - p[0]) ** 2
            + a[1] * (x[1] - p[1]) ** 2
            + a[2] * (x[2] - p[2]) ** 2
        )
        total -= c * math.exp(-d)
    return total


def _sh_objective(x):
    x1, x2 = x[0], x[1]
    s1 = 0.0
    s2 = 0.0
    for j in range(1, 6):
        s1 += j * math.cos((j + 1) * x1 + j)
        s2 += j * math.cos((j + 1) * x2 + j)
    return s1 * s2


def _make_gp():
    return ProblemDef("GP", 2, [(-2.0, 2.0)] * 2, _gp_objective, (), known_best=3.0)


def _make_br():
    return ProblemDef(
        "BR", 2, [(-5.0, 10.0), (0.0, 15.0)], _br_objective, (), known_best=0.397887
    )


def _make_h3():
    return ProblemDef("H3", 3, [(0.0, 1.0)] * 3, _h3_objective, (), known_best=-3.86278)


def _make_sh():
    return ProblemDef("SH", 2, [(-10.0, 10.0)] * 2, _sh_objective, (), known_best=-186.7309)


# ---------------------------------------------------------------------------
# Constrained catalog entries (G1-G11)
# ---------------------------------------------------------------------------

def _g1_objective(x):
    head = 0.0
    squares = 0.0
    for v in x[:4]:
        head += v
        squares += v * v
    tail = 0.0
    for v in x[4:13]:
        tail += v
    return 5.0 * head - 5.0 * squares - tail


def _g1_c1(x): return 2 * x[0] + 2 * x[1] + x[9] + x[10] - 10
def _g1_c2(x): return 2 * x[0] + 2 * x[2] + x[9] + x[11] - 10
def _g1_c3(x): return 2 * x[1] + 2 * x[2] + x[10] + x[11] - 10
def _g1_c4(x): return -8 * x[0] + x[9]
def _g1_c5(x): return -8 * x[1] + x[10]
def _g1_c6(x): return -8 * x[2] + x[11]
def _g1_c7(x): return -2 * x[3] - x[4] + x[9]
def _g1_c8(x): return -2 * x[5] - x[6] + x[10]
def _g1_c9(x): return -2 * x[7] - x[8] + x[11]


def _make_g1():
    bounds = [(0.0, 1.0)] * 9 + [(0.0, 100.0)] * 3 + [(0.0, 1.0)]
    cons = (_g1_c1, _g1_c2, _g1_c3, _g1_c4, _g1_c5, _g1_c6, _g1_c7, _g1_c8, _g1_c9)
    return ProblemDef("G1", 13, bounds, _g1_objective, cons, known_best=-15.0)


def _g2_objective(x):
    # maximization form |sum cos^4 - 2 prod cos^2| / sqrt(sum i*x_i^2), negated
    sum4 = 0.0
    prod2 = 1.0
    wsum = 0.0
    for i, v in enumerate(x):
        c = math.cos(v)
        c2 = c * c
        sum4 += c2 * c2
        prod2 *= c2
        wsum += (i + 1) * v * v
    if wsum <= 0.0:
        return SINGULAR_PENALTY
    return -abs(sum4 - 2.0 * prod2) / math.sqrt(wsum)


def _g2_c1(x):
    prod = 1.0
    for v in x:
        prod *= v
    return 0.75 - prod


def _g2_c2(x):
    return sum(x) - 7.5 * 20


def _make_g2():
    return ProblemDef(
        "G2", 20, [(0.0, 10.0)] * 20, _g2_objective, (_g2_c1, _g2_c2),
        known_best=0.80362, maximize=True,
    )


_G3_SCALE = math.sqrt(10.0) ** 10


def _g3_objective(x):
    prod = 1.0
    for v in x:
        prod *= v
    return -_G3_SCALE * prod


def _g3_h1(x):
    total = 0.0
    for v in x:
        total += v * v
    return total - 1.0


def _make_g3():
    return ProblemDef(
        "G3", 10, [(0.0, 1.0)] * 10, _g3_objective,
        (convert_equality(_g3_h1, EPS_H),),
        known_best=1.0005, maximize=True,
    )


def _g4_objective(x):
    return 5.3578547 * x[2] ** 2 + 0.8356891 * x[0] * x[4] + 37.293239 * x[0] - 40792.141


def _g4_c1(x): return 85.334407 + 0.0056858 * x[1] * x[4] + 0.0006262 * x[0] * x[3] - 0.0022053 * x[2] * x[4] - 92.0
def _g4_c2(x): return -85.334407 - 0.0056858 * x[1] * x[4] - 0.0006262 * x[0] * x[3] + 0.0022053 * x[2] * x[4]
def _g4_c3(x): return 80.51249 + 0.0071317 * x[1] * x[4] + 0.0029955 * x[0] * x[1] + 0.0021813 * x[2] ** 2 - 110.0
def _g4_c4(x): return -80.51249 - 0.0071317 * x[1] * x[4] - 0.0029955 * x[0] * x[1] - 0.0021813 * x[2] ** 2 + 90.0
def _g4_c5(x): return 9.300961 + 0.0047026 * x[2] * x[4] + 0.0012547 * x[0] * x[2] + 0.0019085 * x[2] * x[3] - 25.0
def _g4_c6(x): return -9.300961 - 0.0047026 * x[2] * x[4] - 0.0012547 * x[0] * x[2] - 0.0019085 * x[2] * x[3] + 20.0


def _make_g4():
    bounds = [(78.0, 102.0), (33.0, 45.0), (27.0, 45.0), (27.0, 45.0), (27.0, 45.0)]
    cons = (_g4_c1, _g4_c2, _g4_c3, _g4_c4, _g4_c5, _g4_c6)
    return ProblemDef("G4", 5, bounds, _g4_objective, cons, known_best=-30665.5)


def _g5_objective(x):
    return 3.0 * x[0] + 1e-6 * x[0] ** 3 + 2.0 * x[1] + (2e-6 / 3.0) * x[1] ** 3


def _g5_c1(x): return -x[3] + x[2] - 0.55
def _g5_c2(x): return -x[2] + x[3] - 0.55


def _g5_h1(x):
    return 1000.0 * math.sin(-x[2] - 0.25) + 1000.0 * math.sin(-x[3] - 0.25) + 894.8 - x[0]


def _g5_h2(x):
    return 1000.0 * math.sin(x[2] - 0.25) + 1000.0 * math.sin(x[2] - x[3] - 0.25) + 894.8 - x[1]


def _g5_h3(x):
    return 1000.0 * math.sin(x[3] - 0.25) + 1000.0 * math.sin(x[3] - x[2] - 0.25) + 1294.8


def _make_g5():
    bounds = [(0.0, 1200.0), (0.0, 1200.0), (-0.55, 0.55), (-0.55, 0.55)]
    cons = (
        _g5_c1,
        _g5_c2,
        convert_equality(_g5_h1, EPS_H),
        convert_equality(_g5_h2, EPS_H),
        convert_equality(_g5_h3, EPS_H),
    )
    return ProblemDef("G5", 4, bounds, _g5_objective, cons, known_best=5126.497)


def _g6_objective(x):
    return (x[0] - 10.0) ** 3 + (x[1] - 20.0) ** 3


def _g6_c1(x): return -((x[0] - 5.0) ** 2) - (x[1] - 5.0) ** 2 + 100.0
def _g6_c2(x): return (x[0] - 6.0) ** 2 + (x[1] - 5.0) ** 2 - 82.81


def _make_g6():
    return ProblemDef(
        "G6", 2, [(13.0, 100.0), (0.0, 100.0)], _g6_objective, (_g6_c1, _g6_c2),
        known_best=-6961.81,
    )


def _g7_objective(x):
    return (
        x[0] ** 2 + x[1] ** 2 + x[0] * x[1] - 14 * x[0] - 16 * x[1]
        + (x[2] - 10) ** 2 + 4 * (x[3] - 5) ** 2 + (x[4] - 3) ** 2
        + 2 * (x[5] - 1) ** 2 + 5 * x[6] ** 2 + 7 * (x[7] - 11) ** 2
        + 2 * (x[8] - 10) ** 2 + (x[9] - 7) ** 2 + 45
    )


def _g7_c1(x): return -105 + 4 * x[0] + 5 * x[1] - 3 * x[6] + 9 * x[7]
def _g7_c2(x): return 10 * x[0] - 8 * x[1] - 17 * x[6] + 2 * x[7]
def _g7_c3(x): return -8 * x[0] + 2 * x[1] + 5 * x[8] - 2 * x[9] - 12
def _g7_c4(x): return 3 * (x[0] - 2) ** 2 + 4 * (x[1] - 3) ** 2 + 2 * x[2] ** 2 - 7 * x[3] - 120
def _g7_c5(x): return 5 * x[0] ** 2 + 8 * x[1] + (x[2] - 6) ** 2 - 2 * x[3] - 40
def _g7_c6(x): return x[0] ** 2 + 2 * (x[1] - 2) ** 2 - 2 * x[0] * x[1] + 14 * x[4] - 6 * x[5]
def _g7_c7(x): return 0.5 * (x[0] - 8) ** 2 + 2 * (x[1] - 4) ** 2 + 3 * x[4] ** 2 - x[5] - 30
def _g7_c8(x): return -3 * x[0] + 6 * x[1] + 12 * (x[8] - 8) ** 2 - 7 * x[9]


def _make_g7():
    cons = (_g7_c1, _g7_c2, _g7_c3, _g7_c4, _g7_c5, _g7_c6, _g7_c7, _g7_c8)
    return ProblemDef("G7", 10, [(-10.0, 10.0)] * 10, _g7_objective, cons, known_best=24.306)


def _g8_objective(x):
    x1, x2 = x[0], x[1]
    denom = x1 * x1 * x1 * (x1 + x2)
    if denom == 0.0:
        return SINGULAR_PENALTY
    num = math.sin(2.0 * math.pi * x1) ** 3 * math.sin(2.0 * math.pi * x2)
    return -num / denom


def _g8_c1(x): return x[0] ** 2 - x[1] + 1.0
def _g8_c2(x): return 1.0 - x[0] + (x[1] - 4.0) ** 2


def _make_g8():
    return ProblemDef(
        "G8", 2, [(0.0, 10.0)] * 2, _g8_objective, (_g8_c1, _g8_c2),
        known_best=0.095825, maximize=True,
    )


def _g9_objective(x):
    return (
        (x[0] - 10) ** 2 + 5 * (x[1] - 12) ** 2 + x[2] ** 4 + 3 * (x[3] - 11) ** 2
        + 10 * x[4] ** 6 + 7 * x[5] ** 2 + x[6] ** 4 - 4 * x[5] * x[6]
        - 10 * x[5] - 8 * x[6]
    )


def _g9_c1(x): return 2 * x[0] ** 2 + 3 * x[1] ** 4 + x[2] + 4 * x[3] ** 2 + 5 * x[4] - 127
def _g9_c2(x): return 7 * x[0] + 3 * x[1] + 10 * x[2] ** 2 + x[3] - x[4] - 282
def _g9_c3(x): return 23 * x[0] + x[1] ** 2 + 6 * x[5] ** 2 - 8 * x[6] - 196
def _g9_c4(x): return 4 * x[0] ** 2 + x[1] ** 2 - 3 * x[0] * x[1] + 2 * x[2] ** 2 + 5 * x[5] - 11 * x[6]


def _make_g9():
    cons = (_g9_c1, _g9_c2, _g9_c3, _g9_c4)
    return ProblemDef("G9", 7, [(-10.0, 10.0)] * 7, _g9_objective, cons, known_best=680.630)


def _g10_objective(x):
    return x[0] + x[1] + x[2]


def _g10_c1(x): return -1 + 0.0025 * (x[3] + x[5])
def _g10_c2(x): return -1 + 0.0025 * (x[4] + x[6] - x[3])
def _g10_c3(x): return -1 + 0.01 * (x[7] - x[4])
def _g10_c4(x): return -x[0] * x[5] + 833.33252 * x[3] + 100 * x[0] - 83333.333
def _g10_c5(x): return -x[1] * x[6] + 1250 * x[4] + x[1] * x[3] - 1250 * x[3]
def _g10_c6(x): return -x[2] * x[7] + 1250000 + x[2] * x[4] - 2500 * x[4]


def _make_g10():
    bounds = [(100.0, 10000.0), (1000.0, 10000.0), (1000.0, 10000.0)] + [(10.0, 1000.0)] * 5
    cons = (_g10_c1, _g10_c2, _g10_c3, _g10_c4, _g10_c5, _g10_c6)
    return ProblemDef("G10", 8, bounds, _g10_objective, cons, known_best=7049.248)


def _g11_objective(x):
    return x[0] ** 2 + (x[1] - 1.0) ** 2


def _g11_h1(x):
    return x[1] - x[0] ** 2


def _make_g11():
    return ProblemDef(
        "G11", 2, [(-1.0, 1.0)] * 2, _g11_objective,
        (convert_equality(_g11_h1, EPS_H),),
        known_best=0.7499,
    )


_FACTORIES = {
    "GP": _make_gp,
    "BR": _make_br,
    "H3": _make_h3,
    "SH": _make_sh,
    "G1": _make_g1,
    "G2": _make_g2,
    "G3": _make_g3,
    "G4": _make_g4,
    "G5": _make_g5,
    "G6": _make_g6,
    "G7": _make_g7,
    "G8": _make_g8,
    "G9": _make_g9,
    "G10": _make_g10,
    "G11": _make_g11,
}

BUILTIN_IDS = tuple(_FACTORIES)

CATALOG_ORDER = (
    "GP", "BR", "H3", "SH",
    "G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8", "G9", "G10", "G11",
)


def make_problem(problem_id: str) -> ProblemDef:
    """Build a fresh instance of a built-in problem by ID (e.g. "G1", "GP")."""
    try:
        factory = _FACTORIES[problem_id.upper()]
    except KeyError:
        raise ConfigurationError(
            f"unknown problem {problem_id!r}; built-ins: {', '.join(CATALOG_ORDER)}"
        ) from None
    return factory()


def benchmark_catalog() -> list:
    """Fresh instances of all 15 built-in benchmark problems."""
    return [make_problem(pid) for pid in CATALOG_ORDER]


def default_criterion(problem: ProblemDef) -> SuccessCriterion:
    """The standard success test: 2% relative gap to the known optimum,
    feasibility required when the problem has constraints. Falls back to an
    absolute gap of 1e-3 for optima at zero."""
    if problem.known_best is not None and problem.known_best == 0.0:
        return SuccessCriterion("absolute_gap", 1e-3, bool(problem.constraints))
    return SuccessCriterion("relative_gap", 0.02, bool(problem.constraints))


# ---------------------------------------------------------------------------
# Declarative problem files
# ---------------------------------------------------------------------------

def problem_from_dict(spec: dict) -> ProblemDef:
    """Build a problem from a declarative mapping.

    Either ``{"builtin": "G1"}`` or a full definition::

        {
          "name": "mine", "dimension": 2, "bounds": [[-5, 5], [-5, 5]],
          "objective": "x[0]**2 + x[1]**2",
          "inequalities": ["x[0] + x[1] - 1"],
          "equalities": ["x[0] - x[1]"],
          "epsilon_h": 1e-4, "known_best": 0.0, "maximize": false
        }

    Expression strings support arithmetic, x[i] indexing, and common math
    functions; equalities are converted to banded inequalities.
    """
    if "builtin" in spec:
        return make_problem(str(spec["builtin"]))
    try:
        name = str(spec["name"])
        dimension = int(spec["dimension"])
        bounds = [(float(l), float(u)) for l, u in spec["bounds"]]
        objective_src = str(spec["objective"])
    except KeyError as exc:
        raise ConfigurationError(f"problem spec missing required key {exc}") from None

    objective = compile_expression(objective_src, dimension)
    cons = [compile_expression(src, dimension) for src in spec.get("inequalities", [])]
    eps_h = float(spec.get("epsilon_h", EPS_H))
    for src in spec.get("equalities", []):
        cons.append(convert_equality(compile_expression(src, dimension), eps_h))

    known_best = spec.get("known_best")
    problem = ProblemDef(
        name,
        dimension,
        bounds,
        objective,
        tuple(cons),
        known_best=None if known_best is None else float(known_best),
        maximize=bool(spec.get("maximize", False)),
    )
    # Catch malformed expressions now rather than mid-run.
    probe = [(l + u) / 2.0 for l, u in bounds]
    try:
        problem.evaluate_raw(probe)
    except (ArithmeticError, EvaluationError) as exc:
        raise ConfigurationError(
            f"{name}: expressions fail at the box midpoint ({exc})"
        ) from exc
    problem.eval_count = 0
    return problem


def load_problem(source) -> ProblemDef:
    """Resolve a problem from a built-in ID, a spec dict, or a JSON file path."""
    if isinstance(source, dict):
        return problem_from_dict(source)
    text = str(source)
    if text.upper() in _FACTORIES:
        return make_problem(text)
    if text.endswith(".json"):
        with open(text, "r", encoding="utf-8") as fh:
            return problem_from_dict(json.load(fh))
    raise ConfigurationError(
        f"cannot resolve problem {source!r}: not a built-in ID or .json file"
    )
