"""Generate-and-test rules and their symbolic-level combinators.

Two point generators are provided: a constricted particle-swarm update and
a best-anchored differential-evolution mutation/crossover, both drawing on
an agent's own memory plus the published bests on the blackboard. The
shared test rule updates the agent's memory and publishes improvements.

Macro deployment of several rules is either determinate (alternating by
cycle parity) or random (weighted selection per activation); the adaptive
network deployment lives in :mod:`swaf.deployer`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Sequence, TYPE_CHECKING

import numpy as np

from .core import ConfigurationError

if TYPE_CHECKING:  # pragma: no cover
    from .engine import Blackboard, KnowledgePoint


def constriction_factor(c1: float, c2: float) -> float:
    """Damping coefficient 2 / (sqrt(phi*(phi-4)) + phi - 2), phi = c1 + c2 > 4."""
    phi = c1 + c2
    if phi <= 4.0:
        raise ValueError(f"c1 + c2 must exceed 4, got {phi}")
    return 2.0 / (math.sqrt(phi * (phi - 4.0)) + phi - 2.0)


@dataclass(frozen=True)
class PsParams:
    """Attraction weights for the particle-swarm rule; cf is derived."""

    c1: float = 2.05
    c2: float = 2.05
    cf: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "cf", constriction_factor(self.c1, self.c2))


@dataclass(frozen=True)
class DeParams:
    """Crossover rate, scale factor, and difference-vector count for DE."""

    cr: float
    sf: float = 0.5
    n_v: int = 2

    def __post_init__(self):
        if not 0.0 <= self.cr <= 1.0:
            raise ValueError(f"crossover rate must be in [0, 1], got {self.cr}")
        if not 0.0 < self.sf < 1.2:
            raise ValueError(f"scale factor must be in (0, 1.2), got {self.sf}")
        if self.n_v < 1:
            raise ValueError(f"need at least one difference vector, got {self.n_v}")


@dataclass
class PsMemory:
    """An agent's declarative memory: previous/current positions (private)
    and its published personal best."""

    o_ps: np.ndarray
    x_ps: np.ndarray
    p: "KnowledgePoint"


def ps_generate(mem: PsMemory, g: "KnowledgePoint", params: PsParams, rng) -> np.ndarray:
    """Constricted velocity update toward the personal best and the incumbent.

    One fresh uniform draw per attraction term, shared across dimensions,
    so each move is directionally coherent (this is what tracks the thin
    feasible filaments of the equality-constrained problems; per-dimension
    draws measurably fail there). The implied velocity is the position
    change of the last two particle states.
    """
    x = mem.x_ps
    u = rng.random(2)
    v = x - mem.o_ps
    return x + params.cf * (
        v + (params.c1 * u[0]) * (mem.p.x - x) + (params.c2 * u[1]) * (g.x - x)
    )


def de_generate(
    p_self: "KnowledgePoint",
    g: "KnowledgePoint",
    pool: Sequence["KnowledgePoint"],
    params: DeParams,
    rng,
) -> np.ndarray:
    """Best-anchored differential mutation with binomial crossover.

    Starts from a copy of the agent's personal best; each dimension passing
    the crossover draw (and always the forced dimension DR) is replaced by
    the incumbent coordinate plus the scaled sum of difference vectors of
    published bests drawn with replacement.
    """
    n = len(pool)
    if n < 2:
        raise ConfigurationError(f"differential mutation needs >= 2 published points, got {n}")
    d = p_self.x.shape[0]
    dr = int(rng.integers(1, d + 1)) - 1
    picks = rng.integers(1, n + 1, size=2 * params.n_v).tolist()
    delta = pool[picks[0] - 1].x - pool[picks[1] - 1].x
    for k in range(1, params.n_v):
        delta += pool[picks[2 * k] - 1].x - pool[picks[2 * k + 1] - 1].x
    mask = rng.random(d) < params.cr
    mask[dr] = True
    return np.where(mask, g.x + params.sf * delta, p_self.x)


def test_update(
    mem: PsMemory,
    agent_id: int,
    new_point: "KnowledgePoint",
    advance_position: bool,
    comparator,
    blackboard: "Blackboard",
) -> None:
    """Shared test rule: absorb an evaluated point into memory.

    Particle-style rules shift their position pair unconditionally; the
    personal best is replaced only when the new point compares
    better-or-equal under the active comparator, and any replacement is
    published to the blackboard immediately.
    """
    if advance_position:
        mem.o_ps = mem.x_ps
        mem.x_ps = new_point.x
    if comparator.leq(new_point.goodness, mem.p.goodness):
        mem.p = new_point
        blackboard.publish(agent_id, new_point)


class PsRule:
    """Particle-swarm generate rule bound to its parameters."""

    advances_position = True

    def __init__(self, params: PsParams | None = None, rule_id: str = "ps"):
        self.params = params or PsParams()
        self.rule_id = rule_id

    def generate(self, mem: PsMemory, blackboard: "Blackboard", rng) -> np.ndarray:
        return ps_generate(mem, blackboard.incumbent, self.params, rng)

    def __repr__(self):
        return f"PsRule({self.rule_id})"


class DeRule:
    """Differential-evolution generate rule bound to its parameters."""

    advances_position = False

    def __init__(self, params: DeParams, rule_id: str | None = None):
        self.params = params
        self.rule_id = rule_id or f"de:CR={params.cr}"

    def generate(self, mem: PsMemory, blackboard: "Blackboard", rng) -> np.ndarray:
        return de_generate(mem.p, blackboard.incumbent, blackboard.published, self.params, rng)

    def __repr__(self):
        return f"DeRule({self.rule_id})"


def deps_select(t: int) -> int:
    """Determinate combination: rule slot 1 (DE) on odd cycles, slot 0 (PS)
    on even cycles, counting cycles from 1."""
    return t % 2


def rc_select(weights: Sequence[float], rng) -> int:
    """Random combination: pick slot k with probability weights[k]/sum."""
    total = 0.0
    for w in weights:
        if w < 0:
            raise ValueError(f"negative rule weight {w}")
        total += w
    if total <= 0.0:
        raise ValueError("rule weights sum to zero")
    u = rng.random() * total
    acc = 0.0
    for k, w in enumerate(weights):
        acc += w
        if u < acc:
            return k
    return len(weights) - 1  # u == total cannot happen; guard for fp slack


# ---------------------------------------------------------------------------
# Rule configuration strings
# ---------------------------------------------------------------------------
#
#   ps                      single particle-swarm rule
#   de:CR=0.9               single DE rule (CR required; SF=, NV= optional)
#   deps:CR=0.9             DE/PS alternation sharing one personal best
#   rc:[ps,de:CR=0.5]       random combination, equal weights
#   rc:[de:CR=0.2*3,ps*1]   weighted random combination
#   nn:[cr-sweep]           network deployment over the listed rules;
#                           options after ';' e.g. nn:[cr-sweep];TL=100;RW=0.2
#
# "cr-sweep" inside a list expands to eleven DE rules with CR = 0.0 .. 1.0.

@dataclass
class RuleSetup:
    """Parsed deployment configuration for one run."""

    mode: str  # "fixed" | "deps" | "rc" | "nn"
    rules: list
    weights: list | None = None
    options: dict | None = None
    spec: str = ""


def _parse_single(item: str):
    item = item.strip()
    head, _, tail = item.partition(":")
    head = head.strip().lower()
    params = {}
    if tail:
        for part in tail.split(","):
            key, eq, val = part.partition("=")
            if not eq:
                raise ConfigurationError(f"malformed rule parameter {part!r} in {item!r}")
            params[key.strip().upper()] = float(val)
    if head == "ps":
        c1 = params.pop("C1", 2.05)
        c2 = params.pop("C2", 2.05)
        if params:
            raise ConfigurationError(f"unknown parameters {sorted(params)} for ps rule")
        return PsRule(PsParams(c1=c1, c2=c2), rule_id=item)
    if head == "de":
        if "CR" not in params:
            raise ConfigurationError(f"de rule needs CR, e.g. de:CR=0.9 (got {item!r})")
        de = DeParams(
            cr=params.pop("CR"),
            sf=params.pop("SF", 0.5),
            n_v=int(params.pop("NV", 2)),
        )
        if params:
            raise ConfigurationError(f"unknown parameters {sorted(params)} for de rule")
        return DeRule(de, rule_id=item)
    raise ConfigurationError(f"unknown rule {item!r} (expected ps or de:CR=...)")


def _split_list(body: str) -> list:
    if not (body.startswith("[") and body.endswith("]")):
        raise ConfigurationError(f"expected a [rule,rule,...] list, got {body!r}")
    inner = body[1:-1].strip()
    if not inner:
        raise ConfigurationError("empty rule list")
    return [part.strip() for part in inner.split(",") if part.strip()]


def cr_sweep(count: int = 11) -> list:
    """DE rules with crossover rates 0.0, 0.1, ... spread over [0, 1]."""
    return [DeRule(DeParams(cr=round(k / (count - 1), 10))) for k in range(count)]


def _expand_items(items: list) -> tuple:
    rules, weights = [], []
    for item in items:
        body, star, wtext = item.rpartition("*")
        if star and re.fullmatch(r"[0-9.eE+-]+", wtext or ""):
            weight = float(wtext)
            item = body.strip()
        else:
            weight = 1.0
        if item.lower() == "cr-sweep":
            for rule in cr_sweep():
                rules.append(rule)
                weights.append(weight)
        else:
            rules.append(_parse_single(item))
            weights.append(weight)
    return rules, weights


def parse_rule_spec(spec: str) -> RuleSetup:
    """Parse a rule configuration string into a RuleSetup."""
    text = spec.strip()
    lowered = text.lower()
    if lowered.startswith("rc:") or lowered.startswith("nn:"):
        mode = lowered[:2]
        rest = text[3:]
        body, *optparts = rest.split(";")
        # crossover parameters contain commas inside the brackets, so options
        # ride after ';' (e.g. nn:[cr-sweep];TL=100;RW=0.2;NI=3;NJ=20)
        options = {}
        for part in optparts:
            key, eq, val = part.partition("=")
            if not eq:
                raise ConfigurationError(f"malformed option {part!r} in {spec!r}")
            options[key.strip().upper()] = float(val)
        rules, weights = _expand_items(_split_list(body.strip()))
        if mode == "rc":
            if sum(weights) <= 0:
                raise ConfigurationError(f"all rule weights are zero in {spec!r}")
            return RuleSetup("rc", rules, weights=weights, options=options, spec=text)
        return RuleSetup("nn", rules, options=options, spec=text)
    if lowered.startswith("deps"):
        _, _, tail = text.partition(":")
        cr = 0.9
        options = {}
        if tail:
            for part in tail.split(","):
                key, eq, val = part.partition("=")
                if not eq:
                    raise ConfigurationError(f"malformed parameter {part!r} in {spec!r}")
                options[key.strip().upper()] = float(val)
            if "CR" in options:
                cr = options.pop("CR")
        ps = PsRule(PsParams(c1=options.pop("C1", 2.05), c2=options.pop("C2", 2.05)))
        de = DeRule(
            DeParams(cr=cr, sf=options.pop("SF", 0.5), n_v=int(options.pop("NV", 2)))
        )
        if options:
            raise ConfigurationError(f"unknown parameters {sorted(options)} in {spec!r}")
        # slot 0 fires on even cycles, slot 1 on odd (see deps_select)
        return RuleSetup("deps", [ps, de], spec=text)
    return RuleSetup("fixed", [_parse_single(text)], spec=text)
