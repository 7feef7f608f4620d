"""Swarm engine: blackboard environment, agent population, learning cycles.

A run is strictly sequential: in every learning cycle each agent in index
order generates exactly one candidate point with its active rule, the
point is evaluated through the formulation rules, and the test rule
publishes improvements to the shared blackboard immediately, so later
agents in the same cycle already see earlier agents' updates. The
incumbent (best published point) is maintained after every action;
comparisons use the feasibility-first ordering, optionally behind the
adaptive relax clamp whose threshold is re-tuned once per cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .core import ConfigurationError, GoodnessPair, make_rng
from .deployer import DeployerNetwork, DeployerParams, deploy_step, fire, init_network
from .formulation import (
    AcrParams,
    AcrState,
    Comparator,
    acr_update,
    goodness,
    initial_acr_state,
    pbh_map,
)
from .rules import PsMemory, RuleSetup, deps_select, parse_rule_spec, rc_select, test_update


class KnowledgePoint(NamedTuple):
    """A candidate point together with its evaluated goodness.

    The coordinates are kept as generated (possibly outside the box); the
    goodness is always the evaluation at the point's periodic image.
    Treated as immutable: the array is never modified after creation.
    """

    x: np.ndarray
    goodness: GoodnessPair


@dataclass
class SwarmConfig:
    """Everything that determines a run apart from the problem itself.

    seed is any PCG64 seed material: an int, or a list of ints such as
    [master_seed, run_index] as used by multi-run experiments.
    """

    n_agents: int = 70
    max_cycles: int = 2000
    rule_spec: str = "deps:CR=0.9"
    formulation: str = "bch"
    seed: object = 0

    def __post_init__(self):
        if self.n_agents < 2:
            raise ConfigurationError("need at least 2 agents (the DE pool)")
        if self.max_cycles < 0:
            raise ConfigurationError("max_cycles must be >= 0")


@dataclass
class AgentState:
    """Per-agent memory: positions, published best, optional deployer network."""

    id: int
    mem: PsMemory
    deployer: DeployerNetwork | None = None
    active_rule: str = ""


@dataclass
class Blackboard:
    """Central shared repository: published bests, incumbent, relax threshold.

    Also carries the run-wide registry of generate-and-test rules and the
    active comparator, so one object holds everything agents may consult.
    """

    problem: object
    comparator: Comparator
    published: list
    incumbent: KnowledgePoint = None
    incumbent_idx: int = -1
    acr_state: AcrState | None = None
    acr_params: AcrParams | None = None
    rule_setup: RuleSetup = None
    deployer_params: DeployerParams | None = None

    def publish(self, agent_id: int, kp: KnowledgePoint) -> None:
        """Replace an agent's published best and maintain the incumbent.

        Valid only for replacements that compare better-or-equal under the
        current comparator (the test rule guarantees this), which makes the
        O(1) incumbent update exact within a cycle.
        """
        self.published[agent_id] = kp
        if agent_id == self.incumbent_idx:
            self.incumbent = kp
            return
        cmp = self.comparator
        k_new = cmp.key(kp.goodness)
        k_inc = cmp.key(self.incumbent.goodness)
        if k_new < k_inc or (k_new == k_inc and agent_id < self.incumbent_idx):
            self.incumbent = kp
            self.incumbent_idx = agent_id


def best_of(published: Sequence[KnowledgePoint], comparator: Comparator) -> KnowledgePoint:
    """The minimum published point under the comparator; ties go to the
    lowest agent index."""
    idx, kp = _best_index(published, comparator)
    return kp


def _best_index(published: Sequence[KnowledgePoint], comparator: Comparator):
    if not published:
        raise ValueError("no published points")
    best_i = 0
    best_key = comparator.key(published[0].goodness)
    for i in range(1, len(published)):
        key = comparator.key(published[i].goodness)
        if key < best_key:
            best_key = key
            best_i = i
    return best_i, published[best_i]


def _parse_formulation(text: str, max_cycles: int):
    """Return (use_acr, AcrParams or None) from a formulation spec string."""
    lowered = text.strip().lower()
    if lowered == "bch":
        return False, None
    if not lowered.startswith("acr"):
        raise ConfigurationError(f"unknown formulation {text!r} (expected bch or acr)")
    opts = {}
    _, _, tail = text.partition(":")
    if tail:
        for part in tail.split(","):
            key, eq, val = part.partition("=")
            if not eq:
                raise ConfigurationError(f"malformed formulation option {part!r}")
            opts[key.strip().upper()] = float(val)
    params = AcrParams(
        r_l=opts.pop("RL", 0.25),
        r_u=opts.pop("RU", 0.75),
        beta_l=opts.pop("BL", 0.618),
        beta_u=opts.pop("BU", 1.382),
        beta_f=opts.pop("BF", 0.618),
        t_th=opts.pop("TTH", 0.5) * max_cycles,
    )
    if opts:
        raise ConfigurationError(f"unknown formulation options {sorted(opts)}")
    return True, params


def init_swarm(problem, config: SwarmConfig, rng):
    """Build the initial agent population and blackboard.

    Every agent's position is sampled uniformly inside the box and
    evaluated; the previous position coincides with the current one (zero
    initial velocity) and the personal best is the initial point itself.
    """
    setup = config.rule_spec
    if isinstance(setup, str):
        setup = parse_rule_spec(setup)

    dparams = None
    if setup.mode == "nn":
        opts = dict(setup.options or {})
        dparams = DeployerParams(
            n_k=len(setup.rules),
            n_i=int(opts.pop("NI", 3)),
            n_j=int(opts.pop("NJ", 20)),
            t_l=int(opts.pop("TL", 100)),
            r_w=opts.pop("RW", 0.2),
        )
        if opts:
            raise ConfigurationError(f"unknown deployer options {sorted(opts)}")

    use_acr, acr_params = _parse_formulation(config.formulation, config.max_cycles)

    comparator = Comparator(0.0)
    span = problem.upper - problem.lower
    agents = []
    published = []
    for i in range(config.n_agents):
        x0 = problem.lower + rng.random(problem.dimension) * span
        kp = KnowledgePoint(x0, goodness(problem, x0))
        mem = PsMemory(o_ps=x0, x_ps=x0, p=kp)
        net = None
        rule_id = setup.rules[0].rule_id
        if dparams is not None:
            net = init_network(dparams, rng)
            rule_id = setup.rules[fire(net, rng)].rule_id
        agents.append(AgentState(id=i, mem=mem, deployer=net, active_rule=rule_id))
        published.append(kp)

    blackboard = Blackboard(
        problem=problem,
        comparator=comparator,
        published=published,
        rule_setup=setup,
        deployer_params=dparams,
    )
    if use_acr:
        blackboard.acr_params = acr_params
        blackboard.acr_state = initial_acr_state([kp.goodness for kp in published])
        comparator.epsilon_r = blackboard.acr_state.epsilon_r
    blackboard.incumbent_idx, blackboard.incumbent = _best_index(published, comparator)
    return agents, blackboard


def _rank_fractions(agents, blackboard) -> list:
    """Each agent's rank of its published best as a fraction (0 = best),
    under the active comparator, ties by agent index."""
    cmp = blackboard.comparator
    published = blackboard.published
    n = len(agents)
    order = sorted(range(n), key=lambda i: (cmp.key(published[i].goodness), i))
    fractions = [0.0] * n
    for pos, i in enumerate(order):
        fractions[i] = pos / n
    return fractions


def step_cycle(agents, blackboard: Blackboard, t: int, rng) -> None:
    """Run one learning cycle: every agent generates and tests one point.

    Rank fractions for deployer punishment are snapshotted at the start of
    a boundary cycle; the relax threshold is re-tuned after all agents
    have acted, and the incumbent recomputed if the threshold moved.
    """
    setup = blackboard.rule_setup
    mode = setup.mode
    rules = setup.rules
    rank_fractions = None
    if mode == "nn" and any(a.deployer.cycles_remaining <= 0 for a in agents):
        rank_fractions = _rank_fractions(agents, blackboard)

    problem = blackboard.problem
    comparator = blackboard.comparator
    for agent in agents:
        if mode == "fixed":
            rule = rules[0]
        elif mode == "deps":
            rule = rules[deps_select(t)]
        elif mode == "rc":
            rule = rules[rc_select(setup.weights, rng)]
        else:
            rf = rank_fractions[agent.id] if rank_fractions is not None else 0.0
            rule = rules[deploy_step(agent.deployer, blackboard.deployer_params, rf, rng)]
        agent.active_rule = rule.rule_id

        x_new = rule.generate(agent.mem, blackboard, rng)
        kp = KnowledgePoint(x_new, goodness(problem, x_new))
        test_update(agent.mem, agent.id, kp, rule.advances_position, comparator, blackboard)

    if blackboard.acr_state is not None:
        state = acr_update(
            blackboard.acr_state,
            blackboard.acr_params,
            t,
            [kp.goodness for kp in blackboard.published],
        )
        moved = state.epsilon_r != blackboard.acr_state.epsilon_r
        blackboard.acr_state = state
        if moved:
            comparator.epsilon_r = state.epsilon_r
            blackboard.incumbent_idx, blackboard.incumbent = _best_index(
                blackboard.published, comparator
            )


@dataclass
class RunResult:
    """Outcome of one run: mapped solution, bookkeeping, per-cycle history.

    ``final_x`` is the incumbent's periodic image inside the box.
    ``history_obj``/``history_con`` hold the incumbent goodness after
    initialization (index 0) and after each cycle t (index t), in the
    internal minimization sign convention. ``evaluations`` counts only the
    generate-and-test evaluations (one per agent per cycle); the
    initialization evaluations are reported separately.
    """

    final_x: np.ndarray
    final_goodness: GoodnessPair
    evaluations: int
    init_evaluations: int
    history_obj: np.ndarray
    history_con: np.ndarray
    n_agents: int
    n_cycles: int
    seed: int
    eps_history: np.ndarray | None = None


def run(problem, config: SwarmConfig) -> RunResult:
    """Execute a full run of ``config.max_cycles`` learning cycles."""
    rng = make_rng(config.seed)
    evals_before = problem.eval_count
    agents, blackboard = init_swarm(problem, config, rng)
    init_evals = problem.eval_count - evals_before

    cycles = config.max_cycles
    hist_obj = np.empty(cycles + 1)
    hist_con = np.empty(cycles + 1)
    eps_hist = np.empty(cycles + 1) if blackboard.acr_state is not None else None
    hist_obj[0] = blackboard.incumbent.goodness.f_obj
    hist_con[0] = blackboard.incumbent.goodness.f_con
    if eps_hist is not None:
        eps_hist[0] = blackboard.acr_state.epsilon_r

    evals_at_cycles = problem.eval_count
    for t in range(1, cycles + 1):
        step_cycle(agents, blackboard, t, rng)
        g = blackboard.incumbent.goodness
        hist_obj[t] = g.f_obj
        hist_con[t] = g.f_con
        if eps_hist is not None:
            eps_hist[t] = blackboard.acr_state.epsilon_r

    incumbent = blackboard.incumbent
    return RunResult(
        final_x=pbh_map(incumbent.x, problem.lower, problem.upper),
        final_goodness=incumbent.goodness,
        evaluations=problem.eval_count - evals_at_cycles,
        init_evaluations=init_evals,
        history_obj=hist_obj,
        history_con=hist_con,
        n_agents=config.n_agents,
        n_cycles=cycles,
        seed=config.seed,
        eps_history=eps_hist,
    )
