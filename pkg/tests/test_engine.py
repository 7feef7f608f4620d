import numpy as np
import pytest

from swaf.core import ConfigurationError, GoodnessPair, make_rng
from swaf.engine import (
    KnowledgePoint,
    SwarmConfig,
    best_of,
    init_swarm,
    run,
    step_cycle,
)
from swaf.formulation import Comparator
from swaf.problems import make_problem


def small_config(**overrides):
    base = dict(n_agents=10, max_cycles=40, rule_spec="deps:CR=0.9", seed=5)
    base.update(overrides)
    return SwarmConfig(**base)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        SwarmConfig(n_agents=1)
    with pytest.raises(ConfigurationError):
        SwarmConfig(max_cycles=-1)


def test_init_population_inside_box():
    problem = make_problem("G6")
    agents, board = init_swarm(problem, small_config(), make_rng(3))
    for agent in agents:
        assert (agent.mem.x_ps >= problem.lower).all()
        assert (agent.mem.x_ps <= problem.upper).all()
        assert (agent.mem.o_ps == agent.mem.x_ps).all()
        assert agent.mem.p is board.published[agent.id]


def test_init_incumbent_is_best_published():
    problem = make_problem("G6")
    agents, board = init_swarm(problem, small_config(), make_rng(3))
    for kp in board.published:
        assert board.comparator.leq(board.incumbent.goodness, kp.goodness)


def test_init_same_seed_same_population():
    problem_a = make_problem("GP")
    problem_b = make_problem("GP")
    agents_a, _ = init_swarm(problem_a, small_config(), make_rng(77))
    agents_b, _ = init_swarm(problem_b, small_config(), make_rng(77))
    for a, b in zip(agents_a, agents_b):
        assert (a.mem.x_ps == b.mem.x_ps).all()


def test_step_cycle_costs_one_evaluation_per_agent():
    problem = make_problem("G7")
    config = small_config(n_agents=7)
    rng = make_rng(1)
    agents, board = init_swarm(problem, config, rng)
    after_init = problem.eval_count
    assert after_init == 7
    for t in range(1, 6):
        step_cycle(agents, board, t, rng)
        assert problem.eval_count - after_init == 7 * t


def test_deps_runs_de_on_odd_and_ps_on_even_cycles():
    problem = make_problem("GP")
    rng = make_rng(2)
    agents, board = init_swarm(problem, small_config(rule_spec="deps:CR=0.5"), rng)
    step_cycle(agents, board, 1, rng)
    assert all(a.active_rule.startswith("de") for a in agents)
    step_cycle(agents, board, 2, rng)
    assert all(a.active_rule.startswith("ps") for a in agents)
    step_cycle(agents, board, 3, rng)
    assert all(a.active_rule.startswith("de") for a in agents)


def test_incumbent_never_worsens_under_bch():
    problem = make_problem("G7")
    rng = make_rng(8)
    config = small_config(n_agents=12, max_cycles=60)
    agents, board = init_swarm(problem, config, rng)
    cmp = board.comparator
    previous = board.incumbent.goodness
    for t in range(1, 61):
        step_cycle(agents, board, t, rng)
        assert cmp.leq(board.incumbent.goodness, previous)
        previous = board.incumbent.goodness


def test_personal_bests_monotone_under_bch():
    problem = make_problem("G7")
    rng = make_rng(4)
    config = small_config(n_agents=8, max_cycles=50)
    agents, board = init_swarm(problem, config, rng)
    cmp = board.comparator
    previous = [a.mem.p.goodness for a in agents]
    for t in range(1, 51):
        step_cycle(agents, board, t, rng)
        for agent, old in zip(agents, previous):
            assert cmp.leq(agent.mem.p.goodness, old)
        previous = [a.mem.p.goodness for a in agents]


def test_incumbent_matches_full_rescan_every_cycle():
    problem = make_problem("G6")
    rng = make_rng(6)
    agents, board = init_swarm(problem, small_config(), rng)
    for t in range(1, 30):
        step_cycle(agents, board, t, rng)
        rescanned = best_of(board.published, board.comparator)
        assert board.incumbent is rescanned


def test_run_counts_exclude_initialization():
    problem = make_problem("GP")
    result = run(problem, small_config(n_agents=6, max_cycles=9))
    assert result.evaluations == 6 * 9
    assert result.init_evaluations == 6
    assert problem.eval_count == 6 * 10


def test_run_history_shape_and_final_state():
    problem = make_problem("GP")
    result = run(problem, small_config(max_cycles=25))
    assert len(result.history_obj) == 26
    assert result.history_obj[-1] == result.final_goodness.f_obj
    assert result.history_con[-1] == result.final_goodness.f_con


def test_run_zero_cycles_returns_best_initial_point():
    problem = make_problem("GP")
    result = run(problem, small_config(max_cycles=0))
    assert result.evaluations == 0
    assert len(result.history_obj) == 1


def test_run_final_point_inside_box():
    problem = make_problem("SH")
    result = run(problem, small_config(max_cycles=30))
    assert (result.final_x >= problem.lower).all()
    assert (result.final_x <= problem.upper).all()


def test_run_seed_determinism_bit_identical():
    a = run(make_problem("G6"), small_config(max_cycles=50, seed=123))
    b = run(make_problem("G6"), small_config(max_cycles=50, seed=123))
    assert (a.final_x == b.final_x).all()
    assert (a.history_obj == b.history_obj).all()
    assert (a.history_con == b.history_con).all()
    c = run(make_problem("G6"), small_config(max_cycles=50, seed=124))
    assert (a.history_obj != c.history_obj).any()


def test_run_seed_accepts_master_index_pairs():
    a = run(make_problem("GP"), small_config(seed=[42, 3]))
    b = run(make_problem("GP"), small_config(seed=[42, 3]))
    assert (a.history_obj == b.history_obj).all()


# --- best_of -------------------------------------------------------------------

def _kp(f_obj, f_con=0.0):
    return KnowledgePoint(np.zeros(1), GoodnessPair(f_obj, f_con))


def test_best_of_singleton():
    cmp = Comparator()
    only = _kp(5.0)
    assert best_of([only], cmp) is only


def test_best_of_prefers_feasible():
    cmp = Comparator()
    feasible = _kp(1000.0, 0.0)
    better_obj = _kp(-50.0, 0.2)
    assert best_of([better_obj, feasible], cmp) is feasible


def test_best_of_ties_break_to_lowest_index():
    cmp = Comparator()
    first = _kp(1.0)
    second = _kp(1.0)
    assert best_of([first, second], cmp) is first


def test_best_of_empty_raises():
    with pytest.raises(ValueError):
        best_of([], Comparator())


# --- relax-threshold integration ---------------------------------------------

def test_acr_initial_threshold_is_worst_violation():
    problem = make_problem("G11")
    rng = make_rng(9)
    agents, board = init_swarm(problem, small_config(formulation="acr"), rng)
    worst = max(kp.goodness.f_con for kp in board.published)
    assert board.acr_state.epsilon_r == worst
    assert board.comparator.epsilon_r == worst


def test_acr_threshold_forced_geometric_after_midpoint():
    # constraint that can never be satisfied keeps eps_min positive, so every
    # post-threshold cycle must multiply the threshold by the forcing factor
    from swaf.problems import ProblemDef

    problem = ProblemDef(
        "never", 2, [(-1.0, 1.0)] * 2,
        objective=lambda x: x[0] ** 2 + x[1] ** 2,
        constraints=(lambda x: 1.0 + x[0] ** 2,),
    )
    result = run(problem, small_config(max_cycles=30, formulation="acr", seed=3))
    eps = result.eps_history
    t_th = 15
    for t in range(t_th, 30):
        assert eps[t + 1] == eps[t] * 0.618
    assert (eps >= 0).all()


def test_acr_incumbent_reconciled_after_threshold_move():
    problem = make_problem("G11")
    rng = make_rng(10)
    agents, board = init_swarm(problem, small_config(formulation="acr", max_cycles=40), rng)
    for t in range(1, 41):
        step_cycle(agents, board, t, rng)
        assert board.incumbent is best_of(board.published, board.comparator)


def test_bch_runs_have_no_eps_history():
    result = run(make_problem("GP"), small_config(max_cycles=5))
    assert result.eps_history is None


# --- alternative deployment modes -----------------------------------------------

def test_rc_mode_runs_and_uses_listed_rules():
    problem = make_problem("GP")
    config = small_config(rule_spec="rc:[ps,de:CR=0.5]", max_cycles=20)
    rng = make_rng(3)
    agents, board = init_swarm(problem, config, rng)
    seen = set()
    for t in range(1, 21):
        step_cycle(agents, board, t, rng)
        seen.update(a.active_rule for a in agents)
    assert seen == {"ps", "de:CR=0.5"}


def test_nn_mode_rule_constant_within_interval():
    problem = make_problem("GP")
    config = small_config(
        n_agents=6, rule_spec="nn:[de:CR=0.0,de:CR=0.5,de:CR=1.0];TL=5;NI=1;NJ=4",
        max_cycles=20,
    )
    rng = make_rng(12)
    agents, board = init_swarm(problem, config, rng)
    assert all(a.deployer is not None for a in agents)
    history = {a.id: [] for a in agents}
    for t in range(1, 21):
        step_cycle(agents, board, t, rng)
        for a in agents:
            history[a.id].append(a.active_rule)
    for rules_seen in history.values():
        for start in range(0, 20, 5):
            assert len(set(rules_seen[start:start + 5])) == 1


def test_nn_mode_seed_determinism():
    config = small_config(rule_spec="nn:[cr-sweep];TL=4;NI=1", max_cycles=30, seed=9)
    a = run(make_problem("G6"), config)
    b = run(make_problem("G6"), config)
    assert (a.history_obj == b.history_obj).all()
