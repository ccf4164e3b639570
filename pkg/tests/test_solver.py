import numpy as np
import pytest

from combopt import Model, State, StateError
from combopt.modeling import Evaluation
from combopt.problems import (
    KpInstance,
    TspInstance,
    build_kp_model,
    build_mcp_model,
    build_tsp_model,
    exact_kp,
    exact_tsp,
    generate_random_maxcut,
)
from combopt.qubo import mcp_to_qubo, tsp_to_qubo
from combopt.solver import (
    SampleSet,
    SolverConfig,
    compare,
    evaluation_key,
    initial_state,
    is_better,
    propose,
    propose_state,
    qm_query,
    reverse_move,
    solve,
)
from combopt.state import DecisionSpec


def random_tsp(n, seed):
    rng = np.random.default_rng(seed)
    c = rng.integers(1, 100, (n, n)).astype(float)
    c = np.triu(c, 1)
    return TspInstance("t", n, c + c.T)


def random_kp(n, seed):
    rng = np.random.default_rng(seed)
    w = rng.integers(1, 50, n)
    v = rng.integers(0, 100, n)
    return KpInstance("k", n, v, w, int(max(1, w.sum() // 2)))


# --- compare ---------------------------------------------------------------------


def ev(objective, violations=(), key=0):
    results = [v == 0 for v in violations]
    return Evaluation(objective, results, list(violations), state_key=key)


def test_feasible_beats_infeasible():
    assert is_better(ev(10.0), ev(1.0, violations=[2.0]))
    assert compare(ev(10.0), ev(1.0, violations=[2.0])) == -1


def test_less_violation_wins_among_infeasible():
    assert is_better(ev(50.0, violations=[1.0]), ev(1.0, violations=[3.0]))


def test_objective_breaks_feasible_ties():
    assert is_better(ev(1.0), ev(2.0))


def test_hash_gives_total_order():
    a, b = ev(1.0, key=3), ev(1.0, key=7)
    assert compare(a, b) == -1
    assert compare(b, a) == 1
    assert compare(a, a) == 0
    assert sorted([evaluation_key(b), evaluation_key(a)]) == [
        evaluation_key(a),
        evaluation_key(b),
    ]


# --- initial states and moves ------------------------------------------------------


def test_initial_state_shapes():
    m = Model()
    m.list(1)
    m.binary(1)
    m.set(4)
    m.disjoint_lists(6, 2)
    m.integer(3, lo=-1, hi=2)
    rng = np.random.default_rng(0)
    s = initial_state(m, rng)
    assert m.validate_state(s) == []
    assert s.values[0].tolist() == [0]
    assert s.values[1].tolist()[0] in (0, 1)


def test_initial_permutations_uniform():
    # chi-square sanity over the 24 permutations of 4 elements
    from itertools import permutations

    rng = np.random.default_rng(42)
    spec = DecisionSpec("list", 4)
    from combopt.solver.moves import initial_value

    counts = {p: 0 for p in permutations(range(4))}
    draws = 100_000
    for _ in range(draws):
        counts[tuple(initial_value(spec, rng).tolist())] += 1
    expected = draws / 24
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    # df=23;ism critical value at alpha=0.001 is ~49.7
    assert chi2 < 49.7


def test_two_opt_reversal():
    spec = DecisionSpec("list", 4)
    value = np.array([0, 1, 2, 3])
    rng = np.random.default_rng(1)
    seen = set()
    for _ in range(500):
        new, tag = propose(spec, value, rng)
        if tag == ("2opt", 1, 2):
            assert new.tolist() == [0, 2, 1, 3]
            seen.add("hit")
    assert "hit" in seen


def test_drop_from_empty_set_resamples_as_add():
    spec = DecisionSpec("set", 3)
    rng = np.random.default_rng(2)
    for _ in range(50):
        new, tag = propose(spec, np.empty(0, dtype=np.int64), rng)
        assert tag[0] == "add"
        assert new.size == 1


def test_moves_preserve_validity_all_kinds():
    m = Model()
    m.list(7)
    m.set(6)
    m.binary(5)
    m.integer(4, lo=0, hi=3)
    m.disjoint_lists(8, 3)
    m.disjoint_bit_sets(6, 2)
    rng = np.random.default_rng(3)
    state = initial_state(m, rng)
    for _ in range(20_000):
        state, _ = propose_state(m, state, rng)
        errs = m.validate_state(state)
        assert errs == [], errs


def test_reverse_move_round_trip():
    assert reverse_move(("add", 3)) == ("drop", 3)
    assert reverse_move(("drop", 3)) == ("add", 3)
    assert reverse_move(("exch", 1, 2)) == ("exch", 2, 1)
    assert reverse_move(("ins", 4, 6)) == ("ins", 6, 4)
    assert reverse_move(("swap", 1, 2)) == ("swap", 1, 2)
    assert reverse_move((0, ("add", 1))) == (0, ("drop", 1))


# --- sample sets ----------------------------------------------------------------


def test_sampleset_json_round_trip():
    m = build_tsp_model(random_tsp(5, seed=8))
    result = solve(m, SolverConfig(time_limit=2.0, n_branches=1, seed=1,
                                   max_steps=300, qm_inline=True))
    text = result.to_json()
    again = SampleSet.from_json(text)
    assert len(again) == len(result)
    assert again.best().objective == result.best().objective
    assert again.to_json() == text


def test_sampleset_never_empty_and_sorted():
    m = build_kp_model(random_kp(8, seed=3))
    result = solve(m, SolverConfig(time_limit=1.0, n_branches=2, seed=5,
                                   max_steps=200, qm_inline=True))
    assert len(result) >= 2
    keys = [s.sort_key() for s in result]
    assert keys == sorted(keys)


# --- solve ------------------------------------------------------------------------


def test_solve_requires_objective():
    m = Model()
    m.binary(3)
    with pytest.raises(StateError):
        solve(m, SolverConfig(time_limit=1.0))


def test_solve_tsp3_unit_costs():
    inst = TspInstance("u3", 3, np.ones((3, 3)) - np.eye(3))
    result = solve(build_tsp_model(inst), SolverConfig(time_limit=1.0, n_branches=1,
                                                       seed=0, max_steps=50))
    assert result.best().objective == 3.0
    assert result.best().feasible


def test_solve_kp_zero_capacity():
    inst = KpInstance("k0", 5, [5, 4, 3, 2, 1], [1, 1, 1, 1, 1], 0)
    result = solve(build_kp_model(inst), SolverConfig(time_limit=1.0, n_branches=1,
                                                      seed=2, max_steps=500,
                                                      qm_inline=True))
    best = result.best()
    assert best.feasible
    assert best.objective == 0.0
    assert best.state.values[0].size == 0


def test_solve_small_tsp_reaches_optimum():
    inst = random_tsp(8, seed=4)
    opt, _ = exact_tsp(inst)
    hits = 0
    for seed in range(10):
        result = solve(
            build_tsp_model(inst),
            SolverConfig(time_limit=10.0, n_branches=4, seed=seed, target=opt),
        )
        hits += result.best().objective == opt
    assert hits >= 9


def test_sa_reaches_kp_dp_optimum():
    inst = random_kp(20, seed=6)
    opt, _ = exact_kp(inst)
    hits = 0
    for seed in range(10):
        result = solve(
            build_kp_model(inst),
            SolverConfig(time_limit=5.0, n_branches=2, seed=seed, target=-opt),
        )
        hits += result.best().objective == -opt
    assert hits >= 8


def test_tabu_variant_solves_small_tsp():
    inst = random_tsp(7, seed=9)
    opt, _ = exact_tsp(inst)
    result = solve(
        build_tsp_model(inst),
        SolverConfig(time_limit=5.0, n_branches=2, seed=3, cm_kind="tabu", target=opt),
    )
    assert result.best().objective == opt


def test_every_sample_is_structurally_valid():
    inst = random_tsp(9, seed=10)
    model = build_tsp_model(inst)
    result = solve(model, SolverConfig(time_limit=2.0, n_branches=2, seed=7,
                                       max_steps=2000, qm_inline=True))
    for sample in result:
        assert model.validate_state(sample.state) == []


def test_single_branch_runs_are_byte_identical():
    inst = random_tsp(9, seed=11)
    config = SolverConfig(time_limit=30.0, n_branches=1, seed=13,
                          max_steps=1500, qm_inline=True)
    a = solve(build_tsp_model(inst), config).to_json()
    b = solve(build_tsp_model(inst), config).to_json()
    assert a == b


def test_different_seeds_differ():
    inst = random_tsp(9, seed=11)
    a = solve(build_tsp_model(inst),
              SolverConfig(time_limit=30.0, n_branches=1, seed=1,
                           max_steps=800, qm_inline=True)).to_json()
    b = solve(build_tsp_model(inst),
              SolverConfig(time_limit=30.0, n_branches=1, seed=2,
                           max_steps=800, qm_inline=True)).to_json()
    assert a != b


def test_anytime_improvements_nonincreasing():
    inst = random_tsp(9, seed=12)
    result = solve(build_tsp_model(inst),
                   SolverConfig(time_limit=5.0, n_branches=2, seed=3,
                                max_steps=3000, qm_inline=True))
    for b in range(2):
        # within a step, later improvements have lower objective, so the
        # (step, -objective) order is chronological
        series = [s.objective for s in sorted(
            (s for s in result if s.branch == b and s.source != "final"),
            key=lambda s: (s.step, -s.objective),
        )]
        assert all(x >= y for x, y in zip(series, series[1:]))


def test_portfolio_dominance_merge_takes_min():
    inst = random_tsp(9, seed=14)
    result = solve(build_tsp_model(inst),
                   SolverConfig(time_limit=5.0, n_branches=3, seed=4,
                                max_steps=500, qm_inline=True))
    best = result.best().objective
    per_branch_best = {}
    for s in result:
        per_branch_best[s.branch] = min(per_branch_best.get(s.branch, np.inf), s.objective)
    assert best == min(per_branch_best.values())
    assert best <= per_branch_best[0]


def test_time_budget_respected():
    import time

    inst = random_tsp(30, seed=15)
    t0 = time.monotonic()
    solve(build_tsp_model(inst), SolverConfig(time_limit=1.5, n_branches=2, seed=0))
    assert time.monotonic() - t0 < 2.5


# --- qm queries --------------------------------------------------------------------


def test_qm_full_window_equals_direct_mc_encoding():
    inst = generate_random_maxcut(10, 0.8, (1, 10), seed=20)
    model = build_mcp_model(inst)
    rng = np.random.default_rng(0)
    incumbent = initial_state(model, rng)
    query = qm_query(model, incumbent, window=10, rng=rng)
    direct, _ = mcp_to_qubo(inst)
    assert query.qubo == direct


def test_qm_full_window_equals_direct_tsp_encoding():
    inst = random_tsp(4, seed=21)
    model = build_tsp_model(inst)
    rng = np.random.default_rng(0)
    incumbent = initial_state(model, rng)
    query = qm_query(model, incumbent, window=4, rng=rng)
    direct, _ = tsp_to_qubo(inst)
    assert query.qubo == direct


def test_qm_window_one_on_list():
    inst = random_tsp(6, seed=22)
    model = build_tsp_model(inst)
    rng = np.random.default_rng(1)
    incumbent = initial_state(model, rng)
    query = qm_query(model, incumbent, window=1, rng=rng)
    assert query.qubo.n == 1
    decoded = query.decode(np.array([1]))
    assert decoded is not None
    assert model.validate_state(decoded) == []


def test_qm_decodes_preserve_frozen_part():
    inst = random_tsp(10, seed=23)
    model = build_tsp_model(inst)
    rng = np.random.default_rng(2)
    incumbent = initial_state(model, rng)
    query = qm_query(model, incumbent, window=4, rng=rng)
    # identity sub-assignment: city a at relative position a
    bits = np.eye(4, dtype=np.int8).reshape(-1)
    decoded = query.decode(bits)
    assert decoded is not None
    assert model.validate_state(decoded) == []
    assert sorted(decoded.values[0].tolist()) == list(range(10))


def test_qm_untagged_model_returns_none():
    m = Model()
    x = m.binary(4)
    m.minimize(x.sum())
    rng = np.random.default_rng(0)
    assert qm_query(m, initial_state(m, rng), 4, rng) is None


def test_qm_improves_or_preserves_incumbent():
    inst = generate_random_maxcut(12, 0.7, (1, 9), seed=24)
    model = build_mcp_model(inst)
    result = solve(model, SolverConfig(time_limit=3.0, n_branches=1, seed=5,
                                        max_steps=1200, qm_inline=True,
                                        qm_period=200, qm_window=6))
    assert result.best().feasible


def test_threads_caps_branches():
    from combopt.errors import DomainError

    assert SolverConfig(n_branches=6, threads=2).resolved_branches() == 2
    assert SolverConfig(n_branches=2, threads=8).resolved_branches() == 2
    with pytest.raises(DomainError):
        SolverConfig(threads=0)
