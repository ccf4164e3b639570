import numpy as np
import pytest

from combopt import (
    DecisionSpec,
    DomainError,
    Model,
    ShapeError,
    State,
    StateError,
    TypeErrorDomain,
    new_model,
)


def test_new_model_is_empty():
    m = new_model()
    assert len(m.nodes) == 0
    assert m.constraints == []
    assert m.objective is None


def test_freeze_without_objective_rejects_evaluate():
    m = Model()
    m.binary(2)
    m.freeze()
    with pytest.raises(StateError):
        m.evaluate(State([[0, 1]]))


def test_two_minimize_calls_error():
    m = Model()
    x = m.binary(2)
    m.minimize(x.sum())
    with pytest.raises(StateError):
        m.minimize(x.sum())


def test_decision_size_validation():
    with pytest.raises(DomainError):
        DecisionSpec("set", 0)
    with pytest.raises(DomainError):
        DecisionSpec("disjoint_lists", 5, n_parts=6)
    with pytest.raises(DomainError):
        DecisionSpec("integer", 3, lo=2, hi=1)
    m = Model()
    with pytest.raises(DomainError):
        m.set(0)
    with pytest.raises(DomainError):
        m.disjoint_lists(5, 6)


def test_constant_shapes_and_finiteness():
    m = Model()
    c = m.constant(np.arange(9).reshape(3, 3))
    assert c.shape == (3, 3)
    s = m.constant(11793)
    assert s.shape == ()
    with pytest.raises(DomainError):
        m.constant([1.0, np.nan])
    with pytest.raises(DomainError):
        m.constant([np.inf])
    with pytest.raises(ShapeError):
        m.constant(np.zeros((2, 2, 2)))


def test_gather_semantics():
    m = Model()
    c = m.constant([[0, 1, 2], [3, 4, 5], [6, 7, 8]])
    route = m.list(3)
    gathered = c[route[:-1], route[1:]]
    assert gathered.shape == (2,)
    m.minimize(gathered.sum())
    ev = m.evaluate(State([[0, 1, 2]]))
    assert ev.objective == 1 + 5


def test_sum_over_empty_set_gather_is_zero():
    m = Model()
    v = m.constant([5.0, 6.0, 7.0])
    items = m.set(3)
    m.minimize(v[items].sum())
    assert m.evaluate(State([[]])).objective == 0.0
    assert m.evaluate(State([[0, 1, 2]])).objective == 18.0


def test_constraint_node_type_checks():
    m = Model()
    w = m.constant([2.0, 3.0])
    items = m.set(2)
    cap = m.constant(4.0)
    check = w[items].sum() <= cap
    cid = m.add_constraint(check)
    assert cid == 0
    with pytest.raises(TypeErrorDomain):
        m.add_constraint(w[items].sum())
    # duplicates are allowed and counted twice
    assert m.add_constraint(check) == 1
    assert len(m.constraints) == 2


def test_comparison_nodes_are_terminal():
    m = Model()
    x = m.binary(2)
    c = x.sum() <= m.constant(1)
    with pytest.raises(TypeErrorDomain):
        _ = c + 1
    with pytest.raises(TypeErrorDomain):
        m.minimize(c)


def test_minimize_requires_scalar():
    m = Model()
    x = m.binary(3)
    with pytest.raises(ShapeError):
        m.minimize(x)


def test_vector_comparison_rejected():
    m = Model()
    x = m.binary(3)
    y = m.constant([1.0, 1.0, 1.0])
    with pytest.raises(ShapeError):
        _ = x <= y


def test_shape_mismatch_in_arithmetic():
    m = Model()
    a = m.constant([1.0, 2.0])
    b = m.constant([1.0, 2.0, 3.0])
    with pytest.raises(ShapeError):
        _ = a + b


def test_static_vector_with_dynamic_rejected():
    m = Model()
    items = m.set(3)
    w = m.constant([1.0, 2.0, 3.0])
    with pytest.raises(ShapeError):
        _ = w * w[items]


def test_dynamic_dynamic_equal_lengths_ok():
    m = Model()
    w = m.constant([1.0, 2.0, 3.0])
    v = m.constant([10.0, 20.0, 30.0])
    items = m.set(3)
    m.minimize((w[items] * v[items]).sum())
    assert m.evaluate(State([[0, 2]])).objective == 1 * 10 + 3 * 30


def test_dynamic_dynamic_unequal_runtime_lengths_raise():
    m = Model()
    w = m.constant([1.0, 2.0, 3.0])
    items = m.set(3)
    other = m.set(3)
    m.minimize((w[items] + w[other]).sum())
    with pytest.raises(ShapeError):
        m.evaluate(State([[0, 1], [2]]))


def test_indexing_non_array_rejected():
    m = Model()
    s = m.constant(3.0)
    with pytest.raises(ShapeError):
        _ = s[0]


def test_evaluate_rejects_invalid_state():
    m = Model()
    route = m.list(3)
    c = m.constant(np.ones((3, 3)))
    m.minimize(c[route[:-1], route[1:]].sum())
    with pytest.raises(StateError, match="duplicate index 0"):
        m.evaluate(State([[0, 0, 2]]))


def test_validate_state_messages():
    m = Model()
    m.list(3)
    assert m.validate_state(State([[2, 0, 1]])) == []
    assert any("duplicate index 0" in v for v in m.validate_state(State([[0, 0, 2]])))

    m2 = Model()
    m2.disjoint_lists(5, 2)
    assert m2.validate_state(State([[[0, 1], [2, 3, 4]]])) == []
    errs = m2.validate_state(State([[[0, 1], [2, 3]]]))
    assert any("not exhaustive" in v for v in errs)


def test_model_frozen_after_freeze():
    m = Model()
    x = m.binary(1)
    m.minimize(x.sum())
    m.freeze()
    with pytest.raises(StateError):
        m.binary(2)
    with pytest.raises(StateError):
        m.constant(1.0)


def test_evaluation_is_pure():
    rng = np.random.default_rng(5)
    m = Model()
    route = m.list(6)
    c = m.constant(rng.integers(1, 50, (6, 6)))
    m.minimize(c[route[:-1], route[1:]].sum() + c[route[-1], route[0]])
    s = State([rng.permutation(6)])
    e1, e2 = m.evaluate(s), m.evaluate(s)
    assert e1.objective == e2.objective
    assert e1.state_key == e2.state_key


def test_tsp3_unit_costs_every_tour_is_3():
    m = Model()
    route = m.list(3)
    c = m.constant(np.ones((3, 3)) - np.eye(3))
    m.minimize(c[route[:-1], route[1:]].sum() + c[route[-1], route[0]])
    from itertools import permutations

    for p in permutations(range(3)):
        assert m.evaluate(State([list(p)])).objective == 3.0


def test_kp_empty_set_feasible_zero_objective():
    m = Model()
    items = m.set(4)
    w = m.constant([3.0, 1.0, 4.0, 1.0])
    v = m.constant([5.0, 9.0, 2.0, 6.0])
    cap = m.constant(5.0)
    m.add_constraint(w[items].sum() <= cap)
    m.minimize(-(v[items].sum()))
    ev = m.evaluate(State([[]]))
    assert ev.feasible and ev.objective == 0.0


def test_violation_magnitudes():
    m = Model()
    items = m.set(2)
    w = m.constant([3.0, 4.0])
    m.add_constraint(w[items].sum() <= m.constant(5.0))
    m.add_constraint(w[items].sum() >= m.constant(1.0))
    m.add_constraint(w[items].sum() == m.constant(3.0))
    m.minimize(w[items].sum())
    ev = m.evaluate(State([[0, 1]]))  # weight 7
    assert ev.violations == [2.0, 0.0, 4.0]
    assert not ev.feasible
    ev = m.evaluate(State([[0]]))  # weight 3
    assert ev.violations == [0.0, 0.0, 0.0]
    assert ev.feasible


# --- derived-value oracles ---------------------------------------------------


def tour_cost_direct(c, perm):
    """Literal cycle-cost summation, independent of the DAG."""
    total = 0.0
    for i in range(len(perm) - 1):
        total += c[perm[i], perm[i + 1]]
    total += c[perm[-1], perm[0]]
    return total


def test_random_tsp_objective_matches_direct_summation():
    rng = np.random.default_rng(123)
    c = rng.integers(1, 100, (6, 6)).astype(float)
    np.fill_diagonal(c, 0.0)
    m = Model()
    route = m.list(6)
    cc = m.constant(c)
    m.minimize(cc[route[:-1], route[1:]].sum() + cc[route[-1], route[0]])
    for _ in range(200):
        perm = rng.permutation(6)
        assert m.evaluate(State([perm])).objective == pytest.approx(
            tour_cost_direct(c, perm), abs=1e-9
        )


def test_negation_duality_exact_for_integers():
    rng = np.random.default_rng(7)
    v = rng.integers(0, 500, 12).astype(float)
    m = Model()
    items = m.set(12)
    vv = m.constant(v)
    m.minimize(-(vv[items].sum()))
    for _ in range(100):
        mask = rng.random(12) < 0.5
        subset = np.flatnonzero(mask)
        direct = float(v[subset].sum())
        assert m.evaluate(State([subset])).objective == -direct


def test_full_set_equals_plain_sum():
    v = np.array([2.0, 4.0, 8.0])
    m = Model()
    items = m.set(3)
    m.minimize(m.constant(v)[items].sum())
    assert m.evaluate(State([[0, 1, 2]])).objective == v.sum()


def test_integer_decision_round_trip():
    m = Model()
    x = m.integer(3, lo=-2, hi=4)
    m.minimize(x.sum())
    assert m.evaluate(State([[-2, 0, 4]])).objective == 2.0
    assert m.validate_state(State([[-3, 0, 0]]))  # lo violated
    assert m.validate_state(State([[0, 0, 5]]))  # hi violated


def test_partition_parts_in_expressions():
    m = Model()
    parts = m.disjoint_lists(5, 2)
    w = m.constant([1.0, 2.0, 4.0, 8.0, 16.0])
    m.minimize(w[parts[0]].sum() - w[parts[1]].sum())
    ev = m.evaluate(State([[[0, 4], [1, 2, 3]]]))
    assert ev.objective == (1 + 16) - (2 + 4 + 8)


def test_permutation_histogram_property():
    # every structurally valid list state visits each index exactly once
    rng = np.random.default_rng(11)
    m = Model()
    m.list(8)
    for _ in range(100):
        perm = rng.permutation(8)
        assert m.validate_state(State([perm])) == []
        assert np.bincount(perm, minlength=8).tolist() == [1] * 8
