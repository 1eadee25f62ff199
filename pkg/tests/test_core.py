import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xq.core import (
    DimensionError,
    Fbdd,
    FbddValidationError,
    Inner,
    Layer,
    Mlp,
    Perceptron,
    check_fbdd,
    completion_matrix,
    enumerate_completions,
    eval_fbdd,
    eval_mlp,
    eval_mlp_batch,
    eval_perceptron,
    is_completion,
    perceptron_as_mlp,
    validate_fbdd,
)
from xq.random_models import random_fbdd, random_mlp, random_perceptron


def not_mlp():
    return Mlp([Layer([[-1]], [1], "relu"), Layer([[2]], [-1], "step")], 1)


def and3_mlp():
    return Mlp([Layer([[1], [1], [1]], [-2], "relu"), Layer([[2]], [-1], "step")], 3)


def test_eval_fbdd_examples(f1):
    assert eval_fbdd(f1, (1, 0)) == 1
    assert eval_fbdd(f1, (0, 0)) == 0
    assert eval_fbdd(f1, (0, 1)) == 1


def test_eval_fbdd_dimension_mismatch(f1):
    with pytest.raises(DimensionError):
        eval_fbdd(f1, (1,))


def test_eval_perceptron_examples(p1):
    assert eval_perceptron(p1, (1, 0, 1)) == 1
    assert eval_perceptron(p1, (0, 1, 0)) == 0
    assert eval_perceptron(Perceptron((), 0), ()) == 1


def test_perceptron_boundary_is_inclusive_and_exact():
    p = Perceptron((Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)), -1)
    assert eval_perceptron(p, (1, 1, 1)) == 1
    assert eval_perceptron(p, (1, 1, 0)) == 0


def test_perceptron_rejects_floats():
    with pytest.raises(TypeError):
        Perceptron((0.1,), 0)


def test_eval_mlp_examples():
    assert eval_mlp(not_mlp(), (0,)) == 1
    assert eval_mlp(not_mlp(), (1,)) == 0
    assert eval_mlp(and3_mlp(), (1, 1, 0)) == 0
    assert eval_mlp(and3_mlp(), (1, 1, 1)) == 1


def test_mlp_shape_checks():
    with pytest.raises(DimensionError):
        Mlp([Layer([[1, 1]], [0, 0], "relu"), Layer([[1]], [0], "step")], 1)
    with pytest.raises(ValueError):
        Mlp([Layer([[1]], [0], "relu")], 1)


def test_validate_fbdd_examples(f1):
    assert validate_fbdd(f1) == []
    assert validate_fbdd(Fbdd({}, "T", 3)) == []
    bad = Fbdd({1: Inner(1, 2, "T"), 2: Inner(1, "F", "T")}, 1, 1)
    violations = validate_fbdd(bad)
    assert len(violations) == 1 and "1" in violations[0] and "2" in violations[0]
    with pytest.raises(FbddValidationError):
        check_fbdd(bad)


def test_validate_fbdd_structure_errors():
    assert validate_fbdd(Fbdd({1: Inner(3, "T", "F")}, 1, 2))  # label out of range
    assert validate_fbdd(Fbdd({1: Inner(1, 9, "F")}, 1, 2))  # dangling edge
    assert validate_fbdd(Fbdd({1: Inner(1, 2, "F"), 2: Inner(2, 1, "T")}, 1, 2))  # cycle
    assert validate_fbdd(Fbdd({}, 7, 2))  # missing root


def _naive_free(m):
    """Freeness by enumerating every path out of every inner node."""
    def walk(u, seen):
        node = m.nodes[u]
        if not isinstance(node, Inner):
            return True
        if node.label in seen:
            return False
        return walk(node.lo, seen | {node.label}) and walk(node.hi, seen | {node.label})
    return all(walk(u, frozenset()) for u in m.nodes)


def test_validate_matches_path_enumeration():
    rng = random.Random(3)
    for _ in range(300):
        n = rng.randint(1, 5)
        nodes = {}
        for nid in range(1, rng.randint(1, 7) + 1):
            targets = ["T", "F"] + list(range(1, nid))
            nodes[nid] = Inner(rng.randint(1, n), rng.choice(targets), rng.choice(targets))
        m = Fbdd(nodes, max(nodes), n)
        assert (validate_fbdd(m) == []) == _naive_free(m)


def test_random_fbdds_are_valid():
    rng = random.Random(0)
    for _ in range(100):
        assert validate_fbdd(random_fbdd(rng, rng.randint(1, 10), rng.randint(0, 30))) == []


def test_enumerate_completions_examples():
    assert list(enumerate_completions((1, None))) == [(1, 0), (1, 1)]
    assert list(enumerate_completions((0, 1))) == [(0, 1)]
    assert list(enumerate_completions((None, None))) == [(0, 0), (0, 1), (1, 0), (1, 1)]


@given(st.lists(st.sampled_from([0, 1, None]), max_size=8))
def test_enumerate_completions_properties(y):
    y = tuple(y)
    out = list(enumerate_completions(y))
    assert len(out) == 2 ** y.count(None)
    assert all(is_completion(x, y) for x in out)
    assert out == sorted(set(out))
    assert [tuple(r) for r in completion_matrix(y)] == out


def test_completion_matrix_chunks_match_whole():
    y = (None, 1, None, None, 0, None)
    whole = completion_matrix(y)
    parts = np.concatenate([completion_matrix(y, s, s + 3) for s in range(0, 16, 3)])
    assert (whole == parts).all()


def test_zero_hidden_layer_mlp_equals_perceptron():
    rng = random.Random(5)
    for _ in range(30):
        d = rng.randint(0, 12)
        p = random_perceptron(rng, d)
        m = perceptron_as_mlp(p)
        X = completion_matrix((None,) * d)
        expected = [eval_perceptron(p, tuple(x)) for x in X]
        assert list(eval_mlp_batch(m, X)) == expected
        if d <= 6:
            assert [eval_mlp(m, tuple(x)) for x in X] == expected


def test_batch_evaluator_matches_reference():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 6)
        m = random_mlp(rng, n, hidden=tuple(rng.randint(1, 4) for _ in range(rng.randint(0, 3))),
                       bound=rng.choice((2, 64)))
        X = completion_matrix((None,) * n)
        assert list(eval_mlp_batch(m, X)) == [eval_mlp(m, tuple(x)) for x in X]


def test_batch_evaluator_falls_back_to_python_ints():
    big = 2 ** 70
    m = Mlp([Layer([[big], [big]], [-big], "relu"), Layer([[Fraction(1, big)]], [-1], "step")], 2)
    assert not m._int_form[1]
    X = completion_matrix((None, None))
    assert list(eval_mlp_batch(m, X)) == [eval_mlp(m, tuple(x)) for x in X] == [0, 0, 0, 1]


@settings(max_examples=50)
@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_rational_round_trip(a, b):
    assert (a + b) - b == a
