import itertools
import random
from fractions import Fraction

import pytest

from xq.circuits import And, BoolCircuit, Input, Maj, MajCircuit, Not, Or, depth_and_weft, eval_circuit, maj_gate_circuit
from xq.compile import (
    circuit_to_mlp,
    majority_to_rmlp,
    majority_to_rmlp_with_pairs,
    relu_to_step,
    satisfies_rmlp_bound,
    step_replication,
)
from xq.core import BudgetExceeded, Layer, Mlp, PreconditionError, enumerate_completions, eval_mlp, mlp_activations
from xq.mlp_engine import cc_mlp
from xq.random_models import random_bool_circuit, random_maj_circuit


def cube(n):
    return list(itertools.product((0, 1), repeat=n))


def agrees(c, m):
    return all(eval_circuit(c, x) == eval_mlp(m, x) for x in cube(c.n))


def test_not_gate():
    c = BoolCircuit({"x1": Input(1), "n": Not("x1")}, "n", 1)
    m = circuit_to_mlp(c)
    assert m.depth == 2
    assert [eval_mlp(m, (0,)), eval_mlp(m, (1,))] == [1, 0]


def test_and3_gate():
    c = BoolCircuit({**{f"x{i}": Input(i) for i in (1, 2, 3)}, "a": And(("x1", "x2", "x3"))}, "a", 3)
    assert agrees(c, circuit_to_mlp(c))


def test_xor_from_basic_gates():
    g = {
        "x1": Input(1), "x2": Input(2),
        "n1": Not("x1"), "n2": Not("x2"),
        "a": And(("x1", "n2")), "b": And(("n1", "x2")),
        "o": Or(("a", "b")),
    }
    c = BoolCircuit(g, "o", 2)
    m = circuit_to_mlp(c)
    assert [eval_mlp(m, x) for x in cube(2)] == [0, 1, 1, 0]


def test_input_output_circuit():
    c = BoolCircuit({"x1": Input(1), "x2": Input(2)}, "x2", 2)
    assert agrees(c, circuit_to_mlp(c))


def test_random_bool_circuits_agree():
    rng = random.Random(21)
    for _ in range(100):
        c = random_bool_circuit(rng, rng.randint(1, 7), rng.randint(1, 10))
        assert agrees(c, circuit_to_mlp(c))


def test_single_maj3_rmlp():
    c = maj_gate_circuit(3)
    m = majority_to_rmlp(c)
    assert m.depth == 1 and agrees(c, m)


def test_depth_two_majority():
    g = {f"x{i}": Input(i) for i in range(1, 8)}
    g["a"] = Maj((("x1", 1), ("x2", 1), ("x3", 1)))
    g["b"] = Maj((("x4", 1), ("x5", 1), ("x6", 1)))
    g["o"] = Maj((("a", 1), ("b", 1), ("x7", 1)))
    c = MajCircuit(g, "o", 7)
    m = majority_to_rmlp(c)
    assert m.depth == 2 and agrees(c, m)


def test_pairs_compute_gate_values():
    rng = random.Random(4)
    for _ in range(40):
        c = random_maj_circuit(rng, rng.randint(1, 6), rng.randint(2, 7))
        m, pairs = majority_to_rmlp_with_pairs(c)
        for x in cube(c.n):
            acts = mlp_activations(m, x)
            vals = c.values(x)
            for gid, (layer, i1, i2) in pairs.items():
                assert acts[layer][i1] - acts[layer][i2] == vals[gid]


def test_rmlp_layers_follow_depth_and_digits_stay_small():
    rng = random.Random(9)
    for _ in range(100):
        c = random_maj_circuit(rng, rng.randint(1, 8), rng.randint(1, 8))
        m = majority_to_rmlp(c)
        assert m.depth == max(1, depth_and_weft(c)[0])
        assert satisfies_rmlp_bound(m)


def and_like():
    return Mlp([Layer([[1], [1]], [-1], "relu"), Layer([[1]], [-1], "step")], 2)


def test_relu_to_step_and_like():
    m = and_like()
    s = relu_to_step(m)
    assert all(layer.act == "step" for layer in s.layers)
    assert [eval_mlp(s, x) for x in cube(2)] == [eval_mlp(m, x) for x in cube(2)] == [0, 0, 0, 1]


def test_integer_weights_need_no_scaling():
    assert step_replication(and_like())[0] == 1


def test_common_denominator():
    m = Mlp([Layer([[Fraction(1, 2)], [Fraction(1, 3)]], [0], "relu"), Layer([[1]], [-1], "step")], 2)
    assert step_replication(m)[0] == 6
    s = relu_to_step(m)
    assert [eval_mlp(s, x) for x in cube(2)] == [eval_mlp(m, x) for x in cube(2)]


def test_budget_error_reports_size():
    m = Mlp([Layer([[7] * 4] * 4, [1] * 4, "relu"), Layer([[5]] * 4, [-1], "step")], 4)
    _, S = step_replication(m)
    with pytest.raises(BudgetExceeded) as info:
        relu_to_step(m, budget=10)
    assert info.value.required == 4 * S
    assert str(S) in info.value.what


def test_relu_to_step_rejects_step_hidden_layers():
    m = Mlp([Layer([[1]], [0], "step"), Layer([[1]], [-1], "step")], 1)
    with pytest.raises(PreconditionError):
        relu_to_step(m)


def test_compilation_preserves_counts():
    rng = random.Random(12)
    for _ in range(50):
        c = random_bool_circuit(rng, rng.randint(1, 8), rng.randint(1, 8))
        m = circuit_to_mlp(c)
        y = tuple(None if rng.random() < 0.6 else rng.randint(0, 1) for _ in range(c.n))
        assert cc_mlp(m, y) == sum(eval_circuit(c, x) for x in enumerate_completions(y))
