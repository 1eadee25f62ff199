import itertools
import random

import pytest

from xq.circuits import (
    And,
    BoolCircuit,
    CircuitError,
    Input,
    Maj,
    MajCircuit,
    Not,
    Or,
    depth_and_weft,
    eval_circuit,
    maj_gate_circuit,
    wcs_brute,
)
from xq.random_models import random_bool_circuit, random_maj_circuit


def chain_circuit():
    g = {"x1": Input(1), "a": Maj((("x1", 1),)), "b": Maj((("a", 1),))}
    return MajCircuit(g, "b", 1)


def test_majority_examples():
    maj3 = maj_gate_circuit(3)
    assert eval_circuit(maj3, (1, 1, 0)) == 1
    assert eval_circuit(maj3, (1, 0, 0)) == 0
    # two parallel edges from x1 and one from x2
    assert eval_circuit(maj_gate_circuit(2, [2, 1]), (1, 0)) == 1
    assert eval_circuit(maj_gate_circuit(2, [2, 1]), (0, 1)) == 0


def test_bool_gates():
    g = {"x1": Input(1), "x2": Input(2), "n": Not("x1"), "a": And(("n", "x2")), "o": Or(("a", "x1"))}
    c = BoolCircuit(g, "o", 2)
    assert [eval_circuit(c, x) for x in itertools.product((0, 1), repeat=2)] == [0, 1, 1, 1]


def test_depth_and_weft_examples():
    assert depth_and_weft(maj_gate_circuit(3)) == (1, 0)
    assert depth_and_weft(maj_gate_circuit(5)) == (1, 1)
    assert depth_and_weft(chain_circuit()) == (2, 0)


def test_parallel_edges_count_toward_fan_in():
    # one input with multiplicity 4 is a large gate
    assert depth_and_weft(maj_gate_circuit(1, [4])) == (1, 1)


def test_wcs_examples():
    assert wcs_brute(maj_gate_circuit(3), 2).answer
    assert not wcs_brute(maj_gate_circuit(3), 1).answer
    rng = random.Random(3)
    for _ in range(20):
        c = random_maj_circuit(rng, rng.randint(1, 6), rng.randint(1, 5))
        assert not wcs_brute(c, 0).answer


def test_wcs_witness_has_weight_k():
    v = wcs_brute(maj_gate_circuit(5), 3)
    assert v.answer and sum(v.witness) == 3 and eval_circuit(maj_gate_circuit(5), v.witness)


def test_wcs_out_of_range_weight():
    assert not wcs_brute(maj_gate_circuit(3), 4).answer


def test_cycle_rejected():
    g = {"x1": Input(1), "a": Maj((("b", 1),)), "b": Maj((("a", 1), ("x1", 1)))}
    with pytest.raises(CircuitError):
        MajCircuit(g, "a", 1)


def test_dangling_reference_rejected():
    with pytest.raises(CircuitError):
        BoolCircuit({"x1": Input(1), "o": Or(("x1", "nope"))}, "o", 1)


def test_wcs_matches_naive_count():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(1, 8)
        c = random_maj_circuit(rng, n, rng.randint(1, 6))
        for k in range(n + 1):
            naive = any(eval_circuit(c, x) for x in itertools.product((0, 1), repeat=n) if sum(x) == k)
            assert wcs_brute(c, k).answer == naive


def test_majority_circuits_are_monotone():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(1, 10)
        c = random_maj_circuit(rng, n, rng.randint(1, 8))
        table = {x: eval_circuit(c, x) for x in itertools.product((0, 1), repeat=n)}
        for x, v in table.items():
            if not v:
                continue
            for i in range(n):
                if x[i] == 0:
                    up = x[:i] + (1,) + x[i + 1:]
                    assert table[up] == 1


def test_weft_never_exceeds_depth():
    rng = random.Random(8)
    for _ in range(200):
        n = rng.randint(1, 8)
        if rng.random() < 0.5:
            c = random_maj_circuit(rng, n, rng.randint(1, 10))
        else:
            c = random_bool_circuit(rng, n, rng.randint(1, 10))
        depth, weft = depth_and_weft(c)
        assert 0 <= weft <= depth
