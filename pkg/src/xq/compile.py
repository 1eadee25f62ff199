"""Translations between circuits and MLPs.

* :func:`circuit_to_mlp` - And/Or/Not circuit to a relu MLP with a step output.
* :func:`majority_to_rmlp` - majority circuit to an MLP with one layer per
  circuit level and small integer weights.
* :func:`relu_to_step` - relu MLP to an equivalent MLP using only step units.

The first two share a small layered builder.  Every gate is placed in the
layer equal to its level (longest path from an input); a value needed
further up is carried by identity units inserted in the layers in between.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .circuits import And, BoolCircuit, Input, Maj, MajCircuit, Not, Or, gate_levels
from .core import RELU, STEP, BudgetExceeded, Layer, Mlp, PreconditionError, lcm_of

DEFAULT_STEP_BUDGET = 10**6


class _LayeredBuilder:
    """Accumulates neurons layer by layer.

    A *value* is a linear combination ``[(index, coeff), ...]`` of neurons in
    one layer.  ``identity`` turns a value in layer ``l-1`` into the same
    value in layer ``l``.
    """

    def __init__(self, n: int, identity):
        self.n = n
        self.layers = [None]  # layer 0 is the input
        self.identity = identity
        self.placed = {}

    def add(self, layer: int, terms, bias) -> int:
        while len(self.layers) <= layer:
            self.layers.append([])
        weights = {}
        for idx, w in terms:
            weights[idx] = weights.get(idx, 0) + w
        self.layers[layer].append((weights, Fraction(bias)))
        return len(self.layers[layer]) - 1

    def place(self, key, layer: int, value):
        self.placed.setdefault(key, {})[layer] = value

    def get(self, key, layer: int):
        """The value of ``key`` in ``layer``, inserting identity units as needed."""
        here = self.placed[key]
        if layer not in here:
            below = max(lv for lv in here if lv < layer)
            for lv in range(below + 1, layer + 1):
                here[lv] = self.identity(self, lv, here[lv - 1])
        return here[layer]

    def inputs(self, key_mults, layer: int):
        """Weighted terms reading every ``(key, multiplicity)`` from ``layer``."""
        terms = []
        for key, mult in key_mults:
            terms.extend((idx, mult * coeff) for idx, coeff in self.get(key, layer))
        return terms

    def build(self) -> Mlp:
        layers = []
        prev = self.n
        last = len(self.layers) - 1
        for depth, neurons in enumerate(self.layers[1:], 1):
            W = [[0] * len(neurons) for _ in range(prev)]
            for j, (weights, _) in enumerate(neurons):
                for i, w in weights.items():
                    W[i][j] = w
            layers.append(Layer(W, [b for _, b in neurons], STEP if depth == last else RELU))
            prev = len(neurons)
        return Mlp(layers, self.n)


def _relu_identity(builder, layer, value):
    return [(builder.add(layer, value, 0), 1)]


def circuit_to_mlp(c: BoolCircuit) -> Mlp:
    """Relu MLP computing the same Boolean function as ``c``.

    Gates become relu units: ``not x = relu(1 - x)``, ``and`` over ``l``
    inputs is ``relu(sum - (l-1))``, and ``or`` goes through De Morgan.  The
    output value ``h`` is read by a final ``step(2h - 1)`` unit.
    """
    if not isinstance(c, BoolCircuit):
        raise TypeError("circuit_to_mlp expects a BoolCircuit")
    # relu gate list over keys ("x", var) and ("g", serial)
    units = {}
    level = {}
    ref = {}
    serial = iter(range(1 << 62))

    def unit(srcs, bias):
        key = ("g", next(serial))
        units[key] = (srcs, bias)
        level[key] = 1 + max((level[s] for s, _ in srcs), default=0)
        return key

    def negate(src):
        return unit([(src, -1)], 1)

    def conj(srcs):
        return unit([(s, 1) for s in srcs], -(len(srcs) - 1))

    for gid in c.topo_order:
        if gid not in c.reachable:
            continue
        gate = c.gates[gid]
        if isinstance(gate, Input):
            ref[gid] = ("x", gate.var)
            level[ref[gid]] = 0
        elif isinstance(gate, Not):
            ref[gid] = negate(ref[gate.child])
        elif isinstance(gate, And):
            ref[gid] = conj([ref[ch] for ch in gate.children])
        elif isinstance(gate, Or):
            ref[gid] = negate(conj([negate(ref[ch]) for ch in gate.children]))

    builder = _LayeredBuilder(c.n, _relu_identity)
    for v in range(1, c.n + 1):
        builder.place(("x", v), 0, [(v - 1, 1)])
    for key, (srcs, bias) in units.items():
        lv = level[key]
        builder.place(key, lv, [(builder.add(lv, builder.inputs(srcs, lv - 1), bias), 1)])
    out = ref[c.output]
    top = level[out] + 1
    builder.add(top, builder.inputs([(out, 2)], top - 1), -1)
    return builder.build()


# --------------------------------------------------------------------------- majority


@dataclass(frozen=True)
class RmlpBound:
    N: int
    digit_cap: int


def _maj_identity(builder, layer, value):
    # a unary majority gate: fan-in 1, so the pair has biases 0 and -1
    return [(builder.add(layer, value, 0), 1), (builder.add(layer, value, -1), -1)]


def majority_to_rmlp_with_pairs(c: MajCircuit):
    """Like :func:`majority_to_rmlp`, also returning ``{gate id: (layer, i1, i2)}``.

    For a gate of fan-in ``n`` reading ``v`` true inputs the pair computes
    ``relu(v - n//2)`` and ``relu(v - n//2 - 1)``; their difference is the
    gate's Boolean value.
    """
    if not isinstance(c, MajCircuit):
        raise TypeError("majority_to_rmlp expects a MajCircuit")
    levels = gate_levels(c)
    gates = dict(c.gates)
    output = c.output
    if isinstance(gates[output], Input):
        # depth-0 circuit: wrap the lone input in a unary gate
        output = ("wrap", output)
        gates[output] = Maj(((c.output, 1),))
        levels[output] = 1

    builder = _LayeredBuilder(c.n, _maj_identity)
    pairs = {}
    for gid in (*c.topo_order, output):
        if gid not in levels:
            continue
        gate = gates[gid]
        if isinstance(gate, Input):
            builder.place(gid, 0, [(gate.var - 1, 1)])
            continue
        lv = levels[gid]
        half = gate.fan_in // 2
        terms = builder.inputs(gate.inputs, lv - 1)
        if gid == output:
            builder.add(lv, terms, -half - 1)
            break
        i1 = builder.add(lv, terms, -half)
        i2 = builder.add(lv, terms, -half - 1)
        builder.place(gid, lv, [(i1, 1), (i2, -1)])
        pairs[gid] = (lv, i1, i2)
    return builder.build(), pairs


def majority_to_rmlp(c: MajCircuit) -> Mlp:
    """MLP with one layer per circuit level computing the same function as ``c``."""
    return majority_to_rmlp_with_pairs(c)[0]


def _digits(v: Fraction) -> int:
    d = len(str(abs(v.numerator)))
    return d + (len(str(v.denominator)) if v.denominator != 1 else 0)


def rmlp_bound(m: Mlp) -> RmlpBound:
    """Digit allowance for an MLP with ``N`` neurons: ``2*ceil(log10(N+1)) + 2``."""
    N = sum(m.dims)
    return RmlpBound(N, 2 * math.ceil(math.log10(N + 1)) + 2)


def max_digits(m: Mlp) -> int:
    return max(_digits(v) for layer in m.layers
               for v in (*layer.bias, *(w for row in layer.weights for w in row)))


def satisfies_rmlp_bound(m: Mlp) -> bool:
    return max_digits(m) <= rmlp_bound(m).digit_cap


# --------------------------------------------------------------------------- relu to step


def step_replication(m: Mlp) -> tuple:
    """``(L, S)``: the common denominator and the number of step copies per relu unit.

    ``S = ((D+1) * C * L) ** depth`` with ``D`` the widest layer (inputs
    included) and ``C`` the largest absolute weight or bias, at least 1.
    Scaled pre-activations of hidden layers never exceed ``S``.
    """
    values = [v for layer in m.layers for v in (*layer.bias, *(w for row in layer.weights for w in row))]
    L = lcm_of(v.denominator for v in values)
    D = max(m.dims)
    C = max([Fraction(1)] + [abs(v) for v in values])
    S = math.ceil(((D + 1) * C * L) ** m.depth)
    return L, S


def relu_to_step(m: Mlp, budget: int = DEFAULT_STEP_BUDGET) -> Mlp:
    """Equivalent MLP (on Boolean inputs) that uses only step activations.

    After scaling, every hidden pre-activation ``z`` is an integer in
    ``[-S, S]`` and ``relu(z)`` equals the number of ``j`` in ``1..S`` with
    ``z >= j``.  Each relu unit is therefore replaced by ``S`` step units
    with biases ``b-1, ..., b-S`` sharing its incoming and outgoing weights.
    Weights are scaled by ``L`` and biases of layer ``i`` by ``L**i`` so all
    of this stays integral.
    """
    if any(layer.act != RELU for layer in m.layers[:-1]):
        raise PreconditionError("relu_to_step expects relu hidden layers")
    L, S = step_replication(m)
    internal = sum(layer.d_out for layer in m.layers[:-1])
    if S * internal > budget:
        raise BudgetExceeded(f"relu_to_step replicated nodes (S={S})", S * internal, budget)
    copies = 1
    layers = []
    for depth, layer in enumerate(m.layers, 1):
        last = depth == m.depth
        out_copies = 1 if last else S
        scale_b = L**depth
        W = []
        for row in layer.weights:
            scaled = []
            for w in row:
                scaled.extend([int(w * L)] * out_copies)
            W.extend([scaled] * copies)
        if last:
            b = [int(v * scale_b) for v in layer.bias]
        else:
            b = [int(v * scale_b) - j for v in layer.bias for j in range(1, S + 1)]
        layers.append(Layer(W, b, STEP))
        copies = out_copies
    return Mlp(layers, m.input_dim)
