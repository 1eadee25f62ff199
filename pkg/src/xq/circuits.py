"""Boolean and majority circuits as gate DAGs.

Gates live in a dict keyed by an arbitrary hashable id.  Majority gates store
parallel edges as multiplicities: ``Maj(((a, 2), (b, 1)))`` has fan-in 3.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from .core import DimensionError, QueryVerdict, XQError, budget_check


class CircuitError(XQError, ValueError):
    pass


@dataclass(frozen=True)
class Input:
    var: int


@dataclass(frozen=True)
class Not:
    child: object


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class Maj:
    """Strict majority over ``inputs``, a tuple of ``(child id, multiplicity)``."""

    inputs: tuple

    @property
    def fan_in(self) -> int:
        return sum(mult for _, mult in self.inputs)


def children_of(gate) -> tuple:
    if isinstance(gate, Input):
        return ()
    if isinstance(gate, Not):
        return (gate.child,)
    if isinstance(gate, (And, Or)):
        return tuple(gate.children)
    if isinstance(gate, Maj):
        return tuple(child for child, _ in gate.inputs)
    raise CircuitError(f"unknown gate {gate!r}")


def fan_in(gate) -> int:
    if isinstance(gate, Maj):
        return gate.fan_in
    return len(children_of(gate))


def is_large(gate) -> bool:
    if isinstance(gate, Maj):
        return gate.fan_in > 3
    if isinstance(gate, (And, Or)):
        return len(gate.children) > 2
    return False


class _Circuit:
    _allowed: tuple = ()

    def __init__(self, gates: Mapping, output, n: int):
        self.gates = dict(gates)
        self.output = output
        self.n = n
        self._validate()

    def _validate(self):
        if self.output not in self.gates:
            raise CircuitError(f"output {self.output!r} is not a gate")
        for gid, gate in self.gates.items():
            if not isinstance(gate, self._allowed):
                raise CircuitError(f"gate {gid!r}: {type(gate).__name__} not allowed in {type(self).__name__}")
            if isinstance(gate, Input) and not 1 <= gate.var <= self.n:
                raise CircuitError(f"gate {gid!r}: variable {gate.var} outside 1..{self.n}")
            if isinstance(gate, Maj) and any(mult < 1 for _, mult in gate.inputs):
                raise CircuitError(f"gate {gid!r}: multiplicities must be positive")
            for child in children_of(gate):
                if child not in self.gates:
                    raise CircuitError(f"gate {gid!r}: unknown child {child!r}")
        self.topo_order  # raises on cycles

    @property
    def dim(self) -> int:
        return self.n

    @cached_property
    def topo_order(self) -> tuple:
        """All gates, children before parents."""
        state = {}
        order = []
        for start in self.gates:
            if start in state:
                continue
            stack = [(start, iter(children_of(self.gates[start])))]
            state[start] = 1
            while stack:
                gid, it = stack[-1]
                child = next(it, None)
                if child is None:
                    stack.pop()
                    state[gid] = 2
                    order.append(gid)
                elif state.get(child) == 1:
                    raise CircuitError(f"cycle through gate {child!r}")
                elif child not in state:
                    state[child] = 1
                    stack.append((child, iter(children_of(self.gates[child]))))
        return tuple(order)

    @cached_property
    def reachable(self) -> frozenset:
        seen = {self.output}
        stack = [self.output]
        while stack:
            for child in children_of(self.gates[stack.pop()]):
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return frozenset(seen)

    def values(self, x) -> dict:
        """Value of every gate under assignment ``x``."""
        if len(x) != self.n:
            raise DimensionError(f"expected {self.n} variables, got {len(x)}")
        val = {}
        for gid in self.topo_order:
            val[gid] = _gate_value(self.gates[gid], val, x)
        return val

    def __eq__(self, other):
        return (type(other) is type(self) and self.n == other.n and self.output == other.output
                and self.gates == other.gates)

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, gates={len(self.gates)}, output={self.output!r})"


def _gate_value(gate, val, x) -> int:
    if isinstance(gate, Input):
        return x[gate.var - 1]
    if isinstance(gate, Not):
        return 1 - val[gate.child]
    if isinstance(gate, And):
        return int(all(val[c] for c in gate.children))
    if isinstance(gate, Or):
        return int(any(val[c] for c in gate.children))
    ones = sum(mult for c, mult in gate.inputs if val[c])
    return int(2 * ones > gate.fan_in)


class BoolCircuit(_Circuit):
    """And/Or/Not circuit over variables ``1..n``."""

    _allowed = (Input, Not, And, Or)


class MajCircuit(_Circuit):
    """Majority circuit over variables ``1..n``; monotone by construction."""

    _allowed = (Input, Maj)


def eval_circuit(c: _Circuit, assignment) -> int:
    return c.values(assignment)[c.output]


def depth_and_weft(c: _Circuit) -> tuple:
    """Longest input-to-output path (in edges) and the most large gates on any such path.

    Only gates feeding the output are considered.
    """
    depth = {}
    weft = {}
    for gid in c.topo_order:
        if gid not in c.reachable:
            continue
        gate = c.gates[gid]
        kids = children_of(gate)
        if isinstance(gate, Input):
            depth[gid] = weft[gid] = 0
            continue
        depth[gid] = 1 + max((depth[k] for k in kids), default=0)
        weft[gid] = int(is_large(gate)) + max((weft[k] for k in kids), default=0)
    return depth[c.output], weft[c.output]


def gate_levels(c: _Circuit) -> dict:
    """Longest path from an input to each reachable gate; inputs sit at level 0."""
    level = {}
    for gid in c.topo_order:
        if gid in c.reachable:
            kids = children_of(c.gates[gid])
            level[gid] = 0 if isinstance(c.gates[gid], Input) else 1 + max((level[k] for k in kids), default=0)
    return level


def weight_k_assignments(n: int, k: int):
    """All assignments of exactly ``k`` ones, in lexicographic order of the chosen positions."""
    for ones in itertools.combinations(range(n), k):
        x = [0] * n
        for i in ones:
            x[i] = 1
        yield tuple(x)


def wcs_brute(c: _Circuit, k: int, limit: int = 1 << 22):
    """Weighted circuit satisfiability by enumeration.

    The witness is the first satisfying assignment of weight exactly ``k``.
    Weight counts variables set to 1, regardless of how many input gates or
    parallel edges read them.
    """
    if k < 0 or k > c.n:
        return QueryVerdict(False)
    budget_check("wcs_brute assignments C(n,k)", math.comb(c.n, k), limit)
    for x in weight_k_assignments(c.n, k):
        if eval_circuit(c, x):
            return QueryVerdict(True, x)
    return QueryVerdict(False)


# --- small constructors, handy for tests and reductions


def maj_gate_circuit(n: int, multiplicities=None) -> MajCircuit:
    """A single majority gate over ``x1..xn`` (optionally with multiplicities)."""
    mults = multiplicities or [1] * n
    gates = {f"x{i}": Input(i) for i in range(1, n + 1)}
    gates["g"] = Maj(tuple((f"x{i}", m) for i, m in enumerate(mults, 1) if m))
    return MajCircuit(gates, "g", n)
