"""Exact models, instances and evaluation.

Every weight, bias and intermediate activation is a :class:`fractions.Fraction`
(or an integer obtained from one by exact rescaling).  No float ever appears on
a decision path, so the inclusive step boundary ``value >= 0`` is decided
exactly.

Conventions used throughout the package:

* an instance is a tuple of ``0``/``1`` ints;
* a partial instance is a tuple over ``0``, ``1`` and ``None`` (undefined);
* features are labelled ``1..n`` in models (FBDD labels, circuit variables) and
  indexed ``0..n-1`` in tuples.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterator, Mapping, Sequence, Union

import numpy as np

Rational = Fraction
Instance = tuple
PartialInstance = tuple

TRUE_LEAF = "T"
FALSE_LEAF = "F"

_INT64_SAFE = 2**62


class XQError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(XQError, ValueError):
    pass


class NotCompletionError(XQError, ValueError):
    """The instance ``x`` is not a completion of the partial instance ``y``."""


class PreconditionError(XQError, ValueError):
    pass


class BudgetExceeded(XQError):
    """An enumeration or table would exceed the configured limit.

    ``required`` is the exact size that would have been needed.
    """

    def __init__(self, what: str, required: int, limit: int):
        self.what = what
        self.required = required
        self.limit = limit
        super().__init__(f"{what}: requires {required}, limit is {limit}")


class FbddValidationError(XQError, ValueError):
    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def to_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


# --------------------------------------------------------------------------- instances


def as_instance(bits: Union[str, Sequence[int]]) -> Instance:
    if isinstance(bits, str):
        bits = [int(c) for c in bits]
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise ValueError(f"instance must be over {{0,1}}: {bits!r}")
    return out


def as_partial(cells: Union[str, Sequence]) -> PartialInstance:
    """Build a partial instance from ``"1*0"`` or a sequence with ``None`` for undefined."""
    if isinstance(cells, str):
        cells = [None if c in "*_" else int(c) for c in cells]
    out = tuple(None if c is None else int(c) for c in cells)
    if any(c not in (0, 1, None) for c in out):
        raise ValueError(f"partial instance must be over {{0,1,*}}: {cells!r}")
    return out


def format_bits(cells: Sequence) -> str:
    return "".join("*" if c is None else str(c) for c in cells)


def defined_count(y: PartialInstance) -> int:
    return sum(c is not None for c in y)


def free_count(y: PartialInstance) -> int:
    return sum(c is None for c in y)


def is_completion(x: Instance, y: PartialInstance) -> bool:
    return len(x) == len(y) and all(c is None or c == v for v, c in zip(x, y))


def check_completion(x: Instance, y: PartialInstance) -> None:
    if len(x) != len(y):
        raise DimensionError(f"instance has length {len(x)}, partial instance {len(y)}")
    if not is_completion(x, y):
        raise NotCompletionError(f"{format_bits(x)} is not a completion of {format_bits(y)}")


def restrict(x: Instance, positions) -> PartialInstance:
    """``x`` restricted to ``positions`` (0-based), undefined elsewhere."""
    keep = set(positions)
    return tuple(v if i in keep else None for i, v in enumerate(x))


def hamming(x: Instance, y: Instance) -> int:
    return sum(a != b for a, b in zip(x, y))


def enumerate_completions(y: PartialInstance) -> Iterator[Instance]:
    """Yield every completion of ``y``, free cells in lexicographic order.

    The first free cell is the most significant, so ``(None, None)`` yields
    ``(0,0), (0,1), (1,0), (1,1)``.
    """
    free = [i for i, c in enumerate(y) if c is None]
    base = list(y)
    for values in itertools.product((0, 1), repeat=len(free)):
        for i, v in zip(free, values):
            base[i] = v
        yield tuple(base)


def completion_matrix(y: PartialInstance, start: int = 0, stop: int = None) -> np.ndarray:
    """Completions ``start..stop-1`` of ``y`` as an int64 array, same order as above."""
    n = len(y)
    free = [i for i, c in enumerate(y) if c is None]
    f = len(free)
    stop = (1 << f) if stop is None else min(stop, 1 << f)
    out = np.empty((max(stop - start, 0), n), dtype=np.int64)
    for i, c in enumerate(y):
        if c is not None:
            out[:, i] = c
    if f:
        codes = np.arange(start, stop, dtype=np.int64)
        for j, i in enumerate(free):
            out[:, i] = (codes >> (f - 1 - j)) & 1
    return out


def _check_dim(expected: int, x: Sequence) -> None:
    if len(x) != expected:
        raise DimensionError(f"expected dimension {expected}, got {len(x)}")


# --------------------------------------------------------------------------- FBDD


@dataclass(frozen=True)
class Leaf:
    value: bool


@dataclass(frozen=True)
class Inner:
    label: int
    lo: object
    hi: object


@dataclass(frozen=True, eq=False)
class Fbdd:
    """A free binary decision diagram.

    ``nodes`` maps node ids to :class:`Leaf` or :class:`Inner`.  The ids
    ``"T"`` and ``"F"`` are reserved for the two leaves and are added
    automatically when referenced.  Construction does not validate; use
    :func:`validate_fbdd` / :func:`check_fbdd`.
    """

    nodes: Mapping
    root: object
    dim: int

    def __post_init__(self):
        nodes = dict(self.nodes)
        nodes.setdefault(TRUE_LEAF, Leaf(True))
        nodes.setdefault(FALSE_LEAF, Leaf(False))
        object.__setattr__(self, "nodes", nodes)

    @property
    def size(self) -> int:
        """Number of edges reachable from the root."""
        return 2 * sum(isinstance(self.nodes[u], Inner) for u in self.reachable)

    @cached_property
    def reachable(self) -> tuple:
        seen = {self.root}
        stack = [self.root]
        while stack:
            u = stack.pop()
            node = self.nodes[u]
            if isinstance(node, Inner):
                for v in (node.lo, node.hi):
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
        return tuple(seen)

    @cached_property
    def bottom_up(self) -> tuple:
        """Reachable node ids, children before parents."""
        order = []
        state = {}
        stack = [(self.root, False)]
        while stack:
            u, done = stack.pop()
            if done:
                state[u] = 2
                order.append(u)
                continue
            if state.get(u):
                continue
            state[u] = 1
            stack.append((u, True))
            node = self.nodes[u]
            if isinstance(node, Inner):
                for v in (node.hi, node.lo):
                    if not state.get(v):
                        stack.append((v, False))
        return tuple(order)

    @cached_property
    def tested_labels(self) -> tuple:
        return tuple(sorted({self.nodes[u].label for u in self.reachable
                             if isinstance(self.nodes[u], Inner)}))

    def __eq__(self, other):
        return (isinstance(other, Fbdd) and self.dim == other.dim and self.root == other.root
                and self.nodes == other.nodes)

    __hash__ = None

    def negated(self) -> "Fbdd":
        """The same diagram with leaf labels swapped."""
        swap = {TRUE_LEAF: FALSE_LEAF, FALSE_LEAF: TRUE_LEAF}
        nodes = {}
        for u, node in self.nodes.items():
            if isinstance(node, Inner):
                nodes[u] = Inner(node.label, swap.get(node.lo, node.lo), swap.get(node.hi, node.hi))
        return Fbdd(nodes, swap.get(self.root, self.root), self.dim)


def validate_fbdd(m: Fbdd) -> list:
    """Return the list of structural violations of ``m`` (empty when valid).

    Checks that the root and every edge target exist, labels are in
    ``1..dim``, the edge relation is acyclic, and freeness: no inner node
    labelled ``i`` has a descendant labelled ``i``.  Freeness is decided by
    propagating, bottom-up, the set of labels below each node (as a bitmask),
    which costs O(n * |M|).
    """
    violations = []
    nodes = m.nodes
    if m.root not in nodes:
        return [f"root {m.root!r} is not a node"]
    for u, node in nodes.items():
        if isinstance(node, Inner):
            for tag, v in (("lo", node.lo), ("hi", node.hi)):
                if v not in nodes:
                    violations.append(f"node {u!r}: {tag} edge to missing node {v!r}")
            if not (isinstance(node.label, int) and 1 <= node.label <= m.dim):
                violations.append(f"node {u!r}: label {node.label!r} outside 1..{m.dim}")
        elif not isinstance(node, Leaf):
            violations.append(f"node {u!r}: not a Leaf or Inner")
    if violations:
        return violations

    # iterative DFS with colours over all nodes
    colour = {}
    order = []
    for start in nodes:
        if start in colour:
            continue
        stack = [(start, iter(_children(nodes[start])))]
        colour[start] = 1
        while stack:
            u, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                colour[u] = 2
                order.append(u)
            elif colour.get(nxt) == 1:
                violations.append(f"cycle through nodes {u!r} -> {nxt!r}")
            elif nxt not in colour:
                colour[nxt] = 1
                stack.append((nxt, iter(_children(nodes[nxt]))))
    if violations:
        return violations

    below = {}
    for u in order:
        node = nodes[u]
        if isinstance(node, Leaf):
            below[u] = 0
            continue
        mask = 0
        for v in (node.lo, node.hi):
            child = nodes[v]
            mask |= below[v]
            if isinstance(child, Inner):
                mask |= 1 << child.label
        below[u] = mask
        if mask >> node.label & 1:
            other = _find_label_below(m, u, node.label)
            violations.append(
                f"freeness: node {u!r} (label {node.label}) has descendant {other!r} with the same label")
    return violations


def _children(node):
    return (node.lo, node.hi) if isinstance(node, Inner) else ()


def _find_label_below(m: Fbdd, u, label):
    seen = set()
    stack = list(_children(m.nodes[u]))
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        node = m.nodes[v]
        if isinstance(node, Inner):
            if node.label == label:
                return v
            stack.extend(_children(node))
    return None


def check_fbdd(m: Fbdd) -> Fbdd:
    violations = validate_fbdd(m)
    if violations:
        raise FbddValidationError(violations)
    return m


def eval_fbdd(m: Fbdd, x: Instance) -> int:
    _check_dim(m.dim, x)
    u = m.root
    node = m.nodes[u]
    while isinstance(node, Inner):
        u = node.hi if x[node.label - 1] else node.lo
        node = m.nodes[u]
    return int(node.value)


# --------------------------------------------------------------------------- perceptron


@dataclass(frozen=True, eq=False)
class Perceptron:
    w: tuple
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(to_rational(v) for v in self.w))
        object.__setattr__(self, "b", to_rational(self.b))

    @property
    def dim(self) -> int:
        return len(self.w)

    def __eq__(self, other):
        return isinstance(other, Perceptron) and self.w == other.w and self.b == other.b

    __hash__ = None

    @cached_property
    def _scaled(self):
        den = lcm_of(v.denominator for v in (*self.w, self.b))
        return [int(v * den) for v in self.w], int(self.b * den)

    def integer_scaled(self) -> "Perceptron":
        """Equivalent perceptron with integer weights (multiplied by the lcm of denominators)."""
        w, b = self._scaled
        return Perceptron(w, b)


def eval_perceptron(m: Perceptron, x: Instance) -> int:
    _check_dim(m.dim, x)
    w, b = m._scaled
    return int(sum(wi for wi, xi in zip(w, x) if xi) + b >= 0)


# --------------------------------------------------------------------------- MLP

RELU = "relu"
STEP = "step"


@dataclass(frozen=True, eq=False)
class Layer:
    """One affine layer ``act(h @ weights + bias)``; ``weights`` is ``d_in x d_out``."""

    weights: tuple
    bias: tuple
    act: str

    def __post_init__(self):
        object.__setattr__(self, "weights",
                           tuple(tuple(to_rational(v) for v in row) for row in self.weights))
        object.__setattr__(self, "bias", tuple(to_rational(v) for v in self.bias))
        if self.act not in (RELU, STEP):
            raise ValueError(f"unknown activation {self.act!r}")
        d_out = len(self.bias)
        for row in self.weights:
            if len(row) != d_out:
                raise DimensionError(f"weight row of length {len(row)} but bias has length {d_out}")

    @property
    def d_in(self) -> int:
        return len(self.weights)

    @property
    def d_out(self) -> int:
        return len(self.bias)

    def __eq__(self, other):
        return (isinstance(other, Layer) and self.act == other.act
                and self.weights == other.weights and self.bias == other.bias)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Mlp:
    """Multilayer perceptron with a single step output.

    Hidden layers are normally ``relu``; ``step`` hidden layers are accepted
    as well because the relu-to-step compiler produces them.
    """

    layers: tuple
    input_dim: int

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        if not layers:
            raise ValueError("an MLP needs at least one layer")
        prev = self.input_dim
        for i, layer in enumerate(layers, 1):
            if layer.d_in != prev:
                raise DimensionError(f"layer {i} expects {layer.d_in} inputs, previous width is {prev}")
            prev = layer.d_out
        if prev != 1:
            raise DimensionError(f"output width must be 1, got {prev}")
        if layers[-1].act != STEP:
            raise ValueError("the output layer must use the step activation")

    @property
    def dim(self) -> int:
        return self.input_dim

    @property
    def dims(self) -> tuple:
        return (self.input_dim, *(layer.d_out for layer in self.layers))

    @property
    def depth(self) -> int:
        return len(self.layers)

    def __eq__(self, other):
        return (isinstance(other, Mlp) and self.input_dim == other.input_dim
                and self.layers == other.layers)

    __hash__ = None

    @cached_property
    def _int_form(self):
        return _integerize(self)


def relu(v):
    return v if v > 0 else 0


def step(v) -> int:
    return 1 if v >= 0 else 0


def mlp_activations(m: Mlp, x: Instance) -> list:
    """Exact per-layer activations ``[h0, h1, ..., hk]`` as lists of Fractions."""
    _check_dim(m.input_dim, x)
    h = [Fraction(int(v)) for v in x]
    out = [h]
    for layer in m.layers:
        z = list(layer.bias)
        for hi, row in zip(h, layer.weights):
            if hi:
                for j, wij in enumerate(row):
                    if wij:
                        z[j] += hi * wij
        f = relu if layer.act == RELU else step
        h = [Fraction(f(v)) for v in z]
        out.append(h)
    return out


def _integerize(m: Mlp):
    """Rescale every layer to integers.

    If ``H = c * h`` is an exact integer image of the previous activations
    (``c > 0``), then ``q * (H @ W + c * b)`` is an integer image of the next
    pre-activation for ``q`` the lcm of the denominators involved; relu and
    step are both invariant under positive scaling (relu up to the same
    factor).  Returns per-layer ``(W_int, b_int, act)`` as Python ints plus
    a flag saying whether int64 arithmetic is overflow-free.
    """
    scale = Fraction(1)
    bound = 1  # max |H| over Boolean inputs, upper bound
    out = []
    safe = True
    for layer in m.layers:
        scaled_b = [scale * v for v in layer.bias]
        q = lcm_of([v.denominator for row in layer.weights for v in row]
                   + [v.denominator for v in scaled_b])
        W = [[int(v * q) for v in row] for row in layer.weights]
        b = [int(v * q) for v in scaled_b]
        col_abs = [0] * len(b)
        for row in W:
            for j, v in enumerate(row):
                col_abs[j] += abs(v)
        zbound = max((bound * ca + abs(bj) for ca, bj in zip(col_abs, b)), default=0)
        if zbound >= _INT64_SAFE:
            safe = False
        out.append((W, b, layer.act))
        if layer.act == RELU:
            scale *= q
            bound = zbound
        else:
            scale = Fraction(1)
            bound = 1
    return out, safe


def eval_mlp(m: Mlp, x: Instance) -> int:
    """Reference forward pass in exact rationals."""
    return int(mlp_activations(m, x)[-1][0])


def eval_mlp_batch(m: Mlp, X: np.ndarray) -> np.ndarray:
    """Evaluate ``m`` on every row of the 0/1 matrix ``X``; returns an int8 vector.

    Uses int64 when the integerized network provably cannot overflow,
    Python-int object arrays otherwise.
    """
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[1] != m.input_dim:
        raise DimensionError(f"expected a (*, {m.input_dim}) matrix, got shape {X.shape}")
    layers, safe = m._int_form
    dtype = np.int64 if safe else object
    h = X.astype(dtype)
    for W, b, act in layers:
        z = h @ np.array(W, dtype=dtype).reshape(len(W), len(b)) + np.array(b, dtype=dtype)
        if act == RELU:
            h = np.maximum(z, 0) if safe else np.where(z > 0, z, 0).astype(object)
        else:
            h = (z >= 0).astype(dtype)
    return h[:, 0].astype(np.int8)


def perceptron_as_mlp(p: Perceptron) -> Mlp:
    return Mlp((Layer(tuple((wi,) for wi in p.w), (p.b,), STEP),), p.dim)


# --------------------------------------------------------------------------- verdicts


@dataclass(frozen=True)
class QueryVerdict:
    """Answer of a decision query; ``witness`` is present exactly when ``answer`` is True."""

    answer: bool
    witness: tuple = None

    def __post_init__(self):
        if self.answer and self.witness is None:
            raise ValueError("a YES verdict needs a witness")

    def __bool__(self):
        return self.answer

    def format(self) -> str:
        if self.answer:
            return f"YES witness={format_bits(self.witness)}"
        return "NO"


def evaluate(model, x: Instance) -> int:
    """Evaluate any supported model on a full instance."""
    if isinstance(model, Fbdd):
        return eval_fbdd(model, x)
    if isinstance(model, Perceptron):
        return eval_perceptron(model, x)
    if isinstance(model, Mlp):
        return eval_mlp(model, x)
    from .circuits import BoolCircuit, MajCircuit, eval_circuit
    if isinstance(model, (BoolCircuit, MajCircuit)):
        return eval_circuit(model, x)
    raise TypeError(f"unsupported model type {type(model).__name__}")


def lcm_of(values) -> int:
    """Least common multiple via iterated gcd: lcm(a, b) = a*b / gcd(a, b)."""
    return reduce(lambda a, b: a * b // math.gcd(a, b), (abs(int(v)) for v in values), 1)


def budget_check(what: str, required: int, limit: int) -> None:
    if required > limit:
        raise BudgetExceeded(what, required, limit)

