"""Seeded random generators for models, circuits, graphs and DNFs.

All generators take a :class:`random.Random` so suites are reproducible.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .circuits import And, BoolCircuit, Input, Maj, MajCircuit, Not, Or
from .core import FALSE_LEAF, RELU, STEP, TRUE_LEAF, Fbdd, Inner, Layer, Mlp, Perceptron
from .reductions import Dnf


def random_fbdd(rng: random.Random, n: int, inner: int, constant_rate: float = 0.02) -> Fbdd:
    """A free BDD with up to ``inner`` inner nodes over ``n`` features.

    Nodes are created bottom-up.  Each remembers the labels tested below
    it as a bitmask, and a new node labelled ``l`` may only point to nodes
    whose mask misses ``l``, which keeps every path free.
    """
    if rng.random() < constant_rate or inner == 0:
        return Fbdd({}, rng.choice((TRUE_LEAF, FALSE_LEAF)), n)
    masks = {TRUE_LEAF: 0, FALSE_LEAF: 0}
    order = [TRUE_LEAF, FALSE_LEAF]
    nodes = {}
    for nid in range(1, inner + 1):
        label = rng.randint(1, n)
        bit = 1 << label
        allowed = [u for u in order if not masks[u] & bit]
        # favour recent nodes so diagrams get deep
        lo = allowed[min(len(allowed) - 1, int(len(allowed) * rng.random() ** 0.4))]
        hi = allowed[min(len(allowed) - 1, int(len(allowed) * rng.random() ** 0.4))]
        if lo == hi and len(allowed) > 1 and rng.random() < 0.8:
            hi = rng.choice([u for u in allowed if u != lo])
        nodes[nid] = Inner(label, lo, hi)
        masks[nid] = bit | masks[lo] | masks[hi]
        order.append(nid)
    return Fbdd(nodes, inner, n)


def layered_fbdd(rng: random.Random, levels: int, width: int, labels_per_level: int = 2) -> Fbdd:
    """A large free BDD: level ``j`` draws its labels from its own block of features.

    Children always sit on lower levels, so no path meets a block twice.
    Different nodes of a level test different features, so the diagram is
    not ordered.  Dimension is ``levels * labels_per_level``.
    """
    nodes = {}
    below = [[TRUE_LEAF, FALSE_LEAF]]
    nid = 0
    for level in range(levels):
        block = range(level * labels_per_level + 1, (level + 1) * labels_per_level + 1)
        row = []
        for _ in range(width):
            nid += 1

            def pick():
                pool = below[-1] if rng.random() < 0.8 else rng.choice(below)
                return rng.choice(pool)

            nodes[nid] = Inner(rng.choice(block), pick(), pick())
            row.append(nid)
        below.append(row)
    return Fbdd(nodes, nid, levels * labels_per_level)


def random_rational(rng: random.Random, bound: int = 64) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_perceptron(rng: random.Random, d: int, bound: int = 64, integer: bool = False) -> Perceptron:
    if integer:
        return Perceptron([rng.randint(-bound, bound) for _ in range(d)], rng.randint(-bound, bound))
    return Perceptron([random_rational(rng, bound) for _ in range(d)], random_rational(rng, bound))


def random_mlp(rng: random.Random, n: int, hidden=(3,), bound: int = 4, integer: bool = False) -> Mlp:
    """Dense relu network with small rational weights and a step output."""
    dims = [n, *hidden, 1]
    layers = []
    for i in range(len(dims) - 1):
        def draw():
            if integer:
                return rng.randint(-bound, bound)
            return random_rational(rng, bound)

        W = [[draw() for _ in range(dims[i + 1])] for _ in range(dims[i])]
        b = [draw() for _ in range(dims[i + 1])]
        layers.append(Layer(W, b, STEP if i == len(dims) - 2 else RELU))
    return Mlp(layers, n)


def random_bool_circuit(rng: random.Random, n: int, gates: int, max_fanin: int = 3) -> BoolCircuit:
    """Random And/Or/Not DAG; the last gate is the output."""
    g = {f"x{v}": Input(v) for v in range(1, n + 1)}
    pool = list(g)
    for i in range(gates):
        gid = f"g{i}"
        kind = rng.choice(("not", "and", "or", "and", "or"))
        if kind == "not":
            g[gid] = Not(rng.choice(pool))
        else:
            kids = tuple(rng.choice(pool) for _ in range(rng.randint(1, max_fanin)))
            g[gid] = (And if kind == "and" else Or)(kids)
        pool.append(gid)
    return BoolCircuit(g, pool[-1], n)


def random_maj_circuit(rng: random.Random, n: int, gates: int, max_fanin: int = 5,
                       max_mult: int = 2) -> MajCircuit:
    """Random majority DAG with occasional parallel edges; the last gate is the output."""
    g = {f"x{v}": Input(v) for v in range(1, n + 1)}
    pool = list(g)
    for i in range(gates):
        kids = {}
        for _ in range(rng.randint(1, max_fanin)):
            # lean on recent gates so circuits have some depth
            child = pool[min(len(pool) - 1, int(len(pool) * rng.random() ** 0.5))]
            kids[child] = kids.get(child, 0) + rng.randint(1, max_mult)
        gid = f"m{i}"
        g[gid] = Maj(tuple(kids.items()))
        pool.append(gid)
    return MajCircuit(g, pool[-1], n)


def random_graph(rng: random.Random, n: int, p: float = 0.4) -> list:
    return [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < p]


def random_dag(rng: random.Random, n: int, p: float = 0.35) -> list:
    """Random DAG on ``1..n``: edges follow a hidden random order."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    return [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]


def random_dnf(rng: random.Random, n: int, terms: int, max_len: int = 3, core_len: int = None) -> Dnf:
    out = []
    for _ in range(terms):
        size = rng.randint(1, max_len)
        vars_ = rng.sample(range(1, n + 1), min(size, n))
        out.append(tuple(v if rng.random() < 0.5 else -v for v in vars_))
    if core_len is not None:
        vars_ = rng.sample(range(1, n + 1), core_len)
        out.append(tuple(v if rng.random() < 0.5 else -v for v in vars_))
    return Dnf(n, tuple(out))


def random_instance(rng: random.Random, n: int) -> tuple:
    return tuple(rng.randint(0, 1) for _ in range(n))


def random_partial_of(rng: random.Random, x, p_free: float = 0.5) -> tuple:
    """Random partial instance that ``x`` completes."""
    return tuple(None if rng.random() < p_free else v for v in x)
