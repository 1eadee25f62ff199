"""Hardness constructions turned into instance generators.

Each function maps an instance of a classical problem to a query instance
with the same answer.  The ``brute_*`` helpers solve the source problems
directly and serve as ground truth.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass

from .circuits import (
    And,
    BoolCircuit,
    Input,
    Maj,
    MajCircuit,
    Not,
    Or,
    children_of,
    depth_and_weft,
    eval_circuit,
    is_large,
    wcs_brute,
)
from .compile import circuit_to_mlp, majority_to_rmlp
from .core import (
    FALSE_LEAF,
    RELU,
    STEP,
    TRUE_LEAF,
    BudgetExceeded,
    Fbdd,
    Inner,
    Layer,
    Mlp,
    PreconditionError,
    XQError,
)


class CyclicInputError(XQError, ValueError):
    pass


def _vertex_count(edges, n):
    top = max((max(e) for e in edges), default=0)
    if n is None:
        return top
    if top > n:
        raise ValueError(f"edge endpoint {top} exceeds vertex count {n}")
    return n


# --------------------------------------------------------------------------- vertex cover


def vertex_cover_circuit(edges, n=None) -> BoolCircuit:
    """Conjunction over edges ``(u, v)`` of ``x_u or x_v``; satisfied exactly by vertex covers."""
    n = _vertex_count(edges, n)
    gates = {("x", v): Input(v) for v in range(1, n + 1)}
    clauses = []
    for i, (u, v) in enumerate(edges):
        gates[("e", i)] = Or((("x", u), ("x", v)))
        clauses.append(("e", i))
    gates["out"] = And(tuple(clauses))
    return BoolCircuit(gates, "out", n)


def vc_to_mcr(edges, k: int, n=None):
    """MCR instance ``(M, 0^n, k)`` that is positive iff a vertex cover of size <= k exists.

    Without edges every graph has the empty cover, so a fixed positive
    instance is returned: the one-input identity network at ``(0,)`` with
    ``k = 1``.
    """
    edges = list(edges)
    if not edges:
        ident = Mlp((Layer(((2,),), (-1,), STEP),), 1)
        return ident, (0,), 1
    c = vertex_cover_circuit(edges, n)
    return circuit_to_mlp(c), (0,) * c.n, k


def brute_min_vertex_cover(edges, n=None) -> int:
    n = _vertex_count(edges, n)
    for size in range(n + 1):
        for cover in itertools.combinations(range(1, n + 1), size):
            s = set(cover)
            if all(u in s or v in s for u, v in edges):
                return size
    return n


# --------------------------------------------------------------------------- dominating set in a DAG


def topological_order(edges, n) -> list:
    """Kahn's algorithm, always taking the smallest available vertex."""
    indeg = [0] * (n + 1)
    succ = [[] for _ in range(n + 1)]
    for u, v in edges:
        succ[u].append(v)
        indeg[v] += 1
    ready = [v for v in range(1, n + 1) if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    if len(order) != n:
        raise CyclicInputError("the input graph has a cycle")
    return order


def domdag_to_msr(edges, k: int, n=None):
    """Decision tree ``T`` with ``(T, 1^n, k)`` positive iff a dominating set of size <= k exists.

    A spine tests the vertices in reverse topological order along the
    1-edges and ends in the True leaf.  Leaving the spine at vertex ``v``
    (its feature is 0) enters a chain testing the in-neighbours of ``v`` in
    topological order; any of them being 1 reaches True.
    """
    edges = list(edges)
    n = _vertex_count(edges, n)
    order = topological_order(edges, n)
    pos = {v: i for i, v in enumerate(order)}
    preds = {v: [] for v in range(1, n + 1)}
    for u, v in edges:
        if u not in preds[v]:
            preds[v].append(u)
    nodes = {}
    below = TRUE_LEAF
    for v in order:
        chain = FALSE_LEAF
        for p in sorted(preds[v], key=pos.get, reverse=True):
            nid = f"t{v}_{p}"
            nodes[nid] = Inner(p, chain, TRUE_LEAF)
            chain = nid
        sid = f"s{v}"
        nodes[sid] = Inner(v, chain, below)
        below = sid
    return Fbdd(nodes, below, n), (1,) * n, k


def brute_has_dominating_set(edges, k: int, n=None) -> bool:
    n = _vertex_count(edges, n)
    preds = {v: set() for v in range(1, n + 1)}
    for u, v in edges:
        preds[v].add(u)
    for size in range(min(k, n) + 1):
        for dom in itertools.combinations(range(1, n + 1), size):
            d = set(dom)
            if all(v in d or preds[v] & d for v in range(1, n + 1)):
                return True
    return False


# --------------------------------------------------------------------------- shortest implicant core


@dataclass(frozen=True)
class Dnf:
    """DNF over ``x1..xn``; terms are tuples of signed variable indices.

    The last term is the *core* term used by :func:`sic_to_msr`.
    """

    n: int
    terms: tuple

    def __post_init__(self):
        terms = tuple(tuple(int(l) for l in t) for t in self.terms)
        for t in terms:
            for lit in t:
                if not 1 <= abs(lit) <= self.n:
                    raise ValueError(f"literal {lit} outside 1..{self.n}")
        object.__setattr__(self, "terms", terms)

    @property
    def core(self) -> tuple:
        return self.terms[-1]

    def value(self, x) -> int:
        return int(any(all(x[abs(l) - 1] == (l > 0) for l in t) for t in self.terms))


def dnf_circuit(dnf: Dnf, rename=None) -> BoolCircuit:
    """Or of Ands; ``rename`` maps ``(term index, variable)`` to a circuit variable."""
    rename = rename or (lambda i, v: v)
    gates = {}
    n = 0
    term_ids = []
    for i, term in enumerate(dnf.terms):
        lits = []
        for lit in term:
            var = rename(i, abs(lit))
            n = max(n, var)
            gates.setdefault(("x", var), Input(var))
            if lit > 0:
                lits.append(("x", var))
            else:
                gates.setdefault(("not", var), Not(("x", var)))
                lits.append(("not", var))
        gates[("t", i)] = And(tuple(lits))
        term_ids.append(("t", i))
    gates["out"] = Or(tuple(term_ids))
    return BoolCircuit(gates, "out", max(n, dnf.n))


def sic_to_msr(dnf: Dnf, k: int):
    """MSR instance positive iff some ``C`` within the core term, ``|C| <= k``, implies the DNF.

    Every variable outside the core is split into ``k+1`` copies and the
    DNF is conjoined over the copies, so a sufficient reason of size at most
    ``k`` can never pin down all copies of an outside variable.  Features:
    core variables get one feature each, every other variable ``k+1``
    consecutive ones, all in variable order.
    """
    core = dnf.core
    if not 0 <= k < len(core):
        raise PreconditionError(f"need 0 <= k < |core| = {len(core)}, got k = {k}")
    core_vars = {abs(l) for l in core}
    feature = {}
    nxt = 1
    for v in range(1, dnf.n + 1):
        if v in core_vars:
            feature[v] = (nxt,) * (k + 1)
            nxt += 1
        else:
            feature[v] = tuple(range(nxt, nxt + k + 1))
            nxt += k + 1
    n2 = nxt - 1
    gates = {("x", f): Input(f) for f in range(1, n2 + 1)}
    copy_ids = []
    for c in range(k + 1):
        sub = dnf_circuit(dnf, rename=lambda i, v, c=c: feature[v][c])
        for gid, gate in sub.gates.items():
            if isinstance(gate, Input):
                continue
            gates[(c, gid)] = _retag(gate, c)
        copy_ids.append((c, sub.output))
    gates["out"] = And(tuple(copy_ids))
    circuit = BoolCircuit(gates, "out", n2)
    x = [0] * n2
    for lit in core:
        if lit > 0:
            x[feature[lit][0] - 1] = 1
    return circuit_to_mlp(circuit), tuple(x), k


def _retag(gate, c):
    def ref(gid):
        return gid if gid[0] == "x" else (c, gid)

    if isinstance(gate, Not):
        return Not(ref(gate.child))
    if isinstance(gate, And):
        return And(tuple(ref(g) for g in gate.children))
    return Or(tuple(ref(g) for g in gate.children))


def brute_has_implicant_core(dnf: Dnf, k: int) -> bool:
    """Some subset of the core term's literals, of size <= k, forces the DNF true."""
    core = dnf.core
    for size in range(min(k, len(core)) + 1):
        for lits in itertools.combinations(core, size):
            fixed = {abs(l): int(l > 0) for l in lits}
            free = [v for v in range(1, dnf.n + 1) if v not in fixed]
            ok = True
            for bits in itertools.product((0, 1), repeat=len(free)):
                x = [0] * dnf.n
                for v, b in fixed.items():
                    x[v - 1] = b
                for v, b in zip(free, bits):
                    x[v - 1] = b
                if not dnf.value(x):
                    ok = False
                    break
            if ok:
                return True
    return False


# --------------------------------------------------------------------------- tautology


def taut_to_csr(formula: BoolCircuit):
    """CSR instance ``(M, x, all-undefined)`` that is positive iff ``formula`` is a tautology.

    The all-zero probe is used as ``x``.  If the probe already falsifies the
    formula, a fixed negative instance is returned instead: the network
    reading only ``x1``, which is not constant.
    """
    n = formula.n
    probe = (0,) * n
    if eval_circuit(formula, probe):
        return circuit_to_mlp(formula), probe, (None,) * n
    width = max(n, 1)
    first = tuple((2,) if i == 0 else (0,) for i in range(width))
    return Mlp((Layer(first, (-1,), STEP),), width), (0,) * width, (None,) * width


def brute_is_tautology(formula: BoolCircuit) -> bool:
    return all(eval_circuit(formula, x) for x in itertools.product((0, 1), repeat=formula.n))


# --------------------------------------------------------------------------- weighted circuit satisfiability


def _chain_mlp(n_inputs: int, t: int, positive: bool) -> Mlp:
    """``t`` layers on ``n_inputs`` inputs: copies input 1 upward, or is constant 0."""
    layers = []
    for depth in range(1, t + 1):
        rows = n_inputs if depth == 1 else 1
        w = 1 if positive else 0
        col = tuple((w,) if i == 0 else (0,) for i in range(rows))
        if depth == t:
            col = tuple((2 * c[0],) for c in col)
            layers.append(Layer(col, (-1,), STEP))
        else:
            layers.append(Layer(col, (0,), RELU))
    return Mlp(layers, n_inputs)


def wcs_to_mcr(c: MajCircuit, k: int, shortcut: bool = True):
    """MCR instance ``(M, 0^(n+1), k+1)`` positive iff ``c`` has a satisfying assignment of weight ``k``.

    The circuit is compiled to a network with one layer per level.  A fresh
    input ``v`` (feature 1) is carried up by identity units and enters the
    output with weight ``m``, the total absolute weight already entering it,
    while ``m`` is subtracted from the output bias.  With ``v = 0`` the
    output is forced to 0, so any class change flips ``v`` plus at most
    ``k`` circuit inputs; monotonicity pads those to exactly ``k``.  That
    padding needs ``n >= k``; when ``n <= 2k`` the answer is computed
    directly and a small fixed instance is returned (unless ``shortcut`` is
    off, in which case only ``k <= n`` is required).
    """
    n = c.n
    depth, _ = depth_and_weft(c)
    t = max(depth, 1)
    if n <= 2 * k and shortcut:
        answer = wcs_brute(c, k).answer
        return _chain_mlp(n + 1, t, answer), (0,) * (n + 1), k + 1
    if k > n:
        raise PreconditionError(f"weight {k} exceeds the {n} circuit inputs")
    base = majority_to_rmlp(c)
    layers = []
    for depth_i, layer in enumerate(base.layers, 1):
        last = depth_i == base.depth
        W = [list(row) for row in layer.weights]
        b = list(layer.bias)
        if last:
            m = sum(abs(w) for row in layer.weights for w in row)
            W = [[m]] + [row for row in W]
            b = [b[0] - m]
        else:
            W = [[1] + [0] * len(b)] + [[0] + row for row in W]
            b = [0] + b
        layers.append(Layer(W, b, layer.act))
    return Mlp(layers, n + 1), (0,) * (n + 1), k + 1


# --------------------------------------------------------------------------- normalization


def _small_components(c: MajCircuit):
    """Maximal connected groups of small gates (fan-in <= 3) that feed the output."""
    small = [g for g in c.topo_order if g in c.reachable
             and isinstance(c.gates[g], Maj) and not is_large(c.gates[g])]
    small_set = set(small)
    parent = {g: g for g in small}

    def find(g):
        while parent[g] != g:
            parent[g] = parent[parent[g]]
            g = parent[g]
        return g

    for g in small:
        for ch in children_of(c.gates[g]):
            if ch in small_set:
                parent[find(ch)] = find(g)
    groups = {}
    for g in small:
        groups.setdefault(find(g), []).append(g)
    return list(groups.values())


def _minimal_sets(c: MajCircuit, members, inputs, outputs, enum_limit):
    """Inclusion-minimal sets of ``inputs`` set to 1 that make each output true."""
    if (1 << len(inputs)) > enum_limit:
        raise BudgetExceeded("normalize_maj sub-circuit assignments", 1 << len(inputs), enum_limit)
    sat = {o: set() for o in outputs}
    for mask in range(1 << len(inputs)):
        val = {g: (mask >> i) & 1 for i, g in enumerate(inputs)}
        for g in members:
            gate = c.gates[g]
            ones = sum(mult for ch, mult in gate.inputs if val[ch])
            val[g] = int(2 * ones > gate.fan_in)
        for o in outputs:
            if val[o]:
                sat[o].add(mask)
    out = {}
    for o, masks in sat.items():
        out[o] = [mask for mask in sorted(masks)
                  if not any(mask & (1 << i) and (mask ^ (1 << i)) in masks for i in range(len(inputs)))]
    return out


def normalize_maj(c: MajCircuit, k: int, t: int, d_budget: int, enum_limit: int = 1 << 16):
    """Majority circuit of depth <= 3t+3 and weft <= 3t+2 with ``WCS(out, k+1) = WCS(c, k)``.

    Each maximal group of small gates is replaced by a monotone DNF per
    group output, built from its inclusion-minimal satisfying sets.  The
    Or of a DNF becomes a majority gate with as many extra edges from a new
    input ``u``; each And becomes a majority gate whose ``l`` inputs are
    repeated ``k+1`` times next to ``l(k+1)-1`` edges from a pool ``N`` of
    new inputs.  The new output is the binary majority of the old output and
    ``u``.  New inputs are numbered ``u = n+1`` and then the pool; the pool
    is only as large as the widest And needs.
    """
    depth, weft = depth_and_weft(c)
    if weft > t:
        raise PreconditionError(f"circuit weft {weft} exceeds t = {t}")
    if depth > d_budget:
        raise BudgetExceeded("normalize_maj depth", depth, d_budget)
    if k > c.n:
        raise PreconditionError(f"weight {k} exceeds the {c.n} circuit inputs")
    n = c.n
    u = n + 1
    gates = {("x", v): Input(v) for v in range(1, n + 1)}
    gates[("x", u)] = Input(u)
    ref = {}  # old gate id -> new gate id carrying its value
    for g in c.topo_order:
        if g in c.reachable and isinstance(c.gates[g], Input):
            ref[g] = ("x", c.gates[g].var)

    readers = {}
    for g in c.reachable:
        for ch in children_of(c.gates[g]):
            readers.setdefault(ch, set()).add(g)
    minimal = {}
    for members in _small_components(c):
        mset = set(members)
        inputs = []
        for h in members:
            for ch in children_of(c.gates[h]):
                if ch not in mset and ch not in inputs:
                    inputs.append(ch)
        outputs = [h for h in members
                   if h == c.output or any(r not in mset for r in readers.get(h, ()))]
        for o, masks in _minimal_sets(c, members, inputs, outputs, enum_limit).items():
            minimal[o] = [[inputs[i] for i in range(len(inputs)) if mask >> i & 1] for mask in masks]

    # the inputs of a group output lie in its cone, so topological order has them ready
    ands = []  # (new id, children), wired once the pool size is known
    for g in c.topo_order:
        if g not in c.reachable or isinstance(c.gates[g], Input):
            continue
        gate = c.gates[g]
        if is_large(gate):
            gates[("L", g)] = Maj(tuple((ref[ch], mult) for ch, mult in gate.inputs))
            ref[g] = ("L", g)
        elif g in minimal:
            terms = []
            for j, chosen in enumerate(minimal[g]):
                aid = ("A", g, j)
                ands.append((aid, [ref[ch] for ch in chosen]))
                terms.append(aid)
            pad = ((("x", u), len(terms)),) if terms else ()
            gates[("O", g)] = Maj(tuple((a, 1) for a in terms) + pad)
            ref[g] = ("O", g)
    pool = max((len(kids) * (k + 1) - 1 for _, kids in ands), default=0)
    for i in range(pool):
        gates[("x", u + 1 + i)] = Input(u + 1 + i)
    for aid, kids in ands:
        extra = len(kids) * (k + 1) - 1
        gates[aid] = Maj(tuple((kid, k + 1) for kid in kids)
                         + tuple((("x", u + 1 + i), 1) for i in range(extra)))
    gates["root"] = Maj(((ref[c.output], 1), (("x", u), 1)))
    return MajCircuit(gates, "root", u + pool), k + 1

