"""Queries over free BDDs.

MCR, CSR and CC are single bottom-up or top-down passes over the diagram.
MSR is NP-hard already for decision trees, so it is an exact search over
subsets of the tested features with the CSR pass as the certificate check.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .core import (
    DimensionError,
    Fbdd,
    Inner,
    QueryVerdict,
    budget_check,
    check_completion,
    eval_fbdd,
    free_count,
    restrict,
)

INF = math.inf
DEFAULT_LIMIT = 1 << 22


def _dims(m: Fbdd, x):
    if len(x) != m.dim:
        raise DimensionError(f"expected dimension {m.dim}, got {len(x)}")


def mcr_fbdd(m: Fbdd, x, k: int) -> QueryVerdict:
    """Fewest flips of ``x`` reaching a leaf of the opposite class.

    ``cost[u]`` is the least number of disagreements with ``x`` along a path
    from ``u`` to a leaf of the other class.  Freeness means each path tests a
    feature at most once, so a path's disagreements are exactly the flips
    needed to follow it.  Ties prefer the hi edge.
    """
    _dims(m, x)
    label = eval_fbdd(m, x)
    cost = {}
    choice = {}
    for u in m.bottom_up:
        node = m.nodes[u]
        if not isinstance(node, Inner):
            cost[u] = 0 if int(node.value) != label else INF
            continue
        xi = x[node.label - 1]
        via_lo = (xi == 1) + cost[node.lo]
        via_hi = (xi == 0) + cost[node.hi]
        if via_hi <= via_lo:
            cost[u], choice[u] = via_hi, 1
        else:
            cost[u], choice[u] = via_lo, 0
    if cost[m.root] > k:
        return QueryVerdict(False)
    y = list(x)
    u = m.root
    while u in choice:
        node = m.nodes[u]
        y[node.label - 1] = choice[u]
        u = node.hi if choice[u] else node.lo
    return QueryVerdict(True, tuple(y))


def _reachable_leaf_values(m: Fbdd, y) -> set:
    seen = {m.root}
    stack = [m.root]
    values = set()
    while stack:
        node = m.nodes[stack.pop()]
        if not isinstance(node, Inner):
            values.add(node.value)
            continue
        c = y[node.label - 1]
        targets = (node.lo, node.hi) if c is None else ((node.hi if c else node.lo),)
        for v in targets:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return values


def csr_fbdd(m: Fbdd, x, y) -> bool:
    """True iff every completion of ``y`` has the class of ``x``.

    Edges contradicting a defined cell of ``y`` are pruned; ``y`` is
    sufficient iff only one kind of leaf stays reachable.
    """
    check_completion(x, y)
    _dims(m, x)
    return len(_reachable_leaf_values(m, y)) == 1


def acceptance_probabilities(m: Fbdd, y) -> dict:
    """Probability of reaching the True leaf from each node when free features are fair coins."""
    q = {}
    for u in m.bottom_up:
        node = m.nodes[u]
        if not isinstance(node, Inner):
            q[u] = Fraction(int(node.value))
            continue
        c = y[node.label - 1]
        if c is None:
            q[u] = (q[node.lo] + q[node.hi]) / 2
        else:
            q[u] = q[node.hi] if c else q[node.lo]
    return q


def cc_fbdd(m: Fbdd, y) -> int:
    """Number of positive completions of ``y``.

    Along any path the free features are tested at most once each, so the
    root probability times ``2**free`` is an integer.
    """
    _dims(m, y)
    count = acceptance_probabilities(m, y)[m.root] * (1 << free_count(y))
    assert count.denominator == 1
    return int(count)


def msr_fbdd(m: Fbdd, x, k: int, limit: int = DEFAULT_LIMIT) -> QueryVerdict:
    """Smallest sufficient reason of size at most ``k``, by ascending subset size.

    Only features tested somewhere in ``m`` are candidates; the others are
    left undefined since fixing them never restricts any path.
    """
    _dims(m, x)
    tested = [label - 1 for label in m.tested_labels]
    top = min(max(k, -1), len(tested))
    budget_check("msr_fbdd candidate subsets", sum(math.comb(len(tested), s) for s in range(top + 1)), limit)
    for size in range(top + 1):
        for subset in itertools.combinations(tested, size):
            y = restrict(x, subset)
            if len(_reachable_leaf_values(m, y)) == 1:
                return QueryVerdict(True, y)
    return QueryVerdict(False)
