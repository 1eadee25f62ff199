"""Polynomial (and pseudo-polynomial) query algorithms for perceptrons.

Every feature contributes to the perceptron's value independently, which is
what makes the greedy orderings below optimal.  For an instance ``x`` the
*importance* of feature ``i`` is ``w_i`` when ``x_i = 1`` and ``-w_i`` when
``x_i = 0``: flipping ``i`` lowers the value by exactly that amount.

Negative instances are handled by explicit dual rules instead of negating the
perceptron, since ``not (v >= 0)`` is ``v < 0`` and negation would move the
inclusive boundary.
"""
from __future__ import annotations

from .core import (
    DimensionError,
    Perceptron,
    QueryVerdict,
    check_completion,
    eval_perceptron,
    free_count,
)
from .knapsack import DEFAULT_DP_LIMIT, count_knapsack_dp, perceptron_to_knapsack


def importance(m: Perceptron, x) -> list:
    return [w if xi else -w for w, xi in zip(m.w, x)]


def importance_order(m: Perceptron, x, descending: bool = True) -> list:
    """Feature indices sorted by importance; ties keep ascending index order."""
    s = importance(m, x)
    return sorted(range(m.dim), key=lambda i: -s[i] if descending else s[i])


def _dims(m: Perceptron, x):
    if len(x) != m.dim:
        raise DimensionError(f"instance has length {len(x)}, perceptron {m.dim}")


def mcr_perceptron(m: Perceptron, x, k: int) -> QueryVerdict:
    """Flip the (at most ``k``) features that push the value hardest toward the other class."""
    _dims(m, x)
    label = eval_perceptron(m, x)
    s = importance(m, x)
    if label:
        order = [i for i in importance_order(m, x, descending=True) if s[i] > 0]
    else:
        order = [i for i in importance_order(m, x, descending=False) if s[i] < 0]
    flips = order[:max(k, 0)]
    if not flips:
        return QueryVerdict(False)
    x2 = list(x)
    for i in flips:
        x2[i] = 1 - x2[i]
    x2 = tuple(x2)
    if eval_perceptron(m, x2) != label:
        return QueryVerdict(True, x2)
    return QueryVerdict(False)


def msr_perceptron(m: Perceptron, x, k: int) -> QueryVerdict:
    """Smallest sufficient reason, found by defining features in importance order.

    For a positive ``x`` the worst completion of a partial instance sets each
    free feature to ``min(0, w_i)``; for a negative ``x`` the worst case is
    ``max(0, w_i)``.  Defining feature ``i`` improves the worst case by
    ``max(0, s_i)`` (positive) or ``max(0, -s_i)`` (negative), so defining the
    most important features first reaches sufficiency with the fewest.
    """
    _dims(m, x)
    label = eval_perceptron(m, x)
    order = importance_order(m, x, descending=bool(label))
    if label:
        worst = sum(min(w, 0) for w in m.w)
        ok = lambda v: v >= -m.b
    else:
        worst = sum(max(w, 0) for w in m.w)
        ok = lambda v: v < -m.b
    defined = []
    for step in range(m.dim + 1):
        if ok(worst):
            if step > k:
                return QueryVerdict(False)
            keep = set(defined)
            return QueryVerdict(True, tuple(v if i in keep else None for i, v in enumerate(x)))
        i = order[step]
        w = m.w[i]
        free_part = min(w, 0) if label else max(w, 0)
        worst += w * x[i] - free_part
        defined.append(i)
    raise AssertionError("a full instance is always sufficient for itself")


def _free_range(m: Perceptron, y):
    shifted = m.b + sum(w for w, c in zip(m.w, y) if c == 1)
    lo = sum(min(w, 0) for w, c in zip(m.w, y) if c is None)
    hi = sum(max(w, 0) for w, c in zip(m.w, y) if c is None)
    return shifted, lo, hi


def csr_perceptron(m: Perceptron, x, y) -> bool:
    """True iff all completions of ``y`` share the class of ``x``."""
    check_completion(x, y)
    _dims(m, x)
    shifted, lo, hi = _free_range(m, y)
    return not (lo < -shifted and hi >= -shifted)


def cc_perceptron(m: Perceptron, y, limit: int = DEFAULT_DP_LIMIT) -> int:
    """Number of positive completions of ``y`` via the knapsack counting table."""
    _dims(m, y)
    shifted, lo, hi = _free_range(m, y)
    if hi < -shifted:
        return 0
    if lo >= -shifted:
        return 1 << free_count(y)
    return count_knapsack_dp(perceptron_to_knapsack(m.integer_scaled(), y), limit)
