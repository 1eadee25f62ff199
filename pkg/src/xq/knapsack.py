"""Counting knapsack solutions, and the map from perceptron completions to knapsack."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .core import Perceptron, PreconditionError, budget_check

DEFAULT_DP_LIMIT = 10**7


class NoPositiveCompletion(PreconditionError):
    """Every completion is negative, so the knapsack bound would be negative."""


@dataclass(frozen=True)
class KnapsackInstance:
    s: tuple
    k: int

    def __post_init__(self):
        s = tuple(int(v) for v in self.s)
        if any(v < 0 for v in s) or self.k < 0:
            raise ValueError("knapsack sizes and bound must be non-negative")
        object.__setattr__(self, "s", s)


def count_knapsack_dp(inst: KnapsackInstance, limit: int = DEFAULT_DP_LIMIT) -> int:
    """Number of subsets ``S`` with ``sum(s[i] for i in S) <= k``.

    Row ``i`` of the table holds, for every capacity ``C``, the number of
    subsets of the first ``i`` items fitting in ``C``; only one row is kept.
    When ``k`` is too large for a dense row (scaled rational weights), the
    same recurrence runs over the reachable sums only, of which there are
    at most ``min(k+1, 2**m)``.
    """
    m, k = len(inst.s), inst.k
    dense = (m + 1) * (k + 1)
    if dense > limit:
        budget_check("knapsack table cells", min(dense, (m + 1) << m), limit)
        return _count_sparse(inst.s, k)
    dp = np.ones(k + 1, dtype=np.int64 if m < 62 else object)
    for size in inst.s:
        if size == 0:
            dp = dp * 2
        elif size <= k:
            dp[size:] = dp[size:] + dp[:k + 1 - size]
    return int(dp[k])


def _count_sparse(sizes, k: int) -> int:
    ways = Counter({0: 1})
    for size in sizes:
        step = Counter(ways)
        for total, count in ways.items():
            if total + size <= k:
                step[total + size] += count
        ways = step
    return sum(ways.values())


def count_subset_sum(s, k: int, limit: int = DEFAULT_DP_LIMIT) -> int:
    """Number of subsets summing to exactly ``k``, as a difference of two knapsack counts."""
    here = count_knapsack_dp(KnapsackInstance(s, k), limit)
    if k == 0:
        return here
    return here - count_knapsack_dp(KnapsackInstance(s, k - 1), limit)


def perceptron_to_knapsack(m: Perceptron, y) -> KnapsackInstance:
    """Knapsack instance whose solution count equals the positive completions of ``y``.

    With the defined part folded into the bias (``b2 = b + sum of defined
    w_i*y_i``) and ``J`` the largest reachable free sum, a free assignment
    ``z`` is mapped to the set of features where ``z`` departs from the
    maximizing assignment.  Its value is ``J - sum |w_i|`` over that set, so
    it is positive exactly when the set fits in ``J + b2``.
    """
    if len(y) != m.dim:
        raise PreconditionError(f"partial instance has length {len(y)}, perceptron {m.dim}")
    if any(v.denominator != 1 for v in (*m.w, m.b)):
        raise PreconditionError("perceptron_to_knapsack needs integer weights and bias")
    b2 = int(m.b) + sum(int(w) for w, c in zip(m.w, y) if c == 1)
    free = [int(w) for w, c in zip(m.w, y) if c is None]
    top = sum(w for w in free if w > 0)
    k = top + b2
    if k < 0:
        raise NoPositiveCompletion(f"largest completion value {top + b2} is negative")
    return KnapsackInstance(tuple(abs(w) for w in free), k)

