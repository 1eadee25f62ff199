"""Brute-force reference answers for the four queries.

Deliberately naive: every answer comes from evaluating the model on explicit
instances, with loops written out here rather than borrowed from the
engines.  Evaluations are cached per call so the subset-times-completions
scan of MSR stays affordable.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .core import BudgetExceeded, NotCompletionError, QueryVerdict, evaluate

DEFAULT_LIMIT = 1 << 22


@dataclass(frozen=True)
class MCR:
    x: tuple
    k: int


@dataclass(frozen=True)
class MSR:
    x: tuple
    k: int


@dataclass(frozen=True)
class CSR:
    x: tuple
    y: tuple


@dataclass(frozen=True)
class CC:
    y: tuple


def _all_fillings(cells):
    holes = [i for i, c in enumerate(cells) if c is None]
    for bits in itertools.product((0, 1), repeat=len(holes)):
        full = list(cells)
        for i, b in zip(holes, bits):
            full[i] = b
        yield tuple(full)


def _guard(what, need, limit):
    if need > limit:
        raise BudgetExceeded(f"oracle {what}", need, limit)


def oracle_query(model, query, limit: int = DEFAULT_LIMIT):
    cache = {}

    def label(z):
        if z not in cache:
            cache[z] = evaluate(model, z)
        return cache[z]

    if isinstance(query, MCR):
        x, n = tuple(query.x), len(query.x)
        top = min(query.k, n)
        _guard("MCR ball", sum(math.comb(n, d) for d in range(top + 1)), limit)
        here = label(x)
        for d in range(1, top + 1):
            for flips in itertools.combinations(range(n), d):
                z = tuple(1 - v if i in flips else v for i, v in enumerate(x))
                if label(z) != here:
                    return QueryVerdict(True, z)
        return QueryVerdict(False)

    if isinstance(query, MSR):
        x, n = tuple(query.x), len(query.x)
        top = min(query.k, n)
        _guard("MSR subsets x completions", sum(math.comb(n, d) * 2 ** (n - d) for d in range(top + 1)), limit)
        here = label(x)
        for d in range(top + 1):
            for keep in itertools.combinations(range(n), d):
                y = tuple(v if i in keep else None for i, v in enumerate(x))
                if all(label(z) == here for z in _all_fillings(y)):
                    return QueryVerdict(True, y)
        return QueryVerdict(False)

    if isinstance(query, CSR):
        x, y = tuple(query.x), tuple(query.y)
        if len(x) != len(y) or any(c is not None and c != v for v, c in zip(x, y)):
            raise NotCompletionError("x is not a completion of y")
        _guard("CSR completions", 2 ** sum(c is None for c in y), limit)
        here = label(x)
        return all(label(z) == here for z in _all_fillings(y))

    if isinstance(query, CC):
        y = tuple(query.y)
        _guard("CC completions", 2 ** sum(c is None for c in y), limit)
        return sum(label(z) for z in _all_fillings(y))

    raise TypeError(f"unknown query {query!r}")
