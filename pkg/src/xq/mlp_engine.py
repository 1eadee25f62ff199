"""Exact enumeration deciders for MLPs.

All four queries are hard for MLPs, so each one enumerates.  Candidates are
scanned by ascending size and, within a size, in lexicographic order of the
chosen positions; the returned witness is therefore the first minimum one.
Batches go through :func:`eval_mlp_batch`.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .core import (
    DimensionError,
    Mlp,
    QueryVerdict,
    budget_check,
    check_completion,
    completion_matrix,
    eval_mlp_batch,
    free_count,
    restrict,
)

DEFAULT_LIMIT = 1 << 22
BLOCK = 1 << 16


def _dims(m: Mlp, x):
    if len(x) != m.input_dim:
        raise DimensionError(f"expected dimension {m.input_dim}, got {len(x)}")


def _label(m: Mlp, x) -> int:
    return int(eval_mlp_batch(m, np.array([x], dtype=np.int64))[0])


def mcr_mlp(m: Mlp, x, k: int, limit: int = DEFAULT_LIMIT) -> QueryVerdict:
    """Closest instance (at most ``k`` flips) of the other class."""
    _dims(m, x)
    n = len(x)
    top = min(max(k, 0), n)
    budget_check("mcr_mlp Hamming ball", sum(math.comb(n, s) for s in range(top + 1)), limit)
    label = _label(m, x)
    base = np.array(x, dtype=np.int64)
    for size in range(1, top + 1):
        combos = itertools.combinations(range(n), size)
        while True:
            chunk = list(itertools.islice(combos, BLOCK))
            if not chunk:
                break
            X = np.tile(base, (len(chunk), 1))
            rows = np.repeat(np.arange(len(chunk)), size)
            X[rows, np.array(chunk).ravel()] ^= 1
            hits = np.flatnonzero(eval_mlp_batch(m, X) != label)
            if hits.size:
                return QueryVerdict(True, tuple(int(v) for v in X[hits[0]]))
    return QueryVerdict(False)


def truth_table(m: Mlp) -> np.ndarray:
    """Outputs on all ``2**n`` inputs as an array of shape ``(2,) * n``."""
    n = m.input_dim
    out = np.concatenate([eval_mlp_batch(m, completion_matrix((None,) * n, start, start + BLOCK))
                          for start in range(0, 1 << n, BLOCK)])
    return out.reshape((2,) * n)


def msr_mlp(m: Mlp, x, k: int, limit: int = DEFAULT_LIMIT) -> QueryVerdict:
    """Smallest sufficient reason of size at most ``k``.

    The required work is charged as the sum over subset sizes of
    ``C(n, s) * 2**(n - s)`` evaluations.  Since that already covers the
    ``2**n`` truth table, the table is built once and each candidate is
    checked by slicing it.
    """
    _dims(m, x)
    n = len(x)
    top = min(max(k, -1), n)
    budget_check("msr_mlp subsets x completions",
                 sum(math.comb(n, s) << (n - s) for s in range(top + 1)), limit)
    if top < 0:
        return QueryVerdict(False)
    table = truth_table(m)
    label = table[tuple(x)]
    for size in range(top + 1):
        for subset in itertools.combinations(range(n), size):
            y = restrict(x, subset)
            view = table[tuple(slice(None) if c is None else c for c in y)]
            if np.all(view == label):
                return QueryVerdict(True, y)
    return QueryVerdict(False)


def _completion_outputs(m: Mlp, y, limit: int, what: str):
    free = free_count(y)
    budget_check(what, 1 << free, limit)
    for start in range(0, 1 << free, BLOCK):
        yield eval_mlp_batch(m, completion_matrix(y, start, start + BLOCK))


def csr_mlp(m: Mlp, x, y, limit: int = DEFAULT_LIMIT) -> bool:
    """True iff every completion of ``y`` has the class of ``x``."""
    check_completion(x, y)
    _dims(m, x)
    label = _label(m, x)
    return all(np.all(block == label) for block in _completion_outputs(m, y, limit, "csr_mlp completions"))


def cc_mlp(m: Mlp, y, limit: int = DEFAULT_LIMIT) -> int:
    """Number of positive completions of ``y``."""
    _dims(m, y)
    return sum(int(np.count_nonzero(block)) for block in _completion_outputs(m, y, limit, "cc_mlp completions"))
