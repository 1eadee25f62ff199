"""Timing sweeps contrasting the polynomial FBDD counter with MLP enumeration.

Rows are ``model,query,size,ns,result``: ``size`` is the FBDD edge count or
the number of free MLP features, ``ns`` the best of ``repeats`` runs.
"""
from __future__ import annotations

import csv
import math
import random
import time

from .fbdd_engine import cc_fbdd
from .mlp_engine import cc_mlp
from .random_models import layered_fbdd, random_mlp

FIELDS = ("model", "query", "size", "ns", "result")
FBDD_LEVELS = 40


def _best_ns(fn, repeats: int):
    best, result = None, None
    for _ in range(repeats):
        start = time.perf_counter_ns()
        result = fn()
        elapsed = time.perf_counter_ns() - start
        best = elapsed if best is None else min(best, elapsed)
    return best, result


def bench_cc_fbdd(node_counts, seed: int = 0, repeats: int = 3) -> list:
    rows = []
    rng = random.Random(seed)
    for nodes in node_counts:
        m = layered_fbdd(rng, FBDD_LEVELS, max(1, nodes // FBDD_LEVELS))
        y = (None,) * m.dim
        ns, count = _best_ns(lambda: cc_fbdd(m, y), repeats)
        rows.append({"model": "fbdd", "query": "cc", "size": m.size, "ns": ns, "result": count})
    return rows


def bench_cc_mlp(free_counts, seed: int = 0, repeats: int = 3) -> list:
    rows = []
    n = max(free_counts)
    m = random_mlp(random.Random(seed), n, hidden=(8, 4))
    for free in free_counts:
        y = (None,) * free + (0,) * (n - free)
        ns, count = _best_ns(lambda: cc_mlp(m, y), repeats)
        rows.append({"model": "mlp", "query": "cc", "size": free, "ns": ns, "result": count})
    return rows


def loglog_slope(rows) -> float:
    """Least-squares slope of log(ns) against log(size)."""
    xs = [math.log(r["size"]) for r in rows]
    ys = [math.log(r["ns"]) for r in rows]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    return sum((a - mx) * (b - my) for a, b in zip(xs, ys)) / sum((a - mx) ** 2 for a in xs)


def step_ratios(rows) -> list:
    """Runtime ratio between consecutive free-feature counts."""
    rows = sorted(rows, key=lambda r: r["size"])
    return [b["ns"] / a["ns"] for a, b in zip(rows, rows[1:])]


def write_csv(rows, stream) -> None:
    writer = csv.DictWriter(stream, fieldnames=FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def plot(rows, path: str) -> None:
    """Two panels: FBDD counting time against size, MLP counting time against free features."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    fb = sorted((r for r in rows if r["model"] == "fbdd"), key=lambda r: r["size"])
    ml = sorted((r for r in rows if r["model"] == "mlp"), key=lambda r: r["size"])
    if fb:
        left.loglog([r["size"] for r in fb], [r["ns"] / 1e6 for r in fb], "o-")
        left.set_xlabel("FBDD edges")
        left.set_ylabel("cc time (ms)")
        left.set_title("FBDD counting")
    if ml:
        right.semilogy([r["size"] for r in ml], [r["ns"] / 1e6 for r in ml], "s-", color="tab:red")
        right.set_xlabel("free features")
        right.set_ylabel("cc time (ms)")
        right.set_title("MLP counting by enumeration")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
