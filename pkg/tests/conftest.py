"""Shared fixtures: a small worked example and exact integer oracles.

The oracle functions recompute the criterion with Python big-integer
arithmetic (math.factorial / math.comb / an exact Stirling table), taking
a single float log at the end of each term, so they are independent of the
package's gammaln-based evaluation.
"""

import math
from functools import lru_cache

import numpy as np
import pytest

from tricluster import TemporalEdgeList, Triclustering
from tricluster.model import compute_counts


# ---------------------------------------------------------------------------
# exact big-integer oracles


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if k == 0:
        return 1 if n == 0 else 0
    if n == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def partitions_up_to(n: int, k: int) -> int:
    """B(n, k): number of partitions of n items into at most k groups."""
    return sum(stirling2(n, j) for j in range(1, k + 1))


def oracle_cost(edges, source_assign, dest_assign, boundaries) -> float:
    """Criterion value computed with exact integer arithmetic."""
    model = compute_counts(edges, np.asarray(source_assign, dtype=np.int64),
                           np.asarray(dest_assign, dtype=np.int64),
                           np.asarray(boundaries, dtype=np.int64))
    return oracle_cost_model(model, edges.n_sources, edges.n_dests)


def oracle_cost_model(model, n_sources, n_dests) -> float:
    m = model.m
    k_s, k_d, k_t = model.k_s, model.k_d, model.k_t
    sizes_s = np.bincount(model.source_assign, minlength=k_s)
    sizes_d = np.bincount(model.dest_assign, minlength=k_d)

    total = math.log(n_sources) + math.log(n_dests) + math.log(m)
    total += math.log(partitions_up_to(n_sources, k_s))
    total += math.log(partitions_up_to(n_dests, k_d))
    n_tri = k_s * k_d * k_t
    total += math.log(math.comb(m + n_tri - 1, n_tri - 1))
    for sig, size in zip(model.source_marginals, sizes_s):
        total += math.log(math.comb(int(sig) + int(size) - 1, int(size) - 1))
    for dlt, size in zip(model.dest_marginals, sizes_d):
        total += math.log(math.comb(int(dlt) + int(size) - 1, int(size) - 1))

    total += math.log(math.factorial(m))
    for c in model.counts.values():
        total -= math.log(math.factorial(int(c)))
    for tau in model.time_marginals:
        total += math.log(math.factorial(int(tau)))
    for sig in model.source_marginals:
        total += math.log(math.factorial(int(sig)))
    for d in model.out_degrees:
        total -= math.log(math.factorial(int(d)))
    for dlt in model.dest_marginals:
        total += math.log(math.factorial(int(dlt)))
    for d in model.in_degrees:
        total -= math.log(math.factorial(int(d)))
    return total


def random_instance(rng, max_vertices=8, max_edges=64):
    """A random edge list plus a random compatible model structure."""
    n_s = int(rng.integers(1, max_vertices + 1))
    n_d = int(rng.integers(1, max_vertices + 1))
    m = int(rng.integers(1, max_edges + 1))
    edges = TemporalEdgeList.from_arrays(
        rng.integers(n_s, size=m), rng.integers(n_d, size=m),
        raw_times=rng.random(m), n_sources=n_s, n_dests=n_d)
    sa = _random_surjection(rng, n_s)
    da = _random_surjection(rng, n_d)
    k_t = int(rng.integers(1, min(m, 6) + 1))
    cuts = np.sort(rng.choice(np.arange(1, m), size=k_t - 1, replace=False)) \
        if k_t > 1 else np.empty(0, dtype=np.int64)
    boundaries = np.concatenate([[0], cuts, [m]]).astype(np.int64)
    return edges, sa, da, boundaries


def _random_surjection(rng, n):
    """Random assignment of n items onto 1..k clusters with none empty."""
    k = int(rng.integers(1, n + 1))
    assign = np.concatenate([np.arange(k), rng.integers(k, size=n - k)])
    return np.asarray(rng.permutation(assign), dtype=np.int64)


# ---------------------------------------------------------------------------
# worked example: 6 sources, 8 destinations, 50 edges, 3x2x3 blocks

MU_TABLES = [
    [[5, 1], [2, 0], [4, 0]],   # first interval, 12 edges
    [[2, 2], [2, 5], [5, 5]],   # second interval, 21 edges
    [[0, 0], [1, 0], [1, 15]],  # third interval, 17 edges
]
OUT_DEGREES = [3, 6, 1, 2, 8, 30]
IN_DEGREES = [3, 6, 2, 6, 5, 13, 8, 7]
SOURCE_ASSIGN = [0, 0, 0, 1, 1, 2]
DEST_ASSIGN = [0, 0, 0, 0, 0, 1, 1, 1]
TIME_BOUNDARIES = [0, 12, 33, 50]


def build_worked_example() -> tuple:
    """(edges, model) realizing the documented block structure."""
    mu = np.array(MU_TABLES).transpose(1, 2, 0)  # (k_s, k_d, k_t)
    src_assign = np.array(SOURCE_ASSIGN, dtype=np.int64)
    dst_assign = np.array(DEST_ASSIGN, dtype=np.int64)
    out_deg = np.array(OUT_DEGREES, dtype=np.int64)
    in_deg = np.array(IN_DEGREES, dtype=np.int64)
    b = np.array(TIME_BOUNDARIES, dtype=np.int64)

    # realize an edge list with exactly these counts and degrees: hand the
    # slots of each cluster to its vertices in round-robin degree order
    src_slots = {i: [] for i in range(3)}
    for v in np.argsort(-out_deg, kind="stable"):
        src_slots[src_assign[v]].extend([v] * out_deg[v])
    dst_slots = {j: [] for j in range(2)}
    for v in np.argsort(-in_deg, kind="stable"):
        dst_slots[dst_assign[v]].extend([v] * in_deg[v])

    sources, dests, ranks = [], [], []
    rank = 1
    taken_s = {i: 0 for i in range(3)}
    taken_d = {j: 0 for j in range(2)}
    for l in range(3):
        for i in range(3):
            for j in range(2):
                for _ in range(mu[i, j, l]):
                    sources.append(src_slots[i][taken_s[i]])
                    dests.append(dst_slots[j][taken_d[j]])
                    taken_s[i] += 1
                    taken_d[j] += 1
                    ranks.append(rank)
                    rank += 1
    edges = TemporalEdgeList.from_arrays(sources, dests, time_ranks=ranks,
                                         n_sources=6, n_dests=8)
    model = compute_counts(edges, src_assign, dst_assign, b)
    return edges, model


@pytest.fixture(scope="session")
def worked_example():
    edges, model = build_worked_example()
    assert np.array_equal(edges.out_degrees, OUT_DEGREES)
    assert np.array_equal(edges.in_degrees, IN_DEGREES)
    assert np.array_equal(model.cube(),
                          np.array(MU_TABLES).transpose(1, 2, 0))
    return edges, model
