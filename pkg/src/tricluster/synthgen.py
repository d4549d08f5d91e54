"""Synthetic temporal graphs, noise operators, model sampling, scoring.

The benchmark process draws each edge's timestamp uniformly on [0, 1],
picks a cluster pair from a time-dependent block matrix that slides from a
quasi-co-clique (off-diagonal mass) to a quasi-clique (diagonal mass), and
places the endpoints uniformly inside the chosen balanced clusters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.metrics import adjusted_rand_score

from .edges import TemporalEdgeList, rank_transform
from .model import Triclustering

__all__ = [
    "GeneratorConfig",
    "theta",
    "balanced_partition",
    "generate",
    "reallocate",
    "shuffle_time",
    "erdos_renyi_temporal",
    "sample_from_model",
    "recovery_score",
]

MODES = ("temporal", "shuffled", "erdos_renyi")


@dataclass(frozen=True)
class GeneratorConfig:
    k: int = 5
    n_sources: int = 50
    n_dests: int = 50
    m: int = 2 ** 15
    seed: int = 0
    noise_fraction: float = 0.0
    mode: str = "temporal"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.n_sources < self.k or self.n_dests < self.k:
            raise ValueError("need at least k vertices per side")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if not 0.0 <= self.noise_fraction <= 1.0:
            raise ValueError("noise_fraction must lie in [0, 1]")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")


def theta(t: float, k: int) -> np.ndarray:
    """Block probability matrix at time t in [0, 1].

    Diagonal cells hold (0.9 t + 0.1 (1 - t)) / k, off-diagonal cells
    (0.1 t + 0.9 (1 - t)) / (k (k - 1)); the entries sum to one.  For k=1
    the single cell is 1.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if k == 1:
        return np.ones((1, 1))
    off = (0.1 * t + 0.9 * (1.0 - t)) / (k * (k - 1))
    out = np.full((k, k), off)
    np.fill_diagonal(out, (0.9 * t + 0.1 * (1.0 - t)) / k)
    return out


def balanced_partition(n: int, k: int) -> np.ndarray:
    """Cluster label per vertex; remainder vertices go to the lowest-index
    clusters."""
    sizes = np.full(k, n // k, dtype=np.int64)
    sizes[: n % k] += 1
    return np.repeat(np.arange(k, dtype=np.int64), sizes)


def generate(config: GeneratorConfig):
    """Draw a temporal graph from the time-sliding block process.

    Returns ``(edges, truth)`` where truth maps each occurring vertex to its
    planted cluster (arrays aligned with the edge list's dense indices).
    For the shuffled and erdos_renyi modes the corresponding transform is
    applied after generation.
    """
    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    k, m = config.k, config.m

    if config.mode == "erdos_renyi":
        edges = erdos_renyi_temporal(config.n_sources, config.n_dests, m,
                                     config.seed)
        truth = {
            "source": balanced_partition(config.n_sources, k),
            "dest": balanced_partition(config.n_dests, k),
        }
        return edges, truth

    t = rng.random(m)
    if k == 1:
        ui = np.zeros(m, dtype=np.int64)
        vj = np.zeros(m, dtype=np.int64)
    else:
        diag_mass = 0.9 * t + 0.1 * (1.0 - t)
        u = rng.random(m)
        on_diag = u < diag_mass
        ui = np.empty(m, dtype=np.int64)
        vj = np.empty(m, dtype=np.int64)
        n_on = int(on_diag.sum())
        diag_idx = rng.integers(k, size=n_on)
        ui[on_diag] = diag_idx
        vj[on_diag] = diag_idx
        # off-diagonal pairs are uniform over the k(k-1) ordered pairs
        pair = rng.integers(k * (k - 1), size=m - n_on)
        i_off = pair // (k - 1)
        j_off = pair % (k - 1)
        j_off = j_off + (j_off >= i_off)
        ui[~on_diag] = i_off
        vj[~on_diag] = j_off

    src_part = balanced_partition(config.n_sources, k)
    dst_part = balanced_partition(config.n_dests, k)
    src_starts = np.searchsorted(src_part, np.arange(k))
    src_sizes = np.bincount(src_part, minlength=k)
    dst_starts = np.searchsorted(dst_part, np.arange(k))
    dst_sizes = np.bincount(dst_part, minlength=k)
    src = src_starts[ui] + rng.integers(0, src_sizes[ui])
    dst = dst_starts[vj] + rng.integers(0, dst_sizes[vj])

    if config.noise_fraction > 0:
        src, dst, t = _reallocate_arrays(
            src, dst, t, config.n_sources, config.n_dests,
            config.noise_fraction, rng)

    if config.mode == "shuffled":
        t = rng.permutation(t)

    edges = TemporalEdgeList.from_arrays(
        src, dst, raw_times=t,
        n_sources=config.n_sources, n_dests=config.n_dests)
    truth = {"source": src_part, "dest": dst_part}
    return edges, truth


def _reallocate_arrays(src, dst, t, n_sources, n_dests, fraction, rng):
    n_noise = int(math.floor(fraction * len(src)))
    if n_noise == 0:
        return src, dst, t
    idx = rng.choice(len(src), size=n_noise, replace=False)
    src = src.copy()
    dst = dst.copy()
    t = t.copy()
    src[idx] = rng.integers(n_sources, size=n_noise)
    dst[idx] = rng.integers(n_dests, size=n_noise)
    t[idx] = rng.random(n_noise)
    return src, dst, t


def reallocate(edges: TemporalEdgeList, fraction: float, seed: int) -> TemporalEdgeList:
    """Resample all three fields of a random ``floor(fraction * m)`` subset
    of edges, uniformly and independently; timestamps are re-ranked."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must lie in [0, 1]")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    t = edges.raw_times
    if t is None:
        t = edges.time_ranks.astype(float)
    src, dst, t = _reallocate_arrays(edges.sources, edges.destinations, t,
                                     edges.n_sources, edges.n_dests,
                                     fraction, rng)
    out = TemporalEdgeList(
        sources=src, destinations=dst, time_ranks=rank_transform(t),
        raw_times=t, source_labels=edges.source_labels,
        dest_labels=edges.dest_labels)
    return out


def shuffle_time(edges: TemporalEdgeList, seed: int) -> TemporalEdgeList:
    """Uniformly permute the time ranks across edges; the (source,
    destination) multiset is untouched."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    perm = rng.permutation(edges.m)
    raw = None if edges.raw_times is None else edges.raw_times[perm]
    return TemporalEdgeList(
        sources=edges.sources, destinations=edges.destinations,
        time_ranks=edges.time_ranks[perm], raw_times=raw,
        source_labels=edges.source_labels, dest_labels=edges.dest_labels)


def erdos_renyi_temporal(n_sources: int, n_dests: int, m: int,
                         seed: int) -> TemporalEdgeList:
    """Uniform independent sources, destinations and timestamps."""
    if n_sources < 1 or n_dests < 1 or m < 1:
        raise ValueError("sizes must be positive")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return TemporalEdgeList.from_arrays(
        rng.integers(n_sources, size=m),
        rng.integers(n_dests, size=m),
        raw_times=rng.random(m),
        n_sources=n_sources, n_dests=n_dests)


def sample_from_model(model: Triclustering, seed: int) -> TemporalEdgeList:
    """Realize the three-stage uniform mechanism of a triclustering.

    Recomputing the counts of the output under the model's partitions
    reproduces the count cube, degrees and interval sizes exactly.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    m = model.m
    k_t = model.k_t

    # stage 1: uniform assignment of the edge slots to triclusters
    tri_keys = sorted(model.counts.keys())
    labels = np.repeat(
        np.arange(len(tri_keys)),
        [model.counts[k] for k in tri_keys])
    edge_tri = rng.permutation(labels)
    tri_i = np.array([k[0] for k in tri_keys])[edge_tri]
    tri_j = np.array([k[1] for k in tri_keys])[edge_tri]
    tri_l = np.array([k[2] for k in tri_keys])[edge_tri]

    # stage 2: map slots to vertices per cluster, respecting the degrees
    src = np.empty(m, dtype=np.int64)
    for i in range(model.k_s):
        slots = np.flatnonzero(tri_i == i)
        verts = np.flatnonzero(model.source_assign == i)
        pool = np.repeat(verts, model.out_degrees[verts])
        src[slots] = rng.permutation(pool)
    dst = np.empty(m, dtype=np.int64)
    for j in range(model.k_d):
        slots = np.flatnonzero(tri_j == j)
        verts = np.flatnonzero(model.dest_assign == j)
        pool = np.repeat(verts, model.in_degrees[verts])
        dst[slots] = rng.permutation(pool)

    # stage 3: uniform time order inside each interval
    ranks = np.empty(m, dtype=np.int64)
    b = model.time_boundaries
    for l in range(k_t):
        slots = np.flatnonzero(tri_l == l)
        ranks[slots] = rng.permutation(np.arange(b[l] + 1, b[l + 1] + 1))

    return TemporalEdgeList.from_arrays(
        src, dst, time_ranks=ranks,
        n_sources=model.n_sources, n_dests=model.n_dests)


def recovery_score(found, truth) -> float:
    """Adjusted Rand index between two partitions of the same universe."""
    found = np.asarray(found)
    truth = np.asarray(truth)
    if found.shape != truth.shape:
        raise ValueError("partitions cover different universes")
    return float(adjusted_rand_score(truth, found))
