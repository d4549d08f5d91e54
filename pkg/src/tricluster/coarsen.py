"""Agglomerative simplification of a fitted triclustering.

Starting from the best model found, the least costly merge over the three
axes is applied repeatedly; the recorded hierarchy is an agglomerative
clustering whose linkage is the cost increase of each merge.  The running
informativity (position between the null model at 0 and the baseline best
model at 1) tells the analyst when the structure got too coarse.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import criterion
from .combinatorics import CombinatoricsCache, shared_cache
from .model import AXES, Triclustering, merge_clusters

__all__ = ["MergeRecord", "MergeHierarchy", "agglomerate", "posterior_ratio"]


@dataclass(frozen=True)
class MergeRecord:
    step: int
    axis: str
    a: int           # surviving cluster index (pre-merge labels)
    b: int           # absorbed cluster index
    delta: float     # cost increase of this merge
    cost_after: float
    tau_after: float


@dataclass(frozen=True)
class MergeHierarchy:
    """Ordered merge records replayable from the starting model."""

    start: Triclustering
    records: tuple
    base_cost: float        # cost of the starting model
    null_cost: float
    baseline_cost: float    # tau baseline; below base_cost only when an
                            # improving merge was found mid-agglomeration
    baseline_reset: bool

    def replay(self, steps: int | None = None) -> Triclustering:
        """Model after the first ``steps`` merges (all of them by default)."""
        model = self.start
        upto = len(self.records) if steps is None else steps
        for rec in self.records[:upto]:
            model = merge_clusters(model, rec.axis, rec.a, rec.b)
        return model

    def to_document(self) -> dict:
        return {
            "schema_version": 1,
            "base_cost": self.base_cost,
            "null_cost": self.null_cost,
            "baseline_cost": self.baseline_cost,
            "baseline_reset": self.baseline_reset,
            "merges": [
                {"step": r.step, "axis": r.axis, "a": r.a, "b": r.b,
                 "delta": r.delta, "cost_after": r.cost_after,
                 "tau_after": r.tau_after}
                for r in self.records
            ],
        }

    def dendrogram(self) -> dict:
        """Nested-list dendrograms per axis.

        Leaves are the starting model's cluster indices; each internal node
        is ``[left, right, delta]``.
        """
        trees = {}
        for axis, k in (("source", self.start.k_s),
                        ("destination", self.start.k_d),
                        ("time", self.start.k_t)):
            nodes = list(range(k))
            labels = list(range(k))  # current cluster index -> node
            for rec in self.records:
                if rec.axis != axis:
                    continue
                merged = [labels[rec.a], labels[rec.b], rec.delta]
                labels[rec.a] = merged
                del labels[rec.b]
            trees[axis] = labels
        return trees


def posterior_ratio(delta: float):
    """exp(delta): posterior ratio of the original over the merged model.

    On overflow returns ``(delta, True)`` (log form plus a flag); otherwise
    ``(ratio, False)``.
    """
    if not math.isfinite(delta):
        raise ValueError("dissimilarity must be finite")
    try:
        return math.exp(delta), False
    except OverflowError:
        return delta, True


def _best_merge(model: Triclustering, cache) -> tuple:
    """Least-delta merge over all axes; ties broken on (axis, a, b)."""
    best = None
    for a in range(model.k_s):
        for b in range(a + 1, model.k_s):
            d = criterion.merge_delta(model, "source", a, b, cache)
            cand = (d, 0, a, b)
            if best is None or cand < best:
                best = cand
    for a in range(model.k_d):
        for b in range(a + 1, model.k_d):
            d = criterion.merge_delta(model, "destination", a, b, cache)
            cand = (d, 1, a, b)
            if best is None or cand < best:
                best = cand
    for l in range(model.k_t - 1):
        d = criterion.merge_delta(model, "time", l, l + 1, cache)
        cand = (d, 2, l, l + 1)
        if best is None or cand < best:
            best = cand
    return best


def agglomerate(model: Triclustering, tau_min: float | None = None,
                target_counts: tuple | None = None,
                cache: CombinatoricsCache | None = None) -> MergeHierarchy:
    """Merge clusters in the least costly order until a stop rule fires.

    Stops when informativity would drop below ``tau_min``, when
    ``target_counts`` (k_s, k_d, k_t; 0 entries unconstrained) is reached,
    or at the 1x1x1 model.  With no stop rule — including ``tau_min`` of
    zero or below, since informativity ends negative once merging passes the
    null cost — the full hierarchy down to the null model is produced.
    """
    if tau_min is not None and tau_min > 1:
        raise ValueError("tau_min cannot exceed 1")
    cache = cache or shared_cache()
    base_cost = criterion.cost(model, cache).total
    nc = criterion.null_cost(model.out_degrees, model.in_degrees, cache).total
    baseline = base_cost
    baseline_reset = False

    start = model
    records = []
    cur_cost = base_cost
    step = 0
    while not model.is_null():
        if target_counts is not None:
            ts, td, tt = target_counts
            reached = ((ts == 0 or model.k_s <= ts)
                       and (td == 0 or model.k_d <= td)
                       and (tt == 0 or model.k_t <= tt))
            if reached and any((ts, td, tt)):
                break
        delta, axis_idx, a, b = _best_merge(model, cache)
        new_cost = cur_cost + delta
        if new_cost < baseline:
            # serendipitous improvement past the supposed optimum: it
            # becomes the new informativity baseline
            baseline = new_cost
            baseline_reset = True
        span = baseline - nc
        tau_after = (new_cost - nc) / span if span != 0.0 else 0.0
        if tau_min is not None and tau_min > 0 and tau_after < tau_min:
            break
        model = merge_clusters(model, AXES[axis_idx], a, b)
        cur_cost = new_cost
        records.append(MergeRecord(step=step, axis=AXES[axis_idx], a=a, b=b,
                                   delta=delta, cost_after=cur_cost,
                                   tau_after=tau_after))
        step += 1

    return MergeHierarchy(start=start, records=tuple(records),
                          base_cost=base_cost, null_cost=nc,
                          baseline_cost=baseline,
                          baseline_reset=baseline_reset)
