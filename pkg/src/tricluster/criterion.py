"""Exact MAP cost of a triclustering, its decomposition and merge deltas.

The cost is the negative log posterior of the model given the data, in
nats.  It splits into prior terms (partition counting, tricluster
assignment counting, degree-list counting) and likelihood terms (the four
uniform-mapping stages of the generative mechanism).  Lower is better.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .combinatorics import CombinatoricsCache, shared_cache
from .model import AXES, ModelError, Triclustering

__all__ = [
    "Cost",
    "cost",
    "null_cost",
    "merge_delta",
    "informativity",
    "NoStructureWarning",
]


class NoStructureWarning(UserWarning):
    """Best and null model coincide; informativity is undefined."""


@dataclass(frozen=True)
class Cost:
    """Criterion value with its per-term breakdown (all in nats)."""

    total: float
    prior_terms: dict
    likelihood_terms: dict

    @property
    def prior(self) -> float:
        return sum(self.prior_terms.values())

    @property
    def likelihood(self) -> float:
        return sum(self.likelihood_terms.values())

    def rows(self):
        """(term, value) pairs for delimiter-separated export."""
        for name, v in self.prior_terms.items():
            yield f"prior.{name}", v
        for name, v in self.likelihood_terms.items():
            yield f"likelihood.{name}", v
        yield "total", self.total


def _degree_list_term(marginals, sizes, cache):
    """Sum of log C(sigma_i + n_i - 1, n_i - 1) over clusters."""
    lf = cache.lf_table(int(np.max(marginals + sizes)))
    marginals = np.asarray(marginals, dtype=np.int64)
    sizes = np.asarray(sizes, dtype=np.int64)
    return float(np.sum(lf[marginals + sizes - 1] - lf[sizes - 1] - lf[marginals]))


def cost(model: Triclustering, cache: CombinatoricsCache | None = None) -> Cost:
    """Evaluate the exact criterion for a valid triclustering."""
    cache = cache or shared_cache()
    model.validate()
    m = model.m
    ns, nd = model.n_sources, model.n_dests
    k_s, k_d, k_t = model.k_s, model.k_d, model.k_t
    n_tri = k_s * k_d * k_t

    lf = cache.lf_table(m + n_tri)

    prior = {
        "constant": float(np.log(ns) + np.log(nd) + np.log(m)),
        "source_partition": cache.log_sum_stirling(ns, k_s),
        "dest_partition": cache.log_sum_stirling(nd, k_d),
        "tricluster_assignment": cache.log_binomial(m + n_tri - 1, n_tri - 1),
        "source_degree_lists": _degree_list_term(
            model.source_marginals, np.bincount(model.source_assign), cache),
        "dest_degree_lists": _degree_list_term(
            model.dest_marginals, np.bincount(model.dest_assign), cache),
    }

    cell_counts = np.fromiter(model.counts.values(), dtype=np.int64,
                              count=len(model.counts))
    likelihood = {
        "edge_mapping": float(lf[m] - lf[cell_counts].sum()),
        "time_order": float(lf[model.time_marginals].sum()),
        "source_mapping": float(lf[model.source_marginals].sum()
                                - lf[model.out_degrees].sum()),
        "dest_mapping": float(lf[model.dest_marginals].sum()
                              - lf[model.in_degrees].sum()),
    }

    total = sum(prior.values()) + sum(likelihood.values())
    return Cost(total=total, prior_terms=prior, likelihood_terms=likelihood)


def null_cost(out_degrees, in_degrees, cache: CombinatoricsCache | None = None) -> Cost:
    """Cost of the 1x1x1 model, directly from the vertex degrees.

    Closed form: the partition and assignment prior terms vanish, the two
    degree-list terms become single binomials, and the likelihood reduces to
    3 log m! minus the vertex factorials (the edge-mapping stage cancels
    while the time-order, source- and destination-mapping stages each
    contribute log m!).
    """
    cache = cache or shared_cache()
    out_degrees = np.asarray(out_degrees, dtype=np.int64)
    in_degrees = np.asarray(in_degrees, dtype=np.int64)
    m = int(out_degrees.sum())
    if m != int(in_degrees.sum()):
        raise ModelError("degree lists disagree on the edge count")
    ns, nd = len(out_degrees), len(in_degrees)
    lf = cache.lf_table(m + max(ns, nd))
    prior = {
        "constant": float(np.log(ns) + np.log(nd) + np.log(m)),
        "source_partition": 0.0,
        "dest_partition": 0.0,
        "tricluster_assignment": 0.0,
        "source_degree_lists": cache.log_binomial(m + ns - 1, ns - 1),
        "dest_degree_lists": cache.log_binomial(m + nd - 1, nd - 1),
    }
    likelihood = {
        "edge_mapping": 0.0,
        "time_order": float(lf[m]),
        "source_mapping": float(lf[m] - lf[out_degrees].sum()),
        "dest_mapping": float(lf[m] - lf[in_degrees].sum()),
    }
    total = sum(prior.values()) + sum(likelihood.values())
    return Cost(total=total, prior_terms=prior, likelihood_terms=likelihood)


def _axis_prior_delta(model, axis, cache):
    """Change of the k-dependent prior terms when one merge happens on
    ``axis`` (identical for every pair of that axis)."""
    m = model.m
    k_s, k_d, k_t = model.k_s, model.k_d, model.k_t
    old_tri = k_s * k_d * k_t
    if axis == "source":
        new_tri = (k_s - 1) * k_d * k_t
        part = (cache.log_sum_stirling(model.n_sources, k_s - 1)
                - cache.log_sum_stirling(model.n_sources, k_s))
    elif axis == "destination":
        new_tri = k_s * (k_d - 1) * k_t
        part = (cache.log_sum_stirling(model.n_dests, k_d - 1)
                - cache.log_sum_stirling(model.n_dests, k_d))
    else:
        new_tri = k_s * k_d * (k_t - 1)
        part = 0.0
    assign = (cache.log_binomial(m + new_tri - 1, new_tri - 1)
              - cache.log_binomial(m + old_tri - 1, old_tri - 1))
    return part + assign


def merge_delta(model: Triclustering, axis: str, a: int, b: int,
                cache: CombinatoricsCache | None = None) -> float:
    """Cost change of merging clusters ``a`` and ``b`` on ``axis``.

    Computed incrementally from the terms touching the two clusters;
    equals ``cost(merged) - cost(model)`` up to rounding.
    """
    cache = cache or shared_cache()
    if axis not in AXES:
        raise ValueError(f"unknown axis {axis!r}")
    if a == b:
        raise ValueError("cannot merge a cluster with itself")
    a, b = min(a, b), max(a, b)
    lf = cache.lf_table(model.m + model.k_s * model.k_d * model.k_t)
    delta = _axis_prior_delta(model, axis, cache)

    if axis == "time":
        if b != a + 1:
            raise ModelError("time clusters must be adjacent intervals to merge")
        ca = {(i, j): c for (i, j, l), c in model.counts.items() if l == a}
        cb = {(i, j): c for (i, j, l), c in model.counts.items() if l == b}
        ta, tb = int(model.time_marginals[a]), int(model.time_marginals[b])
        delta += float(lf[ta + tb] - lf[ta] - lf[tb])
    else:
        pos = 0 if axis == "source" else 1
        ca, cb = {}, {}
        for key, c in model.counts.items():
            if key[pos] == a:
                ca[key[:pos] + key[pos + 1:]] = c
            elif key[pos] == b:
                cb[key[:pos] + key[pos + 1:]] = c
        if axis == "source":
            marg, assign = model.source_marginals, model.source_assign
        else:
            marg, assign = model.dest_marginals, model.dest_assign
        sizes = np.bincount(assign)
        sa, sb = int(marg[a]), int(marg[b])
        na, nb = int(sizes[a]), int(sizes[b])
        # cluster-marginal factorial in the mapping stage
        delta += float(lf[sa + sb] - lf[sa] - lf[sb])
        # degree-list prior
        delta += (cache.log_binomial(sa + sb + na + nb - 1, na + nb - 1)
                  - cache.log_binomial(sa + na - 1, na - 1)
                  - cache.log_binomial(sb + nb - 1, nb - 1))

    # edge-mapping stage: -log mu! changes only where both supports overlap
    for key, c in ca.items():
        c2 = cb.get(key)
        if c2 is not None:
            delta += float(lf[c] + lf[c2] - lf[c + c2])
    return float(delta)


def informativity(cost_m: float, cost_star: float, cost_null: float) -> float:
    """Normalized position of a model between the null model (0) and the
    best model (1).  Returns 0 with a warning when best equals null."""
    span = cost_star - cost_null
    if span == 0.0:
        warnings.warn("best model equals the null model; no structure detected",
                      NoStructureWarning, stacklevel=2)
        return 0.0
    if span > 0:
        raise ValueError("best-model cost exceeds the null cost")
    return (cost_m - cost_null) / span
