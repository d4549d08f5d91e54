"""Post-hoc statistics of a triclustering: cluster distributions, mutual
information contributions, Jensen-Shannon diagnostics.

Contributions are signed: a positive cell means an excess of edges between
the clusters compared with independence, a negative cell a lack.  All
values are in nats unless converted with ``to_bits``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import criterion
from .model import Triclustering

__all__ = [
    "ClusterDistributions",
    "cluster_distributions",
    "mi_source_dest",
    "mi_pair_time",
    "js_divergence",
    "kl_divergence",
    "asymptotic_dissimilarity_check",
    "to_bits",
]

LN2 = math.log(2.0)


def to_bits(x):
    """Convert nats to bits for display."""
    return np.asarray(x) / LN2


@dataclass(frozen=True)
class ClusterDistributions:
    """Empirical distributions induced by the count cube."""

    source: np.ndarray          # P^S over source clusters
    dest: np.ndarray            # P^D over destination clusters
    time: np.ndarray            # P^T over time segments
    joint_sd: np.ndarray        # P^{S,D}, shape (k_s, k_d)
    joint_full: np.ndarray      # P^{S,D,T}, shape (k_s, k_d, k_t)
    source_profiles: np.ndarray  # per-source-cluster profile over (j, l)
    source_weights: np.ndarray   # mixture weights pi_i

    def validate(self, atol=1e-12):
        for p in (self.source, self.dest, self.time, self.joint_sd,
                  self.joint_full):
            if np.any(p < 0) or abs(p.sum() - 1.0) > atol:
                raise ValueError("not a probability distribution")
        if not np.allclose(self.joint_full.sum(axis=(1, 2)), self.source,
                           atol=atol):
            raise ValueError("full joint does not marginalize to P^S")
        if not np.allclose(self.joint_full.sum(axis=(0, 2)), self.dest,
                           atol=atol):
            raise ValueError("full joint does not marginalize to P^D")
        if not np.allclose(self.joint_full.sum(axis=(0, 1)), self.time,
                           atol=atol):
            raise ValueError("full joint does not marginalize to P^T")


def cluster_distributions(model: Triclustering) -> ClusterDistributions:
    cube = model.cube().astype(float)
    m = float(model.m)
    sig = model.source_marginals.astype(float)
    denom = sig[:, None, None]
    profiles = np.divide(cube, denom, out=np.zeros_like(cube),
                         where=denom > 0)
    return ClusterDistributions(
        source=sig / m,
        dest=model.dest_marginals / m,
        time=model.time_marginals / m,
        joint_sd=cube.sum(axis=2) / m,
        joint_full=cube / m,
        source_profiles=profiles,
        source_weights=sig / m,
    )


def _contributions(joint: np.ndarray, independent: np.ndarray) -> np.ndarray:
    """joint * ln(joint / independent), with 0 * ln(0/x) = 0."""
    out = np.zeros_like(joint)
    mask = joint > 0
    out[mask] = joint[mask] * np.log(joint[mask] / independent[mask])
    return out


def mi_source_dest(model: Triclustering):
    """Per-(source cluster, destination cluster) MI contributions and the
    total mutual information."""
    d = cluster_distributions(model)
    contrib = _contributions(d.joint_sd, np.outer(d.source, d.dest))
    return contrib, float(contrib.sum())


def mi_pair_time(model: Triclustering):
    """Per-(source, destination, time) contributions of the MI between
    cluster pairs and time segments, plus the total."""
    d = cluster_distributions(model)
    independent = d.joint_sd[:, :, None] * d.time[None, None, :]
    contrib = _contributions(d.joint_full, independent)
    return contrib, float(contrib.sum())


def kl_divergence(p, q) -> float:
    """KL(p || q) in nats; infinite when p puts mass where q has none."""
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    if p.shape != q.shape:
        raise ValueError("distributions have different support sizes")
    mask = p > 0
    if np.any(q[mask] == 0):
        return math.inf
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


def js_divergence(p, q, alpha_p: float, alpha_q: float) -> float:
    """Generalized Jensen-Shannon divergence with mixture weights.

    ``alpha_p * KL(p || mix) + alpha_q * KL(q || mix)`` where
    ``mix = alpha_p * p + alpha_q * q``; the weights must be non-negative
    and sum to one.
    """
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    if p.shape != q.shape:
        raise ValueError("distributions have different support sizes")
    if alpha_p < 0 or alpha_q < 0 or abs(alpha_p + alpha_q - 1.0) > 1e-12:
        raise ValueError("weights must be non-negative and sum to 1")
    mix = alpha_p * p + alpha_q * q
    return alpha_p * kl_divergence(p, mix) + alpha_q * kl_divergence(q, mix)


def asymptotic_dissimilarity_check(model: Triclustering, i: int, k: int,
                                   cache=None):
    """Empirical per-edge merge cost of two source clusters next to its
    large-m limit ``(pi_i + pi_k) * JS(profiles)``.

    Diagnostic only: returns ``(empirical, limit)`` without asserting.
    """
    if i == k:
        raise ValueError("clusters must differ")
    d = cluster_distributions(model)
    pi = d.source_weights
    a_i = pi[i] / (pi[i] + pi[k])
    a_k = pi[k] / (pi[i] + pi[k])
    limit = (pi[i] + pi[k]) * js_divergence(
        d.source_profiles[i], d.source_profiles[k], a_i, a_k)
    empirical = criterion.merge_delta(model, "source", i, k, cache) / model.m
    return float(empirical), float(limit)
