"""Triclustering states: partitions, count cube, marginals, merging, I/O.

A triclustering jointly partitions source vertices, destination vertices and
the time-stamp ranks (the latter into consecutive intervals).  The sparse
count cube ``counts`` maps a tricluster ``(i, j, l)`` to the number of edges
it contains; all marginals and per-vertex degrees are carried along so the
state is self-contained.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .edges import TemporalEdgeList

__all__ = [
    "Triclustering",
    "ModelError",
    "CoverageError",
    "AXES",
    "time_partition_from_marginals",
    "compute_counts",
    "merge_clusters",
    "null_model",
]

AXES = ("source", "destination", "time")


class ModelError(ValueError):
    """Triclustering invariant violation."""


class CoverageError(ModelError):
    """A vertex is missing from its partition."""


def time_partition_from_marginals(time_marginals) -> np.ndarray:
    """Unique ordered interval boundaries implied by interval sizes.

    Returns the k_T+1 cut points ``[0, s1, s1+s2, ..., m]``; interval l
    covers ranks ``boundaries[l]+1 .. boundaries[l+1]``.
    """
    tau = np.asarray(time_marginals, dtype=np.int64)
    if tau.size == 0 or np.any(tau <= 0):
        raise ValueError("interval sizes must be positive")
    return np.concatenate([[0], np.cumsum(tau)])


def _interval_index(time_ranks: np.ndarray, boundaries: np.ndarray) -> np.ndarray:
    """Map each rank to its 0-based interval index."""
    return np.searchsorted(boundaries[1:], time_ranks, side="left")


@dataclass(frozen=True)
class Triclustering:
    """Immutable triclustering model.

    Cluster indices are 0-based.  ``time_boundaries`` has k_T+1 entries; the
    l-th interval is the rank range ``(boundaries[l], boundaries[l+1]]``.
    """

    source_assign: np.ndarray       # cluster index per source vertex
    dest_assign: np.ndarray         # cluster index per destination vertex
    time_boundaries: np.ndarray     # k_T+1 cut points, first 0, last m
    counts: dict                    # (i, j, l) -> positive edge count
    source_marginals: np.ndarray    # sigma-hat, per source cluster
    dest_marginals: np.ndarray      # delta-hat, per destination cluster
    time_marginals: np.ndarray      # tau-hat, per time interval
    out_degrees: np.ndarray         # per source vertex
    in_degrees: np.ndarray          # per destination vertex
    m: int

    @property
    def k_s(self) -> int:
        return len(self.source_marginals)

    @property
    def k_d(self) -> int:
        return len(self.dest_marginals)

    @property
    def k_t(self) -> int:
        return len(self.time_marginals)

    @property
    def n_sources(self) -> int:
        return len(self.out_degrees)

    @property
    def n_dests(self) -> int:
        return len(self.in_degrees)

    def is_null(self) -> bool:
        return self.k_s == 1 and self.k_d == 1 and self.k_t == 1

    def cube(self) -> np.ndarray:
        """Dense count cube of shape (k_s, k_d, k_t)."""
        out = np.zeros((self.k_s, self.k_d, self.k_t), dtype=np.int64)
        for (i, j, l), c in self.counts.items():
            out[i, j, l] = c
        return out

    def validate(self):
        """Check every structural invariant; raise ModelError on failure."""
        cube = self.cube()
        if cube.sum() != self.m:
            raise ModelError("count cube does not sum to m")
        if np.any(cube < 0) or any(c <= 0 for c in self.counts.values()):
            raise ModelError("negative or explicit-zero count cell")
        if not np.array_equal(cube.sum(axis=(1, 2)), self.source_marginals):
            raise ModelError("source marginals inconsistent with counts")
        if not np.array_equal(cube.sum(axis=(0, 2)), self.dest_marginals):
            raise ModelError("destination marginals inconsistent with counts")
        if not np.array_equal(cube.sum(axis=(0, 1)), self.time_marginals):
            raise ModelError("time marginals inconsistent with counts")
        for assign, k, name in ((self.source_assign, self.k_s, "source"),
                                (self.dest_assign, self.k_d, "destination")):
            if assign.min() < 0 or assign.max() >= k:
                raise ModelError(f"{name} assignment outside 0..k-1")
            if len(np.unique(assign)) != k:
                raise ModelError(f"empty {name} cluster")
        sig = np.bincount(self.source_assign, weights=self.out_degrees,
                          minlength=self.k_s).astype(np.int64)
        if not np.array_equal(sig, self.source_marginals):
            raise ModelError("out-degrees inconsistent with source marginals")
        dlt = np.bincount(self.dest_assign, weights=self.in_degrees,
                          minlength=self.k_d).astype(np.int64)
        if not np.array_equal(dlt, self.dest_marginals):
            raise ModelError("in-degrees inconsistent with destination marginals")
        b = self.time_boundaries
        if b[0] != 0 or b[-1] != self.m or np.any(np.diff(b) <= 0):
            raise ModelError("time boundaries do not tile 1..m")
        if not np.array_equal(np.diff(b), self.time_marginals):
            raise ModelError("time boundaries inconsistent with time marginals")
        if self.out_degrees.sum() != self.m or self.in_degrees.sum() != self.m:
            raise ModelError("degrees do not sum to m")

    def is_compatible(self, edges: TemporalEdgeList) -> bool:
        """Exact agreement with a dataset: counts and degrees match."""
        if edges.m != self.m:
            return False
        if (edges.n_sources != self.n_sources
                or edges.n_dests != self.n_dests):
            return False
        if not np.array_equal(edges.out_degrees, self.out_degrees):
            return False
        if not np.array_equal(edges.in_degrees, self.in_degrees):
            return False
        other = compute_counts(edges, self.source_assign, self.dest_assign,
                               self.time_boundaries)
        return other.counts == self.counts

    def to_document(self, edges: TemporalEdgeList | None = None) -> dict:
        """JSON-ready model document.

        When the originating edge list is given, time boundaries are also
        reported as raw-timestamp cut values (midpoints between the stamps
        adjacent to each boundary) and the id maps carry the original labels.
        """
        doc = {
            "schema_version": 1,
            "m": int(self.m),
            "n_sources": self.n_sources,
            "n_dests": self.n_dests,
            "source_assign": self.source_assign.tolist(),
            "dest_assign": self.dest_assign.tolist(),
            "time_boundaries": self.time_boundaries.tolist(),
            "counts": sorted([int(i), int(j), int(l), int(c)]
                             for (i, j, l), c in self.counts.items()),
            "source_marginals": self.source_marginals.tolist(),
            "dest_marginals": self.dest_marginals.tolist(),
            "time_marginals": self.time_marginals.tolist(),
            "out_degrees": self.out_degrees.tolist(),
            "in_degrees": self.in_degrees.tolist(),
        }
        if edges is not None:
            doc["source_labels"] = list(edges.source_labels)
            doc["dest_labels"] = list(edges.dest_labels)
            stamps = edges.sorted_raw_times()
            if stamps is not None:
                cuts = [float((stamps[b - 1] + stamps[b]) / 2.0)
                        for b in self.time_boundaries[1:-1]]
                doc["time_cut_values"] = cuts
        return doc

    @classmethod
    def from_document(cls, doc: dict) -> "Triclustering":
        counts = {(i, j, l): c for i, j, l, c in doc["counts"]}
        model = cls(
            source_assign=np.asarray(doc["source_assign"], dtype=np.int64),
            dest_assign=np.asarray(doc["dest_assign"], dtype=np.int64),
            time_boundaries=np.asarray(doc["time_boundaries"], dtype=np.int64),
            counts=counts,
            source_marginals=np.asarray(doc["source_marginals"], dtype=np.int64),
            dest_marginals=np.asarray(doc["dest_marginals"], dtype=np.int64),
            time_marginals=np.asarray(doc["time_marginals"], dtype=np.int64),
            out_degrees=np.asarray(doc["out_degrees"], dtype=np.int64),
            in_degrees=np.asarray(doc["in_degrees"], dtype=np.int64),
            m=int(doc["m"]),
        )
        model.validate()
        return model


def _from_cube(source_assign, dest_assign, boundaries, cube,
               out_degrees, in_degrees) -> Triclustering:
    counts = {}
    for i, j, l in zip(*np.nonzero(cube)):
        counts[(int(i), int(j), int(l))] = int(cube[i, j, l])
    return Triclustering(
        source_assign=np.asarray(source_assign, dtype=np.int64),
        dest_assign=np.asarray(dest_assign, dtype=np.int64),
        time_boundaries=np.asarray(boundaries, dtype=np.int64),
        counts=counts,
        source_marginals=cube.sum(axis=(1, 2)),
        dest_marginals=cube.sum(axis=(0, 2)),
        time_marginals=cube.sum(axis=(0, 1)),
        out_degrees=np.asarray(out_degrees, dtype=np.int64),
        in_degrees=np.asarray(in_degrees, dtype=np.int64),
        m=int(cube.sum()),
    )


def compute_counts(edges: TemporalEdgeList, source_assign, dest_assign,
                   time_boundaries) -> Triclustering:
    """Build the triclustering compatible with ``edges`` for the given
    partitions and time boundaries."""
    source_assign = np.asarray(source_assign, dtype=np.int64)
    dest_assign = np.asarray(dest_assign, dtype=np.int64)
    boundaries = np.asarray(time_boundaries, dtype=np.int64)
    if len(source_assign) != edges.n_sources:
        raise CoverageError("source partition does not cover every source vertex")
    if len(dest_assign) != edges.n_dests:
        raise CoverageError("destination partition does not cover every destination vertex")
    if boundaries[0] != 0 or boundaries[-1] != edges.m or np.any(np.diff(boundaries) <= 0):
        raise ModelError("time boundaries do not tile 1..m")

    k_s = int(source_assign.max()) + 1
    k_d = int(dest_assign.max()) + 1
    k_t = len(boundaries) - 1
    li = _interval_index(edges.time_ranks, boundaries)
    flat = (source_assign[edges.sources] * k_d + dest_assign[edges.destinations]) * k_t + li
    cube = np.bincount(flat, minlength=k_s * k_d * k_t).reshape(k_s, k_d, k_t)
    model = _from_cube(source_assign, dest_assign, boundaries, cube,
                       edges.out_degrees, edges.in_degrees)
    model.validate()
    return model


def null_model(edges: TemporalEdgeList) -> Triclustering:
    """The 1x1x1 triclustering of a dataset."""
    return compute_counts(
        edges,
        np.zeros(edges.n_sources, dtype=np.int64),
        np.zeros(edges.n_dests, dtype=np.int64),
        np.array([0, edges.m], dtype=np.int64),
    )


def _merge_assign(assign: np.ndarray, a: int, b: int) -> np.ndarray:
    """Merge cluster b into a; clusters above b shift down by one."""
    out = assign.copy()
    out[out == b] = a
    out[out > b] -= 1
    return out


def merge_clusters(model: Triclustering, axis: str, a: int, b: int) -> Triclustering:
    """Return the triclustering with clusters ``a`` and ``b`` merged.

    For the time axis the clusters must be adjacent intervals.  The merged
    cluster takes index ``min(a, b)``; higher clusters shift down.
    """
    if axis not in AXES:
        raise ValueError(f"unknown axis {axis!r}")
    if a == b:
        raise ValueError("cannot merge a cluster with itself")
    a, b = min(a, b), max(a, b)
    cube = model.cube()
    if axis == "source":
        if not (0 <= a < b < model.k_s):
            raise ValueError("source cluster index out of range")
        cube[a] += cube[b]
        cube = np.delete(cube, b, axis=0)
        return _from_cube(_merge_assign(model.source_assign, a, b),
                          model.dest_assign, model.time_boundaries, cube,
                          model.out_degrees, model.in_degrees)
    if axis == "destination":
        if not (0 <= a < b < model.k_d):
            raise ValueError("destination cluster index out of range")
        cube[:, a] += cube[:, b]
        cube = np.delete(cube, b, axis=1)
        return _from_cube(model.source_assign,
                          _merge_assign(model.dest_assign, a, b),
                          model.time_boundaries, cube,
                          model.out_degrees, model.in_degrees)
    # time axis
    if not (0 <= a < model.k_t and 0 <= b < model.k_t):
        raise ValueError("time cluster index out of range")
    if b != a + 1:
        raise ModelError("time clusters must be adjacent intervals to merge")
    cube[:, :, a] += cube[:, :, b]
    cube = np.delete(cube, b, axis=2)
    boundaries = np.delete(model.time_boundaries, b)
    return _from_cube(model.source_assign, model.dest_assign, boundaries,
                      cube, model.out_degrees, model.in_degrees)
