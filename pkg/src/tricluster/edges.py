"""Temporal edge lists: ingestion, rank transform, vertex indexing.

An edge list is a set of m timestamped directed edges (source, destination,
time).  Timestamps are replaced by their ranks 1..m; ties are broken by input
position, so results on tied data depend on the input order.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TemporalEdgeList",
    "EdgeListError",
    "ParseError",
    "rank_transform",
    "ingest_edges",
]


class EdgeListError(ValueError):
    """Invalid edge-list construction or empty input."""


class ParseError(EdgeListError):
    """Malformed input row; carries the 1-based line number."""

    def __init__(self, line_number, message):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def rank_transform(raw_times) -> np.ndarray:
    """Replace each timestamp by its rank in 1..m, ties broken by position.

    Returns an int64 array that is a permutation of 1..m.
    """
    raw = np.asarray(raw_times, dtype=float)
    if raw.size == 0:
        raise EdgeListError("cannot rank an empty timestamp sequence")
    if not np.all(np.isfinite(raw)):
        raise ValueError("non-finite timestamp in input")
    order = np.argsort(raw, kind="stable")
    ranks = np.empty(raw.size, dtype=np.int64)
    ranks[order] = np.arange(1, raw.size + 1)
    return ranks


@dataclass(frozen=True)
class TemporalEdgeList:
    """Observed temporal interaction data.

    Vertices are stored as dense integer indices; ``source_labels`` and
    ``dest_labels`` map indices back to the original identifiers.  The vertex
    universes contain exactly the occurring vertices unless an explicit
    universe was injected at construction.
    """

    sources: np.ndarray      # int64, dense source index per edge
    destinations: np.ndarray  # int64, dense destination index per edge
    time_ranks: np.ndarray   # int64, permutation of 1..m
    raw_times: np.ndarray | None
    source_labels: tuple
    dest_labels: tuple

    def __post_init__(self):
        m = self.m
        if m == 0:
            raise EdgeListError("empty edge list")
        if len(self.destinations) != m or len(self.time_ranks) != m:
            raise EdgeListError("edge field sequences have unequal lengths")
        if self.raw_times is not None and len(self.raw_times) != m:
            raise EdgeListError("raw_times length differs from edge count")
        ranks = np.sort(self.time_ranks)
        if ranks[0] != 1 or ranks[-1] != m or np.any(np.diff(ranks) != 1):
            raise EdgeListError("time_ranks is not a permutation of 1..m")
        if self.sources.min() < 0 or self.sources.max() >= self.n_sources:
            raise EdgeListError("source index outside the source universe")
        if self.destinations.min() < 0 or self.destinations.max() >= self.n_dests:
            raise EdgeListError("destination index outside the destination universe")

    @property
    def m(self) -> int:
        return len(self.sources)

    @property
    def n_sources(self) -> int:
        return len(self.source_labels)

    @property
    def n_dests(self) -> int:
        return len(self.dest_labels)

    @property
    def out_degrees(self) -> np.ndarray:
        return np.bincount(self.sources, minlength=self.n_sources)

    @property
    def in_degrees(self) -> np.ndarray:
        return np.bincount(self.destinations, minlength=self.n_dests)

    @classmethod
    def from_arrays(cls, sources, destinations, raw_times=None, time_ranks=None,
                    n_sources=None, n_dests=None):
        """Build an edge list from integer vertex arrays.

        Exactly one of ``raw_times`` / ``time_ranks`` must be given.  When
        ``n_sources``/``n_dests`` are omitted the universes are the occurring
        indices 0..max; labels are the decimal indices.
        """
        src = np.asarray(sources, dtype=np.int64)
        dst = np.asarray(destinations, dtype=np.int64)
        if src.size == 0:
            raise EdgeListError("empty edge list")
        if (raw_times is None) == (time_ranks is None):
            raise EdgeListError("provide exactly one of raw_times / time_ranks")
        if raw_times is not None:
            raw = np.asarray(raw_times, dtype=float)
            ranks = rank_transform(raw)
        else:
            raw = None
            ranks = np.asarray(time_ranks, dtype=np.int64)
        ns = int(src.max()) + 1 if n_sources is None else int(n_sources)
        nd = int(dst.max()) + 1 if n_dests is None else int(n_dests)
        return cls(
            sources=src, destinations=dst, time_ranks=ranks, raw_times=raw,
            source_labels=tuple(str(i) for i in range(ns)),
            dest_labels=tuple(str(i) for i in range(nd)),
        )

    def with_labels(self, source_labels, dest_labels):
        return TemporalEdgeList(
            sources=self.sources, destinations=self.destinations,
            time_ranks=self.time_ranks, raw_times=self.raw_times,
            source_labels=tuple(source_labels), dest_labels=tuple(dest_labels),
        )

    def sorted_raw_times(self) -> np.ndarray | None:
        """Raw timestamps in rank order, or None when ranks are synthetic."""
        if self.raw_times is None:
            return None
        out = np.empty(self.m)
        out[self.time_ranks - 1] = self.raw_times
        return out


def _detect_delimiter(line: str) -> str:
    return "\t" if "\t" in line else ","


def ingest_edges(stream, delimiter: str | None = None,
                 source_universe=None, dest_universe=None) -> TemporalEdgeList:
    """Parse ``src,dst,time`` rows from a character stream.

    The delimiter (comma or tab) is auto-detected from the first data row
    unless given.  Lines starting with ``#`` are ignored, and a first row
    whose third column does not parse as a number is treated as a header.
    Vertex identifiers are opaque strings; ``source_universe`` /
    ``dest_universe`` optionally inject vertices beyond those occurring.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)

    src_index: dict = {}
    dst_index: dict = {}
    if source_universe is not None:
        for s in source_universe:
            src_index.setdefault(str(s), len(src_index))
    if dest_universe is not None:
        for d in dest_universe:
            dst_index.setdefault(str(d), len(dst_index))

    sources, destinations, times = [], [], []
    first_data_row = True
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if delimiter is None:
            delimiter = _detect_delimiter(line)
        parts = [p.strip() for p in line.split(delimiter)]
        if len(parts) < 3:
            raise ParseError(lineno, f"expected 3 columns, got {len(parts)}")
        try:
            t = float(parts[2])
        except ValueError:
            if first_data_row:
                first_data_row = False
                continue  # header row
            raise ParseError(lineno, f"bad timestamp {parts[2]!r}") from None
        if not np.isfinite(t):
            raise ParseError(lineno, f"non-finite timestamp {parts[2]!r}")
        first_data_row = False
        s, d = parts[0], parts[1]
        sources.append(src_index.setdefault(s, len(src_index)))
        destinations.append(dst_index.setdefault(d, len(dst_index)))
        times.append(t)

    if not sources:
        raise EdgeListError("empty input: no edges found")

    return TemporalEdgeList(
        sources=np.asarray(sources, dtype=np.int64),
        destinations=np.asarray(destinations, dtype=np.int64),
        time_ranks=rank_transform(times),
        raw_times=np.asarray(times, dtype=float),
        source_labels=tuple(src_index.keys()),
        dest_labels=tuple(dst_index.keys()),
    )
