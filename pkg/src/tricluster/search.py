"""MAP search: greedy bottom-up merging, vertex reassignment, VNS multi-start.

The search state keeps the dense count cube together with one exact merge-
delta matrix per axis.  A merge on one axis perturbs the deltas of the other
axes only through the merged rows/columns/slices, so the matrices are
patched with O(k^2 * k_third) vector work per merge instead of being rebuilt.
The k-dependent prior terms (partition counts and the tricluster-assignment
binomial) are identical for every candidate of an axis and are added at
selection time.
"""

from __future__ import annotations

import math
import os
import time as _time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import criterion
from .combinatorics import CombinatoricsCache, shared_cache
from .edges import TemporalEdgeList
from .model import Triclustering, compute_counts, null_model

__all__ = [
    "SearchConfig",
    "initial_solution",
    "greedy_merge",
    "refine_reassign",
    "vns_fit",
]

# accept a merge/move only below this threshold; also the local-optimality slack
EPS = 1e-9

_AXIS_RANK = {"source": 0, "destination": 1, "time": 2}


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 4
    max_neighborhood_level: int = 3
    seed: int = 0
    initial_time_granularity: int | str = "auto"
    time_budget: float | None = None
    parallel_restarts: bool = False

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_neighborhood_level < 1:
            raise ValueError("max_neighborhood_level must be >= 1")
        if self.initial_time_granularity != "auto":
            if int(self.initial_time_granularity) < 1:
                raise ValueError("initial_time_granularity must be >= 1 or 'auto'")


def initial_solution(edges: TemporalEdgeList,
                     granularity: int | str = "auto") -> Triclustering:
    """Finest practical model: singleton vertex clusters plus an
    equal-frequency time grid ('auto'), or a requested interval count.

    The automatic grid is the finer of one interval per sqrt(m) edges and
    one interval per n_S * n_D edges.  Starting much finer than one edge per
    vertex-pair cell makes every first merge strictly costly (the mapping
    factorials dominate the near-empty cells) and stalls the greedy descent;
    finer time structure is recovered later by the neighborhood splits.
    """
    m = edges.m
    if granularity == "auto":
        g = math.isqrt(m)
        if g * g < m:
            g += 1
        g = min(g, m // (2 * edges.n_sources * edges.n_dests) + 1)
    else:
        g = int(granularity)
    g = max(1, min(m, g))
    base, extra = divmod(m, g)
    sizes = np.full(g, base, dtype=np.int64)
    sizes[:extra] += 1
    boundaries = np.concatenate([[0], np.cumsum(sizes)])
    return compute_counts(
        edges,
        np.arange(edges.n_sources, dtype=np.int64),
        np.arange(edges.n_dests, dtype=np.int64),
        boundaries,
    )


class _State:
    """Mutable search state around a dense count cube."""

    def __init__(self, model: Triclustering, cache: CombinatoricsCache | None = None,
                 track_pairs: bool = True):
        self.cache = cache or shared_cache()
        self.m = model.m
        self.ns = model.n_sources
        self.nd = model.n_dests
        self.cube = model.cube()
        self.src_assign = model.source_assign.copy()
        self.dst_assign = model.dest_assign.copy()
        self.boundaries = model.time_boundaries.copy()
        self.sigma = model.source_marginals.astype(np.int64).copy()
        self.dlt = model.dest_marginals.astype(np.int64).copy()
        self.tau = model.time_marginals.astype(np.int64).copy()
        self.src_sizes = np.bincount(self.src_assign).astype(np.int64)
        self.dst_sizes = np.bincount(self.dst_assign).astype(np.int64)
        self.out_deg = model.out_degrees
        self.in_deg = model.in_degrees
        k_s, k_d, k_t = self.cube.shape
        # 2m covers summed marginals in pair terms; the rest covers the
        # assignment binomial and degree-list arguments
        need = 2 * self.m + k_s * k_d * k_t + 2 * (self.ns + self.nd)
        self.lf = self.cache.lf_table(need)
        self.total = criterion.cost(model, self.cache).total
        self.ds = self.dd = self.dt = None
        if track_pairs:
            self._init_pair_deltas()

    # -- shapes ----------------------------------------------------------

    @property
    def k_s(self):
        return self.cube.shape[0]

    @property
    def k_d(self):
        return self.cube.shape[1]

    @property
    def k_t(self):
        return self.cube.shape[2]

    def to_triclustering(self) -> Triclustering:
        from .model import _from_cube
        return _from_cube(self.src_assign, self.dst_assign, self.boundaries,
                          self.cube, self.out_deg, self.in_deg)

    # -- pair-delta building blocks ---------------------------------------

    def _deglist_vec(self, marg, sizes):
        """log C(marg + sizes - 1, sizes - 1), elementwise."""
        lf = self.lf
        return lf[marg + sizes - 1] - lf[sizes - 1] - lf[marg]

    def _vertex_pair_row(self, axis: int, a: int) -> np.ndarray:
        """Exact pair deltas (without axis-level terms) of cluster ``a``
        against every cluster of the same vertex axis."""
        lf = self.lf
        if axis == 0:
            rows = self.cube.reshape(self.k_s, -1)
            marg, sizes = self.sigma, self.src_sizes
        else:
            rows = np.swapaxes(self.cube, 0, 1).reshape(self.k_d, -1)
            marg, sizes = self.dlt, self.dst_sizes
        ra = rows[a]
        lik = (lf[rows + ra[None, :]] - lf[rows] - lf[ra][None, :]).sum(axis=1)
        lik = -lik  # merging turns lf[x]+lf[y] into lf[x+y]
        lik += lf[marg + marg[a]] - lf[marg] - lf[marg[a]]
        dgl = (self._deglist_vec(marg + marg[a], sizes + sizes[a])
               - self._deglist_vec(marg, sizes)
               - self._deglist_vec(np.full_like(marg, marg[a]),
                                   np.full_like(sizes, sizes[a])))
        out = lik + dgl
        out[a] = np.inf
        return out

    def _time_pair_values(self, idx: np.ndarray) -> np.ndarray:
        """Exact pair deltas for the adjacent time pairs (idx, idx+1)."""
        lf = self.lf
        left = self.cube[:, :, idx]
        right = self.cube[:, :, idx + 1]
        lik = (lf[left] + lf[right] - lf[left + right]).sum(axis=(0, 1))
        tl, tr = self.tau[idx], self.tau[idx + 1]
        return lik + lf[tl + tr] - lf[tl] - lf[tr]

    def _init_pair_deltas(self):
        k_s, k_d, k_t = self.cube.shape
        self.ds = np.full((k_s, k_s), np.inf)
        for a in range(k_s):
            self.ds[a] = self._vertex_pair_row(0, a)
        self.dd = np.full((k_d, k_d), np.inf)
        for a in range(k_d):
            self.dd[a] = self._vertex_pair_row(1, a)
        self.dt = self._time_pair_values(np.arange(k_t - 1))

    # -- axis-level prior adjustments -------------------------------------

    def _log_assign(self, n_tri: int) -> float:
        return self.cache.log_binomial(self.m + n_tri - 1, n_tri - 1)

    def axis_adjust(self, axis: int) -> float:
        k_s, k_d, k_t = self.cube.shape
        old_tri = k_s * k_d * k_t
        if axis == 0:
            part = (self.cache.log_sum_stirling(self.ns, k_s - 1)
                    - self.cache.log_sum_stirling(self.ns, k_s))
            new_tri = (k_s - 1) * k_d * k_t
        elif axis == 1:
            part = (self.cache.log_sum_stirling(self.nd, k_d - 1)
                    - self.cache.log_sum_stirling(self.nd, k_d))
            new_tri = k_s * (k_d - 1) * k_t
        else:
            part = 0.0
            new_tri = k_s * k_d * (k_t - 1)
        return part + self._log_assign(new_tri) - self._log_assign(old_tri)

    # -- candidate selection ----------------------------------------------

    def best_merge(self):
        """(delta, axis, a, b) of the least-cost legal merge, or None.

        Ties are broken lexicographically on (axis, a, b) with axis order
        source < destination < time.
        """
        cands = []
        for axis, mat in ((0, self.ds), (1, self.dd)):
            if mat is None or mat.shape[0] < 2:
                continue
            val = mat.min()
            if not np.isfinite(val):
                continue
            # rows are computed independently, so mirrored entries can differ
            # by float rounding; locate the minimum anywhere and order it
            i, j = np.unravel_index(int(np.argmin(mat)), mat.shape)
            a, b = (i, j) if i < j else (j, i)
            cands.append((float(val) + self.axis_adjust(axis), axis,
                          int(a), int(b)))
        if self.dt is not None and self.dt.size:
            l = int(np.argmin(self.dt))
            cands.append((float(self.dt[l]) + self.axis_adjust(2), 2, l, l + 1))
        return min(cands) if cands else None

    # -- merge application -------------------------------------------------

    def _pairgrid(self, rows: np.ndarray) -> np.ndarray:
        """For row vectors over a trailing axis: matrix of
        sum(lf[x]+lf[y]-lf[x+y]) over that axis for every row pair."""
        lf = self.lf
        v = lf[rows].sum(axis=-1)
        cross = lf[rows[:, None, :] + rows[None, :, :]].sum(axis=-1)
        return v[:, None] + v[None, :] - cross

    def apply_merge(self, axis: int, a: int, b: int, delta: float):
        self.total += delta
        lf = self.lf
        if axis == 0:
            old_a, old_b = self.cube[a].copy(), self.cube[b]
            new = old_a + old_b
            if self.dd is not None:
                self.dd += (self._pairgrid(new) - self._pairgrid(old_a)
                            - self._pairgrid(old_b))
            if self.dt is not None and self.dt.size:
                for row, sgn in ((new, 1.0), (old_a, -1.0), (old_b, -1.0)):
                    h = (lf[row[:, :-1]] + lf[row[:, 1:]]
                         - lf[row[:, :-1] + row[:, 1:]]).sum(axis=0)
                    self.dt += sgn * h
            self.cube[a] = new
            self.cube = np.delete(self.cube, b, axis=0)
            self.sigma[a] += self.sigma[b]
            self.sigma = np.delete(self.sigma, b)
            self.src_sizes[a] += self.src_sizes[b]
            self.src_sizes = np.delete(self.src_sizes, b)
            self.src_assign[self.src_assign == b] = a
            self.src_assign[self.src_assign > b] -= 1
            if self.ds is not None:
                self.ds = np.delete(np.delete(self.ds, b, 0), b, 1)
                if self.k_s > 1:
                    row = self._vertex_pair_row(0, a)
                    self.ds[a, :] = row
                    self.ds[:, a] = row
        elif axis == 1:
            old_a, old_b = self.cube[:, a].copy(), self.cube[:, b]
            new = old_a + old_b
            if self.ds is not None:
                self.ds += (self._pairgrid(new) - self._pairgrid(old_a)
                            - self._pairgrid(old_b))
            if self.dt is not None and self.dt.size:
                for row, sgn in ((new, 1.0), (old_a, -1.0), (old_b, -1.0)):
                    h = (lf[row[:, :-1]] + lf[row[:, 1:]]
                         - lf[row[:, :-1] + row[:, 1:]]).sum(axis=0)
                    self.dt += sgn * h
            self.cube[:, a] = new
            self.cube = np.delete(self.cube, b, axis=1)
            self.dlt[a] += self.dlt[b]
            self.dlt = np.delete(self.dlt, b)
            self.dst_sizes[a] += self.dst_sizes[b]
            self.dst_sizes = np.delete(self.dst_sizes, b)
            self.dst_assign[self.dst_assign == b] = a
            self.dst_assign[self.dst_assign > b] -= 1
            if self.dd is not None:
                self.dd = np.delete(np.delete(self.dd, b, 0), b, 1)
                if self.k_d > 1:
                    row = self._vertex_pair_row(1, a)
                    self.dd[a, :] = row
                    self.dd[:, a] = row
        else:
            l = a
            old_l, old_r = self.cube[:, :, l].copy(), self.cube[:, :, l + 1]
            new = old_l + old_r
            if self.ds is not None:
                self.ds += (self._pairgrid(new) - self._pairgrid(old_l)
                            - self._pairgrid(old_r))
            if self.dd is not None:
                tn, tl, tr = new.T, old_l.T, old_r.T
                self.dd += (self._pairgrid(tn) - self._pairgrid(tl)
                            - self._pairgrid(tr))
            self.cube[:, :, l] = new
            self.cube = np.delete(self.cube, l + 1, axis=2)
            self.tau[l] += self.tau[l + 1]
            self.tau = np.delete(self.tau, l + 1)
            self.boundaries = np.delete(self.boundaries, l + 1)
            if self.dt is not None:
                self.dt = np.delete(self.dt, l)
                if l >= 1:
                    self.dt[l - 1] = self._time_pair_values(np.array([l - 1]))[0]
                if l <= self.k_t - 2:
                    self.dt[l] = self._time_pair_values(np.array([l]))[0]

    # -- greedy loop -------------------------------------------------------

    def run_greedy(self) -> int:
        merges = 0
        while True:
            cand = self.best_merge()
            if cand is None or cand[0] >= -EPS:
                return merges
            delta, axis, a, b = cand
            self.apply_merge(axis, a, b, delta)
            merges += 1


def greedy_merge(model: Triclustering,
                 cache: CombinatoricsCache | None = None) -> Triclustering:
    """Greedy bottom-up merging until no single merge decreases the cost."""
    state = _State(model, cache)
    state.run_greedy()
    return state.to_triclustering()


# -- vertex reassignment ----------------------------------------------------


def _interval_index(time_ranks, boundaries):
    return np.searchsorted(boundaries[1:], time_ranks, side="left")


def _reassign_axis(state: _State, edges: TemporalEdgeList, axis: int) -> bool:
    """One pass of single-vertex moves on a vertex axis; True if any move."""
    lf = state.lf
    cache = state.cache
    if axis == 0:
        assign, sizes, marg = state.src_assign, state.src_sizes, state.sigma
        deg = state.out_deg
        vert_of_edge = edges.sources
        n_univ = state.ns
        other_flat = (state.dst_assign[edges.destinations] * state.k_t
                      + _interval_index(edges.time_ranks, state.boundaries))
        rows = lambda: state.cube.reshape(state.cube.shape[0], -1)
    else:
        assign, sizes, marg = state.dst_assign, state.dst_sizes, state.dlt
        deg = state.in_deg
        vert_of_edge = edges.destinations
        n_univ = state.nd
        other_flat = (state.src_assign[edges.sources] * state.k_t
                      + _interval_index(edges.time_ranks, state.boundaries))
        rows = lambda: np.swapaxes(state.cube, 0, 1).reshape(
            state.cube.shape[1], -1)

    # sparse per-vertex profiles over the (other axis, time) grid
    order = np.argsort(vert_of_edge, kind="stable")
    sorted_v = vert_of_edge[order]
    starts = np.searchsorted(sorted_v, np.arange(n_univ))
    ends = np.searchsorted(sorted_v, np.arange(n_univ), side="right")

    moved = False
    for v in range(n_univ):
        cells = other_flat[order[starts[v]:ends[v]]]
        if cells.size == 0:
            continue
        supp, prof = np.unique(cells, return_counts=True)
        a = int(assign[v])
        k = rows().shape[0]
        if k < 2:
            continue
        dv = int(deg[v])
        r = rows()
        sub = r[:, supp]
        # -sum log mu! change from adding the profile to each candidate
        # cluster and removing it from cluster a
        add = (lf[sub] - lf[sub + prof[None, :]]).sum(axis=1)
        ra = sub[a]
        remove = float((lf[ra] - lf[ra - prof]).sum())
        lik = add + remove + (lf[marg + dv] - lf[marg]) \
            + float(lf[marg[a] - dv] - lf[marg[a]])
        dgl_gain = (lf[marg + dv + sizes] - lf[sizes] - lf[marg + dv]
                    - (lf[marg + sizes - 1] - lf[sizes - 1] - lf[marg]))
        na = int(sizes[a])
        sa = int(marg[a])
        if na > 1:
            dgl_lose = (cache.log_binomial(sa - dv + na - 2, na - 2)
                        - cache.log_binomial(sa + na - 1, na - 1))
            axis_level = 0.0
        else:
            dgl_lose = -cache.log_binomial(sa + na - 1, na - 1)
            if axis == 0:
                part = (cache.log_sum_stirling(state.ns, k - 1)
                        - cache.log_sum_stirling(state.ns, k))
                new_tri = (k - 1) * state.k_d * state.k_t
            else:
                part = (cache.log_sum_stirling(state.nd, k - 1)
                        - cache.log_sum_stirling(state.nd, k))
                new_tri = state.k_s * (k - 1) * state.k_t
            old_tri = state.k_s * state.k_d * state.k_t
            axis_level = (part + state._log_assign(new_tri)
                          - state._log_assign(old_tri))
        delta_vec = lik + dgl_gain + dgl_lose + axis_level
        delta_vec[a] = np.inf
        b = int(np.argmin(delta_vec))
        delta = float(delta_vec[b])
        if delta >= -EPS:
            continue
        # apply the move; index the cube directly (reshape of a swapaxes
        # view would copy and drop the update)
        moved = True
        state.total += delta
        o_idx, l_idx = supp // state.k_t, supp % state.k_t
        if axis == 0:
            np.subtract.at(state.cube, (a, o_idx, l_idx), prof)
            np.add.at(state.cube, (b, o_idx, l_idx), prof)
        else:
            np.subtract.at(state.cube, (o_idx, a, l_idx), prof)
            np.add.at(state.cube, (o_idx, b, l_idx), prof)
        marg[a] -= dv
        marg[b] += dv
        sizes[a] -= 1
        sizes[b] += 1
        assign[v] = b
        if sizes[a] == 0:
            state.cube = np.delete(state.cube, a, axis=axis)
            if axis == 0:
                state.sigma = np.delete(state.sigma, a)
                state.src_sizes = np.delete(state.src_sizes, a)
                state.src_assign[state.src_assign > a] -= 1
                assign, sizes, marg = (state.src_assign, state.src_sizes,
                                       state.sigma)
            else:
                state.dlt = np.delete(state.dlt, a)
                state.dst_sizes = np.delete(state.dst_sizes, a)
                state.dst_assign[state.dst_assign > a] -= 1
                assign, sizes, marg = (state.dst_assign, state.dst_sizes,
                                       state.dlt)
    return moved


def refine_reassign(edges: TemporalEdgeList, model: Triclustering,
                    cache: CombinatoricsCache | None = None) -> Triclustering:
    """Move single vertices between existing clusters while the cost
    decreases; returns a fixed point."""
    state = _State(model, cache, track_pairs=False)
    while True:
        moved = _reassign_axis(state, edges, 0)
        moved |= _reassign_axis(state, edges, 1)
        if not moved:
            break
    return state.to_triclustering()


# -- VNS --------------------------------------------------------------------


def _improve(edges, model, cache):
    """Greedy merging interleaved with reassignment until neither helps."""
    state = _State(model, cache)
    state.run_greedy()
    current = state.to_triclustering()
    cur_cost = state.total
    while True:
        refined = refine_reassign(edges, current, cache)
        state = _State(refined, cache)
        state.run_greedy()
        if state.total < cur_cost - EPS:
            current = state.to_triclustering()
            cur_cost = state.total
        else:
            return current, cur_cost


def _perturb(edges, model, level, rng):
    """Split ~2^level clusters per axis back toward singletons and rebuild."""
    n_split = int(math.ceil(2 ** level))

    def split_vertex_axis(assign):
        sizes = np.bincount(assign)
        splittable = np.flatnonzero(sizes >= 2)
        if splittable.size:
            chosen = rng.choice(splittable,
                                size=min(n_split, splittable.size),
                                replace=False)
            assign = assign.copy()
            nxt = sizes.size
            for c in chosen:
                verts = np.flatnonzero(assign == c)
                for v in verts[1:]:
                    assign[v] = nxt
                    nxt += 1
        # compact labels (np.unique relabels deterministically)
        _, compact = np.unique(assign, return_inverse=True)
        return compact.astype(np.int64)

    src = split_vertex_axis(model.source_assign)
    dst = split_vertex_axis(model.dest_assign)

    tau = np.diff(model.time_boundaries)
    splittable = np.flatnonzero(tau >= 2)
    pieces = [np.array([t]) for t in tau]
    if splittable.size:
        chosen = rng.choice(splittable, size=min(n_split, splittable.size),
                            replace=False)
        for c in chosen:
            t = int(tau[c])
            g = math.isqrt(t)
            if g * g < t:
                g += 1
            base, extra = divmod(t, g)
            sz = np.full(g, base, dtype=np.int64)
            sz[:extra] += 1
            pieces[c] = sz
    sizes = np.concatenate(pieces)
    boundaries = np.concatenate([[0], np.cumsum(sizes)])
    return compute_counts(edges, src, dst, boundaries)


def _vns_chain(edges, config, seed_seq, cache, deadline):
    rng = np.random.default_rng(seed_seq)
    report = []
    t0 = _time.monotonic()
    init = initial_solution(edges, config.initial_time_granularity)
    state = _State(init, cache)
    merges = state.run_greedy()
    if merges == 0 and init.k_t > 1:
        # the finest grid can be a local optimum where every merge pays more
        # in mapping factorials than it saves; fall back to a single interval
        coarse = _State(initial_solution(edges, 1), cache)
        coarse_merges = coarse.run_greedy()
        if coarse.total < state.total:
            state, merges = coarse, coarse_merges
    if config.restarts > 1:
        # polish the greedy incumbent by reassignment before perturbing
        best, best_cost = _improve(edges, state.to_triclustering(), cache)
    else:
        best, best_cost = state.to_triclustering(), state.total
    report.append(_restart_row(0, best, best_cost, merges, t0))
    budget_hit = False
    level = 1
    for r in range(1, config.restarts):
        if deadline is not None and _time.monotonic() > deadline:
            budget_hit = True
            break
        perturbed = _perturb(edges, best, level, rng)
        state = _State(perturbed, cache)
        merges = state.run_greedy()
        cand, cand_cost = _improve(edges, state.to_triclustering(), cache)
        report.append(_restart_row(r, cand, cand_cost, merges, t0))
        if cand_cost < best_cost - EPS:
            best, best_cost = cand, cand_cost
            level = 1
        else:
            level = min(level + 1, config.max_neighborhood_level)
    return best, best_cost, report, budget_hit


def _restart_row(idx, model, cost_val, merges, t0):
    return {
        "restart": idx,
        "cost": float(cost_val),
        "merges": int(merges),
        "wall_time": _time.monotonic() - t0,
        "k_s": model.k_s,
        "k_d": model.k_d,
        "k_t": model.k_t,
    }


def _thread_count() -> int:
    env = os.environ.get("TRICLUSTER_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def vns_fit(edges: TemporalEdgeList, config: SearchConfig | None = None,
            cache: CombinatoricsCache | None = None):
    """Variable neighborhood search around the greedy heuristic.

    Returns ``(model, report)``.  ``report`` maps "restarts" to per-restart
    rows and carries "budget_exhausted".  Deterministic given the seed.
    """
    config = config or SearchConfig()
    cache = cache or shared_cache()
    t0 = _time.monotonic()
    deadline = None if config.time_budget is None else t0 + config.time_budget

    if edges.m == 1:
        model = null_model(edges)
        c = criterion.cost(model, cache).total
        report = {"restarts": [_restart_row(0, model, c, 0, t0)],
                  "budget_exhausted": False, "best_cost": float(c)}
        return model, report

    if config.restarts == 1:
        init = initial_solution(edges, config.initial_time_granularity)
        state = _State(init, cache)
        merges = state.run_greedy()
        model = state.to_triclustering()
        report = {"restarts": [_restart_row(0, model, state.total, merges, t0)],
                  "budget_exhausted": False, "best_cost": float(state.total)}
        return model, report

    root = np.random.SeedSequence(config.seed)
    if config.parallel_restarts and _thread_count() > 1:
        n_chains = min(_thread_count(), config.restarts)
        per_chain = math.ceil(config.restarts / n_chains)
        seqs = root.spawn(n_chains)
        chain_cfg = SearchConfig(
            restarts=per_chain,
            max_neighborhood_level=config.max_neighborhood_level,
            seed=config.seed,
            initial_time_granularity=config.initial_time_granularity,
            time_budget=config.time_budget,
        )
        with ThreadPoolExecutor(max_workers=n_chains) as pool:
            futures = [pool.submit(_vns_chain, edges, chain_cfg, seqs[i],
                                   cache, deadline)
                       for i in range(n_chains)]
            results = [f.result() for f in futures]
        best, best_cost, rows, budget_hit = None, np.inf, [], False
        for i, (model, c, rep, hit) in enumerate(results):
            budget_hit |= hit
            for row in rep:
                row["chain"] = i
            rows.extend(rep)
            if c < best_cost - EPS:
                best, best_cost = model, c
    else:
        best, best_cost, rows, budget_hit = _vns_chain(
            edges, config, root, cache, deadline)

    # the null model is always an admissible candidate
    nm = null_model(edges)
    nc = criterion.cost(nm, cache).total
    if nc < best_cost - EPS:
        best, best_cost = nm, nc

    report = {"restarts": rows, "budget_exhausted": budget_hit,
              "best_cost": float(best_cost)}
    return best, report
