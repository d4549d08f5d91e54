import numpy as np
import pytest

from tricluster import (
    GeneratorConfig,
    TemporalEdgeList,
    erdos_renyi_temporal,
    generate,
    reallocate,
    recovery_score,
    sample_from_model,
    shuffle_time,
    theta,
    vns_fit,
)
from tricluster.model import compute_counts
from tricluster.synthgen import balanced_partition


class TestTheta:
    def test_rows_sum_to_one(self):
        for t in (0.0, 0.25, 0.5, 1.0):
            for k in (1, 2, 5):
                assert theta(t, k).sum() == pytest.approx(1.0, rel=1e-12)

    def test_endpoint_values(self):
        th1 = theta(1.0, 5)
        assert th1[0, 0] == pytest.approx(0.18)
        assert th1[0, 1] == pytest.approx(0.005)
        th0 = theta(0.0, 5)
        assert th0[0, 0] == pytest.approx(0.02)
        assert th0[0, 1] == pytest.approx(0.045)

    def test_midpoint_values(self):
        th = theta(0.5, 4)
        assert th[0, 0] == pytest.approx(0.5 / 4)
        assert th[0, 1] == pytest.approx(0.5 / 12)

    def test_single_cluster(self):
        assert theta(0.3, 1).tolist() == [[1.0]]

    def test_domain_checked(self):
        with pytest.raises(ValueError):
            theta(1.5, 3)


def test_balanced_partition():
    part = balanced_partition(11, 3)
    sizes = np.bincount(part)
    assert sizes.tolist() == [4, 4, 3]
    assert np.all(np.diff(part) >= 0)


def test_generate_deterministic():
    cfg = GeneratorConfig(k=3, n_sources=9, n_dests=9, m=500, seed=5)
    e1, t1 = generate(cfg)
    e2, t2 = generate(cfg)
    assert np.array_equal(e1.sources, e2.sources)
    assert np.array_equal(e1.raw_times, e2.raw_times)
    assert np.array_equal(t1["source"], t2["source"])


def test_generate_shapes_and_truth():
    cfg = GeneratorConfig(k=3, n_sources=10, n_dests=8, m=400, seed=1)
    edges, truth = generate(cfg)
    assert edges.m == 400
    assert edges.n_sources == 10 and edges.n_dests == 8
    assert len(truth["source"]) == 10
    assert len(truth["dest"]) == 8
    assert np.bincount(truth["source"]).tolist() == [4, 3, 3]


def test_generate_validates_config():
    with pytest.raises(ValueError):
        GeneratorConfig(k=5, n_sources=3, n_dests=10)
    with pytest.raises(ValueError):
        GeneratorConfig(noise_fraction=1.5)
    with pytest.raises(ValueError):
        GeneratorConfig(mode="wat")


def test_generate_modes_differ():
    temporal, _ = generate(GeneratorConfig(m=300, seed=2, mode="temporal"))
    shuffled, _ = generate(GeneratorConfig(m=300, seed=2, mode="shuffled"))
    assert not np.array_equal(temporal.time_ranks, shuffled.time_ranks)


def test_reallocate_changes_bounded_fraction():
    edges, _ = generate(GeneratorConfig(k=3, n_sources=9, n_dests=9,
                                        m=1000, seed=3))
    noisy = reallocate(edges, 0.3, seed=11)
    assert noisy.m == edges.m
    changed = np.sum((noisy.sources != edges.sources)
                     | (noisy.destinations != edges.destinations)
                     | (noisy.raw_times != edges.raw_times))
    assert changed <= 300
    assert changed > 0
    same = reallocate(edges, 0.0, seed=11)
    assert np.array_equal(same.sources, edges.sources)


def test_shuffle_time_preserves_pairs():
    edges, _ = generate(GeneratorConfig(m=300, seed=4))
    shuffled = shuffle_time(edges, seed=0)
    assert np.array_equal(shuffled.sources, edges.sources)
    assert np.array_equal(shuffled.destinations, edges.destinations)
    assert sorted(shuffled.time_ranks) == sorted(edges.time_ranks)


def test_erdos_renyi():
    e1 = erdos_renyi_temporal(10, 12, 200, seed=0)
    e2 = erdos_renyi_temporal(10, 12, 200, seed=0)
    assert np.array_equal(e1.sources, e2.sources)
    assert e1.n_sources == 10 and e1.n_dests == 12


def test_sample_from_model_round_trip():
    edges, _ = generate(GeneratorConfig(k=3, n_sources=9, n_dests=9,
                                        m=2000, seed=6))
    model, _ = vns_fit(edges)
    for seed in (0, 1):
        sampled = sample_from_model(model, seed=seed)
        redo = compute_counts(sampled, model.source_assign,
                              model.dest_assign, model.time_boundaries)
        assert redo.counts == model.counts
        assert np.array_equal(sampled.out_degrees, model.out_degrees)
        assert np.array_equal(sampled.in_degrees, model.in_degrees)


def test_recovery_score():
    truth = np.array([0, 0, 1, 1, 2, 2])
    assert recovery_score(truth, truth) == pytest.approx(1.0)
    relabeled = np.array([2, 2, 0, 0, 1, 1])
    assert recovery_score(relabeled, truth) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        recovery_score(truth[:4], truth)
