import math

import numpy as np
import pytest

from tricluster import (
    TemporalEdgeList,
    asymptotic_dissimilarity_check,
    cluster_distributions,
    js_divergence,
    kl_divergence,
    mi_pair_time,
    mi_source_dest,
    null_model,
    to_bits,
)
from tricluster.model import compute_counts


def test_distributions_validate(worked_example):
    _, model = worked_example
    d = cluster_distributions(model)
    d.validate()
    assert d.source.tolist() == [0.2, 0.2, 0.6]
    assert d.dest.tolist() == [0.44, 0.56]
    assert np.allclose(d.time, [12 / 50, 21 / 50, 17 / 50])


def test_worked_example_mi_cell(worked_example):
    # joint (0,0) mass 0.14 against independence 0.2 * 0.44
    _, model = worked_example
    contrib, total = mi_source_dest(model)
    expected = 0.14 * math.log(0.14 / (0.2 * 0.44))
    assert contrib[0, 0] == pytest.approx(expected, rel=1e-12)
    assert contrib[0, 0] == pytest.approx(0.0650, abs=5e-5)
    assert total == pytest.approx(contrib.sum(), rel=1e-12)


def test_null_model_mi_is_zero():
    rng = np.random.default_rng(0)
    e = TemporalEdgeList.from_arrays(rng.integers(4, size=30),
                                     rng.integers(4, size=30),
                                     raw_times=rng.random(30))
    contrib, total = mi_source_dest(null_model(e))
    assert total == 0.0
    assert np.all(contrib == 0.0)
    contrib3, total3 = mi_pair_time(null_model(e))
    assert total3 == 0.0


def test_mi_totals_non_negative(worked_example):
    _, model = worked_example
    _, t1 = mi_source_dest(model)
    _, t2 = mi_pair_time(model)
    assert t1 >= 0 and t2 >= 0


def test_kl_divergence_basics():
    p = [0.5, 0.5]
    q = [0.9, 0.1]
    assert kl_divergence(p, p) == 0.0
    assert kl_divergence(p, q) > 0
    assert kl_divergence([1.0, 0.0], [0.0, 1.0]) == math.inf


def test_js_divergence_properties():
    p = np.array([0.7, 0.2, 0.1])
    q = np.array([0.1, 0.3, 0.6])
    js = js_divergence(p, q, 0.5, 0.5)
    assert 0 <= js <= math.log(2) + 1e-12
    assert js == pytest.approx(js_divergence(q, p, 0.5, 0.5), rel=1e-12)
    assert js_divergence(p, p, 0.3, 0.7) == pytest.approx(0.0, abs=1e-12)
    # finite even on disjoint supports, unlike KL
    assert math.isfinite(js_divergence([1, 0], [0, 1], 0.5, 0.5))


def test_js_divergence_rejects_bad_weights():
    with pytest.raises(ValueError):
        js_divergence([1, 0], [0, 1], 0.6, 0.6)


def test_asymptotic_check_consistent_with_merge_delta(worked_example):
    _, model = worked_example
    from tricluster import merge_delta
    emp, lim = asymptotic_dissimilarity_check(model, 0, 1)
    assert emp == pytest.approx(merge_delta(model, "source", 0, 1) / model.m,
                                rel=1e-12)
    assert lim >= 0


def test_asymptotic_check_rejects_same_cluster(worked_example):
    _, model = worked_example
    with pytest.raises(ValueError):
        asymptotic_dissimilarity_check(model, 1, 1)


def test_to_bits():
    assert to_bits(math.log(2)) == pytest.approx(1.0)
    assert np.allclose(to_bits([math.log(4), 0.0]), [2.0, 0.0])
