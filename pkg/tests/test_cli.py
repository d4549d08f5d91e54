import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from tricluster.cli import main

runner = CliRunner()


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    gen = root / "gen"
    res = runner.invoke(main, ["generate", "--output", str(gen), "--seed",
                               "3", "--k", "3", "--ns", "12", "--nd", "12",
                               "--m", "2000"])
    assert res.exit_code == 0, res.output
    return root, gen / "edges.csv"


@pytest.fixture(scope="module")
def fitted(dataset):
    root, edges = dataset
    out = root / "fit"
    res = runner.invoke(main, ["fit", "--input", str(edges), "--output",
                               str(out), "--seed", "3", "--restarts", "4"])
    assert res.exit_code == 0, res.output
    return out


def test_generate_outputs(dataset):
    root, edges = dataset
    lines = edges.read_text().splitlines()
    assert lines[0] == "source,destination,time"
    assert len(lines) == 2001
    truth = json.loads((edges.parent / "truth.json").read_text())
    assert len(truth["source"]) == 12
    manifest = json.loads((edges.parent / "manifest.json").read_text())
    assert manifest["command"] == "generate"
    assert str(edges) in manifest["outputs"]


def test_generate_reproducible(dataset, tmp_path):
    root, edges = dataset
    out = tmp_path / "again"
    res = runner.invoke(main, ["generate", "--output", str(out), "--seed",
                               "3", "--k", "3", "--ns", "12", "--nd", "12",
                               "--m", "2000"])
    assert res.exit_code == 0
    assert (out / "edges.csv").read_bytes() == edges.read_bytes()


def test_fit_outputs(fitted):
    model = json.loads((fitted / "model.json").read_text())
    assert model["schema_version"] == 1
    report = (fitted / "search_report.csv").read_text().splitlines()
    assert report[0].startswith("m,seed,noise,")
    assert len(report) == 2
    costs = json.loads((fitted / "costs.json").read_text())
    assert costs["cost"] <= costs["null_cost"]
    breakdown = (fitted / "cost_breakdown.csv").read_text()
    assert "total" in breakdown


def test_fit_reproducible(dataset, fitted, tmp_path):
    _, edges = dataset
    out = tmp_path / "fit2"
    res = runner.invoke(main, ["fit", "--input", str(edges), "--output",
                               str(out), "--seed", "3", "--restarts", "4"])
    assert res.exit_code == 0
    assert (out / "model.json").read_bytes() == \
        (fitted / "model.json").read_bytes()


def test_fit_restart_one_matches_greedy(dataset, tmp_path):
    _, edges = dataset
    out = tmp_path / "g"
    res = runner.invoke(main, ["fit", "--input", str(edges), "--output",
                               str(out), "--restarts", "1",
                               "--granularity", "4"])
    assert res.exit_code == 0
    from tricluster import greedy_merge, initial_solution, ingest_edges, cost
    with open(edges) as fh:
        e = ingest_edges(fh)
    expected = cost(greedy_merge(initial_solution(e, 4))).total
    costs = json.loads((out / "costs.json").read_text())
    assert costs["cost"] == pytest.approx(expected, rel=1e-12)


def test_coarsen(fitted, tmp_path):
    out = tmp_path / "c"
    res = runner.invoke(main, ["coarsen", "--input",
                               str(fitted / "model.json"), "--output",
                               str(out), "--clusters", "2,2,0",
                               "--check-replay"])
    assert res.exit_code == 0, res.output
    model = json.loads((out / "model.json").read_text())
    assert max(model["source_assign"]) <= 1
    hierarchy = json.loads((out / "hierarchy.json").read_text())
    assert hierarchy["merges"]


def test_coarsen_tau_zero_full_dendrogram(fitted, tmp_path):
    out = tmp_path / "c0"
    res = runner.invoke(main, ["coarsen", "--input",
                               str(fitted / "model.json"), "--output",
                               str(out), "--tau", "0.0"])
    assert res.exit_code == 0
    model = json.loads((out / "model.json").read_text())
    assert max(model["source_assign"]) == 0
    assert max(model["dest_assign"]) == 0
    assert len(model["time_boundaries"]) == 2


def test_analyze(dataset, fitted, tmp_path):
    _, edges = dataset
    out = tmp_path / "a"
    res = runner.invoke(main, ["analyze", "--input", str(edges), "--model",
                               str(fitted / "model.json"), "--output",
                               str(out)])
    assert res.exit_code == 0, res.output
    rows = (out / "mi_source_dest.csv").read_text().splitlines()
    table = np.array([r.split(",") for r in rows[1:]], dtype=float)
    totals = json.loads((out / "mi_totals.json").read_text())
    assert table[:, 2].sum() == pytest.approx(totals["mi_source_dest"],
                                              rel=1e-9)


def test_eval(dataset, fitted):
    _, edges = dataset
    res = runner.invoke(main, ["eval", "--input", str(edges), "--model",
                               str(fitted / "model.json"), "--star",
                               str(fitted / "model.json")])
    assert res.exit_code == 0, res.output
    assert "informativity: 1.000000" in res.output


def test_exit_code_bad_input(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    res = runner.invoke(main, ["fit", "--input", str(empty), "--output",
                               str(tmp_path / "x")])
    assert res.exit_code == 2
    res = runner.invoke(main, ["fit", "--input",
                               str(tmp_path / "missing.csv"),
                               "--output", str(tmp_path / "x")])
    assert res.exit_code == 2


def test_exit_code_bad_flags(dataset, tmp_path):
    _, edges = dataset
    res = runner.invoke(main, ["fit", "--input", str(edges), "--output",
                               str(tmp_path / "x"), "--restarts", "0"])
    assert res.exit_code == 64
    res = runner.invoke(main, ["generate", "--output", str(tmp_path / "y"),
                               "--k", "0"])
    assert res.exit_code == 64


def test_exit_code_conflicting_stops(fitted, tmp_path):
    res = runner.invoke(main, ["coarsen", "--input",
                               str(fitted / "model.json"), "--output",
                               str(tmp_path / "x"), "--tau", "0.5",
                               "--clusters", "1,1,1"])
    assert res.exit_code == 64


def test_exit_code_incompatible(dataset, fitted, tmp_path):
    root, _ = dataset
    other = tmp_path / "other"
    res = runner.invoke(main, ["generate", "--output", str(other), "--seed",
                               "9", "--k", "3", "--ns", "12", "--nd", "12",
                               "--m", "1000"])
    assert res.exit_code == 0
    res = runner.invoke(main, ["analyze", "--input",
                               str(other / "edges.csv"), "--model",
                               str(fitted / "model.json"), "--output",
                               str(tmp_path / "x")])
    assert res.exit_code == 3
