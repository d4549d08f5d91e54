"""Tests for the figures package, driven by checked-in fixture tables."""

import hashlib
from pathlib import Path

import pandas as pd
import pytest

from tricluster_figures import (
    ExperimentTable,
    load_experiment_table,
    load_mi_table,
    plot_cluster_counts,
    plot_mi_heatmap,
)

DATA = Path(__file__).parent / "data"


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@pytest.fixture(scope="module")
def report():
    return load_experiment_table(DATA / "search_reports.csv")


@pytest.fixture(scope="module")
def mi_table():
    return load_mi_table(DATA / "mi_source_dest.csv")


class TestExperimentTable:
    def test_loads_fixture(self, report):
        assert len(report.m_values) == 3
        assert report.noise_levels == [0.0, 0.5]

    def test_concatenates_multiple_paths(self, tmp_path):
        frame = pd.read_csv(DATA / "search_reports.csv")
        half = len(frame) // 2
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        frame.iloc[:half].to_csv(a, index=False)
        frame.iloc[half:].to_csv(b, index=False)
        merged = load_experiment_table([a, b])
        assert len(merged.frame) == len(frame)

    def test_missing_column_rejected(self, report):
        with pytest.raises(ValueError, match="missing report columns"):
            ExperimentTable(report.frame.drop(columns=["cost"]))

    def test_empty_rejected(self, report):
        with pytest.raises(ValueError, match="empty"):
            ExperimentTable(report.frame.iloc[:0])

    def test_non_numeric_rejected(self, report):
        frame = report.frame.copy()
        frame["cost"] = "high"
        with pytest.raises(ValueError, match="non-numeric"):
            ExperimentTable(frame)

    def test_duplicate_runs_rejected(self, report):
        frame = pd.concat([report.frame, report.frame.iloc[:1]],
                          ignore_index=True)
        with pytest.raises(ValueError, match="duplicate"):
            ExperimentTable(frame)


class TestMiTable:
    def test_loads_fixture(self, mi_table):
        assert mi_table.shape == (6, 3)
        assert mi_table["contribution"].sum() == pytest.approx(
            0.0432190027525174)

    def test_rejects_missing_contribution(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError, match="not a contribution table"):
            load_mi_table(path)

    def test_rejects_empty(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("source_cluster,dest_cluster,contribution\n")
        with pytest.raises(ValueError, match="empty"):
            load_mi_table(path)


class TestClusterCountPlot:
    def test_writes_image(self, report, tmp_path):
        out = tmp_path / "counts.png"
        plot_cluster_counts(report, out)
        assert out.stat().st_size > 0
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_all_count_columns(self, report, tmp_path):
        for column in ("k_s_found", "k_d_found", "k_t_found"):
            out = tmp_path / f"{column}.png"
            plot_cluster_counts(report, out, column=column)
            assert out.stat().st_size > 0

    def test_unknown_column_rejected(self, report, tmp_path):
        with pytest.raises(ValueError, match="unknown column"):
            plot_cluster_counts(report, tmp_path / "x.png", column="k_q")

    def test_single_noise_level(self, report, tmp_path):
        sub = ExperimentTable(
            report.frame[report.frame["noise"] == 0.0].reset_index(drop=True))
        out = tmp_path / "single.png"
        plot_cluster_counts(sub, out)
        assert out.stat().st_size > 0


class TestMiHeatmap:
    def test_writes_image(self, mi_table, tmp_path):
        out = tmp_path / "mi.png"
        plot_mi_heatmap(mi_table, out)
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_all_zero_table_renders(self, mi_table, tmp_path):
        zero = mi_table.copy()
        zero["contribution"] = 0.0
        plot_mi_heatmap(zero, tmp_path / "zero.png")
        assert (tmp_path / "zero.png").stat().st_size > 0

    def test_empty_table_rejected(self, mi_table, tmp_path):
        with pytest.raises(ValueError, match="empty"):
            plot_mi_heatmap(mi_table.iloc[:0], tmp_path / "x.png")

    def test_sign_maps_to_red_and_blue(self, mi_table, tmp_path):
        # Render the pivoted values through the same colormap the plot
        # uses and check the diverging orientation: positive cells red
        # (R > B), negative cells blue (B > R), zero neutral.
        import matplotlib.pyplot as plt
        import numpy as np

        matrix = mi_table.pivot_table(
            index=mi_table.columns[0], columns=mi_table.columns[1],
            values="contribution", aggfunc="sum", fill_value=0.0)
        values = matrix.to_numpy(dtype=float)
        vmax = float(np.abs(values).max())
        cmap = plt.get_cmap("RdBu_r")
        rgba = cmap((values + vmax) / (2 * vmax))
        assert (rgba[values > 0, 0] > rgba[values > 0, 2]).all()
        assert (rgba[values < 0, 2] > rgba[values < 0, 0]).all()
        plot_mi_heatmap(mi_table, tmp_path / "mi.png")


class TestByteStability:
    def test_acceptance_figures_byte_stable(self, report, mi_table, tmp_path):
        # [SECONDARY]: two renders from the same checked-in fixture
        # tables must produce byte-identical image files.
        digests = {}
        for run in ("one", "two"):
            base = tmp_path / run
            base.mkdir()
            plot_cluster_counts(report, base / "counts.png")
            plot_mi_heatmap(mi_table, base / "mi.png")
            digests[run] = (_sha256(base / "counts.png"),
                            _sha256(base / "mi.png"))
        ok = digests["one"] == digests["two"]
        print(f"ACCEPTANCE figures-byte-stable: {'PASS' if ok else 'FAIL'} "
              f"(counts {digests['one'][0][:12]}, mi {digests['one'][1][:12]})")
        assert ok
