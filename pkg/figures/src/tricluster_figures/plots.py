"""Violin plots of detected structure sizes and MI contribution heatmaps."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .tables import ExperimentTable

# deterministic output: identical inputs must give identical image bytes
SAVE_KWARGS = {"dpi": 150, "metadata": {"Software": None}}


def plot_cluster_counts(table: ExperimentTable, output_path,
                        column: str = "k_s_found") -> None:
    """Violin plot of a detected count per edge-count m, one series per
    noise level.  The count axis starts at 1, the null-model floor.
    """
    frame = table.frame
    if column not in frame.columns:
        raise ValueError(f"unknown column {column!r}")
    m_values = table.m_values
    noise_levels = table.noise_levels
    n_noise = len(noise_levels)

    fig, ax = plt.subplots(figsize=(1.8 + 1.4 * len(m_values), 4.0))
    cmap = plt.get_cmap("viridis")
    width = 0.8 / n_noise
    for ni, noise in enumerate(noise_levels):
        color = cmap(0.15 + 0.7 * ni / max(1, n_noise - 1)) \
            if n_noise > 1 else cmap(0.4)
        positions, series = [], []
        for mi, m in enumerate(m_values):
            rows = frame[(frame["m"] == m) & (frame["noise"] == noise)]
            if rows.empty:
                continue
            positions.append(mi + (ni - (n_noise - 1) / 2) * width)
            series.append(rows[column].to_numpy(dtype=float))
        if not series:
            continue
        parts = ax.violinplot(series, positions=positions,
                              widths=width * 0.9, showmedians=True)
        for body in parts["bodies"]:
            body.set_facecolor(color)
            body.set_alpha(0.6)
        for key in ("cbars", "cmins", "cmaxes", "cmedians"):
            parts[key].set_color(color)
        ax.plot([], [], color=color, label=f"noise {noise:g}")

    ax.set_xticks(range(len(m_values)))
    ax.set_xticklabels([f"$2^{{{int(np.log2(m))}}}$" if float(m).is_integer()
                        and (int(m) & (int(m) - 1)) == 0 else str(int(m))
                        for m in m_values])
    ax.set_xlabel("number of edges m")
    ax.set_ylabel(column.replace("_found", " detected"))
    ax.set_ylim(bottom=1)
    if n_noise > 1:
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(output_path, **SAVE_KWARGS)
    plt.close(fig)


def plot_mi_heatmap(table, output_path) -> None:
    """Diverging heatmap of a long-format contribution table.

    The first two columns index the matrix; positive contributions are
    shown in red, negative in blue, with intensity proportional to the
    magnitude.
    """
    if table.empty:
        raise ValueError("empty contribution table")
    rows_col, cols_col = table.columns[0], table.columns[1]
    matrix = table.pivot_table(index=rows_col, columns=cols_col,
                               values="contribution", aggfunc="sum",
                               fill_value=0.0)
    values = matrix.to_numpy(dtype=float)
    vmax = float(np.abs(values).max())
    if vmax == 0.0:
        vmax = 1.0  # all-zero table: uniform neutral map

    fig, ax = plt.subplots(
        figsize=(1.5 + 0.5 * matrix.shape[1], 1.2 + 0.5 * matrix.shape[0]))
    im = ax.imshow(values, cmap="RdBu_r", vmin=-vmax, vmax=vmax)
    ax.set_xlabel(cols_col)
    ax.set_ylabel(rows_col)
    ax.set_xticks(range(matrix.shape[1]))
    ax.set_xticklabels(matrix.columns.tolist())
    ax.set_yticks(range(matrix.shape[0]))
    ax.set_yticklabels(matrix.index.tolist())
    fig.colorbar(im, ax=ax, label="MI contribution (nats)")
    fig.tight_layout()
    fig.savefig(output_path, **SAVE_KWARGS)
    plt.close(fig)
