"""Parsing of the CLI's tabular exports."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import pandas as pd

REPORT_COLUMNS = ["m", "seed", "noise", "k_s_found", "k_d_found",
                  "k_t_found", "cost", "runtime"]


@dataclass(frozen=True)
class ExperimentTable:
    """Rows of (m, seed, noise, detected cluster counts, cost, runtime)."""

    frame: pd.DataFrame

    def __post_init__(self):
        missing = [c for c in REPORT_COLUMNS if c not in self.frame.columns]
        if missing:
            raise ValueError(f"missing report columns: {missing}")
        if self.frame.empty:
            raise ValueError("empty experiment table")
        for col in REPORT_COLUMNS:
            if not pd.api.types.is_numeric_dtype(self.frame[col]):
                raise ValueError(f"non-numeric column {col!r}")
        dup = self.frame.duplicated(subset=["m", "seed", "noise"])
        if dup.any():
            raise ValueError("duplicate (m, seed, noise) rows")

    @property
    def m_values(self):
        return sorted(self.frame["m"].unique())

    @property
    def noise_levels(self):
        return sorted(self.frame["noise"].unique())


def load_experiment_table(paths) -> ExperimentTable:
    """Concatenate one or more fit search reports into a single table."""
    if isinstance(paths, (str, Path)):
        paths = [paths]
    frames = [pd.read_csv(p) for p in paths]
    return ExperimentTable(pd.concat(frames, ignore_index=True))


def load_mi_table(path) -> pd.DataFrame:
    """Long-format mutual-information contribution table.

    Expects at least two index columns followed by a ``contribution``
    column, as written by the analyze command.
    """
    frame = pd.read_csv(path)
    if "contribution" not in frame.columns or frame.shape[1] < 3:
        raise ValueError("not a contribution table")
    if frame.empty:
        raise ValueError("empty contribution table")
    return frame
