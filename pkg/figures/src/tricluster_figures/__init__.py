"""Figures from tricluster CLI exports.

Consumes only the documented text artifacts (search report and
mutual-information contribution tables); no in-process coupling to the
fitting library.
"""

from .tables import ExperimentTable, load_experiment_table, load_mi_table
from .plots import plot_cluster_counts, plot_mi_heatmap

__all__ = [
    "ExperimentTable",
    "load_experiment_table",
    "load_mi_table",
    "plot_cluster_counts",
    "plot_mi_heatmap",
]
