"""Tables and plot series rendered from run outputs."""

from .tables import (
    EXPECTED_FILES,
    REPORT_FILE,
    STATS_FILE,
    STUDY_FILE,
    SWEEP_FILE,
    RunOutputs,
    ablation_table,
    anova_table,
    build_report,
    cluster_series,
    collect_outputs,
    comparison_table,
    write_table,
)


__all__ = [
    "EXPECTED_FILES",
    "REPORT_FILE",
    "STATS_FILE",
    "STUDY_FILE",
    "SWEEP_FILE",
    "RunOutputs",
    "ablation_table",
    "anova_table",
    "build_report",
    "cluster_series",
    "collect_outputs",
    "comparison_table",
    "write_table",
]
