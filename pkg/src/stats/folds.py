"""Fold-wise score matrices built from cross-validation reports."""

from typing import List, Sequence, Tuple

import numpy as np

from src.evaluation import CVReport
from src.exceptions import StatisticsError


METRICS = ("test_accuracy", "test_f1")


def fold_matrix(
    reports: Sequence[CVReport], metric: str = "test_accuracy"
) -> Tuple[np.ndarray, List[str]]:
    """Folds (rows) x reports (columns), aligned on the held-out clip.

    Returns:
        The score matrix and the held-out clip of every row

    Raises:
        StatisticsError: If the reports do not share the same folds
    """
    if metric not in METRICS:
        raise StatisticsError(f"Unknown metric {metric!r}; use one of {METRICS}")
    if len(reports) < 2:
        raise StatisticsError("Need at least two reports to compare")

    clips = sorted(f.held_out_clip for f in reports[0].folds)
    columns = []
    for report in reports:
        by_clip = {f.held_out_clip: getattr(f, metric) for f in report.folds}
        if sorted(by_clip) != clips:
            raise StatisticsError(
                f"Reports do not share folds: {sorted(by_clip)} vs {clips}"
            )
        columns.append([by_clip[c] for c in clips])
    return np.array(columns, dtype=float).T, clips
