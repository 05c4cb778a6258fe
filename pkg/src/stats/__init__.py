"""Repeated-measures comparison of fold-wise scores."""

from .anova import (
    AnovaResult,
    ConditionSummary,
    PairComparison,
    bonferroni_posthoc,
    format_summary,
    gg_epsilon,
    rm_anova_gg,
)
from .folds import METRICS, fold_matrix


__all__ = [
    "METRICS",
    "AnovaResult",
    "ConditionSummary",
    "PairComparison",
    "bonferroni_posthoc",
    "fold_matrix",
    "format_summary",
    "gg_epsilon",
    "rm_anova_gg",
]
