"""Nested leave-one-clip-out evaluation and the EEG ablation studies."""

from .crossval import (
    INNER_CV_POLICY,
    CVConfig,
    CVReport,
    CVResult,
    Fold,
    FoldReport,
    SVMOptions,
    class_ratio,
    cross_validate,
    evaluate_model,
    evaluate_table,
    evaluate_tables,
    folds_from_keys,
    grid_search,
    labels_for,
    loco_folds,
    prepare_table,
    run_cv,
    run_fold,
)
from .grid import GridPoint, GridSpec
from .studies import StudyResult, StudyRow, band_study, channel_study


__all__ = [
    "INNER_CV_POLICY",
    "CVConfig",
    "CVReport",
    "CVResult",
    "Fold",
    "FoldReport",
    "GridPoint",
    "GridSpec",
    "SVMOptions",
    "StudyResult",
    "StudyRow",
    "band_study",
    "channel_study",
    "class_ratio",
    "cross_validate",
    "evaluate_model",
    "evaluate_table",
    "evaluate_tables",
    "folds_from_keys",
    "grid_search",
    "labels_for",
    "loco_folds",
    "prepare_table",
    "run_cv",
    "run_fold",
]
