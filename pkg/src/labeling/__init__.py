"""Clustering, cluster validation, stimulus curation and ground-truth labels."""

from .clustering import ClusterModel, gmm_fit, kmeans_fit
from .labels import (
    LABELINGS,
    TARGETS,
    BinaryLabels,
    label_by_quadrant,
    label_by_threshold,
    label_dataset,
)
from .stimuli import (
    SCORE_COLUMNS,
    STIMULUS_COLUMNS,
    StimulusRanking,
    check_rating_columns,
    clip_rating_summary,
    plan_playlist,
    select_stimuli,
)
from .validation import (
    CLUSTER_METHODS,
    ClusterSweep,
    cluster_sweep,
    davies_bouldin,
    elbow_knee,
    select_k_by_db,
)


__all__ = [
    "CLUSTER_METHODS",
    "LABELINGS",
    "SCORE_COLUMNS",
    "STIMULUS_COLUMNS",
    "TARGETS",
    "BinaryLabels",
    "ClusterModel",
    "ClusterSweep",
    "StimulusRanking",
    "check_rating_columns",
    "clip_rating_summary",
    "cluster_sweep",
    "davies_bouldin",
    "elbow_knee",
    "gmm_fit",
    "kmeans_fit",
    "label_by_quadrant",
    "label_by_threshold",
    "label_dataset",
    "plan_playlist",
    "select_k_by_db",
    "select_stimuli",
]
