"""Trial conditioning: trimming, re-referencing and ICA artifact removal."""

from .conditioning import common_average_reference, trim_trace, trim_trial
from .ica import (
    ICADecomposition,
    choose_components,
    eog_component_scores,
    fast_ica,
    remove_components,
)
from .pipeline import PreprocessConfig, preprocess_dataset, preprocess_trial


__all__ = [
    "ICADecomposition",
    "PreprocessConfig",
    "choose_components",
    "common_average_reference",
    "eog_component_scores",
    "fast_ica",
    "preprocess_dataset",
    "preprocess_trial",
    "remove_components",
    "trim_trace",
    "trim_trial",
]
