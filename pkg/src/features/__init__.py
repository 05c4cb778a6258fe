"""Per-trial feature vectors for EEG and wearable signals."""

from .assemble import (
    MODALITIES,
    ExtractionConfig,
    FeatureTable,
    assemble_features,
    extract_table,
)
from .eeg import eeg_band_features, eeg_feature_name
from .peripheral import (
    IBISeries,
    bvp_features,
    detect_pulses,
    eda_band_edges,
    eda_features,
    ibi_features,
    tachogram,
    temp_features,
)
from .vector import FeatureSlot, FeatureVector


__all__ = [
    "MODALITIES",
    "ExtractionConfig",
    "FeatureSlot",
    "FeatureTable",
    "FeatureVector",
    "IBISeries",
    "assemble_features",
    "bvp_features",
    "detect_pulses",
    "eda_band_edges",
    "eda_features",
    "eeg_band_features",
    "eeg_feature_name",
    "extract_table",
    "ibi_features",
    "tachogram",
    "temp_features",
]
