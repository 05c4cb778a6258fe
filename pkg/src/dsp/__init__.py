"""Deterministic signal-processing primitives."""

from .filters import (
    BiquadCascade,
    design_bandpass,
    design_lowpass,
    design_notch,
    filter_apply,
    frequency_response,
    gain_db,
)
from .spectral import (
    Spectrum,
    band_power,
    resolve_segment_length,
    welch_psd,
    zero_crossing_rate,
)


__all__ = [
    "BiquadCascade",
    "Spectrum",
    "band_power",
    "design_bandpass",
    "design_lowpass",
    "design_notch",
    "filter_apply",
    "frequency_response",
    "gain_db",
    "resolve_segment_length",
    "welch_psd",
    "zero_crossing_rate",
]
