"""EEG band-power features."""

from functools import lru_cache
from typing import List, Optional, Sequence

import numpy as np

from src.dataset import SignalTrace
from src.dsp import (
    BiquadCascade,
    band_power,
    design_bandpass,
    filter_apply,
    resolve_segment_length,
    welch_psd,
)
from src.exceptions import FeatureExtractionError
from src.utils.constants import (
    DEFAULT_BANDPASS_ORDER,
    DEFAULT_EEG_SEG_LEN,
    DEFAULT_OVERLAP,
    DEFAULT_WINDOW,
    EEG_BANDS,
    EEG_MONTAGE,
)

from .vector import FeatureSlot, FeatureVector


@lru_cache(maxsize=64)
def _band_filter(lo_hz: float, hi_hz: float, order: int, fs_hz: float) -> BiquadCascade:
    return design_bandpass(lo_hz, hi_hz, order, fs_hz)


def resolve_channels(channels: Optional[Sequence[str]]) -> List[str]:
    """Validate a channel subset and return it in montage order."""
    if channels is None:
        return list(EEG_MONTAGE)
    unknown = [ch for ch in channels if ch not in EEG_MONTAGE]
    if unknown:
        raise FeatureExtractionError(f"Unknown EEG channels: {unknown}")
    if not channels:
        raise FeatureExtractionError("Channel subset is empty")
    return [ch for ch in EEG_MONTAGE if ch in channels]


def resolve_bands(bands: Optional[Sequence[str]]) -> List[str]:
    """Validate a band subset and return it in theta-alpha-beta-gamma order."""
    if bands is None:
        return list(EEG_BANDS)
    unknown = [b for b in bands if b not in EEG_BANDS]
    if unknown:
        raise FeatureExtractionError(f"Unknown EEG bands: {unknown}")
    if not bands:
        raise FeatureExtractionError("Band subset is empty")
    return [b for b in EEG_BANDS if b in bands]


def eeg_feature_name(channel: str, band: str) -> str:
    return f"eeg_{channel}_{band}"


def eeg_band_features(
    eeg: SignalTrace,
    channels: Optional[Sequence[str]] = None,
    bands: Optional[Sequence[str]] = None,
    seg_len: int = DEFAULT_EEG_SEG_LEN,
    overlap: float = DEFAULT_OVERLAP,
    window: str = DEFAULT_WINDOW,
    order: int = DEFAULT_BANDPASS_ORDER,
    log_power: bool = False,
) -> FeatureVector:
    """Band power per (channel, band), channel-major.

    Each channel is band-filtered with a causal Butterworth filter, its
    Welch PSD estimated, and the PSD integrated over the band.

    Raises:
        FeatureExtractionError: On unknown channel or band names
    """
    chosen_channels = resolve_channels(channels)
    chosen_bands = resolve_bands(bands)
    fs = eeg.sample_rate_hz
    n_seg = resolve_segment_length(eeg.n_samples, seg_len)

    values = []
    layout = []
    for channel in chosen_channels:
        x = eeg.channel(channel)
        for band in chosen_bands:
            lo, hi = EEG_BANDS[band]
            filtered = filter_apply(_band_filter(lo, hi, order, fs), x, steady_state=True)
            power = band_power(welch_psd(filtered, fs, n_seg, overlap, window), lo, hi)
            if log_power:
                power = float(np.log10(max(power, np.finfo(float).tiny)))
            values.append(power)
            layout.append(
                FeatureSlot(
                    name=eeg_feature_name(channel, band),
                    family="eeg",
                    tag=f"{'log10 ' if log_power else ''}psd:{lo:g}-{hi:g}Hz",
                )
            )
    return FeatureVector(values=np.array(values), layout=tuple(layout))
