"""Wearable-signal features: electrodermal activity, blood volume pulse, skin temperature."""

import math

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
import structlog

from scipy.ndimage import median_filter
from scipy.signal import find_peaks

from src.dataset import SignalTrace
from src.dsp import (
    band_power,
    design_lowpass,
    filter_apply,
    resolve_segment_length,
    welch_psd,
    zero_crossing_rate,
)
from src.dsp.spectral import Spectrum
from src.exceptions import FeatureExtractionError
from src.utils.constants import (
    BVP_MIN_SECONDS,
    DEFAULT_EDA_BANDS,
    DEFAULT_LOW_RATE_SEG_LEN,
    DEFAULT_OVERLAP,
    DEFAULT_PULSE_MAD_K,
    DEFAULT_WINDOW,
    EDA_LOWPASS_ORDER,
    EDA_MIN_SECONDS,
    EDA_SLOW_RESPONSE_HZ,
    EDA_SPECTRUM_MAX_HZ,
    EDA_VERY_SLOW_RESPONSE_HZ,
    HRV_HF_BAND,
    HRV_LF_BAND,
    HRV_MF_BAND,
    HRV_NARROW_BANDS,
    HRV_RATIO_HIGH_BAND,
    HRV_RATIO_LOW_BAND,
    MIN_SEG_LEN,
    MIN_VALID_PULSES,
    PULSE_MIN_SEPARATION_S,
    PULSE_WINDOW_S,
    TACHOGRAM_RATE_HZ,
    TEMP_BANDS,
    TEMP_MIN_DURATION_S,
)

from .vector import FeatureSlot, FeatureVector


logger = structlog.get_logger()


def _spectrum(x: np.ndarray, fs: float, seg_len: int, overlap: float, window: str) -> Spectrum:
    return welch_psd(x, fs, resolve_segment_length(x.size, seg_len), overlap, window)


def _clipped_band_power(s: Spectrum, lo: float, hi: float) -> float:
    """Band power with the band clipped at Nyquist; bands entirely above it are 0."""
    if lo >= s.nyquist_hz:
        return 0.0
    return band_power(s, lo, min(hi, s.nyquist_hz))


def _mean_derivative(x: np.ndarray, fs: float) -> np.ndarray:
    return np.diff(x) * fs


# ----------------------------------------------------------------------------
# Electrodermal activity


def eda_band_edges(n_bands: int = DEFAULT_EDA_BANDS) -> List[Tuple[float, float]]:
    """Contiguous equal-width bands partitioning [0, 2.4] Hz."""
    edges = np.linspace(0.0, EDA_SPECTRUM_MAX_HZ, n_bands + 1)
    return [(float(lo), float(hi)) for lo, hi in zip(edges[:-1], edges[1:])]


def _rise_times(x: np.ndarray, fs: float) -> Tuple[int, float]:
    """Local-minimum count and mean time from each minimum to the next maximum."""
    minima, _ = find_peaks(-x)
    maxima, _ = find_peaks(x)
    rises = []
    for m in minima:
        later = maxima[maxima > m]
        if later.size:
            rises.append((later[0] - m) / fs)
    return int(minima.size), float(np.mean(rises)) if rises else 0.0


def eda_features(
    eda: SignalTrace,
    n_bands: int = DEFAULT_EDA_BANDS,
    seg_len: int = DEFAULT_LOW_RATE_SEG_LEN,
    overlap: float = DEFAULT_OVERLAP,
    window: str = DEFAULT_WINDOW,
) -> FeatureVector:
    """Skin-response features in a fixed order.

    mean level, mean derivative, mean of negative derivative values, fraction
    of negative derivative samples, local-minimum count, mean rising time,
    ``n_bands`` spectral powers over [0, 2.4] Hz, and zero-crossing rates of
    the 0.2 Hz and 0.08 Hz lowpassed signal.

    Raises:
        FeatureExtractionError: If the trace is shorter than 8 s
    """
    if eda.duration_s < EDA_MIN_SECONDS:
        raise FeatureExtractionError(
            f"EDA trace lasts {eda.duration_s:.2f} s, need {EDA_MIN_SECONDS} s"
        )
    x = eda.samples[0]
    fs = eda.sample_rate_hz

    deriv = _mean_derivative(x, fs)
    negative = deriv[deriv < 0]
    n_minima, rise = _rise_times(x, fs)

    values = [
        float(x.mean()),
        float(deriv.mean()),
        float(negative.mean()) if negative.size else 0.0,
        negative.size / deriv.size,
        float(n_minima),
        rise,
    ]
    layout = [
        FeatureSlot("eda_mean", "eda", "mean"),
        FeatureSlot("eda_deriv_mean", "eda", "mean derivative"),
        FeatureSlot("eda_deriv_neg_mean", "eda", "mean negative derivative"),
        FeatureSlot("eda_deriv_neg_frac", "eda", "negative derivative fraction"),
        FeatureSlot("eda_local_minima", "eda", "local minima count"),
        FeatureSlot("eda_rise_time", "eda", "mean rising time s"),
    ]

    spectrum = _spectrum(x, fs, seg_len, overlap, window)
    for i, (lo, hi) in enumerate(eda_band_edges(n_bands)):
        values.append(_clipped_band_power(spectrum, lo, hi))
        layout.append(FeatureSlot(f"eda_band{i:02d}", "eda", f"psd:{lo:.4f}-{hi:.4f}Hz"))

    for name, cutoff in (
        ("eda_zcr_slow", EDA_SLOW_RESPONSE_HZ),
        ("eda_zcr_very_slow", EDA_VERY_SLOW_RESPONSE_HZ),
    ):
        lowpass = design_lowpass(cutoff, EDA_LOWPASS_ORDER, fs)
        values.append(zero_crossing_rate(filter_apply(lowpass, x, steady_state=True), fs))
        layout.append(FeatureSlot(name, "eda", f"zcr:0-{cutoff:g}Hz"))

    return FeatureVector(values=np.array(values), layout=tuple(layout))


# ----------------------------------------------------------------------------
# Blood volume pulse


@dataclass(frozen=True, eq=False)
class IBISeries:
    """Detected pulse peaks and the inter-beat intervals between them."""

    peak_times_s: np.ndarray
    ibis_s: np.ndarray
    valid: bool

    @classmethod
    def from_peak_times(cls, peak_times_s: np.ndarray) -> "IBISeries":
        times = np.asarray(peak_times_s, dtype=float)
        return cls(
            peak_times_s=times,
            ibis_s=np.diff(times),
            valid=times.size >= MIN_VALID_PULSES,
        )


def _refine_peaks(x: np.ndarray, peaks: np.ndarray) -> np.ndarray:
    """Sub-sample peak positions by parabolic interpolation."""
    refined = peaks.astype(float)
    inner = (peaks > 0) & (peaks < x.size - 1)
    p = peaks[inner]
    a, b, c = x[p - 1], x[p], x[p + 1]
    denom = a - 2 * b + c
    offset = np.zeros_like(denom)
    curved = denom < 0
    offset[curved] = 0.5 * (a[curved] - c[curved]) / denom[curved]
    refined[inner] += np.clip(offset, -0.5, 0.5)
    return refined


def detect_pulses(
    bvp: SignalTrace,
    mad_k: float = DEFAULT_PULSE_MAD_K,
    window_s: float = PULSE_WINDOW_S,
) -> IBISeries:
    """Find pulse peaks above a rolling median + k·MAD threshold.

    Peaks closer than 0.3 s (200 bpm) are thinned, keeping the taller one.
    Series shorter than 10 s or with fewer than four peaks are flagged
    invalid instead of raising.
    """
    x = bvp.samples[0]
    fs = bvp.sample_rate_hz
    if bvp.duration_s < BVP_MIN_SECONDS:
        return IBISeries(np.empty(0), np.empty(0), valid=False)

    size = max(3, int(round(window_s * fs)) | 1)
    median = median_filter(x, size=size, mode="nearest")
    mad = median_filter(np.abs(x - median), size=size, mode="nearest")
    threshold = median + mad_k * mad

    peaks, _ = find_peaks(
        x, height=threshold, distance=max(1, math.ceil(PULSE_MIN_SEPARATION_S * fs))
    )
    return IBISeries.from_peak_times(_refine_peaks(x, peaks) / fs)


BVP_NAMES = (
    "bvp_hr_mean",
    "bvp_hr_std",
    "bvp_hrv_mean",
    "bvp_hrv_std",
    "bvp_ibi_mean",
    "bvp_ibi_std",
    "bvp_lf_hf_ratio",
    "bvp_psd_0.1-0.2",
    "bvp_psd_0.2-0.3",
    "bvp_psd_0.3-0.4",
    "bvp_psd_lf",
    "bvp_psd_mf",
    "bvp_psd_hf",
)


def _bvp_layout(quality: str) -> Tuple[FeatureSlot, ...]:
    tags = (
        "bpm",
        "bpm",
        "s",
        "s",
        "s",
        "s",
        f"ratio {HRV_RATIO_LOW_BAND}/{HRV_RATIO_HIGH_BAND}Hz",
        *(f"tachogram psd:{lo}-{hi}Hz" for lo, hi in HRV_NARROW_BANDS),
        f"tachogram psd:{HRV_LF_BAND[0]}-{HRV_LF_BAND[1]}Hz",
        f"tachogram psd:{HRV_MF_BAND[0]}-{HRV_MF_BAND[1]}Hz",
        f"tachogram psd:{HRV_HF_BAND[0]}-{HRV_HF_BAND[1]}Hz",
    )
    return tuple(
        FeatureSlot(name, "bvp", f"{tag}; quality={quality}")
        for name, tag in zip(BVP_NAMES, tags)
    )


def tachogram(series: IBISeries, rate_hz: float = TACHOGRAM_RATE_HZ) -> np.ndarray:
    """IBIs placed at their closing beat, linearly resampled, mean removed."""
    times = series.peak_times_s[1:]
    grid = np.arange(times[0], times[-1], 1.0 / rate_hz)
    resampled = np.interp(grid, times, series.ibis_s)
    return resampled - resampled.mean()


def ibi_features(
    series: IBISeries,
    seg_len: int = DEFAULT_LOW_RATE_SEG_LEN,
    overlap: float = DEFAULT_OVERLAP,
    window: str = DEFAULT_WINDOW,
) -> FeatureVector:
    """The 13 heart features computed from an inter-beat interval series."""
    if not series.valid:
        logger.warning("Pulse series invalid, emitting zero BVP features")
        return FeatureVector(values=np.zeros(len(BVP_NAMES)), layout=_bvp_layout("invalid"))

    ibis = series.ibis_s
    hr = 60.0 / ibis
    hrv = np.diff(ibis)
    values = [
        float(hr.mean()),
        float(hr.std()),
        float(hrv.mean()),
        float(hrv.std()),
        float(ibis.mean()),
        float(ibis.std()),
    ]

    spectral = [0.0] * 7
    tacho = tachogram(series)
    if tacho.size >= MIN_SEG_LEN:
        s = _spectrum(tacho, TACHOGRAM_RATE_HZ, seg_len, overlap, window)
        low = band_power(s, *HRV_RATIO_LOW_BAND)
        high = band_power(s, *HRV_RATIO_HIGH_BAND)
        spectral = [
            low / high if high > 0 else 0.0,
            *(band_power(s, lo, hi) for lo, hi in HRV_NARROW_BANDS),
            band_power(s, *HRV_LF_BAND),
            band_power(s, *HRV_MF_BAND),
            band_power(s, *HRV_HF_BAND),
        ]
    values.extend(spectral)
    return FeatureVector(values=np.array(values), layout=_bvp_layout("ok"))


def bvp_features(
    bvp: SignalTrace,
    mad_k: float = DEFAULT_PULSE_MAD_K,
    seg_len: int = DEFAULT_LOW_RATE_SEG_LEN,
    overlap: float = DEFAULT_OVERLAP,
    window: str = DEFAULT_WINDOW,
) -> FeatureVector:
    """Heart rate, variability and tachogram spectral features from a BVP trace."""
    return ibi_features(detect_pulses(bvp, mad_k=mad_k), seg_len, overlap, window)


# ----------------------------------------------------------------------------
# Skin temperature


def temp_features(
    temp: SignalTrace,
    seg_len: int = DEFAULT_LOW_RATE_SEG_LEN,
    overlap: float = DEFAULT_OVERLAP,
    window: str = DEFAULT_WINDOW,
) -> FeatureVector:
    """Mean, mean derivative and two low-band powers of the temperature trace.

    Raises:
        FeatureExtractionError: If the trace is shorter than 20 s
    """
    x = temp.samples[0]
    fs = temp.sample_rate_hz
    if x.size < MIN_SEG_LEN or temp.duration_s < TEMP_MIN_DURATION_S:
        raise FeatureExtractionError(
            f"Temperature trace lasts {temp.duration_s:.1f} s; need {TEMP_MIN_DURATION_S:g} s"
        )

    spectrum = _spectrum(x, fs, seg_len, overlap, window)
    values = [
        float(x.mean()),
        float(_mean_derivative(x, fs).mean()),
        *(_clipped_band_power(spectrum, lo, hi) for lo, hi in TEMP_BANDS),
    ]
    layout = (
        FeatureSlot("temp_mean", "temp", "mean"),
        FeatureSlot("temp_deriv_mean", "temp", "mean derivative"),
        *(
            FeatureSlot(f"temp_psd_{lo:g}-{hi:g}", "temp", f"psd:{lo:g}-{hi:g}Hz")
            for lo, hi in TEMP_BANDS
        ),
    )
    return FeatureVector(values=np.array(values), layout=layout)
