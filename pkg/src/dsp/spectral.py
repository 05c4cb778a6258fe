"""Welch PSD, band power and zero-crossing rate."""

from dataclasses import dataclass

import numpy as np

from scipy import signal as sp_signal
from scipy.integrate import trapezoid

from src.exceptions import ParameterError
from src.utils.constants import DEFAULT_OVERLAP, DEFAULT_WINDOW, MIN_SEG_LEN


# Relative tolerance for band edges that sit on Nyquist up to rounding.
_EDGE_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided power spectral density on ``[0, fs/2]``."""

    freqs_hz: np.ndarray
    psd: np.ndarray
    sample_rate_hz: float

    @property
    def nyquist_hz(self) -> float:
        return self.sample_rate_hz / 2.0

    def total_power(self) -> float:
        return float(trapezoid(self.psd, self.freqs_hz))


def resolve_segment_length(n_samples: int, preferred: int) -> int:
    """Use ``preferred`` samples per segment, or the whole (even) signal if shorter."""
    return int(min(preferred, n_samples - n_samples % 2))


def welch_psd(
    x: np.ndarray,
    fs_hz: float,
    seg_len: int,
    overlap: float = DEFAULT_OVERLAP,
    window: str = DEFAULT_WINDOW,
) -> Spectrum:
    """Welch estimate of the power spectral density.

    Segments are not detrended, so a constant offset lands in the lowest
    bins only. Odd segment lengths are zero-padded by one sample so the
    frequency grid always ends at Nyquist.

    Args:
        x: 1-D signal
        fs_hz: Sample rate
        seg_len: Samples per segment
        overlap: Fraction of a segment shared with the next one
        window: Taper name understood by ``scipy.signal.get_window``

    Returns:
        Density spectrum (units² / Hz)

    Raises:
        ParameterError: If the segment is shorter than the minimum or longer
            than the signal, or overlap is outside [0, 1)
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ParameterError("welch_psd expects a 1-D signal")
    if not fs_hz > 0:
        raise ParameterError(f"Sample rate must be positive, got {fs_hz}")
    if seg_len < MIN_SEG_LEN:
        raise ParameterError(f"Segment length {seg_len} below minimum {MIN_SEG_LEN}")
    if seg_len > x.size:
        raise ParameterError(
            f"Segment length {seg_len} exceeds signal length {x.size}"
        )
    if not 0.0 <= overlap < 1.0:
        raise ParameterError(f"Overlap must lie in [0, 1), got {overlap}")

    freqs, psd = sp_signal.welch(
        x,
        fs=fs_hz,
        window=window,
        nperseg=seg_len,
        noverlap=int(overlap * seg_len),
        nfft=seg_len + seg_len % 2,
        detrend=False,
        return_onesided=True,
        scaling="density",
        average="mean",
    )
    return Spectrum(freqs_hz=freqs, psd=np.maximum(psd, 0.0), sample_rate_hz=fs_hz)


def band_power(s: Spectrum, lo_hz: float, hi_hz: float) -> float:
    """Trapezoidal integral of the PSD over ``[lo_hz, hi_hz]``.

    The density is treated as piecewise linear between bins and evaluated
    exactly at the band edges, so adjacent bands add up to the enclosing one.

    Raises:
        ParameterError: If the band is inverted or outside ``[0, Nyquist]``
    """
    nyquist = s.nyquist_hz
    if hi_hz > nyquist and np.isclose(hi_hz, nyquist, rtol=_EDGE_RTOL, atol=0.0):
        hi_hz = nyquist
    if not 0.0 <= lo_hz < hi_hz <= nyquist:
        raise ParameterError(
            f"Band [{lo_hz}, {hi_hz}] Hz outside spectrum [0, {nyquist}] Hz"
        )

    inner = s.freqs_hz[(s.freqs_hz > lo_hz) & (s.freqs_hz < hi_hz)]
    grid = np.concatenate(([lo_hz], inner, [hi_hz]))
    values = np.interp(grid, s.freqs_hz, s.psd)
    return float(max(trapezoid(values, grid), 0.0))


def zero_crossing_rate(x: np.ndarray, fs_hz: float) -> float:
    """Strict sign changes of ``x - mean(x)`` per second.

    Samples within rounding distance of the mean count as zero and are
    skipped, so touching the mean is not a crossing.
    """
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise ParameterError("zero_crossing_rate needs at least two samples")

    scale = np.max(np.abs(x))
    if scale == 0.0:
        return 0.0

    deviation = x - np.mean(x)
    signs = np.sign(deviation)
    signs[np.abs(deviation) <= 1e-10 * scale] = 0.0
    signs = signs[signs != 0.0]
    crossings = int(np.count_nonzero(signs[1:] != signs[:-1]))
    return crossings / ((x.size - 1) / fs_hz)
