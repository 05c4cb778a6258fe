"""IIR filter design and causal application as second-order sections."""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from scipy import signal as sp_signal

from src.exceptions import FilterDesignError, ParameterError


Section = Tuple[float, float, float, float, float]


@dataclass(frozen=True, eq=False)
class BiquadCascade:
    """Cascade of normalized biquads (``a0 == 1``) in scipy SOS layout."""

    sos: np.ndarray
    sample_rate_hz: float

    def __post_init__(self) -> None:
        sos = np.atleast_2d(np.asarray(self.sos, dtype=float))
        if sos.shape[1] != 6:
            raise FilterDesignError("SOS matrix must have 6 columns")
        sos = sos / sos[:, 3:4]
        object.__setattr__(self, "sos", sos)

        poles = self.poles
        if poles.size and np.max(np.abs(poles)) >= 1.0:
            raise FilterDesignError(
                f"Unstable filter: max pole magnitude {np.max(np.abs(poles)):.6f}"
            )

    @property
    def sections(self) -> List[Section]:
        """Coefficients as (b0, b1, b2, a1, a2) tuples."""
        return [
            (float(s[0]), float(s[1]), float(s[2]), float(s[4]), float(s[5]))
            for s in self.sos
        ]

    @property
    def poles(self) -> np.ndarray:
        _, p, _ = sp_signal.sos2zpk(self.sos)
        return p


def _check_rate(fs_hz: float) -> None:
    if not fs_hz > 0:
        raise ParameterError(f"Sample rate must be positive, got {fs_hz}")


def design_notch(f0_hz: float, q: float, fs_hz: float) -> BiquadCascade:
    """Second-order IIR notch at ``f0_hz`` with quality factor ``q``.

    Raises:
        ParameterError: If ``f0_hz`` is not strictly inside (0, Nyquist) or
            ``q`` is not positive
    """
    _check_rate(fs_hz)
    if not 0 < f0_hz < fs_hz / 2:
        raise ParameterError(
            f"Notch frequency {f0_hz} Hz outside (0, {fs_hz / 2}) Hz"
        )
    if not q > 0:
        raise ParameterError(f"Notch quality factor must be positive, got {q}")

    b, a = sp_signal.iirnotch(f0_hz, q, fs=fs_hz)
    return BiquadCascade(sos=sp_signal.tf2sos(b, a), sample_rate_hz=fs_hz)


def design_bandpass(lo_hz: float, hi_hz: float, order: int, fs_hz: float) -> BiquadCascade:
    """Butterworth bandpass with -3 dB edges at ``lo_hz`` and ``hi_hz``.

    Raises:
        ParameterError: If the band is empty, inverted or beyond Nyquist
    """
    _check_rate(fs_hz)
    if order < 1:
        raise ParameterError(f"Filter order must be at least 1, got {order}")
    if not 0 < lo_hz < hi_hz < fs_hz / 2:
        raise ParameterError(
            f"Invalid band [{lo_hz}, {hi_hz}] Hz for sample rate {fs_hz} Hz"
        )

    sos = sp_signal.butter(
        order, [lo_hz, hi_hz], btype="bandpass", fs=fs_hz, output="sos"
    )
    return BiquadCascade(sos=sos, sample_rate_hz=fs_hz)


def design_lowpass(cutoff_hz: float, order: int, fs_hz: float) -> BiquadCascade:
    """Butterworth lowpass with its -3 dB point at ``cutoff_hz``."""
    _check_rate(fs_hz)
    if order < 1:
        raise ParameterError(f"Filter order must be at least 1, got {order}")
    if not 0 < cutoff_hz < fs_hz / 2:
        raise ParameterError(
            f"Cutoff {cutoff_hz} Hz outside (0, {fs_hz / 2}) Hz"
        )

    sos = sp_signal.butter(order, cutoff_hz, btype="lowpass", fs=fs_hz, output="sos")
    return BiquadCascade(sos=sos, sample_rate_hz=fs_hz)


def filter_apply(
    f: BiquadCascade, x: np.ndarray, steady_state: bool = False
) -> np.ndarray:
    """Causal single-pass filtering along the last axis.

    Args:
        f: Filter to apply
        x: 1-D signal or channels × time matrix
        steady_state: Start from the steady state of a step at ``x[..., 0]``
            instead of rest, suppressing the start-up transient

    Returns:
        Filtered signal, same shape as ``x``
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] == 0:
        return x.copy()
    if not steady_state:
        return sp_signal.sosfilt(f.sos, x, axis=-1)

    zi = sp_signal.sosfilt_zi(f.sos)
    if x.ndim == 1:
        zi = zi * x[0]
    else:
        zi = zi[:, np.newaxis, :] * x[..., 0][np.newaxis, :, np.newaxis]
    y, _ = sp_signal.sosfilt(f.sos, x, axis=-1, zi=zi)
    return y


def frequency_response(f: BiquadCascade, freqs_hz: np.ndarray) -> np.ndarray:
    """Complex response H(e^{jw}) at the given frequencies."""
    _, h = sp_signal.sosfreqz(
        f.sos, worN=np.asarray(freqs_hz, dtype=float), fs=f.sample_rate_hz
    )
    return h


def gain_db(f: BiquadCascade, freqs_hz: np.ndarray) -> np.ndarray:
    """Magnitude response in decibels."""
    h = np.abs(frequency_response(f, freqs_hz))
    return 20.0 * np.log10(np.maximum(h, np.finfo(float).tiny))
