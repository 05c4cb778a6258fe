"""FastICA decomposition and ocular component handling.

Parallel FastICA with the tanh contrast and symmetric decorrelation, run on
data whitened by an eigen-decomposition of the channel covariance.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from scipy import linalg
from scipy.stats import rankdata

from src.dataset import SignalTrace
from src.dsp import band_power, resolve_segment_length, welch_psd
from src.exceptions import DatasetValidationError, IcaRankError, ParameterError
from src.utils.constants import (
    DEFAULT_ICA_AUTO_MIN_SCORE,
    DEFAULT_ICA_MAX_ITER,
    DEFAULT_ICA_TOL,
    EOG_LOW_FREQ_HZ,
    FRONTAL_CHANNELS,
)


logger = structlog.get_logger()

# Eigenvalues below this fraction of the largest are treated as zero.
_RANK_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class ICADecomposition:
    """Result of :func:`fast_ica`.

    ``unmixing`` maps centred channel data to sources and already contains
    the whitening step; ``mixing`` is its pseudo-inverse.
    """

    unmixing: np.ndarray
    mixing: np.ndarray
    sources: np.ndarray
    converged: bool
    iterations: int
    channel_means: np.ndarray
    sample_rate_hz: float
    channel_names: Tuple[str, ...]

    @property
    def n_components(self) -> int:
        return int(self.unmixing.shape[0])


def _sym_decorrelation(w: np.ndarray) -> np.ndarray:
    """W <- (W Wᵀ)^{-1/2} W."""
    s, u = linalg.eigh(w @ w.T)
    return (u * (1.0 / np.sqrt(s))) @ u.T @ w


def fast_ica(
    eeg: SignalTrace,
    n_components: Optional[int] = None,
    seed: int = 0,
    max_iter: int = DEFAULT_ICA_MAX_ITER,
    tol: float = DEFAULT_ICA_TOL,
) -> ICADecomposition:
    """Decompose a multichannel trace into independent sources.

    Args:
        eeg: Channels × time trace
        n_components: Sources to estimate (defaults to the channel count)
        seed: Seed of the random initial unmixing matrix
        max_iter: Fixed-point iteration cap
        tol: Convergence threshold on ``max |diag(W_new Wᵀ)| - 1``

    Returns:
        Decomposition; ``converged`` is False when the cap was hit

    Raises:
        IcaRankError: If the channel covariance has fewer than
            ``n_components`` non-zero eigenvalues
    """
    x = eeg.samples
    n_channels, n_samples = x.shape
    n_components = n_channels if n_components is None else n_components
    if not 1 <= n_components <= n_channels:
        raise ParameterError(
            f"n_components must lie in [1, {n_channels}], got {n_components}"
        )
    if n_samples <= n_channels:
        raise ParameterError("FastICA needs more samples than channels")

    means = x.mean(axis=1)
    centred = x - means[:, np.newaxis]

    eigvals, eigvecs = linalg.eigh(centred @ centred.T / n_samples)
    order = np.argsort(eigvals)[::-1][:n_components]
    eigvals, eigvecs = eigvals[order], eigvecs[:, order]
    if eigvals[0] <= 0 or eigvals[-1] <= _RANK_RTOL * eigvals[0]:
        rank = int(np.sum(eigvals > _RANK_RTOL * max(eigvals[0], 0.0)))
        raise IcaRankError(
            f"Channel covariance has rank {rank} < {n_components} components; "
            f"use n_components <= {rank}"
        )

    whitening = (eigvecs / np.sqrt(eigvals)).T
    z = whitening @ centred

    rng = np.random.default_rng(seed)
    w = _sym_decorrelation(rng.standard_normal((n_components, n_components)))

    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        g = np.tanh(w @ z)
        g_prime = (1.0 - g**2).mean(axis=1)
        w_new = _sym_decorrelation(g @ z.T / n_samples - g_prime[:, np.newaxis] * w)
        lim = np.max(np.abs(np.abs(np.diag(w_new @ w.T)) - 1.0))
        w = w_new
        if lim < tol:
            converged = True
            break

    if not converged:
        logger.warning("FastICA did not converge", iterations=iterations, tol=tol)

    unmixing = w @ whitening
    return ICADecomposition(
        unmixing=unmixing,
        mixing=linalg.pinv(unmixing),
        sources=unmixing @ centred,
        converged=converged,
        iterations=iterations,
        channel_means=means,
        sample_rate_hz=eeg.sample_rate_hz,
        channel_names=eeg.channel_names,
    )


def _abs_corr(a: np.ndarray, b: np.ndarray) -> float:
    a = a - a.mean()
    b = b - b.mean()
    denom = np.sqrt(np.dot(a, a) * np.dot(b, b))
    if denom == 0.0:
        return 0.0
    return float(min(abs(np.dot(a, b)) / denom, 1.0))


def _low_frequency_fraction(x: np.ndarray, fs_hz: float) -> float:
    seg_len = resolve_segment_length(x.size, int(4 * fs_hz))
    spectrum = welch_psd(x, fs_hz, seg_len)
    total = spectrum.total_power()
    if total <= 0.0:
        return 0.0
    cutoff = min(EOG_LOW_FREQ_HZ, spectrum.nyquist_hz)
    return float(min(band_power(spectrum, 0.0, cutoff) / total, 1.0))


def eog_component_scores(d: ICADecomposition, eeg: SignalTrace) -> List[Tuple[int, float]]:
    """Rank components by how much they look like eye activity.

    Two criteria are computed per component: absolute correlation with the
    mean of the frontal channels, and the fraction of its power below 4 Hz.
    Each criterion is replaced by its rank over the components divided by
    the component count (ties share the average rank), and the score is the
    mean of the two, in (0, 1].

    Returns:
        ``(component index, score)`` pairs, highest score first, ties by index
    """
    try:
        frontal = np.mean([eeg.channel(ch) for ch in FRONTAL_CHANNELS], axis=0)
    except DatasetValidationError as e:
        raise ParameterError("EOG scoring needs Fp1 and Fp2") from e

    corr = np.array([_abs_corr(source, frontal) for source in d.sources])
    low = np.array([_low_frequency_fraction(source, d.sample_rate_hz) for source in d.sources])
    n = corr.size
    combined = 0.5 * (rankdata(corr) + rankdata(low)) / n
    scores = [(index, float(score)) for index, score in enumerate(combined)]
    return sorted(scores, key=lambda item: (-item[1], item[0]))


def remove_components(d: ICADecomposition, indices: Sequence[int]) -> SignalTrace:
    """Reconstruct the channels with the selected sources zeroed.

    The channel means removed before the decomposition are expressed as
    per-component offsets through the mixing matrix; a removed component
    loses its offset too, so removing every component gives all zeros.

    Raises:
        ParameterError: If an index is out of range
    """
    bad = [i for i in indices if not 0 <= i < d.n_components]
    if bad:
        raise ParameterError(
            f"Component indices {bad} out of range [0, {d.n_components})"
        )

    offsets = linalg.lstsq(d.mixing, d.channel_means)[0]
    sources = d.sources + offsets[:, np.newaxis]
    sources[list(indices)] = 0.0
    return SignalTrace(d.mixing @ sources, d.sample_rate_hz, d.channel_names)


def choose_components(
    scores: List[Tuple[int, float]],
    mode: str,
    manual: Optional[Sequence[int]] = None,
    min_score: float = DEFAULT_ICA_AUTO_MIN_SCORE,
) -> List[int]:
    """Apply the removal policy: ``none``, ``auto`` (top one if score ≥ min) or ``manual``."""
    if mode == "none":
        return []
    if mode == "manual":
        return sorted(set(manual or []))
    if mode == "auto":
        if scores and scores[0][1] >= min_score:
            return [scores[0][0]]
        return []
    raise ParameterError(f"Unknown ICA removal mode: {mode}")
