"""Duration trimming and common average reference."""

import numpy as np

from src.dataset import SIGNAL_KINDS, SignalTrace, Trial
from src.exceptions import ParameterError, TrimError


def trim_trace(trace: SignalTrace, head_s: float, tail_s: float, name: str = "") -> SignalTrace:
    """Drop ``round(head_s·fs)`` leading and ``round(tail_s·fs)`` trailing samples."""
    if head_s < 0 or tail_s < 0:
        raise ParameterError("Trim durations must be non-negative")

    head = int(round(head_s * trace.sample_rate_hz))
    tail = int(round(tail_s * trace.sample_rate_hz))
    if head + tail >= trace.n_samples:
        raise TrimError(
            f"Trace {name or trace.channel_names[0]} lasts {trace.duration_s:.3f} s, "
            f"cannot trim {head_s} s + {tail_s} s",
            trace=name or None,
        )
    if head == 0 and tail == 0:
        return trace
    return trace.with_samples(trace.samples[:, head : trace.n_samples - tail])


def trim_trial(t: Trial, head_s: float, tail_s: float) -> Trial:
    """Trim every trace of a trial by duration.

    Raises:
        TrimError: If a trace is not longer than ``head_s + tail_s``
    """
    trimmed = {}
    for kind in SIGNAL_KINDS:
        try:
            trimmed[kind] = trim_trace(t.trace(kind), head_s, tail_s, name=kind)
        except TrimError as e:
            raise TrimError(f"{t.trial_id}: {e}", trace=kind) from e
    return t.with_traces(**trimmed)


def common_average_reference(eeg: SignalTrace) -> SignalTrace:
    """Subtract the instantaneous mean across channels from every channel.

    Raises:
        ParameterError: If the trace has fewer than two channels
    """
    if eeg.n_channels < 2:
        raise ParameterError("Common average reference needs at least two channels")
    return eeg.with_samples(eeg.samples - eeg.samples.mean(axis=0, keepdims=True))
