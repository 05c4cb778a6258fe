"""Trial conditioning chain: trim, notch, CAR, then optional ICA cleanup."""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import structlog

from src.config.settings import Settings
from src.dataset import Dataset, Trial
from src.dsp import design_notch, filter_apply
from src.utils.constants import (
    DEFAULT_ICA_MAX_ITER,
    DEFAULT_ICA_TOL,
    DEFAULT_NOTCH_HZ,
    DEFAULT_NOTCH_Q,
    DEFAULT_SEED,
    DEFAULT_TRIM_HEAD_S,
    DEFAULT_TRIM_TAIL_S,
)
from src.utils.executor import run_tasks
from src.utils.seeding import derive_seed

from .conditioning import common_average_reference, trim_trial
from .ica import choose_components, eog_component_scores, fast_ica, remove_components


logger = structlog.get_logger()


@dataclass(frozen=True)
class PreprocessConfig:
    """Parameters of the conditioning chain."""

    trim_head_s: float = DEFAULT_TRIM_HEAD_S
    trim_tail_s: float = DEFAULT_TRIM_TAIL_S
    notch_hz: Optional[float] = DEFAULT_NOTCH_HZ
    notch_q: float = DEFAULT_NOTCH_Q
    ica_mode: str = "none"
    ica_indices: Tuple[int, ...] = field(default_factory=tuple)
    ica_max_iter: int = DEFAULT_ICA_MAX_ITER
    ica_tol: float = DEFAULT_ICA_TOL
    seed: int = DEFAULT_SEED

    @classmethod
    def from_settings(cls, settings: Settings) -> "PreprocessConfig":
        mode, indices = settings.ica_policy
        return cls(
            trim_head_s=settings.trim_head_s,
            trim_tail_s=settings.trim_tail_s,
            notch_hz=settings.notch_hz,
            notch_q=settings.notch_q,
            ica_mode=mode,
            ica_indices=tuple(indices or ()),
            ica_max_iter=settings.ica_max_iter,
            ica_tol=settings.ica_tol,
            seed=settings.seed,
        )


def preprocess_trial(trial: Trial, config: PreprocessConfig) -> Trial:
    """Run the conditioning chain on one trial.

    EEG: trim → mains notch → common average reference → ICA removal.
    Peripheral traces are only trimmed. After CAR the channel covariance
    loses one rank, so ICA estimates ``channels - 1`` components.
    """
    trial = trim_trial(trial, config.trim_head_s, config.trim_tail_s)
    eeg = trial.eeg

    if config.notch_hz:
        notch = design_notch(config.notch_hz, config.notch_q, eeg.sample_rate_hz)
        eeg = eeg.with_samples(filter_apply(notch, eeg.samples, steady_state=True))

    eeg = common_average_reference(eeg)

    if config.ica_mode != "none":
        decomposition = fast_ica(
            eeg,
            n_components=eeg.n_channels - 1,
            seed=derive_seed(config.seed, "ica", trial.participant_id, trial.clip_id),
            max_iter=config.ica_max_iter,
            tol=config.ica_tol,
        )
        scores = eog_component_scores(decomposition, eeg)
        removed = choose_components(scores, config.ica_mode, config.ica_indices)
        if removed:
            eeg = remove_components(decomposition, removed)
        logger.debug(
            "ICA cleanup applied",
            trial=trial.trial_id,
            removed=removed,
            top_score=round(scores[0][1], 4) if scores else None,
            converged=decomposition.converged,
        )

    return trial.with_traces(eeg=eeg)


def _preprocess_task(args: Tuple[Trial, PreprocessConfig]) -> Trial:
    trial, config = args
    return preprocess_trial(trial, config)


def preprocess_dataset(ds: Dataset, config: PreprocessConfig, jobs: int = 1) -> Dataset:
    """Preprocess every trial; trials are independent and may run in parallel."""
    trials: List[Trial] = run_tasks(
        _preprocess_task, [(t, config) for t in ds.trials], jobs=jobs
    )
    logger.info(
        "Dataset preprocessed",
        trials=len(trials),
        ica_mode=config.ica_mode,
        notch_hz=config.notch_hz,
    )
    return ds.subset(trials)
