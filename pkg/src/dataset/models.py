"""Canonical data model: signal traces, trials and datasets."""

import dataclasses

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from pydantic import BaseModel, ConfigDict, Field

from src.exceptions import DatasetValidationError
from src.utils.constants import EEG_MONTAGE, SCORE_MAX, SCORE_MIN


SIGNAL_KINDS = ("eeg", "eda", "bvp", "temp")


class SelfAssessment(BaseModel):
    """Five self-reported affect scores on the 1-9 scale."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    valence: float = Field(..., ge=SCORE_MIN, le=SCORE_MAX)
    arousal: float = Field(..., ge=SCORE_MIN, le=SCORE_MAX)
    happiness: float = Field(..., ge=SCORE_MIN, le=SCORE_MAX)
    fear: float = Field(..., ge=SCORE_MIN, le=SCORE_MAX)
    excitement: float = Field(..., ge=SCORE_MIN, le=SCORE_MAX)


@dataclass(frozen=True, eq=False)
class SignalTrace:
    """Uniformly sampled channels × time matrix."""

    samples: np.ndarray
    sample_rate_hz: float
    channel_names: Tuple[str, ...]

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim == 1:
            samples = samples[np.newaxis, :]
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "channel_names", tuple(self.channel_names))

        if samples.ndim != 2:
            raise DatasetValidationError("Trace samples must be a 2-D matrix")
        if samples.shape[0] != len(self.channel_names):
            raise DatasetValidationError(
                f"Trace has {samples.shape[0]} rows but "
                f"{len(self.channel_names)} channel names"
            )
        if not self.sample_rate_hz > 0:
            raise DatasetValidationError(
                f"Sample rate must be positive, got {self.sample_rate_hz}"
            )
        if not np.all(np.isfinite(samples)):
            raise DatasetValidationError("Trace contains NaN or infinite samples")

    @property
    def n_channels(self) -> int:
        return int(self.samples.shape[0])

    @property
    def n_samples(self) -> int:
        return int(self.samples.shape[1])

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate_hz

    def channel(self, name: str) -> np.ndarray:
        """Return one channel as a 1-D view."""
        try:
            return self.samples[self.channel_names.index(name)]
        except ValueError as e:
            raise DatasetValidationError(f"Unknown channel: {name}") from e

    def with_samples(self, samples: np.ndarray) -> "SignalTrace":
        """Copy of this trace with new samples and the same metadata."""
        return dataclasses.replace(self, samples=samples)

    def equals(self, other: "SignalTrace") -> bool:
        return (
            self.channel_names == other.channel_names
            and self.sample_rate_hz == other.sample_rate_hz
            and np.array_equal(self.samples, other.samples)
        )


@dataclass(frozen=True, eq=False)
class Trial:
    """One participant watching one clip."""

    participant_id: str
    clip_id: str
    eeg: SignalTrace
    eda: SignalTrace
    bvp: SignalTrace
    temp: SignalTrace
    assessment: SelfAssessment
    is_common_clip: bool = False

    def __post_init__(self) -> None:
        if self.eeg.n_channels != len(EEG_MONTAGE):
            raise DatasetValidationError(
                f"EEG must have {len(EEG_MONTAGE)} channels, "
                f"got {self.eeg.n_channels}",
                trial_id=self.trial_id,
            )
        for kind in ("eda", "bvp", "temp"):
            if self.trace(kind).n_channels != 1:
                raise DatasetValidationError(
                    f"{kind} must have exactly one channel", trial_id=self.trial_id
                )

    @property
    def trial_id(self) -> str:
        return f"P{self.participant_id}/C{self.clip_id}"

    @property
    def key(self) -> Tuple[str, str]:
        return (self.participant_id, self.clip_id)

    def trace(self, kind: str) -> SignalTrace:
        if kind not in SIGNAL_KINDS:
            raise DatasetValidationError(f"Unknown signal kind: {kind}")
        return getattr(self, kind)  # type: ignore[no-any-return]

    def with_traces(self, **traces: SignalTrace) -> "Trial":
        """Copy of this trial with some traces replaced."""
        return dataclasses.replace(self, **traces)

    def equals(self, other: "Trial") -> bool:
        return (
            self.key == other.key
            and self.is_common_clip == other.is_common_clip
            and self.assessment == other.assessment
            and all(self.trace(k).equals(other.trace(k)) for k in SIGNAL_KINDS)
        )


@dataclass(frozen=True)
class ClipInfo:
    """Catalog entry for a stimulus clip."""

    clip_id: str
    title: str
    tags: Tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable collection of trials plus the clip catalog."""

    trials: Tuple[Trial, ...]
    clip_catalog: Dict[str, ClipInfo] = field(default_factory=dict)
    sample_rates: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.trials, key=lambda t: t.key))
        object.__setattr__(self, "trials", ordered)

        seen = set()
        for trial in ordered:
            if trial.key in seen:
                raise DatasetValidationError(
                    "Duplicate (participant, clip) pair", trial_id=trial.trial_id
                )
            seen.add(trial.key)

    def __len__(self) -> int:
        return len(self.trials)

    def __iter__(self) -> Iterator[Trial]:
        return iter(self.trials)

    @property
    def participants(self) -> List[str]:
        return sorted({t.participant_id for t in self.trials})

    @property
    def clips(self) -> List[str]:
        return sorted({t.clip_id for t in self.trials})

    def get(self, participant_id: str, clip_id: str) -> Optional[Trial]:
        for trial in self.trials:
            if trial.key == (participant_id, clip_id):
                return trial
        return None

    def subset(self, trials: List[Trial]) -> "Dataset":
        """Dataset restricted to the given trials, sharing the catalog."""
        return Dataset(
            trials=tuple(trials),
            clip_catalog=self.clip_catalog,
            sample_rates=self.sample_rates,
        )

    def map_trials(self, fn) -> "Dataset":  # type: ignore[no-untyped-def]
        """Dataset with ``fn`` applied to every trial."""
        return self.subset([fn(t) for t in self.trials])

    def equals(self, other: "Dataset") -> bool:
        return (
            len(self) == len(other)
            and self.clip_catalog == other.clip_catalog
            and self.sample_rates == other.sample_rates
            and all(a.equals(b) for a, b in zip(self.trials, other.trials))
        )
