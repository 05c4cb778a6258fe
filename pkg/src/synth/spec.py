"""Generator parameters and the ground-truth manifest."""

from typing import List, Literal, Optional, Tuple

import numpy as np

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.utils.constants import (
    DEFAULT_BVP_RATE_HZ,
    DEFAULT_EDA_RATE_HZ,
    DEFAULT_EEG_RATE_HZ,
    DEFAULT_TEMP_RATE_HZ,
    EEG_MONTAGE,
    QUADRANTS,
)


class PlantedEffect(BaseModel):
    """Sinusoid at the band centre added to high-class trials of ``target``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    target: Literal["valence", "arousal"]
    band: Literal["theta", "alpha", "beta", "gamma"]
    channels: Optional[Tuple[str, ...]] = None
    amplitude: float = Field(..., ge=0)

    @field_validator("channels")
    @classmethod
    def validate_channels(cls, v: Optional[Tuple[str, ...]]) -> Optional[Tuple[str, ...]]:
        if v is None:
            return v
        unknown = [ch for ch in v if ch not in EEG_MONTAGE]
        if unknown or not v:
            raise ValueError(f"effect channels must be a nonempty subset of {EEG_MONTAGE}")
        return tuple(v)


class VABlob(BaseModel):
    """Gaussian of (valence, arousal) scores for one quadrant."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mean: Tuple[float, float]
    cov: Tuple[Tuple[float, float], Tuple[float, float]]

    @field_validator("cov")
    @classmethod
    def validate_cov(cls, v):  # type: ignore[no-untyped-def]
        m = np.asarray(v, dtype=float)
        if not np.allclose(m, m.T) or np.any(np.linalg.eigvalsh(m) <= 0):
            raise ValueError("blob covariance must be symmetric positive definite")
        return v


def _default_blobs() -> List[VABlob]:
    # LVLA, LVHA, HVLA, HVHA
    cov = ((0.36, 0.0), (0.0, 0.36))
    return [
        VABlob(mean=(2.5, 2.5), cov=cov),
        VABlob(mean=(2.5, 7.0), cov=cov),
        VABlob(mean=(7.0, 2.5), cov=cov),
        VABlob(mean=(7.0, 7.0), cov=cov),
    ]


class SynthSpec(BaseModel):
    """Everything that determines a synthetic dataset; same spec, same bytes."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    participants: int = Field(20, ge=1)
    clips: int = Field(8, ge=1)
    common_clips: int = Field(5, ge=1)
    duration_s: float = Field(60.0, ge=12.0)
    effects: List[PlantedEffect] = Field(default_factory=list)
    e4_effect: float = Field(0.0, ge=0)
    e4_target: Literal["valence", "arousal"] = "arousal"
    va_blobs: List[VABlob] = Field(default_factory=_default_blobs)
    noise_sd: float = Field(1.0, gt=0)
    mains_amplitude: float = Field(2.0, ge=0)
    eeg_rate_hz: float = Field(DEFAULT_EEG_RATE_HZ, gt=0)
    eda_rate_hz: float = Field(DEFAULT_EDA_RATE_HZ, gt=0)
    bvp_rate_hz: float = Field(DEFAULT_BVP_RATE_HZ, gt=0)
    temp_rate_hz: float = Field(DEFAULT_TEMP_RATE_HZ, gt=0)
    ratings_clips: int = Field(0, ge=0)
    raters: int = Field(10, ge=1)
    ratings_k: int = Field(3, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def validate_counts(self) -> "SynthSpec":
        if self.common_clips > self.clips:
            raise ValueError("common_clips cannot exceed clips")
        if len(self.va_blobs) != len(QUADRANTS):
            raise ValueError(f"va_blobs needs one blob per quadrant {QUADRANTS}")
        if self.ratings_clips and self.ratings_clips < self.ratings_k:
            raise ValueError("ratings_clips must be at least ratings_k")
        if self.eeg_rate_hz <= 2 * 50.0:
            raise ValueError("eeg_rate_hz must exceed twice the mains frequency")
        return self


class TrialTruth(BaseModel):
    participant_id: str
    clip_id: str
    is_common_clip: bool
    quadrant: str
    valence: float
    arousal: float
    valence_class: int
    arousal_class: int
    heart_rate_bpm: float
    scr_count: int


class ClipTruth(BaseModel):
    clip_id: str
    cluster: int
    position: Tuple[float, float, float]


class GroundTruth(BaseModel):
    """Latent labels and planted parameters of a generated dataset."""

    spec: SynthSpec
    common_clips: List[str]
    trials: List[TrialTruth]
    rating_clips: List[ClipTruth] = Field(default_factory=list)

    def class_ratio(self, target: str, threshold: Optional[float] = None) -> str:
        """Low:high ratio of the latent classes, or of the scores split at ``threshold``."""
        if threshold is None:
            classes = np.array([getattr(t, f"{target}_class") for t in self.trials])
        else:
            classes = np.array([getattr(t, target) >= threshold for t in self.trials], dtype=int)
        high = int(np.sum(classes == 1))
        return f"{(classes.size - high) / high:.2f}:1" if high else "inf:1"
