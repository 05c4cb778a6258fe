"""Configuration management using Pydantic Settings.

Every tunable design decision of the pipeline lives here with its default,
so a run can be reproduced from its serialized settings alone. Values are
read from ``AFFECTBENCH_*`` environment variables or a ``.env`` file and may
be overridden per invocation by the command-line layer.
"""

from typing import Annotated, Any, List, Optional, Tuple

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, NoDecode, SettingsConfigDict

from src.utils.constants import (
    COMPAT_EDA_BANDS,
    DEFAULT_BANDPASS_ORDER,
    DEFAULT_EDA_BANDS,
    DEFAULT_EEG_SEG_LEN,
    DEFAULT_GMM_REG,
    DEFAULT_ICA_MAX_ITER,
    DEFAULT_ICA_TOL,
    DEFAULT_KMEANS_RESTARTS,
    DEFAULT_LOW_RATE_SEG_LEN,
    DEFAULT_NOTCH_HZ,
    DEFAULT_NOTCH_Q,
    DEFAULT_OVERLAP,
    DEFAULT_PULSE_MAD_K,
    DEFAULT_SEED,
    DEFAULT_SVM_MAX_ITER,
    DEFAULT_SVM_TOL,
    DEFAULT_THRESHOLD,
    DEFAULT_TRIM_HEAD_S,
    DEFAULT_TRIM_TAIL_S,
    DEFAULT_WINDOW,
    GRID_C,
    GRID_COEF0,
    GRID_DEGREE,
    GRID_KERNELS,
    GRID_PENALTY,
)
from src.utils.executor import default_jobs


def _split_csv(v: Any) -> Any:
    """Split a comma-separated string into stripped, non-empty items."""
    if isinstance(v, str):
        return [item.strip() for item in v.split(",") if item.strip()]
    if isinstance(v, (int, float)):
        return [v]
    return v


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Execution
    seed: int = Field(DEFAULT_SEED, description="Root seed for every random draw")
    jobs: int = Field(
        default_factory=default_jobs,
        description="Maximum concurrent worker processes (default: CPU count)",
    )

    # Preprocessing
    notch_hz: float = Field(DEFAULT_NOTCH_HZ, description="Mains notch frequency")
    notch_q: float = Field(DEFAULT_NOTCH_Q, description="Mains notch quality factor")
    bandpass_order: int = Field(
        DEFAULT_BANDPASS_ORDER, description="Butterworth order of the EEG band filters"
    )
    trim_head_s: float = Field(
        DEFAULT_TRIM_HEAD_S, description="Seconds dropped at the start of each trace"
    )
    trim_tail_s: float = Field(
        DEFAULT_TRIM_TAIL_S, description="Seconds dropped at the end of each trace"
    )
    ica_remove: str = Field(
        "none", description="Ocular component policy: none, auto:1 or manual:i,j"
    )
    ica_max_iter: int = Field(DEFAULT_ICA_MAX_ITER, description="FastICA iterations")
    ica_tol: float = Field(DEFAULT_ICA_TOL, description="FastICA convergence tolerance")

    # Spectral estimation
    eeg_seg_len: int = Field(DEFAULT_EEG_SEG_LEN, description="EEG Welch segment")
    low_rate_seg_len: int = Field(
        DEFAULT_LOW_RATE_SEG_LEN, description="Welch segment for E4 signals"
    )
    welch_overlap: float = Field(DEFAULT_OVERLAP, description="Welch segment overlap")
    welch_window: str = Field(DEFAULT_WINDOW, description="Welch taper name")

    # Features
    eeg_log_power: bool = Field(False, description="Report EEG band power as log10")
    eda_bands: int = Field(
        DEFAULT_EDA_BANDS, description="Number of EDA spectral bands (14 or 13)"
    )
    pulse_mad_k: float = Field(
        DEFAULT_PULSE_MAD_K, description="MAD multiplier of the pulse threshold"
    )

    # Labeling
    threshold: float = Field(DEFAULT_THRESHOLD, description="Low/high score split")
    kmeans_restarts: int = Field(
        DEFAULT_KMEANS_RESTARTS, description="k-means++ restarts"
    )
    gmm_reg: float = Field(DEFAULT_GMM_REG, description="GMM covariance ridge")

    # Classifier and grid
    svm_tol: float = Field(DEFAULT_SVM_TOL, description="SMO KKT tolerance")
    svm_max_iter: int = Field(DEFAULT_SVM_MAX_ITER, description="SMO iteration cap")
    grid_kernels: Annotated[List[str], NoDecode] = Field(
        list(GRID_KERNELS), description="Kernels enumerated by the grid search"
    )
    grid_c: Annotated[List[float], NoDecode] = Field(
        list(GRID_C), description="C values of the grid"
    )
    grid_degree: Annotated[List[int], NoDecode] = Field(
        list(GRID_DEGREE), description="Poly degrees"
    )
    grid_coef0: Annotated[List[float], NoDecode] = Field(
        list(GRID_COEF0), description="coef0 values"
    )
    grid_penalty: Annotated[List[str], NoDecode] = Field(
        list(GRID_PENALTY), description="Penalties for the linear kernel"
    )

    # Monitoring
    log_level: str = Field("WARNING", description="Logging level")
    debug: bool = Field(False, description="Enable debug mode")

    model_config = SettingsConfigDict(
        env_prefix="AFFECTBENCH_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator(
        "grid_kernels", "grid_c", "grid_degree", "grid_coef0", "grid_penalty",
        mode="before",
    )
    @classmethod
    def parse_grid_lists(cls, v: Any) -> Any:
        """Parse comma-separated grid values or a single value."""
        return _split_csv(v)

    @field_validator("grid_kernels")
    @classmethod
    def validate_kernels(cls, v: List[str]) -> List[str]:
        """Validate kernel names."""
        kinds = [k.lower() for k in v]
        for kind in kinds:
            if kind not in GRID_KERNELS:
                raise ValueError(f"grid_kernels entries must be one of {GRID_KERNELS}")
        return kinds

    @field_validator("grid_penalty")
    @classmethod
    def validate_penalty(cls, v: List[str]) -> List[str]:
        """Validate penalty names."""
        penalties = [p.lower() for p in v]
        for penalty in penalties:
            if penalty not in GRID_PENALTY:
                raise ValueError(f"grid_penalty entries must be one of {GRID_PENALTY}")
        return penalties

    @field_validator("eda_bands")
    @classmethod
    def validate_eda_bands(cls, v: int) -> int:
        """Only the literal and the compat EDA layouts are supported."""
        if v not in (DEFAULT_EDA_BANDS, COMPAT_EDA_BANDS):
            raise ValueError(
                f"eda_bands must be {DEFAULT_EDA_BANDS} or {COMPAT_EDA_BANDS}"
            )
        return v

    @field_validator("ica_remove")
    @classmethod
    def validate_ica_remove(cls, v: str) -> str:
        """Validate the ocular component removal policy."""
        policy = v.strip().lower()
        if policy in ("none", "auto:1"):
            return policy
        if policy.startswith("manual:"):
            indices = policy.split(":", 1)[1]
            try:
                [int(i) for i in indices.split(",") if i.strip()]
            except ValueError as e:
                raise ValueError("manual ICA indices must be integers") from e
            return policy
        raise ValueError("ica_remove must be none, auto:1 or manual:i,j")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: Any) -> str:
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"log_level must be one of {valid_levels}")
        return v.upper()  # type: ignore[no-any-return]

    @model_validator(mode="after")
    def validate_cross_field_dependencies(self) -> "Settings":
        """Validate ranges and dependencies between fields."""
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if not 0 < self.notch_q:
            raise ValueError("notch_q must be positive")
        if self.trim_head_s < 0 or self.trim_tail_s < 0:
            raise ValueError("trim durations must be non-negative")
        if not 0.0 <= self.welch_overlap < 1.0:
            raise ValueError("welch_overlap must lie in [0, 1)")
        if not self.grid_kernels or not self.grid_c:
            raise ValueError("grid needs at least one kernel and one C value")
        if "poly" in self.grid_kernels and not self.grid_degree:
            raise ValueError("grid_degree required when poly kernel is enumerated")
        if "linear" in self.grid_kernels and not self.grid_penalty:
            raise ValueError("grid_penalty required when linear kernel is enumerated")
        return self

    @property
    def ica_policy(self) -> Tuple[str, Optional[List[int]]]:
        """Split the ICA policy into its mode and manual indices."""
        if self.ica_remove.startswith("manual:"):
            raw = self.ica_remove.split(":", 1)[1]
            return "manual", [int(i) for i in raw.split(",") if i.strip()]
        if self.ica_remove == "auto:1":
            return "auto", None
        return "none", None
