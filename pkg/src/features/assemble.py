"""Per-trial feature assembly and dataset-wide feature tables."""

import json

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog

from src.config.settings import Settings
from src.dataset import Dataset, Trial
from src.exceptions import FeatureExtractionError, ParameterError
from src.utils.constants import (
    DEFAULT_BANDPASS_ORDER,
    DEFAULT_EDA_BANDS,
    DEFAULT_EEG_SEG_LEN,
    DEFAULT_LOW_RATE_SEG_LEN,
    DEFAULT_OVERLAP,
    DEFAULT_PULSE_MAD_K,
    DEFAULT_WINDOW,
)
from src.utils.executor import run_tasks

from .eeg import eeg_band_features, eeg_feature_name, resolve_bands, resolve_channels
from .peripheral import bvp_features, eda_features, temp_features
from .vector import FeatureSlot, FeatureVector


logger = structlog.get_logger()

MODALITIES = ("eeg", "e4", "fusion")


@dataclass(frozen=True)
class ExtractionConfig:
    """Feature extraction parameters."""

    eeg_seg_len: int = DEFAULT_EEG_SEG_LEN
    low_rate_seg_len: int = DEFAULT_LOW_RATE_SEG_LEN
    overlap: float = DEFAULT_OVERLAP
    window: str = DEFAULT_WINDOW
    bandpass_order: int = DEFAULT_BANDPASS_ORDER
    eeg_log_power: bool = False
    eda_bands: int = DEFAULT_EDA_BANDS
    pulse_mad_k: float = DEFAULT_PULSE_MAD_K

    @classmethod
    def from_settings(cls, settings: Settings) -> "ExtractionConfig":
        return cls(
            eeg_seg_len=settings.eeg_seg_len,
            low_rate_seg_len=settings.low_rate_seg_len,
            overlap=settings.welch_overlap,
            window=settings.welch_window,
            bandpass_order=settings.bandpass_order,
            eeg_log_power=settings.eeg_log_power,
            eda_bands=settings.eda_bands,
            pulse_mad_k=settings.pulse_mad_k,
        )


def assemble_features(
    trial: Trial,
    modality: str,
    channels: Optional[Sequence[str]] = None,
    bands: Optional[Sequence[str]] = None,
    config: ExtractionConfig = ExtractionConfig(),
) -> FeatureVector:
    """Concatenate the feature blocks selected by ``modality``.

    ``eeg`` yields the band powers, ``e4`` the EDA, BVP and temperature
    blocks, and ``fusion`` both in that order.

    Raises:
        ParameterError: Unknown modality, or a channel/band subset with ``e4``
        FeatureExtractionError: If a block cannot be computed
    """
    if modality not in MODALITIES:
        raise ParameterError(f"Unknown modality {modality!r}; use one of {MODALITIES}")
    if modality == "e4" and (channels is not None or bands is not None):
        raise ParameterError("EEG channel/band subsets do not apply to the e4 modality")

    blocks = []
    try:
        if modality in ("eeg", "fusion"):
            blocks.append(
                eeg_band_features(
                    trial.eeg,
                    channels,
                    bands,
                    seg_len=config.eeg_seg_len,
                    overlap=config.overlap,
                    window=config.window,
                    order=config.bandpass_order,
                    log_power=config.eeg_log_power,
                )
            )
        if modality in ("e4", "fusion"):
            low = (config.low_rate_seg_len, config.overlap, config.window)
            blocks.append(eda_features(trial.eda, config.eda_bands, *low))
            blocks.append(bvp_features(trial.bvp, config.pulse_mad_k, *low))
            blocks.append(temp_features(trial.temp, *low))
    except FeatureExtractionError as e:
        raise FeatureExtractionError(f"{trial.trial_id}: {e}") from e
    return FeatureVector.concat(blocks)


@dataclass(eq=False)
class FeatureTable:
    """Feature matrix with one row per trial, sorted by (participant, clip)."""

    keys: List[Tuple[str, str]]
    matrix: np.ndarray
    layout: Tuple[FeatureSlot, ...]
    settings: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=float).reshape(len(self.keys), -1)
        self.layout = tuple(self.layout)
        if self.matrix.shape[1] != len(self.layout):
            raise FeatureExtractionError("Feature matrix width does not match layout")

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def names(self) -> List[str]:
        return [slot.name for slot in self.layout]

    @property
    def participants(self) -> np.ndarray:
        return np.array([pid for pid, _ in self.keys])

    @property
    def clips(self) -> np.ndarray:
        return np.array([cid for _, cid in self.keys])

    def rows_for(self, keys: Sequence[Tuple[str, str]]) -> np.ndarray:
        """Matrix rows for the given (participant, clip) keys, in that order."""
        index = {key: i for i, key in enumerate(self.keys)}
        try:
            return self.matrix[[index[tuple(k)] for k in keys]]
        except KeyError as e:
            raise FeatureExtractionError(f"No features for trial {e.args[0]}") from e

    def select(self, names: Sequence[str]) -> "FeatureTable":
        """Column subset in the given order."""
        position = {name: i for i, name in enumerate(self.names)}
        missing = [n for n in names if n not in position]
        if missing:
            raise FeatureExtractionError(f"Unknown feature columns: {missing}")
        cols = [position[n] for n in names]
        return FeatureTable(
            keys=list(self.keys),
            matrix=self.matrix[:, cols],
            layout=tuple(self.layout[c] for c in cols),
            settings=dict(self.settings),
        )

    def select_eeg(
        self,
        channels: Optional[Sequence[str]] = None,
        bands: Optional[Sequence[str]] = None,
    ) -> "FeatureTable":
        """EEG columns for a channel/band subset, channel-major."""
        return self.select(
            [
                eeg_feature_name(ch, band)
                for ch in resolve_channels(channels)
                for band in resolve_bands(bands)
            ]
        )

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.matrix, columns=self.names)
        frame.insert(0, "clip_id", self.clips)
        frame.insert(0, "participant_id", self.participants)
        return frame

    def save(self, path: Path) -> Path:
        """Write the CSV and its ``.layout.json`` sidecar."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, lineterminator="\n")
        sidecar = {
            "layout": [asdict(slot) for slot in self.layout],
            "settings": self.settings,
        }
        layout_path(path).write_text(
            json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        logger.info("Feature table written", path=str(path), rows=len(self), cols=len(self.layout))
        return path

    @classmethod
    def load(cls, path: Path) -> "FeatureTable":
        path = Path(path)
        try:
            frame = pd.read_csv(
                path,
                dtype={"participant_id": str, "clip_id": str},
                float_precision="round_trip",
            )
            sidecar = json.loads(layout_path(path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            raise FeatureExtractionError(f"Cannot read feature table {path}: {e}") from e
        layout = tuple(FeatureSlot(**slot) for slot in sidecar["layout"])
        names = [slot.name for slot in layout]
        if list(frame.columns[2:]) != names:
            raise FeatureExtractionError(f"{path}: columns do not match the layout sidecar")
        return cls(
            keys=list(zip(frame["participant_id"], frame["clip_id"])),
            matrix=frame[names].to_numpy(dtype=float),
            layout=layout,
            settings=sidecar.get("settings", {}),
        )


def layout_path(csv_path: Path) -> Path:
    return Path(csv_path).with_suffix(".layout.json")


def _extract_task(args: Tuple[Trial, str, Any, Any, ExtractionConfig]) -> FeatureVector:
    return assemble_features(*args)


def extract_table(
    dataset: Dataset,
    modality: str,
    channels: Optional[Sequence[str]] = None,
    bands: Optional[Sequence[str]] = None,
    config: ExtractionConfig = ExtractionConfig(),
    jobs: int = 1,
) -> FeatureTable:
    """Features of every trial in dataset order."""
    trials = list(dataset)
    if not trials:
        raise FeatureExtractionError("Dataset has no trials")
    vectors = run_tasks(
        _extract_task,
        [(t, modality, channels, bands, config) for t in trials],
        jobs=jobs,
    )
    layout = vectors[0].layout
    for trial, vector in zip(trials, vectors):
        if [s.name for s in vector.layout] != [s.name for s in layout]:
            raise FeatureExtractionError(f"{trial.trial_id}: feature layout differs")
    logger.info(
        "Features extracted",
        modality=modality,
        trials=len(trials),
        features=len(layout),
    )
    return FeatureTable(
        keys=[t.key for t in trials],
        matrix=np.vstack([v.values for v in vectors]),
        layout=layout,
        settings={"modality": modality, **asdict(config)},
    )
