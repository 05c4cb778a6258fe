"""On-disk dataset format.

Layout::

    root/meta.json                 schema version, default sample rates
    root/clips.csv                 clip_id,title,tags (tags joined by ';')
    root/P<pid>/C<cid>/eeg.csv     t,Fp1,Fp2,Fz,Cz,T3,T4,Pz,Oz
    root/P<pid>/C<cid>/eda.csv     t,value   (same for bvp.csv, temp.csv)
    root/P<pid>/C<cid>/assessment.json

Serialization is canonical: writing a loaded dataset reproduces the files
byte for byte.
"""

import json

from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd
import structlog

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.exceptions import (
    CVReadinessError,
    DatasetStructureError,
    DatasetValidationError,
)
from src.utils.constants import (
    DATASET_SCHEMA_VERSION,
    DEFAULT_BVP_RATE_HZ,
    DEFAULT_EDA_RATE_HZ,
    DEFAULT_EEG_RATE_HZ,
    DEFAULT_TEMP_RATE_HZ,
    EEG_MONTAGE,
)

from .models import SIGNAL_KINDS, ClipInfo, Dataset, SelfAssessment, SignalTrace, Trial


logger = structlog.get_logger()

PathLike = Union[str, Path]

DEFAULT_SAMPLE_RATES: Dict[str, float] = {
    "eeg": DEFAULT_EEG_RATE_HZ,
    "eda": DEFAULT_EDA_RATE_HZ,
    "bvp": DEFAULT_BVP_RATE_HZ,
    "temp": DEFAULT_TEMP_RATE_HZ,
}

SINGLE_CHANNEL = ("value",)


class MetaDocument(BaseModel):
    """Contents of ``meta.json``."""

    model_config = ConfigDict(extra="forbid")

    schema_version: int = DATASET_SCHEMA_VERSION
    sample_rates: Dict[str, float] = Field(
        default_factory=lambda: dict(DEFAULT_SAMPLE_RATES)
    )

    @field_validator("sample_rates")
    @classmethod
    def validate_rates(cls, v: Dict[str, float]) -> Dict[str, float]:
        """Every signal kind needs a positive rate."""
        missing = [k for k in SIGNAL_KINDS if k not in v]
        if missing:
            raise ValueError(f"sample_rates missing {missing}")
        if any(not rate > 0 for rate in v.values()):
            raise ValueError("sample rates must be positive")
        return v


class AssessmentDocument(SelfAssessment):
    """Contents of a trial's ``assessment.json``."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False, extra="forbid")

    is_common_clip: bool = False
    sample_rates: Optional[Dict[str, float]] = None


def dump_json(obj: Any) -> str:
    """Canonical JSON text used for every artifact."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(path: Path, obj: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(obj), encoding="utf-8")


def _read_json(path: Path) -> Any:
    if not path.is_file():
        raise DatasetStructureError(f"Missing file: {path}", path=str(path))
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DatasetStructureError(f"Malformed JSON in {path}: {e}", path=str(path)) from e


def _trace_frame(trace: SignalTrace, columns: tuple) -> pd.DataFrame:
    t = np.arange(trace.n_samples) / trace.sample_rate_hz
    data = {"t": t}
    for name, row in zip(columns, trace.samples):
        data[name] = row
    return pd.DataFrame(data, columns=["t", *columns])


def _write_trace(path: Path, trace: SignalTrace, columns: tuple) -> None:
    _trace_frame(trace, columns).to_csv(path, index=False, lineterminator="\n")


def _read_trace(
    path: Path, kind: str, rate: float, trial_id: str
) -> SignalTrace:
    if not path.is_file():
        raise DatasetStructureError(f"Missing file: {path}", path=str(path))

    expected = ["t", *(EEG_MONTAGE if kind == "eeg" else SINGLE_CHANNEL)]
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as e:
        raise DatasetValidationError(
            f"Unreadable {kind} trace: {e}", trial_id=trial_id
        ) from e

    if list(frame.columns) != expected:
        raise DatasetValidationError(
            f"{kind} header must be {','.join(expected)}, "
            f"got {','.join(map(str, frame.columns))}",
            trial_id=trial_id,
        )

    try:
        samples = frame[expected[1:]].to_numpy(dtype=float).T
    except ValueError as e:
        raise DatasetValidationError(
            f"Non-numeric {kind} samples: {e}", trial_id=trial_id
        ) from e
    if not np.all(np.isfinite(samples)):
        raise DatasetValidationError(
            f"NaN or infinite sample in {kind} trace", trial_id=trial_id
        )

    names = EEG_MONTAGE if kind == "eeg" else (kind,)
    return SignalTrace(samples=samples, sample_rate_hz=rate, channel_names=names)


def _read_catalog(root: Path) -> Dict[str, ClipInfo]:
    path = root / "clips.csv"
    if not path.is_file():
        raise DatasetStructureError(f"Missing file: {path}", path=str(path))
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    if list(frame.columns) != ["clip_id", "title", "tags"]:
        raise DatasetStructureError(
            f"clips.csv header must be clip_id,title,tags in {path}", path=str(path)
        )
    catalog = {}
    for row in frame.itertuples(index=False):
        tags = tuple(tag for tag in row.tags.split(";") if tag)
        catalog[row.clip_id] = ClipInfo(clip_id=row.clip_id, title=row.title, tags=tags)
    return catalog


def _load_trial(
    trial_dir: Path, participant_id: str, clip_id: str, rates: Dict[str, float]
) -> Trial:
    trial_id = f"P{participant_id}/C{clip_id}"
    raw = _read_json(trial_dir / "assessment.json")
    try:
        doc = AssessmentDocument.model_validate(raw)
    except ValidationError as e:
        raise DatasetValidationError(
            f"Invalid assessment: {e}", trial_id=trial_id
        ) from e

    trial_rates = dict(rates)
    trial_rates.update(doc.sample_rates or {})

    traces = {
        kind: _read_trace(trial_dir / f"{kind}.csv", kind, trial_rates[kind], trial_id)
        for kind in SIGNAL_KINDS
    }
    assessment = SelfAssessment(
        **doc.model_dump(exclude={"is_common_clip", "sample_rates"})
    )
    try:
        return Trial(
            participant_id=participant_id,
            clip_id=clip_id,
            assessment=assessment,
            is_common_clip=doc.is_common_clip,
            **traces,
        )
    except DatasetValidationError as e:
        raise DatasetValidationError(str(e), trial_id=trial_id) from e


def load_dataset(root_path: PathLike) -> Dataset:
    """Load and validate a dataset tree.

    Args:
        root_path: Dataset root directory

    Returns:
        Validated Dataset

    Raises:
        DatasetStructureError: If a required file or directory is missing
        DatasetValidationError: If a trace or assessment violates an invariant
    """
    root = Path(root_path)
    if not root.is_dir():
        raise DatasetStructureError(f"Dataset root not found: {root}", path=str(root))

    try:
        meta = MetaDocument.model_validate(_read_json(root / "meta.json"))
    except ValidationError as e:
        raise DatasetValidationError(f"Invalid meta.json: {e}") from e
    if meta.schema_version != DATASET_SCHEMA_VERSION:
        raise DatasetValidationError(
            f"Unsupported schema version {meta.schema_version}"
        )

    catalog = _read_catalog(root)

    trials: List[Trial] = []
    for participant_dir in sorted(root.glob("P*")):
        if not participant_dir.is_dir():
            continue
        participant_id = participant_dir.name[1:]
        for trial_dir in sorted(participant_dir.glob("C*")):
            if not trial_dir.is_dir():
                continue
            trials.append(
                _load_trial(
                    trial_dir, participant_id, trial_dir.name[1:], meta.sample_rates
                )
            )

    if not trials:
        raise DatasetStructureError(f"No trials found under {root}", path=str(root))

    unknown = sorted({t.clip_id for t in trials} - set(catalog))
    if unknown:
        raise DatasetValidationError(f"Clips missing from clips.csv: {unknown}")

    dataset = Dataset(
        trials=tuple(trials), clip_catalog=catalog, sample_rates=meta.sample_rates
    )
    logger.info(
        "Dataset loaded",
        root=str(root),
        trials=len(dataset),
        participants=len(dataset.participants),
        clips=len(dataset.clips),
    )
    return dataset


def save_dataset(ds: Dataset, root_path: PathLike) -> Path:
    """Write a dataset in canonical form.

    Returns:
        The dataset root
    """
    root = Path(root_path)
    root.mkdir(parents=True, exist_ok=True)

    rates = dict(ds.sample_rates) or dict(DEFAULT_SAMPLE_RATES)
    write_json(
        root / "meta.json",
        MetaDocument(sample_rates=rates).model_dump(),
    )

    catalog = pd.DataFrame(
        [
            {"clip_id": c.clip_id, "title": c.title, "tags": ";".join(c.tags)}
            for c in sorted(ds.clip_catalog.values(), key=lambda c: c.clip_id)
        ],
        columns=["clip_id", "title", "tags"],
    )
    catalog.to_csv(root / "clips.csv", index=False, lineterminator="\n")

    for trial in ds.trials:
        trial_dir = root / f"P{trial.participant_id}" / f"C{trial.clip_id}"
        trial_dir.mkdir(parents=True, exist_ok=True)

        overrides = {
            kind: trial.trace(kind).sample_rate_hz
            for kind in SIGNAL_KINDS
            if trial.trace(kind).sample_rate_hz != rates[kind]
        }
        doc = AssessmentDocument(
            **trial.assessment.model_dump(),
            is_common_clip=trial.is_common_clip,
            sample_rates=overrides or None,
        )
        write_json(trial_dir / "assessment.json", doc.model_dump(exclude_none=True))

        for kind in SIGNAL_KINDS:
            columns = EEG_MONTAGE if kind == "eeg" else SINGLE_CHANNEL
            _write_trace(trial_dir / f"{kind}.csv", trial.trace(kind), columns)

    logger.info("Dataset written", root=str(root), trials=len(ds))
    return root


def validate_cv_readiness(ds: Dataset) -> List[str]:
    """Return the clip ids seen by every participant, sorted.

    Raises:
        CVReadinessError: If no clip is shared by all participants
    """
    if not len(ds):
        raise CVReadinessError("no common clips: dataset is empty")

    by_participant: Dict[str, set] = {}
    for trial in ds.trials:
        by_participant.setdefault(trial.participant_id, set()).add(trial.clip_id)

    common = set.intersection(*by_participant.values())
    if not common:
        raise CVReadinessError("no common clips")

    flagged = sorted({t.clip_id for t in ds.trials if t.is_common_clip})
    if flagged and flagged != sorted(common):
        logger.warning(
            "is_common_clip flags disagree with observed coverage",
            flagged=flagged,
            observed=sorted(common),
        )
    return sorted(common)


__all__ = [
    "DEFAULT_SAMPLE_RATES",
    "dump_json",
    "load_dataset",
    "save_dataset",
    "validate_cv_readiness",
    "write_json",
]
