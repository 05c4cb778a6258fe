"""EEG channel-subset and frequency-band ablations."""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd
import structlog

from src.dataset import Dataset, validate_cv_readiness
from src.labeling import TARGETS
from src.utils.constants import CHANNEL_STUDY_SETS, EEG_BANDS

from .crossval import CVConfig, CVResult, evaluate_tables, labels_for, prepare_table


logger = structlog.get_logger()


@dataclass
class StudyRow:
    condition: str
    channels: Optional[Tuple[str, ...]]
    bands: Optional[Tuple[str, ...]]
    result: CVResult


@dataclass
class StudyResult:
    """One cross-validation per condition of an ablation."""

    kind: str
    labeling: str
    rows: List[StudyRow]

    def to_frame(self) -> pd.DataFrame:
        records = []
        for row in self.rows:
            first = next(iter(row.result.reports.values()))
            record: Dict[str, Any] = {"condition": row.condition, "n_features": first.n_features}
            for target, report in row.result.reports.items():
                record[f"accuracy_{target}"] = report.mean_accuracy
                record[f"f1_{target}"] = report.mean_f1
            records.append(record)
        return pd.DataFrame.from_records(records)

    def to_document(self) -> Dict[str, Any]:
        """JSON-ready form with every condition's full reports."""
        return {
            "kind": self.kind,
            "labeling": self.labeling,
            "rows": [
                {
                    "condition": row.condition,
                    "channels": list(row.channels) if row.channels else None,
                    "bands": list(row.bands) if row.bands else None,
                    "reports": {
                        t: r.model_dump(mode="json") for t, r in row.result.reports.items()
                    },
                }
                for row in self.rows
            ],
        }


def _study(
    kind: str,
    dataset: Dataset,
    labeling: str,
    conditions: Sequence[Tuple[str, Optional[Sequence[str]], Optional[Sequence[str]]]],
    config: CVConfig,
    seed: int,
    jobs: int,
    targets: Sequence[str],
) -> StudyResult:
    common = validate_cv_readiness(dataset)
    labels = labels_for(dataset, labeling, config, seed)
    full = prepare_table(dataset, "eeg", config, jobs=jobs)

    tables = []
    for name, channels, bands in conditions:
        table = full.select_eeg(channels, bands)
        table.settings["channels"] = list(channels) if channels else None
        table.settings["bands"] = list(bands) if bands else None
        logger.info("Study condition", study=kind, condition=name, features=len(table.layout))
        tables.append(table)

    results = evaluate_tables(tables, labels, common, config, seed, jobs, targets)
    rows = [
        StudyRow(
            condition=name,
            channels=tuple(channels) if channels else None,
            bands=tuple(bands) if bands else None,
            result=result,
        )
        for (name, channels, bands), result in zip(conditions, results)
    ]
    return StudyResult(kind=kind, labeling=labels.provenance, rows=rows)


def channel_study(
    dataset: Dataset,
    labeling: str = "threshold",
    config: CVConfig = CVConfig(),
    seed: int = 0,
    jobs: int = 1,
    channel_sets: Sequence[Sequence[str]] = CHANNEL_STUDY_SETS,
    targets: Sequence[str] = TARGETS,
) -> StudyResult:
    """Cross-validate EEG features restricted to each channel set, all bands."""
    conditions = [("+".join(s), tuple(s), None) for s in channel_sets]
    return _study("channel", dataset, labeling, conditions, config, seed, jobs, targets)


def band_study(
    dataset: Dataset,
    labeling: str = "kmeans",
    config: CVConfig = CVConfig(),
    seed: int = 0,
    jobs: int = 1,
    bands: Sequence[str] = tuple(EEG_BANDS),
    targets: Sequence[str] = TARGETS,
) -> StudyResult:
    """Cross-validate the eight channels' power in one band at a time."""
    conditions = [(band, None, (band,)) for band in bands]
    return _study("band", dataset, labeling, conditions, config, seed, jobs, targets)
