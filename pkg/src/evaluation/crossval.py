"""Nested leave-one-clip-out cross-validation.

Outer folds hold out every trial of one common clip and train on the rest,
non-common clips included. Within an outer training set, each grid point is
scored by the mean F1 of an inner leave-one-clip-out over the common clips
it still contains. The scaler is fit on training rows only, at both levels.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from pydantic import BaseModel

from src.config.settings import Settings
from src.dataset import Dataset, validate_cv_readiness
from src.exceptions import (
    DegenerateLabelingError,
    EvaluationError,
    ParameterError,
    SingleClassError,
)
from src.features import ExtractionConfig, FeatureTable, extract_table
from src.labeling import TARGETS, BinaryLabels, label_dataset
from src.preprocessing import PreprocessConfig, preprocess_dataset
from src.svm import (
    KernelSpec,
    MinMaxScaler,
    SVMModel,
    metrics,
    scaler_fit,
    svm_predict,
    svm_train,
    svm_train_path,
)
from src.utils.constants import (
    DEFAULT_KMEANS_RESTARTS,
    DEFAULT_SVM_MAX_ITER,
    DEFAULT_SVM_TOL,
    DEFAULT_THRESHOLD,
)
from src.utils.executor import run_tasks
from src.utils.seeding import derive_seed

from .grid import GridPoint, GridSpec


logger = structlog.get_logger()

Key = Tuple[str, str]

INNER_CV_POLICY = (
    "outer training sets include non-common clips; inner folds hold out each "
    "common clip left in the outer training set; scalers are refit on every "
    "training split"
)


@dataclass(frozen=True)
class Fold:
    """One outer fold: every trial of ``held_out_clip`` is tested."""

    held_out_clip: str
    train_keys: Tuple[Key, ...]
    test_keys: Tuple[Key, ...]


def folds_from_keys(keys: Sequence[Key], common_clips: Sequence[str]) -> List[Fold]:
    """Leave-one-clip-out folds over trial keys; depends on clip ids only."""
    folds = []
    for clip in sorted(common_clips):
        test = tuple(k for k in keys if k[1] == clip)
        train = tuple(k for k in keys if k[1] != clip)
        folds.append(Fold(held_out_clip=clip, train_keys=train, test_keys=test))
    return folds


def loco_folds(ds: Dataset) -> List[Fold]:
    """One fold per clip seen by every participant.

    Raises:
        CVReadinessError: If the dataset has no common clip
    """
    return folds_from_keys([t.key for t in ds], validate_cv_readiness(ds))


@dataclass(frozen=True)
class SVMOptions:
    tol: float = DEFAULT_SVM_TOL
    max_iter: int = DEFAULT_SVM_MAX_ITER


def _fit_predict(
    x_train: np.ndarray,
    y_train: np.ndarray,
    x_test: np.ndarray,
    point: GridPoint,
    seed: int,
    options: SVMOptions,
) -> Tuple[SVMModel, MinMaxScaler, np.ndarray]:
    scaler = scaler_fit(x_train)
    model = svm_train(
        scaler.transform(x_train),
        y_train,
        point.kernel,
        C=point.C,
        penalty=point.penalty,
        tol=options.tol,
        seed=seed,
        max_iter=options.max_iter,
    )
    labels, _ = svm_predict(model, scaler.transform(x_test))
    return model.with_scaler(scaler), scaler, labels


def grid_search(
    x: np.ndarray,
    y: np.ndarray,
    clips: np.ndarray,
    inner_clips: Sequence[str],
    grid: GridSpec,
    seed: int = 0,
    options: SVMOptions = SVMOptions(),
) -> Tuple[GridPoint, List[float]]:
    """Choose the grid point with the best mean inner-fold F1.

    Points sharing a kernel and penalty are fit as one C path per inner
    split, on one scaled split and one kernel matrix. A split with a single
    class scores every point 0.

    Args:
        x: Unscaled training matrix of the outer fold
        y: Labels in {-1, +1}
        clips: Clip id of every row
        inner_clips: Common clips available as inner test folds
        grid: Search space; ties go to the first point in enumeration order
        seed: Fold seed; L1 fits derive their own sub-seeds from it

    Returns:
        The chosen point and the mean inner F1 of every point

    Raises:
        EvaluationError: If fewer than two inner clips are available
    """
    points = grid.points()
    if len(points) == 1:
        return points[0], [float("nan")]
    if len(inner_clips) < 2:
        raise EvaluationError(
            f"Inner cross-validation needs two common clips, got {len(inner_clips)}"
        )

    splits = [(clip, clips != clip, clips == clip) for clip in sorted(inner_clips)]
    groups: Dict[Tuple[KernelSpec, str], List[int]] = {}
    for idx, point in enumerate(points):
        groups.setdefault((point.kernel, point.penalty), []).append(idx)

    f1s = np.zeros((len(points), len(splits)))
    for s, (clip, train, test) in enumerate(splits):
        scaler = scaler_fit(x[train])
        x_train, x_test = scaler.transform(x[train]), scaler.transform(x[test])
        for (kernel, penalty), members in groups.items():
            try:
                models = svm_train_path(
                    x_train,
                    y[train],
                    kernel,
                    [points[i].C for i in members],
                    penalty,
                    tol=options.tol,
                    seeds=[derive_seed(seed, "grid", i, "inner", clip) for i in members],
                    max_iter=options.max_iter,
                )
            except SingleClassError:
                logger.warning(
                    "Inner fold has a single class; every grid point scores 0", inner_clip=clip
                )
                return points[0], [0.0] * len(points)
            for i, model in zip(members, models):
                pred, _ = svm_predict(model, x_test)
                f1s[i, s] = metrics(y[test], pred).f1

    scores = [float(v) for v in f1s.mean(axis=1)]
    best = int(np.argmax(scores))
    logger.debug("Grid search finished", best=points[best].label(), score=scores[best])
    return points[best], scores


class FoldReport(BaseModel):
    held_out_clip: str
    hyperparameters: Dict[str, Any]
    test_accuracy: float
    test_f1: float
    n_train: int
    n_test: int
    scaler: Dict[str, List[float]]
    test_keys: List[Tuple[str, str]]
    y_true: List[int]
    y_pred: List[int]


class CVReport(BaseModel):
    """Outcome of one target's nested cross-validation."""

    target: str
    modality: str
    label_provenance: str
    channels: Optional[List[str]] = None
    bands: Optional[List[str]] = None
    n_features: int
    class_counts: Dict[str, int]
    class_ratio: str
    grid_size: int
    inner_cv_policy: str = INNER_CV_POLICY
    seed: int
    folds: List[FoldReport]
    mean_accuracy: float
    mean_f1: float


def class_ratio(y01: np.ndarray) -> str:
    """Low-to-high ratio formatted as ``"1.38:1"``."""
    high = int(np.sum(y01 == 1))
    low = int(np.sum(y01 == 0))
    if high == 0:
        raise DegenerateLabelingError("No high-class samples")
    return f"{low / high:.2f}:1"


def run_fold(
    x: np.ndarray,
    y: np.ndarray,
    keys: Sequence[Key],
    fold: Fold,
    common_clips: Sequence[str],
    grid: GridSpec,
    seed: int = 0,
    options: SVMOptions = SVMOptions(),
) -> FoldReport:
    """Grid search, retrain and test for one outer fold.

    Nothing computed here reads the held-out rows before prediction.
    """
    position = {k: i for i, k in enumerate(keys)}
    train = np.array([position[k] for k in fold.train_keys], dtype=int)
    test = np.array([position[k] for k in fold.test_keys], dtype=int)
    clips = np.array([k[1] for k in keys])
    fold_seed = derive_seed(seed, "fold", fold.held_out_clip)

    inner = [c for c in common_clips if c != fold.held_out_clip]
    point, _ = grid_search(x[train], y[train], clips[train], inner, grid, fold_seed, options)
    try:
        _, scaler, pred = _fit_predict(x[train], y[train], x[test], point, fold_seed, options)
    except SingleClassError as e:
        raise EvaluationError(
            f"Fold {fold.held_out_clip}: training labels contain a single class"
        ) from e

    scores = metrics(y[test], pred)
    return FoldReport(
        held_out_clip=fold.held_out_clip,
        hyperparameters=point.as_dict(),
        test_accuracy=scores.accuracy,
        test_f1=scores.f1,
        n_train=int(train.size),
        n_test=int(test.size),
        scaler=scaler.to_dict(),
        test_keys=list(fold.test_keys),
        y_true=((y[test] + 1) // 2).astype(int).tolist(),
        y_pred=((pred + 1) // 2).astype(int).tolist(),
    )


def _fold_task(args: Tuple[Any, ...]) -> FoldReport:
    return run_fold(*args)


def _most_frequent(reports: List[FoldReport], grid: GridSpec) -> GridPoint:
    counts = Counter(GridPoint.from_dict(r.hyperparameters) for r in reports)
    top = max(counts.values())
    for point in grid.points():
        if counts.get(point, 0) == top:
            return point
    return GridPoint.from_dict(reports[0].hyperparameters)


def _signed_labels(table: FeatureTable, y01: np.ndarray, target: str) -> np.ndarray:
    if y01.size != len(table):
        raise ParameterError(f"{y01.size} labels for {len(table)} feature rows")
    if np.unique(y01).size < 2:
        raise DegenerateLabelingError(
            f"{target} labels contain a single class; try another labeling or threshold"
        )
    return 2 * y01 - 1


def _fold_items(
    table: FeatureTable,
    y: np.ndarray,
    common_clips: Sequence[str],
    grid: GridSpec,
    seed: int,
    options: SVMOptions,
) -> List[Tuple[Any, ...]]:
    common = sorted(common_clips)
    return [
        (table.matrix, y, table.keys, f, common, grid, seed, options)
        for f in folds_from_keys(table.keys, common_clips)
    ]


def _finish(
    table: FeatureTable,
    y01: np.ndarray,
    reports: List[FoldReport],
    grid: GridSpec,
    target: str,
    label_provenance: str,
    seed: int,
    options: SVMOptions,
) -> Tuple[CVReport, SVMModel]:
    chosen = _most_frequent(reports, grid)
    final, _, _ = _fit_predict(
        table.matrix,
        2 * y01 - 1,
        table.matrix[:0],
        chosen,
        derive_seed(seed, "final", target),
        options,
    )

    settings = table.settings
    report = CVReport(
        target=target,
        modality=str(settings.get("modality", "")),
        label_provenance=label_provenance,
        channels=settings.get("channels"),
        bands=settings.get("bands"),
        n_features=len(table.layout),
        class_counts={"low": int(np.sum(y01 == 0)), "high": int(np.sum(y01 == 1))},
        class_ratio=class_ratio(y01),
        grid_size=len(grid),
        seed=seed,
        folds=reports,
        mean_accuracy=float(np.mean([r.test_accuracy for r in reports])),
        mean_f1=float(np.mean([r.test_f1 for r in reports])),
    )
    logger.info(
        "Cross-validation finished",
        target=target,
        modality=report.modality,
        folds=len(reports),
        mean_accuracy=round(report.mean_accuracy, 4),
        mean_f1=round(report.mean_f1, 4),
    )
    return report, final


def cross_validate(
    table: FeatureTable,
    y01: np.ndarray,
    common_clips: Sequence[str],
    grid: GridSpec = GridSpec(),
    target: str = "valence",
    label_provenance: str = "threshold",
    seed: int = 0,
    options: SVMOptions = SVMOptions(),
    jobs: int = 1,
) -> Tuple[CVReport, SVMModel]:
    """Nested leave-one-clip-out evaluation of one binary target.

    Args:
        table: Features, one row per trial
        y01: Labels in {0, 1} aligned with ``table.keys``
        common_clips: Clips used as outer folds

    Returns:
        The report and a final model trained on every trial with the most
        frequently chosen hyper-parameters

    Raises:
        DegenerateLabelingError: If the labels hold a single class overall
    """
    y01 = np.asarray(y01, dtype=int).ravel()
    y = _signed_labels(table, y01, target)
    reports: List[FoldReport] = run_tasks(
        _fold_task, _fold_items(table, y, common_clips, grid, seed, options), jobs=jobs
    )
    return _finish(table, y01, reports, grid, target, label_provenance, seed, options)


@dataclass(frozen=True)
class CVConfig:
    """Everything ``run_cv`` needs besides the dataset and the seed.

    Traces are conditioned with the default chain unless ``preprocess`` is
    set to ``None``.
    """

    grid: GridSpec = GridSpec()
    svm: SVMOptions = SVMOptions()
    threshold: float = DEFAULT_THRESHOLD
    kmeans_restarts: int = DEFAULT_KMEANS_RESTARTS
    preprocess: Optional[PreprocessConfig] = field(default_factory=PreprocessConfig)
    extraction: ExtractionConfig = ExtractionConfig()

    @classmethod
    def from_settings(cls, settings: Settings) -> "CVConfig":
        return cls(
            grid=GridSpec.from_settings(settings),
            svm=SVMOptions(tol=settings.svm_tol, max_iter=settings.svm_max_iter),
            threshold=settings.threshold,
            kmeans_restarts=settings.kmeans_restarts,
            preprocess=PreprocessConfig.from_settings(settings),
            extraction=ExtractionConfig.from_settings(settings),
        )


@dataclass
class CVResult:
    """Reports and final models for each evaluated target."""

    reports: Dict[str, CVReport]
    models: Dict[str, SVMModel]
    labels: BinaryLabels
    table: FeatureTable = field(repr=False)

    def summary_row(self) -> Dict[str, Any]:
        """One row of the modality/labeling comparison table."""
        first = next(iter(self.reports.values()))
        row: Dict[str, Any] = {
            "modality": first.modality,
            "labeling": first.label_provenance,
            "n_features": first.n_features,
        }
        for target, report in self.reports.items():
            row[f"accuracy_{target}"] = report.mean_accuracy
            row[f"f1_{target}"] = report.mean_f1
            row[f"class_ratio_{target}"] = report.class_ratio
        return row

    def to_document(self) -> Dict[str, Any]:
        """JSON-ready run summary with every target's full report."""
        first = next(iter(self.reports.values()))
        return {
            "modality": first.modality,
            "labeling": first.label_provenance,
            "channels": first.channels,
            "bands": first.bands,
            "n_features": first.n_features,
            "reports": {t: r.model_dump(mode="json") for t, r in self.reports.items()},
        }


def prepare_table(
    dataset: Dataset,
    modality: str,
    config: CVConfig,
    channels: Optional[Sequence[str]] = None,
    bands: Optional[Sequence[str]] = None,
    jobs: int = 1,
) -> FeatureTable:
    """Preprocess (when configured) and extract one feature row per trial."""
    if config.preprocess is not None:
        dataset = preprocess_dataset(dataset, config.preprocess, jobs=jobs)
    table = extract_table(dataset, modality, channels, bands, config.extraction, jobs=jobs)
    table.settings["channels"] = list(channels) if channels else None
    table.settings["bands"] = list(bands) if bands else None
    return table


def labels_for(dataset: Dataset, labeling: str, config: CVConfig, seed: int) -> BinaryLabels:
    """Ground-truth labels, fit once on the whole dataset's scores."""
    return label_dataset(
        dataset,
        labeling,
        threshold=config.threshold,
        seed=derive_seed(seed, "labels"),
        restarts=config.kmeans_restarts,
    )


def _aligned(labels: BinaryLabels, target: str, keys: Sequence[Key]) -> np.ndarray:
    values = labels.target(target)
    if labels.keys is None:
        return values
    index = {k: i for i, k in enumerate(labels.keys)}
    return np.array([values[index[k]] for k in keys], dtype=int)


def evaluate_tables(
    tables: Sequence[FeatureTable],
    labels: BinaryLabels,
    common_clips: Sequence[str],
    config: CVConfig = CVConfig(),
    seed: int = 0,
    jobs: int = 1,
    targets: Sequence[str] = TARGETS,
) -> List[CVResult]:
    """Cross-validate every target of several tables over one task pool.

    The outer folds of all tables and targets are dispatched together; each
    carries the seed it would get from ``evaluate_table`` alone.
    """
    plans = []
    items: List[Tuple[Any, ...]] = []
    for table in tables:
        for target in targets:
            y01 = np.asarray(_aligned(labels, target, table.keys), dtype=int).ravel()
            y = _signed_labels(table, y01, target)
            cv_seed = derive_seed(seed, "cv", target)
            batch = _fold_items(table, y, common_clips, config.grid, cv_seed, config.svm)
            plans.append((table, target, y01, cv_seed, len(items), len(batch)))
            items.extend(batch)

    reports: List[FoldReport] = run_tasks(_fold_task, items, jobs=jobs)

    results: List[CVResult] = []
    for k, table in enumerate(tables):
        result = CVResult(reports={}, models={}, labels=labels, table=table)
        for plan in plans[k * len(targets) : (k + 1) * len(targets)]:
            _, target, y01, cv_seed, start, count = plan
            result.reports[target], result.models[target] = _finish(
                table,
                y01,
                reports[start : start + count],
                config.grid,
                target,
                labels.provenance,
                cv_seed,
                config.svm,
            )
        results.append(result)
    return results


def evaluate_table(
    table: FeatureTable,
    labels: BinaryLabels,
    common_clips: Sequence[str],
    config: CVConfig = CVConfig(),
    seed: int = 0,
    jobs: int = 1,
    targets: Sequence[str] = TARGETS,
) -> CVResult:
    return evaluate_tables([table], labels, common_clips, config, seed, jobs, targets)[0]


def run_cv(
    dataset: Dataset,
    modality: str,
    labeling: str = "threshold",
    config: CVConfig = CVConfig(),
    channels: Optional[Sequence[str]] = None,
    bands: Optional[Sequence[str]] = None,
    seed: int = 0,
    jobs: int = 1,
    targets: Sequence[str] = TARGETS,
) -> CVResult:
    """Label, extract and cross-validate both targets of a dataset.

    Raises:
        CVReadinessError: If no clip is common to all participants
        DegenerateLabelingError: If a target's labels hold a single class
    """
    common = validate_cv_readiness(dataset)
    labels = labels_for(dataset, labeling, config, seed)
    table = prepare_table(dataset, modality, config, channels, bands, jobs)
    logger.info(
        "Starting cross-validation",
        modality=modality,
        labeling=labeling,
        folds=len(common),
        grid_size=len(config.grid),
        features=len(table.layout),
    )
    return evaluate_table(table, labels, common, config, seed, jobs, targets)


def evaluate_model(
    model: SVMModel, table: FeatureTable, y01: np.ndarray
) -> Dict[str, Any]:
    """Score an exported model on a feature table without retraining.

    Raises:
        ParameterError: If the model has no scaler or the widths differ
    """
    if model.scaler is None:
        raise ParameterError("Exported model carries no scaler")
    y01 = np.asarray(y01, dtype=int).ravel()
    pred, _ = svm_predict(model, model.scaler.transform(table.matrix))
    scores = metrics(2 * y01 - 1, pred)
    return {
        "accuracy": scores.accuracy,
        "f1": scores.f1,
        "precision": scores.precision,
        "recall": scores.recall,
        "n_test": int(y01.size),
        "class_ratio": class_ratio(y01),
        "y_pred": ((pred + 1) // 2).astype(int).tolist(),
    }
