"""Binary valence/arousal ground truth: fixed threshold or K-means quadrants."""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import structlog

from src.dataset import Dataset
from src.exceptions import ClusteringError, DegenerateClusteringError, ParameterError
from src.utils.constants import DEFAULT_KMEANS_RESTARTS, DEFAULT_THRESHOLD, QUADRANTS

from .clustering import ClusterModel, kmeans_fit


logger = structlog.get_logger()

LOW, HIGH = 0, 1
LABELINGS = ("threshold", "kmeans")
TARGETS = ("valence", "arousal")


@dataclass(frozen=True, eq=False)
class BinaryLabels:
    """Per-sample low (0) / high (1) labels for valence and arousal."""

    valence: np.ndarray
    arousal: np.ndarray
    provenance: str
    keys: Optional[Tuple[Tuple[str, str], ...]] = None
    quadrants: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "valence", np.asarray(self.valence, dtype=int))
        object.__setattr__(self, "arousal", np.asarray(self.arousal, dtype=int))
        if self.valence.shape != self.arousal.shape:
            raise ParameterError("valence and arousal labels differ in length")

    def __len__(self) -> int:
        return int(self.valence.size)

    def target(self, name: str) -> np.ndarray:
        if name not in TARGETS:
            raise ParameterError(f"Unknown target {name!r}; use one of {TARGETS}")
        return self.valence if name == "valence" else self.arousal

    def quadrant_counts(self) -> Dict[str, int]:
        """Samples per quadrant, derived from the label pairs."""
        names = [_quadrant_name(v, a) for v, a in zip(self.valence, self.arousal)]
        counts = Counter(names)
        return {q: counts.get(q, 0) for q in QUADRANTS}


def _quadrant_name(valence: int, arousal: int) -> str:
    return f"{'H' if valence == HIGH else 'L'}V{'H' if arousal == HIGH else 'L'}A"


def _va_matrix(assessments: np.ndarray) -> np.ndarray:
    va = np.asarray(assessments, dtype=float)
    if va.ndim != 2 or va.shape[1] != 2:
        raise ParameterError("assessments must be an n x 2 matrix of (valence, arousal)")
    return va


def label_by_threshold(
    assessments: np.ndarray, threshold: float = DEFAULT_THRESHOLD
) -> BinaryLabels:
    """Scores below the threshold are low, scores at or above it are high."""
    va = _va_matrix(assessments)
    return BinaryLabels(
        valence=(va[:, 0] >= threshold).astype(int),
        arousal=(va[:, 1] >= threshold).astype(int),
        provenance="threshold",
    )


def _top_two(values: np.ndarray, axis_name: str) -> np.ndarray:
    """Boolean mask of the two largest of four centroid coordinates."""
    order = np.argsort(-values, kind="stable")
    if np.isclose(values[order[1]], values[order[2]], rtol=0.0, atol=1e-9):
        raise DegenerateClusteringError(
            f"Cluster centroids tie on {axis_name}; quadrant mapping is ambiguous. "
            "Use threshold labeling instead"
        )
    mask = np.zeros(4, dtype=bool)
    mask[order[:2]] = True
    return mask


def label_by_quadrant(
    assessments: np.ndarray,
    seed: int = 0,
    restarts: int = DEFAULT_KMEANS_RESTARTS,
) -> Tuple[BinaryLabels, ClusterModel]:
    """Cluster (valence, arousal) with k=4 and map clusters onto quadrants.

    The two centroids with the largest arousal are the high-arousal clusters
    and, independently, the two with the largest valence are high-valence.
    The mapping must hit each of LVLA, LVHA, HVLA and HVHA exactly once.

    Raises:
        DegenerateClusteringError: If the mapping is not one-to-one
        ClusteringError: With fewer than four samples
    """
    va = _va_matrix(assessments)
    if va.shape[0] < 4:
        raise ClusteringError("Quadrant labeling needs at least four samples")

    model = kmeans_fit(va, 4, seed=seed, restarts=restarts)
    high_v = _top_two(model.centroids[:, 0], "valence")
    high_a = _top_two(model.centroids[:, 1], "arousal")
    names = [_quadrant_name(int(v), int(a)) for v, a in zip(high_v, high_a)]
    if sorted(names) != sorted(QUADRANTS):
        raise DegenerateClusteringError(
            f"Clusters map to {names}, not one cluster per quadrant. "
            "Use threshold labeling instead"
        )

    labels = BinaryLabels(
        valence=high_v[model.assignments].astype(int),
        arousal=high_a[model.assignments].astype(int),
        provenance="kmeans",
        quadrants=tuple(names[c] for c in model.assignments),
    )
    logger.info("Quadrant labels assigned", counts=labels.quadrant_counts())
    return labels, model


def label_dataset(
    dataset: Dataset,
    labeling: str = "threshold",
    threshold: float = DEFAULT_THRESHOLD,
    seed: int = 0,
    restarts: int = DEFAULT_KMEANS_RESTARTS,
) -> BinaryLabels:
    """Labels for every trial of a dataset, in dataset order."""
    if labeling not in LABELINGS:
        raise ParameterError(f"Unknown labeling {labeling!r}; use one of {LABELINGS}")
    keys: List[Tuple[str, str]] = [t.key for t in dataset]
    va = np.array([[t.assessment.valence, t.assessment.arousal] for t in dataset])
    if labeling == "threshold":
        labels = label_by_threshold(va, threshold)
    else:
        labels, _ = label_by_quadrant(va, seed=seed, restarts=restarts)
    return BinaryLabels(
        valence=labels.valence,
        arousal=labels.arousal,
        provenance=labels.provenance,
        keys=tuple(keys),
        quadrants=labels.quadrants,
    )
