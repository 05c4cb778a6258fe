"""Cluster validation: Davies-Bouldin index, elbow rule and K sweeps."""

import math

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog

from src.exceptions import ClusteringError, ParameterError
from src.utils.constants import (
    DEFAULT_GMM_REG,
    DEFAULT_K_RANGE,
    DEFAULT_KMEANS_RESTARTS,
)
from src.utils.executor import run_tasks
from src.utils.seeding import derive_seed

from .clustering import ClusterModel, gmm_fit, kmeans_fit


logger = structlog.get_logger()

CLUSTER_METHODS = ("kmeans", "gmm")


def davies_bouldin(points: np.ndarray, assignments: np.ndarray) -> float:
    """Davies-Bouldin index with mean member-to-centroid distance as scatter.

    Centroids are the member means. A pair of clusters whose centroids
    coincide contributes an infinite ratio.

    Raises:
        ClusteringError: Fewer than two clusters or an empty cluster index
    """
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, np.newaxis]
    labels = np.asarray(assignments, dtype=int)
    if labels.size != x.shape[0] or labels.size == 0 or labels.min() < 0:
        raise ClusteringError("assignments must give a cluster index for every point")
    counts = np.bincount(labels)
    k = counts.size
    if k < 2:
        raise ClusteringError("Davies-Bouldin index needs at least two clusters")
    if np.any(counts == 0):
        raise ClusteringError(f"Empty clusters: {np.flatnonzero(counts == 0).tolist()}")

    centroids = np.array([x[labels == j].mean(axis=0) for j in range(k)])
    scatter = np.array(
        [np.linalg.norm(x[labels == j] - centroids[j], axis=1).mean() for j in range(k)]
    )
    worst = np.zeros(k)
    for i in range(k):
        ratios = []
        for j in range(k):
            if i == j:
                continue
            separation = np.linalg.norm(centroids[i] - centroids[j])
            ratios.append(
                (scatter[i] + scatter[j]) / separation if separation > 0 else math.inf
            )
        worst[i] = max(ratios)
    return float(worst.mean())


def select_k_by_db(scores: Mapping[int, float]) -> int:
    """k with the lowest index; ties go to the smaller k."""
    if not scores:
        raise ParameterError("No Davies-Bouldin scores to choose from")
    return min(sorted(scores), key=lambda k: scores[k])


def elbow_knee(sse: Mapping[int, float]) -> Optional[int]:
    """Knee of a within-cluster SSE curve.

    Candidates are the interior k whose second difference is positive; the
    knee is the candidate lying farthest below the chord joining the first
    and last points, ties to the smaller k. Returns ``None`` when no second
    difference exceeds the flatness tolerance.

    Raises:
        ParameterError: Fewer than three consecutive k values
    """
    ks = sorted(sse)
    if len(ks) < 3 or ks != list(range(ks[0], ks[0] + len(ks))):
        raise ParameterError("elbow_knee needs at least three consecutive k values")

    values = np.array([sse[k] for k in ks], dtype=float)
    eps = 1e-9 * max(1.0, float(np.max(np.abs(values))))
    second = values[:-2] - 2 * values[1:-1] + values[2:]
    if not np.any(second > eps):
        return None

    span = ks[-1] - ks[0]
    chord = values[0] + (values[-1] - values[0]) * (np.array(ks) - ks[0]) / span
    below = chord - values
    best_k, best_gap = None, -math.inf
    for offset, curvature in enumerate(second, start=1):
        if curvature > eps and below[offset] > best_gap + eps:
            best_k, best_gap = ks[offset], below[offset]
    return best_k


@dataclass(frozen=True, eq=False)
class SweepEntry:
    method: str
    k: int
    db_index: float
    sse: float
    model: ClusterModel


@dataclass(frozen=True, eq=False)
class ClusterSweep:
    """Fits of every (method, k) with their validation scores."""

    entries: Tuple[SweepEntry, ...]
    best_method: str
    best_k: int
    elbow_k: Optional[int]

    def db_scores(self, method: str) -> Dict[int, float]:
        return {e.k: e.db_index for e in self.entries if e.method == method}

    def sse(self, method: str) -> Dict[int, float]:
        return {e.k: e.sse for e in self.entries if e.method == method}

    def model(self, method: str, k: int) -> ClusterModel:
        for entry in self.entries:
            if entry.method == method and entry.k == k:
                return entry.model
        raise ParameterError(f"No {method} fit with k={k} in this sweep")

    @property
    def best_model(self) -> ClusterModel:
        return self.model(self.best_method, self.best_k)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {"method": e.method, "k": e.k, "db_index": e.db_index, "sse": e.sse}
                for e in self.entries
            ]
        )

    def summary(self) -> dict:
        return {
            "best": {"method": self.best_method, "k": self.best_k},
            "elbow_k": self.elbow_k,
            "db_index": {m: self.db_scores(m) for m in CLUSTER_METHODS if self.db_scores(m)},
            "sse": {m: self.sse(m) for m in CLUSTER_METHODS if self.sse(m)},
        }


def _fit_task(args: Tuple[np.ndarray, str, int, int, int, float]) -> SweepEntry:
    x, method, k, seed, restarts, reg = args
    if method == "kmeans":
        model = kmeans_fit(x, k, seed=seed, restarts=restarts)
    else:
        model = gmm_fit(x, k, seed=seed, reg=reg)
    try:
        db = davies_bouldin(x, model.assignments)
    except ClusteringError:
        # Hard assignments of a mixture can leave a component without points.
        db = math.inf
    return SweepEntry(method=method, k=k, db_index=db, sse=model.inertia, model=model)


def cluster_sweep(
    points: np.ndarray,
    k_range: Tuple[int, int] = DEFAULT_K_RANGE,
    methods: Sequence[str] = CLUSTER_METHODS,
    seed: int = 0,
    restarts: int = DEFAULT_KMEANS_RESTARTS,
    gmm_reg: float = DEFAULT_GMM_REG,
    jobs: int = 1,
) -> ClusterSweep:
    """Fit every method for k in the inclusive ``k_range`` and score the fits.

    The best fit is the global Davies-Bouldin minimum, ties resolved toward
    k-means and then the smaller k. The elbow k comes from the k-means SSE
    curve when k-means is swept over at least three values.
    """
    lo, hi = k_range
    if lo < 2 or hi < lo:
        raise ParameterError(f"k range must satisfy 2 <= lo <= hi, got {k_range}")
    unknown = [m for m in methods if m not in CLUSTER_METHODS]
    if unknown or not methods:
        raise ParameterError(f"Unknown clustering methods: {unknown}")

    x = np.asarray(points, dtype=float)
    ordered = [m for m in CLUSTER_METHODS if m in methods]
    tasks = [
        (x, method, k, derive_seed(seed, "cluster", method, k), restarts, gmm_reg)
        for method in ordered
        for k in range(lo, hi + 1)
    ]
    entries: List[SweepEntry] = run_tasks(_fit_task, tasks, jobs=jobs)

    best = min(entries, key=lambda e: (e.db_index, ordered.index(e.method), e.k))
    elbow = None
    if "kmeans" in ordered and hi - lo >= 2:
        elbow = elbow_knee({e.k: e.sse for e in entries if e.method == "kmeans"})

    logger.info(
        "Cluster sweep finished",
        methods=ordered,
        k_range=[lo, hi],
        best_method=best.method,
        best_k=best.k,
        elbow_k=elbow,
    )
    return ClusterSweep(
        entries=tuple(entries), best_method=best.method, best_k=best.k, elbow_k=elbow
    )
