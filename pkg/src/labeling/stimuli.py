"""Stimulus curation from rater scores: clip ranking and playlists."""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog

from src.exceptions import ParameterError
from src.utils.constants import (
    DEFAULT_KMEANS_RESTARTS,
    DEFAULT_PER_CLUSTER,
    DEFAULT_STIMULUS_K,
)
from src.utils.seeding import rng_for

from .clustering import ClusterModel, kmeans_fit


logger = structlog.get_logger()

SCORE_COLUMNS = ("valence", "arousal", "happiness", "fear", "excitement")
STIMULUS_COLUMNS = ("happiness", "fear", "excitement")


@dataclass(frozen=True, eq=False)
class StimulusRanking:
    """Per-cluster clips ordered by distance to the centroid."""

    model: ClusterModel
    clusters: Dict[int, List[Tuple[str, float]]]
    per_cluster: int
    representatives: Dict[str, np.ndarray]

    @property
    def selected(self) -> List[Tuple[int, str, float]]:
        """Top ``per_cluster`` clips of every cluster, cluster by cluster."""
        return [
            (cluster, clip_id, distance)
            for cluster in sorted(self.clusters)
            for clip_id, distance in self.clusters[cluster][: self.per_cluster]
        ]

    def selected_by_cluster(self) -> Dict[int, List[str]]:
        return {
            cluster: [clip_id for clip_id, _ in ranked[: self.per_cluster]]
            for cluster, ranked in sorted(self.clusters.items())
        }

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for cluster in sorted(self.clusters):
            for rank, (clip_id, distance) in enumerate(self.clusters[cluster]):
                rows.append(
                    {
                        "cluster": cluster,
                        "clip_id": clip_id,
                        "distance": distance,
                        "selected": rank < self.per_cluster,
                    }
                )
        return pd.DataFrame(rows, columns=["cluster", "clip_id", "distance", "selected"])


def check_rating_columns(ratings: pd.DataFrame, columns: Sequence[str]) -> None:
    """Raise ParameterError unless ``clip_id`` and ``columns`` are present and rows exist."""
    missing = [c for c in ("clip_id", *columns) if c not in ratings.columns]
    if missing:
        raise ParameterError(f"Ratings table lacks columns {missing}")
    if ratings.empty:
        raise ParameterError("Ratings table is empty")


def _modal_cluster(
    members: np.ndarray, distances: np.ndarray
) -> int:
    """Most frequent cluster; ties go to the cluster holding the nearest point."""
    counts = Counter(members.tolist())
    top = max(counts.values())
    tied = [c for c, n in counts.items() if n == top]
    if len(tied) == 1:
        return tied[0]
    return min(tied, key=lambda c: (distances[members == c].min(), c))


def select_stimuli(
    ratings: pd.DataFrame,
    k: int = DEFAULT_STIMULUS_K,
    per_cluster: int = DEFAULT_PER_CLUSTER,
    seed: int = 0,
    restarts: int = DEFAULT_KMEANS_RESTARTS,
) -> StimulusRanking:
    """Cluster rater points in (happiness, fear, excitement) and rank clips.

    Each clip keeps only its rater points that fall in the clip's modal
    cluster; their mean is the clip's representative point, ranked by its
    distance to that cluster's centroid.

    Args:
        ratings: One row per (clip, rater) with ``clip_id`` and the score columns
        k: Number of clusters
        per_cluster: Clips kept per cluster
        seed: Root seed of the k-means restarts
    """
    check_rating_columns(ratings, STIMULUS_COLUMNS)
    if per_cluster < 1:
        raise ParameterError("per_cluster must be at least 1")

    clip_ids = ratings["clip_id"].astype(str).to_numpy()
    points = ratings[list(STIMULUS_COLUMNS)].to_numpy(dtype=float)
    model = kmeans_fit(points, k, seed=seed, restarts=restarts)
    own_distance = np.linalg.norm(points - model.centroids[model.assignments], axis=1)

    clusters: Dict[int, List[Tuple[str, float]]] = {c: [] for c in range(k)}
    representatives: Dict[str, np.ndarray] = {}
    for clip_id in sorted(set(clip_ids)):
        rows = clip_ids == clip_id
        members = model.assignments[rows]
        cluster = _modal_cluster(members, own_distance[rows])
        representative = points[rows][members == cluster].mean(axis=0)
        representatives[clip_id] = representative
        distance = float(np.linalg.norm(representative - model.centroids[cluster]))
        clusters[cluster].append((clip_id, distance))

    for cluster, ranked in clusters.items():
        ranked.sort(key=lambda item: (item[1], item[0]))
        if len(ranked) < per_cluster:
            logger.warning(
                "Cluster has fewer clips than requested, keeping all",
                cluster=cluster,
                clips=len(ranked),
                per_cluster=per_cluster,
            )

    ranking = StimulusRanking(
        model=model,
        clusters=clusters,
        per_cluster=per_cluster,
        representatives=representatives,
    )
    logger.info(
        "Stimuli selected",
        k=k,
        clips=len(representatives),
        selected=len(ranking.selected),
    )
    return ranking


def clip_rating_summary(ratings: pd.DataFrame) -> pd.DataFrame:
    """Per-clip mean and sample sd of every score plus the rater count."""
    present = [c for c in SCORE_COLUMNS if c in ratings.columns]
    check_rating_columns(ratings, present)
    frame = ratings.assign(clip_id=ratings["clip_id"].astype(str))
    grouped = frame.groupby("clip_id", sort=True)[present]
    summary = grouped.mean().add_suffix("_mean").join(
        grouped.std(ddof=1).fillna(0.0).add_suffix("_sd")
    )
    summary["n_raters"] = grouped.size()
    ordered = [f"{c}_{stat}" for c in present for stat in ("mean", "sd")]
    return summary[ordered + ["n_raters"]]


def plan_playlist(
    ranking: StimulusRanking,
    participants: Sequence[str],
    common_per_cluster: int = 3,
    random_per_cluster: int = 2,
    seed: int = 0,
) -> Dict[str, List[str]]:
    """Clips per participant: shared top clips plus a private random draw.

    The ``common_per_cluster`` best-ranked clips of every cluster go to every
    participant; each participant then draws ``random_per_cluster`` more per
    cluster from that cluster's other selected clips.

    Raises:
        ParameterError: If a cluster has fewer selected clips than the common share
    """
    selected = ranking.selected_by_cluster()
    common: List[str] = []
    pools: Dict[int, List[str]] = {}
    for cluster, clips in selected.items():
        if len(clips) < common_per_cluster:
            raise ParameterError(
                f"Cluster {cluster} has {len(clips)} selected clips, "
                f"need {common_per_cluster} common ones"
            )
        common.extend(clips[:common_per_cluster])
        pools[cluster] = clips[common_per_cluster:]
        if len(pools[cluster]) < random_per_cluster:
            logger.warning(
                "Random pool smaller than requested draw",
                cluster=cluster,
                pool=len(pools[cluster]),
                draw=random_per_cluster,
            )

    playlists: Dict[str, List[str]] = {}
    for participant in participants:
        rng = rng_for(seed, "playlist", participant)
        extra: List[str] = []
        for cluster in sorted(pools):
            pool = pools[cluster]
            take = min(random_per_cluster, len(pool))
            extra.extend(pool[i] for i in sorted(rng.choice(len(pool), take, replace=False)))
        playlists[participant] = common + extra
    return playlists
