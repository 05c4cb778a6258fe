"""K-means and Gaussian mixture fitting."""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import structlog

from scipy.linalg import LinAlgError, cholesky, solve_triangular
from scipy.special import logsumexp

from src.exceptions import ClusteringError, SingularCovarianceError
from src.utils.constants import (
    DEFAULT_GMM_MAX_ITER,
    DEFAULT_GMM_REG,
    DEFAULT_GMM_TOL,
    DEFAULT_KMEANS_MAX_ITER,
    DEFAULT_KMEANS_RESTARTS,
)


logger = structlog.get_logger()


@dataclass(eq=False)
class ClusterModel:
    """A fitted partition of the points.

    ``centroids`` holds k-means centroids or GMM component means. The GMM-only
    fields stay ``None`` for k-means. ``history`` is the inertia per Lloyd
    iteration for k-means and the log-likelihood per EM iteration for GMM.
    """

    method: str
    k: int
    centroids: np.ndarray
    assignments: np.ndarray
    inertia: float
    covariances: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None
    log_likelihood: Optional[float] = None
    history: List[float] = field(default_factory=list)
    converged: bool = True
    n_iter: int = 0
    empty_repairs: int = 0

    def predict(self, points: np.ndarray) -> np.ndarray:
        """Nearest-centroid assignment of new points."""
        return np.argmin(_sq_distances(_as_points(points), self.centroids), axis=1)

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "k": self.k,
            "centroids": self.centroids.tolist(),
            "inertia": self.inertia,
            "converged": self.converged,
            "n_iter": self.n_iter,
        }
        if self.method == "gmm":
            out["weights"] = self.weights.tolist()
            out["log_likelihood"] = self.log_likelihood
        return out


def _as_points(points: np.ndarray) -> np.ndarray:
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, np.newaxis]
    if x.ndim != 2 or not np.all(np.isfinite(x)):
        raise ClusteringError("points must be a finite n x d matrix")
    return x


def _check_k(n: int, k: int) -> None:
    if k < 1:
        raise ClusteringError(f"k must be at least 1, got {k}")
    if k > n:
        raise ClusteringError(f"k={k} exceeds the number of points ({n})")


def _sq_distances(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = x[:, np.newaxis, :] - centroids[np.newaxis, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def _kmeans_plus_plus(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    centroids = [x[rng.integers(n)]]
    for _ in range(1, k):
        d2 = _sq_distances(x, np.array(centroids)).min(axis=1)
        total = d2.sum()
        if total > 0:
            index = rng.choice(n, p=d2 / total)
        else:
            index = rng.integers(n)
        centroids.append(x[index])
    return np.array(centroids)


def _lloyd(
    x: np.ndarray, centroids: np.ndarray, max_iter: int
) -> ClusterModel:
    n, k = x.shape[0], centroids.shape[0]
    labels = np.full(n, -1)
    history: List[float] = []
    repairs = 0
    converged = False
    rows = np.arange(n)

    for iteration in range(1, max_iter + 1):
        d2 = _sq_distances(x, centroids)
        best = np.argmin(d2, axis=1)
        if iteration > 1:
            # Equal distances keep the current cluster.
            keep = d2[rows, labels] <= d2[rows, best]
            best = np.where(keep, labels, best)
        history.append(float(d2[rows, best].sum()))
        if np.array_equal(best, labels):
            converged = True
            break
        labels = best

        for j in range(k):
            members = labels == j
            if members.any():
                centroids[j] = x[members].mean(axis=0)
                continue
            counts = np.bincount(labels, minlength=k)
            own = _sq_distances(x, centroids)[rows, labels]
            own[counts[labels] <= 1] = -1.0
            far = int(np.argmax(own))
            labels[far] = j
            centroids[j] = x[far]
            repairs += 1
            logger.debug("Empty cluster repaired", cluster=j, point=far)

    inertia = float(_sq_distances(x, centroids)[rows, labels].sum())
    return ClusterModel(
        method="kmeans",
        k=k,
        centroids=centroids,
        assignments=labels,
        inertia=inertia,
        history=history,
        converged=converged,
        n_iter=len(history),
        empty_repairs=repairs,
    )


def kmeans_fit(
    points: np.ndarray,
    k: int,
    seed: int = 0,
    restarts: int = DEFAULT_KMEANS_RESTARTS,
    max_iter: int = DEFAULT_KMEANS_MAX_ITER,
) -> ClusterModel:
    """Lloyd's algorithm from k-means++ seeds, best inertia over restarts.

    Args:
        points: n x d matrix
        k: Number of clusters, 1 <= k <= n
        seed: Root seed; restart i draws from the i-th spawned child
        restarts: Number of independent initializations

    Raises:
        ClusteringError: If k is out of range or points are not finite
    """
    x = _as_points(points)
    _check_k(x.shape[0], k)
    if restarts < 1:
        raise ClusteringError("restarts must be at least 1")

    best: Optional[ClusterModel] = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        model = _lloyd(x, _kmeans_plus_plus(x, k, rng), max_iter)
        if best is None or model.inertia < best.inertia:
            best = model
    if not best.converged:
        logger.warning("k-means hit the iteration cap", k=k, max_iter=max_iter)
    return best


def _component_log_density(
    x: np.ndarray, mean: np.ndarray, cov: np.ndarray, component: int
) -> np.ndarray:
    try:
        chol = cholesky(cov, lower=True)
    except LinAlgError as e:
        raise SingularCovarianceError(
            f"Covariance of component {component} is singular; increase gmm_reg"
        ) from e
    z = solve_triangular(chol, (x - mean).T, lower=True)
    log_det = 2.0 * np.sum(np.log(np.diag(chol)))
    d = x.shape[1]
    return -0.5 * (d * np.log(2 * np.pi) + log_det + np.sum(z * z, axis=0))


def _e_step(x, weights, means, covs):
    log_prob = np.column_stack(
        [
            np.log(weights[j]) + _component_log_density(x, means[j], covs[j], j)
            for j in range(len(weights))
        ]
    )
    norm = logsumexp(log_prob, axis=1)
    return np.exp(log_prob - norm[:, np.newaxis]), float(norm.sum())


def _m_step(x, resp, reg):
    n, d = x.shape
    nk = resp.sum(axis=0) + 10 * np.finfo(float).eps
    means = (resp.T @ x) / nk[:, np.newaxis]
    covs = np.empty((resp.shape[1], d, d))
    for j in range(resp.shape[1]):
        diff = x - means[j]
        covs[j] = (resp[:, j, np.newaxis] * diff).T @ diff / nk[j] + reg * np.eye(d)
    return nk / n, means, covs


def gmm_fit(
    points: np.ndarray,
    k: int,
    seed: int = 0,
    max_iter: int = DEFAULT_GMM_MAX_ITER,
    reg: float = DEFAULT_GMM_REG,
    tol: float = DEFAULT_GMM_TOL,
) -> ClusterModel:
    """Full-covariance Gaussian mixture by expectation maximization.

    Responsibilities start from a single k-means++ run. ``reg`` is added to
    every covariance diagonal after each M-step.

    Raises:
        ClusteringError: If k is out of range or reg is not positive
        SingularCovarianceError: If a covariance stays singular after regularization
    """
    x = _as_points(points)
    _check_k(x.shape[0], k)
    if reg <= 0:
        raise ClusteringError("reg must be positive")

    start = kmeans_fit(x, k, seed=seed, restarts=1)
    resp = np.zeros((x.shape[0], k))
    resp[np.arange(x.shape[0]), start.assignments] = 1.0
    weights, means, covs = _m_step(x, resp, reg)

    history: List[float] = []
    converged = False
    for _ in range(max_iter):
        resp, ll = _e_step(x, weights, means, covs)
        history.append(ll)
        if len(history) > 1 and abs(history[-1] - history[-2]) < tol:
            converged = True
            break
        weights, means, covs = _m_step(x, resp, reg)

    if not converged:
        logger.warning("GMM hit the iteration cap", k=k, max_iter=max_iter)

    labels = np.argmax(resp, axis=1)
    inertia = float(_sq_distances(x, means)[np.arange(x.shape[0]), labels].sum())
    return ClusterModel(
        method="gmm",
        k=k,
        centroids=means,
        assignments=labels,
        inertia=inertia,
        covariances=covs,
        weights=weights,
        log_likelihood=history[-1],
        history=history,
        converged=converged,
        n_iter=len(history),
    )
