"""Binary SVM training, prediction and JSON export."""

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from pydantic import BaseModel, ValidationError

from src.exceptions import ModelError, ParameterError, SingleClassError
from src.utils.constants import DEFAULT_L1_MAX_SWEEPS, DEFAULT_SVM_MAX_ITER, DEFAULT_SVM_TOL

from .kernels import KernelSpec, kernel_matrix
from .scaler import MinMaxScaler
from .solvers import l1_coordinate_descent, smo


logger = structlog.get_logger()

PENALTIES = ("l1", "l2")


@dataclass(frozen=True, eq=False)
class SVMModel:
    """A trained binary classifier over labels -1 (low) and +1 (high).

    L2 models keep their support vectors with ``dual_coefs = alpha * y``;
    L1 models are linear and keep an explicit weight vector instead.
    """

    kernel: KernelSpec
    C: float
    penalty: str
    bias: float
    n_features: int
    support_vectors: np.ndarray
    dual_coefs: np.ndarray
    weights: Optional[np.ndarray] = None
    objective: float = 0.0
    converged: bool = True
    n_iter: int = 0
    scaler: Optional[MinMaxScaler] = None

    def with_scaler(self, scaler: MinMaxScaler) -> "SVMModel":
        return replace(self, scaler=scaler)

    def hyperparameters(self) -> Dict[str, Any]:
        return {
            "kernel": self.kernel.kind,
            "C": self.C,
            "degree": self.kernel.degree,
            "coef0": self.kernel.coef0,
            "penalty": self.penalty,
        }


def _as_labels(y: np.ndarray) -> np.ndarray:
    labels = np.asarray(y, dtype=float).ravel()
    if not np.all(np.isin(labels, (-1.0, 1.0))):
        raise ParameterError("SVM labels must be -1 or +1")
    return labels


def _checked(
    x: np.ndarray, y: np.ndarray, kernel: KernelSpec, Cs: Sequence[float], penalty: str
) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    labels = _as_labels(y)
    if x.ndim != 2 or x.shape[0] != labels.size:
        raise ParameterError(f"x has shape {x.shape} for {labels.size} labels")
    if any(c <= 0 for c in Cs):
        raise ParameterError("C must be positive")
    if penalty not in PENALTIES:
        raise ParameterError(f"Unknown penalty {penalty!r}; use one of {PENALTIES}")
    if penalty == "l1" and kernel.kind != "linear":
        raise ParameterError("L1 penalty is only defined for the linear kernel")
    if np.unique(labels).size < 2:
        raise SingleClassError("Training labels contain a single class")
    return x, labels


def svm_train(
    x: np.ndarray,
    y: np.ndarray,
    kernel: KernelSpec,
    C: float = 1.0,
    penalty: str = "l2",
    tol: float = DEFAULT_SVM_TOL,
    seed: int = 0,
    max_iter: int = DEFAULT_SVM_MAX_ITER,
    max_sweeps: int = DEFAULT_L1_MAX_SWEEPS,
) -> SVMModel:
    """Train on an already scaled matrix.

    Args:
        x: n x d training matrix
        y: Labels in {-1, +1}
        kernel: Kernel specification; ``gamma=None`` is resolved from ``x``
        C: Box constraint (L2) or loss weight (L1)
        penalty: ``l2`` solves the kernel dual by SMO, ``l1`` a sparse linear primal
        seed: Coordinate order of the L1 solver

    Raises:
        SingleClassError: If ``y`` holds a single class
        ParameterError: Invalid C, penalty, shapes, or L1 with a nonlinear kernel
    """
    return svm_train_path(
        x, y, kernel, [C], penalty, tol=tol, seeds=[seed], max_iter=max_iter, max_sweeps=max_sweeps
    )[0]


def svm_train_path(
    x: np.ndarray,
    y: np.ndarray,
    kernel: KernelSpec,
    Cs: Sequence[float],
    penalty: str = "l2",
    tol: float = DEFAULT_SVM_TOL,
    seeds: Optional[Sequence[int]] = None,
    max_iter: int = DEFAULT_SVM_MAX_ITER,
    max_sweeps: int = DEFAULT_L1_MAX_SWEEPS,
) -> List[SVMModel]:
    """Train one model per C value on the same data and kernel.

    The kernel matrix is computed once. Fits run in increasing C, each
    started from the previous solution (dual variables scaled by the C
    ratio for L2, the weight vector for L1). Models come back in the order
    of ``Cs``.

    Args:
        seeds: Coordinate order of the L1 solver per C value (default all 0)

    Raises:
        SingleClassError: If ``y`` holds a single class
        ParameterError: Invalid C, penalty, shapes, or L1 with a nonlinear kernel
    """
    Cs = [float(c) for c in Cs]
    seeds = list(seeds) if seeds is not None else [0] * len(Cs)
    if len(seeds) != len(Cs):
        raise ParameterError(f"{len(seeds)} seeds for {len(Cs)} C values")
    x, labels = _checked(x, y, kernel, Cs, penalty)
    n_features = x.shape[1]
    order = sorted(range(len(Cs)), key=lambda k: Cs[k])
    models: List[Optional[SVMModel]] = [None] * len(Cs)

    if penalty == "l1":
        start: Optional[Tuple[np.ndarray, float]] = None
        for k in order:
            primal = l1_coordinate_descent(
                x, labels, Cs[k], tol, max_sweeps, seeds[k], start=start
            )
            start = (primal.weights, primal.bias)
            models[k] = SVMModel(
                kernel=kernel,
                C=Cs[k],
                penalty="l1",
                bias=primal.bias,
                n_features=n_features,
                support_vectors=np.empty((0, n_features)),
                dual_coefs=np.empty(0),
                weights=primal.weights,
                objective=primal.objective,
                converged=primal.converged,
                n_iter=primal.n_iter,
            )
        return models

    spec = kernel.resolved(x)
    gram = kernel_matrix(spec, x, x)
    alpha0: Optional[np.ndarray] = None
    previous_c = None
    for k in order:
        c = Cs[k]
        if alpha0 is not None:
            alpha0 = alpha0 * (c / previous_c)
        dual = smo(gram, labels, c, tol, max_iter, alpha0=alpha0)
        alpha0, previous_c = dual.alpha, c
        support = dual.alpha > 0
        logger.debug(
            "SMO finished",
            kernel=spec.kind,
            C=c,
            iterations=dual.n_iter,
            support_vectors=int(support.sum()),
        )
        models[k] = SVMModel(
            kernel=spec,
            C=c,
            penalty="l2",
            bias=dual.bias,
            n_features=n_features,
            support_vectors=x[support],
            dual_coefs=(dual.alpha * labels)[support],
            objective=dual.objective,
            converged=dual.converged,
            n_iter=dual.n_iter,
        )
    return models


def decision_function(model: SVMModel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return np.empty(0)
    if x.ndim != 2 or x.shape[1] != model.n_features:
        raise ParameterError(f"Model expects {model.n_features} features, got shape {x.shape}")
    if model.weights is not None:
        return x @ model.weights + model.bias
    if model.dual_coefs.size == 0:
        return np.full(x.shape[0], model.bias)
    return kernel_matrix(model.kernel, x, model.support_vectors) @ model.dual_coefs + model.bias


def svm_predict(model: SVMModel, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Labels (+1 where the decision value is >= 0) and the raw decision values."""
    values = decision_function(model, x)
    return np.where(values >= 0.0, 1, -1), values


class SVMDocument(BaseModel):
    """JSON form of a trained model and the scaler it expects."""

    kernel: KernelSpec
    C: float
    penalty: str
    bias: float
    n_features: int
    support_vectors: List[List[float]]
    dual_coefs: List[float]
    weights: Optional[List[float]] = None
    scaler: Optional[Dict[str, List[float]]] = None
    metadata: Dict[str, Any] = {}


def model_to_document(model: SVMModel, metadata: Optional[Dict[str, Any]] = None) -> SVMDocument:
    return SVMDocument(
        kernel=model.kernel,
        C=model.C,
        penalty=model.penalty,
        bias=model.bias,
        n_features=model.n_features,
        support_vectors=model.support_vectors.tolist(),
        dual_coefs=model.dual_coefs.tolist(),
        weights=None if model.weights is None else model.weights.tolist(),
        scaler=None if model.scaler is None else model.scaler.to_dict(),
        metadata=metadata or {},
    )


def save_model(model: SVMModel, path: Path, metadata: Optional[Dict[str, Any]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model_to_document(model, metadata).model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def load_model(path: Path) -> Tuple[SVMModel, Dict[str, Any]]:
    """Read a model JSON document.

    Raises:
        ModelError: If the file is missing or not a valid model document
    """
    try:
        doc = SVMDocument.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValidationError) as e:
        raise ModelError(f"Cannot load model from {path}: {e}") from e
    n = doc.n_features
    model = SVMModel(
        kernel=doc.kernel,
        C=doc.C,
        penalty=doc.penalty,
        bias=doc.bias,
        n_features=n,
        support_vectors=np.asarray(doc.support_vectors, dtype=float).reshape(-1, n),
        dual_coefs=np.asarray(doc.dual_coefs, dtype=float),
        weights=None if doc.weights is None else np.asarray(doc.weights, dtype=float),
        scaler=None if doc.scaler is None else MinMaxScaler.from_dict(doc.scaler),
    )
    return model, dict(doc.metadata)
