"""Binary classification metrics with "high" as the positive class."""

from dataclasses import dataclass

import numpy as np

from src.exceptions import ParameterError


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    f1: float
    precision: float
    recall: float


def metrics(y_true: np.ndarray, y_pred: np.ndarray) -> Metrics:
    """Accuracy and F1 of the positive class (label 1, in either ±1 or 0/1 coding).

    Precision, recall and F1 are 0 when their denominators vanish.
    """
    truth = np.asarray(y_true).ravel()
    pred = np.asarray(y_pred).ravel()
    if truth.size != pred.size:
        raise ParameterError(f"{truth.size} true labels but {pred.size} predictions")
    if truth.size == 0:
        raise ParameterError("metrics need at least one sample")

    positive_true = truth == 1
    positive_pred = pred == 1
    tp = int(np.sum(positive_true & positive_pred))
    fp = int(np.sum(~positive_true & positive_pred))
    fn = int(np.sum(positive_true & ~positive_pred))

    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Metrics(
        accuracy=float(np.mean(truth == pred)),
        f1=f1,
        precision=precision,
        recall=recall,
    )
