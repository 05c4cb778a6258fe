"""Min-max feature scaling fitted on training rows only."""

from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from src.exceptions import ParameterError


@dataclass(frozen=True, eq=False)
class MinMaxScaler:
    """Per-column minimum and maximum of the fitting rows."""

    min_: np.ndarray
    max_: np.ndarray

    @property
    def n_features(self) -> int:
        return int(self.min_.size)

    @property
    def constant(self) -> np.ndarray:
        """Columns whose fitting rows were all equal."""
        return self.max_ == self.min_

    def transform(self, x: np.ndarray) -> np.ndarray:
        """Map to (x - min) / (max - min); constant columns become 0.

        Values outside the fitted range are not clipped.
        """
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.n_features:
            raise ParameterError(
                f"Scaler fitted on {self.n_features} features, got shape {x.shape}"
            )
        span = np.where(self.constant, 1.0, self.max_ - self.min_)
        out = (x - self.min_) / span
        out[:, self.constant] = 0.0
        return out

    def to_dict(self) -> Dict[str, List[float]]:
        return {"min": self.min_.tolist(), "max": self.max_.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, List[float]]) -> "MinMaxScaler":
        return cls(min_=np.asarray(data["min"], dtype=float), max_=np.asarray(data["max"], dtype=float))


def scaler_fit(train: np.ndarray) -> MinMaxScaler:
    """Column-wise min and max of the training matrix."""
    x = np.asarray(train, dtype=float)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ParameterError("scaler_fit needs a matrix with at least one row")
    return MinMaxScaler(min_=x.min(axis=0), max_=x.max(axis=0))


def scaler_transform(scaler: MinMaxScaler, x: np.ndarray) -> np.ndarray:
    return scaler.transform(x)
