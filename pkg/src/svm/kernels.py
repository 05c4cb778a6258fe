"""Kernel specifications and Gram matrices."""

from typing import Literal, Optional

import numpy as np

from pydantic import BaseModel, ConfigDict, Field, model_validator


class KernelSpec(BaseModel):
    """Kernel kind and the parameters that kind uses.

    ``gamma=None`` means "scale": 1 / (n_features * variance of the training
    matrix), resolved when the model is trained.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["linear", "poly", "rbf", "sigmoid"]
    degree: Optional[int] = Field(None, ge=1)
    gamma: Optional[float] = Field(None, gt=0)
    coef0: Optional[float] = None

    @model_validator(mode="after")
    def check_parameters(self) -> "KernelSpec":
        """Parameters are present exactly when the kind needs them."""
        if (self.kind == "poly") != (self.degree is not None):
            raise ValueError("degree is required for poly and only for poly")
        if (self.kind in ("poly", "sigmoid")) != (self.coef0 is not None):
            raise ValueError("coef0 is required for poly/sigmoid and only for them")
        if self.kind == "linear" and self.gamma is not None:
            raise ValueError("linear kernel takes no gamma")
        return self

    def resolved(self, x: np.ndarray) -> "KernelSpec":
        """Copy with ``gamma`` fixed from the training matrix when unset."""
        if self.kind == "linear" or self.gamma is not None:
            return self
        variance = float(np.var(x))
        gamma = 1.0 / (x.shape[1] * variance) if variance > 0 else 1.0
        return self.model_copy(update={"gamma": gamma})

    def label(self) -> str:
        parts = [self.kind]
        if self.degree is not None:
            parts.append(f"degree={self.degree}")
        if self.coef0 is not None:
            parts.append(f"coef0={self.coef0:g}")
        return " ".join(parts)


def kernel_matrix(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """K[i, j] = k(a_i, b_j) for a resolved spec."""
    if spec.kind == "linear":
        return a @ b.T
    if spec.gamma is None:
        raise ValueError("kernel gamma must be resolved before use")
    if spec.kind == "rbf":
        sq = (
            np.sum(a * a, axis=1)[:, np.newaxis]
            + np.sum(b * b, axis=1)[np.newaxis, :]
            - 2.0 * (a @ b.T)
        )
        return np.exp(-spec.gamma * np.maximum(sq, 0.0))
    inner = spec.gamma * (a @ b.T) + spec.coef0
    if spec.kind == "poly":
        return inner**spec.degree
    return np.tanh(inner)
