"""Support vector classification: scaling, kernels, solvers and metrics."""

from .kernels import KernelSpec, kernel_matrix
from .metrics import Metrics, metrics
from .model import (
    PENALTIES,
    SVMDocument,
    SVMModel,
    decision_function,
    load_model,
    save_model,
    svm_predict,
    svm_train,
    svm_train_path,
)
from .scaler import MinMaxScaler, scaler_fit, scaler_transform


__all__ = [
    "PENALTIES",
    "KernelSpec",
    "Metrics",
    "MinMaxScaler",
    "SVMDocument",
    "SVMModel",
    "decision_function",
    "kernel_matrix",
    "load_model",
    "metrics",
    "save_model",
    "scaler_fit",
    "scaler_transform",
    "svm_predict",
    "svm_train",
    "svm_train_path",
]
