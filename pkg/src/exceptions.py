"""Custom exceptions for affectbench."""

from typing import Optional


class AffectBenchError(Exception):
    """Base exception for affectbench."""

    pass


class ConfigurationError(AffectBenchError):
    """Configuration-related errors."""

    pass


class InvalidConfigError(ConfigurationError):
    """Configuration is invalid."""

    pass


class ParameterError(AffectBenchError):
    """An operation was called with parameters outside its domain."""

    pass


class DatasetError(AffectBenchError):
    """Dataset-related errors."""

    pass


class DatasetStructureError(DatasetError):
    """A file or directory required by the dataset layout is missing."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path


class DatasetValidationError(DatasetError):
    """Dataset content violates a data-model invariant."""

    def __init__(self, message: str, trial_id: Optional[str] = None):
        super().__init__(message)
        self.trial_id = trial_id


class CVReadinessError(DatasetError):
    """Dataset cannot be cross-validated (no common clips)."""

    pass


class SignalError(AffectBenchError):
    """Signal-processing errors."""

    pass


class FilterDesignError(SignalError):
    """A designed filter is unstable or cannot be designed."""

    pass


class TrimError(SignalError):
    """A trace is too short to be trimmed."""

    def __init__(self, message: str, trace: Optional[str] = None):
        super().__init__(message)
        self.trace = trace


class IcaRankError(SignalError):
    """Channel covariance is rank deficient for the requested decomposition."""

    pass


class FeatureExtractionError(AffectBenchError):
    """Feature extraction failed."""

    pass


class ClusteringError(AffectBenchError):
    """Clustering-related errors."""

    pass


class DegenerateClusteringError(ClusteringError):
    """Cluster geometry does not support the requested interpretation."""

    pass


class SingularCovarianceError(ClusteringError):
    """A mixture component covariance is singular despite regularization."""

    pass


class ModelError(AffectBenchError):
    """Classifier training or prediction failed."""

    pass


class SingleClassError(ModelError):
    """Training labels contain a single class."""

    pass


class EvaluationError(AffectBenchError):
    """Evaluation protocol errors."""

    pass


class DegenerateLabelingError(EvaluationError):
    """Ground-truth labels contain a single class overall."""

    pass


class StatisticsError(AffectBenchError):
    """Statistical analysis errors."""

    pass


class ReportError(AffectBenchError):
    """Report inputs are missing or malformed."""

    pass
