"""Dataset model and on-disk format."""

from .io import (
    DEFAULT_SAMPLE_RATES,
    dump_json,
    load_dataset,
    save_dataset,
    validate_cv_readiness,
    write_json,
)
from .models import (
    SIGNAL_KINDS,
    ClipInfo,
    Dataset,
    SelfAssessment,
    SignalTrace,
    Trial,
)


__all__ = [
    "ClipInfo",
    "DEFAULT_SAMPLE_RATES",
    "Dataset",
    "SIGNAL_KINDS",
    "SelfAssessment",
    "SignalTrace",
    "Trial",
    "dump_json",
    "load_dataset",
    "save_dataset",
    "validate_cv_readiness",
    "write_json",
]
