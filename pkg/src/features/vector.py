"""Feature vectors with named slots."""

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.exceptions import FeatureExtractionError


@dataclass(frozen=True)
class FeatureSlot:
    """Position descriptor: name, signal family and definition tag."""

    name: str
    family: str
    tag: str


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Ordered values with a parallel layout."""

    values: np.ndarray
    layout: Tuple[FeatureSlot, ...]

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float).ravel()
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "layout", tuple(self.layout))
        if values.size != len(self.layout):
            raise FeatureExtractionError(
                f"{values.size} values for {len(self.layout)} layout slots"
            )
        if not np.all(np.isfinite(values)):
            bad = [s.name for s, v in zip(self.layout, values) if not np.isfinite(v)]
            raise FeatureExtractionError(f"Non-finite features: {bad}")

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def names(self) -> List[str]:
        return [slot.name for slot in self.layout]

    def as_dict(self) -> Dict[str, float]:
        return {slot.name: float(v) for slot, v in zip(self.layout, self.values)}

    @classmethod
    def concat(cls, vectors: Sequence["FeatureVector"]) -> "FeatureVector":
        """Concatenate blocks; slot names must stay unique."""
        if not vectors:
            return cls(values=np.empty(0), layout=())
        layout = tuple(slot for v in vectors for slot in v.layout)
        names = [slot.name for slot in layout]
        if len(set(names)) != len(names):
            raise FeatureExtractionError("Duplicate feature names in layout")
        return cls(values=np.concatenate([v.values for v in vectors]), layout=layout)
