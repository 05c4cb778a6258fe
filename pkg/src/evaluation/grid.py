"""Hyper-parameter grid with pruned canonical enumeration."""

from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

from src.config.settings import Settings
from src.exceptions import ParameterError
from src.svm import PENALTIES, KernelSpec
from src.utils.constants import GRID_C, GRID_COEF0, GRID_DEGREE, GRID_KERNELS, GRID_PENALTY


@dataclass(frozen=True)
class GridPoint:
    """One classifier configuration."""

    kernel: KernelSpec
    C: float
    penalty: str = "l2"

    def as_dict(self) -> Dict[str, Any]:
        return {
            "kernel": self.kernel.kind,
            "C": self.C,
            "degree": self.kernel.degree,
            "coef0": self.kernel.coef0,
            "penalty": self.penalty,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GridPoint":
        return cls(
            kernel=KernelSpec(
                kind=data["kernel"], degree=data.get("degree"), coef0=data.get("coef0")
            ),
            C=float(data["C"]),
            penalty=data.get("penalty", "l2"),
        )

    def label(self) -> str:
        return f"{self.kernel.label()} C={self.C:g} {self.penalty}"


@dataclass(frozen=True)
class GridSpec:
    """Value sets of the search.

    ``degree`` is enumerated only for poly, ``coef0`` only for poly and
    sigmoid, and the L1 penalty only for the linear kernel.
    """

    kernels: Tuple[str, ...] = GRID_KERNELS
    C: Tuple[float, ...] = GRID_C
    degree: Tuple[int, ...] = GRID_DEGREE
    coef0: Tuple[float, ...] = GRID_COEF0
    penalty: Tuple[str, ...] = GRID_PENALTY

    def __post_init__(self) -> None:
        for name in ("kernels", "C", "degree", "coef0", "penalty"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        unknown = [k for k in self.kernels if k not in GRID_KERNELS]
        if unknown:
            raise ParameterError(f"Unknown kernels in grid: {unknown}")
        bad_penalty = [p for p in self.penalty if p not in PENALTIES]
        if bad_penalty:
            raise ParameterError(f"Unknown penalties in grid: {bad_penalty}")
        if not self.kernels or not self.C:
            raise ParameterError("Grid needs at least one kernel and one C value")
        if "poly" in self.kernels and not self.degree:
            raise ParameterError("Grid with poly kernel needs degree values")
        if any(k in self.kernels for k in ("poly", "sigmoid")) and not self.coef0:
            raise ParameterError("Grid with poly/sigmoid kernels needs coef0 values")
        if "linear" in self.kernels and not self.penalty:
            raise ParameterError("Grid with linear kernel needs penalty values")

    @classmethod
    def from_settings(cls, settings: Settings) -> "GridSpec":
        return cls(
            kernels=tuple(settings.grid_kernels),
            C=tuple(settings.grid_c),
            degree=tuple(settings.grid_degree),
            coef0=tuple(settings.grid_coef0),
            penalty=tuple(settings.grid_penalty),
        )

    def points(self) -> List[GridPoint]:
        """Pruned enumeration: kernel order, then C, then the kernel's own parameters."""
        out: List[GridPoint] = []
        kernels = [k for k in GRID_KERNELS if k in self.kernels]
        for kind in kernels:
            for c in self.C:
                if kind == "linear":
                    out.extend(
                        GridPoint(KernelSpec(kind="linear"), float(c), p)
                        for p in _ordered(self.penalty, GRID_PENALTY)
                    )
                elif kind == "poly":
                    out.extend(
                        GridPoint(KernelSpec(kind="poly", degree=int(d), coef0=float(r)), float(c))
                        for d in self.degree
                        for r in self.coef0
                    )
                elif kind == "rbf":
                    out.append(GridPoint(KernelSpec(kind="rbf"), float(c)))
                else:
                    out.extend(
                        GridPoint(KernelSpec(kind="sigmoid", coef0=float(r)), float(c))
                        for r in self.coef0
                    )
        return out

    def __len__(self) -> int:
        return len(self.points())


def _ordered(values: Sequence[str], canonical: Sequence[str]) -> List[str]:
    return [v for v in canonical if v in values]
