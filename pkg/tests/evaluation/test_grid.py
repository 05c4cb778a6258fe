"""Tests for grid enumeration."""

from collections import Counter

import pytest

from src.config.settings import Settings
from src.evaluation import GridPoint, GridSpec
from src.exceptions import ParameterError


class TestGridSpec:
    def test_default_grid_is_pruned_to_45(self):
        points = GridSpec().points()
        assert len(points) == 45
        assert Counter(p.kernel.kind for p in points) == {
            "linear": 6,
            "poly": 27,
            "rbf": 3,
            "sigmoid": 9,
        }

    def test_no_duplicates(self):
        points = GridSpec().points()
        assert len(set(points)) == len(points)

    def test_canonical_order(self):
        points = GridSpec().points()
        assert [p.label() for p in points[:4]] == [
            "linear C=1 l1",
            "linear C=1 l2",
            "linear C=10 l1",
            "linear C=10 l2",
        ]
        poly = [p for p in points if p.kernel.kind == "poly"]
        assert (poly[0].C, poly[0].kernel.degree, poly[0].kernel.coef0) == (1.0, 3, 0.0)
        assert (poly[1].kernel.degree, poly[1].kernel.coef0) == (3, 0.01)
        assert points[-1].kernel.kind == "sigmoid" and points[-1].C == 100.0

    def test_only_linear_gets_l1(self):
        assert {p.kernel.kind for p in GridSpec().points() if p.penalty == "l1"} == {"linear"}

    def test_kernel_order_ignores_input_order(self):
        a = GridSpec(kernels=("rbf", "linear"), C=(1.0,), penalty=("l2",))
        assert [p.kernel.kind for p in a.points()] == ["linear", "rbf"]

    def test_single_point(self):
        grid = GridSpec(kernels=("rbf",), C=(10.0,))
        assert len(grid) == 1

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"kernels": ("cubic",)},
            {"kernels": ()},
            {"C": ()},
            {"kernels": ("poly",), "degree": ()},
            {"kernels": ("sigmoid",), "coef0": ()},
            {"penalty": ("l3",)},
        ],
    )
    def test_invalid_sets(self, kwargs):
        with pytest.raises(ParameterError):
            GridSpec(**kwargs)

    def test_from_settings(self):
        grid = GridSpec.from_settings(Settings(grid_kernels="linear,rbf", grid_c="1,10"))
        assert len(grid) == 2 * 2 + 2


def test_grid_point_dict_round_trip():
    for point in GridSpec().points():
        assert GridPoint.from_dict(point.as_dict()) == point
