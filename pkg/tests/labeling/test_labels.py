"""Tests for threshold and quadrant labeling."""

import numpy as np
import pytest

from src.exceptions import ClusteringError, DegenerateClusteringError, ParameterError
from src.labeling import label_by_quadrant, label_by_threshold, label_dataset
from tests.factories import build_small_dataset


class TestThreshold:
    def test_reported_clip_mean_is_low(self):
        labels = label_by_threshold(np.array([[4.28, 6.0]]))
        assert labels.valence.tolist() == [0]
        assert labels.arousal.tolist() == [1]

    def test_extremes_and_boundary(self):
        labels = label_by_threshold(np.array([[1.0, 1.0], [9.0, 9.0], [4.5, 4.5]]))
        assert labels.valence.tolist() == [0, 1, 1]
        assert labels.arousal.tolist() == [0, 1, 1]
        assert labels.provenance == "threshold"

    def test_arousal_never_changes_valence(self):
        rng = np.random.default_rng(0)
        va = rng.uniform(1, 9, (50, 2))
        shuffled = va.copy()
        shuffled[:, 1] = rng.uniform(1, 9, 50)
        assert np.array_equal(
            label_by_threshold(va).valence, label_by_threshold(shuffled).valence
        )

    def test_custom_threshold(self):
        assert label_by_threshold(np.array([[5.0, 5.0]]), threshold=6.0).valence.tolist() == [0]

    def test_shape_checked(self):
        with pytest.raises(ParameterError):
            label_by_threshold(np.ones((3, 3)))


def _quadrant_blobs(seed=0, per_blob=50, sd=0.5):
    rng = np.random.default_rng(seed)
    centres = {"LVLA": (2.5, 2.5), "LVHA": (2.5, 7.0), "HVLA": (7.0, 2.5), "HVHA": (7.0, 7.0)}
    points, names = [], []
    for name, centre in centres.items():
        points.append(rng.normal(centre, sd, (per_blob, 2)))
        names.extend([name] * per_blob)
    return np.vstack(points), names


class TestQuadrant:
    def test_symmetric_corners(self):
        offsets = np.array([[0.0, 0.0], [0.1, 0.0], [0.0, 0.1], [-0.1, -0.1]])
        corners = [(3.0, 3.0), (3.0, 6.0), (6.0, 3.0), (6.0, 6.0)]
        va = np.vstack([np.array(c) + offsets for c in corners])
        labels, model = label_by_quadrant(va, seed=0)
        assert labels.quadrants[0::4] == ("LVLA", "LVHA", "HVLA", "HVHA")
        assert labels.valence[0::4].tolist() == [0, 0, 1, 1]
        assert labels.arousal[0::4].tolist() == [0, 1, 0, 1]
        assert model.k == 4

    def test_recovers_generator_quadrants(self):
        va, truth = _quadrant_blobs()
        labels, _ = label_by_quadrant(va, seed=3)
        assert np.mean(np.array(labels.quadrants) == np.array(truth)) >= 0.98
        assert labels.provenance == "kmeans"

    def test_marginal_counts_match_generator(self):
        va, truth = _quadrant_blobs(seed=1, sd=0.3)
        labels, _ = label_by_quadrant(va, seed=0)
        assert int(labels.valence.sum()) == sum(name.startswith("HV") for name in truth)
        assert int(labels.arousal.sum()) == sum(name.endswith("HA") for name in truth)
        assert labels.quadrant_counts() == {"LVLA": 50, "LVHA": 50, "HVLA": 50, "HVHA": 50}

    def test_identical_points_are_degenerate(self):
        with pytest.raises(DegenerateClusteringError, match="threshold"):
            label_by_quadrant(np.full((10, 2), 5.0))

    def test_too_few_samples(self):
        with pytest.raises(ClusteringError):
            label_by_quadrant(np.ones((3, 2)))


class TestLabelDataset:
    def test_keys_follow_dataset(self):
        ds = build_small_dataset(2, 2)
        labels = label_dataset(ds, "threshold")
        assert labels.keys == tuple(t.key for t in ds)
        assert labels.valence.tolist() == [1, 1, 1, 1]

    def test_unknown_labeling(self):
        with pytest.raises(ParameterError):
            label_dataset(build_small_dataset(1, 1), "median")
