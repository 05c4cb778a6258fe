"""Tests for the channel and band ablations on planted synthetic data."""

import pytest

from src.evaluation import CVConfig, GridSpec, band_study, channel_study
from src.synth import PlantedEffect, SynthSpec, build_dataset
from src.utils.constants import CHANNEL_STUDY_SETS


CONFIG = CVConfig(grid=GridSpec(kernels=("linear",), C=(10.0,), penalty=("l2",)))


def _planted(effect: PlantedEffect, seed: int):
    spec = SynthSpec(
        participants=12, clips=6, common_clips=4, duration_s=16.0, effects=[effect], seed=seed
    )
    return build_dataset(spec)[0]


@pytest.fixture(scope="module")
def oz_dataset():
    return _planted(PlantedEffect(target="valence", band="alpha", channels=("Oz",), amplitude=4.0), 11)


@pytest.fixture(scope="module")
def beta_dataset():
    return _planted(PlantedEffect(target="valence", band="beta", amplitude=4.0), 12)


class TestChannelStudy:
    @pytest.fixture(scope="class")
    def study(self, oz_dataset):
        return channel_study(oz_dataset, "threshold", CONFIG, seed=0, targets=("valence",))

    def test_nine_rows_with_four_bands_per_channel(self, study):
        frame = study.to_frame()
        assert len(frame) == 9
        assert frame["n_features"].tolist() == [4 * len(s) for s in CHANNEL_STUDY_SETS]
        assert frame["condition"].iloc[0] == "Fp1+Fp2+Fz"

    def test_sets_with_oz_rank_first(self, study):
        frame = study.to_frame().set_index("condition")
        with_oz = frame[[("Oz" in c.split("+")) for c in frame.index]]["accuracy_valence"]
        without = frame[[("Oz" not in c.split("+")) for c in frame.index]]["accuracy_valence"]
        assert with_oz.min() >= 0.9
        assert without.max() < with_oz.min()
        assert frame.loc["Fp1+Fp2+Fz", "accuracy_valence"] <= 0.8

    def test_document_keeps_fold_reports(self, study):
        doc = study.to_document()
        assert doc["kind"] == "channel"
        assert len(doc["rows"][0]["reports"]["valence"]["folds"]) == 4


class TestBandStudy:
    @pytest.fixture(scope="class")
    def study(self, beta_dataset):
        return band_study(beta_dataset, config=CONFIG, seed=0, targets=("valence",))

    def test_four_rows_of_eight_features(self, study):
        frame = study.to_frame()
        assert frame["condition"].tolist() == ["theta", "alpha", "beta", "gamma"]
        assert frame["n_features"].tolist() == [8, 8, 8, 8]
        assert study.labeling == "kmeans"

    def test_planted_band_ranks_first(self, study):
        frame = study.to_frame().set_index("condition")
        assert frame["accuracy_valence"].idxmax() == "beta"
        assert frame.loc["beta", "accuracy_valence"] >= 0.9
