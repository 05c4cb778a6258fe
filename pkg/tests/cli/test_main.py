"""End-to-end tests of the command-line subcommands on a small synthetic dataset."""

import json

import numpy as np
import pandas as pd
import pytest

from src.dataset import load_dataset
from src.main import main
from src.synth import GroundTruth


SMALL = ["--participants", "8", "--clips", "6", "--common-clips", "5", "--duration", "24"]
FAST_GRID = ["--grid-kernels", "linear", "--grid-c", "1", "--grid-penalty", "l2"]


def _json(path):
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


@pytest.fixture(scope="module")
def dataset_dir(workdir):
    out = workdir / "ds"
    code = main(
        [
            "synth", "--seed", "7", "--out", str(out), *SMALL,
            "--effect", "valence:alpha:4", "--ratings-clips", "30", "--raters", "5",
        ]
    )
    assert code == 0
    return out


@pytest.fixture(scope="module")
def kmeans_run(workdir, dataset_dir):
    out = workdir / "fusion-kmeans"
    code = main(
        [
            "train-eval", "--data", str(dataset_dir), "--modality", "fusion",
            "--labeling", "kmeans", "--out", str(out), *FAST_GRID,
        ]
    )
    assert code == 0
    return out


@pytest.fixture(scope="module")
def threshold_run(workdir, dataset_dir):
    out = workdir / "eeg-threshold"
    args = [
        "train-eval", "--data", str(dataset_dir), "--modality", "eeg",
        "--labeling", "threshold", "--out", str(out), *FAST_GRID,
    ]
    assert main(args) == 0
    return out, args


@pytest.fixture(scope="module")
def stimuli_run(workdir, dataset_dir):
    out = workdir / "stimuli"
    code = main(
        [
            "select-stimuli", "--ratings", str(dataset_dir / "ratings.csv"), "--out", str(out),
            "--k", "3", "--per-cluster", "5", "--k-min", "2", "--k-max", "5",
            "--participants", "4",
        ]
    )
    assert code == 0
    return out


class TestUsage:
    def test_no_arguments(self, capsys):
        assert main([]) == 2
        assert "usage" in capsys.readouterr().err

    def test_unknown_flag(self, capsys):
        assert main(["train-eval", "--data", "x", "--out", "y", "--bogus"]) == 2
        assert "usage" in capsys.readouterr().err

    def test_unknown_command(self):
        assert main(["fit"]) == 2

    def test_version(self):
        assert main(["--version"]) == 0

    def test_missing_dataset_is_validation_error(self, tmp_path, capsys):
        code = main(["ingest", "--data", str(tmp_path / "nope"), "--out", str(tmp_path / "o")])
        assert code == 1
        assert "ingest" in capsys.readouterr().err

    def test_bad_effect(self, tmp_path):
        assert main(["synth", "--out", str(tmp_path), "--effect", "valence:delta:4"]) == 1

    def test_invalid_override(self, tmp_path):
        assert main(["label", "--data", str(tmp_path), "--out", str(tmp_path), "--eda-bands", "12"]) == 1


class TestSynthAndIngest:
    def test_dataset_written(self, dataset_dir):
        ds = load_dataset(dataset_dir)
        assert len(ds) == 8 * 6
        assert (dataset_dir / "manifest.json").is_file()
        assert (dataset_dir / "ratings.csv").is_file()
        config = _json(dataset_dir / "run_config.json")
        assert config["command"] == "synth"
        assert config["settings"]["seed"] == 7

    def test_ingest_summary(self, dataset_dir, tmp_path):
        assert main(["ingest", "--data", str(dataset_dir), "--out", str(tmp_path)]) == 0
        summary = _json(tmp_path / "dataset_summary.json")
        assert summary["trials"] == 48
        assert summary["common_clips"] == ["01", "02", "03", "04", "05"]
        assert set(summary["trials_per_participant"].values()) == {6}
        assert (tmp_path / "run_config.json").is_file()


class TestTrainEval:
    def test_report_has_one_fold_per_common_clip(self, kmeans_run):
        report = _json(kmeans_run / "report.json")
        assert report["modality"] == "fusion"
        assert report["labeling"] == "kmeans"
        assert len(report["reports"]["valence"]["folds"]) == 5
        assert len(report["reports"]["arousal"]["folds"]) == 5
        assert (kmeans_run / "models" / "valence.json").is_file()
        assert len(pd.read_csv(kmeans_run / "summary.csv")) == 1

    def test_rerun_is_byte_identical(self, threshold_run):
        out, args = threshold_run
        before = {p.name: p.read_bytes() for p in out.glob("*.*")}
        assert main(args) == 0
        after = {p.name: p.read_bytes() for p in out.glob("*.*")}
        assert before == after

    def test_planted_effect_recovered(self, threshold_run):
        out, _ = threshold_run
        report = _json(out / "report.json")
        assert report["reports"]["valence"]["mean_accuracy"] >= 0.9

    def test_exported_model_scores_without_training(self, threshold_run, tmp_path):
        out, _ = threshold_run
        model = out / "models" / "valence.json"
        code = main(
            ["train-eval", "--data", str(out.parent / "ds"), "--load-model", str(model),
             "--out", str(tmp_path)]
        )
        assert code == 0
        (scores,) = _json(tmp_path / "evaluation.json").values()
        assert scores["target"] == "valence"
        assert scores["n_test"] == 48
        assert scores["accuracy"] >= 0.9
        assert not (tmp_path / "report.json").exists()


class TestLabel:
    def test_threshold_ratio_matches_manifest(self, dataset_dir, tmp_path):
        code = main(
            ["label", "--data", str(dataset_dir), "--method", "threshold",
             "--threshold", "4.5", "--out", str(tmp_path)]
        )
        assert code == 0
        summary = _json(tmp_path / "labels.json")
        manifest = GroundTruth.model_validate_json((dataset_dir / "manifest.json").read_text())
        for target in ("valence", "arousal"):
            assert summary["class_ratio"][target] == manifest.class_ratio(target, threshold=4.5)
        assert summary["threshold"] == 4.5

    def test_kmeans_writes_quadrants_and_sweep(self, dataset_dir, tmp_path):
        code = main(
            ["label", "--data", str(dataset_dir), "--method", "kmeans",
             "--k-min", "2", "--k-max", "5", "--out", str(tmp_path)]
        )
        assert code == 0
        labels = pd.read_csv(tmp_path / "labels.csv", dtype={"participant_id": str, "clip_id": str})
        assert set(labels["quadrant"]) <= {"LVLA", "LVHA", "HVLA", "HVHA"}
        sweep = _json(tmp_path / "sweep.json")
        assert sweep["space"] == ["valence", "arousal"]
        assert sorted(sweep["sse"]["kmeans"], key=int) == ["2", "3", "4", "5"]

    def test_jobs_from_environment(self, dataset_dir, tmp_path, monkeypatch):
        monkeypatch.setenv("AFFECTBENCH_JOBS", "2")
        assert main(["label", "--data", str(dataset_dir), "--out", str(tmp_path)]) == 0
        assert _json(tmp_path / "run_config.json")["settings"]["jobs"] == 2


class TestSelectStimuli:
    def test_outputs(self, stimuli_run):
        ranking = pd.read_csv(stimuli_run / "stimuli.csv", dtype={"clip_id": str})
        assert len(ranking) == 30
        assert ranking["selected"].sum() == 15
        selected = pd.read_csv(stimuli_run / "selected_clips.csv", dtype={"clip_id": str})
        assert len(selected) == 15
        assert set(selected["n_raters"]) == {5}

    def test_playlist(self, stimuli_run):
        playlist = _json(stimuli_run / "playlist.json")
        assert sorted(playlist) == ["01", "02", "03", "04"]
        assert all(len(clips) == 15 for clips in playlist.values())
        common = set.intersection(*(set(c) for c in playlist.values()))
        assert len(common) >= 9

    def test_missing_score_column_is_reported(self, tmp_path, capsys):
        ratings = tmp_path / "ratings.csv"
        ratings.write_text(
            "clip_id,rater,happiness,fear\n01,r1,3,4\n02,r1,5,1\n", encoding="utf-8"
        )
        code = main(["select-stimuli", "--ratings", str(ratings), "--out", str(tmp_path / "o")])
        assert code == 1
        assert "excitement" in capsys.readouterr().err


class TestStudiesAndStats:
    def test_band_study_then_stats(self, dataset_dir, workdir):
        study = workdir / "bands"
        code = main(
            ["band-study", "--data", str(dataset_dir), "--labeling", "threshold",
             "--out", str(study), *FAST_GRID]
        )
        assert code == 0
        frame = pd.read_csv(study / "study.csv")
        assert frame["condition"].tolist() == ["theta", "alpha", "beta", "gamma"]
        accuracy = frame.set_index("condition")["accuracy_valence"]
        assert accuracy["alpha"] == accuracy.max() >= 0.9

        stats = workdir / "stats"
        assert main(["stats", "--inputs", str(study / "study.json"), "--out", str(stats)]) == 0
        result = _json(stats / "stats.json")
        assert result["anova"]["conditions"] == ["theta", "alpha", "beta", "gamma"]
        assert (result["anova"]["df_factor"], result["anova"]["df_error"]) == (3.0, 12.0)
        assert result["summary"].startswith("F(")

    def test_stats_across_runs(self, threshold_run, kmeans_run, tmp_path):
        out, _ = threshold_run
        code = main(
            ["stats", "--inputs", str(out), str(kmeans_run), "--names", "EEG,Fusion",
             "--out", str(tmp_path)]
        )
        assert code == 0
        anova = _json(tmp_path / "stats.json")["anova"]
        assert anova["conditions"] == ["EEG", "Fusion"]
        assert anova["epsilon_gg"] == 1.0

    def test_stats_name_count_checked(self, threshold_run, tmp_path):
        out, _ = threshold_run
        assert main(["stats", "--inputs", str(out), "--names", "a,b", "--out", str(tmp_path)]) == 1


class TestReport:
    def test_comparison_and_series(self, threshold_run, kmeans_run, stimuli_run, tmp_path):
        out, _ = threshold_run
        code = main(
            ["report", "--inputs", str(out), str(kmeans_run), str(stimuli_run),
             "--out", str(tmp_path)]
        )
        assert code == 0
        table = pd.read_csv(tmp_path / "comparison.csv")
        assert table["row"].tolist() == ["eeg", "class_ratio", "fusion", "class_ratio"]
        assert table["labeling"].tolist() == ["threshold", "threshold", "kmeans", "kmeans"]
        assert _json(tmp_path / "comparison.json")[1]["accuracy_valence"].endswith(":1")

        series = pd.read_csv(tmp_path / "cluster_series.csv")
        sse = series[series["method"] == "kmeans"].sort_values("k")["sse"].to_numpy()
        assert np.all(np.diff(sse) < 0)

    def test_empty_directory(self, tmp_path, capsys):
        empty = tmp_path / "empty"
        empty.mkdir()
        assert main(["report", "--inputs", str(empty), "--out", str(tmp_path / "r")]) == 1
        assert "report.json" in capsys.readouterr().err
