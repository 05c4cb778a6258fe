"""Tests for report table shaping."""

import json

import pytest

from src.exceptions import ReportError
from src.reporting import (
    EXPECTED_FILES,
    ablation_table,
    build_report,
    cluster_series,
    collect_outputs,
    comparison_table,
)


def _run(modality, labeling, acc, ratio="1:1"):
    report = {"mean_accuracy": acc, "mean_f1": acc - 0.1, "class_ratio": ratio, "n_features": 8}
    return {
        "modality": modality,
        "labeling": labeling,
        "reports": {"valence": dict(report), "arousal": dict(report)},
    }


class TestComparisonTable:
    def test_blocks_in_canonical_order(self):
        runs = [
            _run("fusion", "kmeans", 0.7, "2:1"),
            _run("eeg", "kmeans", 0.6, "2:1"),
            _run("e4", "threshold", 0.5, "1.38:1"),
        ]
        frame = comparison_table(runs)
        assert frame["row"].tolist() == ["e4", "class_ratio", "eeg", "fusion", "class_ratio"]
        assert frame["labeling"].tolist() == ["threshold"] * 2 + ["kmeans"] * 3
        assert frame.loc[1, "accuracy_valence"] == "1.38:1"
        assert frame.loc[1, "f1_arousal"] == "1.38:1"
        assert frame.loc[3, "f1_valence"] == pytest.approx(0.6)

    def test_no_runs(self):
        with pytest.raises(ReportError):
            comparison_table([])


def test_cluster_series_sorts_k_numerically():
    sweep = {
        "sse": {"kmeans": {"10": 1.0, "2": 9.0, "3": 4.0}},
        "db_index": {"kmeans": {"10": 0.9, "2": 0.7, "3": 0.5}},
    }
    frame = cluster_series(sweep, "ratings")
    assert frame["k"].tolist() == [2, 3, 10]
    assert frame["db_index"].tolist() == [0.7, 0.5, 0.9]
    assert set(frame["source"]) == {"ratings"}


def test_ablation_table_rows():
    study = {
        "kind": "band",
        "labeling": "kmeans",
        "rows": [
            {"condition": "alpha", "reports": _run("eeg", "kmeans", 0.8)["reports"]},
            {"condition": "beta", "reports": _run("eeg", "kmeans", 0.55)["reports"]},
        ],
    }
    frame = ablation_table(study)
    assert frame["condition"].tolist() == ["alpha", "beta"]
    assert frame["n_features"].tolist() == [8, 8]
    assert frame["accuracy_arousal"].tolist() == [0.8, 0.55]


class TestCollectOutputs:
    def test_empty_directory_lists_expected_files(self, tmp_path):
        with pytest.raises(ReportError) as info:
            collect_outputs([tmp_path])
        for name in EXPECTED_FILES:
            assert name in str(info.value)

    def test_unreadable_json(self, tmp_path):
        (tmp_path / "report.json").write_text("{not json", encoding="utf-8")
        with pytest.raises(ReportError, match="Cannot read"):
            collect_outputs([tmp_path])

    def test_build_report_writes_available_tables(self, tmp_path):
        run_dir = tmp_path / "eeg"
        run_dir.mkdir()
        (run_dir / "report.json").write_text(
            json.dumps(_run("eeg", "threshold", 0.9)), encoding="utf-8"
        )
        written = build_report([run_dir], tmp_path / "out")
        assert sorted(written) == ["comparison"]
        assert (tmp_path / "out" / "comparison.csv").is_file()
        records = json.loads((tmp_path / "out" / "comparison.json").read_text())
        assert [r["row"] for r in records] == ["eeg", "class_ratio"]
