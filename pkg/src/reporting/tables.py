"""Reshape run outputs into comparison, cluster-series and ablation tables.

Nothing here fits or scores anything; every number comes from a JSON
artifact written by an earlier subcommand.
"""

import json

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence, Tuple, Union

import pandas as pd
import structlog

from src.dataset import write_json
from src.exceptions import ReportError


logger = structlog.get_logger()

REPORT_FILE = "report.json"
SWEEP_FILE = "sweep.json"
STUDY_FILE = "study.json"
STATS_FILE = "stats.json"
EXPECTED_FILES = (REPORT_FILE, SWEEP_FILE, STUDY_FILE, STATS_FILE)

MODALITY_ORDER = ("eeg", "e4", "fusion")
LABELING_ORDER = ("threshold", "kmeans")
CLASS_RATIO_ROW = "class_ratio"

PathLike = Union[str, Path]


def _rank(value: str, order: Sequence[str]) -> Tuple[int, str]:
    return (order.index(value) if value in order else len(order), value)


def comparison_table(runs: Sequence[Mapping[str, Any]]) -> pd.DataFrame:
    """Modality rows grouped into one block per labeling.

    Each block ends with a class-ratio row whose metric cells hold the
    low:high ratio of the target, repeated under accuracy and F1.

    Args:
        runs: ``report.json`` documents of ``train-eval``
    """
    if not runs:
        raise ReportError(f"No {REPORT_FILE} inputs for the comparison table")

    ordered = sorted(
        runs,
        key=lambda r: (_rank(r["labeling"], LABELING_ORDER), _rank(r["modality"], MODALITY_ORDER)),
    )
    targets = list(ordered[0]["reports"])
    records: List[Dict[str, Any]] = []
    block: List[Mapping[str, Any]] = []

    def close(runs_in_block: List[Mapping[str, Any]]) -> None:
        reports = runs_in_block[0]["reports"]
        record: Dict[str, Any] = {"labeling": runs_in_block[0]["labeling"], "row": CLASS_RATIO_ROW}
        for metric in ("accuracy", "f1"):
            for t in targets:
                record[f"{metric}_{t}"] = reports[t]["class_ratio"]
        records.append(record)

    for run in ordered:
        if block and run["labeling"] != block[0]["labeling"]:
            close(block)
            block = []
        block.append(run)
        record = {"labeling": run["labeling"], "row": run["modality"]}
        for metric, key in (("accuracy", "mean_accuracy"), ("f1", "mean_f1")):
            for t in targets:
                record[f"{metric}_{t}"] = run["reports"][t][key]
        records.append(record)
    close(block)

    columns = ["labeling", "row"] + [f"{m}_{t}" for m in ("accuracy", "f1") for t in targets]
    return pd.DataFrame.from_records(records, columns=columns)


def cluster_series(sweep: Mapping[str, Any], source: str = "") -> pd.DataFrame:
    """SSE and Davies-Bouldin index against k, one row per (method, k)."""
    rows = []
    for method, sse in sweep.get("sse", {}).items():
        db = sweep.get("db_index", {}).get(method, {})
        for k in sorted(sse, key=int):
            rows.append(
                {
                    "source": source,
                    "method": method,
                    "k": int(k),
                    "sse": float(sse[k]),
                    "db_index": float(db.get(k, float("nan"))),
                }
            )
    return pd.DataFrame(rows, columns=["source", "method", "k", "sse", "db_index"])


def ablation_table(study: Mapping[str, Any]) -> pd.DataFrame:
    """One row per channel set or band, accuracy and F1 per target."""
    records = []
    targets: List[str] = []
    for row in study["rows"]:
        reports = row["reports"]
        targets = targets or list(reports)
        first = next(iter(reports.values()))
        record: Dict[str, Any] = {
            "labeling": study["labeling"],
            "condition": row["condition"],
            "n_features": first["n_features"],
        }
        for metric, key in (("accuracy", "mean_accuracy"), ("f1", "mean_f1")):
            for t in targets:
                record[f"{metric}_{t}"] = reports[t][key]
        records.append(record)
    columns = ["labeling", "condition", "n_features"] + [
        f"{m}_{t}" for m in ("accuracy", "f1") for t in targets
    ]
    return pd.DataFrame.from_records(records, columns=columns)


def anova_table(results: Sequence[Mapping[str, Any]]) -> pd.DataFrame:
    rows = [
        {
            "target": r["target"],
            "metric": r["metric"],
            "conditions": "+".join(r["anova"]["conditions"]),
            "f_value": r["anova"]["f_value"],
            "df_factor_gg": r["anova"]["df_factor_gg"],
            "df_error_gg": r["anova"]["df_error_gg"],
            "epsilon_gg": r["anova"]["epsilon_gg"],
            "p_value": r["anova"]["p_value"],
            "p_uncorrected": r["anova"]["p_uncorrected"],
            "summary": r["summary"],
        }
        for r in results
    ]
    return pd.DataFrame(rows)


@dataclass
class RunOutputs:
    """JSON artifacts found in a set of output directories."""

    runs: List[Dict[str, Any]] = field(default_factory=list)
    sweeps: List[Tuple[str, Dict[str, Any]]] = field(default_factory=list)
    studies: List[Dict[str, Any]] = field(default_factory=list)
    stats: List[Dict[str, Any]] = field(default_factory=list)


def _read(path: Path) -> Dict[str, Any]:
    try:
        return json.loads(path.read_text(encoding="utf-8"))  # type: ignore[no-any-return]
    except (OSError, ValueError) as e:
        raise ReportError(f"Cannot read {path}: {e}") from e


def collect_outputs(dirs: Sequence[PathLike]) -> RunOutputs:
    """Read every known artifact from each directory.

    Raises:
        ReportError: If a directory is missing or holds none of the expected files
    """
    if not dirs:
        raise ReportError(f"No input directories; expected any of {list(EXPECTED_FILES)}")
    outputs = RunOutputs()
    for raw in dirs:
        d = Path(raw)
        found = [name for name in EXPECTED_FILES if (d / name).is_file()]
        if not found:
            raise ReportError(
                f"{d} holds no run outputs; expected any of {list(EXPECTED_FILES)}"
            )
        if REPORT_FILE in found:
            outputs.runs.append(_read(d / REPORT_FILE))
        if SWEEP_FILE in found:
            outputs.sweeps.append((d.name, _read(d / SWEEP_FILE)))
        if STUDY_FILE in found:
            outputs.studies.append(_read(d / STUDY_FILE))
        if STATS_FILE in found:
            outputs.stats.append(_read(d / STATS_FILE))
        logger.debug("Run outputs collected", directory=str(d), files=found)
    return outputs


def write_table(frame: pd.DataFrame, out: PathLike, stem: str) -> List[Path]:
    """Write ``<stem>.csv`` and ``<stem>.json`` (list of records)."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, json_path = out / f"{stem}.csv", out / f"{stem}.json"
    frame.to_csv(csv_path, index=False, lineterminator="\n")
    write_json(json_path, frame.to_dict(orient="records"))
    return [csv_path, json_path]


def build_report(dirs: Sequence[PathLike], out: PathLike) -> Dict[str, List[Path]]:
    """Render every table the collected outputs support.

    Returns:
        Written files by table name
    """
    outputs = collect_outputs(dirs)
    written: Dict[str, List[Path]] = {}

    if outputs.runs:
        written["comparison"] = write_table(comparison_table(outputs.runs), out, "comparison")
    if outputs.sweeps:
        series = pd.concat(
            [cluster_series(sweep, source) for source, sweep in outputs.sweeps],
            ignore_index=True,
        )
        written["cluster_series"] = write_table(series, out, "cluster_series")
    for kind in sorted({s["kind"] for s in outputs.studies}):
        frames = [ablation_table(s) for s in outputs.studies if s["kind"] == kind]
        written[f"ablation_{kind}"] = write_table(
            pd.concat(frames, ignore_index=True), out, f"ablation_{kind}"
        )
    if outputs.stats:
        written["anova"] = write_table(anova_table(outputs.stats), out, "anova")

    logger.info("Report written", out=str(out), tables=sorted(written))
    return written
