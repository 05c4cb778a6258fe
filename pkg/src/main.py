"""Command-line entry point for affectbench."""

import argparse
import json
import logging
import sys

from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
import structlog

from pydantic import BaseModel, ValidationError

from src import __version__
from src.config import Settings, load_config
from src.dataset import (
    Dataset,
    load_dataset,
    save_dataset,
    validate_cv_readiness,
    write_json,
)
from src.evaluation import (
    CVConfig,
    CVReport,
    band_study,
    channel_study,
    class_ratio,
    evaluate_model,
    labels_for,
    prepare_table,
    run_cv,
)
from src.exceptions import (
    AffectBenchError,
    CVReadinessError,
    DatasetStructureError,
    DegenerateLabelingError,
    ParameterError,
    StatisticsError,
)
from src.features import MODALITIES
from src.labeling import (
    CLUSTER_METHODS,
    LABELINGS,
    STIMULUS_COLUMNS,
    TARGETS,
    check_rating_columns,
    clip_rating_summary,
    cluster_sweep,
    label_dataset,
    plan_playlist,
    select_stimuli,
)
from src.preprocessing import PreprocessConfig, preprocess_dataset
from src.reporting import REPORT_FILE, STATS_FILE, STUDY_FILE, SWEEP_FILE, build_report
from src.stats import METRICS, fold_matrix, format_summary, rm_anova_gg
from src.svm import load_model, save_model
from src.synth import PlantedEffect, SynthSpec, generate
from src.utils.constants import DEFAULT_K_RANGE, DEFAULT_PER_CLUSTER, DEFAULT_STIMULUS_K
from src.utils.seeding import derive_seed


logger = structlog.get_logger()

RUN_CONFIG_FILE = "run_config.json"
LOG_FILE = "affectbench.log"

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


def setup_logging(
    debug: bool = False, log_file: Optional[Path] = None, level_name: str = "WARNING"
) -> None:
    """Configure structured logging with console and, when debugging, file output."""
    level = logging.DEBUG if debug else getattr(logging, level_name)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers = []

    pre_chain = [
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
    ]

    if debug:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        console_handler.setFormatter(
            structlog.stdlib.ProcessorFormatter(
                processor=structlog.dev.ConsoleRenderer(colors=True),
                foreign_pre_chain=pre_chain,
            )
        )
        root_logger.addHandler(console_handler)

        if log_file is not None:
            from logging.handlers import RotatingFileHandler

            log_file.parent.mkdir(parents=True, exist_ok=True)
            file_handler = RotatingFileHandler(
                filename=log_file,
                maxBytes=10 * 1024 * 1024,  # 10MB
                backupCount=2,
                encoding="utf-8",
            )
            file_handler.setLevel(level)
            file_handler.setFormatter(
                structlog.stdlib.ProcessorFormatter(
                    processor=structlog.processors.JSONRenderer(),
                    foreign_pre_chain=pre_chain,
                )
            )
            root_logger.addHandler(file_handler)

        structlog.configure(
            processors=[
                structlog.stdlib.filter_by_level,
                structlog.stdlib.add_log_level,
                structlog.stdlib.PositionalArgumentsFormatter(),
                structlog.processors.TimeStamper(fmt="iso"),
                structlog.processors.StackInfoRenderer(),
                structlog.processors.format_exc_info,
                structlog.processors.UnicodeDecoder(),
                structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
            ],
            context_class=dict,
            logger_factory=structlog.stdlib.LoggerFactory(),
            wrapper_class=structlog.stdlib.BoundLogger,
            cache_logger_on_first_use=False,
        )
    else:
        # JSON lines on stderr at the configured level
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        console_handler.setFormatter(logging.Formatter("%(message)s"))
        root_logger.addHandler(console_handler)

        structlog.configure(
            processors=[
                structlog.stdlib.filter_by_level,
                structlog.stdlib.add_log_level,
                structlog.processors.format_exc_info,
                structlog.processors.UnicodeDecoder(),
                structlog.processors.JSONRenderer(),
            ],
            context_class=dict,
            logger_factory=structlog.stdlib.LoggerFactory(),
            wrapper_class=structlog.stdlib.BoundLogger,
            cache_logger_on_first_use=False,
        )


class RunConfig(BaseModel):
    """Everything needed to regenerate the outputs of one invocation."""

    version: str = __version__
    command: str
    arguments: Dict[str, Any]
    settings: Dict[str, Any]


# Flags that override Settings fields; dest names match the field names.
OVERRIDES = (
    ("--notch-hz", float, "mains notch frequency (Hz)"),
    ("--notch-q", float, "mains notch quality factor"),
    ("--bandpass-order", int, "Butterworth order of the EEG band filters"),
    ("--trim-head-s", float, "seconds dropped at the start of every trace"),
    ("--trim-tail-s", float, "seconds dropped at the end of every trace"),
    ("--ica-remove", str, "ocular component policy: none, auto:1 or manual:i,j"),
    ("--ica-max-iter", int, "FastICA iterations"),
    ("--ica-tol", float, "FastICA tolerance"),
    ("--eeg-seg-len", int, "EEG Welch segment length (samples)"),
    ("--low-rate-seg-len", int, "Welch segment length of EDA/BVP/temp (samples)"),
    ("--welch-overlap", float, "Welch segment overlap fraction"),
    ("--welch-window", str, "Welch taper"),
    ("--eda-bands", int, "EDA spectral bands: 14 (literal) or 13 (70-feature layout)"),
    ("--pulse-mad-k", float, "MAD multiplier of the pulse detector threshold"),
    ("--threshold", float, "low/high split of the self-assessment scores"),
    ("--kmeans-restarts", int, "k-means++ restarts"),
    ("--gmm-reg", float, "GMM covariance ridge"),
    ("--svm-tol", float, "SMO KKT tolerance"),
    ("--svm-max-iter", int, "SMO iteration cap"),
    ("--grid-kernels", str, "comma-separated kernels of the grid"),
    ("--grid-c", str, "comma-separated C values"),
    ("--grid-degree", str, "comma-separated poly degrees"),
    ("--grid-coef0", str, "comma-separated coef0 values"),
    ("--grid-penalty", str, "comma-separated penalties of the linear kernel"),
)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("run options")
    group.add_argument("--seed", type=int, default=None, help="root seed")
    group.add_argument(
        "--jobs", type=int, default=None, help="worker processes (env AFFECTBENCH_JOBS)"
    )
    group.add_argument("--debug", action="store_true", default=None, help="debug logging")
    group.add_argument(
        "--eeg-log-power",
        action="store_true",
        default=None,
        help="report EEG band power as log10",
    )
    overrides = common.add_argument_group("design-decision overrides")
    for flag, kind, text in OVERRIDES:
        overrides.add_argument(flag, type=kind, default=None, help=text)
    return common


def _csv_list(value: Optional[str]) -> Optional[List[str]]:
    if value is None:
        return None
    items = [v.strip() for v in value.split(",") if v.strip()]
    return items or None


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per pipeline stage."""
    parser = argparse.ArgumentParser(
        prog="affectbench",
        description="Emotion-recognition pipeline on recorded or synthetic datasets",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"affectbench {__version__}")
    common = _common_parser()
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name: str, text: str, handler: Callable[[argparse.Namespace, Settings], None]):
        p = sub.add_parser(name, parents=[common], help=text, description=text)
        p.add_argument("--out", type=Path, required=True, help="output directory")
        p.set_defaults(handler=handler)
        return p

    def data(p: argparse.ArgumentParser) -> None:
        p.add_argument("--data", type=Path, required=True, help="dataset root")

    def subsets(p: argparse.ArgumentParser) -> None:
        p.add_argument("--channels", help="comma-separated EEG channels")
        p.add_argument("--bands", help="comma-separated EEG bands")

    def raw(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--skip-preprocess",
            action="store_true",
            help="extract features from the traces as stored",
        )

    p = add("synth", "generate a synthetic dataset with planted effects", cmd_synth)
    p.add_argument("--participants", type=int, default=20)
    p.add_argument("--clips", type=int, default=8, help="clips per participant")
    p.add_argument("--common-clips", type=int, default=5)
    p.add_argument("--duration", type=float, default=60.0, help="seconds per trial")
    p.add_argument(
        "--effect",
        action="append",
        default=[],
        metavar="TARGET:BAND[:CH+CH]:AMP",
        help="planted EEG effect, e.g. valence:alpha:4 or valence:alpha:Oz+Pz:4",
    )
    p.add_argument("--e4-effect", type=float, default=0.0)
    p.add_argument("--e4-target", choices=TARGETS, default="arousal")
    p.add_argument("--noise-sd", type=float, default=1.0)
    p.add_argument("--mains-amplitude", type=float, default=2.0)
    p.add_argument("--ratings-clips", type=int, default=0, help="also write ratings.csv")
    p.add_argument("--raters", type=int, default=10)
    p.add_argument("--ratings-k", type=int, default=3)

    p = add("ingest", "load, validate and summarize a dataset", cmd_ingest)
    data(p)
    p.add_argument("--preprocess", action="store_true", help="also write the conditioned dataset")

    p = add("select-stimuli", "cluster rater scores and rank candidate clips", cmd_select_stimuli)
    p.add_argument("--ratings", type=Path, required=True, help="ratings CSV")
    p.add_argument("--k", type=int, default=DEFAULT_STIMULUS_K)
    p.add_argument("--per-cluster", type=int, default=DEFAULT_PER_CLUSTER)
    p.add_argument("--k-min", type=int, default=DEFAULT_K_RANGE[0])
    p.add_argument("--k-max", type=int, default=DEFAULT_K_RANGE[1])
    p.add_argument("--methods", default=",".join(CLUSTER_METHODS))
    p.add_argument("--participants", type=int, help="also plan a playlist for N participants")
    p.add_argument("--common-per-cluster", type=int, default=3)
    p.add_argument("--random-per-cluster", type=int, default=2)

    p = add("extract-features", "write the feature table of a modality", cmd_extract_features)
    data(p)
    p.add_argument("--modality", choices=MODALITIES, default="fusion")
    subsets(p)
    raw(p)

    p = add("label", "binary valence/arousal labels from the self-assessments", cmd_label)
    data(p)
    p.add_argument("--method", choices=LABELINGS, default="threshold")
    p.add_argument("--k-min", type=int, default=DEFAULT_K_RANGE[0])
    p.add_argument("--k-max", type=int, default=DEFAULT_K_RANGE[1])

    p = add("train-eval", "nested leave-one-clip-out SVM evaluation", cmd_train_eval)
    data(p)
    p.add_argument("--modality", choices=MODALITIES, default="fusion")
    p.add_argument("--labeling", choices=LABELINGS, default="threshold")
    subsets(p)
    raw(p)
    p.add_argument(
        "--load-model",
        type=Path,
        action="append",
        default=[],
        help="score an exported model instead of training (repeatable)",
    )

    p = add("channel-study", "cross-validate each EEG channel set", cmd_channel_study)
    data(p)
    p.add_argument("--labeling", choices=LABELINGS, default="threshold")
    raw(p)

    p = add("band-study", "cross-validate each EEG band", cmd_band_study)
    data(p)
    p.add_argument("--labeling", choices=LABELINGS, default="kmeans")
    raw(p)

    p = add("stats", "repeated-measures ANOVA across evaluated conditions", cmd_stats)
    p.add_argument(
        "--inputs",
        type=Path,
        nargs="+",
        required=True,
        help="train-eval output dirs/report.json files, or one study.json",
    )
    p.add_argument("--names", help="comma-separated condition names")
    p.add_argument("--target", choices=TARGETS, default="valence")
    p.add_argument("--metric", choices=METRICS, default="test_accuracy")

    p = add("report", "render tables and plot series from run outputs", cmd_report)
    p.add_argument("--inputs", type=Path, nargs="+", required=True, help="output directories")

    return parser


def _settings(args: argparse.Namespace) -> Settings:
    overrides: Dict[str, Any] = {
        "seed": args.seed,
        "jobs": args.jobs,
        "debug": args.debug,
        "eeg_log_power": args.eeg_log_power,
    }
    for flag, _, _ in OVERRIDES:
        dest = flag.lstrip("-").replace("-", "_")
        overrides[dest] = getattr(args, dest)
    return load_config(overrides)


def write_run_config(out: Path, args: argparse.Namespace, settings: Settings) -> Path:
    """Write ``run_config.json``; paths are kept exactly as given."""
    arguments = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("handler", "command")
    }
    config = RunConfig(
        command=args.command,
        arguments=arguments,
        settings=settings.model_dump(mode="json"),
    )
    path = Path(out) / RUN_CONFIG_FILE
    write_json(path, config.model_dump(mode="json"))
    return path


def _cv_config(args: argparse.Namespace, settings: Settings) -> CVConfig:
    config = CVConfig.from_settings(settings)
    if getattr(args, "skip_preprocess", False):
        config = replace(config, preprocess=None)
    return config


def _parse_effect(text: str) -> PlantedEffect:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ParameterError(f"Effect {text!r} must look like TARGET:BAND[:CH+CH]:AMP")
    try:
        channels = tuple(parts[2].split("+")) if len(parts) == 4 else None
        return PlantedEffect(
            target=parts[0], band=parts[1], channels=channels, amplitude=float(parts[-1])
        )
    except (ValueError, ValidationError) as e:
        raise ParameterError(f"Invalid effect {text!r}: {e}") from e


def cmd_synth(args: argparse.Namespace, settings: Settings) -> None:
    try:
        spec = SynthSpec(
            participants=args.participants,
            clips=args.clips,
            common_clips=args.common_clips,
            duration_s=args.duration,
            effects=[_parse_effect(e) for e in args.effect],
            e4_effect=args.e4_effect,
            e4_target=args.e4_target,
            noise_sd=args.noise_sd,
            mains_amplitude=args.mains_amplitude,
            ratings_clips=args.ratings_clips,
            raters=args.raters,
            ratings_k=args.ratings_k,
            seed=settings.seed,
        )
    except ValidationError as e:
        raise ParameterError(f"Invalid synthetic dataset parameters: {e}") from e
    generate(spec, args.out)


def cmd_ingest(args: argparse.Namespace, settings: Settings) -> None:
    dataset = load_dataset(args.data)
    try:
        common = validate_cv_readiness(dataset)
    except CVReadinessError:
        logger.warning("Dataset has no common clips; cross-validation will refuse it")
        common = []

    scores = pd.DataFrame([t.assessment.model_dump() for t in dataset])
    summary = {
        "trials": len(dataset),
        "participants": dataset.participants,
        "clips": dataset.clips,
        "common_clips": common,
        "sample_rates": dataset.sample_rates,
        "trials_per_participant": {
            p: sum(1 for t in dataset if t.participant_id == p) for p in dataset.participants
        },
        "scores": {
            c: {"mean": float(scores[c].mean()), "sd": float(scores[c].std(ddof=1))}
            for c in scores.columns
        },
    }
    write_json(args.out / "dataset_summary.json", summary)
    if args.preprocess:
        conditioned = preprocess_dataset(
            dataset, PreprocessConfig.from_settings(settings), jobs=settings.jobs
        )
        save_dataset(conditioned, args.out / "dataset")


def _read_ratings(path: Path) -> pd.DataFrame:
    if not path.is_file():
        raise DatasetStructureError(f"Missing ratings file: {path}", path=str(path))
    return pd.read_csv(path, dtype={"clip_id": str, "rater": str})


def cmd_select_stimuli(args: argparse.Namespace, settings: Settings) -> None:
    ratings = _read_ratings(args.ratings)
    methods = _csv_list(args.methods) or list(CLUSTER_METHODS)
    check_rating_columns(ratings, STIMULUS_COLUMNS)
    points = ratings[list(STIMULUS_COLUMNS)].to_numpy(dtype=float)
    sweep = cluster_sweep(
        points,
        (args.k_min, args.k_max),
        methods,
        seed=derive_seed(settings.seed, "stimuli", "sweep"),
        restarts=settings.kmeans_restarts,
        gmm_reg=settings.gmm_reg,
        jobs=settings.jobs,
    )
    write_json(args.out / SWEEP_FILE, {"space": list(STIMULUS_COLUMNS), **sweep.summary()})

    ranking = select_stimuli(
        ratings,
        k=args.k,
        per_cluster=args.per_cluster,
        seed=derive_seed(settings.seed, "stimuli", "select"),
        restarts=settings.kmeans_restarts,
    )
    ranking.to_frame().to_csv(args.out / "stimuli.csv", index=False, lineterminator="\n")
    chosen = [clip for _, clip, _ in ranking.selected]
    summary = clip_rating_summary(ratings[ratings["clip_id"].isin(chosen)])
    summary.to_csv(args.out / "selected_clips.csv", lineterminator="\n")

    if args.participants:
        width = max(2, len(str(args.participants)))
        names = [f"{p:0{width}d}" for p in range(1, args.participants + 1)]
        playlist = plan_playlist(
            ranking,
            names,
            args.common_per_cluster,
            args.random_per_cluster,
            seed=derive_seed(settings.seed, "stimuli", "playlist"),
        )
        write_json(args.out / "playlist.json", playlist)


def cmd_extract_features(args: argparse.Namespace, settings: Settings) -> None:
    dataset = load_dataset(args.data)
    config = _cv_config(args, settings)
    table = prepare_table(
        dataset,
        args.modality,
        config,
        _csv_list(args.channels),
        _csv_list(args.bands),
        jobs=settings.jobs,
    )
    table.save(args.out / "features.csv")


def _safe_ratio(y01: np.ndarray) -> Optional[str]:
    try:
        return class_ratio(y01)
    except DegenerateLabelingError:
        logger.warning("Target has no high-class samples")
        return None


def cmd_label(args: argparse.Namespace, settings: Settings) -> None:
    dataset = load_dataset(args.data)
    labels = label_dataset(
        dataset,
        args.method,
        threshold=settings.threshold,
        seed=derive_seed(settings.seed, "labels"),
        restarts=settings.kmeans_restarts,
    )
    frame = pd.DataFrame(
        {
            "participant_id": [t.participant_id for t in dataset],
            "clip_id": [t.clip_id for t in dataset],
            "valence_score": [t.assessment.valence for t in dataset],
            "arousal_score": [t.assessment.arousal for t in dataset],
            "valence": labels.valence,
            "arousal": labels.arousal,
        }
    )
    if labels.quadrants is not None:
        frame["quadrant"] = list(labels.quadrants)
    frame.to_csv(args.out / "labels.csv", index=False, lineterminator="\n")

    summary: Dict[str, Any] = {
        "provenance": labels.provenance,
        "threshold": settings.threshold if args.method == "threshold" else None,
        "class_counts": {
            t: {"low": int(np.sum(labels.target(t) == 0)), "high": int(np.sum(labels.target(t) == 1))}
            for t in TARGETS
        },
        "class_ratio": {t: _safe_ratio(labels.target(t)) for t in TARGETS},
        "quadrant_counts": labels.quadrant_counts(),
    }
    write_json(args.out / "labels.json", summary)

    if args.method == "kmeans":
        va = frame[["valence_score", "arousal_score"]].to_numpy(dtype=float)
        sweep = cluster_sweep(
            va,
            (args.k_min, args.k_max),
            seed=derive_seed(settings.seed, "labels", "sweep"),
            restarts=settings.kmeans_restarts,
            gmm_reg=settings.gmm_reg,
            jobs=settings.jobs,
        )
        write_json(args.out / SWEEP_FILE, {"space": ["valence", "arousal"], **sweep.summary()})


def _evaluate_exported(
    dataset: Dataset, paths: Sequence[Path], config: CVConfig, settings: Settings
) -> Dict[str, Any]:
    results: Dict[str, Any] = {}
    for path in paths:
        model, metadata = load_model(path)
        target = metadata.get("target", "valence")
        table = prepare_table(
            dataset,
            metadata.get("modality", "fusion"),
            config,
            metadata.get("channels"),
            metadata.get("bands"),
            jobs=settings.jobs,
        )
        labels = labels_for(dataset, metadata.get("labeling", "threshold"), config, settings.seed)
        if list(labels.keys or ()) != table.keys:
            raise ParameterError("Labels and feature rows are not aligned")
        scores = evaluate_model(model, table, labels.target(target))
        results[str(path)] = {"target": target, "metadata": metadata, **scores}
    return results


def cmd_train_eval(args: argparse.Namespace, settings: Settings) -> None:
    dataset = load_dataset(args.data)
    config = _cv_config(args, settings)
    if args.load_model:
        write_json(
            args.out / "evaluation.json",
            _evaluate_exported(dataset, args.load_model, config, settings),
        )
        return

    result = run_cv(
        dataset,
        args.modality,
        args.labeling,
        config,
        _csv_list(args.channels),
        _csv_list(args.bands),
        seed=settings.seed,
        jobs=settings.jobs,
    )
    write_json(args.out / REPORT_FILE, result.to_document())
    pd.DataFrame([result.summary_row()]).to_csv(
        args.out / "summary.csv", index=False, lineterminator="\n"
    )
    for target, model in result.models.items():
        report = result.reports[target]
        save_model(
            model,
            args.out / "models" / f"{target}.json",
            metadata={
                "target": target,
                "modality": report.modality,
                "labeling": report.label_provenance,
                "channels": report.channels,
                "bands": report.bands,
                "threshold": config.threshold,
                "hyperparameters": model.hyperparameters(),
            },
        )


def _write_study(args: argparse.Namespace, study: Any) -> None:
    write_json(args.out / STUDY_FILE, study.to_document())
    study.to_frame().to_csv(args.out / "study.csv", index=False, lineterminator="\n")


def cmd_channel_study(args: argparse.Namespace, settings: Settings) -> None:
    dataset = load_dataset(args.data)
    study = channel_study(
        dataset, args.labeling, _cv_config(args, settings), settings.seed, settings.jobs
    )
    _write_study(args, study)


def cmd_band_study(args: argparse.Namespace, settings: Settings) -> None:
    dataset = load_dataset(args.data)
    study = band_study(
        dataset, args.labeling, _cv_config(args, settings), settings.seed, settings.jobs
    )
    _write_study(args, study)


def _load_conditions(paths: Sequence[Path], target: str) -> Dict[str, CVReport]:
    """Condition name -> report, from train-eval outputs or one study document."""
    conditions: Dict[str, CVReport] = {}
    for raw in paths:
        path = raw / REPORT_FILE if raw.is_dir() else raw
        if raw.is_dir() and not path.is_file():
            path = raw / STUDY_FILE
        if not path.is_file():
            raise StatisticsError(f"No {REPORT_FILE} or {STUDY_FILE} at {raw}")
        doc = json.loads(path.read_text(encoding="utf-8"))
        try:
            if "rows" in doc:
                for row in doc["rows"]:
                    conditions[row["condition"]] = CVReport.model_validate(row["reports"][target])
            else:
                name = doc["modality"]
                if name in conditions:
                    name = f"{name}:{doc['labeling']}"
                conditions[name] = CVReport.model_validate(doc["reports"][target])
        except (KeyError, ValidationError) as e:
            raise StatisticsError(f"{path} has no usable {target} report: {e}") from e
    return conditions


def cmd_stats(args: argparse.Namespace, settings: Settings) -> None:
    conditions = _load_conditions(args.inputs, args.target)
    names = _csv_list(args.names) or list(conditions)
    if len(names) != len(conditions):
        raise StatisticsError(f"{len(names)} names given for {len(conditions)} conditions")
    matrix, clips = fold_matrix(list(conditions.values()), args.metric)
    result = rm_anova_gg(matrix, names)
    write_json(
        args.out / STATS_FILE,
        {
            "target": args.target,
            "metric": args.metric,
            "clips": clips,
            "anova": result.model_dump(mode="json"),
            "summary": format_summary(result, percent=True),
        },
    )


def cmd_report(args: argparse.Namespace, settings: Settings) -> None:
    build_report(args.inputs, args.out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand.

    Returns:
        0 on success, 1 when the pipeline rejects its inputs, 2 on usage errors
    """
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    setup_logging(debug=bool(args.debug), log_file=args.out / LOG_FILE)
    try:
        settings = _settings(args)
        setup_logging(
            debug=settings.debug, log_file=args.out / LOG_FILE, level_name=settings.log_level
        )
        logger.info("Starting command", command=args.command, version=__version__)
        args.out.mkdir(parents=True, exist_ok=True)
        args.handler(args, settings)
        write_run_config(args.out, args, settings)
        logger.info("Command finished", command=args.command, out=str(args.out))
    except AffectBenchError as e:
        logger.error("Command failed", command=args.command, error=str(e))
        print(f"affectbench {args.command}: {e}", file=sys.stderr)
        return EXIT_ERROR
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def run() -> None:
    """Synchronous entry point for setuptools."""
    sys.exit(main())


if __name__ == "__main__":
    run()
