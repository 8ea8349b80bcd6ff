"""Command line entry point.

Exit codes: 0 on success, 1 for data/config/metric problems (including
usage errors), 2 for backend failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import (
    load_distortion_dataset,
    load_documents,
    load_grounding_dataset,
    load_spurious_dataset,
)
from .embedding import load_index, save_index
from .ensemble import TrainConfig, load_model, model_digest, save_model
from .errors import BackendError, ConfigError, DataError, SimpGuardError
from .features import (
    FeatureRow,
    assemble_distortion,
    assemble_sourced,
    load_feature_rows,
    save_feature_rows,
)
from .metrics import load_frequency_table
from .pipeline import (
    TASK_DISTORTION,
    TASK_GROUNDING,
    TASK_POSTHOC,
    TASK_SOURCED,
    PipelineConfig,
    build_corpus_index,
    build_suite,
    config_hash,
    evaluate_run,
    load_pipeline_config,
    run_classify_distortion,
    run_detect_posthoc,
    run_detect_sourced,
    run_ground,
    train_ensemble,
    write_loss_trace,
    write_run_file,
)


def _add_config_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file")
    sub.add_argument("--cache-dir", dest="cache_dir", help="response cache directory")
    sub.add_argument("--parallelism", type=int, help="worker thread bound")
    sub.add_argument(
        "--lenient",
        action="store_const",
        const=True,
        default=None,
        help="fill failed feature components with neutral values instead of aborting",
    )
    sub.add_argument("--chunk-size", dest="chunk_size", type=int)
    sub.add_argument("--chunk-overlap", dest="chunk_overlap", type=int)
    sub.add_argument("--k", type=int, help="retrieved chunks per query")
    sub.add_argument(
        "--flag-threshold", dest="flag_threshold", type=float,
        help="score cutoff for the per-category judge flags",
    )
    sub.add_argument(
        "--predict-threshold", dest="predict_threshold", type=float,
        help="probability cutoff for predicted labels",
    )
    sub.add_argument("--seed", type=int)


_CONFIG_KEYS = (
    "cache_dir",
    "parallelism",
    "lenient",
    "chunk_size",
    "chunk_overlap",
    "k",
    "flag_threshold",
    "predict_threshold",
    "seed",
)


def _config_from_args(args: argparse.Namespace, **extra) -> PipelineConfig:
    overrides = {key: getattr(args, key, None) for key in _CONFIG_KEYS}
    overrides.update({k: v for k, v in extra.items() if v is not None})
    return load_pipeline_config(args.config, overrides)


def _zero_groups(args: argparse.Namespace) -> tuple[str, ...]:
    raw = getattr(args, "zero_features", None)
    if not raw:
        return ()
    return tuple(part.strip() for part in raw.split(",") if part.strip())


def _add_zero_features_flag(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--zero-features",
        help="comma-separated feature groups to zero before classification "
        "(ablation; e.g. 'judge,nli')",
    )


def _maybe_save_features(rows, task: str, path: str | None) -> None:
    if path:
        save_feature_rows(rows, task, path)
        print(f"wrote {len(rows)} feature rows to {path}")


def _cmd_detect_sourced(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    records, corpus = load_spurious_dataset(args.records, args.documents)
    model = load_model(args.model)
    suite = build_suite(config)
    results = run_detect_sourced(
        records, corpus, model, config, suite, zero_groups=_zero_groups(args)
    )
    write_run_file(
        results,
        TASK_SOURCED,
        args.out,
        config_digest=config_hash(config),
        model_digest=model_digest(model),
    )
    if args.features_out:
        rows = [
            FeatureRow(id=r.id, values=r.features, lenient_fills=r.lenient_fills)
            for r in results
            if r.features is not None
        ]
        _maybe_save_features(rows, "spurious", args.features_out)
    print(f"wrote {len(results)} run records to {args.out}")
    return 0


def _cmd_detect_posthoc(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    records, _ = load_spurious_dataset(args.records)
    model = load_model(args.model)
    suite = build_suite(config)
    if args.index:
        index = load_index(args.index)
    elif args.documents:
        index = build_corpus_index(load_documents(args.documents), config, suite)
    else:
        raise ConfigError("detect-posthoc needs --index or --documents")
    if args.save_index:
        save_index(index, args.save_index)
        print(f"wrote index with {len(index)} chunks to {args.save_index}")
    results = run_detect_posthoc(
        records, index, model, config, suite, zero_groups=_zero_groups(args)
    )
    write_run_file(
        results,
        TASK_POSTHOC,
        args.out,
        config_digest=config_hash(config),
        model_digest=model_digest(model),
    )
    print(f"wrote {len(results)} run records to {args.out}")
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    config = _config_from_args(args, coerce_noerror=args.coerce_noerror)
    records = load_distortion_dataset(args.records)
    model = load_model(args.model)
    suite = build_suite(config)
    results = run_classify_distortion(
        records, model, config, suite, zero_groups=_zero_groups(args)
    )
    write_run_file(
        results,
        TASK_DISTORTION,
        args.out,
        config_digest=config_hash(config),
        model_digest=model_digest(model),
    )
    empty = sum(1 for r in results if "empty_prediction" in r.flags)
    if empty:
        print(f"note: {empty} records predicted no category (kept empty)")
    print(f"wrote {len(results)} run records to {args.out}")
    return 0


def _cmd_ground(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    records = load_grounding_dataset(args.records)
    suite = build_suite(config)
    results = run_ground(records, config, suite)
    write_run_file(
        results,
        TASK_GROUNDING,
        args.out,
        config_digest=config_hash(config),
        model_digest=None,
    )
    passthrough = sum(1 for r in results if r.passthrough)
    print(
        f"wrote {len(results)} run records to {args.out} "
        f"({passthrough} passed through unchanged)"
    )
    return 0


def _assemble_training_rows(args: argparse.Namespace, config: PipelineConfig):
    """Build labeled feature rows from raw records when no feature file is given."""

    suite = build_suite(config)
    rows: list[FeatureRow] = []
    if args.task == "spurious":
        if not args.documents:
            raise ConfigError("training from records needs --documents for source texts")
        records, corpus = load_spurious_dataset(args.records, args.documents)
        for record in records:
            if record.gold_label is None:
                raise DataError(f"record {record.id!r} lacks a gold label")
            feats = assemble_sourced(
                record,
                corpus,
                suite,
                chunk_size=config.chunk_size,
                overlap=config.chunk_overlap,
                lenient=config.lenient,
            )
            rows.append(
                FeatureRow(
                    id=record.id,
                    values=feats.values,
                    gold=(1 if record.gold_label == "spurious" else 0,),
                    lenient_fills=feats.lenient_fills,
                )
            )
    else:
        from .corpus import ErrorCategory

        for record in load_distortion_dataset(args.records):
            if record.gold_labels is None:
                raise DataError(f"record {record.id!r} lacks gold labels")
            feats = assemble_distortion(
                record,
                suite,
                flag_threshold=config.flag_threshold,
                lenient=config.lenient,
            )
            gold = tuple(
                1 if category in record.gold_labels else 0
                for category in ErrorCategory
            )
            rows.append(
                FeatureRow(
                    id=record.id,
                    values=feats.values,
                    gold=gold,
                    lenient_fills=feats.lenient_fills,
                )
            )
    return rows


def _cmd_train(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    if args.features:
        task, rows = load_feature_rows(args.features)
        if args.task and args.task != task:
            raise ConfigError(
                f"--task {args.task} conflicts with feature file task {task!r}"
            )
    else:
        if not args.task:
            raise ConfigError("training from records needs --task")
        if not args.records:
            raise ConfigError("train needs --features or --records")
        task = args.task
        rows = _assemble_training_rows(args, config)
        _maybe_save_features(rows, task, args.features_out)

    hidden = None
    if args.hidden:
        hidden = tuple(int(part) for part in args.hidden.split(",") if part.strip())
    train_config = TrainConfig(
        learning_rate=args.learning_rate,
        epochs=args.epochs,
        batch_size=args.batch_size,
        seed=args.seed if args.seed is not None else config.seed,
        hidden_dims=hidden,
        class_weighting=args.class_weighting,
    )
    model, trace = train_ensemble(rows, task, train_config)
    save_model(model, args.model_out)
    print(
        f"trained {task} model {model.dims} on {len(rows)} rows: "
        f"loss {trace[0]:.6f} -> {trace[-1]:.6f}"
    )
    print(f"wrote model to {args.model_out} (digest {model_digest(model)[:16]})")
    if args.trace_out:
        write_loss_trace(trace, args.trace_out)
        print(f"wrote loss trace to {args.trace_out}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    table = load_frequency_table(args.frequency_table) if args.frequency_table else None
    report = evaluate_run(
        args.run, args.gold, threshold=args.threshold, frequency_table=table
    )
    if args.out:
        Path(args.out).write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        print(f"wrote report to {args.out}")
    for key, value in report.items():
        if key == "per_label":
            print("per_label:")
            for label, cell in value.items():
                shown = {
                    k: (round(v, 6) if isinstance(v, float) else v)
                    for k, v in cell.items()
                }
                print(f"  {label}: {shown}")
        elif isinstance(value, float):
            print(f"{key}: {value:.6f}")
        else:
            print(f"{key}: {value}")
    return 0


def _cmd_index(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    corpus = load_documents(args.documents)
    index = build_corpus_index(corpus, config)
    save_index(index, args.out)
    print(f"wrote index with {len(index)} chunks to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simpguard",
        description="Detect spurious simplifications, classify information "
        "distortions, and ground texts against their sources.",
    )
    subs = parser.add_subparsers(dest="command", metavar="command")

    sourced = subs.add_parser(
        "detect-sourced", help="detect spurious texts using their source documents"
    )
    sourced.add_argument("--records", required=True, help="JSONL spurious dataset")
    sourced.add_argument("--documents", required=True, help="JSONL source documents")
    sourced.add_argument("--model", required=True, help="trained spurious model file")
    sourced.add_argument("--out", required=True, help="run file to write")
    sourced.add_argument("--features-out", dest="features_out", help="also save features")
    _add_zero_features_flag(sourced)
    _add_config_flags(sourced)
    sourced.set_defaults(func=_cmd_detect_sourced)

    posthoc = subs.add_parser(
        "detect-posthoc", help="detect spurious texts without per-record sources"
    )
    posthoc.add_argument("--records", required=True)
    posthoc.add_argument("--model", required=True)
    posthoc.add_argument("--out", required=True)
    posthoc.add_argument("--index", help="prebuilt chunk index file")
    posthoc.add_argument("--documents", help="documents to index when no --index")
    posthoc.add_argument("--save-index", dest="save_index", help="persist the built index")
    _add_zero_features_flag(posthoc)
    _add_config_flags(posthoc)
    posthoc.set_defaults(func=_cmd_detect_posthoc)

    classify = subs.add_parser(
        "classify", help="classify information distortion categories"
    )
    classify.add_argument("--records", required=True, help="JSONL distortion dataset")
    classify.add_argument("--model", required=True, help="trained distortion model file")
    classify.add_argument("--out", required=True)
    classify.add_argument(
        "--coerce-noerror",
        dest="coerce_noerror",
        action="store_const",
        const=True,
        default=None,
        help="map empty predictions to the no-error category instead of flagging",
    )
    _add_zero_features_flag(classify)
    _add_config_flags(classify)
    classify.set_defaults(func=_cmd_classify)

    ground = subs.add_parser(
        "ground", help="revise inputs to be grounded in their reference documents"
    )
    ground.add_argument("--records", required=True, help="JSONL grounding dataset")
    ground.add_argument("--out", required=True)
    _add_config_flags(ground)
    ground.set_defaults(func=_cmd_ground)

    train_cmd = subs.add_parser("train", help="train a meta-classifier")
    train_cmd.add_argument("--features", help="feature file from a previous run")
    train_cmd.add_argument("--records", help="raw dataset to assemble features from")
    train_cmd.add_argument("--documents", help="source documents (spurious task)")
    train_cmd.add_argument("--task", choices=("spurious", "distortion"))
    train_cmd.add_argument("--model-out", dest="model_out", required=True)
    train_cmd.add_argument("--trace-out", dest="trace_out", help="loss trace file")
    train_cmd.add_argument("--features-out", dest="features_out")
    train_cmd.add_argument(
        "--learning-rate", dest="learning_rate", type=float, default=0.05
    )
    train_cmd.add_argument("--epochs", type=int, default=300)
    train_cmd.add_argument("--batch-size", dest="batch_size", type=int, default=32)
    train_cmd.add_argument(
        "--hidden", help="comma-separated hidden layer sizes, e.g. '16,8'"
    )
    train_cmd.add_argument(
        "--class-weighting",
        dest="class_weighting",
        action="store_true",
        help="weight positive examples by the negative/positive ratio",
    )
    _add_config_flags(train_cmd)
    train_cmd.set_defaults(func=_cmd_train)

    evaluate = subs.add_parser("evaluate", help="score a run file against gold data")
    evaluate.add_argument("--run", required=True, help="run file to score")
    evaluate.add_argument("--gold", required=True, help="gold dataset for the run's task")
    evaluate.add_argument("--threshold", type=float, default=0.5)
    evaluate.add_argument(
        "--frequency-table",
        dest="frequency_table",
        help="word-rank table for the lexical complexity score",
    )
    evaluate.add_argument("--out", help="write the report as JSON")
    evaluate.set_defaults(func=_cmd_evaluate)

    index_cmd = subs.add_parser("index", help="build and persist a chunk index")
    index_cmd.add_argument("--documents", required=True)
    index_cmd.add_argument("--out", required=True)
    _add_config_flags(index_cmd)
    index_cmd.set_defaults(func=_cmd_index)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if not hasattr(args, "func"):
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return 2
    except SimpGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
