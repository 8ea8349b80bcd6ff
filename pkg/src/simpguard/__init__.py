"""Spurious-simplification detection, distortion classification, and
reference-grounded revision for scientific text simplification."""

from .corpus import (
    CATEGORY_LABELS,
    NUM_CATEGORIES,
    DistortionRecord,
    Document,
    ErrorCategory,
    GroundingRecord,
    SpuriousRecord,
    chunk_text,
)
from .ensemble import (
    MlpClassifier,
    MlpModel,
    TrainConfig,
    init_mlp,
    load_model,
    predict,
    save_model,
    train,
)
from .errors import (
    BackendError,
    ConfigError,
    DataError,
    MetricError,
    ScoreParseError,
    SimpGuardError,
    TrainingError,
)
from .features import (
    assemble_distortion,
    assemble_posthoc,
    assemble_sourced,
)
from .metrics import (
    bleu,
    classification_report,
    evaluate_simplification,
    fkgl,
    levenshtein_similarity,
    multilabel_report,
    sari,
)
from .pipeline import (
    PipelineConfig,
    build_suite,
    evaluate_run,
    load_pipeline_config,
    run_classify_distortion,
    run_detect_posthoc,
    run_detect_sourced,
    run_ground,
    train_ensemble,
)

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "CATEGORY_LABELS",
    "ConfigError",
    "DataError",
    "DistortionRecord",
    "Document",
    "ErrorCategory",
    "GroundingRecord",
    "MetricError",
    "MlpClassifier",
    "MlpModel",
    "NUM_CATEGORIES",
    "PipelineConfig",
    "ScoreParseError",
    "SimpGuardError",
    "SpuriousRecord",
    "TrainConfig",
    "TrainingError",
    "assemble_distortion",
    "assemble_posthoc",
    "assemble_sourced",
    "bleu",
    "build_suite",
    "chunk_text",
    "classification_report",
    "evaluate_run",
    "evaluate_simplification",
    "fkgl",
    "init_mlp",
    "levenshtein_similarity",
    "load_model",
    "load_pipeline_config",
    "multilabel_report",
    "predict",
    "run_classify_distortion",
    "run_detect_posthoc",
    "run_detect_sourced",
    "run_ground",
    "sari",
    "save_model",
    "train",
    "train_ensemble",
    "__version__",
]
