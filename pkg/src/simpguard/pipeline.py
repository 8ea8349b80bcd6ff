"""End-to-end drivers: configuration, the four run pipelines, training,
evaluation, and run-file persistence.

Run files are deterministic by construction: records are emitted in input
order regardless of worker parallelism, all JSON is written with sorted
keys, and nothing time- or host-dependent is recorded. Two runs with the
same config, model, and data produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .backends import (
    DEFAULT_EMBEDDING_MODEL,
    DEFAULT_JUDGE_MODEL,
    DEFAULT_NLI_MODEL,
    BackendConfig,
    BackendSuite,
    HttpChatTransport,
    HttpClassifierTransport,
    HttpEmbeddingTransport,
    HttpNliTransport,
    MockChat,
    MockClassifier,
    MockEmbedding,
    MockNli,
    ResponseCache,
)
from .corpus import (
    CATEGORY_LABELS,
    DEFAULT_CHUNK_OVERLAP,
    DEFAULT_CHUNK_SIZE,
    GOLD_SPURIOUS,
    NUM_CATEGORIES,
    DistortionRecord,
    Document,
    ErrorCategory,
    GroundingRecord,
    SpuriousRecord,
    chunk_document,
)
from .embedding import DEFAULT_TOP_K, ChunkIndex, build_index
from .ensemble import (
    DEFAULT_DISTORTION_HIDDEN,
    DEFAULT_SPURIOUS_HIDDEN,
    MlpModel,
    TrainConfig,
    init_mlp,
    predict,
    train,
)
from .errors import ConfigError, DataError
from .features import (
    DISTORTION_FEATURE_NAMES,
    SPURIOUS_FEATURE_NAMES,
    FeatureRow,
    assemble_distortion,
    assemble_posthoc,
    assemble_sourced,
    zero_feature_groups,
)
from .metrics import (
    SimplificationExample,
    classification_report,
    evaluate_simplification,
    multilabel_report,
)

RUN_SCHEMA_VERSION = 1

TASK_SOURCED = "sourced"
TASK_POSTHOC = "posthoc"
TASK_DISTORTION = "distortion"
TASK_GROUNDING = "grounding"
RUN_TASKS = (TASK_SOURCED, TASK_POSTHOC, TASK_DISTORTION, TASK_GROUNDING)

_BACKEND_SECTIONS = (
    "chat",
    "embedding",
    "nli",
    "spurious_classifier",
    "distortion_classifier",
)


def _default_backends() -> dict[str, BackendConfig]:
    return {
        "chat": BackendConfig(kind="mock", model=DEFAULT_JUDGE_MODEL),
        "embedding": BackendConfig(kind="mock", model=DEFAULT_EMBEDDING_MODEL),
        "nli": BackendConfig(kind="mock", model=DEFAULT_NLI_MODEL),
        "spurious_classifier": BackendConfig(kind="mock", model="spurious-classifier"),
        "distortion_classifier": BackendConfig(kind="mock", model="distortion-classifier"),
    }


@dataclass(frozen=True)
class PipelineConfig:
    """Everything a run needs beyond its dataset and model files."""

    backends: dict[str, BackendConfig] = field(default_factory=_default_backends)
    chunk_size: int = DEFAULT_CHUNK_SIZE
    chunk_overlap: int = DEFAULT_CHUNK_OVERLAP
    k: int = DEFAULT_TOP_K
    flag_threshold: float = 0.5
    predict_threshold: float = 0.5
    parallelism: int = 4
    cache_dir: str | None = None
    lenient: bool = False
    coerce_noerror: bool = False
    seed: int = 42

    def __post_init__(self) -> None:
        missing = [s for s in _BACKEND_SECTIONS if s not in self.backends]
        if missing:
            raise ConfigError(f"config lacks backend sections: {missing}")
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.parallelism < 1:
            raise ConfigError(f"parallelism must be >= 1, got {self.parallelism}")
        if not 0 < self.chunk_overlap < self.chunk_size:
            raise ConfigError(
                f"need 0 < overlap < chunk_size, got {self.chunk_overlap}/{self.chunk_size}"
            )


def load_pipeline_config(
    path: str | Path | None = None, overrides: Mapping[str, object] | None = None
) -> PipelineConfig:
    """Defaults, optionally updated from a JSON file, then from overrides."""

    raw: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
    if overrides:
        raw = {**raw, **{k: v for k, v in overrides.items() if v is not None}}

    backend_raw = raw.pop("backends", {})
    if not isinstance(backend_raw, dict):
        raise ConfigError("'backends' must be an object of per-service sections")
    backends = _default_backends()
    for name, section in backend_raw.items():
        if name not in _BACKEND_SECTIONS:
            raise ConfigError(
                f"unknown backend section {name!r}; valid: {list(_BACKEND_SECTIONS)}"
            )
        if not isinstance(section, dict):
            raise ConfigError(f"backend section {name!r} must be an object")
        base = asdict(backends[name])
        unknown = set(section) - set(base)
        if unknown:
            raise ConfigError(f"backend {name!r} has unknown keys {sorted(unknown)}")
        base.update(section)
        backends[name] = BackendConfig(**base)

    known = {f for f in PipelineConfig.__dataclass_fields__ if f != "backends"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    return PipelineConfig(backends=backends, **raw)


def config_hash(config: PipelineConfig) -> str:
    """Digest of the semantically relevant configuration.

    Cache location and worker count cannot change any output value, so they
    are excluded; everything else participates.
    """

    payload = asdict(config)
    payload.pop("cache_dir")
    payload.pop("parallelism")
    canonical = json.dumps(payload, sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def build_suite(config: PipelineConfig) -> BackendSuite:
    """Instantiate transports per the config and wire the shared cache."""

    def chat_transport(cfg: BackendConfig):
        if cfg.kind == "http":
            return HttpChatTransport(cfg)
        grounding = str(cfg.options.get("grounding", "echo"))
        return MockChat(model=cfg.model, grounding=grounding)

    def embedding_transport(cfg: BackendConfig):
        if cfg.kind == "http":
            return HttpEmbeddingTransport(cfg)
        return MockEmbedding(model=cfg.model, dim=int(cfg.options.get("dim", 16)))

    def nli_transport(cfg: BackendConfig):
        return HttpNliTransport(cfg) if cfg.kind == "http" else MockNli(model=cfg.model)

    def classifier_transport(cfg: BackendConfig, arity: int):
        if cfg.kind == "http":
            return HttpClassifierTransport(cfg)
        return MockClassifier(model=cfg.model, arity=arity)

    chat_cfg = config.backends["chat"]
    return BackendSuite(
        chat=chat_transport(chat_cfg),
        embedder=embedding_transport(config.backends["embedding"]),
        nli=nli_transport(config.backends["nli"]),
        spurious_classifier=classifier_transport(
            config.backends["spurious_classifier"], 1
        ),
        distortion_classifier=classifier_transport(
            config.backends["distortion_classifier"], NUM_CATEGORIES
        ),
        cache=ResponseCache(config.cache_dir),
        parse_retries=chat_cfg.max_retries,
    )


# ---------------------------------------------------------------------------
# run records and run files


@dataclass(frozen=True)
class RunRecord:
    """One record's outcome in a run file."""

    id: str
    task: str
    scores: tuple[float, ...] = ()
    labels: tuple[str, ...] = ()
    features: tuple[float, ...] | None = None
    output_text: str | None = None
    passthrough: bool | None = None
    lenient_fills: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()

    def to_payload(self) -> dict:
        payload: dict = {
            "id": self.id,
            "task": self.task,
            "scores": list(self.scores),
            "labels": list(self.labels),
            "lenient_fills": list(self.lenient_fills),
            "flags": list(self.flags),
        }
        if self.features is not None:
            payload["features"] = list(self.features)
        if self.output_text is not None:
            payload["output_text"] = self.output_text
        if self.passthrough is not None:
            payload["passthrough"] = self.passthrough
        return payload

    @classmethod
    def from_payload(cls, payload: dict) -> "RunRecord":
        features = payload.get("features")
        return cls(
            id=str(payload["id"]),
            task=str(payload["task"]),
            scores=tuple(float(s) for s in payload.get("scores", ())),
            labels=tuple(str(x) for x in payload.get("labels", ())),
            features=tuple(float(v) for v in features) if features is not None else None,
            output_text=payload.get("output_text"),
            passthrough=payload.get("passthrough"),
            lenient_fills=tuple(payload.get("lenient_fills", ())),
            flags=tuple(payload.get("flags", ())),
        )


def write_run_file(
    records: Sequence[RunRecord],
    task: str,
    path: str | Path,
    *,
    config_digest: str,
    model_digest: str | None,
) -> None:
    if task not in RUN_TASKS:
        raise DataError(f"unknown run task {task!r}")
    header = {
        "format": "simpguard-run",
        "schema_version": RUN_SCHEMA_VERSION,
        "task": task,
        "config_hash": config_digest,
        "model_hash": model_digest,
    }
    lines = [json.dumps(header, sort_keys=True)]
    lines.extend(json.dumps(r.to_payload(), sort_keys=True) for r in records)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_run_file(path: str | Path) -> tuple[dict, list[RunRecord]]:
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            lines = [ln for ln in (line.strip() for line in fh) if ln]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise DataError(f"{path}: empty run file")
    try:
        header = json.loads(lines[0])
    except ValueError as exc:
        raise DataError(f"{path}: bad header: {exc}") from exc
    if not isinstance(header, dict) or header.get("format") != "simpguard-run":
        raise DataError(f"{path}: not a run file")
    if header.get("schema_version") != RUN_SCHEMA_VERSION:
        raise DataError(
            f"{path}: run schema {header.get('schema_version')} unsupported"
        )
    records = []
    for lineno, raw in enumerate(lines[1:], start=2):
        try:
            records.append(RunRecord.from_payload(json.loads(raw)))
        except (ValueError, KeyError) as exc:
            raise DataError(f"{path}:{lineno}: bad run record: {exc}") from exc
    return header, records


def _ordered_map(fn: Callable, items: Sequence, parallelism: int) -> list:
    """Apply fn to every item, preserving input order in the result."""

    if parallelism == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(fn, items))


def _check_model_arity(model: MlpModel, in_dim: int, out_dim: int, task: str) -> None:
    if model.in_dim != in_dim or model.out_dim != out_dim:
        raise DataError(
            f"model dims {model.dims} do not fit the {task} task "
            f"(needs {in_dim} -> {out_dim})"
        )


# ---------------------------------------------------------------------------
# the four pipelines


def run_detect_sourced(
    records: Sequence[SpuriousRecord],
    corpus: Mapping[str, Document],
    model: MlpModel,
    config: PipelineConfig,
    suite: BackendSuite | None = None,
    zero_groups: Sequence[str] = (),
) -> list[RunRecord]:
    """Source-aware detection: assemble features per record and classify."""

    _check_model_arity(model, len(SPURIOUS_FEATURE_NAMES), 1, TASK_SOURCED)
    suite = suite if suite is not None else build_suite(config)

    missing = sorted(
        {
            r.source_doc_id or "<none>"
            for r in records
            if r.source_doc_id is None or r.source_doc_id not in corpus
        }
    )
    if missing and not config.lenient:
        raise DataError(f"unresolved source document ids: {missing}")

    def one(record: SpuriousRecord) -> RunRecord:
        if record.source_doc_id is None or record.source_doc_id not in corpus:
            return RunRecord(
                id=record.id,
                task=TASK_SOURCED,
                flags=("skipped_missing_source",),
            )
        feats = assemble_sourced(
            record,
            corpus,
            suite,
            chunk_size=config.chunk_size,
            overlap=config.chunk_overlap,
            lenient=config.lenient,
        )
        values = zero_feature_groups(feats.values, "spurious", zero_groups)
        return _binary_record(record.id, TASK_SOURCED, values, feats.lenient_fills, model, config)

    return _ordered_map(one, records, config.parallelism)


def _binary_record(
    record_id: str,
    task: str,
    values: tuple[float, ...],
    fills: tuple[str, ...],
    model: MlpModel,
    config: PipelineConfig,
) -> RunRecord:
    outcome = predict(model, np.asarray(values), threshold=config.predict_threshold)
    label = GOLD_SPURIOUS if outcome.labels[0] else "genuine"
    return RunRecord(
        id=record_id,
        task=task,
        scores=outcome.scores,
        labels=(label,),
        features=values,
        lenient_fills=fills,
    )


def run_detect_posthoc(
    records: Sequence[SpuriousRecord],
    index: ChunkIndex,
    model: MlpModel,
    config: PipelineConfig,
    suite: BackendSuite | None = None,
    zero_groups: Sequence[str] = (),
) -> list[RunRecord]:
    """Source-free detection: the index stands in for the missing sources."""

    _check_model_arity(model, len(SPURIOUS_FEATURE_NAMES), 1, TASK_POSTHOC)
    suite = suite if suite is not None else build_suite(config)

    def one(record: SpuriousRecord) -> RunRecord:
        feats = assemble_posthoc(
            record, index, suite, k=config.k, lenient=config.lenient
        )
        values = zero_feature_groups(feats.values, "spurious", zero_groups)
        return _binary_record(record.id, TASK_POSTHOC, values, feats.lenient_fills, model, config)

    return _ordered_map(one, records, config.parallelism)


def run_classify_distortion(
    records: Sequence[DistortionRecord],
    model: MlpModel,
    config: PipelineConfig,
    suite: BackendSuite | None = None,
    zero_groups: Sequence[str] = (),
) -> list[RunRecord]:
    """15-way error classification; labels are emitted as category strings.

    An all-negative prediction is kept empty and flagged unless the config
    asks for coercion to the no-error category.
    """

    _check_model_arity(model, len(DISTORTION_FEATURE_NAMES), NUM_CATEGORIES, TASK_DISTORTION)
    suite = suite if suite is not None else build_suite(config)

    def one(record: DistortionRecord) -> RunRecord:
        feats = assemble_distortion(
            record,
            suite,
            flag_threshold=config.flag_threshold,
            lenient=config.lenient,
        )
        values = zero_feature_groups(feats.values, "distortion", zero_groups)
        outcome = predict(model, np.asarray(values), threshold=config.predict_threshold)
        labels = tuple(
            CATEGORY_LABELS[i] for i, on in enumerate(outcome.labels) if on
        )
        flags: tuple[str, ...] = ()
        if not labels:
            if config.coerce_noerror:
                labels = (ErrorCategory.NO_ERROR.value,)
                flags = ("coerced_noerror",)
            else:
                flags = ("empty_prediction",)
        return RunRecord(
            id=record.id,
            task=TASK_DISTORTION,
            scores=outcome.scores,
            labels=labels,
            features=values,
            lenient_fills=feats.lenient_fills,
            flags=flags,
        )

    return _ordered_map(one, records, config.parallelism)


def run_ground(
    records: Sequence[GroundingRecord],
    config: PipelineConfig,
    suite: BackendSuite | None = None,
) -> list[RunRecord]:
    """Revise each input against its reference; unchanged output means the
    input was already grounded."""

    suite = suite if suite is not None else build_suite(config)

    def one(record: GroundingRecord) -> RunRecord:
        try:
            output = suite.ground_text(record.reference, record.input_text)
        except Exception:
            if not config.lenient:
                raise
            return RunRecord(
                id=record.id,
                task=TASK_GROUNDING,
                output_text=record.input_text,
                passthrough=True,
                lenient_fills=("grounding",),
            )
        return RunRecord(
            id=record.id,
            task=TASK_GROUNDING,
            output_text=output,
            passthrough=output == record.input_text,
        )

    return _ordered_map(one, records, config.parallelism)


def build_corpus_index(
    corpus: Mapping[str, Document],
    config: PipelineConfig,
    suite: BackendSuite | None = None,
) -> ChunkIndex:
    """Chunk every document and embed the pool; this is the retrieval corpus."""

    if not corpus:
        raise DataError("cannot index an empty document collection")
    suite = suite if suite is not None else build_suite(config)
    chunks = []
    for doc in corpus.values():
        chunks.extend(
            chunk_document(doc, chunk_size=config.chunk_size, overlap=config.chunk_overlap)
        )
    return build_index(chunks, suite)


# ---------------------------------------------------------------------------
# training and evaluation


def train_ensemble(
    rows: Sequence[FeatureRow], task: str, train_config: TrainConfig
) -> tuple[MlpModel, list[float]]:
    """Train the meta-classifier for one task from labeled feature rows."""

    if task == "spurious":
        in_dim, out_dim, default_hidden = (
            len(SPURIOUS_FEATURE_NAMES),
            1,
            DEFAULT_SPURIOUS_HIDDEN,
        )
    elif task == "distortion":
        in_dim, out_dim, default_hidden = (
            len(DISTORTION_FEATURE_NAMES),
            NUM_CATEGORIES,
            DEFAULT_DISTORTION_HIDDEN,
        )
    else:
        raise DataError(f"unknown training task {task!r}")
    if not rows:
        raise DataError("no feature rows to train on")
    X = np.empty((len(rows), in_dim))
    Y = np.empty((len(rows), out_dim))
    for i, row in enumerate(rows):
        if len(row.values) != in_dim:
            raise DataError(
                f"row {row.id!r} has {len(row.values)} features, task needs {in_dim}"
            )
        if row.gold is None:
            raise DataError(f"row {row.id!r} lacks a gold label")
        if len(row.gold) != out_dim:
            raise DataError(
                f"row {row.id!r} has {len(row.gold)} gold outputs, task needs {out_dim}"
            )
        X[i] = row.values
        Y[i] = row.gold
    hidden = train_config.hidden_dims or default_hidden
    model = init_mlp((in_dim, *hidden, out_dim), train_config.seed)
    effective = replace(train_config, hidden_dims=tuple(hidden))
    return train(model, X, Y, effective)


def write_loss_trace(trace: Sequence[float], path: str | Path) -> None:
    lines = [
        json.dumps({"epoch": epoch, "loss": loss}, sort_keys=True)
        for epoch, loss in enumerate(trace)
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _binary_eval(
    records: Sequence[RunRecord], gold: Mapping[str, int], threshold: float
) -> dict:
    scores = []
    truths = []
    skipped = 0
    for record in records:
        if "skipped_missing_source" in record.flags:
            skipped += 1
            continue
        if record.id not in gold:
            raise DataError(f"run record {record.id!r} has no gold label")
        scores.append(record.scores[0])
        truths.append(gold[record.id])
    report = classification_report(scores, truths, threshold)
    out = {
        "Count": report.count,
        "Accuracy": report.accuracy,
        "Precision": report.precision,
        "Recall": report.recall,
        "F1-score": report.f1,
        "AUROC": report.auroc,
        "AUPRC": report.auprc,
    }
    if report.flags:
        out["flags"] = list(report.flags)
    if skipped:
        out["skipped_records"] = skipped
    return out


def _distortion_eval(
    records: Sequence[RunRecord],
    gold: Mapping[str, tuple[ErrorCategory, ...]],
    threshold: float,
) -> dict:
    score_rows = []
    gold_rows = []
    for record in records:
        if record.id not in gold:
            raise DataError(f"run record {record.id!r} has no gold labels")
        if len(record.scores) != NUM_CATEGORIES:
            raise DataError(
                f"run record {record.id!r} has {len(record.scores)} scores, "
                f"expected {NUM_CATEGORIES}"
            )
        score_rows.append(list(record.scores))
        wanted = gold[record.id]
        gold_rows.append(
            [1 if category in wanted else 0 for category in ErrorCategory]
        )
    per_label = multilabel_report(score_rows, gold_rows, CATEGORY_LABELS, threshold)
    return {
        "Count": len(score_rows),
        "per_label": {
            label: {"F1": m.f1, "AUC": m.auprc} for label, m in per_label.items()
        },
    }


def load_simplification_gold(path: str | Path) -> dict[str, dict]:
    """Gold file for revision runs: id, source text, reference simplifications."""

    path = Path(path)
    out: dict[str, dict] = {}
    try:
        fh = path.open(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad JSON: {exc}") from exc
            for key in ("id", "source", "references"):
                if key not in obj:
                    raise DataError(f"{path}:{lineno}: missing {key!r}")
            refs = obj["references"]
            if not isinstance(refs, list) or not refs:
                raise DataError(f"{path}:{lineno}: references must be a non-empty list")
            if obj["id"] in out:
                raise DataError(f"{path}:{lineno}: duplicate id {obj['id']!r}")
            out[str(obj["id"])] = {
                "source": str(obj["source"]),
                "references": tuple(str(r) for r in refs),
            }
    if not out:
        raise DataError(f"{path}: no gold records")
    return out


def _grounding_eval(
    records: Sequence[RunRecord],
    gold: Mapping[str, dict],
    frequency_table: Mapping[str, int] | None,
) -> dict:
    examples = []
    passthrough = 0
    for record in records:
        if record.id not in gold:
            raise DataError(f"run record {record.id!r} has no gold entry")
        if record.output_text is None:
            raise DataError(f"run record {record.id!r} has no output text")
        entry = gold[record.id]
        examples.append(
            SimplificationExample(
                source=entry["source"],
                hypothesis=record.output_text,
                references=entry["references"],
            )
        )
        if record.passthrough:
            passthrough += 1
    scores = evaluate_simplification(examples, frequency_table)
    return {
        "Count": scores.count,
        "SARI": scores.sari,
        "BLEU": scores.bleu,
        "FKGL": scores.fkgl,
        "Compression Ratio": scores.compression_ratio,
        "Sentence Splits": scores.sentence_splits,
        "Levenshtein Similarity": scores.levenshtein_similarity,
        "Exact Copies": scores.exact_copies,
        "Additions Proportion": scores.additions_proportion,
        "Deletions Proportion": scores.deletions_proportion,
        "Lexical Complexity Score": scores.lexical_complexity,
        "passthrough_rate": passthrough / len(records) if records else 0.0,
    }


def evaluate_run(
    run_path: str | Path,
    gold_path: str | Path,
    threshold: float = 0.5,
    frequency_table: Mapping[str, int] | None = None,
) -> dict:
    """Score a run file against gold; the report keys mirror the published
    result tables for each task."""

    header, records = read_run_file(run_path)
    task = header.get("task")
    if not records:
        raise DataError(f"{run_path}: run has no records")
    if task in (TASK_SOURCED, TASK_POSTHOC):
        from .corpus import load_spurious_dataset

        gold_records, _ = load_spurious_dataset(gold_path)
        gold = {}
        for r in gold_records:
            if r.gold_label is None:
                raise DataError(f"gold record {r.id!r} lacks a label")
            gold[r.id] = 1 if r.gold_label == GOLD_SPURIOUS else 0
        report = _binary_eval(records, gold, threshold)
    elif task == TASK_DISTORTION:
        from .corpus import load_distortion_dataset

        gold_map: dict[str, tuple[ErrorCategory, ...]] = {}
        for rec in load_distortion_dataset(gold_path):
            if rec.gold_labels is None:
                raise DataError(f"gold record {rec.id!r} lacks labels")
            gold_map[rec.id] = rec.gold_labels
        report = _distortion_eval(records, gold_map, threshold)
    elif task == TASK_GROUNDING:
        report = _grounding_eval(
            records, load_simplification_gold(gold_path), frequency_table
        )
    else:
        raise DataError(f"{run_path}: unknown task {task!r}")
    report["task"] = task
    report["config_hash"] = header.get("config_hash")
    report["model_hash"] = header.get("model_hash")
    return report
