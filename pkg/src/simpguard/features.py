"""Fixed-order feature vectors feeding the meta-classifiers.

The orderings below are a frozen public contract: serialized feature files
and trained models both depend on them, so changing them is a schema break.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .backends.suite import BackendSuite
from .corpus import (
    CATEGORY_LABELS,
    DEFAULT_CHUNK_OVERLAP,
    DEFAULT_CHUNK_SIZE,
    NUM_CATEGORIES,
    DistortionRecord,
    Document,
    SpuriousRecord,
    chunk_document,
)
from .embedding import (
    DEFAULT_TOP_K,
    ChunkIndex,
    cosine_similarity,
    retrieve_top_k,
)
from .errors import BackendError, ConfigError, DataError

log = logging.getLogger(__name__)

FEATURE_SCHEMA_VERSION = 1

SPURIOUS_FEATURE_NAMES: tuple[str, ...] = (
    "classifier_prob",
    "max_cosine",
    "nli_entailment_max",
    "nli_contradiction_max",
    "judge_spuriousness",
    "judge_over_generalization",
    "judge_contradiction",
    "judge_vagueness",
)

DISTORTION_FEATURE_NAMES: tuple[str, ...] = tuple(
    [f"prob:{label}" for label in CATEGORY_LABELS]
    + [f"flag:{label}" for label in CATEGORY_LABELS]
)

# Index groups that can be zeroed out for ablation runs.
SPURIOUS_FEATURE_GROUPS: dict[str, tuple[int, ...]] = {
    "classifier": (0,),
    "cosine": (1,),
    "nli": (2, 3),
    "judge": (4, 5, 6, 7),
}
DISTORTION_FEATURE_GROUPS: dict[str, tuple[int, ...]] = {
    "classifier": tuple(range(NUM_CATEGORIES)),
    "judge": tuple(range(NUM_CATEGORIES, 2 * NUM_CATEGORIES)),
}

DEFAULT_FLAG_THRESHOLD = 0.5
LENIENT_FILL_VALUE = 0.5


@dataclass(frozen=True)
class SpuriousFeatures:
    """Ordered 8-vector for the binary task; see SPURIOUS_FEATURE_NAMES.

    ``lenient_fills`` names the component groups that were replaced with the
    neutral fill value after a backend failure.
    """

    values: tuple[float, ...]
    lenient_fills: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.values) != len(SPURIOUS_FEATURE_NAMES):
            raise ValueError(
                f"expected {len(SPURIOUS_FEATURE_NAMES)} features, got {len(self.values)}"
            )
        for i, v in enumerate(self.values):
            lo = -1.0 if i == 1 else 0.0
            if not lo <= v <= 1.0:
                raise ValueError(
                    f"feature {SPURIOUS_FEATURE_NAMES[i]}={v} outside [{lo}, 1]"
                )


@dataclass(frozen=True)
class DistortionFeatures:
    """Ordered 30-vector: 15 classifier probabilities, then 15 binary flags.

    Flags are 0/1 except when the judge group was lenient-filled, in which
    case the whole flag block holds the neutral fill value.
    """

    values: tuple[float, ...]
    lenient_fills: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.values) != 2 * NUM_CATEGORIES:
            raise ValueError(
                f"expected {2 * NUM_CATEGORIES} features, got {len(self.values)}"
            )
        for i, v in enumerate(self.values):
            if not 0.0 <= v <= 1.0:
                raise ValueError(
                    f"feature {DISTORTION_FEATURE_NAMES[i]}={v} outside [0, 1]"
                )
        if "judge" not in self.lenient_fills:
            for v in self.values[NUM_CATEGORIES:]:
                if v not in (0.0, 1.0):
                    raise ValueError(f"flag value {v} is not binary")


class _Fills:
    """Collects lenient-fill markers; re-raises when lenient mode is off."""

    def __init__(self, lenient: bool) -> None:
        self.lenient = lenient
        self.labels: list[str] = []

    def run(self, label: str, fn, fallback):
        try:
            return fn()
        except BackendError as exc:
            if not self.lenient:
                raise
            log.warning("lenient fill for %s: %s", label, exc)
            self.labels.append(label)
            return fallback

    def as_tuple(self) -> tuple[str, ...]:
        return tuple(self.labels)


def _nli_maxima(
    backends: BackendSuite, premises: Sequence[str], hypothesis: str
) -> tuple[float, float]:
    scores = [backends.nli_score(p, hypothesis) for p in premises]
    return (
        max(s.entailment for s in scores),
        max(s.contradiction for s in scores),
    )


def assemble_sourced(
    record: SpuriousRecord,
    corpus: Mapping[str, Document],
    backends: BackendSuite,
    *,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    overlap: int = DEFAULT_CHUNK_OVERLAP,
    lenient: bool = False,
) -> SpuriousFeatures:
    """Features for the setting where the true source document is known.

    The source is chunked and the cosine and NLI components each keep their
    maximum across chunks; the judge sees the full source text.
    """

    if record.source_doc_id is None:
        raise DataError(f"record {record.id!r} has no source_doc_id")
    doc = corpus.get(record.source_doc_id)
    if doc is None:
        raise DataError(
            f"record {record.id!r} references unknown document {record.source_doc_id!r}"
        )
    chunks = chunk_document(doc, chunk_size=chunk_size, overlap=overlap)
    chunk_texts = [c.text for c in chunks]
    fills = _Fills(lenient)

    classifier_prob = fills.run(
        "classifier",
        lambda: backends.spurious_prob(record.input_text),
        LENIENT_FILL_VALUE,
    )

    def cosine() -> float:
        vectors = backends.embed([record.input_text] + chunk_texts)
        query, rest = vectors[0], vectors[1:]
        return max(cosine_similarity(query, v) for v in rest)

    max_cosine = fills.run("cosine", cosine, LENIENT_FILL_VALUE)
    ent_max, con_max = fills.run(
        "nli",
        lambda: _nli_maxima(backends, chunk_texts, record.input_text),
        (LENIENT_FILL_VALUE, LENIENT_FILL_VALUE),
    )
    judge = fills.run(
        "judge",
        lambda: backends.judge_spurious(doc.text, record.input_text).as_tuple(),
        (LENIENT_FILL_VALUE,) * 4,
    )
    return SpuriousFeatures(
        values=(classifier_prob, max_cosine, ent_max, con_max) + tuple(judge),
        lenient_fills=fills.as_tuple(),
    )


def assemble_posthoc(
    record: SpuriousRecord,
    corpus_index: ChunkIndex,
    backends: BackendSuite,
    *,
    k: int = DEFAULT_TOP_K,
    lenient: bool = False,
) -> SpuriousFeatures:
    """Features for the setting without the source: retrieval reconstructs it.

    The top-k retrieved chunks stand in for the source; the judge sees them
    concatenated in retrieval order, separated by blank lines.
    """

    if len(corpus_index) == 0:
        raise DataError("retrieval index is empty")
    fills = _Fills(lenient)

    classifier_prob = fills.run(
        "classifier",
        lambda: backends.spurious_prob(record.input_text),
        LENIENT_FILL_VALUE,
    )

    hits = fills.run(
        "retrieval",
        lambda: retrieve_top_k(
            corpus_index, backends.embed([record.input_text])[0], k=k
        ),
        None,
    )
    if hits is None:
        # Without retrieval there is no source context at all.
        fills.labels.extend(["cosine", "nli", "judge"])
        return SpuriousFeatures(
            values=(classifier_prob,) + (LENIENT_FILL_VALUE,) * 7,
            lenient_fills=fills.as_tuple(),
        )

    hit_texts = [h.chunk.text for h in hits]
    max_cosine = hits[0].similarity
    ent_max, con_max = fills.run(
        "nli",
        lambda: _nli_maxima(backends, hit_texts, record.input_text),
        (LENIENT_FILL_VALUE, LENIENT_FILL_VALUE),
    )
    source_context = "\n\n".join(hit_texts)
    judge = fills.run(
        "judge",
        lambda: backends.judge_spurious(source_context, record.input_text).as_tuple(),
        (LENIENT_FILL_VALUE,) * 4,
    )
    return SpuriousFeatures(
        values=(classifier_prob, max_cosine, ent_max, con_max) + tuple(judge),
        lenient_fills=fills.as_tuple(),
    )


def assemble_distortion(
    record: DistortionRecord,
    backends: BackendSuite,
    *,
    flag_threshold: float = DEFAULT_FLAG_THRESHOLD,
    lenient: bool = False,
) -> DistortionFeatures:
    """Classifier probabilities plus thresholded judge flags, both in
    canonical category order. A judge score equal to the threshold flags 1."""

    fills = _Fills(lenient)
    probs = fills.run(
        "classifier",
        lambda: backends.distortion_probs(
            record.source_sentence, record.simplified_sentence
        ),
        (LENIENT_FILL_VALUE,) * NUM_CATEGORIES,
    )

    def flags() -> tuple[float, ...]:
        scores = backends.judge_distortion(
            record.source_sentence, record.simplified_sentence
        )
        return tuple(1.0 if s >= flag_threshold else 0.0 for s in scores.values)

    flag_block = fills.run("judge", flags, (LENIENT_FILL_VALUE,) * NUM_CATEGORIES)
    return DistortionFeatures(
        values=tuple(probs) + tuple(flag_block),
        lenient_fills=fills.as_tuple(),
    )


def zero_feature_groups(
    values: Sequence[float], task: str, groups: Iterable[str]
) -> tuple[float, ...]:
    """Return a copy with the named ablation groups zeroed."""

    table = SPURIOUS_FEATURE_GROUPS if task == "spurious" else DISTORTION_FEATURE_GROUPS
    out = list(values)
    for group in groups:
        if group not in table:
            raise ConfigError(
                f"unknown feature group {group!r} for {task}; "
                f"valid: {sorted(table)}"
            )
        for i in table[group]:
            out[i] = 0.0
    return tuple(out)


@dataclass(frozen=True)
class FeatureRow:
    """One record's features as stored in a feature file."""

    id: str
    values: tuple[float, ...]
    gold: tuple[int, ...] | None = None
    lenient_fills: tuple[str, ...] = ()


def _expected_width(task: str) -> int:
    if task == "spurious":
        return len(SPURIOUS_FEATURE_NAMES)
    if task == "distortion":
        return len(DISTORTION_FEATURE_NAMES)
    raise ValueError(f"unknown feature task {task!r}")


def save_feature_rows(rows: Sequence[FeatureRow], task: str, path: str | Path) -> None:
    """Write a feature file: one header line, then one record per line."""

    width = _expected_width(task)
    path = Path(path)
    lines = [
        json.dumps(
            {
                "format": "simpguard-features",
                "schema_version": FEATURE_SCHEMA_VERSION,
                "task": task,
                "feature_count": width,
            },
            sort_keys=True,
        )
    ]
    for row in rows:
        if len(row.values) != width:
            raise DataError(
                f"row {row.id!r} has {len(row.values)} features, expected {width}"
            )
        payload = {
            "id": row.id,
            "features": list(row.values),
            "gold": list(row.gold) if row.gold is not None else None,
            "lenient_fills": list(row.lenient_fills),
        }
        lines.append(json.dumps(payload, sort_keys=True))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_feature_rows(path: str | Path) -> tuple[str, list[FeatureRow]]:
    """Read a feature file back; returns (task, rows)."""

    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            raw_lines = [ln for ln in (line.strip() for line in fh) if ln]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not raw_lines:
        raise DataError(f"{path}: empty feature file")
    try:
        header = json.loads(raw_lines[0])
    except ValueError as exc:
        raise DataError(f"{path}: bad header line: {exc}") from exc
    if header.get("format") != "simpguard-features":
        raise DataError(f"{path}: not a feature file")
    if header.get("schema_version") != FEATURE_SCHEMA_VERSION:
        raise DataError(
            f"{path}: schema version {header.get('schema_version')} unsupported "
            f"(expected {FEATURE_SCHEMA_VERSION})"
        )
    task = header.get("task")
    width = _expected_width(task)
    rows: list[FeatureRow] = []
    for lineno, raw in enumerate(raw_lines[1:], start=2):
        try:
            obj = json.loads(raw)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad JSON: {exc}") from exc
        values = tuple(float(v) for v in obj["features"])
        if len(values) != width:
            raise DataError(
                f"{path}:{lineno}: {len(values)} features, expected {width}"
            )
        gold = obj.get("gold")
        rows.append(
            FeatureRow(
                id=str(obj["id"]),
                values=values,
                gold=tuple(int(g) for g in gold) if gold is not None else None,
                lenient_fills=tuple(obj.get("lenient_fills", ())),
            )
        )
    return task, rows
