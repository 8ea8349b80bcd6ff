"""Dataset types, tokenization, sentence splitting, and overlapping-window chunking.

All types are immutable after load and safe to share across threads.
Dataset files are UTF-8 JSON Lines, one record per line (see README for
the field layout of each file kind).
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import ConfigError, DataError

DEFAULT_CHUNK_SIZE = 100
DEFAULT_CHUNK_OVERLAP = 50

GOLD_SPURIOUS = "spurious"
GOLD_GENUINE = "genuine"

_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?])\s+")


class ErrorCategory(enum.Enum):
    """The closed 15-way information-distortion taxonomy.

    Definition order is the canonical order of every 15-dimensional score
    or label vector in this package. ``value`` is the exact label string
    used in dataset files, model prompts, and reports.
    """

    NO_ERROR = "No error"
    A1_RANDOM_GENERATION = "A1. Random generation"
    A2_SYNTAX_ERROR = "A2. Syntax error"
    A3_CONTRADICTION = "A3. Contradiction"
    A4_PUNCTUATION_GRAMMAR = "A4. Simple punctuation / grammar errors"
    A5_REDUNDANCY = "A5. Redundancy"
    B1_FORMAT_MISALIGNMENT = "B1. Format misalignement"
    B2_PROMPT_MISALIGNMENT = "B2. Prompt misalignement"
    C1_FACTUALITY_HALLUCINATION = "C1. Factuality hallucination"
    C2_FAITHFULNESS_HALLUCINATION = "C2. Faithfulness hallucination"
    C3_TOPIC_SHIFT = "C3. Topic shift"
    D11_OVERGENERALIZATION = "D1.1. Overgeneralization"
    D12_OVERSPECIFICATION = "D1.2 Overspecification of Concepts"
    D21_LOSS_OF_INFORMATIVE_CONTENT = "D2.1. Loss of Informative Content"
    D22_OUT_OF_SCOPE_GENERATION = "D2.2. Out-of-Scope Generation"

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def from_label(cls, label: str) -> "ErrorCategory":
        try:
            return cls(label)
        except ValueError:
            valid = ", ".join(repr(c.value) for c in cls)
            raise DataError(
                f"unknown error category {label!r}; valid categories are: {valid}"
            ) from None


CATEGORY_LABELS: tuple[str, ...] = tuple(c.value for c in ErrorCategory)
NUM_CATEGORIES = len(CATEGORY_LABELS)


@dataclass(frozen=True)
class Document:
    """A source abstract to ground detection against."""

    id: str
    text: str

    def __post_init__(self) -> None:
        if not self.id:
            raise DataError("document id must be non-empty")
        if not self.text.strip():
            raise DataError(f"document {self.id!r} has empty text")


@dataclass(frozen=True)
class Chunk:
    """A contiguous word window of one document.

    ``start_word``/``end_word`` are offsets into the whitespace tokenization
    of the document text; ``end_word`` is exclusive.
    """

    doc_id: str
    index: int
    start_word: int
    end_word: int
    text: str

    def __post_init__(self) -> None:
        if self.index < 0 or self.start_word < 0 or self.end_word <= self.start_word:
            raise DataError(
                f"invalid chunk bounds for {self.doc_id!r}: "
                f"index={self.index} words=[{self.start_word},{self.end_word})"
            )


@dataclass(frozen=True)
class SpuriousRecord:
    """One candidate simplified text for the spurious/genuine decision."""

    id: str
    input_text: str
    source_doc_id: str | None = None
    gold_label: str | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise DataError("record id must be non-empty")
        if not self.input_text.strip():
            raise DataError(f"record {self.id!r} has empty input_text")
        if self.gold_label is not None and self.gold_label not in (
            GOLD_GENUINE,
            GOLD_SPURIOUS,
        ):
            raise DataError(
                f"record {self.id!r} has label {self.gold_label!r}; "
                f"expected {GOLD_GENUINE!r} or {GOLD_SPURIOUS!r}"
            )


@dataclass(frozen=True)
class DistortionRecord:
    """One (source sentence, simplified sentence) pair for error classification."""

    id: str
    source_sentence: str
    simplified_sentence: str
    gold_labels: tuple[ErrorCategory, ...] | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise DataError("record id must be non-empty")
        labels = self.gold_labels
        if labels is not None:
            if len(set(labels)) != len(labels):
                raise DataError(f"record {self.id!r} repeats a gold label")
            if ErrorCategory.NO_ERROR in labels and len(labels) > 1:
                raise DataError(
                    f"record {self.id!r} combines {ErrorCategory.NO_ERROR.value!r} "
                    "with other labels"
                )


@dataclass(frozen=True)
class GroundingRecord:
    """A baseline simplification paired with the reference it must be grounded in."""

    id: str
    reference: str
    input_text: str

    def __post_init__(self) -> None:
        if not self.id:
            raise DataError("record id must be non-empty")
        if not self.reference.strip():
            raise DataError(f"record {self.id!r} has empty reference")
        if not self.input_text.strip():
            raise DataError(f"record {self.id!r} has empty input_text")


def tokenize_words(text: str) -> list[str]:
    """Split on unicode whitespace, preserving word forms. Empty text gives []."""
    return text.split()


def split_sentences(text: str) -> list[str]:
    """Split on terminal punctuation (. ! ?) followed by whitespace or end of text.

    A deliberately simple rule with no abbreviation list: "e.g. test." splits
    into two sentences. Text without terminal punctuation is one sentence.
    """
    stripped = text.strip()
    if not stripped:
        return []
    return [part for part in _SENTENCE_BOUNDARY.split(stripped) if part]


def chunk_text(
    text: str,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    overlap: int = DEFAULT_CHUNK_OVERLAP,
    doc_id: str = "",
) -> list[Chunk]:
    """Cut text into overlapping word windows of at most ``chunk_size`` words.

    Windows start at word offsets 0, stride, 2*stride, ... with
    stride = chunk_size - overlap, and generation stops with the first window
    that reaches the final word, so the union of windows covers every word
    exactly once (with the configured overlap between neighbours). A text of
    at most ``chunk_size`` words yields a single chunk; an empty text yields
    none.
    """
    if not 0 < overlap < chunk_size:
        raise ConfigError(
            f"invalid chunking: need 0 < overlap < chunk_size, "
            f"got chunk_size={chunk_size} overlap={overlap}"
        )
    words = tokenize_words(text)
    if not words:
        return []
    stride = chunk_size - overlap
    chunks: list[Chunk] = []
    start = 0
    while True:
        end = min(start + chunk_size, len(words))
        chunks.append(
            Chunk(
                doc_id=doc_id,
                index=len(chunks),
                start_word=start,
                end_word=end,
                text=" ".join(words[start:end]),
            )
        )
        if end >= len(words):
            return chunks
        start += stride


def chunk_document(
    doc: Document,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    overlap: int = DEFAULT_CHUNK_OVERLAP,
) -> list[Chunk]:
    return chunk_text(doc.text, chunk_size=chunk_size, overlap=overlap, doc_id=doc.id)


def _iter_jsonl(path: str | Path) -> Iterable[tuple[int, dict]]:
    """Yield (line_number, parsed object) pairs; blank lines are skipped."""
    path = Path(path)
    try:
        handle = path.open(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: malformed JSON line: {exc}") from exc
            if not isinstance(obj, dict):
                raise DataError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, obj


def _require(obj: dict, key: str, path: Path, lineno: int) -> str:
    value = obj.get(key)
    if not isinstance(value, str) or not value:
        raise DataError(f"{path}:{lineno}: missing or empty field {key!r}")
    return value


def load_documents(path: str | Path) -> dict[str, Document]:
    """Load a documents file into an insertion-ordered id -> Document mapping."""
    path = Path(path)
    docs: dict[str, Document] = {}
    for lineno, obj in _iter_jsonl(path):
        doc_id = _require(obj, "id", path, lineno)
        if doc_id in docs:
            raise DataError(f"{path}:{lineno}: duplicate document id {doc_id!r}")
        try:
            docs[doc_id] = Document(id=doc_id, text=_require(obj, "text", path, lineno))
        except DataError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from exc
    return docs


def load_spurious_dataset(
    records_path: str | Path,
    documents_path: str | Path | None = None,
) -> tuple[list[SpuriousRecord], dict[str, Document]]:
    """Load spurious-task records plus their source-document corpus.

    Every record carrying a ``source_doc_id`` must resolve against the loaded
    corpus; records without one are fine (the post-hoc setting). Input order
    is preserved.
    """
    records_path = Path(records_path)
    corpus = load_documents(documents_path) if documents_path is not None else {}
    records: list[SpuriousRecord] = []
    seen: set[str] = set()
    for lineno, obj in _iter_jsonl(records_path):
        record_id = _require(obj, "id", records_path, lineno)
        if record_id in seen:
            raise DataError(
                f"{records_path}:{lineno}: duplicate record id {record_id!r}"
            )
        seen.add(record_id)
        try:
            record = SpuriousRecord(
                id=record_id,
                input_text=_require(obj, "input_text", records_path, lineno),
                source_doc_id=obj.get("source_doc_id"),
                gold_label=obj.get("label"),
            )
        except DataError as exc:
            raise DataError(f"{records_path}:{lineno}: {exc}") from exc
        if record.source_doc_id is not None and documents_path is not None:
            if record.source_doc_id not in corpus:
                raise DataError(
                    f"{records_path}:{lineno}: record {record_id!r} references "
                    f"unknown document {record.source_doc_id!r}"
                )
        records.append(record)
    return records, corpus


def load_distortion_dataset(path: str | Path) -> list[DistortionRecord]:
    """Load distortion-task records, validating labels against the taxonomy."""
    path = Path(path)
    records: list[DistortionRecord] = []
    seen: set[str] = set()
    for lineno, obj in _iter_jsonl(path):
        record_id = _require(obj, "id", path, lineno)
        if record_id in seen:
            raise DataError(f"{path}:{lineno}: duplicate record id {record_id!r}")
        seen.add(record_id)
        raw_labels = obj.get("labels")
        labels: tuple[ErrorCategory, ...] | None = None
        if raw_labels is not None:
            if not isinstance(raw_labels, list):
                raise DataError(f"{path}:{lineno}: 'labels' must be a list")
            try:
                labels = tuple(ErrorCategory.from_label(l) for l in raw_labels)
            except DataError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
        try:
            records.append(
                DistortionRecord(
                    id=record_id,
                    source_sentence=_require(obj, "source_sentence", path, lineno),
                    simplified_sentence=_require(
                        obj, "simplified_sentence", path, lineno
                    ),
                    gold_labels=labels,
                )
            )
        except DataError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from exc
    return records


def load_grounding_dataset(path: str | Path) -> list[GroundingRecord]:
    path = Path(path)
    records: list[GroundingRecord] = []
    seen: set[str] = set()
    for lineno, obj in _iter_jsonl(path):
        record_id = _require(obj, "id", path, lineno)
        if record_id in seen:
            raise DataError(f"{path}:{lineno}: duplicate record id {record_id!r}")
        seen.add(record_id)
        try:
            records.append(
                GroundingRecord(
                    id=record_id,
                    reference=_require(obj, "reference", path, lineno),
                    input_text=_require(obj, "input_text", path, lineno),
                )
            )
        except DataError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from exc
    return records


def _write_jsonl(path: str | Path, rows: Iterable[dict]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        for row in rows:
            handle.write(json.dumps(row, sort_keys=True) + "\n")


def save_documents(docs: Iterable[Document], path: str | Path) -> None:
    _write_jsonl(path, ({"id": d.id, "text": d.text} for d in docs))


def save_spurious_dataset(records: Iterable[SpuriousRecord], path: str | Path) -> None:
    rows = []
    for r in records:
        row: dict = {"id": r.id, "input_text": r.input_text}
        if r.source_doc_id is not None:
            row["source_doc_id"] = r.source_doc_id
        if r.gold_label is not None:
            row["label"] = r.gold_label
        rows.append(row)
    _write_jsonl(path, rows)


def save_distortion_dataset(
    records: Iterable[DistortionRecord], path: str | Path
) -> None:
    rows = []
    for r in records:
        row: dict = {
            "id": r.id,
            "source_sentence": r.source_sentence,
            "simplified_sentence": r.simplified_sentence,
        }
        if r.gold_labels is not None:
            row["labels"] = [c.value for c in r.gold_labels]
        rows.append(row)
    _write_jsonl(path, rows)
