"""Cosine similarity and the exact in-memory retrieval index over text chunks.

Retrieval is deliberately brute force: corpora here are thousands of chunks,
so an exhaustive similarity scan is both fast enough and exactly equal to the
sorted-oracle definition of top-k. Ties are broken by insertion order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Chunk
from .errors import BackendError, DataError

INDEX_FORMAT = "simpguard-index"
INDEX_VERSION = 1
DEFAULT_TOP_K = 5

_EMBED_BATCH_SIZE = 32


def as_vector(values: Sequence[float]) -> np.ndarray:
    """Coerce to a 1-D float64 array, rejecting non-finite entries."""
    vec = np.asarray(values, dtype=np.float64)
    if vec.ndim != 1 or vec.size == 0:
        raise ValueError(f"expected a non-empty 1-D vector, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise ValueError("embedding vector contains non-finite entries")
    return vec


def cosine_similarity(u: Sequence[float], v: Sequence[float]) -> float:
    """u.v / (|u||v|). Raises on dimension mismatch or a zero vector."""
    u = as_vector(u)
    v = as_vector(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine similarity is undefined for a zero vector")
    return float(np.dot(u, v) / (nu * nv))


@dataclass(frozen=True)
class RetrievalHit:
    chunk: Chunk
    similarity: float


@dataclass(frozen=True)
class ChunkIndex:
    """Immutable (chunk, embedding) store; entry order is insertion order."""

    chunks: tuple[Chunk, ...]
    vectors: np.ndarray  # shape (n, d), unnormalized

    def __post_init__(self) -> None:
        if len(self.chunks) == 0:
            raise ValueError("index must contain at least one chunk")
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.chunks):
            raise ValueError(
                f"vector matrix shape {self.vectors.shape} does not match "
                f"{len(self.chunks)} chunks"
            )
        if not np.all(np.isfinite(self.vectors)):
            raise ValueError("index contains non-finite embeddings")
        norms = np.linalg.norm(self.vectors, axis=1)
        if np.any(norms == 0.0):
            raise ValueError("index contains a zero embedding vector")

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return len(self.chunks)


def build_index(chunks: Sequence[Chunk], embed_backend) -> ChunkIndex:
    """Embed chunks in batches and assemble the index in chunk order.

    ``embed_backend`` is anything with ``embed(texts) -> vectors``; the
    embedding dimension is discovered from the first batch and enforced.
    """
    if not chunks:
        raise ValueError("cannot build an index from an empty chunk list")
    rows: list[np.ndarray] = []
    dim: int | None = None
    for start in range(0, len(chunks), _EMBED_BATCH_SIZE):
        batch = chunks[start : start + _EMBED_BATCH_SIZE]
        try:
            vectors = embed_backend.embed([c.text for c in batch])
        except BackendError as exc:
            ids = ", ".join(f"{c.doc_id}#{c.index}" for c in batch)
            raise BackendError(f"embedding failed for chunks [{ids}]: {exc}") from exc
        for chunk, values in zip(batch, vectors):
            vec = as_vector(values)
            if dim is None:
                dim = vec.shape[0]
            elif vec.shape[0] != dim:
                raise BackendError(
                    f"embedding dimension changed from {dim} to {vec.shape[0]} "
                    f"at chunk {chunk.doc_id}#{chunk.index}"
                )
            rows.append(vec)
    return ChunkIndex(chunks=tuple(chunks), vectors=np.vstack(rows))


def _similarities(index: ChunkIndex, query: Sequence[float]) -> np.ndarray:
    q = as_vector(query)
    if q.shape[0] != index.dim:
        raise ValueError(f"dimension mismatch: query {q.shape[0]} vs index {index.dim}")
    qnorm = float(np.linalg.norm(q))
    if qnorm == 0.0:
        raise ValueError("cosine similarity is undefined for a zero query vector")
    norms = np.linalg.norm(index.vectors, axis=1)
    return (index.vectors @ q) / (norms * qnorm)


def retrieve_top_k(
    index: ChunkIndex, query: Sequence[float], k: int = DEFAULT_TOP_K
) -> list[RetrievalHit]:
    """Exact top-k by cosine similarity, ties resolved by insertion order."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    sims = _similarities(index, query)
    order = np.argsort(-sims, kind="stable")
    return [
        RetrievalHit(chunk=index.chunks[i], similarity=float(sims[i]))
        for i in order[: min(k, len(index))]
    ]


def max_source_similarity(
    input_embedding: Sequence[float], chunk_embeddings: Sequence[Sequence[float]]
) -> float:
    """Highest cosine similarity between the input and any source chunk."""
    if len(chunk_embeddings) == 0:
        raise ValueError("need at least one source chunk embedding")
    return max(cosine_similarity(input_embedding, c) for c in chunk_embeddings)


def save_index(index: ChunkIndex, path: str | Path) -> None:
    """Persist as JSON Lines with a version header."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        header = {"format": INDEX_FORMAT, "version": INDEX_VERSION, "dim": index.dim}
        handle.write(json.dumps(header, sort_keys=True) + "\n")
        for chunk, vec in zip(index.chunks, index.vectors):
            row = {
                "doc_id": chunk.doc_id,
                "index": chunk.index,
                "start_word": chunk.start_word,
                "end_word": chunk.end_word,
                "text": chunk.text,
                "values": [float(x) for x in vec],
            }
            handle.write(json.dumps(row, sort_keys=True) + "\n")


def load_index(path: str | Path) -> ChunkIndex:
    path = Path(path)
    try:
        handle = path.open(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with handle:
        try:
            header = json.loads(handle.readline())
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: not an index file: {exc}") from exc
        if (
            not isinstance(header, dict)
            or header.get("format") != INDEX_FORMAT
            or header.get("version") != INDEX_VERSION
        ):
            raise DataError(
                f"{path}: expected {INDEX_FORMAT} version {INDEX_VERSION} header"
            )
        dim = header.get("dim")
        chunks: list[Chunk] = []
        rows: list[np.ndarray] = []
        for lineno, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: malformed entry: {exc}") from exc
            try:
                chunks.append(
                    Chunk(
                        doc_id=obj["doc_id"],
                        index=obj["index"],
                        start_word=obj["start_word"],
                        end_word=obj["end_word"],
                        text=obj["text"],
                    )
                )
                vec = as_vector(obj["values"])
            except (KeyError, TypeError, ValueError) as exc:
                raise DataError(f"{path}:{lineno}: malformed entry: {exc}") from exc
            if vec.shape[0] != dim:
                raise DataError(
                    f"{path}:{lineno}: dimension {vec.shape[0]} does not match "
                    f"header dim {dim}"
                )
            rows.append(vec)
    if not rows:
        raise DataError(f"{path}: index file has no entries")
    return ChunkIndex(chunks=tuple(chunks), vectors=np.vstack(rows))
