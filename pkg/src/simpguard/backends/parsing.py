"""Extraction of score objects from free-form model responses.

Models are asked for a brace-delimited object but routinely wrap it in
prose, markdown fences, or an extra layer of braces. The parser scans for
every balanced-brace candidate and accepts the first one that both parses
and carries all expected keys.
"""

from __future__ import annotations

import ast
import json
import math
from typing import Iterator, Mapping, Sequence

from ..errors import ScoreParseError

_SNIPPET_LEN = 160


def _brace_candidates(text: str) -> Iterator[str]:
    """Yield each balanced ``{...}`` substring, ordered by opening position.

    Every ``{`` contributes at most one candidate, so nested objects (for
    example a doubled-brace wrapper) are yielded outer first, then inner.
    """

    opens: list[int] = []
    closes: dict[int, int] = {}
    for i, ch in enumerate(text):
        if ch == "{":
            opens.append(i)
        elif ch == "}" and opens:
            closes[opens.pop()] = i
    for start in sorted(closes):
        yield text[start : closes[start] + 1]


def _parse_candidate(candidate: str) -> dict | None:
    for loader in (json.loads, ast.literal_eval):
        try:
            value = loader(candidate)
        except (ValueError, SyntaxError, TypeError, MemoryError, RecursionError):
            continue
        if isinstance(value, dict):
            return value
    return None


def _coerce_unit(raw: object) -> float | None:
    """Turn a score value into a float clamped to [0, 1], or None if unusable."""

    if isinstance(raw, bool):
        return 1.0 if raw else 0.0
    if isinstance(raw, (int, float)):
        value = float(raw)
    elif isinstance(raw, str):
        try:
            value = float(raw.strip())
        except ValueError:
            return None
    else:
        return None
    if not math.isfinite(value):
        return None
    return min(1.0, max(0.0, value))


def _snippet(text: str) -> str:
    flat = " ".join(text.split())
    if len(flat) > _SNIPPET_LEN:
        flat = flat[: _SNIPPET_LEN - 3] + "..."
    return flat


def parse_score_object(text: str, expected_keys: Sequence[str]) -> dict[str, float]:
    """Extract ``{key: score}`` for every expected key from a model response.

    Accepts JSON and Python-literal syntax (single-quoted keys included).
    Scores are coerced to float and clamped to [0, 1]; non-finite values are
    rejected. Raises :class:`ScoreParseError` naming the missing keys when no
    candidate object carries all of them.
    """

    if not expected_keys:
        raise ValueError("expected_keys must not be empty")
    best_missing: tuple[str, ...] | None = None
    for candidate in _brace_candidates(text):
        obj = _parse_candidate(candidate)
        if obj is None:
            continue
        scores: dict[str, float] = {}
        missing: list[str] = []
        for key in expected_keys:
            coerced = _coerce_unit(obj[key]) if key in obj else None
            if coerced is None:
                missing.append(key)
            else:
                scores[key] = coerced
        if not missing:
            return scores
        if best_missing is None or len(missing) < len(best_missing):
            best_missing = tuple(missing)
    if best_missing is not None:
        raise ScoreParseError(
            f"response object lacks usable scores for keys {list(best_missing)}: "
            f"{_snippet(text)!r}"
        )
    raise ScoreParseError(f"no parseable object in response: {_snippet(text)!r}")
