"""Hash-driven offline stand-ins for the model services.

Every mock is a pure function of its inputs: outputs are derived from
sha256 digests, so they are identical across calls, processes, and
platforms. That is what makes end-to-end runs byte-reproducible without a
network.
"""

from __future__ import annotations

import hashlib
from typing import Sequence

from ..errors import ConfigError
from .prompts import DISTORTION_SCORE_KEYS, JUDGE_SCORE_KEYS

_SEP = "\x1f"

# Substrings that identify which template a prompt was rendered from.
_JUDGE_MARKER = "evaluating whether an input text is spurious"
_DISTORTION_MARKER = "information distortion errors"
_GROUNDING_MARKER = "fully grounded in the reference document"

_INPUT_TEXT_MARKER = "\nInput Text: "
_GROUNDING_SUFFIX = "\nCorrected Text:"


def stable_floats(*parts: str, n: int = 1) -> list[float]:
    """Derive ``n`` floats in [0, 1) from the given strings, reproducibly.

    The seed digest is expanded with counter blocks, eight bytes per float,
    so any ``n`` is available from the same inputs.
    """

    if n < 1:
        raise ValueError("n must be >= 1")
    seed = hashlib.sha256(_SEP.join(parts).encode("utf-8")).digest()
    out: list[float] = []
    counter = 0
    while len(out) < n:
        block = hashlib.sha256(seed + counter.to_bytes(8, "big")).digest()
        for i in range(0, len(block), 8):
            if len(out) == n:
                break
            out.append(int.from_bytes(block[i : i + 8], "big") / 2**64)
        counter += 1
    return out


class MockEmbedding:
    """Deterministic embedding service; components lie in (-1, 1)."""

    def __init__(self, model: str = "mock-embedding", dim: int = 16) -> None:
        if dim < 1:
            raise ConfigError(f"embedding dim must be >= 1, got {dim}")
        self.model = model
        self.dim = dim
        self.calls = 0

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        self.calls += 1
        vectors = []
        for text in texts:
            raw = stable_floats("embed", self.model, text, n=self.dim)
            vectors.append([2.0 * v - 1.0 for v in raw])
        return vectors


class MockNli:
    def __init__(self, model: str = "mock-nli") -> None:
        self.model = model
        self.calls = 0

    def score(self, premise: str, hypothesis: str) -> tuple[float, float]:
        self.calls += 1
        ent, con = stable_floats("nli", self.model, premise, hypothesis, n=2)
        return ent, con


class MockClassifier:
    """Deterministic probability service with a fixed output arity."""

    def __init__(self, model: str = "mock-classifier", arity: int = 1) -> None:
        if arity < 1:
            raise ConfigError(f"classifier arity must be >= 1, got {arity}")
        self.model = model
        self.arity = arity
        self.calls = 0

    def predict(self, inputs: Sequence[str | tuple[str, str]]) -> list[list[float]]:
        self.calls += 1
        rows = []
        for item in inputs:
            parts = [item] if isinstance(item, str) else list(item)
            rows.append(stable_floats("classifier", self.model, *parts, n=self.arity))
        return rows


class MockChat:
    """Deterministic chat service that recognizes the three prompt shapes.

    Judge prompts get a JSON score object, error-category prompts get the
    doubled-brace single-quoted object the template demonstrates, and
    revision prompts either echo the input text (``grounding="echo"``) or
    append a visible edit (``grounding="edit"``). Input-text extraction
    assumes the text itself does not contain the literal "Input Text: "
    marker line, which holds for the bundled datasets.
    """

    def __init__(self, model: str = "mock-chat", grounding: str = "echo") -> None:
        if grounding not in ("echo", "edit"):
            raise ConfigError(f"grounding mode must be echo or edit, got {grounding!r}")
        self.model = model
        self.grounding = grounding
        self.calls = 0

    def complete(self, prompt: str) -> str:
        self.calls += 1
        if _GROUNDING_MARKER in prompt:
            return self._ground(prompt)
        if _DISTORTION_MARKER in prompt:
            values = stable_floats("distortion", self.model, prompt, n=len(DISTORTION_SCORE_KEYS))
            body = ",\n".join(
                f" '{key}': {value:.6f}"
                for key, value in zip(DISTORTION_SCORE_KEYS, values)
            )
            return "{{\n" + body + "\n\n}}"
        if _JUDGE_MARKER in prompt:
            values = stable_floats("judge", self.model, prompt, n=len(JUDGE_SCORE_KEYS))
            body = ",\n".join(
                f'  "{key}": {value:.6f}'
                for key, value in zip(JUDGE_SCORE_KEYS, values)
            )
            return "{\n" + body + "\n}"
        raise ValueError("mock chat got a prompt it does not recognize")

    def _ground(self, prompt: str) -> str:
        if not prompt.endswith(_GROUNDING_SUFFIX):
            raise ValueError("revision prompt missing its trailing cue")
        body = prompt[: -len(_GROUNDING_SUFFIX)]
        _, found, input_text = body.partition(_INPUT_TEXT_MARKER)
        if not found:
            raise ValueError("revision prompt missing the input text line")
        if self.grounding == "echo":
            return input_text
        return input_text + " [revised]"
