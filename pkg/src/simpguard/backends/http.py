"""HTTP transports for the four model services.

The chat transport speaks the OpenAI-compatible chat-completions shape.
The embedding transport speaks the matching embeddings shape. The NLI and
classifier transports use a minimal JSON contract documented on each class,
since no single public standard exists for those services.

All transports retry transient failures (connection errors, 429, 5xx) with
exponential backoff before raising :class:`BackendError`. The ``calls``
counter counts logical requests, not retry attempts.
"""

from __future__ import annotations

import os
import time
from typing import Any, Mapping, Sequence

import requests

from ..errors import BackendError, ConfigError
from .base import BackendConfig

_RETRY_STATUSES = frozenset({429, 500, 502, 503, 504})
_BACKOFF_BASE_SECONDS = 0.5


def _auth_headers(config: BackendConfig) -> dict[str, str]:
    headers = {"Content-Type": "application/json"}
    if config.api_key_env:
        key = os.environ.get(config.api_key_env)
        if not key:
            raise ConfigError(
                f"environment variable {config.api_key_env} is not set "
                f"(needed for {config.endpoint})"
            )
        headers["Authorization"] = f"Bearer {key}"
    return headers


def _post_json(config: BackendConfig, payload: Mapping[str, Any]) -> Any:
    if not config.endpoint:
        raise ConfigError("http backend requires an endpoint URL")
    headers = _auth_headers(config)
    last_error: Exception | None = None
    for attempt in range(config.max_retries + 1):
        if attempt:
            time.sleep(_BACKOFF_BASE_SECONDS * 2 ** (attempt - 1))
        try:
            response = requests.post(
                config.endpoint, json=payload, headers=headers, timeout=config.timeout
            )
        except requests.RequestException as exc:
            last_error = exc
            continue
        if response.status_code in _RETRY_STATUSES:
            last_error = BackendError(
                f"{config.endpoint} returned {response.status_code}"
            )
            continue
        if response.status_code != 200:
            raise BackendError(
                f"{config.endpoint} returned {response.status_code}: "
                f"{response.text[:200]}"
            )
        try:
            return response.json()
        except ValueError as exc:
            raise BackendError(f"{config.endpoint} returned non-JSON body") from exc
    raise BackendError(
        f"{config.endpoint} unreachable after {config.max_retries + 1} attempts: "
        f"{last_error}"
    )


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise BackendError(message)


class HttpChatTransport:
    """POST {model, messages, temperature} -> choices[0].message.content."""

    def __init__(self, config: BackendConfig) -> None:
        self.config = config
        self.model = config.model
        self.calls = 0

    def complete(self, prompt: str) -> str:
        self.calls += 1
        body = _post_json(
            self.config,
            {
                "model": self.model,
                "messages": [{"role": "user", "content": prompt}],
                "temperature": self.config.temperature,
            },
        )
        try:
            content = body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendError("chat response missing choices[0].message.content") from exc
        _expect(isinstance(content, str), "chat response content is not text")
        return content


class HttpEmbeddingTransport:
    """POST {model, input} -> data[i].embedding, order-preserving."""

    def __init__(self, config: BackendConfig) -> None:
        self.config = config
        self.model = config.model
        self.calls = 0

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        self.calls += 1
        body = _post_json(self.config, {"model": self.model, "input": list(texts)})
        try:
            rows = body["data"]
            vectors = [[float(v) for v in row["embedding"]] for row in rows]
        except (KeyError, TypeError, ValueError) as exc:
            raise BackendError("embedding response missing data[].embedding") from exc
        _expect(
            len(vectors) == len(texts),
            f"embedding response has {len(vectors)} vectors for {len(texts)} inputs",
        )
        return vectors


class HttpNliTransport:
    """POST {model, premise, hypothesis} -> {entailment, contradiction}.

    The probabilities may appear at the top level or nested under "scores".
    """

    def __init__(self, config: BackendConfig) -> None:
        self.config = config
        self.model = config.model
        self.calls = 0

    def score(self, premise: str, hypothesis: str) -> tuple[float, float]:
        self.calls += 1
        body = _post_json(
            self.config,
            {"model": self.model, "premise": premise, "hypothesis": hypothesis},
        )
        scores = body.get("scores", body) if isinstance(body, dict) else None
        _expect(isinstance(scores, dict), "NLI response is not an object")
        try:
            return float(scores["entailment"]), float(scores["contradiction"])
        except (KeyError, TypeError, ValueError) as exc:
            raise BackendError(
                "NLI response missing entailment/contradiction probabilities"
            ) from exc


class HttpClassifierTransport:
    """POST {model, inputs} -> {probabilities: [[...], ...]}.

    Pair inputs are sent as {text, text_pair} objects, plain strings as-is.
    """

    def __init__(self, config: BackendConfig) -> None:
        self.config = config
        self.model = config.model
        self.calls = 0

    def predict(self, inputs: Sequence[str | tuple[str, str]]) -> list[list[float]]:
        self.calls += 1
        wire_inputs: list[Any] = [
            item if isinstance(item, str) else {"text": item[0], "text_pair": item[1]}
            for item in inputs
        ]
        body = _post_json(self.config, {"model": self.model, "inputs": wire_inputs})
        try:
            rows = [[float(v) for v in row] for row in body["probabilities"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise BackendError("classifier response missing probabilities") from exc
        _expect(
            len(rows) == len(inputs),
            f"classifier response has {len(rows)} rows for {len(inputs)} inputs",
        )
        return rows
