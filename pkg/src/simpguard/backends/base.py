"""Score value types, backend configuration, and transport protocols."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence, runtime_checkable

from ..corpus import NUM_CATEGORIES, ErrorCategory
from ..errors import ConfigError

# Model identifiers the hosted pipeline was tuned against; all overridable.
DEFAULT_JUDGE_MODEL = "llama-3.3-70b-versatile"
DEFAULT_GROUNDER_MODEL = "llama-3.3-70b-versatile"
DEFAULT_EMBEDDING_MODEL = "multi-qa-MiniLM-L6-cos-v1"
DEFAULT_NLI_MODEL = "facebook/bart-large-mnli"


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class JudgeScores:
    """The four [0, 1] scores a judge model assigns to an input text."""

    spuriousness: float
    over_generalization: float
    contradiction: float
    vagueness: float

    def __post_init__(self) -> None:
        for name in ("spuriousness", "over_generalization", "contradiction", "vagueness"):
            _check_unit(name, getattr(self, name))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (
            self.spuriousness,
            self.over_generalization,
            self.contradiction,
            self.vagueness,
        )


@dataclass(frozen=True)
class NliScores:
    """Entailment and contradiction probabilities; the neutral class is dropped."""

    entailment: float
    contradiction: float

    def __post_init__(self) -> None:
        _check_unit("entailment", self.entailment)
        _check_unit("contradiction", self.contradiction)


@dataclass(frozen=True)
class DistortionScores:
    """Fifteen [0, 1] scores in canonical :class:`ErrorCategory` order."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) != NUM_CATEGORIES:
            raise ValueError(
                f"expected {NUM_CATEGORIES} scores, got {len(self.values)}"
            )
        for v in self.values:
            _check_unit("distortion score", v)

    def for_category(self, category: ErrorCategory) -> float:
        return self.values[list(ErrorCategory).index(category)]


@dataclass(frozen=True)
class BackendConfig:
    """How to reach one model service.

    ``kind`` selects the transport ("http" or "mock"); ``api_key_env`` names
    the environment variable holding the bearer token, never the token itself.
    """

    kind: str = "mock"
    endpoint: str = ""
    model: str = ""
    api_key_env: str = ""
    timeout: float = 30.0
    max_retries: int = 3
    temperature: float = 0.0
    options: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ConfigError(f"timeout must be positive, got {self.timeout}")
        if self.max_retries < 0:
            raise ConfigError(f"max_retries must be >= 0, got {self.max_retries}")
        if self.kind not in ("http", "mock"):
            raise ConfigError(f"unknown backend kind {self.kind!r}")


@runtime_checkable
class ChatTransport(Protocol):
    """Single-prompt chat completion; returns the model's raw text."""

    model: str
    calls: int

    def complete(self, prompt: str) -> str: ...


@runtime_checkable
class EmbeddingTransport(Protocol):
    model: str
    calls: int

    def embed(self, texts: Sequence[str]) -> list[list[float]]: ...


@runtime_checkable
class NliTransport(Protocol):
    model: str
    calls: int

    def score(self, premise: str, hypothesis: str) -> tuple[float, float]:
        """Return (entailment, contradiction) probabilities."""
        ...


@runtime_checkable
class ClassifierTransport(Protocol):
    """Probability service over texts (arity 1) or sentence pairs (arity 15)."""

    model: str
    calls: int

    def predict(self, inputs: Sequence[str | tuple[str, str]]) -> list[list[float]]: ...
