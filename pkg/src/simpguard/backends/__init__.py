"""Model-service backends: prompts, parsing, transports, cache, and suite."""

from .base import (
    DEFAULT_EMBEDDING_MODEL,
    DEFAULT_GROUNDER_MODEL,
    DEFAULT_JUDGE_MODEL,
    DEFAULT_NLI_MODEL,
    BackendConfig,
    ChatTransport,
    ClassifierTransport,
    DistortionScores,
    EmbeddingTransport,
    JudgeScores,
    NliScores,
    NliTransport,
)
from .cache import ResponseCache, request_key
from .http import (
    HttpChatTransport,
    HttpClassifierTransport,
    HttpEmbeddingTransport,
    HttpNliTransport,
)
from .mock import MockChat, MockClassifier, MockEmbedding, MockNli, stable_floats
from .parsing import parse_score_object
from .prompts import (
    DISTORTION_SCORE_KEYS,
    DISTORTION_TEMPLATE,
    GROUNDING_TEMPLATE,
    JUDGE_SCORE_KEYS,
    JUDGE_TEMPLATE,
    render_distortion_prompt,
    render_grounding_prompt,
    render_judge_prompt,
)
from .suite import BackendSuite

__all__ = [
    "BackendConfig",
    "BackendSuite",
    "ChatTransport",
    "ClassifierTransport",
    "DEFAULT_EMBEDDING_MODEL",
    "DEFAULT_GROUNDER_MODEL",
    "DEFAULT_JUDGE_MODEL",
    "DEFAULT_NLI_MODEL",
    "DISTORTION_SCORE_KEYS",
    "DISTORTION_TEMPLATE",
    "DistortionScores",
    "EmbeddingTransport",
    "GROUNDING_TEMPLATE",
    "HttpChatTransport",
    "HttpClassifierTransport",
    "HttpEmbeddingTransport",
    "HttpNliTransport",
    "JUDGE_SCORE_KEYS",
    "JUDGE_TEMPLATE",
    "JudgeScores",
    "MockChat",
    "MockClassifier",
    "MockEmbedding",
    "MockNli",
    "NliScores",
    "NliTransport",
    "ResponseCache",
    "parse_score_object",
    "render_distortion_prompt",
    "render_grounding_prompt",
    "render_judge_prompt",
    "request_key",
    "stable_floats",
]
