"""High-level backend operations consumed by the feature and pipeline layers.

A :class:`BackendSuite` owns one transport per service plus a shared
response cache. Successful results are cached under a digest of the full
rendered request; malformed model output is re-asked a configurable number
of times and never cached.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..corpus import NUM_CATEGORIES
from ..errors import BackendError, ConfigError, ScoreParseError
from .base import (
    ChatTransport,
    ClassifierTransport,
    DistortionScores,
    EmbeddingTransport,
    JudgeScores,
    NliScores,
    NliTransport,
)
from .cache import ResponseCache, request_key
from .parsing import parse_score_object
from .prompts import (
    DISTORTION_SCORE_KEYS,
    JUDGE_SCORE_KEYS,
    render_distortion_prompt,
    render_grounding_prompt,
    render_judge_prompt,
)

_CORRECTED_PREFIX = "Corrected Text:"


def _clamp_unit(value: float) -> float:
    return min(1.0, max(0.0, float(value)))


@dataclass
class BackendSuite:
    """Typed operations over the configured model services.

    Any transport may be None when the pipeline at hand does not need it;
    using a missing one raises :class:`ConfigError`. ``parse_retries`` is
    the number of re-asks after a malformed chat response, so a value of 3
    allows 4 attempts in total.
    """

    chat: ChatTransport | None = None
    embedder: EmbeddingTransport | None = None
    nli: NliTransport | None = None
    spurious_classifier: ClassifierTransport | None = None
    distortion_classifier: ClassifierTransport | None = None
    cache: ResponseCache | None = None
    parse_retries: int = 3

    def __post_init__(self) -> None:
        if self.parse_retries < 0:
            raise ConfigError(f"parse_retries must be >= 0, got {self.parse_retries}")
        if self.cache is None:
            self.cache = ResponseCache()

    def _require(self, transport, name: str):
        if transport is None:
            raise ConfigError(f"no {name} backend configured")
        return transport

    def _cached(self, kind: str, model: str, request: str):
        assert self.cache is not None
        key = request_key(kind, model, request)
        return key, self.cache.get(key)

    # -- embeddings --------------------------------------------------------

    def embed(self, texts: list[str]) -> list[list[float]]:
        """Embed a batch, order-preserving; each text is cached individually."""

        if not texts:
            raise ValueError("embed requires a non-empty batch")
        embedder = self._require(self.embedder, "embedding")
        assert self.cache is not None
        keys = [request_key("embed", embedder.model, text) for text in texts]
        out: list[list[float] | None] = [self.cache.get(k) for k in keys]
        pending = [i for i, v in enumerate(out) if v is None]
        if pending:
            fresh = embedder.embed([texts[i] for i in pending])
            if len(fresh) != len(pending):
                raise BackendError(
                    f"embedding backend returned {len(fresh)} vectors "
                    f"for {len(pending)} inputs"
                )
            for i, vector in zip(pending, fresh):
                out[i] = [float(v) for v in vector]
                self.cache.put(keys[i], out[i])
        vectors = [v for v in out if v is not None]
        dims = {len(v) for v in vectors}
        if len(dims) != 1:
            raise BackendError(f"inconsistent embedding dimensions in batch: {sorted(dims)}")
        return vectors

    # -- NLI ---------------------------------------------------------------

    def nli_score(self, premise: str, hypothesis: str) -> NliScores:
        if not premise:
            raise ValueError("nli_score requires a non-empty premise")
        if not hypothesis:
            raise ValueError("nli_score requires a non-empty hypothesis")
        nli = self._require(self.nli, "NLI")
        request = f"{premise}\x1f{hypothesis}"
        key, hit = self._cached("nli", nli.model, request)
        if hit is not None:
            return NliScores(entailment=hit[0], contradiction=hit[1])
        ent, con = nli.score(premise, hypothesis)
        scores = NliScores(entailment=_clamp_unit(ent), contradiction=_clamp_unit(con))
        assert self.cache is not None
        self.cache.put(key, [scores.entailment, scores.contradiction])
        return scores

    # -- LLM judges --------------------------------------------------------

    def _judged_scores(self, kind: str, prompt: str, keys: tuple[str, ...]) -> dict[str, float]:
        chat = self._require(self.chat, "chat")
        cache_key, hit = self._cached(kind, chat.model, prompt)
        if hit is not None:
            return dict(hit)
        last: ScoreParseError | None = None
        for _ in range(self.parse_retries + 1):
            response = chat.complete(prompt)
            try:
                scores = parse_score_object(response, keys)
            except ScoreParseError as exc:
                last = exc
                continue
            assert self.cache is not None
            self.cache.put(cache_key, scores)
            return scores
        assert last is not None
        raise ScoreParseError(
            f"judge output stayed malformed after {self.parse_retries + 1} attempts: {last}"
        )

    def judge_spurious(self, source: str, input_text: str) -> JudgeScores:
        prompt = render_judge_prompt(source, input_text)
        scores = self._judged_scores("judge", prompt, JUDGE_SCORE_KEYS)
        return JudgeScores(**scores)

    def judge_distortion(
        self, source_sentence: str, simplified_sentence: str
    ) -> DistortionScores:
        prompt = render_distortion_prompt(source_sentence, simplified_sentence)
        scores = self._judged_scores("distortion-judge", prompt, DISTORTION_SCORE_KEYS)
        return DistortionScores(values=tuple(scores[k] for k in DISTORTION_SCORE_KEYS))

    # -- transformer classifiers -------------------------------------------

    def spurious_prob(self, input_text: str) -> float:
        if not input_text:
            raise ValueError("spurious_prob requires non-empty text")
        classifier = self._require(self.spurious_classifier, "spurious classifier")
        key, hit = self._cached("classify-spurious", classifier.model, input_text)
        if hit is not None:
            return float(hit)
        row = classifier.predict([input_text])[0]
        if len(row) != 1:
            raise BackendError(
                f"spurious classifier returned {len(row)} probabilities, expected 1"
            )
        prob = _clamp_unit(row[0])
        assert self.cache is not None
        self.cache.put(key, prob)
        return prob

    def distortion_probs(
        self, source_sentence: str, simplified_sentence: str
    ) -> tuple[float, ...]:
        if not source_sentence:
            raise ValueError("distortion_probs requires a non-empty source sentence")
        if not simplified_sentence:
            raise ValueError("distortion_probs requires a non-empty simplified sentence")
        classifier = self._require(self.distortion_classifier, "distortion classifier")
        request = f"{source_sentence}\x1f{simplified_sentence}"
        key, hit = self._cached("classify-distortion", classifier.model, request)
        if hit is not None:
            return tuple(float(v) for v in hit)
        row = classifier.predict([(source_sentence, simplified_sentence)])[0]
        if len(row) != NUM_CATEGORIES:
            raise BackendError(
                f"distortion classifier returned {len(row)} probabilities, "
                f"expected {NUM_CATEGORIES}"
            )
        probs = tuple(_clamp_unit(v) for v in row)
        assert self.cache is not None
        self.cache.put(key, list(probs))
        return probs

    # -- grounded revision ---------------------------------------------------

    def ground_text(self, reference: str, input_text: str) -> str:
        """Ask the chat backend to revise text against its reference.

        An unchanged return means the input was already grounded. Any echoed
        "Corrected Text:" prefix is stripped from the response.
        """

        chat = self._require(self.chat, "chat")
        prompt = render_grounding_prompt(reference, input_text)
        key, hit = self._cached("ground", chat.model, prompt)
        if hit is not None:
            return str(hit)
        response = chat.complete(prompt).strip()
        if response.startswith(_CORRECTED_PREFIX):
            response = response[len(_CORRECTED_PREFIX) :].lstrip()
        if not response:
            raise BackendError("grounding backend returned an empty revision")
        assert self.cache is not None
        self.cache.put(key, response)
        return response
