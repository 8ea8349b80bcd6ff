"""Evaluation metrics: binary and multi-label classification plus the
simplification-quality family (SARI, BLEU, FKGL, edit and surface measures).

Every function here is pure. Tokenization for metrics is frozen separately
from the corpus module: case-folded, with leading and trailing punctuation
stripped from each whitespace token.
"""

from __future__ import annotations

import math
import re
import string
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .corpus import split_sentences
from .errors import DataError, MetricError

_PUNCT = string.punctuation
_VOWEL_GROUPS = re.compile(r"[aeiouy]+")

DEFAULT_THRESHOLD = 0.5
BLEU_MAX_N = 4
SARI_MAX_N = 4


def metric_tokenize(text: str) -> list[str]:
    """Case-folded tokens with surrounding punctuation removed."""

    tokens = []
    for raw in text.split():
        token = raw.strip(_PUNCT).casefold()
        if token:
            tokens.append(token)
    return tokens


# ---------------------------------------------------------------------------
# binary classification


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise MetricError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @classmethod
    def from_scores(
        cls, scores: Sequence[float], gold: Sequence[int], threshold: float
    ) -> "ConfusionCounts":
        tp = fp = tn = fn = 0
        for s, g in zip(scores, gold):
            predicted = s >= threshold
            if predicted and g:
                tp += 1
            elif predicted:
                fp += 1
            elif g:
                fn += 1
            else:
                tn += 1
        return cls(tp=tp, fp=fp, tn=tn, fn=fn)


@dataclass(frozen=True)
class ClassificationReport:
    count: int
    accuracy: float
    precision: float
    recall: float
    f1: float
    auroc: float
    auprc: float
    confusion: ConfusionCounts
    flags: tuple[str, ...] = ()


def _check_binary_inputs(scores: Sequence[float], gold: Sequence[int]) -> np.ndarray:
    if len(scores) != len(gold):
        raise MetricError(
            f"scores and gold lengths differ: {len(scores)} vs {len(gold)}"
        )
    if len(scores) == 0:
        raise MetricError("cannot score an empty input")
    g = np.asarray(gold)
    if not np.isin(g, (0, 1)).all():
        raise MetricError("gold labels must be 0 or 1")
    return g.astype(int)


def auroc(scores: Sequence[float], gold: Sequence[int]) -> float:
    """Probability that a random positive outscores a random negative,
    ties counted as half. Computed with mid-ranks (Mann-Whitney form)."""

    g = _check_binary_inputs(scores, gold)
    n_pos = int(g.sum())
    n_neg = len(g) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise MetricError("AUROC is undefined when gold has a single class")
    s = np.asarray(scores, dtype=float)
    order = np.argsort(s, kind="stable")
    ranks = np.empty(len(s))
    sorted_scores = s[order]
    i = 0
    while i < len(s):
        j = i
        while j < len(s) and sorted_scores[j] == sorted_scores[i]:
            j += 1
        # ranks are 1-based; tied entries share the average rank of the run
        ranks[order[i:j]] = (i + 1 + j) / 2.0
        i = j
    rank_sum = float(ranks[g == 1].sum())
    u = rank_sum - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def average_precision(scores: Sequence[float], gold: Sequence[int]) -> float:
    """Mean precision at each positive's rank; score ties keep input order."""

    g = _check_binary_inputs(scores, gold)
    n_pos = int(g.sum())
    if n_pos == 0:
        raise MetricError("average precision is undefined without gold positives")
    s = np.asarray(scores, dtype=float)
    order = np.argsort(-s, kind="stable")
    hits = 0
    total = 0.0
    for rank, idx in enumerate(order, start=1):
        if g[idx] == 1:
            hits += 1
            total += hits / rank
    return total / n_pos


def classification_report(
    scores: Sequence[float],
    gold: Sequence[int],
    threshold: float = DEFAULT_THRESHOLD,
) -> ClassificationReport:
    """Thresholded confusion metrics plus the two ranking areas.

    Zero-denominator precision (no predicted positives) is reported as 0.0
    with a flag. Gold containing a single class is an error, because the
    ranking metrics have no defined value there.
    """

    g = _check_binary_inputs(scores, gold)
    n_pos = int(g.sum())
    if n_pos == 0 or n_pos == len(g):
        raise MetricError(
            "classification_report needs both classes in gold; "
            f"got {n_pos} positives out of {len(g)}"
        )
    confusion = ConfusionCounts.from_scores(scores, g.tolist(), threshold)
    flags: list[str] = []
    accuracy = (confusion.tp + confusion.tn) / confusion.total
    if confusion.tp + confusion.fp == 0:
        precision = 0.0
        flags.append("precision_zero_denominator")
    else:
        precision = confusion.tp / (confusion.tp + confusion.fp)
    recall = confusion.tp / (confusion.tp + confusion.fn)
    if precision + recall == 0.0:
        f1 = 0.0
        flags.append("f1_zero_denominator")
    else:
        f1 = 2.0 * precision * recall / (precision + recall)
    return ClassificationReport(
        count=confusion.total,
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
        auroc=auroc(scores, g),
        auprc=average_precision(scores, g),
        confusion=confusion,
        flags=tuple(flags),
    )


@dataclass(frozen=True)
class LabelMetrics:
    """Per-label F1 and area under the precision-recall curve.

    Both are None when the label never occurs in gold; undefined is not 0.
    """

    f1: float | None
    auprc: float | None


def multilabel_report(
    scores: Sequence[Sequence[float]],
    gold: Sequence[Sequence[int]],
    labels: Sequence[str],
    threshold: float = DEFAULT_THRESHOLD,
) -> dict[str, LabelMetrics]:
    """Column-wise binary metrics over an (n_records, n_labels) matrix."""

    s = np.asarray(scores, dtype=float)
    g = np.asarray(gold)
    if s.ndim != 2 or g.shape != s.shape:
        raise MetricError(f"score/gold shapes {s.shape} vs {g.shape} must match")
    if s.shape[0] == 0:
        raise MetricError("cannot score an empty input")
    if s.shape[1] != len(labels):
        raise MetricError(
            f"{s.shape[1]} score columns for {len(labels)} labels"
        )
    out: dict[str, LabelMetrics] = {}
    for j, label in enumerate(labels):
        col_gold = g[:, j].astype(int)
        if col_gold.sum() == 0:
            out[label] = LabelMetrics(f1=None, auprc=None)
            continue
        confusion = ConfusionCounts.from_scores(s[:, j], col_gold.tolist(), threshold)
        denom_p = confusion.tp + confusion.fp
        precision = confusion.tp / denom_p if denom_p else 0.0
        recall = confusion.tp / (confusion.tp + confusion.fn)
        f1 = (
            2.0 * precision * recall / (precision + recall)
            if precision + recall > 0
            else 0.0
        )
        out[label] = LabelMetrics(f1=f1, auprc=average_precision(s[:, j], col_gold))
    return out


# ---------------------------------------------------------------------------
# BLEU


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(
        " ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1)
    )


@dataclass
class _BleuStats:
    matches: list[int]
    totals: list[int]
    hyp_len: int
    ref_len: int


def _bleu_segment_stats(
    hyp_tokens: list[str], ref_token_lists: list[list[str]], max_n: int
) -> _BleuStats:
    matches = []
    totals = []
    for n in range(1, max_n + 1):
        hyp_counts = _ngram_counts(hyp_tokens, n)
        best: Counter = Counter()
        for ref_tokens in ref_token_lists:
            ref_counts = _ngram_counts(ref_tokens, n)
            for gram, count in ref_counts.items():
                if count > best[gram]:
                    best[gram] = count
        matches.append(sum(min(c, best[g]) for g, c in hyp_counts.items()))
        totals.append(sum(hyp_counts.values()))
    hyp_len = len(hyp_tokens)
    # closest reference length; ties go to the shorter reference
    ref_len = min(
        (r for r in map(len, ref_token_lists)),
        key=lambda r: (abs(r - hyp_len), r),
    )
    return _BleuStats(matches=matches, totals=totals, hyp_len=hyp_len, ref_len=ref_len)


def _bleu_from_stats(stats: _BleuStats, max_n: int) -> float:
    """Geometric mean of modified precisions, add-one smoothed for n > 1,
    times the brevity penalty."""

    if stats.hyp_len == 0:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        m, t = stats.matches[n - 1], stats.totals[n - 1]
        if n == 1:
            if m == 0:
                return 0.0
            p = m / t
        else:
            p = (m + 1.0) / (t + 1.0)
        log_sum += math.log(p) / max_n
    if stats.hyp_len > stats.ref_len:
        bp = 1.0
    else:
        bp = math.exp(1.0 - stats.ref_len / stats.hyp_len)
    return bp * math.exp(log_sum)


def _check_references(references: Sequence[str]) -> list[list[str]]:
    if not references:
        raise MetricError("need at least one reference")
    return [metric_tokenize(r) for r in references]


def bleu(hypothesis: str, references: Sequence[str], max_n: int = BLEU_MAX_N) -> float:
    """Sentence BLEU in [0, 1] with uniform n-gram weights."""

    ref_tokens = _check_references(references)
    stats = _bleu_segment_stats(metric_tokenize(hypothesis), ref_tokens, max_n)
    return _bleu_from_stats(stats, max_n)


def corpus_bleu(
    pairs: Sequence[tuple[str, Sequence[str]]], max_n: int = BLEU_MAX_N
) -> float:
    """Corpus BLEU: n-gram and length statistics pooled over all segments."""

    if not pairs:
        raise MetricError("cannot score an empty corpus")
    pooled = _BleuStats(
        matches=[0] * max_n, totals=[0] * max_n, hyp_len=0, ref_len=0
    )
    for hypothesis, references in pairs:
        seg = _bleu_segment_stats(
            metric_tokenize(hypothesis), _check_references(references), max_n
        )
        for n in range(max_n):
            pooled.matches[n] += seg.matches[n]
            pooled.totals[n] += seg.totals[n]
        pooled.hyp_len += seg.hyp_len
        pooled.ref_len += seg.ref_len
    return _bleu_from_stats(pooled, max_n)


# ---------------------------------------------------------------------------
# SARI


def _sari_operation_sets(
    s_counts: Counter, c_counts: Counter, r_counts: Counter, numref: int
) -> tuple[float, float, float]:
    """(keep F1, delete precision, add F1) for one n-gram order.

    Source and candidate counts are scaled by the reference count so multiset
    intersections weigh multiple references the way single counts are weighed.
    Empty denominator sets default the affected precision/recall to 1, which
    yields component = 1 when both sides are empty and 0 when only one is.
    """

    s_rep = Counter({g: c * numref for g, c in s_counts.items()})
    c_rep = Counter({g: c * numref for g, c in c_counts.items()})

    keep_candidate = s_rep & c_rep
    keep_good = keep_candidate & r_counts
    keep_all = s_rep & r_counts
    keep_p_num = sum(keep_good[g] / keep_candidate[g] for g in keep_good)
    keep_r_num = sum(keep_good[g] / keep_all[g] for g in keep_good)
    keep_p = keep_p_num / len(keep_candidate) if keep_candidate else 1.0
    keep_r = keep_r_num / len(keep_all) if keep_all else 1.0
    keep = 2 * keep_p * keep_r / (keep_p + keep_r) if keep_p + keep_r > 0 else 0.0

    del_candidate = s_rep - c_rep
    del_good = del_candidate - r_counts
    del_p_num = sum(del_good[g] / del_candidate[g] for g in del_good)
    del_p = del_p_num / len(del_candidate) if del_candidate else 1.0

    add_candidate = set(c_counts) - set(s_counts)
    add_good = add_candidate & set(r_counts)
    add_all = set(r_counts) - set(s_counts)
    add_p = len(add_good) / len(add_candidate) if add_candidate else 1.0
    add_r = len(add_good) / len(add_all) if add_all else 1.0
    add = 2 * add_p * add_r / (add_p + add_r) if add_p + add_r > 0 else 0.0

    return keep, del_p, add


def sari(
    source: str,
    hypothesis: str,
    references: Sequence[str],
    max_n: int = SARI_MAX_N,
) -> float:
    """SARI in [0, 100]: the add/keep/delete n-gram operation scores averaged
    over n = 1..4 and over the three operations."""

    if not references:
        raise MetricError("need at least one reference")
    numref = len(references)
    s_tokens = metric_tokenize(source)
    c_tokens = metric_tokenize(hypothesis)
    r_token_lists = [metric_tokenize(r) for r in references]
    keep_sum = del_sum = add_sum = 0.0
    for n in range(1, max_n + 1):
        r_counts: Counter = Counter()
        for r_tokens in r_token_lists:
            r_counts.update(_ngram_counts(r_tokens, n))
        keep, delete, add = _sari_operation_sets(
            _ngram_counts(s_tokens, n),
            _ngram_counts(c_tokens, n),
            r_counts,
            numref,
        )
        keep_sum += keep
        del_sum += delete
        add_sum += add
    return 100.0 * (keep_sum + del_sum + add_sum) / (3.0 * max_n)


# ---------------------------------------------------------------------------
# readability and edit metrics


def _syllables(word: str) -> int:
    """Maximal vowel groups, minimum one; a lone trailing 'e' is dropped
    when the word has more than one group."""

    groups = _VOWEL_GROUPS.findall(word.casefold())
    count = len(groups)
    if count > 1 and word.casefold().endswith("e") and groups[-1] == "e":
        count -= 1
    return max(count, 1)


def _fkgl_counts(text: str) -> tuple[int, int, int]:
    words = metric_tokenize(text)
    sentences = [s for s in split_sentences(text) if s.strip()]
    if not words or not sentences:
        raise MetricError("FKGL needs at least one word and one sentence")
    syllables = sum(_syllables(w) for w in words)
    return len(words), len(sentences), syllables


def fkgl(text: str) -> float:
    """Flesch-Kincaid grade level of one text."""

    w, s, syl = _fkgl_counts(text)
    return 0.39 * (w / s) + 11.8 * (syl / w) - 15.59


def corpus_fkgl(texts: Sequence[str]) -> float:
    """Grade level over pooled word/sentence/syllable counts."""

    if not texts:
        raise MetricError("cannot score an empty corpus")
    w = s = syl = 0
    for text in texts:
        tw, ts, tsyl = _fkgl_counts(text)
        w += tw
        s += ts
        syl += tsyl
    return 0.39 * (w / s) + 11.8 * (syl / w) - 15.59


def levenshtein_similarity(a: str, b: str) -> float:
    """1 minus the character edit distance scaled by the longer length."""

    if not a and not b:
        return 1.0
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
            )
        previous = current
    return 1.0 - previous[len(b)] / len(a)


@dataclass(frozen=True)
class SurfaceStats:
    compression_ratio: float
    sentence_splits: float
    exact_copies: float
    additions_proportion: float
    deletions_proportion: float


def surface_stats(source: str, hypothesis: str) -> SurfaceStats:
    """Word-level surface comparison on metric tokens.

    Additions and deletions are multiset differences scaled by the length of
    the side they are measured against; an empty hypothesis has no additions.
    """

    s_tokens = metric_tokenize(source)
    h_tokens = metric_tokenize(hypothesis)
    if not s_tokens:
        raise MetricError("source has no tokens")
    s_counts = Counter(s_tokens)
    h_counts = Counter(h_tokens)
    added = sum((h_counts - s_counts).values())
    deleted = sum((s_counts - h_counts).values())
    s_sentences = len([x for x in split_sentences(source) if x.strip()]) or 1
    h_sentences = len([x for x in split_sentences(hypothesis) if x.strip()]) or 1
    return SurfaceStats(
        compression_ratio=len(h_tokens) / len(s_tokens),
        sentence_splits=h_sentences / s_sentences,
        exact_copies=1.0 if h_tokens == s_tokens else 0.0,
        additions_proportion=added / len(h_tokens) if h_tokens else 0.0,
        deletions_proportion=deleted / len(s_tokens),
    )


def load_frequency_table(path: str | Path) -> dict[str, int]:
    """Read a word<TAB>rank table; ranks are positive integers."""

    path = Path(path)
    table: dict[str, int] = {}
    try:
        fh = path.open(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"{path}:{lineno}: expected 'word<TAB>rank'")
            word, rank_text = parts
            try:
                rank = int(rank_text)
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: rank {rank_text!r} is not an integer") from exc
            if rank < 1:
                raise DataError(f"{path}:{lineno}: rank must be >= 1")
            if word in table:
                raise DataError(f"{path}:{lineno}: duplicate word {word!r}")
            table[word] = rank
    return table


def _third_quartile(values: Sequence[float]) -> float:
    """Hazen plotting position: h = 0.75 n + 0.5, linearly interpolated."""

    ordered = sorted(values)
    n = len(ordered)
    if n == 0:
        raise MetricError("quartile of an empty sample")
    h = 0.75 * n + 0.5
    lo = int(math.floor(h))
    if lo < 1:
        return ordered[0]
    if lo >= n:
        return ordered[-1]
    frac = h - lo
    return ordered[lo - 1] + frac * (ordered[lo] - ordered[lo - 1])


def lexical_complexity(text: str, frequency_table: Mapping[str, int]) -> float:
    """Third quartile of log2 frequency ranks over the text's tokens.

    Words missing from the table rank one past its size, so an empty table
    gives every word rank 1 and a score of 0.
    """

    tokens = metric_tokenize(text)
    if not tokens:
        raise MetricError("lexical complexity of a text with no tokens")
    unknown_rank = len(frequency_table) + 1
    ranks = [frequency_table.get(tok, unknown_rank) for tok in tokens]
    return _third_quartile([math.log2(r) for r in ranks])


# ---------------------------------------------------------------------------
# corpus-level simplification scoring


@dataclass(frozen=True)
class SimplificationExample:
    source: str
    hypothesis: str
    references: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.references:
            raise MetricError("each example needs at least one reference")


@dataclass(frozen=True)
class SimplificationScores:
    count: int
    sari: float
    bleu: float
    fkgl: float
    compression_ratio: float
    sentence_splits: float
    levenshtein_similarity: float
    exact_copies: float
    additions_proportion: float
    deletions_proportion: float
    lexical_complexity: float


def evaluate_simplification(
    examples: Sequence[SimplificationExample],
    frequency_table: Mapping[str, int] | None = None,
) -> SimplificationScores:
    """Aggregate the Table-style simplification metrics over a corpus.

    SARI and the surface measures are means of per-example values; BLEU and
    FKGL pool their counts; lexical complexity is a single quartile over all
    hypothesis tokens together.
    """

    if not examples:
        raise MetricError("cannot score an empty corpus")
    table = frequency_table if frequency_table is not None else {}
    sari_sum = lev_sum = 0.0
    comp_sum = split_sum = copy_sum = add_sum = del_sum = 0.0
    for ex in examples:
        sari_sum += sari(ex.source, ex.hypothesis, ex.references)
        lev_sum += levenshtein_similarity(ex.source, ex.hypothesis)
        surface = surface_stats(ex.source, ex.hypothesis)
        comp_sum += surface.compression_ratio
        split_sum += surface.sentence_splits
        copy_sum += surface.exact_copies
        add_sum += surface.additions_proportion
        del_sum += surface.deletions_proportion
    n = len(examples)
    pooled_tokens = " ".join(ex.hypothesis for ex in examples)
    return SimplificationScores(
        count=n,
        sari=sari_sum / n,
        bleu=corpus_bleu([(ex.hypothesis, ex.references) for ex in examples]),
        fkgl=corpus_fkgl([ex.hypothesis for ex in examples]),
        compression_ratio=comp_sum / n,
        sentence_splits=split_sum / n,
        levenshtein_similarity=lev_sum / n,
        exact_copies=copy_sum / n,
        additions_proportion=add_sum / n,
        deletions_proportion=del_sum / n,
        lexical_complexity=lexical_complexity(pooled_tokens, table),
    )
