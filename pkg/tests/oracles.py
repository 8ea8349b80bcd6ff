"""Brute-force reference implementations used to cross-check the package.

Everything here is deliberately slow and direct: explicit loops, full DP
matrices, full sorts. N-grams are keyed by tuples rather than joined
strings so the implementations share no representation with the package.
"""

from __future__ import annotations

import math
import string


def tokenize(text: str) -> list[str]:
    out = []
    for raw in text.split():
        token = raw.strip(string.punctuation).casefold()
        if token:
            out.append(token)
    return out


def confusion(scores, gold, threshold=0.5):
    tp = fp = tn = fn = 0
    for s, g in zip(scores, gold):
        predicted = s >= threshold
        if predicted and g:
            tp += 1
        elif predicted and not g:
            fp += 1
        elif not predicted and not g:
            tn += 1
        else:
            fn += 1
    return tp, fp, tn, fn


def precision_recall_f1(tp, fp, fn):
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0.0:
        return precision, recall, 0.0
    return precision, recall, 2 * precision * recall / (precision + recall)


def auroc(scores, gold):
    positives = [s for s, g in zip(scores, gold) if g]
    negatives = [s for s, g in zip(scores, gold) if not g]
    total = 0.0
    for p in positives:
        for q in negatives:
            if p > q:
                total += 1.0
            elif p == q:
                total += 0.5
    return total / (len(positives) * len(negatives))


def average_precision(scores, gold):
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    hits = 0
    total = 0.0
    for rank, i in enumerate(order, start=1):
        if gold[i]:
            hits += 1
            total += hits / rank
    return total / hits


def levenshtein_similarity(a: str, b: str) -> float:
    if not a and not b:
        return 1.0
    rows, cols = len(a) + 1, len(b) + 1
    d = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        d[i][0] = i
    for j in range(cols):
        d[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost)
    return 1.0 - d[rows - 1][cols - 1] / max(len(a), len(b))


def _ngrams(tokens, n):
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def _count(items):
    counts: dict = {}
    for item in items:
        counts[item] = counts.get(item, 0) + 1
    return counts


def bleu_segment_stats(hyp_tokens, ref_token_lists, max_n=4):
    matches = []
    totals = []
    for n in range(1, max_n + 1):
        hyp_counts = _count(_ngrams(hyp_tokens, n))
        clipped: dict = {}
        for ref_tokens in ref_token_lists:
            for gram, count in _count(_ngrams(ref_tokens, n)).items():
                if count > clipped.get(gram, 0):
                    clipped[gram] = count
        matches.append(
            sum(min(count, clipped.get(g, 0)) for g, count in hyp_counts.items())
        )
        totals.append(sum(hyp_counts.values()))
    hyp_len = len(hyp_tokens)
    ref_len = None
    for ref_tokens in ref_token_lists:
        r = len(ref_tokens)
        if ref_len is None or (abs(r - hyp_len), r) < (abs(ref_len - hyp_len), ref_len):
            ref_len = r
    return matches, totals, hyp_len, ref_len


def bleu_from_stats(matches, totals, hyp_len, ref_len, max_n=4):
    if hyp_len == 0:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        m, t = matches[n - 1], totals[n - 1]
        if n == 1:
            if m == 0:
                return 0.0
            p = m / t
        else:
            p = (m + 1.0) / (t + 1.0)
        log_sum += math.log(p) / max_n
    penalty = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    return penalty * math.exp(log_sum)


def bleu(hypothesis, references, max_n=4):
    stats = bleu_segment_stats(
        tokenize(hypothesis), [tokenize(r) for r in references], max_n
    )
    return bleu_from_stats(*stats, max_n=max_n)


def corpus_bleu(pairs, max_n=4):
    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = 0
    ref_len = 0
    for hypothesis, references in pairs:
        m, t, h, r = bleu_segment_stats(
            tokenize(hypothesis), [tokenize(x) for x in references], max_n
        )
        for n in range(max_n):
            matches[n] += m[n]
            totals[n] += t[n]
        hyp_len += h
        ref_len += r
    return bleu_from_stats(matches, totals, hyp_len, ref_len, max_n=max_n)


def _multiset_min(a, b):
    return {g: min(a[g], b[g]) for g in a if g in b}


def _multiset_sub(a, b):
    out = {}
    for g, count in a.items():
        remaining = count - b.get(g, 0)
        if remaining > 0:
            out[g] = remaining
    return out


def sari(source, hypothesis, references, max_n=4):
    numref = len(references)
    s_tokens = tokenize(source)
    c_tokens = tokenize(hypothesis)
    r_token_lists = [tokenize(r) for r in references]
    keep_sum = del_sum = add_sum = 0.0
    for n in range(1, max_n + 1):
        s = _count(_ngrams(s_tokens, n))
        c = _count(_ngrams(c_tokens, n))
        r: dict = {}
        for tokens in r_token_lists:
            for gram, count in _count(_ngrams(tokens, n)).items():
                r[gram] = r.get(gram, 0) + count
        s_rep = {g: count * numref for g, count in s.items()}
        c_rep = {g: count * numref for g, count in c.items()}

        keep_cand = _multiset_min(s_rep, c_rep)
        keep_good = _multiset_min(keep_cand, r)
        keep_all = _multiset_min(s_rep, r)
        kp = (
            sum(keep_good[g] / keep_cand[g] for g in keep_good) / len(keep_cand)
            if keep_cand
            else 1.0
        )
        kr = (
            sum(keep_good[g] / keep_all[g] for g in keep_good) / len(keep_all)
            if keep_all
            else 1.0
        )
        keep_sum += 2 * kp * kr / (kp + kr) if kp + kr > 0 else 0.0

        del_cand = _multiset_sub(s_rep, c_rep)
        del_good = _multiset_sub(del_cand, r)
        dp = (
            sum(del_good[g] / del_cand[g] for g in del_good) / len(del_cand)
            if del_cand
            else 1.0
        )
        del_sum += dp

        add_cand = {g for g in c if g not in s}
        add_good = {g for g in add_cand if g in r}
        add_all = {g for g in r if g not in s}
        ap = len(add_good) / len(add_cand) if add_cand else 1.0
        ar = len(add_good) / len(add_all) if add_all else 1.0
        add_sum += 2 * ap * ar / (ap + ar) if ap + ar > 0 else 0.0
    return 100.0 * (keep_sum + del_sum + add_sum) / (3.0 * max_n)


def cosine(u, v):
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    return dot / (nu * nv)


def top_k_indices(vectors, query, k):
    sims = [cosine(v, query) for v in vectors]
    order = sorted(range(len(vectors)), key=lambda i: (-sims[i], i))
    return order[:k]
