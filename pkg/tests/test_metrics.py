import random

import pytest

import oracles
from simpguard.errors import DataError, MetricError
from simpguard.metrics import (
    ConfusionCounts,
    SimplificationExample,
    average_precision,
    auroc,
    bleu,
    classification_report,
    corpus_bleu,
    corpus_fkgl,
    evaluate_simplification,
    fkgl,
    levenshtein_similarity,
    lexical_complexity,
    load_frequency_table,
    metric_tokenize,
    multilabel_report,
    sari,
    surface_stats,
)


class TestTokenize:
    def test_strips_punctuation_and_casefolds(self):
        assert metric_tokenize("The cat, sat!") == ["the", "cat", "sat"]

    def test_inner_punctuation_kept(self):
        assert metric_tokenize("it's state-of-the-art.") == ["it's", "state-of-the-art"]

    def test_pure_punctuation_tokens_dropped(self):
        assert metric_tokenize("wait -- what ?!") == ["wait", "what"]


class TestClassificationReport:
    def test_hand_confusion(self):
        # tp=3 fp=1 fn=2 tn=4
        scores = [0.9] * 3 + [0.9] + [0.1] * 2 + [0.1] * 4
        gold = [1] * 3 + [0] + [1] * 2 + [0] * 4
        report = classification_report(scores, gold)
        assert report.confusion == ConfusionCounts(tp=3, fp=1, tn=4, fn=2)
        assert report.precision == pytest.approx(0.75)
        assert report.recall == pytest.approx(0.6)
        assert report.f1 == pytest.approx(0.66667, abs=1e-5)
        assert report.accuracy == pytest.approx(0.7)

    def test_threshold_is_inclusive(self):
        report = classification_report([0.5, 0.4], [1, 0], threshold=0.5)
        assert report.confusion.tp == 1
        assert report.confusion.tn == 1

    def test_zero_denominators_are_flagged(self):
        # No positive predictions: precision 0/0 reported as 0 and flagged.
        report = classification_report([0.1, 0.2], [1, 0])
        assert report.precision == 0.0
        assert "precision_zero_denominator" in report.flags

    def test_single_class_gold_rejected(self):
        with pytest.raises(MetricError, match="both classes"):
            classification_report([0.1, 0.9], [1, 1])

    def test_empty_rejected(self):
        with pytest.raises(MetricError):
            classification_report([], [])

    def test_matches_recount_oracle(self):
        rng = random.Random(4)
        for _ in range(50):
            n = rng.randint(4, 30)
            gold = [rng.randint(0, 1) for _ in range(n)]
            if len(set(gold)) < 2:
                gold[0], gold[1] = 0, 1
            scores = [rng.choice([0.0, 0.25, 0.5, 0.75, 1.0]) for _ in range(n)]
            report = classification_report(scores, gold)
            tp, fp, tn, fn = oracles.confusion(scores, gold)
            p, r, f1 = oracles.precision_recall_f1(tp, fp, fn)
            assert (report.confusion.tp, report.confusion.fp) == (tp, fp)
            assert report.accuracy == pytest.approx((tp + tn) / n, abs=1e-12)
            assert report.f1 == pytest.approx(f1, abs=1e-12)


class TestRankingMetrics:
    def test_auroc_hand_values(self):
        assert auroc([0.9, 0.8, 0.3, 0.2], [1, 1, 0, 0]) == 1.0
        assert auroc([0.2, 0.3, 0.8], [1, 0, 0]) == 0.0
        # One tied positive/negative pair counts half.
        assert auroc([0.5, 0.5], [1, 0]) == 0.5

    def test_auroc_needs_both_classes(self):
        with pytest.raises(MetricError):
            auroc([0.5, 0.6], [1, 1])

    def test_average_precision_hand_values(self):
        assert average_precision([0.9, 0.8, 0.1], [1, 1, 0]) == 1.0
        # Positive ranked second: AP = 1/2.
        assert average_precision([0.9, 0.8], [0, 1]) == pytest.approx(0.5)

    def test_average_precision_needs_a_positive(self):
        with pytest.raises(MetricError):
            average_precision([0.5], [0])

    def test_ranking_oracles(self):
        rng = random.Random(7)
        for _ in range(60):
            n = rng.randint(3, 40)
            gold = [rng.randint(0, 1) for _ in range(n)]
            if len(set(gold)) < 2:
                gold[0], gold[1] = 0, 1
            tie_prone = rng.random() < 0.5
            scores = [
                rng.choice([0.0, 0.5, 1.0]) if tie_prone else rng.random()
                for _ in range(n)
            ]
            assert auroc(scores, gold) == pytest.approx(
                oracles.auroc(scores, gold), abs=1e-12
            )
            assert average_precision(scores, gold) == pytest.approx(
                oracles.average_precision(scores, gold), abs=1e-12
            )


class TestMultilabel:
    LABELS = ("x", "y", "z")

    def test_label_absent_from_gold_is_undefined(self):
        scores = [[0.9, 0.2, 0.1], [0.8, 0.3, 0.2]]
        gold = [[1, 0, 0], [0, 0, 0]]
        report = multilabel_report(scores, gold, self.LABELS)
        assert report["x"].f1 is not None
        assert report["y"].f1 is None and report["y"].auprc is None
        assert report["z"].f1 is None

    def test_all_positive_label_stays_defined(self):
        scores = [[0.9], [0.8]]
        gold = [[1], [1]]
        report = multilabel_report(scores, gold, ("only",))
        assert report["only"].f1 == pytest.approx(1.0)
        assert report["only"].auprc == pytest.approx(1.0)

    def test_agrees_with_binary_report_per_label(self):
        rng = random.Random(13)
        scores = [[rng.random()] for _ in range(30)]
        gold = [[rng.randint(0, 1)] for _ in range(30)]
        gold[0][0], gold[1][0] = 0, 1
        multi = multilabel_report(scores, gold, ("a",))["a"]
        flat = classification_report([s[0] for s in scores], [g[0] for g in gold])
        assert multi.f1 == pytest.approx(flat.f1)
        assert multi.auprc == pytest.approx(flat.auprc)


class TestBleu:
    def test_identity_is_one(self):
        text = "the quick brown fox jumps over the lazy dog"
        assert bleu(text, [text]) == pytest.approx(1.0)

    def test_no_unigram_overlap_is_zero(self):
        assert bleu("alpha beta", ["gamma delta"]) == 0.0

    def test_empty_hypothesis_is_zero(self):
        assert bleu("", ["something"]) == 0.0

    def test_matches_oracle_on_random_pairs(self):
        rng = random.Random(21)
        vocab = "a b c d e f g".split()
        for _ in range(60):
            hyp = " ".join(rng.choices(vocab, k=rng.randint(0, 12)))
            refs = [
                " ".join(rng.choices(vocab, k=rng.randint(1, 12)))
                for _ in range(rng.randint(1, 3))
            ]
            assert bleu(hyp, refs) == pytest.approx(oracles.bleu(hyp, refs), abs=1e-9)

    def test_corpus_pooling_matches_oracle(self):
        pairs = [
            ("the cat sat", ["the cat sat on the mat"]),
            ("a dog barked loudly", ["a dog barked", "the dog barked loudly"]),
            ("completely different words", ["nothing shared here"]),
        ]
        assert corpus_bleu(pairs) == pytest.approx(oracles.corpus_bleu(pairs), abs=1e-9)

    def test_needs_references(self):
        with pytest.raises(MetricError):
            bleu("text", [])


class TestSari:
    def test_identity_triple_is_hundred(self):
        text = "the committee approved the proposal"
        assert sari(text, text, [text]) == pytest.approx(100.0)

    def test_good_deletion_scores_high(self):
        source = "the big red cat sat"
        hyp = "the cat sat"
        assert sari(source, hyp, [hyp]) == pytest.approx(100.0)

    def test_matches_oracle_on_random_triples(self):
        rng = random.Random(31)
        vocab = "a b c d e f".split()
        for _ in range(60):
            src = " ".join(rng.choices(vocab, k=rng.randint(1, 10)))
            hyp = " ".join(rng.choices(vocab, k=rng.randint(0, 10)))
            refs = [
                " ".join(rng.choices(vocab, k=rng.randint(1, 10)))
                for _ in range(rng.randint(1, 3))
            ]
            assert sari(src, hyp, refs) == pytest.approx(
                oracles.sari(src, hyp, refs), abs=1e-9
            )


class TestReadability:
    @pytest.mark.parametrize(
        ("word", "count"),
        [("cat", 1), ("made", 1), ("beautiful", 3), ("queue", 1), ("rhythm", 1)],
    )
    def test_syllable_heuristic(self, word, count):
        from simpguard.metrics import _syllables

        assert _syllables(word) == count

    def test_fkgl_anchor(self):
        assert fkgl("The cat sat on the mat.") == pytest.approx(-1.45, abs=0.01)

    def test_fkgl_invariant_under_duplication(self):
        text = "The cat sat on the mat. The dog slept."
        doubled = text + " " + text
        assert fkgl(doubled) == pytest.approx(fkgl(text), abs=1e-9)

    def test_corpus_fkgl_pools_counts(self):
        texts = ["The cat sat on the mat.", "Science requires careful observation."]
        pooled = corpus_fkgl(texts)
        assert pooled == pytest.approx(fkgl(" ".join(texts)), abs=1e-9)

    def test_fkgl_empty_rejected(self):
        with pytest.raises(MetricError):
            fkgl("   ")


class TestLevenshtein:
    def test_anchor(self):
        assert levenshtein_similarity("kitten", "sitting") == pytest.approx(
            0.57143, abs=1e-5
        )

    def test_edge_cases(self):
        assert levenshtein_similarity("", "") == 1.0
        assert levenshtein_similarity("abc", "") == 0.0
        assert levenshtein_similarity("same", "same") == 1.0

    def test_symmetric_and_matches_oracle(self):
        rng = random.Random(17)
        for _ in range(60):
            a = "".join(rng.choices("abc", k=rng.randint(0, 12)))
            b = "".join(rng.choices("abc", k=rng.randint(0, 12)))
            ours = levenshtein_similarity(a, b)
            assert ours == pytest.approx(oracles.levenshtein_similarity(a, b), abs=1e-12)
            assert ours == pytest.approx(levenshtein_similarity(b, a), abs=1e-12)


class TestSurfaceStats:
    def test_hand_example(self):
        stats = surface_stats("a b c d", "a b")
        assert stats.compression_ratio == pytest.approx(0.5)
        assert stats.deletions_proportion == pytest.approx(0.5)
        assert stats.additions_proportion == pytest.approx(0.0)
        assert stats.exact_copies == 0.0

    def test_exact_copy_detected(self):
        stats = surface_stats("same text.", "same text.")
        assert stats.exact_copies == 1.0

    def test_sentence_splits(self):
        stats = surface_stats("One long sentence here.", "Split one. Split two.")
        assert stats.sentence_splits == pytest.approx(2.0)

    def test_empty_source_rejected(self):
        with pytest.raises(MetricError):
            surface_stats("   ", "out")


class TestLexicalComplexity:
    def test_third_quartile_of_log_ranks(self, tmp_path):
        path = tmp_path / "freq.tsv"
        path.write_text("aa\t2\nbb\t4\ncc\t8\ndd\t16\n")
        table = load_frequency_table(path)
        # log2 ranks are 1,2,3,4; Hazen Q3 of those is 3.5.
        value = lexical_complexity("aa bb cc dd", table)
        assert value == pytest.approx(3.5)

    def test_unknown_words_rank_below_table(self, tmp_path):
        path = tmp_path / "freq.tsv"
        path.write_text("known\t1\n")
        table = load_frequency_table(path)
        import math

        value = lexical_complexity("mystery mystery mystery", table)
        assert value == pytest.approx(math.log2(len(table) + 1))

    def test_duplicate_table_entry_rejected(self, tmp_path):
        path = tmp_path / "freq.tsv"
        path.write_text("word\t1\nword\t2\n")
        with pytest.raises(DataError, match="duplicate"):
            load_frequency_table(path)

    def test_empty_text_rejected(self):
        with pytest.raises(MetricError):
            lexical_complexity("  ", {})


class TestEvaluateSimplification:
    def test_aggregates_over_examples(self, data_dir):
        examples = [
            SimplificationExample(
                source="The committee approved the proposal after a long debate.",
                hypothesis="The committee approved the proposal.",
                references=["The committee approved the plan."],
            ),
            SimplificationExample(
                source="Cells use enzymes to accelerate chemical reactions.",
                hypothesis="Cells use enzymes to accelerate chemical reactions.",
                references=["Enzymes speed up reactions in cells."],
            ),
        ]
        table = load_frequency_table(data_dir / "wordfreq.tsv")
        scores = evaluate_simplification(examples, table)
        assert scores.count == 2
        assert 0.0 <= scores.bleu <= 1.0
        assert 0.0 <= scores.sari <= 100.0
        assert scores.exact_copies == pytest.approx(0.5)
        expected_bleu = oracles.corpus_bleu(
            [(e.hypothesis, list(e.references)) for e in examples]
        )
        assert scores.bleu == pytest.approx(expected_bleu, abs=1e-9)

    def test_needs_examples(self):
        with pytest.raises(MetricError):
            evaluate_simplification([])
