import math
import random

import pytest

from mtlab.bleu import BleuError, ScoringConfig, corpus_bleu, sentence_bleu


def oracle_bleu(candidates, references, max_n=4):
    """Brute-force reference scorer: explicit loops, no shared code."""
    matches = [0] * max_n
    totals = [0] * max_n
    cand_len = ref_len = 0
    for cand, ref in zip(candidates, references):
        c = cand.split()
        r = ref.split()
        cand_len += len(c)
        ref_len += len(r)
        for n in range(1, max_n + 1):
            cand_grams = [" ".join(c[i : i + n]) for i in range(len(c) - n + 1)]
            ref_grams = [" ".join(r[i : i + n]) for i in range(len(r) - n + 1)]
            totals[n - 1] += len(cand_grams)
            for gram in set(cand_grams):
                matches[n - 1] += min(cand_grams.count(gram), ref_grams.count(gram))
    precisions = []
    for n in range(max_n):
        precisions.append(matches[n] / totals[n] if totals[n] else 0.0)
    bp = min(1.0, math.exp(1 - ref_len / cand_len)) if cand_len else 0.0
    if any(p == 0 for p in precisions):
        return 0.0
    return bp * math.exp(sum(math.log(p) for p in precisions) / max_n) * 100.0


def test_identity_scores_100():
    sentences = ["the cat sat on the mat", "a quick brown fox jumps over the dog"]
    report = corpus_bleu(sentences, sentences)
    assert report.score == pytest.approx(100.0)
    assert report.brevity_penalty == 1.0
    assert all(p == 1.0 for p in report.precisions)


def test_clipped_unigram_fixture():
    # "the" occurs twice in the reference, so the clipped count is 2 of 4
    report = corpus_bleu(["the the the the"], ["the cat the mat"])
    assert report.precisions[0] == pytest.approx(2 / 4)


def test_clipping_caps_at_reference_count():
    report = corpus_bleu(["the the the the"], ["the cat"])
    assert report.precisions[0] == pytest.approx(1 / 4)


def test_brevity_penalty_factor_e():
    # candidate length 2, reference length 2e is not integral; use ratio 1:2
    report = corpus_bleu(["a b c d"], ["a b c d e f g h"])
    assert report.brevity_penalty == pytest.approx(math.exp(1 - 2.0))


def test_matches_oracle_on_random_pairs():
    rng = random.Random(42)
    vocab = ["the", "cat", "dog", "sat", "mat", "on", "a", "ran", "big", "small"]
    for _ in range(50):
        n = rng.randint(1, 4)
        cands = [" ".join(rng.choices(vocab, k=rng.randint(4, 12))) for _ in range(n)]
        refs = [" ".join(rng.choices(vocab, k=rng.randint(4, 12))) for _ in range(n)]
        ours = corpus_bleu(cands, refs).score
        theirs = oracle_bleu(cands, refs)
        assert ours == pytest.approx(theirs, abs=1e-9)


def test_permutation_invariance():
    cands = ["a b c d", "e f g h", "the cat sat here"]
    refs = ["a b c x", "e f g h", "the dog sat here"]
    base = corpus_bleu(cands, refs).score
    order = [2, 0, 1]
    permuted = corpus_bleu([cands[i] for i in order], [refs[i] for i in order]).score
    assert permuted == pytest.approx(base)


def test_degrading_a_candidate_never_helps():
    cands = ["the cat sat on the mat", "a big dog ran fast today", "small birds fly south now"]
    refs = ["the cat sat on the mat", "a big dog ran fast today", "small birds fly south now"]
    base = corpus_bleu(cands, refs).score
    worse = list(cands)
    worse[1] = "zzz yyy xxx www vvv uuu"
    assert corpus_bleu(worse, refs).score <= base


def test_corpus_pooling_is_not_sentence_average():
    cands = ["the cat", "a b c d e f g h"]
    refs = ["the cat", "a b c d e f g h x"]
    pooled = corpus_bleu(cands, refs)
    per_sentence = [corpus_bleu([c], [r]).score for c, r in zip(cands, refs)]
    assert pooled.score != pytest.approx(sum(per_sentence) / 2)


def test_length_mismatch_rejected():
    with pytest.raises(BleuError):
        corpus_bleu(["a"], ["a", "b"])
    with pytest.raises(BleuError):
        corpus_bleu([], [])


def test_sentence_identity():
    assert sentence_bleu("der gleiche satz hier", "der gleiche satz hier").score == pytest.approx(100.0)


def test_sentence_zero_overlap_unsmoothed_is_zero():
    config = ScoringConfig(smoothing="none")
    assert sentence_bleu("aa bb cc dd", "ee ff gg hh", config).score == 0.0


def test_sentence_add_one_smoothing_positive():
    config = ScoringConfig(smoothing="add_one")
    report = sentence_bleu("the cat sat down", "the cat slept well", config)
    assert report.score > 0.0
    # recompute the smoothed value by hand: p1=2/4, p2=1/3, p3 and p4 smoothed
    expected = math.exp(
        (math.log(2 / 4) + math.log(1 / 3) + math.log(1 / 3) + math.log(1 / 2)) / 4
    ) * 100.0
    assert report.score == pytest.approx(expected)


def test_case_sensitivity_flag():
    config = ScoringConfig(case_sensitive=False)
    assert corpus_bleu(["The Cat Sat Here"], ["the cat sat here"], config).score == pytest.approx(100.0)
    assert corpus_bleu(["The Cat Sat Here"], ["the cat sat here"]).score < 100.0


def test_score_range_invariants():
    rng = random.Random(1)
    vocab = ["u", "v", "w", "x", "y", "z"]
    for _ in range(20):
        cands = [" ".join(rng.choices(vocab, k=rng.randint(4, 9)))]
        refs = [" ".join(rng.choices(vocab, k=rng.randint(4, 9)))]
        report = corpus_bleu(cands, refs, ScoringConfig(smoothing="add_one"))
        assert 0.0 <= report.score <= 100.0
        assert 0.0 < report.brevity_penalty <= 1.0
