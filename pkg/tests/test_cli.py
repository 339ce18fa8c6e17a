import json
import os

import pytest

from mtlab.cli import main, parse_duration
from mtlab.synth import entity_sentences, parking_sentences, toy_parallel_corpus
from mtlab.corpus import write_parallel


@pytest.fixture
def corpus_files(tmp_path):
    corpus = toy_parallel_corpus(40, seed=2)
    src, tgt = tmp_path / "c.src", tmp_path / "c.tgt"
    write_parallel(corpus, src, tgt)
    return str(src), str(tgt)


def run(args):
    return main([str(a) for a in args])


def test_parse_duration_forms():
    assert parse_duration("22260") == 22260.0
    assert parse_duration("22260s") == 22260.0
    assert parse_duration("371m") == 22260.0
    assert parse_duration("6h11m") == 22260.0
    with pytest.raises(Exception):
        parse_duration("soon")


def test_corpus_split_writes_manifest(tmp_path, corpus_files):
    src, tgt = corpus_files
    out = tmp_path / "out"
    code = run(["--out-dir", out, "--seed", 5, "corpus", "split",
                "--src", src, "--tgt", tgt, "--validation-size", 8])
    assert code == 0
    assert (out / "train.src").exists() and (out / "validation.tgt").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["subcommand"] == "corpus split"
    assert manifest["seed"] == 5
    assert set(manifest["inputs"]) == {"c.src", "c.tgt"}


def test_corpus_split_rerun_is_bit_identical(tmp_path, corpus_files):
    src, tgt = corpus_files
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        run(["--out-dir", out, "--seed", 5, "corpus", "split",
             "--src", src, "--tgt", tgt, "--validation-size", 8])
        outs.append((out / "train.src").read_bytes() + (out / "validation.src").read_bytes())
    assert outs[0] == outs[1]


def test_corpus_subsample_nested(tmp_path, corpus_files):
    src, tgt = corpus_files
    out = tmp_path / "out"
    assert run(["--out-dir", out, "corpus", "subsample", "--src", src, "--tgt", tgt,
                "--sizes", "5,10"]) == 0
    small = (out / "size-5.src").read_text().splitlines()
    big = (out / "size-10.src").read_text().splitlines()
    assert set(small) <= set(big)


def test_bpe_train_apply_detok_round_trip(tmp_path, corpus_files):
    src, tgt = corpus_files
    out = tmp_path / "out"
    assert run(["--out-dir", out, "bpe", "train", "--src", src, "--tgt", tgt,
                "--merges", "80"]) == 0
    model_path = out / "bpe.model"
    assert model_path.exists()
    assert run(["--out-dir", out, "bpe", "apply", "--model", model_path,
                "--input", src, "--output", "tok.txt"]) == 0
    assert run(["--out-dir", out, "bpe", "detok", "--input", out / "tok.txt",
                "--output", "detok.txt"]) == 0
    assert (out / "detok.txt").read_bytes() == open(src, "rb").read()


def test_bpe_zero_merges_gives_character_output(tmp_path, corpus_files):
    src, tgt = corpus_files
    out = tmp_path / "out"
    run(["--out-dir", out, "bpe", "train", "--src", src, "--tgt", tgt, "--merges", "0"])
    run(["--out-dir", out, "bpe", "apply", "--model", out / "bpe.model",
         "--input", src, "--output", "tok.txt"])
    first = (out / "tok.txt").read_text(encoding="utf-8").splitlines()[0]
    pieces = [item.rsplit("|", 1)[0].strip("■") for item in first.split(" ")]
    assert all(len(p) == 1 or p.startswith("\\") for p in pieces)


def test_bpe_separate_mode_writes_two_models(tmp_path, corpus_files):
    src, tgt = corpus_files
    out = tmp_path / "out"
    run(["--out-dir", out, "bpe", "train", "--src", src, "--tgt", tgt,
         "--merges", "30", "--mode", "separate"])
    assert (out / "bpe.src.model").exists() and (out / "bpe.tgt.model").exists()


def test_ner_scan_mask_unmask(tmp_path):
    out = tmp_path / "out"
    sentences = entity_sentences(12, seed=3)
    input_path = tmp_path / "sents.txt"
    input_path.write_text("\n".join(sentences) + "\n", encoding="utf-8")

    assert run(["--out-dir", out, "ner", "mask", "--input", input_path,
                "--templates", "en"]) == 0
    masked = (out / "masked.txt").read_text(encoding="utf-8").splitlines()
    assert any("⟦" in line for line in masked)

    assert run(["--out-dir", out, "ner", "unmask", "--input", out / "masked.txt",
                "--map", out / "maps.json", "--templates", "en", "--locale", "en",
                "--output", "restored.txt"]) == 0
    assert (out / "restored.txt").read_text(encoding="utf-8").splitlines() == sentences


def test_ner_scan_reports_counts(tmp_path, corpus_files):
    src, tgt = corpus_files
    out = tmp_path / "out"
    assert run(["--out-dir", out, "ner", "scan", "--src", src, "--tgt", tgt]) == 0
    report = json.loads((out / "mismatches.json").read_text(encoding="utf-8"))
    assert "mismatch_counts" in report and report["pair_count"] == 40


def test_ner_validate(tmp_path):
    out = tmp_path / "out"
    pairs = tmp_path / "pairs.tsv"
    pairs.write_text("5 km away\t5 km entfernt\n10 miles off\t16,1 km entfernt\n",
                     encoding="utf-8")
    assert run(["--out-dir", out, "ner", "validate", "--pairs", pairs]) == 0
    payload = json.loads((out / "entity-validation.json").read_text())
    assert payload["accuracy"] == 1.0


def test_bleu_corpus_identity_scores_100(tmp_path):
    out = tmp_path / "out"
    text = tmp_path / "cand.txt"
    text.write_text("the hotel has a garden\nthe beach is close\n", encoding="utf-8")
    assert run(["--out-dir", out, "bleu", "corpus", "--candidates", text,
                "--references", text]) == 0
    report = json.loads((out / "bleu.json").read_text())
    assert report["score"] == pytest.approx(100.0)


def test_bleu_corpus_mismatched_lengths_exits_1(tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text("one\n", encoding="utf-8")
    b.write_text("one\ntwo\n", encoding="utf-8")
    assert run(["--out-dir", tmp_path, "bleu", "corpus", "--candidates", a,
                "--references", b]) == 1


def test_bleu_sentence(capsys, tmp_path):
    assert run(["--out-dir", tmp_path, "bleu", "sentence", "--candidate", "a b c d",
                "--reference", "a b c d"]) == 0
    assert '"score": 100.0' in capsys.readouterr().out


def test_optlab_train_writes_trace(tmp_path):
    out = tmp_path / "out"
    assert run(["--out-dir", out, "optlab", "train", "--optimizer", "adam",
                "--epochs", 2, "--tokens", 600, "--vocab", 32,
                "--embed-dim", 8, "--hidden-dim", 16]) == 0
    lines = (out / "trace-adam.csv").read_text().splitlines()
    assert lines[0] == "epoch,iterations,sim_seconds,val_ppl,lr,bleu"
    assert len(lines) == 3


def test_optlab_simulate_calibrated_async8(tmp_path):
    out = tmp_path / "out"
    assert run(["--out-dir", out, "optlab", "simulate", "--workers", 8,
                "--cluster-mode", "async", "--calibrate-single", "22260s",
                "--warmup-iters", 0, "--vocab", 32, "--embed-dim", 8,
                "--hidden-dim", 16, "--epochs", 1, "--batch-size", 4,
                "--tokens", 4000]) == 0
    payload = json.loads((out / "sim-async-8.json").read_text())
    assert abs(payload["epoch_seconds"] - 3360.0) / 3360.0 < 0.15


def test_optlab_gradcheck_exit_status(tmp_path):
    assert run(["--out-dir", tmp_path, "optlab", "gradcheck", "--vocab", 24,
                "--embed-dim", 6, "--hidden-dim", 10, "--samples", 80]) == 0


def test_bsf_pipeline(tmp_path):
    out = tmp_path / "out"
    labeled = tmp_path / "labeled.tsv"
    rows = parking_sentences("en", 240, seed=8)
    labeled.write_text("".join(f"{label}\t{text}\n" for text, label in rows), encoding="utf-8")
    assert run(["--out-dir", out, "bsf", "train", "--labeled", labeled,
                "--output", "clf.txt"]) == 0
    assert run(["--out-dir", out, "bsf", "eval", "--model", out / "clf.txt",
                "--labeled", labeled]) == 0
    payload = json.loads((out / "bsf-eval.json").read_text())
    assert payload["macro_f1"] > 0.9


def test_bsf_embed_and_expand(tmp_path):
    out = tmp_path / "out"
    corpus_path = tmp_path / "tokens.txt"
    from mtlab.synth import embedding_corpus
    corpus_path.write_text("".join(" ".join(s) + "\n" for s in embedding_corpus(seed=2)),
                           encoding="utf-8")
    assert run(["--out-dir", out, "bsf", "embed", "--input", corpus_path,
                "--dim", 12, "--epochs", 2, "--output", "vec.txt"]) == 0
    assert run(["--out-dir", out, "bsf", "expand", "--vectors", out / "vec.txt",
                "--seeds", "dog", "--k", 3, "--output", "cand.txt"]) == 0
    assert (out / "cand.txt").read_text().strip()


def test_bsf_match(tmp_path):
    out = tmp_path / "out"
    sentences = tmp_path / "s.txt"
    sentences.write_text("Free parking here.\nA nice garden.\n", encoding="utf-8")
    terms = tmp_path / "terms.txt"
    terms.write_text("parking\n", encoding="utf-8")
    assert run(["--out-dir", out, "bsf", "match", "--input", sentences,
                "--terms", terms]) == 0
    assert (out / "matched-ids.txt").read_text().split() == ["0"]


def test_bsf_report_end_to_end(tmp_path):
    from mtlab.synth import parking_parallel
    out = tmp_path / "out"
    en_data, de_data, _ = parking_parallel(150, seed=4, flip_fraction=0.05)
    (tmp_path / "pairs.tsv").write_text(
        "".join(f"{e[0]}\t{d[0]}\n" for e, d in zip(en_data, de_data)), encoding="utf-8")
    for lang, rows in (("en", en_data), ("de", de_data)):
        (tmp_path / f"labeled.{lang}.tsv").write_text(
            "".join(f"{label}\t{text}\n" for text, label in rows), encoding="utf-8")
        assert run(["--out-dir", out, "bsf", "train", "--labeled", tmp_path / f"labeled.{lang}.tsv",
                    "--output", f"clf.{lang}.txt"]) == 0
    (tmp_path / "terms.en.txt").write_text("parking\npark\n", encoding="utf-8")
    (tmp_path / "terms.de.txt").write_text("parkplätze\nparken\ngarage\n", encoding="utf-8")
    assert run(["--out-dir", out, "bsf", "report", "--pairs", tmp_path / "pairs.tsv",
                "--terms-src", tmp_path / "terms.en.txt", "--terms-tgt", tmp_path / "terms.de.txt",
                "--clf-src", out / "clf.en.txt", "--clf-tgt", out / "clf.de.txt"]) == 0
    payload = json.loads((out / "bsf-report.json").read_text(encoding="utf-8"))
    assert set(payload["labels"]) == {"free", "paid", "other"}
    assert (out / "bsf-report.txt").read_text(encoding="utf-8")


def test_ner_unmask_missing_template_type_exits_1(tmp_path):
    out = tmp_path / "out"
    (tmp_path / "masked.txt").write_text("ab ⟦DUR_0⟧ cd\n", encoding="utf-8")
    (tmp_path / "maps.json").write_text(json.dumps(
        [{"source_language": "en",
          "entries": [{"index": 0, "type": "unknown_kind", "text": "55-minute"}]}]),
        encoding="utf-8")
    assert run(["--out-dir", out, "ner", "unmask", "--input", tmp_path / "masked.txt",
                "--map", tmp_path / "maps.json", "--templates", "en",
                "--locale", "de"]) == 1


def test_eval_flow(tmp_path):
    out = tmp_path / "out"
    scores = tmp_path / "scores.csv"
    rows = ["sentence_id,rater_id,system,adequacy,fluency"]
    for system, (adequacy, fluency) in {"1M": (2, 2), "7.5M": (3, 3), "10M": (4, 4)}.items():
        for sid in range(1, 4):
            for rater in ("r1", "r2"):
                rows.append(f"{sid},{rater},{system},{adequacy},{fluency}")
    scores.write_text("\n".join(rows) + "\n", encoding="utf-8")
    bleu_path = tmp_path / "bleu.json"
    bleu_path.write_text(json.dumps({"1M": 46.5, "7.5M": 47.95, "10M": 47.41}), encoding="utf-8")

    assert run(["--out-dir", out, "eval", "ingest", "--scores", scores]) == 0
    assert run(["--out-dir", out, "eval", "summarize", "--scores", scores]) == 0
    assert run(["--out-dir", out, "eval", "correlate", "--scores", scores,
                "--bleu", bleu_path]) == 0
    correlation = json.loads((out / "correlation-adequacy.json").read_text())
    assert correlation["argmax_disagreement"] is True
    assert (out / "bleu-vs-human.csv").read_text().splitlines()[0] == "system,bleu,adequacy,fluency"


def test_domain_error_exits_1(tmp_path):
    missing = tmp_path / "nope.txt"
    assert run(["--out-dir", tmp_path, "bleu", "corpus", "--candidates", missing,
                "--references", missing]) == 1


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["bleu", "corpus", "--unknown-flag"])
    assert exc.value.code == 2
