"""Command-line entry point wiring the toolkit's workflows together.

Every subcommand writes its outputs plus a manifest.json into --out-dir
(default: $MTLAB_OUT or the current directory).  Reports are emitted both
as JSON and as aligned text; trace CSVs are plot-ready.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import bleu as bleu_mod
from . import bsf, corpus, entities, humaneval, synth, tokenizer
from .manifest import write_manifest
from .optlab import (
    ClusterConfig,
    OptimizerConfig,
    SurrogateConfig,
    SurrogateModel,
    calibrated_cluster_config,
    check_gradients,
    corpus_size_sweep,
    simulate_cluster,
    train,
)

__all__ = ["main", "parse_duration"]


def parse_duration(text: str) -> float:
    """Seconds from '22260', '22260s', '371m', or '6h11m' style strings."""
    text = text.strip()
    if re.fullmatch(r"\d+(?:\.\d+)?", text):
        return float(text)
    total = 0.0
    for value, unit in re.findall(r"(\d+(?:\.\d+)?)([hms])", text):
        total += float(value) * {"h": 3600.0, "m": 60.0, "s": 1.0}[unit]
    if total == 0.0:
        raise argparse.ArgumentTypeError(f"cannot parse duration {text!r}")
    return total


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def _write_lines(lines: list[str], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(line + "\n" for line in lines)


def _write_text(text: str, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")


def _load_corpus(args) -> corpus.ParallelCorpus:
    if getattr(args, "tsv", None):
        return corpus.load_tsv(args.tsv)
    return corpus.load_parallel(args.src, args.tgt)


def _templates(path_or_starter: str) -> list[entities.EntityTemplate]:
    if path_or_starter in ("en", "de"):
        return entities.starter_templates(path_or_starter)
    return entities.load_templates(path_or_starter)


def _locale(args) -> entities.LocaleFormat:
    base = entities.DE_LOCALE if args.locale == "de" else entities.EN_LOCALE
    if getattr(args, "unit_policy", None):
        base = entities.LocaleFormat(base.language, base.decimal_separator,
                                     base.time_style, base.date_pattern, args.unit_policy)
    return base


def _out(args, name: str) -> str:
    os.makedirs(args.out_dir, exist_ok=True)
    return os.path.join(args.out_dir, name)


# ---------------------------------------------------------------------------
# corpus


def cmd_corpus_split(args) -> int:
    loaded = _load_corpus(args)
    result = corpus.split(loaded, args.validation_size, args.seed)
    outputs = []
    for part, name in ((result.train, "train"), (result.validation, "validation")):
        src_path, tgt_path = _out(args, f"{name}.src"), _out(args, f"{name}.tgt")
        corpus.write_parallel(part, src_path, tgt_path)
        outputs += [src_path, tgt_path]
    print(f"train {len(result.train)} pairs, validation {len(result.validation)} pairs"
          f" (dropped {loaded.dropped_count})")
    write_manifest(args.out_dir, "corpus split", vars(args),
                   [args.src, args.tgt, getattr(args, "tsv", None)], outputs, args.seed)
    return 0


def cmd_corpus_subsample(args) -> int:
    loaded = _load_corpus(args)
    sizes = [int(s) for s in args.sizes.split(",")]
    outputs = []
    for size, sub in zip(sizes, corpus.subsample(loaded, sizes, args.seed)):
        src_path, tgt_path = _out(args, f"size-{size}.src"), _out(args, f"size-{size}.tgt")
        corpus.write_parallel(sub, src_path, tgt_path)
        outputs += [src_path, tgt_path]
        print(f"size {size}: {len(sub)} pairs")
    write_manifest(args.out_dir, "corpus subsample", vars(args),
                   [args.src, args.tgt, getattr(args, "tsv", None)], outputs, args.seed)
    return 0


# ---------------------------------------------------------------------------
# bpe


def cmd_bpe_train(args) -> int:
    loaded = _load_corpus(args)
    outputs = []
    if args.mode == "joint":
        model = tokenizer.train_bpe(loaded, args.merges, "joint")
        path = _out(args, "bpe.model")
        tokenizer.save_model(model, path)
        outputs.append(path)
        print(f"joint model: {model.merge_count} merges, alphabet {len(model.alphabet)}")
    else:
        src_model, tgt_model = tokenizer.train_bpe(loaded, args.merges, "separate")
        for model, name in ((src_model, "bpe.src.model"), (tgt_model, "bpe.tgt.model")):
            path = _out(args, name)
            tokenizer.save_model(model, path)
            outputs.append(path)
            print(f"{model.mode}: {model.merge_count} merges, alphabet {len(model.alphabet)}")
    write_manifest(args.out_dir, "bpe train", vars(args),
                   [args.src, args.tgt, getattr(args, "tsv", None)], outputs, None)
    return 0


def cmd_bpe_apply(args) -> int:
    model = tokenizer.load_model(args.model)
    lines = _read_lines(args.input)
    rendered = [tokenizer.render_tokens(tokenizer.tokenize(model, line), args.marker)
                for line in lines]
    path = _out(args, args.output)
    _write_lines(rendered, path)
    print(f"tokenized {len(lines)} sentences -> {path}")
    write_manifest(args.out_dir, "bpe apply", vars(args), [args.model, args.input], [path], None)
    return 0


def cmd_bpe_detok(args) -> int:
    lines = _read_lines(args.input)
    restored = [tokenizer.detokenize(tokenizer.parse_tokens(line, args.marker))
                for line in lines]
    path = _out(args, args.output)
    _write_lines(restored, path)
    print(f"detokenized {len(lines)} sentences -> {path}")
    write_manifest(args.out_dir, "bpe detok", vars(args), [args.input], [path], None)
    return 0


# ---------------------------------------------------------------------------
# ner


def cmd_ner_scan(args) -> int:
    loaded = _load_corpus(args)
    report = entities.scan_mismatches(loaded, _templates(args.templates_src),
                                      _templates(args.templates_tgt))
    json_path, text_path = _out(args, "mismatches.json"), _out(args, "mismatches.txt")
    _write_text(report.to_json(), json_path)
    _write_text(report.to_text(), text_path)
    print(report.to_text())
    write_manifest(args.out_dir, "ner scan", vars(args),
                   [args.src, args.tgt, getattr(args, "tsv", None)], [json_path, text_path], None)
    return 0


def cmd_ner_mask(args) -> int:
    templates = _templates(args.templates)
    lines = _read_lines(args.input)
    masked_lines = []
    maps = []
    for line in lines:
        pmap = entities.mask(line, templates)
        masked_lines.append(pmap.masked_sentence)
        maps.append({
            "source_language": pmap.source_language,
            "entries": [
                {"index": e.index, "type": e.entity_type, "text": e.original_text}
                for e in pmap.entries
            ],
        })
    masked_path, map_path = _out(args, "masked.txt"), _out(args, "maps.json")
    _write_lines(masked_lines, masked_path)
    _write_text(json.dumps(maps, ensure_ascii=False, indent=2), map_path)
    total = sum(len(m["entries"]) for m in maps)
    print(f"masked {total} entities in {len(lines)} sentences -> {masked_path}")
    write_manifest(args.out_dir, "ner mask", vars(args), [args.input], [masked_path, map_path], None)
    return 0


def cmd_ner_unmask(args) -> int:
    templates = _templates(args.templates)
    lines = _read_lines(args.input)
    with open(args.map, encoding="utf-8") as fh:
        maps = json.load(fh)
    if len(maps) != len(lines):
        raise entities.EntityError(f"{len(lines)} sentences but {len(maps)} placeholder maps")
    locale = _locale(args)
    by_type = {t.entity_type: t for t in templates}
    out_lines = []
    for line, stored in zip(lines, maps):
        entries = []
        for e in stored["entries"]:
            template = by_type.get(e["type"])
            if template is None:
                raise entities.TemplateError(
                    f"no template for entity type {e['type']!r} in {args.templates}")
            entries.append(entities.PlaceholderEntry(
                e["index"], e["type"], e["text"], template.parse(e["text"])))
        pmap = entities.PlaceholderMap(line, tuple(entries), stored["source_language"])
        out_lines.append(entities.unmask(line, pmap, locale))
    path = _out(args, args.output)
    _write_lines(out_lines, path)
    print(f"unmasked {len(lines)} sentences -> {path}")
    write_manifest(args.out_dir, "ner unmask", vars(args), [args.input, args.map], [path], None)
    return 0


def cmd_ner_validate(args) -> int:
    rows = [line.split("\t") for line in _read_lines(args.pairs)]
    pairs = [(r[0], r[1]) for r in rows]
    result = entities.validate_entity_translation(
        pairs, _templates(args.templates_src), _templates(args.templates_tgt),
        rel_tolerance=args.tolerance)
    payload = {"scores": list(result.scores), "accuracy": result.accuracy}
    path = _out(args, "entity-validation.json")
    _write_text(json.dumps(payload), path)
    print(f"entity accuracy: {result.accuracy:.3f} over {len(pairs)} pairs")
    write_manifest(args.out_dir, "ner validate", vars(args), [args.pairs], [path], None)
    return 0


# ---------------------------------------------------------------------------
# bleu


def cmd_bleu_corpus(args) -> int:
    config = bleu_mod.ScoringConfig(case_sensitive=not args.lowercase)
    report = bleu_mod.corpus_bleu(_read_lines(args.candidates), _read_lines(args.references), config)
    path = _out(args, "bleu.json")
    _write_text(report.to_json(), path)
    print(f"BLEU = {report.score:.2f} (BP {report.brevity_penalty:.3f}, "
          + "/".join(f"{p:.3f}" for p in report.precisions) + ")")
    write_manifest(args.out_dir, "bleu corpus", vars(args),
                   [args.candidates, args.references], [path], None)
    return 0


def cmd_bleu_sentence(args) -> int:
    config = bleu_mod.ScoringConfig(smoothing=args.smoothing, case_sensitive=not args.lowercase)
    report = bleu_mod.sentence_bleu(args.candidate, args.reference, config)
    print(report.to_json())
    write_manifest(args.out_dir, "bleu sentence", vars(args), [], [], None)
    return 0


# ---------------------------------------------------------------------------
# optlab


def _toy_data(args):
    train_ids = synth.toy_lm_stream(args.tokens, args.vocab, seed=args.seed, noise=args.noise)
    val_ids = synth.toy_lm_stream(max(500, args.tokens // 5), args.vocab,
                                  seed=args.seed + 1, noise=args.noise)
    return train_ids, val_ids


def cmd_optlab_train(args) -> int:
    train_ids, val_ids = _toy_data(args)
    model = SurrogateModel(SurrogateConfig(args.vocab, args.embed_dim, args.hidden_dim),
                           seed=args.seed)
    trace = train(model, train_ids, val_ids, OptimizerConfig(args.optimizer),
                  epochs=args.epochs, batch_size=args.batch_size, seed=args.seed)
    path = _out(args, f"trace-{args.optimizer}.csv")
    trace.to_csv(path)
    last = trace.rows[-1]
    print(f"{args.optimizer}: epoch {last.epoch} val_ppl {last.val_ppl:.3f} lr {last.lr:.5f}"
          + (" [divergent]" if trace.divergent else ""))
    write_manifest(args.out_dir, "optlab train", vars(args), [], [path], args.seed)
    return 0


def cmd_optlab_simulate(args) -> int:
    train_ids, val_ids = _toy_data(args)
    if args.calibrate_single is not None:
        cluster = calibrated_cluster_config(
            args.cluster_mode, args.workers, args.calibrate_single,
            iterations_per_epoch=args.iterations_per_epoch,
            warmup_iterations=args.warmup_iters)
        # the calibration fixes the batch count per epoch; size the stream to it
        train_ids = synth.toy_lm_stream(args.iterations_per_epoch * args.batch_size + 1,
                                        args.vocab, seed=args.seed, noise=args.noise)
    else:
        cluster = ClusterConfig(args.workers, args.cluster_mode,
                                per_batch_compute_time=args.batch_seconds,
                                async_warmup_iterations=args.warmup_iters)
    model = SurrogateModel(SurrogateConfig(args.vocab, args.embed_dim, args.hidden_dim),
                           seed=args.seed)
    trace = simulate_cluster(model, train_ids, val_ids, OptimizerConfig(args.optimizer),
                             cluster, epochs=args.epochs, batch_size=args.batch_size,
                             seed=args.seed)
    path = _out(args, f"sim-{args.cluster_mode}-{args.workers}.csv")
    trace.to_csv(path)
    epoch_seconds = trace.rows[0].sim_seconds
    payload = {
        "mode": args.cluster_mode,
        "workers": args.workers,
        "epoch_seconds": epoch_seconds,
        "epoch_time": _format_duration(epoch_seconds),
        "final_ppl": trace.final_ppl(),
        "max_staleness": trace.max_staleness,
    }
    json_path = _out(args, f"sim-{args.cluster_mode}-{args.workers}.json")
    _write_text(json.dumps(payload), json_path)
    print(f"{args.cluster_mode} x{args.workers}: epoch {_format_duration(epoch_seconds)}, "
          f"final ppl {trace.final_ppl():.3f}, max staleness {trace.max_staleness}")
    write_manifest(args.out_dir, "optlab simulate", vars(args), [], [path, json_path], args.seed)
    return 0


def _format_duration(seconds: float) -> str:
    minutes = round(seconds / 60.0)
    return f"{minutes // 60}h{minutes % 60:02d}m"


def cmd_optlab_sweep(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    full = synth.toy_lm_stream(max(sizes), args.vocab, seed=args.seed, noise=args.noise)
    val_ids = synth.toy_lm_stream(max(500, max(sizes) // 5), args.vocab,
                                  seed=args.seed + 1, noise=args.noise)
    streams = [(str(size), full[:size]) for size in sizes]
    traces = corpus_size_sweep(SurrogateConfig(args.vocab, args.embed_dim, args.hidden_dim),
                               streams, val_ids, OptimizerConfig(args.optimizer),
                               iteration_budget=args.budget, batch_size=args.batch_size,
                               seed=args.seed, checkpoint_every=args.checkpoint_every)
    outputs = []
    for label, trace in traces.items():
        path = _out(args, f"sweep-{label}.csv")
        trace.to_csv(path)
        outputs.append(path)
        print(f"size {label}: final ppl {trace.final_ppl():.3f} at {trace.rows[-1].iterations} iterations")
    write_manifest(args.out_dir, "optlab sweep", vars(args), [], outputs, args.seed)
    return 0


def cmd_optlab_gradcheck(args) -> int:
    ids = synth.toy_lm_stream(args.batch_size * 4 + 1, args.vocab, seed=args.seed)
    model = SurrogateModel(SurrogateConfig(args.vocab, args.embed_dim, args.hidden_dim),
                           seed=args.seed)
    error = check_gradients(model, ids[: args.batch_size], ids[1 : args.batch_size + 1],
                            n_samples=args.samples, step=args.step, seed=args.seed)
    print(f"max relative gradient error: {error:.3e} over {args.samples} coordinates")
    write_manifest(args.out_dir, "optlab gradcheck", vars(args), [], [], args.seed)
    return 0 if error < args.tolerance else 1


# ---------------------------------------------------------------------------
# bsf


def cmd_bsf_embed(args) -> int:
    sentences = [line.split() for line in _read_lines(args.input)]
    emb = bsf.train_embeddings(sentences, dim=args.dim, window=args.window,
                               negatives=args.negatives, epochs=args.epochs, seed=args.seed)
    path = _out(args, args.output)
    bsf.save_embeddings(emb, path)
    print(f"trained {len(emb.vectors)} vectors (dim {emb.dim}) -> {path}")
    write_manifest(args.out_dir, "bsf embed", vars(args), [args.input], [path], args.seed)
    return 0


def cmd_bsf_expand(args) -> int:
    emb = bsf.load_embeddings(args.vectors)
    candidates = bsf.expand_seeds(emb, args.seeds.split(","), args.k, args.min_sim)
    path = _out(args, args.output)
    bsf.save_terms(candidates, path, header="candidates for proofreading")
    for term, sim in candidates:
        print(f"{sim:.4f}  {term}")
    write_manifest(args.out_dir, "bsf expand", vars(args), [args.vectors], [path], None)
    return 0


def cmd_bsf_match(args) -> int:
    lexicon = bsf.AspectLexicon(args.aspect, args.language,
                                approved_terms=bsf.load_terms(args.terms))
    sentences = _read_lines(args.input)
    matched = bsf.match_sentences(sentences, lexicon)
    path = _out(args, "matched-ids.txt")
    _write_lines([str(i) for i in matched], path)
    print(f"matched {len(matched)} of {len(sentences)} sentences")
    write_manifest(args.out_dir, "bsf match", vars(args), [args.input, args.terms], [path], None)
    return 0


def _read_labeled(path: str) -> list[tuple[str, str]]:
    rows = []
    for i, line in enumerate(_read_lines(path), start=1):
        if "\t" not in line:
            raise bsf.ClassifierError(f"{path}: line {i}: expected 'label<TAB>text'")
        label, text = line.split("\t", 1)
        rows.append((text, label))
    return rows


def cmd_bsf_train(args) -> int:
    labeled = _read_labeled(args.labeled)
    spec = bsf.ClassifierSpec(bits=args.bits, lr=args.lr, epochs=args.epochs, l2=args.l2)
    clf = bsf.train_classifier(labeled, spec, seed=args.seed)
    path = _out(args, args.output)
    bsf.save_classifier(clf, path)
    print(f"trained on {len(labeled)} examples, labels {clf.labels} -> {path}")
    write_manifest(args.out_dir, "bsf train", vars(args), [args.labeled], [path], args.seed)
    return 0


def cmd_bsf_eval(args) -> int:
    clf = bsf.load_classifier(args.model)
    metrics = bsf.evaluate_classifier(clf, _read_labeled(args.labeled))
    json_path = _out(args, "bsf-eval.json")
    _write_text(json.dumps({"per_label": metrics.per_label, "accuracy": metrics.accuracy,
                            "macro_f1": metrics.macro_f1, "n": metrics.n}), json_path)
    print(metrics.to_text())
    write_manifest(args.out_dir, "bsf eval", vars(args), [args.model, args.labeled], [json_path], None)
    return 0


def cmd_bsf_report(args) -> int:
    rows = [line.split("\t") for line in _read_lines(args.pairs)]
    pairs = [(r[0], r[1]) for r in rows]
    lex_src = bsf.AspectLexicon(args.aspect, args.lang_src,
                                approved_terms=bsf.load_terms(args.terms_src))
    lex_tgt = bsf.AspectLexicon(args.aspect, args.lang_tgt,
                                approved_terms=bsf.load_terms(args.terms_tgt))
    report = bsf.cross_language_report(pairs, lex_src, lex_tgt,
                                       bsf.load_classifier(args.clf_src),
                                       bsf.load_classifier(args.clf_tgt))
    json_path, text_path = _out(args, "bsf-report.json"), _out(args, "bsf-report.txt")
    _write_text(report.to_json(), json_path)
    _write_text(report.to_text(), text_path)
    print(report.to_text())
    write_manifest(args.out_dir, "bsf report", vars(args),
                   [args.pairs, args.terms_src, args.terms_tgt, args.clf_src, args.clf_tgt],
                   [json_path, text_path], None)
    return 0


# ---------------------------------------------------------------------------
# eval (human scores)


def cmd_eval_ingest(args) -> int:
    records = humaneval.ingest_scores(args.scores, (args.score_min, args.score_max))
    print(f"{len(records)} valid records from {args.scores}")
    write_manifest(args.out_dir, "eval ingest", vars(args), [args.scores], [], None)
    return 0


def cmd_eval_summarize(args) -> int:
    records = humaneval.ingest_scores(args.scores, (args.score_min, args.score_max))
    summary = humaneval.summarize(records, (args.score_min, args.score_max))
    json_path = _out(args, "summary.json")
    _write_text(summary.to_json(), json_path)
    csv_path = _out(args, "summary.csv")
    lines = ["system,adequacy,fluency,n"]
    for name, s in summary.systems.items():
        lines.append(f"{name},{s.mean_adequacy:.4f},{s.mean_fluency:.4f},{s.n}")
    _write_lines(lines, csv_path)
    for name, s in summary.systems.items():
        kappa = "n/a" if s.kappa_adequacy is None else f"{s.kappa_adequacy:.3f}"
        print(f"{name}: adequacy {s.mean_adequacy:.3f}, fluency {s.mean_fluency:.3f}, "
              f"kappa(adequacy) {kappa}, n={s.n}")
    write_manifest(args.out_dir, "eval summarize", vars(args), [args.scores],
                   [json_path, csv_path], None)
    return 0


def cmd_eval_correlate(args) -> int:
    records = humaneval.ingest_scores(args.scores, (args.score_min, args.score_max))
    summary = humaneval.summarize(records, (args.score_min, args.score_max))
    with open(args.bleu, encoding="utf-8") as fh:
        bleu_by_system = json.load(fh)
    outputs = []
    table = ["system,bleu,adequacy,fluency"]
    for name, s in summary.systems.items():
        if name in bleu_by_system:
            table.append(f"{name},{bleu_by_system[name]},{s.mean_adequacy:.4f},{s.mean_fluency:.4f}")
    table_path = _out(args, "bleu-vs-human.csv")
    _write_lines(table, table_path)
    outputs.append(table_path)
    for metric in ("adequacy", "fluency"):
        human = {name: getattr(s, f"mean_{metric}") for name, s in summary.systems.items()}
        report = humaneval.correlate(bleu_by_system, human)
        path = _out(args, f"correlation-{metric}.json")
        _write_text(report.to_json(), path)
        outputs.append(path)
        print(f"{metric}: pearson {report.pearson_r:.3f}, spearman {report.spearman_rho:.3f}, "
              f"BLEU best={report.bleu_argmax}, human best={report.human_argmax}"
              + (" [argmax disagreement]" if report.argmax_disagreement else ""))
    write_manifest(args.out_dir, "eval correlate", vars(args), [args.scores, args.bleu],
                   outputs, None)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mtlab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--out-dir", default=os.environ.get("MTLAB_OUT", "."),
                        help="output directory (default: $MTLAB_OUT or .)")
    parser.add_argument("--seed", type=int, default=0, help="global random seed")
    # the same flags are accepted after the subcommand; SUPPRESS keeps the
    # leaf parser from clobbering a value parsed at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    top = parser.add_subparsers(dest="group", required=True)

    def corpus_inputs(p):
        p.add_argument("--src", help="source-side text file")
        p.add_argument("--tgt", help="target-side text file")
        p.add_argument("--tsv", help="two-column TSV corpus (alternative to --src/--tgt)")

    # corpus
    group = top.add_parser("corpus", help="load/split/subsample parallel corpora")
    sub = group.add_subparsers(dest="command", required=True)
    p = sub.add_parser(parents=[common], name="split")
    corpus_inputs(p)
    p.add_argument("--validation-size", type=int, required=True)
    p.set_defaults(func=cmd_corpus_split)
    p = sub.add_parser(parents=[common], name="subsample")
    corpus_inputs(p)
    p.add_argument("--sizes", required=True, help="comma-separated sizes, e.g. 100,250,500")
    p.set_defaults(func=cmd_corpus_subsample)

    # bpe
    group = top.add_parser("bpe", help="subword model training and application")
    sub = group.add_subparsers(dest="command", required=True)
    p = sub.add_parser(parents=[common], name="train")
    corpus_inputs(p)
    p.add_argument("--merges", type=int, required=True)
    p.add_argument("--mode", choices=["joint", "separate"], default="joint")
    p.set_defaults(func=cmd_bpe_train)
    p = sub.add_parser(parents=[common], name="apply")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="tokenized.txt")
    p.add_argument("--marker", default=tokenizer.DEFAULT_MARKER)
    p.set_defaults(func=cmd_bpe_apply)
    p = sub.add_parser(parents=[common], name="detok")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="detokenized.txt")
    p.add_argument("--marker", default=tokenizer.DEFAULT_MARKER)
    p.set_defaults(func=cmd_bpe_detok)

    # ner
    group = top.add_parser("ner", help="entity templates: scan/mask/unmask/validate")
    sub = group.add_subparsers(dest="command", required=True)
    p = sub.add_parser(parents=[common], name="scan")
    corpus_inputs(p)
    p.add_argument("--templates-src", default="en", help="template file or starter language code")
    p.add_argument("--templates-tgt", default="de")
    p.set_defaults(func=cmd_ner_scan)
    p = sub.add_parser(parents=[common], name="mask")
    p.add_argument("--input", required=True)
    p.add_argument("--templates", default="en")
    p.set_defaults(func=cmd_ner_mask)
    p = sub.add_parser(parents=[common], name="unmask")
    p.add_argument("--input", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--templates", default="en", help="templates used at mask time")
    p.add_argument("--locale", choices=["en", "de"], required=True)
    p.add_argument("--unit-policy", choices=["keep", "to_km", "to_mi"])
    p.add_argument("--output", default="unmasked.txt")
    p.set_defaults(func=cmd_ner_unmask)
    p = sub.add_parser(parents=[common], name="validate")
    p.add_argument("--pairs", required=True, help="TSV of source<TAB>output")
    p.add_argument("--templates-src", default="en")
    p.add_argument("--templates-tgt", default="de")
    p.add_argument("--tolerance", type=float, default=0.005)
    p.set_defaults(func=cmd_ner_validate)

    # bleu
    group = top.add_parser("bleu", help="BLEU scoring")
    sub = group.add_subparsers(dest="command", required=True)
    p = sub.add_parser(parents=[common], name="corpus")
    p.add_argument("--candidates", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--lowercase", action="store_true")
    p.set_defaults(func=cmd_bleu_corpus)
    p = sub.add_parser(parents=[common], name="sentence")
    p.add_argument("--candidate", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--smoothing", choices=["none", "add_one"], default="add_one")
    p.add_argument("--lowercase", action="store_true")
    p.set_defaults(func=cmd_bleu_sentence)

    # optlab
    group = top.add_parser("optlab", help="optimizer laboratory and cluster simulation")
    sub = group.add_subparsers(dest="command", required=True)

    def toy_flags(p):
        p.add_argument("--vocab", type=int, default=128)
        p.add_argument("--embed-dim", type=int, default=48)
        p.add_argument("--hidden-dim", type=int, default=96)
        p.add_argument("--tokens", type=int, default=12000)
        p.add_argument("--noise", type=float, default=0.15)
        p.add_argument("--batch-size", type=int, default=8)

    p = sub.add_parser(parents=[common], name="train")
    toy_flags(p)
    p.add_argument("--optimizer", choices=["sgd_decay", "adam", "adagrad", "adadelta"],
                   default="sgd_decay")
    p.add_argument("--epochs", type=int, default=20)
    p.set_defaults(func=cmd_optlab_train)
    p = sub.add_parser(parents=[common], name="simulate")
    toy_flags(p)
    p.add_argument("--optimizer", choices=["sgd_decay", "adam", "adagrad", "adadelta"],
                   default="sgd_decay")
    p.add_argument("--workers", type=int, required=True)
    p.add_argument("--cluster-mode", choices=["sync", "async"], required=True)
    p.add_argument("--warmup-iters", type=int, default=6000)
    p.add_argument("--calibrate-single", type=parse_duration, default=None,
                   help="single-worker epoch duration, e.g. 22260s or 6h11m")
    p.add_argument("--iterations-per-epoch", type=int, default=840)
    p.add_argument("--batch-seconds", type=float, default=1.0)
    p.add_argument("--epochs", type=int, default=1)
    p.set_defaults(func=cmd_optlab_simulate)
    p = sub.add_parser(parents=[common], name="sweep")
    toy_flags(p)
    p.add_argument("--optimizer", choices=["sgd_decay", "adam", "adagrad", "adadelta"],
                   default="sgd_decay")
    p.add_argument("--sizes", required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--checkpoint-every", type=int, default=100)
    p.set_defaults(func=cmd_optlab_sweep)
    p = sub.add_parser(parents=[common], name="gradcheck")
    toy_flags(p)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--step", type=float, default=1e-5)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.set_defaults(func=cmd_optlab_gradcheck)

    # bsf
    group = top.add_parser("bsf", help="business sensitivity framework")
    sub = group.add_subparsers(dest="command", required=True)
    p = sub.add_parser(parents=[common], name="embed")
    p.add_argument("--input", required=True, help="pre-tokenized text, one sentence per line")
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--negatives", type=int, default=5)
    p.add_argument("--epochs", type=int, default=3)
    p.add_argument("--output", default="vectors.txt")
    p.set_defaults(func=cmd_bsf_embed)
    p = sub.add_parser(parents=[common], name="expand")
    p.add_argument("--vectors", required=True)
    p.add_argument("--seeds", required=True, help="comma-separated seed terms")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--min-sim", type=float, default=0.0)
    p.add_argument("--output", default="candidates.txt")
    p.set_defaults(func=cmd_bsf_expand)
    p = sub.add_parser(parents=[common], name="match")
    p.add_argument("--input", required=True)
    p.add_argument("--terms", required=True)
    p.add_argument("--aspect", default="aspect")
    p.add_argument("--language", default="en")
    p.set_defaults(func=cmd_bsf_match)
    p = sub.add_parser(parents=[common], name="train")
    p.add_argument("--labeled", required=True, help="TSV of label<TAB>text")
    p.add_argument("--bits", type=int, default=18)
    p.add_argument("--lr", type=float, default=0.5)
    p.add_argument("--epochs", type=int, default=12)
    p.add_argument("--l2", type=float, default=1e-6)
    p.add_argument("--output", default="classifier.txt")
    p.set_defaults(func=cmd_bsf_train)
    p = sub.add_parser(parents=[common], name="eval")
    p.add_argument("--model", required=True)
    p.add_argument("--labeled", required=True)
    p.set_defaults(func=cmd_bsf_eval)
    p = sub.add_parser(parents=[common], name="report")
    p.add_argument("--pairs", required=True, help="TSV of source<TAB>translation")
    p.add_argument("--terms-src", required=True)
    p.add_argument("--terms-tgt", required=True)
    p.add_argument("--clf-src", required=True)
    p.add_argument("--clf-tgt", required=True)
    p.add_argument("--aspect", default="aspect")
    p.add_argument("--lang-src", default="en")
    p.add_argument("--lang-tgt", default="de")
    p.set_defaults(func=cmd_bsf_report)

    # eval
    group = top.add_parser("eval", help="human evaluation analytics")
    sub = group.add_subparsers(dest="command", required=True)

    def score_flags(p):
        p.add_argument("--scores", required=True, help="CSV score sheet")
        p.add_argument("--score-min", type=int, default=1)
        p.add_argument("--score-max", type=int, default=4)

    p = sub.add_parser(parents=[common], name="ingest")
    score_flags(p)
    p.set_defaults(func=cmd_eval_ingest)
    p = sub.add_parser(parents=[common], name="summarize")
    score_flags(p)
    p.set_defaults(func=cmd_eval_summarize)
    p = sub.add_parser(parents=[common], name="correlate")
    score_flags(p)
    p.add_argument("--bleu", required=True, help="JSON mapping system -> BLEU score")
    p.set_defaults(func=cmd_eval_correlate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
