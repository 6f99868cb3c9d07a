"""Command-line surface for the extraction pipeline.

Subcommands cover the full workflow: fetch-so and synth produce raw
definition records, prepare normalizes them into a corpus, train fits
the two-stage classifier, and eval / predict / stats / sweep / baseline
consume the artifacts.  Commands that emit delimited output accept
--report-dir, which collects the CSV/TSV files together with rendered
PNG figures in one directory.

Splits are deterministic in the seed, so "the training split" is a
stable slice of a corpus file: train, stats, and sweep all carve the
same 80/20 partition when given the same seed and fraction.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import baselines, evaluation, report, stackex
from . import model as model_mod
from .corpus import Corpus, RecordError, load_corpus_file, parse_record, save_corpus, split
from .model import ModelConfig
from .synth import SynthConfig, generate_records, save_records

_HYBRID_MODES = ("hybrid-embed", "hybrid-onehot")


class CliError(Exception):
    """User-facing failure; message printed without a traceback."""


# ------------------------------------------------------------- helpers


def _load_any_model(path):
    """(kind, model) for either model file format, sniffed by header."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"{path}: {exc}") from None
    fmt = doc.get("format")
    if fmt == model_mod.MODEL_FORMAT:
        return "neural", model_mod.load_model(path)
    if fmt == baselines.BASELINE_FORMAT:
        return "baseline", baselines.load_baseline(path)
    raise CliError(f"{path}: unrecognized model format {fmt!r}")


def _load_corpus_arg(path, require_gold: bool = True) -> Corpus:
    try:
        corpus, rejected = load_corpus_file(path, require_gold=require_gold)
    except OSError as exc:
        raise CliError(str(exc)) from None
    for err in rejected:
        print(f"warning: {path}: {err}", file=sys.stderr)
    if not corpus.definitions:
        raise CliError(f"{path}: no loadable definitions")
    return corpus


def _select_split(corpus: Corpus, side: str, frac: float, seed: int) -> Corpus:
    if side == "all":
        return corpus
    train_c, test_c = split(corpus, frac, seed)
    return train_c if side == "train" else test_c


def _config_from_args(args) -> ModelConfig:
    if args.mode in _HYBRID_MODES and args.topk is None:
        raise CliError(f"--mode {args.mode} requires --topk")
    kwargs = dict(mode=args.mode, window=args.window, hidden=args.hidden,
                  epochs=args.epochs, lr=args.lr, dropout=args.dropout,
                  threshold=args.threshold, refine=not args.no_refine,
                  seed=args.seed)
    if args.topk is not None:
        kwargs["topk"] = args.topk
    config = ModelConfig(**kwargs)
    try:
        config.validate()
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return config


def _apply_threshold(kind: str, m, value: float | None):
    if value is None:
        return m
    if not 0.0 <= value <= 1.0:
        raise CliError("threshold must lie in [0, 1]")
    if kind == "neural":
        m.config = dataclasses.replace(m.config, threshold=value)
        return m
    return dataclasses.replace(m, threshold=value)


def _model_predictions(kind: str, m, corpus: Corpus) -> list[set[int]]:
    if kind == "neural":
        return model_mod.predict(m, corpus)
    return baselines.baseline_predict(m, corpus)


def _candidate_probs(kind: str, m, corpus: Corpus
                     ) -> list[tuple[list[int], np.ndarray]]:
    """Per definition: (candidate positions, final probabilities)."""
    if kind == "neural":
        return [(pos, p_final) for pos, _, p_final
                in model_mod.candidate_scores(m, corpus)]
    out = []
    for d in corpus.definitions:
        one = Corpus.from_definitions([d])
        X, _ = baselines.feature_matrix(one, m.window, m.train_freq,
                                        m.max_count, m.dc_map)
        out.append((list(d.candidates), m.clf.predict_proba(X)[:, 1]))
    return out


def _write_loss_csv(path, history: dict[str, list[float]]) -> None:
    stages = list(history)
    epochs = max((len(v) for v in history.values()), default=0)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch"] + stages)
        for e in range(epochs):
            row = [e + 1]
            for s in stages:
                row.append(f"{history[s][e]:.6f}" if e < len(history[s]) else "")
            writer.writerow(row)


def _write_per_definition(path, corpus: Corpus,
                          selections: list[set[int]]) -> None:
    def fmt(positions, d):
        return ";".join(f"{i}:{d.W[i - 1]}" for i in sorted(positions))

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t")
        writer.writerow(["term", "predicted", "gold", "correct"])
        for d, sel in zip(corpus.definitions, selections):
            ok = int(bool(sel) and sel <= d.gold)
            writer.writerow([d.term, fmt(sel, d), fmt(d.gold, d), ok])


def _report_dir(args) -> Path | None:
    if getattr(args, "report_dir", None) is None:
        return None
    path = Path(args.report_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _print_scores(label: str, s: evaluation.Scores) -> None:
    print(f"{label}: precision {s.precision:.4f} recall {s.recall:.4f} "
          f"f1 {s.f1:.4f} (predicted {s.predicted}, correct {s.correct}, "
          f"gold {s.total_gold})")


# ------------------------------------------------------------ commands


def cmd_prepare(args) -> int:
    try:
        corpus, rejected = load_corpus_file(
            args.input, require_gold=not args.allow_unannotated)
    except OSError as exc:
        raise CliError(str(exc)) from None
    save_corpus(corpus, args.output)
    for err in rejected:
        print(f"rejected {err}", file=sys.stderr)
    print(f"loaded {len(corpus)} definitions, rejected {len(rejected)} records")
    if not corpus.definitions:
        print("warning: output corpus is empty", file=sys.stderr)
    return 0


def cmd_synth(args) -> int:
    cfg = SynthConfig(n_records=args.records, vocab_size=args.vocab_size,
                      zipf_exponent=args.zipf_exponent,
                      singleton_fraction=args.singleton_fraction)
    records = generate_records(cfg, args.seed)
    save_records(records, args.output)
    print(f"wrote {len(records)} synthetic definitions to {args.output}")
    return 0


def cmd_train(args) -> int:
    config = _config_from_args(args)
    corpus = _load_corpus_arg(args.corpus)
    if not 0.0 < args.train_frac <= 1.0:
        raise CliError("--train-frac must lie in (0, 1]")
    held = None
    if args.train_frac < 1.0:
        train_c, held = split(corpus, args.train_frac, config.seed)
    else:
        train_c = corpus
    m = model_mod.train(train_c, config)
    model_mod.save_model(m, args.model)
    loss_path = Path(args.model).with_suffix(".loss.csv")
    rep = _report_dir(args)
    if rep is not None:
        loss_path = rep / "loss.csv"
    _write_loss_csv(loss_path, m.history)
    for stage, losses in m.history.items():
        print(f"{stage}: {len(losses)} epochs, final loss {losses[-1]:.6f}")
    print(f"model saved to {args.model}; loss log in {loss_path}")
    if held is not None:
        _print_scores("held-out", evaluation.evaluate_model(m, held))
    if rep is not None:
        report.render_loss(rep / "loss.png", m.history)
        print(f"report written to {rep}")
    return 0


def cmd_eval(args) -> int:
    kind, m = _load_any_model(args.model)
    m = _apply_threshold(kind, m, args.threshold)
    corpus = _load_corpus_arg(args.corpus)
    part = _select_split(corpus, args.split, args.train_frac, args.seed)
    selections = _model_predictions(kind, m, part)
    gold = [d.gold for d in part.definitions]
    s = evaluation.score(gold, selections)
    threshold = m.config.threshold if kind == "neural" else m.threshold
    _print_scores(f"{args.split}", s)

    rep = _report_dir(args)
    out = Path(args.out) if args.out else (rep / "eval.csv" if rep else None)
    if out is not None:
        evaluation.write_eval_csv(out, [(f"{threshold:g}", s)])
        print(f"metrics written to {out}")
    per_def = (Path(args.per_definition) if args.per_definition
               else (rep / "per_definition.tsv" if rep else None))
    if per_def is not None:
        _write_per_definition(per_def, part, selections)
        print(f"per-definition results written to {per_def}")
    if rep is not None and kind == "neural":
        detailed = model_mod.candidate_scores(m, part)
        report.render_probability_histogram(rep / "probabilities.png",
                                            detailed, gold)
        print(f"probability histogram written to {rep / 'probabilities.png'}")
    return 0


def cmd_predict(args) -> int:
    kind, m = _load_any_model(args.model)
    m = _apply_threshold(kind, m, args.threshold)
    threshold = m.config.threshold if kind == "neural" else m.threshold
    if args.sentence is not None:
        sentences = [args.sentence]
    else:
        sentences = [line for line in sys.stdin if line.strip()]
    for sentence in sentences:
        tokens = sentence.split()
        if not tokens:
            continue
        term = args.term if args.term else tokens[0]
        record = {"term": term, "tokens": tokens}
        try:
            defn = parse_record(json.dumps(record), require_gold=False)
        except RecordError as err:
            print(f"warning: {err.reason}", file=sys.stderr)
            continue
        one = Corpus.from_definitions([defn])
        positions, probs = _candidate_probs(kind, m, one)[0]
        best = int(np.argmax(probs))
        selected = positions[best] if probs[best] >= threshold else None
        if args.json:
            doc = {"term": term,
                   "selected": ([{"position": selected,
                                  "token": defn.W[selected - 1]}]
                                if selected is not None else []),
                   "candidates": [{"position": i, "token": defn.W[i - 1],
                                   "probability": float(p)}
                                  for i, p in zip(positions, probs)]}
            print(json.dumps(doc, ensure_ascii=False, sort_keys=True))
            continue
        print(f"term: {term}")
        for i, p in zip(positions, probs):
            mark = "  <- selected" if i == selected else ""
            print(f"  {i:>3} {defn.W[i - 1]:<20} {p:.4f}{mark}")
        if selected is None:
            print(f"  no candidate above threshold {threshold:g}")
    return 0


def cmd_stats(args) -> int:
    corpus = _load_corpus_arg(args.corpus)
    part = _select_split(corpus, args.split, args.train_frac, args.seed)
    rows = evaluation.pos_position_stats(part)
    print(f"{'pos':<6} {'p1_n':>8} {'p2_n':>8} {'p1_h':>8} {'p2_h':>8}")
    for row in rows:
        print(f"{row['pos']:<6} {row['p1_n']:>8.4f} {row['p2_n']:>8.4f} "
              f"{row['p1_h']:>8.4f} {row['p2_h']:>8.4f}")
    rep = _report_dir(args)
    out = Path(args.out) if args.out else (rep / "stats.csv" if rep else None)
    if out is not None:
        evaluation.write_stats_csv(out, rows)
        print(f"table written to {out}")
    if rep is not None:
        report.render_stats(rep / "stats.png", rows)
        print(f"figure written to {rep / 'stats.png'}")
    return 0


def _parse_values(raw: str) -> list:
    values = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            values.append(int(part))
        except ValueError:
            try:
                values.append(float(part))
            except ValueError:
                values.append(part)
    if not values:
        raise CliError("--values is empty")
    return values


def cmd_sweep(args) -> int:
    config = _config_from_args(args)
    corpus = _load_corpus_arg(args.corpus)
    if not 0.0 < args.train_frac < 1.0:
        raise CliError("sweep needs --train-frac strictly between 0 and 1")
    train_c, test_c = split(corpus, args.train_frac, config.seed)
    values = _parse_values(args.values)
    try:
        rows = evaluation.sweep(train_c, test_c, config, args.axis, values)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    for value, s in rows:
        _print_scores(f"{args.axis}={value}", s)
    rep = _report_dir(args)
    out = Path(args.out) if args.out else (rep / "sweep.csv" if rep else None)
    if out is not None:
        evaluation.write_sweep_csv(out, rows)
        print(f"sweep written to {out}")
    if rep is not None:
        report.render_sweep(rep / "sweep.png", rows, xlabel=args.axis)
        print(f"figure written to {rep / 'sweep.png'}")
    return 0


def cmd_baseline(args) -> int:
    corpus = _load_corpus_arg(args.corpus)
    if not 0.0 < args.train_frac <= 1.0:
        raise CliError("--train-frac must lie in (0, 1]")
    held = None
    if args.train_frac < 1.0:
        train_c, held = split(corpus, args.train_frac, args.seed)
    else:
        train_c = corpus
    try:
        bm = baselines.train_baseline(args.kind, train_c, window=args.window,
                                      threshold=args.threshold)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    baselines.save_baseline(bm, args.model)
    print(f"{args.kind} baseline saved to {args.model}")
    if held is not None:
        selections = baselines.baseline_predict(bm, held)
        gold = [d.gold for d in held.definitions]
        _print_scores("held-out", evaluation.score(gold, selections))
    return 0


def cmd_fetch_so(args) -> int:
    cache = Path(args.cache_dir) if args.cache_dir else stackex.default_cache_dir()
    client = stackex.StackClient(cache_dir=cache, offline=args.offline)
    try:
        with open(args.tags, encoding="utf-8") as fh:
            groups = stackex.read_tag_file(fh)
    except OSError as exc:
        raise CliError(str(exc)) from None
    if not groups:
        raise CliError(f"{args.tags}: no tags listed")
    records, skipped, exhausted = stackex.fetch_tags(
        client, groups, annotate=args.annotate_pattern)
    with open(args.output, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    for msg in skipped:
        print(f"warning: {msg}", file=sys.stderr)
    print(f"fetched {len(records)} of {len(groups)} tags into {args.output}")
    if args.annotate_pattern:
        print("note: hypernym_index values are heuristic pre-fills; review "
              "them before treating the corpus as annotated", file=sys.stderr)
    if exhausted:
        print("error: request quota exhausted; output is partial",
              file=sys.stderr)
        return 1
    return 0


# -------------------------------------------------------------- parser


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model configuration")
    g.add_argument("--mode", choices=model_mod.MODES, default="pos",
                   help="context encoding (default: pos)")
    g.add_argument("--window", type=int, default=3, metavar="L",
                   help="context window length per side (default: 3)")
    g.add_argument("--hidden", type=int, default=64, metavar="H",
                   help="recurrent state size (default: 64)")
    g.add_argument("--topk", type=int, default=None, metavar="K",
                   help="word slots for the hybrid encodings")
    g.add_argument("--epochs", type=int, default=30)
    g.add_argument("--lr", type=float, default=1e-3)
    g.add_argument("--dropout", type=float, default=0.5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--threshold", type=float, default=0.5,
                   help="minimum probability for a selection (default: 0.5)")
    g.add_argument("--no-refine", action="store_true",
                   help="skip the second stage; predictions use the "
                        "classifier probability directly")


def _add_split_flags(p: argparse.ArgumentParser, default_side: str) -> None:
    p.add_argument("--split", choices=("train", "test", "all"),
                   default=default_side,
                   help=f"corpus slice to use (default: {default_side})")
    p.add_argument("--train-frac", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0,
                   help="split seed; match the training seed to reproduce "
                        "its partition (default: 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="defhyper",
        description="Extract hypernyms from definition sentences.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="normalize raw records into a corpus")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--allow-unannotated", action="store_true",
                   help="keep records that lack a hypernym annotation")
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("output")
    p.add_argument("--records", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vocab-size", type=int, default=1500)
    p.add_argument("--zipf-exponent", type=float, default=1.1)
    p.add_argument("--singleton-fraction", type=float, default=0.2)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="fit the two-stage classifier")
    p.add_argument("corpus")
    p.add_argument("--model", required=True, help="output model path")
    p.add_argument("--train-frac", type=float, default=0.8,
                   help="fraction trained on; the rest is scored as a "
                        "held-out set (default: 0.8; 1.0 uses everything)")
    p.add_argument("--report-dir")
    _add_model_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score a model on an annotated corpus")
    p.add_argument("model")
    p.add_argument("corpus")
    p.add_argument("--threshold", type=float, default=None,
                   help="override the stored selection threshold")
    p.add_argument("--out", help="metrics CSV path")
    p.add_argument("--per-definition", help="per-definition TSV path")
    p.add_argument("--report-dir")
    _add_split_flags(p, default_side="all")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="score candidates in new sentences")
    p.add_argument("model")
    p.add_argument("--sentence", help="input sentence (default: stdin lines)")
    p.add_argument("--term", help="defined term (default: first token)")
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--json", action="store_true",
                   help="machine-readable output, one JSON object per line")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("stats", help="tag position shares around candidates")
    p.add_argument("corpus")
    p.add_argument("--out", help="CSV path")
    p.add_argument("--report-dir")
    _add_split_flags(p, default_side="train")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("sweep", help="retrain across one setting's values")
    p.add_argument("corpus")
    p.add_argument("--axis", required=True,
                   help="config field to vary (e.g. window, hidden, topk)")
    p.add_argument("--values", required=True,
                   help="comma-separated values for the axis")
    p.add_argument("--train-frac", type=float, default=0.8)
    p.add_argument("--out", help="CSV path")
    p.add_argument("--report-dir")
    _add_model_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("baseline", help="fit a flat-feature classifier")
    p.add_argument("kind", choices=baselines.BASELINE_KINDS)
    p.add_argument("corpus")
    p.add_argument("--model", required=True, help="output model path")
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--train-frac", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("fetch-so", help="fetch tag-wiki definitions")
    p.add_argument("tags", help="file of tag groups, one per line; the "
                                "first tag is fetched, the rest are its "
                                "co-occurring partners")
    p.add_argument("output", help="raw JSONL output path")
    p.add_argument("--cache-dir",
                   help=f"response cache (default: ${stackex.CACHE_ENV} "
                        "or ~/.cache/defhyper)")
    p.add_argument("--offline", action="store_true",
                   help="serve from the cache only")
    p.add_argument("--annotate-pattern", action="store_true",
                   help="pre-fill hypernym_index with the first noun after "
                        "'is/are a/an/the' (heuristic, for human review)")
    p.set_defaults(func=cmd_fetch_so)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
