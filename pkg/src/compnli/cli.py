"""Command-line surface: reproducible dataset, diagnostic, and model runs.

Every file-writing run leaves a manifest next to its outputs recording the
tool version, arguments, input hashes and seed; rerunning with the same
inputs and seed reproduces the primary outputs byte for byte (only the
manifest timestamp moves).  Exit codes: 0 success, 1 usage, 2 data error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .corpus import LABEL_ORDER, TOKENIZER_VERSION, Corpus, Label, load_corpus, save_corpus
from .diagnostics import (
    antonym_predicate,
    conditional_stats,
    high_overlap_subset,
    negation_differs,
    pair_has_negation,
    rank_by_overlap,
    render_conditional_report,
    render_overlap_report,
    render_vocab_diff_report,
)
from .errors import CompnliError, DataError, FormatError, NumericalError
from .generator import (
    GeneratorConfig,
    PairType,
    default_pools,
    generate,
    load_pool,
    split,
    vocab_diff,
)
from .lexicon import load_embeddings, load_thesaurus
from .models import (
    PairClassifier,
    evaluate,
    finetune,
    load_classifier,
    mix,
    save_classifier,
    symmetry_check,
    two_proportion_test,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; route through our own
    # exit-code scheme instead (usage errors are 1, data errors are 2).
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


# -- plumbing ----------------------------------------------------------------


def _resolve(path_str: str) -> Path:
    """Find an input file directly or under $COMPNLI_DATA_DIR."""
    path = Path(path_str)
    if path.exists():
        return path
    data_dir = os.environ.get("COMPNLI_DATA_DIR")
    if data_dir:
        candidate = Path(data_dir) / path_str
        if candidate.exists():
            return candidate
        raise DataError(f"no such file: {path_str} (also tried {candidate})")
    raise DataError(f"no such file: {path_str}")


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _load(path_str: str, format: str = "snli-jsonl", name: str | None = None) -> tuple[Corpus, Path]:
    path = _resolve(path_str)
    corpus, skipped = load_corpus(path, format=format, name=name)
    if skipped:
        print(f"loaded {len(corpus)} pairs from {path} ({skipped} lines skipped)", file=sys.stderr)
    return corpus, path


def _write_manifest(
    command: str,
    args: argparse.Namespace,
    inputs: dict[str, Path | bytes],
    outputs: list[Path],
) -> Path:
    echo = {
        key: (str(value) if isinstance(value, Path) else value)
        for key, value in sorted(vars(args).items())
        if key != "func" and not key.startswith("_")
    }
    hashes = {}
    for label, source in sorted(inputs.items()):
        data = source if isinstance(source, bytes) else Path(source).read_bytes()
        hashes[label] = f"sha256:{_sha256(data)}"
    manifest = {
        "tool": "compnli",
        "version": __version__,
        "tokenizer_version": TOKENIZER_VERSION,
        "command": command,
        "arguments": echo,
        "inputs": hashes,
        "outputs": [str(p) for p in outputs],
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    first = outputs[0]
    manifest_path = first / "manifest.json" if first.is_dir() else Path(f"{first}.manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest_path


def _emit(report: str, out: str | None, command: str, args, inputs: dict) -> None:
    """Print a report, or write it plus a manifest when --out is given."""
    if out is None:
        sys.stdout.write(report)
        return
    out_path = Path(out)
    _check_overwrite(out_path, inputs)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(report, encoding="utf-8")
    _write_manifest(command, args, inputs, [out_path])
    print(f"wrote {out_path}")


def _check_overwrite(out_path: Path, inputs: dict[str, Path | bytes]) -> None:
    for label, source in inputs.items():
        if isinstance(source, bytes):
            continue
        if Path(source).resolve() == out_path.resolve():
            raise DataError(f"refusing to overwrite input {label} at {source}")


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise _UsageError(f"expected comma-separated integers, got {text!r}") from None


def _parse_subset(corpus: Corpus, subset: str | None, threads: int) -> Corpus:
    if subset is None:
        return corpus
    kind, _, value = subset.partition(":")
    if kind != "top" or not value.isdigit():
        raise _UsageError(f"--subset must look like top:K, got {subset!r}")
    return high_overlap_subset(corpus, int(value), rank_by_overlap(corpus, threads=threads))


# -- subcommands -------------------------------------------------------------


def cmd_generate(args) -> int:
    inputs: dict[str, Path | bytes] = {}
    if args.subjects:
        subjects_path = _resolve(args.subjects)
        subjects = load_pool(subjects_path)
        inputs["subjects"] = subjects_path
    else:
        subjects, _ = default_pools()
        inputs["subjects"] = "\n".join(subjects).encode()
    if args.adjectives:
        adjectives_path = _resolve(args.adjectives)
        adjectives = load_pool(adjectives_path)
        inputs["adjectives"] = adjectives_path
    else:
        _, adjectives = default_pools()
        inputs["adjectives"] = "\n".join(adjectives).encode()

    pair_types = tuple(PairType(t) for t in args.types.split(","))
    sizes = None
    if args.split.lower() != "none":
        parts = _parse_int_list(args.split)
        if len(parts) != 3:
            raise _UsageError(f"--split needs three sizes or 'none', got {args.split!r}")
        sizes = tuple(parts)

    config = GeneratorConfig(
        subjects=subjects,
        adjectives=adjectives,
        pair_types=pair_types,
        split_sizes=sizes,
        seed=args.seed,
    )
    corpora = generate(config)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = "jsonl" if args.out_format == "snli-jsonl" else "tsv"
    outputs = []
    summary = ["name\tpairs"]
    for pair_type in config.pair_types:
        corpus = corpora[pair_type]
        path = out_dir / f"comparisons-{pair_type.value}.{ext}"
        save_corpus(corpus, path, format=args.out_format)
        outputs.append(path)
        summary.append(f"{corpus.name}\t{len(corpus)}")

    if sizes is not None:
        pooled_pairs = [pair for t in config.pair_types for pair in corpora[t].pairs]
        random.Random(f"{args.seed}/pool").shuffle(pooled_pairs)
        pooled = Corpus(pairs=tuple(pooled_pairs), name="comparisons")
        for part in split(pooled, sizes, seed=args.seed):
            path = out_dir / f"{part.name}.{ext}"
            save_corpus(part, path, format=args.out_format)
            outputs.append(path)
            summary.append(f"{part.name}\t{len(part)}")

    _write_manifest("generate", args, inputs, [out_dir] + outputs)
    print("\n".join(summary))
    return EXIT_OK


def _stats_report(args, corpus: Corpus, inputs: dict) -> str:
    threads = args.threads
    corpus = _parse_subset(corpus, getattr(args, "subset", None), threads)
    if args.kind == "overlap":
        requested = _parse_int_list(args.top)
        ks = [k for k in requested if k <= len(corpus)]
        for k in sorted(set(requested) - set(ks)):
            print(f"note: --top {k} exceeds corpus size {len(corpus)}, skipped", file=sys.stderr)
        ranking = rank_by_overlap(corpus, mode=args.mode, threads=threads)
        return render_overlap_report(corpus, ks, ranking, fmt=args.format)
    if args.kind == "negation":
        if args.predicate == "contains":
            predicate, name = pair_has_negation, "Neg"
        else:
            predicate, name = negation_differs, "NegDiff"
        stats = conditional_stats(corpus, predicate, name, threads=threads)
        return render_conditional_report(stats, corpus.name, fmt=args.format)
    if args.kind == "antonym":
        if not args.thesaurus:
            raise _UsageError("stats antonym requires --thesaurus")
        thesaurus_path = _resolve(args.thesaurus)
        inputs["thesaurus"] = thesaurus_path
        thesaurus = load_thesaurus(thesaurus_path)
        stats = conditional_stats(corpus, antonym_predicate(thesaurus), "Ant", threads=threads)
        return render_conditional_report(
            stats, corpus.name, thesaurus_hash=_sha256(thesaurus_path.read_bytes()), fmt=args.format
        )
    raise _UsageError(f"unknown stats kind {args.kind!r}")


def cmd_stats(args) -> int:
    if args.kind == "vocab-diff":
        if not args.other:
            raise _UsageError("stats vocab-diff requires --other")
        return _vocab_diff_core(args, args.corpus, args.other, args.threshold)
    corpus, path = _load(args.corpus, format=args.corpus_format)
    inputs = {"corpus": path}
    report = _stats_report(args, corpus, inputs)
    _emit(report, args.out, "stats", args, inputs)
    return EXIT_OK


def _vocab_diff_core(args, path_a: str, path_b: str, threshold: float) -> int:
    corpus_a, resolved_a = _load(path_a, format=args.corpus_format)
    corpus_b, resolved_b = _load(path_b, format=args.corpus_format)
    flagged = vocab_diff(corpus_a, corpus_b, threshold)
    report = render_vocab_diff_report(
        flagged, corpus_a.name, corpus_b.name, threshold, fmt=args.format
    )
    _emit(report, args.out, "vocab-diff", args, {"corpus_a": resolved_a, "corpus_b": resolved_b})
    return EXIT_OK


def cmd_vocab_diff(args) -> int:
    return _vocab_diff_core(args, args.corpus_a, args.corpus_b, args.threshold)


def _load_embeddings_for(args, corpora: list[Corpus]) -> tuple:
    vocabulary = set()
    for corpus in corpora:
        for pair in corpus:
            vocabulary.update(pair.premise.tokens)
            vocabulary.update(pair.hypothesis.tokens)
    path = _resolve(args.embeddings)
    table, rejected = load_embeddings(path, vocab_filter=vocabulary)
    if rejected:
        print(f"embeddings: {rejected} malformed lines rejected", file=sys.stderr)
    return table, path


def _model_out_path(out: str) -> Path:
    return Path(out) if out.endswith(".npz") else Path(out + ".npz")


def _finish_training(command: str, args, clf: PairClassifier, inputs: dict) -> int:
    out_path = _model_out_path(args.out)
    _check_overwrite(out_path, inputs)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    save_classifier(clf, out_path)
    log_path = Path(f"{out_path}.log.tsv")
    log_path.write_text(clf.log_.to_tsv(), encoding="utf-8")
    _write_manifest(command, args, inputs, [out_path, log_path])
    last = clf.log_.rows[-1] if clf.log_.rows else None
    print(f"wrote {out_path} ({clf.epochs_run_} epochs)")
    if last is not None:
        dev = "n/a" if last.dev_accuracy is None else f"{last.dev_accuracy:.4f}"
        print(f"final train accuracy {last.train_accuracy:.4f}, dev accuracy {dev}")
        for name in sorted(last.extra):
            print(f"final {name} accuracy {last.extra[name]:.4f}")
    return EXIT_OK


def cmd_train(args) -> int:
    train_corpus, train_path = _load(args.train, format=args.corpus_format)
    dev_corpus, dev_path = _load(args.dev, format=args.corpus_format)
    table, emb_path = _load_embeddings_for(args, [train_corpus, dev_corpus])
    clf = PairClassifier(
        encoder=args.encoder,
        embeddings=table,
        hidden_units=args.hidden_units,
        learning_rate=args.learning_rate,
        lr_decay=args.lr_decay,
        lr_drop=args.lr_drop,
        lr_floor=args.lr_floor,
        max_epochs=args.epochs,
        batch_size=args.batch_size,
        combiner=args.combiner,
        encode_dtype=args.encode_dtype,
        seed=args.seed,
    )
    clf.fit(train_corpus, dev=dev_corpus)
    inputs = {"train": train_path, "dev": dev_path, "embeddings": emb_path}
    return _finish_training("train", args, clf, inputs)


def cmd_finetune(args) -> int:
    train_corpus, train_path = _load(args.train, format=args.corpus_format)
    corpora = [train_corpus]
    inputs: dict[str, Path | bytes] = {"train": train_path, "model": _resolve(args.model)}
    dev_corpus = None
    if args.dev:
        dev_corpus, dev_path = _load(args.dev, format=args.corpus_format)
        corpora.append(dev_corpus)
        inputs["dev"] = dev_path
    heldout = None
    if args.original_heldout:
        heldout, heldout_path = _load(args.original_heldout, format=args.corpus_format)
        corpora.append(heldout)
        inputs["original_heldout"] = heldout_path
    table, emb_path = _load_embeddings_for(args, corpora)
    inputs["embeddings"] = emb_path
    base = load_classifier(inputs["model"], table)
    overrides = {
        name: value
        for name, value in {
            "learning_rate": args.learning_rate,
            "max_epochs": args.epochs,
            "batch_size": args.batch_size,
            "seed": args.seed,
        }.items()
        if value is not None
    }
    tuned = finetune(base, train_corpus, dev=dev_corpus, original_heldout=heldout, **overrides)
    return _finish_training("finetune", args, tuned, inputs)


def _render_confusion(counts, fmt: str, indent: str = "") -> list[str]:
    header = ["gold\\pred"] + [label.value for label in LABEL_ORDER]
    lines = []
    if fmt == "tsv":
        lines.append(indent + "\t".join(header))
        for i, label in enumerate(LABEL_ORDER):
            lines.append(indent + "\t".join([label.value] + [str(int(c)) for c in counts[i]]))
    else:
        width = max(len(h) for h in header) + 2
        lines.append(indent + "".join(f"{h:>{width}}" for h in header))
        for i, label in enumerate(LABEL_ORDER):
            cells = [label.value] + [str(int(c)) for c in counts[i]]
            lines.append(indent + "".join(f"{c:>{width}}" for c in cells))
    return lines


def cmd_eval(args) -> int:
    test_corpus, test_path = _load(args.test, format=args.corpus_format)
    table, emb_path = _load_embeddings_for(args, [test_corpus])
    model_path = _resolve(args.model)
    clf = load_classifier(model_path, table)
    report = evaluate(clf, test_corpus)

    lines = [f"# corpus={test_corpus.name} model={model_path} tokenizer={TOKENIZER_VERSION}"]
    lines.append(f"accuracy\t{report.accuracy:.6f}" if args.format == "tsv" else f"accuracy: {100 * report.accuracy:.2f}%")
    lines.extend(_render_confusion(report.confusion.counts, args.format))
    for pair_type, type_eval in report.per_type.items():
        if args.format == "tsv":
            lines.append(f"type:{pair_type.value}\taccuracy\t{type_eval.accuracy:.6f}\tn\t{type_eval.size}")
        else:
            lines.append(f"type {pair_type.value}: accuracy {100 * type_eval.accuracy:.2f}% (n={type_eval.size})")
        lines.extend(_render_confusion(type_eval.confusion.counts, args.format, indent="  " if args.format != "tsv" else ""))
    if args.symmetry:
        twins = symmetry_check(clf, test_corpus)
        lines.append(f"symmetry_twins\t{twins.n_twins}" if args.format == "tsv" else f"symmetry: {twins.n_twins} twins checked")
        lines.append(f"symmetry_violations\t{len(twins.violations)}" if args.format == "tsv" else f"symmetry violations: {len(twins.violations)}")
        for source_id, pred_e, pred_c in twins.violations:
            lines.append(f"violation\t{source_id}\t{pred_e.value}\t{pred_c.value}")
    text = "\n".join(lines) + "\n"

    inputs = {"test": test_path, "embeddings": emb_path, "model": model_path}
    outputs = []
    if args.save_predictions:
        predictions_path = Path(args.save_predictions)
        _check_overwrite(predictions_path, inputs)
        predictions_path.parent.mkdir(parents=True, exist_ok=True)
        rows = ["source_id\tgold\tpredicted"]
        for pair, predicted in zip(test_corpus, report.predictions):
            rows.append(f"{pair.source_id}\t{pair.label.value}\t{predicted.value}")
        predictions_path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        outputs.append(predictions_path)
    if args.out:
        out_path = Path(args.out)
        _check_overwrite(out_path, inputs)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(text, encoding="utf-8")
        outputs.insert(0, out_path)
        print(f"wrote {out_path}")
    else:
        sys.stdout.write(text)
    if outputs:
        _write_manifest("eval", args, inputs, outputs)
    return EXIT_OK


def cmd_mix(args) -> int:
    corpus_a, path_a = _load(args.corpus_a, format=args.corpus_format)
    corpus_b, path_b = _load(args.corpus_b, format=args.corpus_format)
    mixed = mix(corpus_a, corpus_b, seed=args.seed)
    out_path = Path(args.out)
    inputs = {"corpus_a": path_a, "corpus_b": path_b}
    _check_overwrite(out_path, inputs)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    save_corpus(mixed, out_path, format=args.out_format)
    _write_manifest("mix", args, inputs, [out_path])
    print(f"wrote {out_path} ({len(mixed)} pairs = {len(corpus_a)} + {len(corpus_b)})")
    return EXIT_OK


def _read_predictions(path: Path) -> list[tuple[str, Label, Label]]:
    rows = []
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n")
        if header != "source_id\tgold\tpredicted":
            raise FormatError("expected header 'source_id<TAB>gold<TAB>predicted'", path=path, lineno=1)
        for lineno, line in enumerate(handle, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError(f"expected 3 columns, got {len(parts)}", path=path, lineno=lineno)
            try:
                rows.append((parts[0], Label(parts[1]), Label(parts[2])))
            except ValueError:
                raise FormatError(f"unknown label in {parts[1:]!r}", path=path, lineno=lineno) from None
    if not rows:
        raise DataError(f"no predictions in {path}")
    return rows


def cmd_sigtest(args) -> int:
    modes = [bool(args.predictions), bool(args.predictions_a or args.predictions_b), bool(args.counts)]
    if sum(modes) != 1:
        raise _UsageError("choose exactly one of --predictions, --predictions-a/--predictions-b, --counts")
    inputs: dict[str, Path | bytes] = {}
    if args.predictions:
        # Within one prediction file: rate of predicting --target among
        # true contradictions vs true entailments.
        path = _resolve(args.predictions)
        inputs["predictions"] = path
        rows = _read_predictions(path)
        target = Label(args.target)
        group_a = [r for r in rows if r[1] is Label.CONTRADICTION]
        group_b = [r for r in rows if r[1] is Label.ENTAILMENT]
        if not group_a or not group_b:
            raise DataError("need both true-contradiction and true-entailment rows")
        result = two_proportion_test(
            sum(r[2] is target for r in group_a), len(group_a),
            sum(r[2] is target for r in group_b), len(group_b),
        )
        description = (
            f"P(predict {target.value} | gold contradiction) vs "
            f"P(predict {target.value} | gold entailment)"
        )
        sizes = (len(group_a), len(group_b))
    elif args.counts:
        correct_a, n_a, correct_b, n_b = args.counts
        result = two_proportion_test(correct_a, n_a, correct_b, n_b)
        description = "rate A vs rate B from raw counts"
        sizes = (n_a, n_b)
    else:
        if not (args.predictions_a and args.predictions_b):
            raise _UsageError("--predictions-a and --predictions-b must be given together")
        path_a, path_b = _resolve(args.predictions_a), _resolve(args.predictions_b)
        inputs["predictions_a"], inputs["predictions_b"] = path_a, path_b
        rows_a, rows_b = _read_predictions(path_a), _read_predictions(path_b)
        result = two_proportion_test(
            sum(gold is pred for _, gold, pred in rows_a), len(rows_a),
            sum(gold is pred for _, gold, pred in rows_b), len(rows_b),
        )
        description = f"accuracy of {path_a} vs {path_b}"
        sizes = (len(rows_a), len(rows_b))

    if args.format == "tsv":
        text = (
            f"# {description}\n"
            f"rate_a\t{result.rate_a:.6f}\nrate_b\t{result.rate_b:.6f}\n"
            f"n_a\t{sizes[0]}\nn_b\t{sizes[1]}\n"
            f"z\t{result.z:.6f}\np_value\t{result.p_value:.6g}\n"
        )
    else:
        text = (
            f"{description}\n"
            f"  rate A = {100 * result.rate_a:.2f}% (n={sizes[0]}), "
            f"rate B = {100 * result.rate_b:.2f}% (n={sizes[1]})\n"
            f"  z = {result.z:.3f}, two-sided p = {result.p_value:.3g}\n"
        )
    _emit(text, args.out, "sigtest", args, inputs)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="compnli", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"compnli {__version__}")

    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for diagnostics (default 1)")
    common.add_argument("--format", choices=("tsv", "human"), default="tsv", help="report format")
    common.add_argument(
        "--corpus-format", choices=("snli-jsonl", "tsv"), default="snli-jsonl",
        help="format of input corpora",
    )

    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("generate", parents=[common], help="generate the Comparisons dataset")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--subjects", help="subject pool file (default: packaged pool)")
    p.add_argument("--adjectives", help="adjective pool file (default: packaged pool)")
    p.add_argument("--types", default="same,more_less,not", help="comma list of pair types")
    p.add_argument("--split", default="40000,2000,2000", help="train,val,test sizes or 'none'")
    p.add_argument("--out-format", choices=("snli-jsonl", "tsv"), default="snli-jsonl")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("stats", parents=[common], help="lexical-heuristic reports on a corpus")
    p.add_argument("kind", choices=("overlap", "antonym", "negation", "vocab-diff"))
    p.add_argument("--corpus", required=True, help="corpus path (resolved via COMPNLI_DATA_DIR)")
    p.add_argument("--top", default="1000,10000", help="overlap: comma list of top-K sizes")
    p.add_argument("--mode", choices=("jaccard", "tokens"), default="jaccard", help="overlap flavor")
    p.add_argument("--predicate", choices=("contains", "differs"), default="contains",
                   help="negation: pair contains negation vs sides differ")
    p.add_argument("--thesaurus", help="antonym: thesaurus JSONL path")
    p.add_argument("--subset", help="restrict to an overlap subset first, e.g. top:10000")
    p.add_argument("--other", help="vocab-diff: second corpus")
    p.add_argument("--threshold", type=float, default=0.01, help="vocab-diff: rate gap")
    p.add_argument("--out", help="write the report here (default stdout)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("vocab-diff", parents=[common], help="compare token occurrence rates")
    p.add_argument("corpus_a")
    p.add_argument("corpus_b")
    p.add_argument("--threshold", type=float, default=0.01)
    p.add_argument("--out")
    p.set_defaults(func=cmd_vocab_diff)

    def add_training_args(p, for_finetune: bool) -> None:
        # Fine-tuning defaults to None so unset flags inherit the saved
        # model's hyperparameters instead of fresh-training defaults.
        p.add_argument("--train", required=True)
        p.add_argument("--dev", required=not for_finetune)
        p.add_argument("--embeddings", required=True, help="embedding text file")
        p.add_argument("--out", required=True, help="model output path (.npz)")
        p.add_argument("--learning-rate", type=float, default=None if for_finetune else 0.1)
        p.add_argument("--epochs", type=int, default=None if for_finetune else 20)
        p.add_argument("--batch-size", type=int, default=None if for_finetune else 64)

    p = sub.add_parser("train", parents=[common], help="train a classifier")
    add_training_args(p, for_finetune=False)
    p.add_argument("--encoder", choices=("bow", "half_split"), default="bow")
    p.add_argument("--combiner", choices=("full", "concat"), default="full")
    p.add_argument("--hidden-units", type=int, default=512)
    p.add_argument("--lr-decay", type=float, default=0.99)
    p.add_argument("--lr-drop", type=float, default=5.0)
    p.add_argument("--lr-floor", type=float, default=1e-5)
    p.add_argument("--encode-dtype", choices=("float64", "float32"), default="float64")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("finetune", parents=[common], help="continue training a saved model")
    add_training_args(p, for_finetune=True)
    p.add_argument("--model", required=True, help="saved model to start from")
    p.add_argument("--original-heldout", help="corpus whose accuracy is tracked per epoch")
    p.set_defaults(func=cmd_finetune, seed=None)

    p = sub.add_parser("eval", parents=[common], help="evaluate a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--save-predictions", help="write per-pair predictions TSV here")
    p.add_argument("--symmetry", action="store_true", help="also check twin-prediction symmetry")
    p.add_argument("--out", help="write the report here (default stdout)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("mix", parents=[common], help="concatenate and shuffle two corpora")
    p.add_argument("corpus_a")
    p.add_argument("corpus_b")
    p.add_argument("--out", required=True)
    p.add_argument("--out-format", choices=("snli-jsonl", "tsv"), default="snli-jsonl")
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("sigtest", parents=[common], help="two-proportion significance test")
    p.add_argument("--predictions", help="single predictions file: compare target-label rates by gold label")
    p.add_argument("--target", default="entailment", help="label whose prediction rate is compared")
    p.add_argument("--predictions-a", help="compare accuracies: first predictions file")
    p.add_argument("--predictions-b", help="compare accuracies: second predictions file")
    p.add_argument("--counts", type=int, nargs=4, metavar=("CORRECT_A", "N_A", "CORRECT_B", "N_B"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_sigtest)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, FormatError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except CompnliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
