"""Command-line surface for the scoring and evaluation pipeline.

Subcommands: score, calibrate, evaluate, explain, overlap, split.
Exit codes: 0 on success, 2 on input or validation errors, 3 when a
de-contextualized run found phrases missing from the store (the missing
surfaces are printed to stderr as ``missing-phrase<TAB>surface`` lines
so an exporter can pick them up).
"""

from __future__ import annotations

import argparse
import sys

from . import io as data_io
from . import metrics as met
from . import pipeline
from .errors import InputValidationError, MissingPhrasesError
from .similarity import MODE_ALIGNED, MODES
from .spans import STRATEGIES, STRATEGY_PAS

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_MISSING_PHRASES = 3


def _parse_columns(text: str) -> dict:
    columns = {}
    for part in text.split(","):
        key, _, value = part.partition("=")
        try:
            columns[key.strip()] = int(value)
        except ValueError as exc:
            raise InputValidationError(
                f"bad --columns entry {part!r}; expected name=index"
            ) from exc
    return columns


def _parse_label_map(text: str) -> dict:
    mapping = {}
    for part in text.split(","):
        raw, _, gold = part.partition("=")
        if gold not in (met.POSITIVE, met.NEGATIVE):
            raise InputValidationError(
                f"bad --label-map entry {part!r}; expected raw={met.POSITIVE}"
                f" or raw={met.NEGATIVE}"
            )
        mapping[raw] = gold
    return mapping


def _add_pairs_args(parser, prefix: str = ""):
    flag = f"--{prefix}pairs" if prefix else "--pairs"
    parser.add_argument(flag, required=True, help="tab-separated pair file")
    parser.add_argument(
        f"--{prefix}preset" if prefix else "--preset",
        required=True,
        choices=data_io.PRESETS,
        help="pair file layout",
    )


def _add_custom_preset_args(parser):
    parser.add_argument(
        "--columns",
        help="custom preset column indices, e.g. id=0,s1=1,s2=2,label=3",
    )
    parser.add_argument(
        "--label-map",
        help="custom preset label mapping, e.g. 1=positive,0=negative",
    )


def _load_pairs(args, prefix: str = ""):
    path = getattr(args, f"{prefix}pairs" if prefix else "pairs")
    preset = getattr(args, f"{prefix}preset" if prefix else "preset")
    columns = _parse_columns(args.columns) if getattr(args, "columns", None) else None
    label_map = (
        _parse_label_map(args.label_map) if getattr(args, "label_map", None) else None
    )
    return data_io.load_pairs(path, preset, columns=columns, label_map=label_map)


def _load_corpus(args):
    corpora = [data_io.load_encoded_corpus(path) for path in args.corpus]
    if len(corpora) == 1:
        return corpora[0]
    return data_io.merge_corpora(corpora)


def _load_store(args):
    if getattr(args, "phrase_store", None):
        return data_io.load_phrase_store(args.phrase_store)
    return None


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_score(args) -> int:
    pairs = _load_pairs(args)
    corpus = _load_corpus(args)
    scores = pipeline.score_dataset(
        corpus,
        pairs,
        strategy=args.strategy,
        mode=args.mode,
        seed=args.seed,
        store=_load_store(args),
        workers=args.workers,
    )
    data_io.write_scores(args.out, scores)
    return EXIT_OK


def _labels_by_pair_id(pairs) -> dict:
    return {pair.pair_id: pair.gold for pair in pairs}


def _labeled_scores(score_rows, labels) -> list[met.LabeledScore]:
    labeled = []
    seen = set()
    for pair_id, value, _ in score_rows:
        if pair_id not in labels:
            raise InputValidationError(
                f"score for pair {pair_id!r} has no matching pair in the pair file"
            )
        labeled.append(met.LabeledScore(pair_id=pair_id, score=value, gold=labels[pair_id]))
        seen.add(pair_id)
    unscored = set(labels) - seen
    if unscored:
        example = sorted(unscored)[0]
        raise InputValidationError(
            f"{len(unscored)} pair(s) have no score, e.g. {example!r}"
        )
    return labeled


def _report_block(name: str, report: met.MetricReport) -> str:
    return f"# tuned for {name}\n{data_io.format_report_text(report)}"


def cmd_calibrate(args) -> int:
    labels = _labels_by_pair_id(_load_pairs(args))
    dev = _labeled_scores(data_io.load_scores(args.scores), labels)
    targets = list(met.TARGET_METRICS) if args.metric == "both" else [args.metric]
    reports = {}
    blocks = []
    for target in targets:
        threshold = met.find_optimal_threshold(dev, target)
        report = met.evaluate(dev, threshold)
        reports[target] = report
        blocks.append(_report_block(target, report))
    sys.stdout.write("\n".join(blocks))
    if args.out:
        data_io.write_report_json(args.out, reports)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    labels = _labels_by_pair_id(_load_pairs(args))
    test = _labeled_scores(data_io.load_scores(args.scores), labels)

    reports = {}
    if args.threshold is not None:
        threshold = met.Threshold(value=args.threshold, target_metric=args.metric)
        reports[args.metric] = met.evaluate(test, threshold)
    else:
        if not args.dev_scores:
            raise InputValidationError(
                "evaluate needs either --threshold or --dev-scores/--dev-pairs"
            )
        dev_labels = _labels_by_pair_id(_load_pairs(args, prefix="dev_"))
        dev = _labeled_scores(data_io.load_scores(args.dev_scores), dev_labels)
        targets = list(met.TARGET_METRICS) if args.metric == "both" else [args.metric]
        for target in targets:
            threshold = met.find_optimal_threshold(dev, target)
            reports[target] = met.evaluate(test, threshold)

    blocks = [_report_block(name, report) for name, report in reports.items()]
    sys.stdout.write("\n".join(blocks))
    if args.out:
        data_io.write_report_json(args.out, reports)
    return EXIT_OK


def cmd_explain(args) -> int:
    pairs = _load_pairs(args)
    matching = [pair for pair in pairs if pair.pair_id == args.pair_id]
    if not matching:
        raise InputValidationError(f"pair id {args.pair_id!r} not found in pair file")
    corpus = _load_corpus(args)
    table = pipeline.explain_table(
        corpus,
        matching[0],
        strategy=args.strategy,
        seed=args.seed,
        mode=args.mode,
        store=_load_store(args),
    )
    _emit(table, args.out)
    return EXIT_OK


def cmd_overlap(args) -> int:
    pairs = _load_pairs(args)
    report = met.overlap_report(
        [pair.text_a for pair in pairs],
        [pair.text_b for pair in pairs],
        [pair.gold for pair in pairs],
    )

    def fmt(value):
        return "-" if value is None else f"{value:.2f}"

    text = (
        f"positive\t{fmt(report.positive)}\n"
        f"negative\t{fmt(report.negative)}\n"
        f"overall\t{fmt(report.overall)}\n"
    )
    _emit(text, args.out)
    return EXIT_OK


def cmd_split(args) -> int:
    columns = _parse_columns(args.columns) if getattr(args, "columns", None) else None
    label_map = (
        _parse_label_map(args.label_map) if getattr(args, "label_map", None) else None
    )
    header, rows = data_io.load_pair_lines(
        args.pairs, args.preset, columns=columns, label_map=label_map
    )
    train_rows, dev_rows = met.stratified_dev_split(
        rows,
        [pair.gold for _, pair in rows],
        fraction=args.fraction,
        seed=args.seed,
    )
    for path, selected in ((args.train_out, train_rows), (args.dev_out, dev_rows)):
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            for line in header:
                handle.write(line)
            for line, _ in selected:
                handle.write(line)
    sys.stdout.write(
        f"train\t{len(train_rows)}\ndev\t{len(dev_rows)}\n"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spanalign",
        description="Paraphrase scoring by optimal alignment of predicate-argument spans",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    score = sub.add_parser("score", help="score every pair of a dataset")
    score.add_argument(
        "--corpus", action="append", required=True, help="encoded corpus file (repeatable)"
    )
    _add_pairs_args(score)
    _add_custom_preset_args(score)
    score.add_argument("--strategy", choices=STRATEGIES, default=STRATEGY_PAS)
    score.add_argument("--mode", choices=MODES, default=MODE_ALIGNED)
    score.add_argument("--seed", type=int, help="seed for the random span strategies")
    score.add_argument("--phrase-store", help="phrase vectors for aligned-decontext")
    score.add_argument("--workers", type=int, default=1)
    score.add_argument("--out", required=True, help="score file to write")
    score.set_defaults(func=cmd_score)

    calibrate = sub.add_parser("calibrate", help="find optimal thresholds on dev scores")
    calibrate.add_argument("--scores", required=True, help="dev score file")
    _add_pairs_args(calibrate)
    _add_custom_preset_args(calibrate)
    calibrate.add_argument(
        "--metric", choices=list(met.TARGET_METRICS) + ["both"], default="both"
    )
    calibrate.add_argument("--out", help="write reports as JSON")
    calibrate.set_defaults(func=cmd_calibrate)

    evaluate = sub.add_parser("evaluate", help="apply thresholds to test scores")
    evaluate.add_argument("--scores", required=True, help="test score file")
    _add_pairs_args(evaluate)
    _add_custom_preset_args(evaluate)
    evaluate.add_argument("--threshold", type=float, help="fixed decision threshold")
    evaluate.add_argument("--dev-scores", help="dev score file to calibrate on")
    evaluate.add_argument("--dev-pairs", help="dev pair file")
    evaluate.add_argument(
        "--dev-preset", choices=data_io.PRESETS, help="dev pair file layout"
    )
    evaluate.add_argument(
        "--metric", choices=list(met.TARGET_METRICS) + ["both"], default="both"
    )
    evaluate.add_argument("--out", help="write reports as JSON")
    evaluate.set_defaults(func=cmd_evaluate)

    explain = sub.add_parser("explain", help="print one pair's alignment table")
    explain.add_argument("--corpus", action="append", required=True)
    _add_pairs_args(explain)
    _add_custom_preset_args(explain)
    explain.add_argument("--pair-id", required=True)
    explain.add_argument("--strategy", choices=STRATEGIES, default=STRATEGY_PAS)
    explain.add_argument(
        "--mode",
        choices=["aligned", "aligned-decontext"],
        default=MODE_ALIGNED,
    )
    explain.add_argument("--seed", type=int)
    explain.add_argument("--phrase-store")
    explain.add_argument("--out")
    explain.set_defaults(func=cmd_explain)

    overlap = sub.add_parser("overlap", help="lexical overlap statistics per class")
    _add_pairs_args(overlap)
    _add_custom_preset_args(overlap)
    overlap.add_argument("--out")
    overlap.set_defaults(func=cmd_overlap)

    split = sub.add_parser("split", help="stratified train/dev split of a pair file")
    _add_pairs_args(split)
    _add_custom_preset_args(split)
    split.add_argument("--fraction", type=float, default=0.2)
    split.add_argument("--seed", type=int, default=met.DEFAULT_SPLIT_SEED)
    split.add_argument("--train-out", required=True)
    split.add_argument("--dev-out", required=True)
    split.set_defaults(func=cmd_split)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "evaluate" and args.dev_pairs:
            # evaluate reuses the pair-loading helper with a dev_ prefix
            args.dev_preset = args.dev_preset or args.preset
        return args.func(args)
    except MissingPhrasesError as exc:
        sys.stderr.write(f"error: {exc}\n")
        for surface in exc.surfaces:
            sys.stderr.write(f"missing-phrase\t{surface}\n")
        return EXIT_MISSING_PHRASES
    except InputValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT_ERROR
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
