"""Command-line entry points: corpus export, phrase export, report parsing."""

from __future__ import annotations

import argparse
import sys

from .encoding import ENCODERS, StubEncoder, make_encoder
from .export import (
    ExportJob,
    collect_missing_phrases,
    export_corpus,
    export_phrases,
    read_sentences,
)
from .tagging import AllenNLPTagger, StubTagger


def _make_tagger(name: str, device: str):
    if name == "stub":
        return StubTagger()
    if name == "allennlp":
        return AllenNLPTagger(device=-1 if device == "cpu" else 0)
    raise ValueError(f"unknown tagger {name!r}")


def _make_encoder(args):
    if args.encoder == "stub" and getattr(args, "max_words", None):
        return StubEncoder(max_words=args.max_words)
    return make_encoder(args.encoder, device=args.device,
                        batch_size=args.batch_size)


def cmd_corpus(args) -> int:
    sentences = read_sentences(args.input)
    job = ExportJob(
        sentences=sentences,
        encoder=args.encoder,
        out_path=args.out,
        batch_size=args.batch_size,
        device=args.device,
    )
    report = export_corpus(job, _make_tagger(args.tagger, args.device),
                           encoder=_make_encoder(args))
    for input_id in report.truncated:
        sys.stderr.write(f"warning: truncated sentence {input_id}\n")
    for input_id, reason in report.failures:
        sys.stderr.write(f"warning: skipped sentence {input_id}: {reason}\n")
    sys.stdout.write(
        f"written\t{report.written}\nduplicates\t{len(report.duplicates)}\n"
    )
    return 0


def cmd_phrases(args) -> int:
    with open(args.input, encoding="utf-8") as handle:
        phrases = [line.rstrip("\n") for line in handle if line.strip()]
    count = export_phrases(phrases, _make_encoder(args), args.out)
    sys.stdout.write(f"written\t{count}\n")
    return 0


def cmd_collect(args) -> int:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8") as handle:
            text = handle.read()
    phrases = collect_missing_phrases(text)
    out = open(args.out, "w", encoding="utf-8", newline="\n") if args.out else sys.stdout
    try:
        for phrase in phrases:
            out.write(phrase + "\n")
    finally:
        if args.out:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spanexport",
        description="Export encoded corpora and phrase stores for span alignment",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--encoder", choices=sorted(ENCODERS), required=True)
        p.add_argument("--device", default="cpu")
        p.add_argument("--batch-size", type=int, default=32)

    corpus = sub.add_parser("corpus", help="tag and encode sentences into a corpus file")
    corpus.add_argument("--in", dest="input", required=True,
                        help="plain text (one sentence per line) or TSV (id, text)")
    corpus.add_argument("--out", required=True)
    common(corpus)
    corpus.add_argument("--tagger", choices=["stub", "allennlp"], default="stub")
    corpus.add_argument("--max-words", type=int,
                        help="stub encoder word limit, for truncation testing")
    corpus.set_defaults(func=cmd_corpus)

    phrases = sub.add_parser("phrases", help="encode phrases standalone into a store")
    phrases.add_argument("--in", dest="input", required=True,
                         help="one phrase per line")
    phrases.add_argument("--out", required=True)
    common(phrases)
    phrases.set_defaults(func=cmd_phrases)

    collect = sub.add_parser(
        "collect", help="extract missing-phrase surfaces from scoring stderr"
    )
    collect.add_argument("--in", dest="input", required=True,
                         help="captured stderr, or - for stdin")
    collect.add_argument("--out", help="default stdout")
    collect.set_defaults(func=cmd_collect)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
