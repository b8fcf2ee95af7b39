"""Corpus and phrase-store export.

Produces the line-oriented JSON files the scoring engine loads: one
validated sentence object per corpus line, one phrase vector per store
line, each file headed by a ``#`` manifest comment recording backend
names and versions (the loader ignores comment lines).  Sentences are
keyed by the first 16 hex characters of the SHA-1 of their raw text,
the content-address convention the engine's pair files resolve against.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

MISSING_PREFIX = "missing-phrase\t"


def sentence_key(text: str) -> str:
    return hashlib.sha1(text.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class ExportJob:
    """What to export: input rows, encoder choice, output location."""

    sentences: tuple          # ((input id, text), ...)
    encoder: str
    out_path: str
    batch_size: int = 32
    device: str = "cpu"

    def __post_init__(self):
        ids = [i for i, _ in self.sentences]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate input ids: {dupes[:5]}")


@dataclass
class ExportReport:
    written: int = 0
    duplicates: list = field(default_factory=list)   # input ids sharing text
    truncated: list = field(default_factory=list)    # input ids cut to fit
    failures: list = field(default_factory=list)     # (input id, reason)


def read_sentences(path) -> tuple:
    """Input rows from plain text (one sentence per line) or TSV (id, text)."""
    rows = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            stripped = line.rstrip("\n")
            if not stripped.strip() or stripped.startswith("#"):
                continue
            if "\t" in stripped:
                input_id, _, text = stripped.partition("\t")
            else:
                input_id, text = str(line_no), stripped
            rows.append((input_id, text))
    if not rows:
        raise ValueError(f"{path}: no sentences")
    return tuple(rows)


def _clip_frames(frames, word_count):
    clipped = []
    for predicate, arguments in frames:
        if predicate >= word_count:
            continue
        kept = tuple(
            (role, start, min(end, word_count))
            for role, start, end in arguments
            if start < word_count and min(end, word_count) > start
        )
        clipped.append((predicate, kept))
    return tuple(clipped)


def _corpus_line(text, words, encoding, frames) -> str:
    obj = {
        "id": sentence_key(text),
        "text": text,
        "words": list(words),
        "word_to_subtokens": [[a, b] for a, b in encoding.ranges],
        "embedding_dim": int(encoding.token_vectors.shape[1]),
        "token_embeddings": encoding.token_vectors.tolist(),
        "srl_frames": [
            {
                "predicate_word": predicate,
                "arguments": [
                    {"role": role, "start_word": start, "end_word": end}
                    for role, start, end in arguments
                ],
            }
            for predicate, arguments in frames
        ],
        "sentence_embedding": encoding.sentence_vector.tolist(),
    }
    return json.dumps(obj)


def _manifest(kind, encoder, tagger=None) -> str:
    parts = [f"spanexport {kind}", f"encoder={encoder.name}:{encoder.version}"]
    if tagger is not None:
        parts.append(f"tagger={tagger.name}:{tagger.version}")
    parts.append(f"dim={encoder.dim}")
    return "# " + " ".join(parts)


def export_corpus(job: ExportJob, tagger, encoder=None) -> ExportReport:
    """Tag, encode and write every input sentence as one corpus line.

    Sentences sharing identical text collapse to one line (they share a
    content key).  Over-length sentences are truncated to what the
    encoder kept; frames are clipped to the surviving words and the
    input id is reported.  A sentence the tagger yields no words for is
    recorded as a failure and skipped.
    """
    if encoder is None:
        from .encoding import make_encoder

        encoder = make_encoder(job.encoder, device=job.device,
                               batch_size=job.batch_size)
    report = ExportReport()
    seen = {}
    with open(job.out_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(_manifest("corpus", encoder, tagger) + "\n")
        for input_id, text in job.sentences:
            key = sentence_key(text)
            if key in seen:
                report.duplicates.append(input_id)
                continue
            tagged = tagger.tag(text)
            if not tagged.words:
                report.failures.append((input_id, "no words after tokenization"))
                continue
            encoding = encoder.encode_words(tagged.words)
            words = tagged.words
            frames = tagged.frames
            if encoding.truncated:
                words = words[: len(encoding.ranges)]
                frames = _clip_frames(frames, len(words))
                report.truncated.append(input_id)
            handle.write(_corpus_line(text, words, encoding, frames) + "\n")
            seen[key] = input_id
            report.written += 1
    return report


def export_phrases(phrases, encoder, out_path) -> int:
    """Encode each distinct phrase standalone; returns lines written."""
    distinct = []
    seen = set()
    for phrase in phrases:
        if phrase and phrase not in seen:
            seen.add(phrase)
            distinct.append(phrase)
    if not distinct:
        raise ValueError("no phrases to export")
    with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(_manifest("phrases", encoder) + "\n")
        for phrase in distinct:
            vector = encoder.encode_phrase(phrase)
            handle.write(
                json.dumps({"phrase": phrase, "embedding": vector.tolist()}) + "\n"
            )
    return len(distinct)


def collect_missing_phrases(report_text: str) -> list:
    """Distinct surfaces from a scoring run's missing-phrase report.

    The engine prints one ``missing-phrase<TAB>surface`` line per absent
    phrase on stderr when it exits with code 3; other lines are ignored.
    """
    phrases = []
    seen = set()
    for line in report_text.splitlines():
        if not line.startswith(MISSING_PREFIX):
            continue
        surface = line[len(MISSING_PREFIX):]
        if surface and surface not in seen:
            seen.add(surface)
            phrases.append(surface)
    return phrases
