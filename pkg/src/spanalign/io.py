"""File formats: encoded corpora, phrase stores, dataset pairs, scores.

Encoded corpora and phrase stores are line-oriented JSON (one object per
line, ``#`` lines ignored) so fixtures stay diffable and producers in
any language can emit them.  Dataset pair files are the tab-separated
layouts the source corpora ship with, selected by preset.  Sentences
are addressed by a content hash of their text so that pair files, which
carry raw sentences, can reference corpus entries without a shared id
registry; producers must key corpus lines the same way.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass

import numpy as np

from .errors import InputValidationError
from .metrics import NEGATIVE, POSITIVE, MetricReport
from .similarity import EncodedSentence, TokenEmbeddings
from .spans import SentenceRecord, SRLArgument, SRLFrame

PRESET_PAWS = "paws"
PRESET_MSRP = "msrp"
PRESET_TWITTERURL = "twitterurl"
PRESET_CUSTOM = "custom"
PRESETS = (PRESET_PAWS, PRESET_MSRP, PRESET_TWITTERURL, PRESET_CUSTOM)

# TwitterURL labels count agreeing annotators out of six.
TWITTERURL_POSITIVE_MIN = 4
TWITTERURL_NEGATIVE_MAX = 2


def sentence_id(text: str) -> str:
    """Stable content address of a sentence: first 16 hex chars of SHA-1."""
    return hashlib.sha1(text.encode("utf-8")).hexdigest()[:16]


def _format_float(x: float) -> str:
    return format(float(x), ".9g")


# ---------------------------------------------------------------------------
# Encoded corpus


@dataclass(frozen=True)
class EncodedCorpus:
    """Validated sentences keyed by id, all sharing one embedding dim."""

    sentences: dict
    dim: int

    def __getitem__(self, key: str) -> EncodedSentence:
        return self.sentences[key]

    def __contains__(self, key: str) -> bool:
        return key in self.sentences

    def __len__(self) -> int:
        return len(self.sentences)

    def ids(self) -> list[str]:
        return list(self.sentences.keys())


def _require(obj: dict, key: str, line_no: int):
    if key not in obj:
        raise InputValidationError(f"line {line_no}: missing field {key!r}")
    return obj[key]


def _int_pairs(raw, line_no: int, field: str) -> tuple[tuple[int, int], ...]:
    try:
        return tuple((int(a), int(b)) for a, b in raw)
    except (TypeError, ValueError) as exc:
        raise InputValidationError(
            f"line {line_no}: field {field!r} must be a list of [start, end] pairs"
        ) from exc


def _parse_frames(raw, line_no: int) -> tuple[SRLFrame, ...]:
    frames = []
    try:
        for frame in raw:
            arguments = tuple(
                SRLArgument(
                    role=str(arg["role"]),
                    start_word=int(arg["start_word"]),
                    end_word=int(arg["end_word"]),
                )
                for arg in frame["arguments"]
            )
            frames.append(
                SRLFrame(predicate_word=int(frame["predicate_word"]), arguments=arguments)
            )
    except (TypeError, KeyError, ValueError) as exc:
        raise InputValidationError(
            f"line {line_no}: field 'srl_frames' is malformed: {exc}"
        ) from exc
    return tuple(frames)


def _parse_corpus_line(obj: dict, line_no: int) -> EncodedSentence:
    rec_id = str(_require(obj, "id", line_no))
    text = str(_require(obj, "text", line_no))
    words = tuple(str(w) for w in _require(obj, "words", line_no))
    ranges = _int_pairs(_require(obj, "word_to_subtokens", line_no), line_no, "word_to_subtokens")
    dim = _require(obj, "embedding_dim", line_no)
    if not isinstance(dim, int) or dim < 1:
        raise InputValidationError(
            f"line {line_no}: field 'embedding_dim' must be a positive integer"
        )
    token_rows = _require(obj, "token_embeddings", line_no)
    frames = _parse_frames(_require(obj, "srl_frames", line_no), line_no)

    try:
        tokens = TokenEmbeddings(np.asarray(token_rows, dtype=np.float64))
    except (ValueError, InputValidationError) as exc:
        raise InputValidationError(
            f"line {line_no}: field 'token_embeddings' is invalid: {exc}"
        ) from exc
    if tokens.dim != dim:
        raise InputValidationError(
            f"line {line_no}: token embeddings have dim {tokens.dim}, "
            f"field 'embedding_dim' says {dim}"
        )

    sentence_emb = obj.get("sentence_embedding")
    if sentence_emb is not None:
        sentence_emb = np.asarray(sentence_emb, dtype=np.float64)

    try:
        record = SentenceRecord(
            id=rec_id,
            text=text,
            words=words,
            word_to_subtokens=ranges,
            embedding_dim=dim,
            token_count=tokens.count,
            srl_frames=frames,
            has_sentence_embedding=sentence_emb is not None,
        )
        return EncodedSentence(
            record=record, tokens=tokens, sentence_embedding=sentence_emb
        )
    except InputValidationError as exc:
        raise InputValidationError(f"line {line_no}: {exc}") from exc


def _iter_json_lines(path):
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                obj = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise InputValidationError(
                    f"line {line_no}: not valid JSON: {exc}"
                ) from exc
            if not isinstance(obj, dict):
                raise InputValidationError(f"line {line_no}: expected a JSON object")
            yield line_no, obj


def load_encoded_corpus(path) -> EncodedCorpus:
    """Load and validate an encoded-corpus file.

    Every record must satisfy the sentence invariants, ids must be
    unique, and all lines must share one embedding dimension.
    """
    sentences: dict[str, EncodedSentence] = {}
    dim = None
    for line_no, obj in _iter_json_lines(path):
        encoded = _parse_corpus_line(obj, line_no)
        if dim is None:
            dim = encoded.record.embedding_dim
        elif encoded.record.embedding_dim != dim:
            raise InputValidationError(
                f"line {line_no}: embedding dim {encoded.record.embedding_dim} "
                f"differs from earlier dim {dim}"
            )
        if encoded.id in sentences:
            raise InputValidationError(
                f"line {line_no}: duplicate sentence id {encoded.id!r}"
            )
        sentences[encoded.id] = encoded
    if not sentences:
        raise InputValidationError(f"{path}: no records")
    return EncodedCorpus(sentences=sentences, dim=dim)


def merge_corpora(corpora) -> EncodedCorpus:
    """Union of several corpora; ids must not collide across files."""
    corpora = list(corpora)
    if not corpora:
        raise InputValidationError("no corpora to merge")
    dims = {c.dim for c in corpora}
    if len(dims) > 1:
        raise InputValidationError(f"corpora mix embedding dims {sorted(dims)}")
    merged: dict[str, EncodedSentence] = {}
    for corpus in corpora:
        for key, enc in corpus.sentences.items():
            if key in merged:
                raise InputValidationError(f"duplicate sentence id {key!r} across corpora")
            merged[key] = enc
    return EncodedCorpus(sentences=merged, dim=corpora[0].dim)


def _corpus_line(encoded: EncodedSentence) -> dict:
    record = encoded.record
    obj = {
        "id": record.id,
        "text": record.text,
        "words": list(record.words),
        "word_to_subtokens": [[a, b] for a, b in record.word_to_subtokens],
        "embedding_dim": record.embedding_dim,
        "token_embeddings": encoded.tokens.vectors.tolist(),
        "srl_frames": [
            {
                "predicate_word": frame.predicate_word,
                "arguments": [
                    {
                        "role": arg.role,
                        "start_word": arg.start_word,
                        "end_word": arg.end_word,
                    }
                    for arg in frame.arguments
                ],
            }
            for frame in record.srl_frames
        ],
    }
    if encoded.sentence_embedding is not None:
        obj["sentence_embedding"] = encoded.sentence_embedding.tolist()
    return obj


def write_encoded_corpus(path, corpus: EncodedCorpus, header: str | None = None):
    """Serialize a corpus back to line-oriented JSON (exact float repr)."""
    with open(path, "w", encoding="utf-8") as handle:
        if header:
            handle.write(f"# {header}\n")
        for encoded in corpus.sentences.values():
            handle.write(json.dumps(_corpus_line(encoded)) + "\n")


# ---------------------------------------------------------------------------
# Phrase store


@dataclass(frozen=True)
class PhraseStore:
    """Context-free phrase vectors keyed by exact surface string."""

    vectors: dict
    dim: int

    def __getitem__(self, phrase: str) -> np.ndarray:
        return self.vectors[phrase]

    def __contains__(self, phrase: str) -> bool:
        return phrase in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


def load_phrase_store(path) -> PhraseStore:
    vectors: dict[str, np.ndarray] = {}
    dim = None
    for line_no, obj in _iter_json_lines(path):
        phrase = str(_require(obj, "phrase", line_no))
        raw = _require(obj, "embedding", line_no)
        vec = np.asarray(raw, dtype=np.float64)
        if vec.ndim != 1 or not np.isfinite(vec).all():
            raise InputValidationError(
                f"line {line_no}: field 'embedding' must be a finite 1-d vector"
            )
        if dim is None:
            dim = vec.shape[0]
        elif vec.shape[0] != dim:
            raise InputValidationError(
                f"line {line_no}: embedding has dim {vec.shape[0]}, "
                f"earlier lines have {dim}"
            )
        if phrase in vectors:
            raise InputValidationError(f"line {line_no}: duplicate phrase {phrase!r}")
        vectors[phrase] = vec
    if not vectors:
        raise InputValidationError(f"{path}: no records")
    return PhraseStore(vectors=vectors, dim=dim)


def write_phrase_store(path, store: PhraseStore, header: str | None = None):
    with open(path, "w", encoding="utf-8") as handle:
        if header:
            handle.write(f"# {header}\n")
        for phrase, vec in store.vectors.items():
            handle.write(
                json.dumps({"phrase": phrase, "embedding": np.asarray(vec).tolist()})
                + "\n"
            )


# ---------------------------------------------------------------------------
# Dataset pairs


@dataclass(frozen=True)
class DatasetPair:
    """One labelled sentence pair; id_a/id_b address corpus entries."""

    pair_id: str
    id_a: str
    id_b: str
    gold: str
    text_a: str
    text_b: str


def _binary_label(raw: str, line_no: int) -> str:
    if raw == "1":
        return POSITIVE
    if raw == "0":
        return NEGATIVE
    raise InputValidationError(
        f"line {line_no}: cannot parse label {raw!r} (expected 0 or 1)"
    )


def _twitterurl_label(raw: str, line_no: int) -> str | None:
    match = re.search(r"\d+", raw)
    if not match:
        raise InputValidationError(
            f"line {line_no}: cannot parse annotator-count label {raw!r}"
        )
    count = int(match.group())
    if count >= TWITTERURL_POSITIVE_MIN:
        return POSITIVE
    if count <= TWITTERURL_NEGATIVE_MAX:
        return NEGATIVE
    return None  # middle band discarded


def _split_columns(line: str, minimum: int, line_no: int) -> list[str]:
    columns = line.rstrip("\n").split("\t")
    if len(columns) < minimum:
        raise InputValidationError(
            f"line {line_no}: expected at least {minimum} tab-separated "
            f"columns, got {len(columns)}"
        )
    return columns


def _make_pair(pair_id: str, text_a: str, text_b: str, gold: str) -> DatasetPair:
    return DatasetPair(
        pair_id=pair_id,
        id_a=sentence_id(text_a),
        id_b=sentence_id(text_b),
        gold=gold,
        text_a=text_a,
        text_b=text_b,
    )


def _iter_pair_rows(path, preset, columns, label_map):
    """Yield ("header", line, None) or ("pair", line, DatasetPair) rows.

    Rows a preset discards (the TwitterURL middle band) are skipped.
    """
    if preset not in PRESETS:
        raise InputValidationError(
            f"unknown preset {preset!r}; expected one of {', '.join(PRESETS)}"
        )
    if preset == PRESET_CUSTOM:
        if not columns or "s1" not in columns or "s2" not in columns or "label" not in columns:
            raise InputValidationError(
                "custom preset needs column indices for s1, s2 and label"
            )
        if not label_map:
            raise InputValidationError("custom preset needs a label map")

    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            if preset == PRESET_PAWS:
                cols = _split_columns(line, 4, line_no)
                if line_no == 1 and cols[3].strip().lower() == "label":
                    yield "header", line, None
                    continue
                pair = _make_pair(cols[0], cols[1], cols[2], _binary_label(cols[3], line_no))
            elif preset == PRESET_MSRP:
                if line_no == 1:
                    yield "header", line, None
                    continue
                cols = _split_columns(line, 5, line_no)
                pair = _make_pair(
                    f"{cols[1]}:{cols[2]}",
                    cols[3],
                    cols[4],
                    _binary_label(cols[0], line_no),
                )
            elif preset == PRESET_TWITTERURL:
                cols = _split_columns(line, 3, line_no)
                gold = _twitterurl_label(cols[2], line_no)
                if gold is None:
                    continue
                pair = _make_pair(str(line_no), cols[0], cols[1], gold)
            else:
                cols = _split_columns(line, max(columns.values()) + 1, line_no)
                raw = cols[columns["label"]]
                if raw not in label_map:
                    raise InputValidationError(
                        f"line {line_no}: label {raw!r} not in label map"
                    )
                pair_id = cols[columns["id"]] if "id" in columns else str(line_no)
                pair = _make_pair(
                    pair_id, cols[columns["s1"]], cols[columns["s2"]], label_map[raw]
                )
            yield "pair", line, pair


def load_pairs(
    path,
    preset: str,
    columns: dict | None = None,
    label_map: dict | None = None,
) -> list[DatasetPair]:
    """Load a tab-separated pair file in one of the dataset layouts.

    paws: (id, sentence1, sentence2, label 0/1), optional header.
    msrp: (label, id1, id2, sentence1, sentence2) with a header row;
    the pair id is "id1:id2".
    twitterurl: (sentence1, sentence2, annotator count); >= 4 of 6 is
    positive, <= 2 negative, 3 discarded; the row number is the pair id.
    custom: column indices via ``columns`` (keys id, s1, s2, label; id
    optional) and a ``label_map`` from raw label to positive/negative.
    """
    pairs = [
        pair
        for kind, _, pair in _iter_pair_rows(path, preset, columns, label_map)
        if kind == "pair"
    ]
    if not pairs:
        raise InputValidationError(f"{path}: no pairs")
    return pairs


def load_pair_lines(
    path,
    preset: str,
    columns: dict | None = None,
    label_map: dict | None = None,
):
    """Like :func:`load_pairs` but keeps the raw lines for rewriting.

    Returns (header lines, list of (raw line, DatasetPair)).
    """
    header: list[str] = []
    rows: list[tuple[str, DatasetPair]] = []
    for kind, line, pair in _iter_pair_rows(path, preset, columns, label_map):
        if kind == "header":
            header.append(line)
        else:
            rows.append((line, pair))
    if not rows:
        raise InputValidationError(f"{path}: no pairs")
    return header, rows


def unique_sentences(pairs) -> list[tuple[str, str]]:
    """Deduplicated (sentence id, text) rows covering both pair sides."""
    seen: dict[str, str] = {}
    for pair in pairs:
        seen.setdefault(pair.id_a, pair.text_a)
        seen.setdefault(pair.id_b, pair.text_b)
    return list(seen.items())


# ---------------------------------------------------------------------------
# Score files and metric reports


def write_scores(path, scores):
    """One line per pair: id, score at nine significant digits, mode."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for item in scores:
            handle.write(f"{item.pair_id}\t{_format_float(item.score)}\t{item.mode}\n")


def load_scores(path) -> list[tuple[str, float, str]]:
    rows = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            cols = _split_columns(line, 3, line_no)
            try:
                rows.append((cols[0], float(cols[1]), cols[2]))
            except ValueError as exc:
                raise InputValidationError(
                    f"line {line_no}: bad score {cols[1]!r}"
                ) from exc
    if not rows:
        raise InputValidationError(f"{path}: no scores")
    return rows


REPORT_KEYS = (
    "f1_pos",
    "accuracy",
    "precision_pos",
    "recall_pos",
    "recall_neg",
    "threshold",
    "tp",
    "fp",
    "tn",
    "fn",
)


def format_report_text(report: MetricReport) -> str:
    values = report.as_dict()
    lines = []
    for key in REPORT_KEYS:
        value = values[key]
        if isinstance(value, int):
            lines.append(f"{key}\t{value}")
        else:
            lines.append(f"{key}\t{_format_float(value)}")
    return "\n".join(lines) + "\n"


def write_report_json(path, reports: dict):
    """Write named metric reports as a JSON object keyed by report name."""
    payload = {name: report.as_dict() for name, report in reports.items()}
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
