"""Predicate-argument span construction and ablation span strategies.

A sentence arrives as an ordered word list plus the word-to-subtoken
ranges of the encoder's tokenizer and the frames emitted by a semantic
role labeller.  Each (predicate, argument) pair becomes one span: the
predicate word united with the argument's word range, ordered by the
original sentence position.  Sentences without any frame fall back to a
single span covering the whole sentence.

Three alternative strategies exist for ablation studies: one span per
token, randomly sampled word sets, and randomly sampled contiguous word
ranges.  The random builders are deterministic given their seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputValidationError

STRATEGY_PAS = "pas"
STRATEGY_TOKEN = "token"
STRATEGY_RANDOM = "random"
STRATEGY_CONTINUOUS_RANDOM = "continuous-random"
STRATEGIES = (
    STRATEGY_PAS,
    STRATEGY_TOKEN,
    STRATEGY_RANDOM,
    STRATEGY_CONTINUOUS_RANDOM,
)

KIND_WHOLE_SENTENCE = "whole-sentence"


@dataclass(frozen=True)
class SRLArgument:
    """One role-labelled argument: a half-open word range [start, end)."""

    role: str
    start_word: int
    end_word: int


@dataclass(frozen=True)
class SRLFrame:
    """A predicate word index with its role-labelled arguments."""

    predicate_word: int
    arguments: tuple[SRLArgument, ...]


@dataclass(frozen=True)
class SentenceRecord:
    """A tokenized sentence with its subtoken map and SRL frames.

    ``word_to_subtokens[i]`` is the half-open subtoken range of word i;
    the ranges must be ascending, non-overlapping, and cover
    [0, token_count) exactly.  Special tokens added by the encoder's
    tokenizer are excluded from the map by the export contract, so spans
    never pool them.
    """

    id: str
    text: str
    words: tuple[str, ...]
    word_to_subtokens: tuple[tuple[int, int], ...]
    embedding_dim: int
    token_count: int
    srl_frames: tuple[SRLFrame, ...] = ()
    has_sentence_embedding: bool = False

    def __post_init__(self):
        if not self.words:
            raise InputValidationError(f"record {self.id!r}: empty word list")
        if len(self.word_to_subtokens) != len(self.words):
            raise InputValidationError(
                f"record {self.id!r}: {len(self.words)} words but "
                f"{len(self.word_to_subtokens)} subtoken ranges"
            )
        if self.embedding_dim < 1:
            raise InputValidationError(
                f"record {self.id!r}: embedding_dim must be positive"
            )
        cursor = 0
        for i, (start, end) in enumerate(self.word_to_subtokens):
            if start != cursor or end <= start:
                raise InputValidationError(
                    f"record {self.id!r}: word {i} subtoken range [{start}, {end}) "
                    f"must start at {cursor} and be non-empty"
                )
            cursor = end
        if cursor != self.token_count:
            raise InputValidationError(
                f"record {self.id!r}: subtoken ranges cover [0, {cursor}) "
                f"but token_count is {self.token_count}"
            )
        for frame in self.srl_frames:
            self._check_frame(frame)

    def _check_frame(self, frame: SRLFrame):
        n = len(self.words)
        if not 0 <= frame.predicate_word < n:
            raise InputValidationError(
                f"record {self.id!r}: predicate word {frame.predicate_word} "
                f"outside [0, {n})"
            )
        for arg in frame.arguments:
            if not (0 <= arg.start_word < arg.end_word <= n):
                raise InputValidationError(
                    f"record {self.id!r}: argument {arg.role!r} range "
                    f"[{arg.start_word}, {arg.end_word}) invalid for {n} words"
                )


@dataclass(frozen=True)
class PASpan:
    """A span over the sentence: word indices, their subtokens, surface text.

    ``surface`` is the space-joined words at ``word_indices`` in original
    sentence order; the words need not be contiguous.
    """

    word_indices: tuple[int, ...]
    subtoken_indices: tuple[int, ...]
    surface: str
    kind: str


@dataclass(frozen=True)
class SpanSet:
    """The ordered span collection of one sentence under one strategy."""

    record_id: str
    spans: tuple[PASpan, ...]
    strategy: str

    def __post_init__(self):
        if not self.spans:
            raise InputValidationError(
                f"record {self.record_id!r}: span set may not be empty"
            )

    def __len__(self) -> int:
        return len(self.spans)

    def surfaces(self) -> list[str]:
        return [span.surface for span in self.spans]


def map_words_to_subtokens(record: SentenceRecord, word_indices) -> tuple[int, ...]:
    """Union of the per-word subtoken ranges for the given word indices."""
    out: list[int] = []
    for w in sorted(set(word_indices)):
        if not 0 <= w < len(record.words):
            raise InputValidationError(
                f"record {record.id!r}: word index {w} outside "
                f"[0, {len(record.words)})"
            )
        start, end = record.word_to_subtokens[w]
        out.extend(range(start, end))
    if not out:
        raise InputValidationError(f"record {record.id!r}: empty word index set")
    return tuple(out)


def _make_span(record: SentenceRecord, word_indices, kind: str) -> PASpan:
    indices = tuple(sorted(set(word_indices)))
    return PASpan(
        word_indices=indices,
        subtoken_indices=map_words_to_subtokens(record, indices),
        surface=" ".join(record.words[i] for i in indices),
        kind=kind,
    )


def whole_sentence_span(record: SentenceRecord) -> PASpan:
    return _make_span(record, range(len(record.words)), KIND_WHOLE_SENTENCE)


def build_pas_spans(record: SentenceRecord) -> SpanSet:
    """Group each predicate with each of its arguments into one span.

    Spans are emitted in frame order, then argument order within the
    frame.  Modifier roles (ARGM-*) count like any other argument.  A
    record whose frames yield no span at all gets the whole sentence as
    a single long span.
    """
    spans = []
    for frame in record.srl_frames:
        for arg in frame.arguments:
            indices = {frame.predicate_word}
            indices.update(range(arg.start_word, arg.end_word))
            spans.append(_make_span(record, indices, STRATEGY_PAS))
    if not spans:
        spans.append(whole_sentence_span(record))
    return SpanSet(record_id=record.id, spans=tuple(spans), strategy=STRATEGY_PAS)


def build_token_spans(record: SentenceRecord) -> SpanSet:
    """One singleton span per word, in sentence order."""
    spans = tuple(
        _make_span(record, (i,), STRATEGY_TOKEN) for i in range(len(record.words))
    )
    return SpanSet(record_id=record.id, spans=spans, strategy=STRATEGY_TOKEN)


def _check_span_count(span_count: int):
    if span_count < 1:
        raise InputValidationError(f"span_count must be >= 1, got {span_count}")


def build_random_spans(record: SentenceRecord, span_count: int, seed: int) -> SpanSet:
    """Sample ``span_count`` spans of arbitrary, not necessarily
    contiguous words.

    Span length is drawn uniformly from [1, word count], then that many
    distinct words are sampled uniformly.  Deterministic for a fixed
    seed.
    """
    _check_span_count(span_count)
    rng = np.random.default_rng(seed)
    n = len(record.words)
    spans = []
    for _ in range(span_count):
        length = int(rng.integers(1, n + 1))
        indices = rng.choice(n, size=length, replace=False)
        spans.append(_make_span(record, indices.tolist(), STRATEGY_RANDOM))
    return SpanSet(record_id=record.id, spans=tuple(spans), strategy=STRATEGY_RANDOM)


def build_continuous_random_spans(
    record: SentenceRecord, span_count: int, seed: int
) -> SpanSet:
    """Sample ``span_count`` contiguous word ranges of arbitrary length."""
    _check_span_count(span_count)
    rng = np.random.default_rng(seed)
    n = len(record.words)
    spans = []
    for _ in range(span_count):
        length = int(rng.integers(1, n + 1))
        start = int(rng.integers(0, n - length + 1))
        spans.append(
            _make_span(record, range(start, start + length), STRATEGY_CONTINUOUS_RANDOM)
        )
    return SpanSet(
        record_id=record.id, spans=tuple(spans), strategy=STRATEGY_CONTINUOUS_RANDOM
    )


def build_spans(
    record: SentenceRecord,
    strategy: str,
    seed: int | None = None,
    span_count: int | None = None,
) -> SpanSet:
    """Dispatch to the builder for ``strategy``.

    For the random strategies the span count defaults to the record's
    predicate-argument span count, which keeps the ablation comparison
    fair, and a seed is required.
    """
    if strategy == STRATEGY_PAS:
        return build_pas_spans(record)
    if strategy == STRATEGY_TOKEN:
        return build_token_spans(record)
    if strategy in (STRATEGY_RANDOM, STRATEGY_CONTINUOUS_RANDOM):
        if seed is None:
            raise InputValidationError(f"strategy {strategy!r} requires a seed")
        if span_count is None:
            span_count = len(build_pas_spans(record))
        if strategy == STRATEGY_RANDOM:
            return build_random_spans(record, span_count, seed)
        return build_continuous_random_spans(record, span_count, seed)
    raise InputValidationError(
        f"unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}"
    )
