"""Dataset-level scoring: span preparation, worker fan-out, explanations.

All per-pair work is pure, so scoring fans out over a thread pool and
gathers results in input order; the output is byte-identical no matter
how many workers run.  Span sets and pooled span vectors are prepared
once per distinct sentence before the pool starts.  For the random span
strategies each sentence gets its own sub-seed derived from the run
seed and the sentence id, keeping spans stable across pair order,
worker count, and dataset composition.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import InputValidationError, MissingPhrasesError
from .similarity import (
    MODE_ALIGNED,
    MODE_ALIGNED_DECONTEXT,
    MODE_VANILLA,
    MODES,
    AlignmentResult,
    EncodedSentence,
    PairScore,
    align_spans,
    represent_spans,
    rescore_decontextualized,
    vanilla_score,
)
from .spans import (
    STRATEGIES,
    STRATEGY_CONTINUOUS_RANDOM,
    STRATEGY_RANDOM,
    SpanSet,
    build_spans,
)


def record_seed(seed: int, record_id: str) -> int:
    """Stable 63-bit sub-seed for one sentence under one run seed."""
    digest = hashlib.sha1(f"{seed}:{record_id}".encode("utf-8")).hexdigest()
    return int(digest[:16], 16) >> 1


@dataclass(frozen=True, eq=False)
class PreparedSentence:
    """A sentence with its span set and pooled span vectors."""

    encoded: EncodedSentence
    span_set: SpanSet
    representations: list


def prepare_sentence(encoded, strategy: str, seed: int | None) -> PreparedSentence:
    sub_seed = None
    if strategy in (STRATEGY_RANDOM, STRATEGY_CONTINUOUS_RANDOM):
        if seed is None:
            raise InputValidationError(f"strategy {strategy!r} requires a seed")
        sub_seed = record_seed(seed, encoded.record.id)
    span_set = build_spans(encoded.record, strategy, seed=sub_seed)
    return PreparedSentence(
        encoded=encoded,
        span_set=span_set,
        representations=represent_spans(span_set, encoded.tokens),
    )


def _resolve(corpus, pair):
    for sentence_key in (pair.id_a, pair.id_b):
        if sentence_key not in corpus:
            raise InputValidationError(
                f"pair {pair.pair_id!r}: sentence id {sentence_key!r} "
                "not found in corpus"
            )
    return corpus[pair.id_a], corpus[pair.id_b]


def prepare_corpus(corpus, pairs, strategy: str, seed: int | None) -> dict:
    """Span sets and representations for every sentence the pairs touch."""
    if strategy not in STRATEGIES:
        raise InputValidationError(f"unknown strategy {strategy!r}")
    prepared: dict[str, PreparedSentence] = {}
    for pair in pairs:
        enc_a, enc_b = _resolve(corpus, pair)
        for enc in (enc_a, enc_b):
            if enc.id not in prepared:
                prepared[enc.id] = prepare_sentence(enc, strategy, seed)
    return prepared


def pair_alignment(prepared: dict, pair) -> AlignmentResult:
    a = prepared[pair.id_a]
    b = prepared[pair.id_b]
    return align_spans(a.representations, b.representations)


def score_dataset(
    corpus,
    pairs,
    strategy: str = "pas",
    mode: str = MODE_ALIGNED,
    seed: int | None = None,
    store=None,
    workers: int = 1,
) -> list[PairScore]:
    """Score every pair under one strategy and mode, in input order.

    In de-contextualized mode, phrases missing from the store are
    collected over the whole dataset and raised as a single
    :class:`MissingPhrasesError`, so one re-export can fill every gap.
    """
    if mode not in MODES:
        raise InputValidationError(f"unknown mode {mode!r}")
    if workers < 1:
        raise InputValidationError(f"workers must be >= 1, got {workers}")
    pairs = list(pairs)

    if mode == MODE_VANILLA:
        resolved = [_resolve(corpus, pair) for pair in pairs]

        def run_vanilla(job):
            pair, (enc_a, enc_b) = job
            return vanilla_score(enc_a, enc_b, pair_id=pair.pair_id)

        return _fan_out(run_vanilla, list(zip(pairs, resolved)), workers)

    prepared = prepare_corpus(corpus, pairs, strategy, seed)

    def run_aligned(pair):
        return pair_alignment(prepared, pair)

    alignments = _fan_out(run_aligned, pairs, workers)

    if mode == MODE_ALIGNED:
        return [
            PairScore(
                pair_id=pair.pair_id,
                score=result.score,
                mode=MODE_ALIGNED,
                alignment=result,
            )
            for pair, result in zip(pairs, alignments)
        ]

    if store is None:
        raise InputValidationError("aligned-decontext mode requires a phrase store")
    scores: list[PairScore] = []
    missing: set[str] = set()
    for pair, result in zip(pairs, alignments):
        try:
            scores.append(
                rescore_decontextualized(
                    result,
                    prepared[pair.id_a].span_set,
                    prepared[pair.id_b].span_set,
                    store,
                    pair_id=pair.pair_id,
                )
            )
        except MissingPhrasesError as exc:
            missing.update(exc.surfaces)
    if missing:
        raise MissingPhrasesError(missing)
    return scores


def _fan_out(fn, jobs, workers: int) -> list:
    if workers == 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


# ---------------------------------------------------------------------------
# Explanation tables


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def explain_table(
    corpus,
    pair,
    strategy: str = "pas",
    seed: int | None = None,
    mode: str = MODE_ALIGNED,
    store=None,
) -> str:
    """Render one pair's alignment as a tab-separated table.

    The first block is the full cosine matrix with span surfaces as row
    and column headers ((M+1) x (N+1) cells); selected cells carry a
    trailing ``*``.  After a blank line, one ``pair`` line per aligned
    span pair gives its cosine, and the final ``score`` line repeats
    the aggregated mean.
    """
    if mode not in (MODE_ALIGNED, MODE_ALIGNED_DECONTEXT):
        raise InputValidationError("explanations need an alignment-based mode")
    prepared = prepare_corpus(corpus, [pair], strategy, seed)
    result = pair_alignment(prepared, pair)
    spans_a = prepared[pair.id_a].span_set
    spans_b = prepared[pair.id_b].span_set
    if mode == MODE_ALIGNED_DECONTEXT:
        if store is None:
            raise InputValidationError("aligned-decontext mode requires a phrase store")
        result = rescore_decontextualized(
            result, spans_a, spans_b, store, pair_id=pair.pair_id
        ).alignment

    selected = {(m, n) for m, n, _ in result.aligned}
    lines = ["\t".join([""] + spans_b.surfaces())]
    for m, surface in enumerate(spans_a.surfaces()):
        cells = [surface]
        for n in range(len(spans_b)):
            cell = _fmt(result.matrix.entries[m, n])
            if (m, n) in selected:
                cell += "*"
            cells.append(cell)
        lines.append("\t".join(cells))
    lines.append("")
    for m, n, value in result.aligned:
        lines.append(
            "\t".join(
                ["pair", spans_a.spans[m].surface, spans_b.spans[n].surface, _fmt(value)]
            )
        )
    lines.append(f"score\t{_fmt(result.score)}")
    return "\n".join(lines) + "\n"
