"""Span pooling, cosine similarity, alignment and score aggregation.

Span vectors are the flat mean over all subtoken embeddings in the span.
A pair of sentences is compared by building the full cosine matrix
between their span vectors, solving the maximum-weight assignment over
it, and averaging the cosines of the chosen pairs into one sentence
similarity.  The matrix plus the chosen cells double as the explanation
of the final score.

Two other scoring modes share the same types: the vanilla baseline
(cosine of the two whole-sentence embeddings) and de-contextualized
rescoring, which keeps the alignment but replaces each aligned pair's
cosine with the similarity of context-free phrase vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assignment import CostMatrix, solve_max_assignment
from .errors import InputValidationError, MissingPhrasesError
from .spans import PASpan, SentenceRecord, SpanSet

MODE_VANILLA = "vanilla"
MODE_ALIGNED = "aligned"
MODE_ALIGNED_DECONTEXT = "aligned-decontext"
MODES = (MODE_VANILLA, MODE_ALIGNED, MODE_ALIGNED_DECONTEXT)


@dataclass(frozen=True, eq=False)
class TokenEmbeddings:
    """Per-subtoken embedding matrix of one sentence, shape (tokens, dim)."""

    vectors: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.vectors, dtype=np.float64)
        if arr.ndim != 2:
            raise InputValidationError(
                f"token embeddings must be 2-dimensional, got shape {arr.shape}"
            )
        if not np.isfinite(arr).all():
            raise InputValidationError("token embeddings contain non-finite values")
        object.__setattr__(self, "vectors", arr)

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True, eq=False)
class SpanRepresentation:
    """A pooled span vector together with the span it came from."""

    vector: np.ndarray
    span: PASpan


@dataclass(frozen=True, eq=False)
class EncodedSentence:
    """A sentence record bundled with its embeddings."""

    record: SentenceRecord
    tokens: TokenEmbeddings
    sentence_embedding: np.ndarray | None = None

    def __post_init__(self):
        if self.tokens.count != self.record.token_count:
            raise InputValidationError(
                f"record {self.record.id!r}: {self.tokens.count} token vectors "
                f"but token_count is {self.record.token_count}"
            )
        if self.tokens.dim != self.record.embedding_dim:
            raise InputValidationError(
                f"record {self.record.id!r}: token vectors have dim "
                f"{self.tokens.dim}, expected {self.record.embedding_dim}"
            )
        if self.sentence_embedding is not None:
            emb = np.asarray(self.sentence_embedding, dtype=np.float64)
            if emb.shape != (self.record.embedding_dim,):
                raise InputValidationError(
                    f"record {self.record.id!r}: sentence embedding has shape "
                    f"{emb.shape}, expected ({self.record.embedding_dim},)"
                )
            if not np.isfinite(emb).all():
                raise InputValidationError(
                    f"record {self.record.id!r}: sentence embedding is non-finite"
                )
            object.__setattr__(self, "sentence_embedding", emb)

    @property
    def id(self) -> str:
        return self.record.id


@dataclass(frozen=True)
class AlignmentResult:
    """The chosen span alignment of a sentence pair.

    ``aligned`` holds (row span index, column span index, cosine) for
    each of the min(M, N) selected cells, ``matrix`` the full cosine
    matrix for explanation, and ``score`` the arithmetic mean of the
    aligned cosines.
    """

    matrix: CostMatrix
    aligned: tuple[tuple[int, int, float], ...]
    score: float


@dataclass(frozen=True)
class PairScore:
    """A sentence-pair similarity under one scoring mode."""

    pair_id: str
    score: float
    mode: str
    alignment: AlignmentResult | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputValidationError(f"unknown mode {self.mode!r}")
        if self.mode == MODE_VANILLA and self.alignment is not None:
            raise InputValidationError("vanilla scores carry no alignment")
        if self.mode != MODE_VANILLA and self.alignment is None:
            raise InputValidationError(f"mode {self.mode!r} requires an alignment")


def pool_span(embeddings: TokenEmbeddings, subtoken_indices) -> np.ndarray:
    """Flat mean over the selected subtoken vectors."""
    indices = list(subtoken_indices)
    if not indices:
        raise InputValidationError("cannot pool an empty subtoken set")
    for i in indices:
        if not 0 <= i < embeddings.count:
            raise InputValidationError(
                f"subtoken index {i} outside [0, {embeddings.count})"
            )
    return embeddings.vectors[indices].mean(axis=0)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity clamped to [-1, 1]; zero if either norm is zero.

    The zero-norm convention avoids NaN propagation on degenerate
    exports.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise InputValidationError(
            f"dimension mismatch: {u.shape} vs {v.shape}"
        )
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    value = float(np.dot(u, v)) / (nu * nv)
    return max(-1.0, min(1.0, value))


def represent_spans(span_set: SpanSet, embeddings: TokenEmbeddings) -> list[SpanRepresentation]:
    return [
        SpanRepresentation(vector=pool_span(embeddings, span.subtoken_indices), span=span)
        for span in span_set.spans
    ]


def build_similarity_matrix(reps_a, reps_b) -> CostMatrix:
    """Entry (m, n) is the cosine between span m of A and span n of B."""
    if not reps_a or not reps_b:
        raise InputValidationError("both span representation lists must be non-empty")
    entries = np.empty((len(reps_a), len(reps_b)), dtype=np.float64)
    for m, ra in enumerate(reps_a):
        for n, rb in enumerate(reps_b):
            entries[m, n] = cosine(ra.vector, rb.vector)
    return CostMatrix(entries)


def _mean(values) -> float:
    values = list(values)
    return float(sum(values) / len(values))


def align_spans(reps_a, reps_b) -> AlignmentResult:
    """Build the cosine matrix, solve the assignment, average the cosines."""
    matrix = build_similarity_matrix(reps_a, reps_b)
    solution = solve_max_assignment(matrix)
    aligned = tuple(
        (m, n, float(matrix.entries[m, n])) for m, n in solution.pairs
    )
    return AlignmentResult(
        matrix=matrix,
        aligned=aligned,
        score=_mean(s for _, _, s in aligned),
    )


def align_and_score(
    spans_a: SpanSet,
    embeddings_a: TokenEmbeddings,
    spans_b: SpanSet,
    embeddings_b: TokenEmbeddings,
) -> AlignmentResult:
    """Full span-level comparison of two encoded sentences."""
    return align_spans(
        represent_spans(spans_a, embeddings_a),
        represent_spans(spans_b, embeddings_b),
    )


def vanilla_score(a: EncodedSentence, b: EncodedSentence, pair_id: str = "") -> PairScore:
    """Baseline similarity: cosine of the two whole-sentence embeddings."""
    for enc in (a, b):
        if enc.sentence_embedding is None:
            raise InputValidationError(
                f"record {enc.id!r} has no sentence embedding; "
                "vanilla scoring needs one"
            )
    return PairScore(
        pair_id=pair_id,
        score=cosine(a.sentence_embedding, b.sentence_embedding),
        mode=MODE_VANILLA,
    )


def rescore_decontextualized(
    result: AlignmentResult,
    spans_a: SpanSet,
    spans_b: SpanSet,
    store,
    pair_id: str = "",
) -> PairScore:
    """Rescore an existing alignment with context-free phrase vectors.

    The aligned span pairs stay fixed; each pair's cosine is replaced by
    the cosine of the two phrase-store vectors looked up by exact
    surface string.  Raises :class:`MissingPhrasesError` listing every
    absent surface so the store can be completed in one pass.
    """
    missing = set()
    for m, n, _ in result.aligned:
        for surface in (spans_a.spans[m].surface, spans_b.spans[n].surface):
            if surface not in store:
                missing.add(surface)
    if missing:
        raise MissingPhrasesError(missing)

    rescored = tuple(
        (m, n, cosine(store[spans_a.spans[m].surface], store[spans_b.spans[n].surface]))
        for m, n, _ in result.aligned
    )
    replaced = AlignmentResult(
        matrix=result.matrix,
        aligned=rescored,
        score=_mean(s for _, _, s in rescored),
    )
    return PairScore(
        pair_id=pair_id,
        score=replaced.score,
        mode=MODE_ALIGNED_DECONTEXT,
        alignment=replaced,
    )
