"""
Why context can mislead, and rescoring without it
=================================================

Contextual encoders give nearly identical vectors to "Harris announced"
and "James announced" when the surrounding words match, so an aligned
pair of different people still scores high.  Rescoring the same
alignment with context-free phrase vectors keeps the pairing but lets
the mismatched names count against the score.
"""

import numpy as np

from spanalign import (
    PhraseStore,
    SentenceRecord,
    SRLArgument,
    SRLFrame,
    TokenEmbeddings,
    align_spans,
    build_spans,
    represent_spans,
    rescore_decontextualized,
)

dim = 8
rng = np.random.default_rng(3)


def record(rec_id, text):
    words = tuple(text.split())
    return SentenceRecord(
        id=rec_id,
        text=text,
        words=words,
        word_to_subtokens=tuple((i, i + 1) for i in range(len(words))),
        embedding_dim=dim,
        token_count=len(words),
        srl_frames=(
            SRLFrame(predicate_word=1, arguments=(
                SRLArgument(role="ARG0", start_word=0, end_word=1),
                SRLArgument(role="ARG1", start_word=2, end_word=6),
            )),
        ),
        has_sentence_embedding=False,
    )


rec_a = record("a", "Harris announced that he will quit")
rec_b = record("b", "James announced that he will quit")

# Simulate context dominance: both sentences get the same token
# vectors, plus a sliver of per-sentence noise on the name position.
shared = rng.normal(size=(6, dim))
tokens_a = shared.copy()
tokens_b = shared.copy()
tokens_a[0] += 0.05 * rng.normal(size=dim)
tokens_b[0] += 0.05 * rng.normal(size=dim)

spans_a = build_spans(rec_a, "pas")
spans_b = build_spans(rec_b, "pas")
result = align_spans(
    represent_spans(spans_a, TokenEmbeddings(tokens_a)),
    represent_spans(spans_b, TokenEmbeddings(tokens_b)),
)

print("contextual alignment:")
for m, n, value in result.aligned:
    print(f"  {spans_a.spans[m].surface!r} <-> "
          f"{spans_b.spans[n].surface!r}  cos={value:+.4f}")
print(f"contextual score: {result.score:.4f}")

# Context-free phrase vectors: the shared argument phrase keeps one
# vector, the two name phrases get unrelated ones.
phrase_argument = rng.normal(size=dim)
store = PhraseStore(
    vectors={
        "Harris announced": rng.normal(size=dim),
        "James announced": rng.normal(size=dim),
        "announced that he will quit": phrase_argument,
    },
    dim=dim,
)

rescored = rescore_decontextualized(result, spans_a, spans_b, store, pair_id="demo")
print("\nde-contextualized rescoring (same pairing, new cosines):")
for m, n, value in rescored.alignment.aligned:
    print(f"  {spans_a.spans[m].surface!r} <-> "
          f"{spans_b.spans[n].surface!r}  cos={value:+.4f}")
print(f"de-contextualized score: {rescored.score:.4f}")

# A missing phrase is a hard error that lists every absent surface, so
# a phrase export can be completed in one pass.
partial = PhraseStore(vectors={"James announced": rng.normal(size=dim)}, dim=dim)
try:
    rescore_decontextualized(result, spans_a, spans_b, partial)
except LookupError as exc:
    print(f"\nmissing phrases: {exc.surfaces}")
