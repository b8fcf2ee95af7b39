"""
Aligning spans and scoring a sentence pair
==========================================

Spans from two sentences are pooled into vectors, compared with cosine
similarity, and matched one-to-one so that the total similarity is as
large as possible.  The sentence-level score is the mean cosine over
the matched pairs.
"""

import numpy as np

from spanalign import (
    SentenceRecord,
    TokenEmbeddings,
    align_spans,
    build_spans,
    represent_spans,
)


def bare_record(rec_id, words, dim):
    n = len(words)
    return SentenceRecord(
        id=rec_id,
        text=" ".join(words),
        words=tuple(words),
        word_to_subtokens=tuple((i, i + 1) for i in range(n)),
        embedding_dim=dim,
        token_count=n,
        srl_frames=(),
        has_sentence_embedding=False,
    )


rng = np.random.default_rng(0)
dim = 8

left = bare_record("left", ["the", "cat", "sat", "on", "the", "mat"], dim)
right = bare_record("right", ["a", "cat", "rested", "on", "a", "rug"], dim)

tokens_left = TokenEmbeddings(rng.normal(size=(6, dim)))
tokens_right = TokenEmbeddings(rng.normal(size=(6, dim)))

# With no frames both sentences fall back to token spans here, which
# keeps the demo small; real corpora carry tagged frames instead.
spans_left = build_spans(left, "token")
spans_right = build_spans(right, "token")

reps_left = represent_spans(spans_left, tokens_left)
reps_right = represent_spans(spans_right, tokens_right)

result = align_spans(reps_left, reps_right)

print("cosine matrix (rows = left spans, columns = right spans):")
with np.printoptions(precision=3, suppress=True):
    print(result.matrix.entries)

print("\nchosen alignment:")
for m, n, value in result.aligned:
    print(f"  {spans_left.spans[m].surface!r} <-> "
          f"{spans_right.spans[n].surface!r}  cos={value:+.3f}")

print(f"\npair score (mean over aligned cosines): {result.score:.6f}")

# Two invariants worth seeing once.  A sentence aligned with itself
# scores exactly 1, and swapping the sides changes nothing.
self_result = align_spans(reps_left, reps_left)
print(f"self score: {self_result.score:.6f}")

swapped = align_spans(reps_right, reps_left)
print(f"swap difference: {abs(result.score - swapped.score):.2e}")

# When the sides have different span counts, every span of the smaller
# side is matched and the leftovers are ignored.
short = represent_spans(
    build_spans(bare_record("short", ["one", "two"], dim), "token"),
    TokenEmbeddings(rng.normal(size=(2, dim))),
)
uneven = align_spans(short, reps_right)
print(f"\n2x6 alignment keeps {len(uneven.aligned)} pairs")
