"""
Grouping a sentence into predicate-argument spans
=================================================

A semantic role tagger marks predicates and their arguments as word
ranges.  This demo builds one annotated sentence by hand and shows how
each (predicate, argument) pair becomes a span, plus the ablation
strategies used as baselines.
"""

from spanalign import (
    SentenceRecord,
    SRLArgument,
    SRLFrame,
    build_spans,
)

# The sentence from the walkthrough.  Every word maps to one subtoken
# here except "cheese", "whilst" and "thinking", which get two, the way
# a real wordpiece tokenizer splits rarer words.
words = ("James", "ate", "some", "cheese", "whilst", "thinking",
         "about", "the", "play", ".")
ranges = ((0, 1), (1, 2), (2, 3), (3, 5), (5, 7), (7, 9), (9, 10),
          (10, 11), (11, 12), (12, 13))

record = SentenceRecord(
    id="demo",
    text=" ".join(words),
    words=words,
    word_to_subtokens=ranges,
    embedding_dim=8,
    token_count=13,
    srl_frames=(
        SRLFrame(predicate_word=1, arguments=(
            SRLArgument(role="ARG0", start_word=0, end_word=1),
            SRLArgument(role="ARG1", start_word=2, end_word=4),
            SRLArgument(role="ARGM-TMP", start_word=4, end_word=9),
        )),
        SRLFrame(predicate_word=5, arguments=(
            SRLArgument(role="ARG0", start_word=0, end_word=1),
            SRLArgument(role="ARG1", start_word=6, end_word=9),
        )),
    ),
    has_sentence_embedding=False,
)

# One span per (predicate, argument) pair: the predicate word joined
# with the argument's word range, kept in sentence order.  Three spans
# come from "ate" and two from "thinking".
span_set = build_spans(record, "pas")
print("predicate-argument spans:")
for span in span_set.spans:
    print(f"  words {span.word_indices} -> {span.surface!r}")

# Each span also carries the subtoken rows to pool later.
print("\nsubtoken indices per span:")
for span in span_set.spans:
    print(f"  {span.surface!r}: {span.subtoken_indices}")

# Ablation 1: every word is its own span.
tokens = build_spans(record, "token")
print(f"\ntoken strategy: {len(tokens.spans)} single-word spans")

# Ablation 2: random subsets of words, and random contiguous chunks.
# Both need a seed and default to the same number of spans as above.
random_set = build_spans(record, "random", seed=7)
contiguous = build_spans(record, "continuous-random", seed=7)
print("\nrandom spans:")
for span in random_set.spans:
    print(f"  {span.surface!r}")
print("\ncontinuous random spans:")
for span in contiguous.spans:
    print(f"  {span.surface!r}")

# A sentence with no tagged frames falls back to one whole-sentence span.
bare = SentenceRecord(
    id="bare",
    text="nothing tagged here",
    words=("nothing", "tagged", "here"),
    word_to_subtokens=((0, 1), (1, 2), (2, 3)),
    embedding_dim=8,
    token_count=3,
    srl_frames=(),
    has_sentence_embedding=False,
)
fallback = build_spans(bare, "pas")
print(f"\nno frames: {[s.surface for s in fallback.spans]}")
print(f"span kind: {fallback.spans[0].kind}")
