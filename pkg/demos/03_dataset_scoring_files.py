"""
Scoring a dataset through the file formats
==========================================

The library talks to encoder pipelines through files: an encoded
corpus (line-oriented JSON), a tab-separated pair file, and a score
file.  This demo writes a tiny corpus, scores a pair file against it,
and prints every artifact so the formats are visible end to end.
"""

import pathlib
import tempfile

import numpy as np

from spanalign import (
    EncodedCorpus,
    EncodedSentence,
    SentenceRecord,
    SRLArgument,
    SRLFrame,
    TokenEmbeddings,
    load_encoded_corpus,
    load_pairs,
    score_dataset,
    sentence_id,
    write_encoded_corpus,
    write_scores,
)

rng = np.random.default_rng(1)
dim = 6


def encode(text, frames):
    words = tuple(text.split())
    n = len(words)
    record = SentenceRecord(
        id=sentence_id(text),
        text=text,
        words=words,
        word_to_subtokens=tuple((i, i + 1) for i in range(n)),
        embedding_dim=dim,
        token_count=n,
        srl_frames=frames,
        has_sentence_embedding=True,
    )
    return EncodedSentence(
        record=record,
        tokens=TokenEmbeddings(rng.normal(size=(n, dim))),
        sentence_embedding=rng.normal(size=dim),
    )


frame = lambda pred, *args: SRLFrame(
    predicate_word=pred,
    arguments=tuple(SRLArgument(role=r, start_word=a, end_word=b) for r, a, b in args),
)

texts = [
    ("she wrote the report quickly", (frame(1, ("ARG0", 0, 1), ("ARG1", 2, 4)),)),
    ("she drafted the report fast", (frame(1, ("ARG0", 0, 1), ("ARG1", 2, 4)),)),
    ("he read a book slowly", (frame(1, ("ARG0", 0, 1), ("ARG1", 2, 4)),)),
]
encoded = [encode(text, frames) for text, frames in texts]
corpus = EncodedCorpus(
    sentences={e.record.id: e for e in encoded}, dim=dim
)

workdir = pathlib.Path(tempfile.mkdtemp(prefix="spanalign-demo-"))

# Sentences are addressed by a hash of their text, so the pair file can
# carry raw sentences and still resolve against the corpus.
corpus_path = workdir / "corpus.jsonl"
write_encoded_corpus(corpus_path, corpus, header="demo corpus")
print(f"corpus at {corpus_path}, first 120 chars of line 2:")
print(corpus_path.read_text().splitlines()[1][:120])

pairs_path = workdir / "pairs.tsv"
pairs_path.write_text(
    "id\tsentence1\tsentence2\tlabel\n"
    f"1\t{texts[0][0]}\t{texts[1][0]}\t1\n"
    f"2\t{texts[0][0]}\t{texts[2][0]}\t0\n",
    encoding="utf-8",
)
print("\npair file:")
print(pairs_path.read_text(), end="")

loaded_corpus = load_encoded_corpus(corpus_path)
loaded_pairs = load_pairs(pairs_path, "paws")

scores = score_dataset(loaded_corpus, loaded_pairs, strategy="pas", mode="aligned")
scores_path = workdir / "scores.tsv"
write_scores(scores_path, scores)
print("\nscore file (pair id, score, mode):")
print(scores_path.read_text(), end="")

# The same call with mode="vanilla" compares whole-sentence embeddings
# instead; both land in the same three-column format.
vanilla = score_dataset(loaded_corpus, loaded_pairs, mode="vanilla")
for item in vanilla:
    print(f"vanilla {item.pair_id}: {item.score:+.4f}")
