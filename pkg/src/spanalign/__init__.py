"""Paraphrase identification by optimal alignment of predicate-argument spans.

Sentences are represented as span collections (predicate-argument spans
by default), span vectors are pooled from contextual token embeddings,
spans of a pair are matched by a maximum-weight assignment over their
cosine matrix, and the mean cosine of the aligned pairs is the sentence
similarity.  Thresholding that similarity yields the paraphrase
decision; the alignment matrix explains it.
"""

from .assignment import (
    Assignment,
    CostMatrix,
    brute_force_assignment,
    solve_max_assignment,
)
from .errors import InputValidationError, MissingPhrasesError
from .io import (
    DatasetPair,
    EncodedCorpus,
    PhraseStore,
    load_encoded_corpus,
    load_pairs,
    load_phrase_store,
    load_scores,
    merge_corpora,
    sentence_id,
    unique_sentences,
    write_encoded_corpus,
    write_phrase_store,
    write_scores,
)
from .metrics import (
    DEFAULT_SPLIT_SEED,
    LabeledScore,
    MetricReport,
    OverlapReport,
    Threshold,
    evaluate,
    find_optimal_threshold,
    jaccard_unigram,
    overlap_report,
    stratified_dev_split,
)
from .pipeline import explain_table, score_dataset
from .similarity import (
    AlignmentResult,
    EncodedSentence,
    PairScore,
    SpanRepresentation,
    TokenEmbeddings,
    align_and_score,
    align_spans,
    build_similarity_matrix,
    cosine,
    pool_span,
    represent_spans,
    rescore_decontextualized,
    vanilla_score,
)
from .spans import (
    PASpan,
    SentenceRecord,
    SpanSet,
    SRLArgument,
    SRLFrame,
    build_continuous_random_spans,
    build_pas_spans,
    build_random_spans,
    build_spans,
    build_token_spans,
    map_words_to_subtokens,
)

__version__ = "0.1.0"
