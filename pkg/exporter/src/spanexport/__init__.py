"""Export pipeline: raw sentences to encoded corpora and phrase stores."""

from .encoding import ENCODERS, HFEncoder, StubEncoder, WordEncoding, make_encoder
from .export import (
    ExportJob,
    ExportReport,
    collect_missing_phrases,
    export_corpus,
    export_phrases,
    read_sentences,
    sentence_key,
)
from .tagging import AllenNLPTagger, StubTagger, TaggedSentence, tokenize

__version__ = "0.1.0"
