"""Sentence encoder backends.

An encoder maps a word sequence to subtoken ranges, one contextual
vector per subtoken, and a whole-sentence vector, and can also encode a
phrase standalone.  Token vectors always come from the last hidden
layer; the sentence vector follows each encoder's default strategy
(mean pooling for bert-base and sbert, the trained pooler for simcse).

The stub encoder derives vectors from content hashes with a sentence
context term mixed in, so exports are fully deterministic, need no
model artifacts, and still show a contextual/standalone gap.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class WordEncoding:
    """Encoder output for one sentence, special tokens already dropped."""

    ranges: tuple          # per word, (start, end) into token_vectors
    token_vectors: np.ndarray
    sentence_vector: np.ndarray
    truncated: bool = False


def _unit(vector: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vector))
    return vector / norm if norm else vector


def _hash_vector(key: str, dim: int) -> np.ndarray:
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    seed = int.from_bytes(digest[:8], "big")
    return np.random.default_rng(seed).normal(size=dim)


class StubEncoder:
    """Deterministic hash-based encoder for artifact-free exports.

    Words split into 4-character pieces (a stand-in for wordpiece), each
    piece gets a hash-seeded base vector, and every token vector is the
    unit sum of its base and 0.3 times the sentence-wide mean of bases.
    The context term makes pooled in-context phrases differ from the
    same phrase encoded standalone.
    """

    name = "stub"
    version = "1"
    dim = 16
    context_weight = 0.3

    def __init__(self, max_words: int | None = None):
        self.max_words = max_words

    def _pieces(self, word: str):
        return [word[i:i + 4] for i in range(0, len(word), 4)]

    def _encode(self, words) -> WordEncoding:
        truncated = False
        words = list(words)
        if self.max_words is not None and len(words) > self.max_words:
            words = words[: self.max_words]
            truncated = True
        ranges = []
        bases = []
        cursor = 0
        for word in words:
            pieces = self._pieces(word)
            ranges.append((cursor, cursor + len(pieces)))
            cursor += len(pieces)
            bases.extend(_hash_vector(f"tok:{piece}", self.dim) for piece in pieces)
        base = np.asarray(bases)
        context = base.mean(axis=0)
        tokens = np.stack([_unit(row + self.context_weight * context) for row in base])
        return WordEncoding(
            ranges=tuple(ranges),
            token_vectors=tokens,
            sentence_vector=_unit(tokens.mean(axis=0)),
            truncated=truncated,
        )

    def encode_words(self, words) -> WordEncoding:
        if not words:
            raise ValueError("cannot encode an empty word sequence")
        return self._encode(words)

    def encode_phrase(self, phrase: str) -> np.ndarray:
        pieces = phrase.split()
        if not pieces:
            raise ValueError("cannot encode an empty phrase")
        return self._encode(pieces).sentence_vector


class HFEncoder:
    """Transformers backend; token states from the last hidden layer."""

    def __init__(self, name, checkpoint, pooling="mean", device="cpu",
                 batch_size=32):
        try:
            import torch
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:
            raise RuntimeError(
                f"the {name} backend needs torch and transformers "
                "(pip install 'spanexport[real]')"
            ) from exc
        self.name = name
        self.version = checkpoint
        self.pooling = pooling
        self.batch_size = batch_size
        self._torch = torch
        self._tokenizer = AutoTokenizer.from_pretrained(checkpoint)
        self._model = AutoModel.from_pretrained(checkpoint).to(device).eval()
        self._device = device
        self.dim = self._model.config.hidden_size
        self.max_words = None  # length limit applies at subtoken level

    def encode_words(self, words) -> WordEncoding:
        torch = self._torch
        encoded = self._tokenizer(
            list(words),
            is_split_into_words=True,
            truncation=True,
            return_tensors="pt",
        ).to(self._device)
        with torch.no_grad():
            output = self._model(**encoded)
        hidden = output.last_hidden_state[0].cpu().numpy()

        word_ids = encoded.word_ids(0)
        keep = [i for i, w in enumerate(word_ids) if w is not None]
        covered = sorted({word_ids[i] for i in keep})
        truncated = covered != list(range(len(words)))
        ranges = []
        cursor = 0
        for w in covered:
            count = sum(1 for i in keep if word_ids[i] == w)
            ranges.append((cursor, cursor + count))
            cursor += count
        tokens = hidden[keep]

        if self.pooling == "pooler":
            sentence = output.pooler_output[0].cpu().numpy()
        else:
            sentence = tokens.mean(axis=0)
        return WordEncoding(
            ranges=tuple(ranges),
            token_vectors=tokens,
            sentence_vector=sentence,
            truncated=truncated,
        )

    def encode_phrase(self, phrase: str) -> np.ndarray:
        return self.encode_words(phrase.split()).sentence_vector


def _bert_base(device="cpu", batch_size=32):
    return HFEncoder("bert-base", "bert-base-uncased",
                     pooling="mean", device=device, batch_size=batch_size)


def _sbert(device="cpu", batch_size=32):
    return HFEncoder("sbert", "sentence-transformers/bert-base-nli-mean-tokens",
                     pooling="mean", device=device, batch_size=batch_size)


def _simcse(device="cpu", batch_size=32):
    return HFEncoder("simcse", "princeton-nlp/sup-simcse-bert-base-uncased",
                     pooling="pooler", device=device, batch_size=batch_size)


ENCODERS = {
    "bert-base": _bert_base,
    "sbert": _sbert,
    "simcse": _simcse,
    "stub": lambda device="cpu", batch_size=32: StubEncoder(),
}


def make_encoder(name: str, device="cpu", batch_size=32):
    if name not in ENCODERS:
        raise ValueError(
            f"unknown encoder {name!r}; expected one of {', '.join(sorted(ENCODERS))}"
        )
    return ENCODERS[name](device=device, batch_size=batch_size)
