"""Semantic role tagging backends.

A tagger turns raw text into words plus frames, where each frame is a
predicate word index and a list of role-labeled word ranges.  The stub
tagger is a tiny deterministic heuristic so exports can be produced and
tested without model artifacts; the real backend wraps an AllenNLP SRL
predictor when its dependencies are installed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

WORD_RE = re.compile(r"\w+|[^\w\s]")


@dataclass(frozen=True)
class TaggedSentence:
    words: tuple
    # frames: ((predicate word index, ((role, start, end), ...)), ...)
    frames: tuple


def tokenize(text: str) -> tuple:
    return tuple(WORD_RE.findall(text))


class StubTagger:
    """Rule-based tagger: a small verb lexicon plus -ing/-ed suffixes.

    Each predicate gets ARG0 = the first sentence word (when the
    predicate is not itself first) and ARG1 = the words up to the next
    predicate, excluding a trailing punctuation token.  Good enough to
    exercise every span-grouping code path deterministically.
    """

    name = "stub-srl"
    version = "1"

    VERBS = frozenset(
        "ate eat eats think thinks thought look looks read reads wrote "
        "write writes quit sat sit sits know knows said say says see "
        "sees saw go goes went make makes made take takes took".split()
    )

    def _is_predicate(self, word: str) -> bool:
        lowered = word.lower()
        if lowered in self.VERBS:
            return True
        return len(lowered) > 4 and lowered.endswith(("ing", "ed"))

    def tag(self, text: str) -> TaggedSentence:
        words = tokenize(text)
        predicates = [i for i, w in enumerate(words) if self._is_predicate(w)]
        last = len(words)
        if words and not words[-1][0].isalnum():
            last -= 1  # drop a trailing punctuation token from arguments
        frames = []
        for k, pred in enumerate(predicates):
            arguments = []
            if pred > 0:
                arguments.append(("ARG0", 0, 1))
            stop = predicates[k + 1] if k + 1 < len(predicates) else last
            if stop > pred + 1:
                arguments.append(("ARG1", pred + 1, stop))
            frames.append((pred, tuple(arguments)))
        return TaggedSentence(words=words, frames=tuple(frames))


class AllenNLPTagger:
    """Wrapper around an AllenNLP BIO-tag SRL predictor."""

    name = "allennlp-srl-bert"

    def __init__(self, archive="structured-prediction-srl-bert", device=-1):
        try:
            from allennlp.predictors.predictor import Predictor
            import allennlp_models.structured_prediction  # noqa: F401
        except ImportError as exc:
            raise RuntimeError(
                "the allennlp SRL backend needs the allennlp and "
                "allennlp-models packages (pip install 'spanexport[srl]')"
            ) from exc
        self._predictor = Predictor.from_path(archive, cuda_device=device)
        self.version = archive

    def tag(self, text: str) -> TaggedSentence:
        try:
            output = self._predictor.predict(sentence=text)
        except Exception:
            # tagger failure contract: no frames, caller falls back
            return TaggedSentence(words=tokenize(text), frames=())
        words = tuple(output["words"])
        frames = []
        for verb in output.get("verbs", ()):
            frame = _frame_from_bio(verb["tags"])
            if frame is not None:
                frames.append(frame)
        return TaggedSentence(words=words, frames=tuple(frames))


def _frame_from_bio(tags):
    """One frame from a BIO tag sequence; None without a B-V tag."""
    predicate = None
    arguments = []
    start = None
    role = None

    def flush(end):
        nonlocal start, role
        if role is not None and role != "V":
            arguments.append((role, start, end))
        start = role = None

    for i, tag in enumerate(tags):
        if tag.startswith("B-"):
            flush(i)
            role = tag[2:]
            start = i
            if role == "V":
                predicate = i
        elif tag.startswith("I-"):
            continue
        else:
            flush(i)
    flush(len(tags))
    if predicate is None:
        return None
    return (predicate, tuple(arguments))
