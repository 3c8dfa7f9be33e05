"""Sentence splitting and bag-of-words vectorization for policy text."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..lexicon import OperationLexicon, TypeLexicon, normalize

# sentence-final punctuation, CJK and ASCII
_TERMINATORS = "。！？；.!?;"

_BULLET_RE = re.compile(r"^\s*(?:[-*•·]|\d+[.)、]|[(（]\d+[)）])\s+")


@dataclass
class SentenceRecord:
    index: int
    text: str
    vector: Optional[list[int]] = None
    related: Optional[bool] = None


def split_sentences(policy_text: str) -> list[SentenceRecord]:
    """Split policy text into sentences.

    Boundaries: sentence-final punctuation, blank lines, and the start of
    bullet/numbered list items. Empty segments are dropped.
    """
    sentences: list[str] = []
    buf: list[str] = []

    def flush() -> None:
        text = "".join(buf).strip()
        buf.clear()
        if text.strip(_TERMINATORS + " \t"):
            sentences.append(text)

    for line in policy_text.splitlines():
        if not line.strip():
            flush()
            continue
        marker = _BULLET_RE.match(line)
        if marker:
            flush()
            line = line[marker.end():]  # list marker is not sentence text
        for ch in line:
            buf.append(ch)
            if ch in _TERMINATORS:
                flush()
        if buf:
            buf.append(" ")
    flush()
    return [SentenceRecord(index, text) for index, text in enumerate(sentences)]


def vectorize(sentence: str, vocabulary: Sequence[str]) -> list[int]:
    """Binary vector: component i is 1 iff vocabulary word i occurs in the
    sentence (substring containment after normalization)."""
    haystack = normalize(sentence)
    return [1 if normalize(word) in haystack else 0 for word in vocabulary]


@dataclass
class CombinedVocabulary:
    """Type-phrase plus operation-word vocabulary, deterministic order."""

    words: list[str]
    n_type: int
    n_operation: int
    _normalized: list[str] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        if not self._normalized:
            self._normalized = [normalize(w) for w in self.words]

    def __len__(self) -> int:
        return len(self.words)

    def vector(self, sentence: str) -> list[int]:
        haystack = normalize(sentence)
        return [1 if word in haystack else 0 for word in self._normalized]

    def has_type_hit(self, vector: Sequence[int]) -> bool:
        return any(vector[:self.n_type])

    def has_operation_hit(self, vector: Sequence[int]) -> bool:
        return any(vector[self.n_type:])


def build_vocabulary(type_lexicon: TypeLexicon,
                     operation_lexicon: OperationLexicon) -> CombinedVocabulary:
    """The winning classifier configuration: type and operation words merged,
    type block first, each block sorted."""
    type_words = type_lexicon.all_phrases()
    seen = set(type_words)
    operation_words = [w for w in operation_lexicon.all_words() if w not in seen]
    return CombinedVocabulary(type_words + operation_words,
                              len(type_words), len(operation_words))
