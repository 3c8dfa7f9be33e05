"""Tuple extraction: data-practice pairs from a related sentence.

Candidates come from two routes inside each clause (a clause ends at a
sentence-internal full stop or semicolon):

* direct lexicon matches over the token stream, for both type phrases and
  operation words, and
* noun-ish chunks between punctuation compared against the lexicons with
  the configured similarity method and threshold.

Every (operation, type) pair co-occurring in a clause yields one
(secondary type, operation) practice. The clause-window extractor stands
in for a dependency-parse triple extractor behind the same interface, so
a full parser can be substituted later.
"""

from __future__ import annotations

import re

from ..errors import EmptyInput
from ..lexicon import OperationLexicon, TypeLexicon
from ..taint import DataPractice
from .similarity import SimilarityConfig, similarity
from .text import SentenceRecord

# clause boundaries: sentence-internal stops and semicolons
_CLAUSE_RE = re.compile(r"[.;。；]")
# chunk boundaries: weaker punctuation within a clause
_CHUNK_RE = re.compile(r"[,:，、：()（）\[\]\"'“”]")


def extract_tuples(record: SentenceRecord,
                   type_lexicon: TypeLexicon,
                   operation_lexicon: OperationLexicon,
                   cfg: SimilarityConfig | None = None) -> set[DataPractice]:
    """Extract (type, operation) practices from a related sentence."""
    cfg = cfg or SimilarityConfig()
    practices: set[DataPractice] = set()
    for clause in _CLAUSE_RE.split(record.text):
        if not clause.strip():
            continue
        types = _type_candidates(clause, type_lexicon, cfg)
        operations = _operation_candidates(clause, type_lexicon,
                                           operation_lexicon, cfg)
        for operation in operations:
            for secondary in types:
                practices.add(DataPractice(secondary, operation))
    return practices


def _type_candidates(clause: str, type_lexicon: TypeLexicon,
                     cfg: SimilarityConfig) -> set[str]:
    found = {match.category for match in type_lexicon.match_text(clause)}
    for chunk in _chunks(clause):
        best = _best_phrase(chunk, type_lexicon, cfg)
        if best is not None:
            found.add(best)
    return found


def _operation_candidates(clause: str, type_lexicon: TypeLexicon,
                          operation_lexicon: OperationLexicon,
                          cfg: SimilarityConfig) -> set[str]:
    # a token consumed by a type phrase is an entity, not a relation:
    # "click record" must not read as the operation "record"
    consumed: set[int] = set()
    for match in type_lexicon.match_text(clause):
        consumed.update(range(match.start, match.start + match.length))
    found: set[str] = set()
    for match in operation_lexicon.match_text(clause):
        positions = range(match.start, match.start + match.length)
        if not any(pos in consumed for pos in positions):
            found.add(match.category)
    if cfg.threshold < 1.0:
        for chunk in _chunks(clause):
            for word in chunk.split():
                operation = _best_operation(word, operation_lexicon, cfg)
                if operation is not None:
                    found.add(operation)
    return found


def _chunks(clause: str) -> list[str]:
    return [chunk.strip() for chunk in _CHUNK_RE.split(clause)
            if chunk.strip()]


def _best_phrase(chunk: str, type_lexicon: TypeLexicon,
                 cfg: SimilarityConfig):
    """Secondary of the best-scoring phrase at or above the threshold."""
    best_key = None
    best_secondary = None
    for phrase in type_lexicon.all_phrases():
        try:
            score = similarity(chunk, phrase, cfg)
        except EmptyInput:
            continue
        if score < cfg.threshold or score <= 0.0:
            continue
        key = (score, len(phrase), phrase)  # deterministic tie-break
        if best_key is None or key > best_key:
            best_key = key
            best_secondary = type_lexicon.phrase_index.get(phrase)
    return best_secondary


def _best_operation(word: str, operation_lexicon: OperationLexicon,
                    cfg: SimilarityConfig):
    best_key = None
    best_operation = None
    for operation in sorted(operation_lexicon.operations):
        for known in sorted(operation_lexicon.operations[operation]):
            try:
                score = similarity(word, known, cfg)
            except EmptyInput:
                continue
            if score < cfg.threshold or score <= 0.0:
                continue
            key = (score, len(known), known)
            if best_key is None or key > best_key:
                best_key = key
                best_operation = operation
    return best_operation
