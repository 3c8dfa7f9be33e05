"""Deterministic synthetic corpus for classifier training and evaluation.

Sentences interleave lexicon phrases into policy-style templates and
distractor text. Labels are *defined* by lexicon co-occurrence: a sentence
is related iff its combined bag-of-words vector hits at least one type
word and at least one operation word, which is exactly the rule
classifier's decision. A fixed seed makes the corpus reproducible.
"""

from __future__ import annotations

import random
from typing import Sequence

from ..lexicon import OperationLexicon, TypeLexicon
from .classifier import RuleClassifier
from .text import CombinedVocabulary

_RELATED_TEMPLATES = [
    "we may {op} your {phrase} when you sign in",
    "to serve you better the app will {op} the {phrase} you give us",
    "our partners {op} your {phrase} as described in this document",
    "with your consent we {op} {phrase} and {phrase2}",
    "the service needs to {op} your {phrase} for this feature",
    "after registration we {op} your {phrase} once",
]

# templates that must not contain type phrases or operation words
_NEUTRAL_TEMPLATES = [
    "thank you for choosing our product and enjoy the experience",
    "this chapter explains the definitions of terms in this text",
    "our office hours are nine to five on weekdays",
    "the interface theme can be switched between light and dark",
    "updates to these terms become effective after publication",
    "you can contact customer care through the feedback page",
]

_TYPE_ONLY_TEMPLATES = [
    "your {phrase} belongs to you at all times",
    "the {phrase} field is optional during checkout",
    "a {phrase} is one example of personal data",
]

_OP_ONLY_TEMPLATES = [
    "you can {op} the night theme from the menu",
    "our team will {op} the anniversary event program",
    "feel free to {op} any suggestion in the forum",
]


def _ascii_items(values) -> list[str]:
    return sorted(v for v in values if v.isascii() and v.strip())


def generate_corpus(count: int, seed: int,
                    type_lexicon: TypeLexicon,
                    operation_lexicon: OperationLexicon,
                    vocabulary: CombinedVocabulary,
                    ) -> list[tuple[int, str]]:
    """(label, sentence) pairs; label computed by lexicon co-occurrence."""
    rng = random.Random(seed)
    phrases = _ascii_items(type_lexicon.all_phrases())
    op_words = _ascii_items(operation_lexicon.all_words())
    rule = RuleClassifier(vocabulary)

    corpus: list[tuple[int, str]] = []
    for i in range(count):
        bucket = i % 4
        if bucket == 0:
            template = rng.choice(_RELATED_TEMPLATES)
            sentence = template.format(op=rng.choice(op_words),
                                       phrase=rng.choice(phrases),
                                       phrase2=rng.choice(phrases))
        elif bucket == 1:
            sentence = rng.choice(_NEUTRAL_TEMPLATES)
        elif bucket == 2:
            sentence = rng.choice(_TYPE_ONLY_TEMPLATES).format(
                phrase=rng.choice(phrases))
        else:
            sentence = rng.choice(_OP_ONLY_TEMPLATES).format(
                op=rng.choice(op_words))
        label = 1 if rule.classify_text(sentence) else 0
        corpus.append((label, sentence))
    return corpus


def write_corpus(corpus: Sequence[tuple[int, str]], path) -> None:
    """Training corpus format: one 'label<TAB>sentence' per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for label, sentence in corpus:
            fh.write(f"{label}\t{sentence}\n")


def read_corpus(path) -> list[tuple[int, str]]:
    corpus: list[tuple[int, str]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip():
                continue
            label, _, sentence = line.partition("\t")
            corpus.append((1 if label.strip() == "1" else 0, sentence))
    return corpus
