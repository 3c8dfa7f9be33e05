"""Word similarity measures used by tuple extraction.

All four methods operate on unit multisets: whitespace-delimited tokens
when the text has spaces, single characters for unspaced CJK text, the
whole string otherwise. Every method returns a value in [0, 1] with
similarity(w, w) = 1.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from ..errors import EmptyInput
from ..lexicon import normalize

METHODS = ("overlap", "cosine", "euclidean", "dice")


@dataclass
class SimilarityConfig:
    method: str = "overlap"
    threshold: float = 1.0
    unit: str = "token"  # token | character

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown similarity method {self.method!r}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        if self.unit not in ("token", "character"):
            raise ValueError(f"unknown unit {self.unit!r}")


def units(text: str, unit: str = "token") -> Counter:
    """Unit multiset of a string (tokens or characters)."""
    text = normalize(text).strip()
    if unit == "character":
        return Counter(ch for ch in text if not ch.isspace())
    parts = text.split()
    if len(parts) > 1:
        return Counter(parts)
    # no internal whitespace: CJK text falls back to character units
    if any(not ch.isascii() for ch in text):
        return Counter(text)
    return Counter(parts)


def similarity(a: str, b: str, cfg: SimilarityConfig | None = None) -> float:
    """Similarity of two words/phrases under the configured method."""
    cfg = cfg or SimilarityConfig()
    if not a.strip() or not b.strip():
        raise EmptyInput("similarity requires non-empty inputs")
    ua, ub = units(a, cfg.unit), units(b, cfg.unit)
    if not ua or not ub:
        raise EmptyInput("similarity requires non-empty inputs")
    if cfg.method == "overlap":
        return _overlap(ua, ub)
    if cfg.method == "dice":
        return _dice(ua, ub)
    if cfg.method == "cosine":
        return _cosine(ua, ub)
    return _euclidean(ua, ub)


def _intersection_size(a: Counter, b: Counter) -> int:
    return sum((a & b).values())


def _overlap(a: Counter, b: Counter) -> float:
    denom = min(sum(a.values()), sum(b.values()))
    return _intersection_size(a, b) / denom if denom else 0.0


def _dice(a: Counter, b: Counter) -> float:
    denom = sum(a.values()) + sum(b.values())
    return 2.0 * _intersection_size(a, b) / denom if denom else 0.0


def _cosine(a: Counter, b: Counter) -> float:
    dot = sum(count * b.get(unit, 0) for unit, count in a.items())
    norm = math.sqrt(sum(c * c for c in a.values())) * \
        math.sqrt(sum(c * c for c in b.values()))
    return dot / norm if norm else 0.0


def _euclidean(a: Counter, b: Counter) -> float:
    keys = set(a) | set(b)
    dist = math.sqrt(sum((a.get(k, 0) - b.get(k, 0)) ** 2 for k in keys))
    return 1.0 / (1.0 + dist)
