"""Relatedness classifiers: a deterministic rule and a small MLP.

The rule marks a sentence related when its bag-of-words vector hits at
least one type word and at least one operation word; it is the default
because it needs no training data. The MLP (one 512-wide hidden layer,
sigmoid output) is trained with full-batch gradient descent on binary
cross-entropy from a labeled corpus, with a fixed seed so training is
reproducible, and serializes to a flat binary layout.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..errors import DimensionMismatch
from .text import CombinedVocabulary, SentenceRecord

_MAGIC = b"MCDSMLP1"
HIDDEN_WIDTH = 512


@dataclass
class RuleClassifier:
    vocabulary: CombinedVocabulary

    def classify_vector(self, vector: Sequence[int]) -> bool:
        if len(vector) != len(self.vocabulary):
            raise DimensionMismatch(
                f"vector length {len(vector)} != vocabulary size "
                f"{len(self.vocabulary)}")
        return (self.vocabulary.has_type_hit(vector)
                and self.vocabulary.has_operation_hit(vector))

    def classify_text(self, sentence: str) -> bool:
        return self.classify_vector(self.vocabulary.vector(sentence))


class MlpModel:
    """input -> 512 ReLU -> sigmoid, thresholded to a related flag."""

    def __init__(self, w1: np.ndarray, b1: np.ndarray, w2: np.ndarray,
                 b2: np.ndarray, threshold: float = 0.5,
                 train_seed: int = 0):
        self.w1 = w1
        self.b1 = b1
        self.w2 = w2
        self.b2 = b2
        self.threshold = threshold
        self.train_seed = train_seed

    @property
    def input_dim(self) -> int:
        return self.w1.shape[0]

    def forward(self, vectors: np.ndarray) -> np.ndarray:
        hidden = np.maximum(vectors @ self.w1 + self.b1, 0.0)
        logits = hidden @ self.w2 + self.b2
        return 1.0 / (1.0 + np.exp(-logits))

    def probability(self, vector: Sequence[int]) -> float:
        arr = np.asarray(vector, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] != self.input_dim:
            raise DimensionMismatch(
                f"vector length {arr.shape} != model input width "
                f"{self.input_dim}")
        return float(self.forward(arr[None, :])[0, 0])

    def classify_vector(self, vector: Sequence[int]) -> bool:
        return self.probability(vector) >= self.threshold

    # -- serialization: versioned header + dimensions + row-major blocks --

    def save(self, path: Path) -> None:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<IIdQ", self.input_dim, self.w1.shape[1],
                                 self.threshold, self.train_seed))
            for block in (self.w1, self.b1, self.w2, self.b2):
                fh.write(np.ascontiguousarray(block, dtype="<f8").tobytes())

    @classmethod
    def load(cls, path: Path) -> "MlpModel":
        blob = Path(path).read_bytes()
        if blob[:8] != _MAGIC:
            raise ValueError(f"{path}: not a classifier model file")
        input_dim, hidden, threshold, seed = struct.unpack_from("<IIdQ", blob, 8)
        offset = 8 + struct.calcsize("<IIdQ")

        def take(shape: tuple[int, ...]) -> np.ndarray:
            nonlocal offset
            count = int(np.prod(shape))
            arr = np.frombuffer(blob, dtype="<f8", count=count,
                                offset=offset).reshape(shape).copy()
            offset += count * 8
            return arr

        w1 = take((input_dim, hidden))
        b1 = take((hidden,))
        w2 = take((hidden, 1))
        b2 = take((1,))
        return cls(w1, b1, w2, b2, threshold, seed)


def classify(record: SentenceRecord, model) -> bool:
    """Set and return the record's related flag using the given classifier."""
    if record.vector is None:
        raise DimensionMismatch("record has no vector; vectorize it first")
    record.related = bool(model.classify_vector(record.vector))
    return record.related


def train_mlp(corpus: Sequence[tuple[int, Sequence[int]]],
              input_dim: int,
              hidden: int = HIDDEN_WIDTH,
              seed: int = 7,
              epochs: int = 200,
              learning_rate: float = 1.0,
              threshold: float = 0.5,
              log: Optional[list] = None) -> MlpModel:
    """Train on (label, vector) pairs with plain full-batch gradient descent.

    Deterministic for a fixed seed; binary cross-entropy loss.
    """
    labels = np.asarray([label for label, _ in corpus], dtype=np.float64)
    matrix = np.asarray([vec for _, vec in corpus], dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[1] != input_dim:
        raise DimensionMismatch(
            f"corpus vectors have width {matrix.shape}, expected {input_dim}")

    rng = np.random.default_rng(seed)
    w1 = rng.normal(0.0, np.sqrt(2.0 / input_dim), (input_dim, hidden))
    b1 = np.zeros(hidden)
    w2 = rng.normal(0.0, np.sqrt(2.0 / hidden), (hidden, 1))
    b2 = np.zeros(1)
    y = labels[:, None]
    n = matrix.shape[0]

    for epoch in range(epochs):
        pre = matrix @ w1 + b1
        hid = np.maximum(pre, 0.0)
        logits = hid @ w2 + b2
        prob = 1.0 / (1.0 + np.exp(-logits))
        # BCE gradient through the sigmoid is (p - y)
        delta_out = (prob - y) / n
        grad_w2 = hid.T @ delta_out
        grad_b2 = delta_out.sum(axis=0)
        delta_hid = (delta_out @ w2.T) * (pre > 0.0)
        grad_w1 = matrix.T @ delta_hid
        grad_b1 = delta_hid.sum(axis=0)
        w1 -= learning_rate * grad_w1
        b1 -= learning_rate * grad_b1
        w2 -= learning_rate * grad_w2
        b2 -= learning_rate * grad_b2
        if log is not None and (epoch % 50 == 0 or epoch == epochs - 1):
            loss = float(np.mean(
                -(y * np.log(prob + 1e-12)
                  + (1 - y) * np.log(1 - prob + 1e-12))))
            log.append((epoch, loss))

    return MlpModel(w1, b1, w2, b2, threshold, seed)


def accuracy(model, samples: Sequence[tuple[int, Sequence[int]]]) -> float:
    if not samples:
        return 0.0
    vectors = np.asarray([vec for _, vec in samples], dtype=np.float64)
    labels = np.asarray([label for label, _ in samples])
    prob = model.forward(vectors)[:, 0]
    predicted = (prob >= model.threshold).astype(int)
    return float((predicted == labels).mean())
