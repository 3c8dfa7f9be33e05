"""Privacy-policy text analysis: sentence splitting, bag-of-words
vectorization, relatedness classification, and tuple extraction."""

from .text import SentenceRecord, build_vocabulary, split_sentences, vectorize
from .similarity import SimilarityConfig, similarity
from .classifier import MlpModel, RuleClassifier, classify, train_mlp
from .extract import extract_tuples

__all__ = [
    "SentenceRecord", "build_vocabulary", "split_sentences", "vectorize",
    "SimilarityConfig", "similarity",
    "MlpModel", "RuleClassifier", "classify", "train_mlp",
    "extract_tuples",
]
