import numpy as np
import pytest

from mcds.errors import DimensionMismatch
from mcds.policy.classifier import (MlpModel, RuleClassifier, accuracy,
                                    classify, train_mlp)
from mcds.policy.synth import generate_corpus, read_corpus, write_corpus
from mcds.policy.text import SentenceRecord, build_vocabulary

FIG1_SENTENCE = ("To make sure you can enjoy the full service, we may ask "
                 "you to provide personal information such as your mobile "
                 "number, ID number, bank account number and third-party "
                 "account number.")


@pytest.fixture(scope="module")
def vocabulary(lexicons):
    return build_vocabulary(*lexicons)


class TestRuleMode:
    def test_all_zero_vector_unrelated(self, vocabulary):
        rule = RuleClassifier(vocabulary)
        assert rule.classify_vector([0] * len(vocabulary)) is False

    def test_fig1_sentence_related(self, vocabulary):
        rule = RuleClassifier(vocabulary)
        record = SentenceRecord(0, FIG1_SENTENCE,
                                vocabulary.vector(FIG1_SENTENCE))
        assert classify(record, rule) is True
        assert record.related is True

    def test_type_without_operation_unrelated(self, vocabulary):
        rule = RuleClassifier(vocabulary)
        assert rule.classify_text("phone number") is False
        assert rule.classify_text("we collect everything") is False

    def test_dimension_mismatch(self, vocabulary):
        rule = RuleClassifier(vocabulary)
        with pytest.raises(DimensionMismatch):
            rule.classify_vector([0, 1])

    def test_rule_recall_and_precision_on_synthetic(self, lexicons,
                                                    vocabulary):
        corpus = generate_corpus(400, 3, *lexicons, vocabulary)
        rule = RuleClassifier(vocabulary)
        true_positive = false_positive = false_negative = 0
        for label, sentence in corpus:
            predicted = rule.classify_text(sentence)
            if predicted and label:
                true_positive += 1
            elif predicted and not label:
                false_positive += 1
            elif not predicted and label:
                false_negative += 1
        assert false_positive == 0
        assert false_negative == 0
        assert true_positive > 0


class TestMlp:
    def test_train_reaches_holdout_accuracy(self, lexicons, vocabulary):
        corpus = generate_corpus(2000, 42, *lexicons, vocabulary)
        vectors = [(label, vocabulary.vector(s)) for label, s in corpus]
        train, held_out = vectors[:1600], vectors[1600:]
        model = train_mlp(train, len(vocabulary), seed=7, epochs=200)
        assert accuracy(model, held_out) >= 0.90

    def test_training_deterministic(self, lexicons, vocabulary):
        corpus = generate_corpus(200, 5, *lexicons, vocabulary)
        vectors = [(label, vocabulary.vector(s)) for label, s in corpus]
        first = train_mlp(vectors, len(vocabulary), seed=11, epochs=20)
        second = train_mlp(vectors, len(vocabulary), seed=11, epochs=20)
        assert np.array_equal(first.w1, second.w1)
        assert np.array_equal(first.w2, second.w2)

    def test_save_load_bit_identical(self, tmp_path, lexicons, vocabulary):
        corpus = generate_corpus(100, 6, *lexicons, vocabulary)
        vectors = [(label, vocabulary.vector(s)) for label, s in corpus]
        model = train_mlp(vectors, len(vocabulary), seed=13, epochs=10)
        path = tmp_path / "model.bin"
        model.save(path)
        reloaded = MlpModel.load(path)
        for attr in ("w1", "b1", "w2", "b2"):
            assert np.array_equal(getattr(model, attr),
                                  getattr(reloaded, attr))
        assert reloaded.threshold == model.threshold
        assert reloaded.train_seed == model.train_seed
        second = tmp_path / "model2.bin"
        reloaded.save(second)
        assert path.read_bytes() == second.read_bytes()

    def test_forward_threshold_semantics(self, vocabulary):
        rng = np.random.default_rng(1)
        width = len(vocabulary)
        model = MlpModel(rng.normal(size=(width, 8)), np.zeros(8),
                         rng.normal(size=(8, 1)), np.zeros(1), threshold=0.5)
        vector = [1] * width
        related = model.classify_vector(vector)
        assert related == (model.probability(vector) >= 0.5)

    def test_dimension_mismatch(self):
        model = MlpModel(np.zeros((4, 2)), np.zeros(2),
                         np.zeros((2, 1)), np.zeros(1))
        with pytest.raises(DimensionMismatch):
            model.probability([1, 0])

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"NOTMODEL" + b"\x00" * 64)
        with pytest.raises(ValueError):
            MlpModel.load(path)


class TestCorpusFile:
    def test_round_trip(self, tmp_path, lexicons, vocabulary):
        corpus = generate_corpus(50, 8, *lexicons, vocabulary)
        path = tmp_path / "corpus.tsv"
        write_corpus(corpus, path)
        assert read_corpus(path) == corpus
