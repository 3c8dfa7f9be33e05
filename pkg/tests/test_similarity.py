import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcds.errors import EmptyInput
from mcds.policy.similarity import METHODS, SimilarityConfig, similarity

WORDS = st.text(
    alphabet=st.characters(whitelist_categories=("Ll", "Lu", "Nd"),
                           max_codepoint=0x2FF),
    min_size=1, max_size=12).filter(lambda s: s.strip())

PHRASES = st.lists(WORDS, min_size=1, max_size=4).map(" ".join)


class TestExactValues:
    def test_overlap_modifier_does_not_change_the_word(self):
        assert similarity("city", "currently living city") == 1.0

    def test_overlap_shared_token_half(self):
        assert similarity("mobile phone number", "ID number") == 0.5

    def test_dice(self):
        cfg = SimilarityConfig("dice")
        assert similarity("mobile phone number", "ID number", cfg) == \
            pytest.approx(2 * 1 / 5)

    def test_cosine(self):
        cfg = SimilarityConfig("cosine")
        assert similarity("mobile phone number", "ID number", cfg) == \
            pytest.approx(1 / math.sqrt(6))

    def test_euclidean_normalized(self):
        cfg = SimilarityConfig("euclidean")
        value = similarity("mobile phone number", "ID number", cfg)
        assert value == pytest.approx(1 / (1 + math.sqrt(3)))
        assert 0 < value <= 1

    def test_character_unit(self):
        cfg = SimilarityConfig("overlap", unit="character")
        assert similarity("abc", "cab", cfg) == 1.0

    def test_cjk_falls_back_to_characters(self):
        # containment: the short word's characters all appear in the long one
        assert similarity("城市", "当前城市") == 1.0
        assert similarity("城市", "市区") == 0.5


class TestErrors:
    @pytest.mark.parametrize("a,b", [("", "x"), ("x", ""), ("  ", "x")])
    def test_empty_input(self, a, b):
        with pytest.raises(EmptyInput):
            similarity(a, b)

    def test_bad_method(self):
        with pytest.raises(ValueError):
            SimilarityConfig("jaccard")

    def test_bad_threshold(self):
        with pytest.raises(ValueError):
            SimilarityConfig("overlap", threshold=1.5)


class TestProperties:
    @settings(max_examples=250)
    @given(a=PHRASES, b=PHRASES, method=st.sampled_from(METHODS))
    def test_symmetry(self, a, b, method):
        cfg = SimilarityConfig(method)
        assert similarity(a, b, cfg) == pytest.approx(similarity(b, a, cfg))

    @settings(max_examples=250)
    @given(a=PHRASES, method=st.sampled_from(METHODS))
    def test_identity_is_one(self, a, method):
        assert similarity(a, a, SimilarityConfig(method)) == pytest.approx(1.0)

    @settings(max_examples=250)
    @given(a=PHRASES, b=PHRASES, method=st.sampled_from(METHODS))
    def test_range(self, a, b, method):
        value = similarity(a, b, SimilarityConfig(method))
        assert 0.0 <= value <= 1.0 + 1e-12

    def test_threshold_monotonicity_seeded_pairs(self):
        rng = random.Random(99)
        vocabulary = ["mobile", "phone", "number", "city", "bank", "account",
                      "id", "card", "living", "current"]
        for _ in range(1000):
            a = " ".join(rng.sample(vocabulary, rng.randint(1, 3)))
            b = " ".join(rng.sample(vocabulary, rng.randint(1, 3)))
            method = rng.choice(METHODS)
            value = similarity(a, b, SimilarityConfig(method))
            lo, hi = sorted([rng.random(), rng.random()])
            # the match predicate at a lower threshold accepts a superset
            if value >= hi:
                assert value >= lo
