"""Tokenization and lemma-grouping behavior."""

import string

import pytest
from hypothesis import given
from hypothesis import strategies as st

from storynet.tokenizer import (
    Token,
    make_lemmatizer,
    make_stream,
    stem,
    tokenize,
)


class TestTokenize:
    def test_punctuation_is_ignored(self):
        assert tokenize("the beauty, the deepest beauty, of nature") == [
            "the", "beauty", "the", "deepest", "beauty", "of", "nature",
        ]

    def test_trailing_apostrophe_s_is_dropped(self):
        assert tokenize("the dog's bone") == ["the", "dog", "bone"]

    def test_contractions_split_into_two_words(self):
        assert tokenize("don't stop") == ["don", "t", "stop"]

    def test_case_folding(self):
        assert tokenize("A a A.") == ["a", "a", "a"]

    def test_hyphen_is_a_boundary(self):
        assert tokenize("well-known") == ["well", "known"]

    def test_numbers_are_kept(self):
        assert tokenize("route 66 opened in 1926") == [
            "route", "66", "opened", "in", "1926",
        ]

    def test_plural_possessive_keeps_word(self):
        assert tokenize("the dogs' bones") == ["the", "dogs", "bones"]

    def test_bare_apostrophe_s_vanishes(self):
        assert tokenize("it 's raining") == ["it", "raining"]

    def test_curly_apostrophe(self):
        assert tokenize("don’t") == ["don", "t"]

    def test_empty_text(self):
        assert tokenize("") == []

    def test_punctuation_insertion_invariance(self):
        assert tokenize("a, b") == tokenize("a b")
        assert tokenize("end. start") == tokenize("end start")

    @given(st.text(max_size=200))
    def test_deterministic_and_clean(self, text):
        once = tokenize(text)
        assert once == tokenize(text)
        bad = set(string.punctuation) | set(string.whitespace)
        for word in once:
            assert word
            assert not (set(word) & bad)

    @given(st.lists(st.sampled_from(["cat", "dog", "bird", "fish"]), max_size=30))
    def test_separator_choice_is_irrelevant(self, words):
        spaced = " ".join(words)
        commas = ", ".join(words)
        assert tokenize(spaced) == tokenize(commas) == words


class TestStem:
    def test_required_groupings(self):
        assert stem("eats") == "eat"
        assert stem("eaten") == "eat"
        assert stem("eat") == "eat"

    def test_run_family_collapses(self):
        assert stem("running") == stem("runs") == stem("run")

    def test_canonical_forms_are_fixed_points(self):
        for word in ["eat", "run", "the", "nature", "story", "deep"]:
            assert stem(word) == word

    @given(st.text(alphabet=string.ascii_lowercase, min_size=1, max_size=12))
    def test_idempotent(self, word):
        assert stem(stem(word)) == stem(word)

    def test_common_inflections(self):
        assert stem("hoped") == stem("hoping") == stem("hopes") == "hope"
        assert stem("carried") == stem("carries") == "carry"
        assert stem("stories") == "story"
        assert stem("taken") == "take"
        assert stem("dresses") == "dress"

    def test_short_and_non_alpha_words_untouched(self):
        assert stem("is") == "is"
        assert stem("as") == "as"
        assert stem("1926") == "1926"
        assert stem("66") == "66"

    def test_identity_lemmatizer(self):
        ident = make_lemmatizer("identity")
        assert ident("eats") == "eats"
        with pytest.raises(ValueError):
            make_lemmatizer("porter")


class TestMakeStream:
    def test_quote_has_25_words(self, quote_text):
        stream = make_stream(quote_text, "quote", lemmatizer="identity")
        assert stream.n_words == 25
        assert stream.n_unique_lemmas == 21

    def test_empty_text_gives_empty_stream(self):
        stream = make_stream("", "nothing")
        assert stream.n_words == 0
        assert stream.tokens == ()

    def test_case_fold_and_lemma(self):
        stream = make_stream("A a A.", "aaa")
        assert [t.lemma for t in stream.tokens] == ["a", "a", "a"]

    def test_positions_are_consecutive(self, quote_text):
        stream = make_stream(quote_text, "quote")
        assert [t.position for t in stream.tokens] == list(range(stream.n_words))

    def test_tokens_are_value_objects(self):
        assert Token("eats", "eat", 0) == Token("eats", "eat", 0)
