from __future__ import annotations

from hypothesis import given, strategies as st

from aiml_engine.model import STAR, UNDERSCORE, Word
from aiml_engine.normalize import (
    STRIP_CHARS,
    collapse_whitespace,
    normalize_input,
    normalize_pattern_text,
    tokenize_words,
)


def normalized(text):
    return [t.normalized for t in tokenize_words(text)]


def originals(text):
    return [t.original for t in tokenize_words(text)]


class TestTokenizeWords:
    def test_uppercases(self):
        assert normalized("hello bot") == ["HELLO", "BOT"]

    def test_strips_punctuation_in_place(self):
        assert normalized("I don't have a family") == ["I", "DONT", "HAVE", "A", "FAMILY"]

    def test_originals_keep_case(self):
        assert originals("Hello João") == ["Hello", "João"]
        assert normalized("Hello João") == ["HELLO", "JOÃO"]

    def test_hyphen_splits_words(self):
        assert normalized("voice-activated") == ["VOICE", "ACTIVATED"]

    def test_quotes_and_parens_removed(self):
        assert normalized('say "hi" (now)') == ["SAY", "HI", "NOW"]

    def test_punctuation_only_word_dropped(self):
        assert normalized("well ,, then") == ["WELL", "THEN"]

    def test_empty(self):
        assert tokenize_words("") == ()
        assert tokenize_words("  ,;  ") == ()


class TestNormalizeInput:
    def test_single_sentence(self):
        sentences = normalize_input("Hello bot")
        assert len(sentences) == 1
        assert sentences[0].normalized_text() == "HELLO BOT"

    def test_terminators_split(self):
        sentences = normalize_input("OK. But I like movies.")
        assert [s.normalized_text() for s in sentences] == ["OK", "BUT I LIKE MOVIES"]

    def test_terminator_runs_collapse(self):
        sentences = normalize_input("What?! Really...")
        assert [s.normalized_text() for s in sentences] == ["WHAT", "REALLY"]

    def test_empty_sentences_dropped(self):
        assert normalize_input("...") == []
        assert normalize_input("") == []

    def test_original_text(self):
        sentences = normalize_input("My name is João")
        assert sentences[0].original_text() == "My name is João"


class TestNormalizePatternText:
    def test_words_uppercase(self):
        assert normalize_pattern_text("Hello Bot") == [Word("HELLO"), Word("BOT")]

    def test_wildcards(self):
        assert normalize_pattern_text("_ FAMILY *") == [UNDERSCORE, Word("FAMILY"), STAR]

    def test_punctuation_stripped(self):
        assert normalize_pattern_text(" WHO IS ALAN TURING? ") == [
            Word("WHO"), Word("IS"), Word("ALAN"), Word("TURING")]

    def test_empty(self):
        assert normalize_pattern_text(" ?! ") == []


class TestCollapseWhitespace:
    def test_collapses_runs_and_trims(self):
        assert collapse_whitespace("  a \n\t b  ") == "a b"

    def test_empty(self):
        assert collapse_whitespace(" \n ") == ""


# Sentence-safe text: anything but the sentence terminators.
sentence_text = st.text(
    alphabet=st.characters(blacklist_characters=".?!", blacklist_categories=("Cs", "Cc")),
    max_size=40,
)


@given(sentence_text)
def test_tokenize_idempotent(text):
    tokens = tokenize_words(text)
    joined = " ".join(t.normalized for t in tokens)
    assert [t.normalized for t in tokenize_words(joined)] == [t.normalized for t in tokens]


@given(sentence_text)
def test_normalized_has_no_strip_chars_or_lowercase(text):
    for token in tokenize_words(text):
        assert not any(c in STRIP_CHARS for c in token.normalized)
        assert token.normalized == token.normalized.upper()
        assert token.normalized


@given(sentence_text)
def test_token_count_matches_stripped_runs(text):
    spaced = text.replace("-", " ")
    stripped = "".join(c for c in spaced if c not in STRIP_CHARS)
    assert len(tokenize_words(text)) == len(stripped.split())


@given(st.text(max_size=60))
def test_sentences_have_tokens(text):
    for sentence in normalize_input(text):
        assert sentence.tokens
