"""Input standardization: sentence splitting, punctuation stripping, uppercasing.

The same word pipeline is applied to user input, pattern text and that-context
text, so all three compare by identical normalized forms. Original word forms
are kept on each token so replies can echo the user's own casing.

Choices not fixed by the source material, documented here:

* Raw input splits into sentences on ``.`` ``?`` ``!``; each sentence is
  answered independently.
* The strip set ``. , ; : ? ! " ' ( )`` is deleted in place (so "don't"
  becomes DONT); a hyphen acts as a word separator.
* Case mapping is plain Unicode uppercasing, so accented words keep their
  accents ("João" -> "JOÃO"). Digits pass through unchanged.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import STAR, UNDERSCORE, PatternElement, Token, Word

SENTENCE_SPLIT_RE = re.compile(r"[.?!]+")
STRIP_CHARS = ".,;:?!\"'()"
_STRIP_TABLE = {ord(c): None for c in STRIP_CHARS}


@dataclass(frozen=True)
class Sentence:
    """A normalized sentence; empty sentences are dropped before this exists."""

    tokens: tuple[Token, ...]

    def normalized_text(self) -> str:
        return " ".join(t.normalized for t in self.tokens)

    def original_text(self) -> str:
        return " ".join(t.original for t in self.tokens)


def tokenize_words(text: str) -> tuple[Token, ...]:
    """Split a single sentence into tokens; punctuation stripped, case kept."""
    tokens = []
    for raw in text.replace("-", " ").split():
        stripped = raw.translate(_STRIP_TABLE)
        if stripped:
            tokens.append(Token(normalized=stripped.upper(), original=stripped))
    return tuple(tokens)


def normalize_input(raw: str) -> list[Sentence]:
    """Standardize raw user text into a list of non-empty sentences."""
    sentences = []
    for part in SENTENCE_SPLIT_RE.split(raw):
        tokens = tokenize_words(part)
        if tokens:
            sentences.append(Sentence(tokens))
    return sentences


def normalize_pattern_text(text: str) -> list[PatternElement]:
    """Turn <pattern>/<that> content into pattern elements.

    ``*`` and ``_`` become wildcards; everything else goes through the same
    strip/uppercase pipeline as user input. An empty result is a structural
    violation reported by the parser, not here.
    """
    elements: list[PatternElement] = []
    for raw in text.replace("-", " ").split():
        if raw == "*":
            elements.append(STAR)
        elif raw == "_":
            elements.append(UNDERSCORE)
        else:
            stripped = raw.translate(_STRIP_TABLE)
            if stripped:
                elements.append(Word(stripped.upper()))
    return elements


def collapse_whitespace(text: str) -> str:
    """Collapse whitespace runs to single spaces and trim the ends."""
    return re.sub(r"\s+", " ", text).strip()
