from __future__ import annotations

import random

import pytest

from aiml_engine.graphmaster import GraphNode, insert, match
from aiml_engine.model import (
    STAR,
    UNDERSCORE,
    Category,
    PatternPath,
    SourceRef,
    Text,
    Token,
    Wildcard,
    Word,
)

from gen import kb_from_categories, random_kb, random_tokens, wildcard_pair
from oracle import oracle_match


def toks(text: str) -> tuple[Token, ...]:
    return tuple(Token(normalized=w.upper(), original=w) for w in text.split())


def cat(pattern: str, label: str, that: str = "*", topic: str = "*") -> Category:
    def parse(spec):
        out = []
        for piece in spec.split():
            if piece == "*":
                out.append(STAR)
            elif piece == "_":
                out.append(UNDERSCORE)
            else:
                out.append(Word(piece.upper()))
        return tuple(out)

    return Category(
        path=PatternPath(input=parse(pattern), that=parse(that), topic=parse(topic)),
        template=Text(label),
        source=SourceRef("t.aiml", 1),
    )


def build(*categories: Category) -> GraphNode:
    root = GraphNode()
    for c in categories:
        insert(root, c.path, c)
    return root


def label(result) -> str:
    assert result is not None
    return result.category.template.value


class TestInsert:
    def test_duplicate_path_returns_replaced(self):
        root = GraphNode()
        first = cat("HI", "one")
        second = cat("HI", "two")
        assert insert(root, first.path, first) is None
        assert insert(root, second.path, second) is first

    def test_distinct_contexts_do_not_collide(self):
        root = build(cat("YES", "plain"), cat("YES", "movies", that="DO YOU LIKE MOVIES"))
        assert label(match(root, toks("yes"))) == "plain"
        assert label(match(root, toks("yes"), that_tokens=toks("do you like movies"))) == "movies"


class TestMatchBasics:
    def test_exact_words(self):
        root = build(cat("HELLO BOT", "greet"))
        assert label(match(root, toks("hello bot"))) == "greet"

    def test_no_match(self):
        root = build(cat("HELLO BOT", "greet"))
        assert match(root, toks("hello there")) is None
        assert match(root, toks("hello bot again")) is None

    def test_empty_input(self):
        root = build(cat("*", "any"))
        assert match(root, ()) is None

    def test_star_captures_run(self):
        root = build(cat("I LIKE *", "like"))
        result = match(root, toks("i like video games"))
        assert label(result) == "like"
        assert [t.original for t in result.input_stars[0]] == ["video", "games"]

    def test_two_stars(self):
        root = build(cat("A * IS A *", "riddle"))
        result = match(root, toks("a rose is a flower"))
        assert [[t.original for t in run] for run in result.input_stars] == [["rose"], ["flower"]]

    def test_wildcard_needs_at_least_one_token(self):
        root = build(cat("BYE *", "long"))
        assert match(root, toks("bye")) is None

    def test_star_spans_whole_input(self):
        root = build(cat("*", "any"))
        result = match(root, toks("one two three"))
        assert len(result.input_stars[0]) == 3


class TestPriority:
    def test_underscore_beats_word(self):
        root = build(cat("_ B", "under"), cat("A B", "word"))
        assert label(match(root, toks("a b"))) == "under"

    def test_word_beats_star(self):
        root = build(cat("A B", "word"), cat("* B", "star"))
        assert label(match(root, toks("a b"))) == "word"

    def test_underscore_beats_star(self):
        root = build(cat("_ B", "under"), cat("* B", "star"))
        assert label(match(root, toks("a b"))) == "under"

    def test_priority_is_positional_not_global(self):
        # Left-to-right: the first position decides before later ones.
        root = build(cat("A *", "word-then-star"), cat("_ B", "under"))
        assert label(match(root, toks("a b"))) == "under"

    def test_shorter_wildcard_run_explored_first(self):
        root = build(cat("* B *", "split"))
        result = match(root, toks("x b y b z"))
        assert [t.normalized for t in result.input_stars[0]] == ["X"]
        assert [t.normalized for t in result.input_stars[1]] == ["Y", "B", "Z"]


class TestContextMatching:
    def test_that_literal_requires_prior_reply(self):
        root = build(cat("YES", "movies", that="DO YOU LIKE MOVIES"))
        assert match(root, toks("yes")) is None
        assert match(root, toks("yes"), that_tokens=toks("do you like movies")) is not None

    def test_empty_that_matched_by_wildcard(self):
        root = build(cat("HI", "greet"))
        result = match(root, toks("hi"))
        assert label(result) == "greet"
        assert result.that_stars == ((),)
        assert result.topic_stars == ((),)

    def test_topic_literal(self):
        root = build(cat("*", "flowers", topic="FLOWERS"), cat("*", "any"))
        assert label(match(root, toks("nice"), topic_tokens=toks("flowers"))) == "flowers"
        assert label(match(root, toks("nice"))) == "any"

    def test_that_star_captures(self):
        root = build(cat("YES", "y", that="DO YOU LIKE *"))
        result = match(root, toks("yes"), that_tokens=toks("do you like movies"))
        assert [t.normalized for t in result.that_stars[0]] == ["MOVIES"]

    def test_wildcards_do_not_cross_boundaries(self):
        # A trailing input star cannot swallow the that segment.
        root = build(cat("HI *", "greedy", that="X"))
        assert match(root, toks("hi there"), that_tokens=toks("y")) is None
        assert match(root, toks("hi there"), that_tokens=toks("x")) is not None


class TestReconstruction:
    def reconstruct(self, elements, stars):
        runs = iter(stars)
        out = []
        for element in elements:
            if isinstance(element, Wildcard):
                out.extend(t.normalized for t in next(runs))
            else:
                out.append(element.text)
        return out

    @pytest.mark.parametrize("seed", range(40))
    def test_random_kb_reconstruction(self, seed):
        rng = random.Random(seed)
        kb = random_kb(rng, max_categories=25)
        for _ in range(20):
            tokens = random_tokens(rng, 8)
            that = random_tokens(rng, 3) if rng.random() < 0.4 else ()
            topic = random_tokens(rng, 2) if rng.random() < 0.4 else ()
            result = match(kb.index, tokens, that, topic)
            if result is None:
                continue
            path = result.category.path
            assert self.reconstruct(path.input, result.input_stars) == \
                [t.normalized for t in tokens]
            if that:
                assert self.reconstruct(path.that, result.that_stars) == \
                    [t.normalized for t in that]
            if topic:
                assert self.reconstruct(path.topic, result.topic_stars) == \
                    [t.normalized for t in topic]


class TestOracleAgreement:
    @pytest.mark.parametrize("seed", range(60))
    def test_matches_oracle(self, seed):
        rng = random.Random(1000 + seed)
        kb = random_kb(rng)
        for _ in range(10):
            tokens = random_tokens(rng, 8)
            that = random_tokens(rng, 3) if rng.random() < 0.4 else ()
            topic = random_tokens(rng, 2) if rng.random() < 0.4 else ()
            got = match(kb.index, tokens, that, topic)
            expected = oracle_match(kb.categories, tokens, that, topic)
            if expected is None:
                assert got is None
                continue
            assert got is not None
            assert got.category is expected.category
            assert got.input_stars == expected.input_stars
            assert got.that_stars == expected.that_stars
            assert got.topic_stars == expected.topic_stars

    @pytest.mark.parametrize("seed", range(60))
    def test_underscore_pair_priority(self, seed):
        rng = random.Random(2000 + seed)
        under, star, tokens = wildcard_pair(rng)
        kb = kb_from_categories([under, star])
        result = match(kb.index, tokens)
        assert result is not None
        assert result.category is under

    def test_deterministic(self):
        rng = random.Random(3)
        kb = random_kb(rng)
        tokens = random_tokens(rng, 6)
        first = match(kb.index, tokens)
        for _ in range(5):
            again = match(kb.index, tokens)
            if first is None:
                assert again is None
            else:
                assert again.category is first.category
                assert again.input_stars == first.input_stars
