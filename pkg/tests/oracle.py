"""Reference matcher: enumerate every assignment, rank, take the minimum.

Deliberately naive so it shares no machinery with the trie implementation.
A category matches when its flattened pattern key (input ++ that-boundary ++
that ++ topic-boundary ++ topic) can consume the flattened token sequence,
words one-for-one and wildcards one-or-more within a segment. Each step is
ranked (underscore by length, then word or boundary, then star by length),
and the winning category is the one whose best decision sequence is the
lexicographic minimum, mirroring a depth-first walk that tries underscore
edges shortest-first, then the exact word, then star edges shortest-first.
"""

from __future__ import annotations

from dataclasses import dataclass

from aiml_engine.graphmaster import EMPTY_CONTEXT, THAT_BOUNDARY, TOPIC_BOUNDARY
from aiml_engine.model import Category, Token, Wildcard, Word


@dataclass(frozen=True)
class OracleResult:
    category: Category
    input_stars: tuple
    that_stars: tuple
    topic_stars: tuple


def _flatten_pattern(path) -> list:
    return (list(path.input) + [THAT_BOUNDARY] + list(path.that)
            + [TOPIC_BOUNDARY] + list(path.topic))


def _flatten_tokens(input_tokens, that_tokens, topic_tokens) -> list:
    return (list(input_tokens) + [THAT_BOUNDARY]
            + (list(that_tokens) or [EMPTY_CONTEXT]) + [TOPIC_BOUNDARY]
            + (list(topic_tokens) or [EMPTY_CONTEXT]))


def _assignments(pattern, seq, pi, si, decisions, captures):
    if pi == len(pattern):
        if si == len(seq):
            yield tuple(decisions), tuple(captures)
        return
    element = pattern[pi]
    if element is THAT_BOUNDARY or element is TOPIC_BOUNDARY:
        if si < len(seq) and seq[si] is element:
            decisions.append((1,))
            yield from _assignments(pattern, seq, pi + 1, si + 1, decisions, captures)
            decisions.pop()
        return
    if isinstance(element, Word):
        head = seq[si] if si < len(seq) else None
        if isinstance(head, Token) and head is not EMPTY_CONTEXT and head.normalized == element.text:
            decisions.append((1,))
            yield from _assignments(pattern, seq, pi + 1, si + 1, decisions, captures)
            decisions.pop()
        return
    assert isinstance(element, Wildcard)
    rank = 0 if element.symbol == "_" else 2
    run = []
    j = si
    while j < len(seq) and isinstance(seq[j], Token):
        run.append(seq[j])
        j += 1
        decisions.append((rank, len(run)))
        captures.append(tuple(run))
        yield from _assignments(pattern, seq, pi + 1, j, decisions, captures)
        captures.pop()
        decisions.pop()


def oracle_match(categories, input_tokens, that_tokens=(), topic_tokens=()) -> OracleResult | None:
    if not input_tokens:
        return None
    seq = _flatten_tokens(input_tokens, that_tokens, topic_tokens)
    best_key = None
    best = None
    for cat in categories:
        pattern = _flatten_pattern(cat.path)
        for decisions, captures in _assignments(pattern, seq, 0, 0, [], []):
            if best_key is None or decisions < best_key:
                best_key = decisions
                best = (cat, captures)
    if best is None:
        return None
    cat, captures = best
    n_input = sum(isinstance(e, Wildcard) for e in cat.path.input)
    n_that = sum(isinstance(e, Wildcard) for e in cat.path.that)

    def strip_sentinel(run):
        return () if run == (EMPTY_CONTEXT,) else run

    return OracleResult(
        category=cat,
        input_stars=tuple(captures[:n_input]),
        that_stars=tuple(strip_sentinel(r) for r in captures[n_input:n_input + n_that]),
        topic_stars=tuple(strip_sentinel(r) for r in captures[n_input + n_that:]),
    )
