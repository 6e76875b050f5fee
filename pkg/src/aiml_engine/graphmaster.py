"""Trie index over category paths and the wildcard matching algorithm.

Every category is stored under one flattened key::

    input elements, THAT_BOUNDARY, that elements, TOPIC_BOUNDARY, topic elements

Matching is a depth-first search over that key with backtracking. At each
node the edge preference is underscore, then exact word, then star, applied
left to right; wildcards consume one or more tokens (shortest run first) and
never cross a segment boundary. The first terminal reached under this order
wins, which makes underscore patterns beat word patterns and word patterns
beat catch-alls.

An empty that/topic segment is represented by a single reserved token that
no literal word can equal, so only a wildcard can match a missing context.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Category, PatternPath, Token, Wildcard, Word


class _Boundary:
    """Separator between the input/that/topic segments of a key."""

    __slots__ = ("label",)

    def __init__(self, label: str):
        self.label = label

    def __repr__(self) -> str:
        return f"<{self.label}>"


THAT_BOUNDARY = _Boundary("that-boundary")
TOPIC_BOUNDARY = _Boundary("topic-boundary")

# Pseudo-token standing in for an empty that/topic segment. Normalized word
# forms never contain NUL, so no literal pattern word can match it.
EMPTY_CONTEXT = Token(normalized="\x00missing-context\x00", original="")

_UNDERSCORE_EDGE = "\x00_\x00"
_STAR_EDGE = "\x00*\x00"
_THAT_EDGE = "\x00that\x00"
_TOPIC_EDGE = "\x00topic\x00"

_SEGMENTS = ("input", "that", "topic")


@dataclass
class GraphNode:
    """One trie node; word edges are keyed by the normalized word itself."""

    edges: dict = field(default_factory=dict)
    terminal: Category | None = None


@dataclass(frozen=True)
class MatchResult:
    """The selected category plus the token runs its wildcards consumed.

    Star runs are ordered left to right by wildcard position; concatenating
    literal pattern words and captured runs in order reproduces the matched
    token sequence exactly.
    """

    category: Category
    input_stars: tuple[tuple[Token, ...], ...]
    that_stars: tuple[tuple[Token, ...], ...]
    topic_stars: tuple[tuple[Token, ...], ...]


def _edge_for(element) -> str:
    if isinstance(element, Wildcard):
        return _UNDERSCORE_EDGE if element.symbol == "_" else _STAR_EDGE
    if isinstance(element, Word):
        return element.text
    raise TypeError(f"not a pattern element: {element!r}")


def insert(root: GraphNode, path: PatternPath, cat: Category) -> Category | None:
    """Add a category under its flattened key; returns any category it replaced."""
    labels = [_edge_for(el) for el in path.input]
    labels.append(_THAT_EDGE)
    labels.extend(_edge_for(el) for el in path.that)
    labels.append(_TOPIC_EDGE)
    labels.extend(_edge_for(el) for el in path.topic)

    node = root
    for label in labels:
        child = node.edges.get(label)
        if child is None:
            child = GraphNode()
            node.edges[label] = child
        node = child
    previous = node.terminal
    node.terminal = cat
    return previous


def match(
    root: GraphNode,
    input_tokens: list[Token] | tuple[Token, ...],
    that_tokens: list[Token] | tuple[Token, ...] = (),
    topic_tokens: list[Token] | tuple[Token, ...] = (),
) -> MatchResult | None:
    """Find the highest-priority category covering the given token sequence.

    Returns None when no category key can cover it (possible only when every
    candidate is restricted by a literal that/topic context).
    """
    if not input_tokens:
        return None
    seq: list = list(input_tokens)
    seq.append(THAT_BOUNDARY)
    seq.extend(that_tokens if that_tokens else (EMPTY_CONTEXT,))
    seq.append(TOPIC_BOUNDARY)
    seq.extend(topic_tokens if topic_tokens else (EMPTY_CONTEXT,))

    bindings: list[tuple[str, tuple[Token, ...]]] = []
    category = _walk(root, seq, 0, "input", bindings)
    if category is None:
        return None

    stars: dict[str, list[tuple[Token, ...]]] = {"input": [], "that": [], "topic": []}
    for segment, run in bindings:
        if len(run) == 1 and run[0] is EMPTY_CONTEXT:
            run = ()
        stars[segment].append(run)
    return MatchResult(
        category=category,
        input_stars=tuple(stars["input"]),
        that_stars=tuple(stars["that"]),
        topic_stars=tuple(stars["topic"]),
    )


def _run_limit(seq: list, start: int) -> int:
    """Number of consecutive non-boundary tokens available from ``start``."""
    i = start
    while i < len(seq) and not isinstance(seq[i], _Boundary):
        i += 1
    return i - start


def _walk(node: GraphNode, seq: list, i: int, segment: str, bindings: list) -> Category | None:
    if i == len(seq):
        return node.terminal

    head = seq[i]
    if isinstance(head, _Boundary):
        edge = _THAT_EDGE if head is THAT_BOUNDARY else _TOPIC_EDGE
        child = node.edges.get(edge)
        if child is None:
            return None
        next_segment = "that" if head is THAT_BOUNDARY else "topic"
        return _walk(child, seq, i + 1, next_segment, bindings)

    limit = _run_limit(seq, i)

    child = node.edges.get(_UNDERSCORE_EDGE)
    if child is not None:
        for length in range(1, limit + 1):
            bindings.append((segment, tuple(seq[i : i + length])))
            found = _walk(child, seq, i + length, segment, bindings)
            if found is not None:
                return found
            bindings.pop()

    child = node.edges.get(head.normalized)
    if child is not None:
        found = _walk(child, seq, i + 1, segment, bindings)
        if found is not None:
            return found

    child = node.edges.get(_STAR_EDGE)
    if child is not None:
        for length in range(1, limit + 1):
            bindings.append((segment, tuple(seq[i : i + length])))
            found = _walk(child, seq, i + length, segment, bindings)
            if found is not None:
                return found
            bindings.pop()

    return None
