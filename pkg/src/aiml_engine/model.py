"""Domain types shared by the whole interpreter.

Tokens, pattern paths, categories and template trees are immutable values;
a loaded knowledge base is never mutated after construction, so it can be
shared freely between concurrent conversations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union
from xml.sax.saxutils import escape, quoteattr

if TYPE_CHECKING:
    from .graphmaster import GraphNode

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Token:
    """One input word: the uppercase matching form plus the form the user typed."""

    normalized: str
    original: str

    def __repr__(self) -> str:
        return f"Token({self.normalized!r})"


@dataclass(frozen=True)
class Word:
    """A literal pattern word (uppercase, punctuation-free)."""

    text: str


@dataclass(frozen=True)
class Wildcard:
    """A pattern wildcard; matches one or more words."""

    symbol: str  # "*" or "_"


STAR = Wildcard("*")
UNDERSCORE = Wildcard("_")

PatternElement = Union[Word, Wildcard]


@dataclass(frozen=True)
class PatternPath:
    """Full match key of a category: input pattern plus that/topic context.

    A category that declares no <that>/<topic> context defaults both
    segments to a single ``*`` wildcard, so it fires regardless of the
    previous bot reply or the current topic.
    """

    input: tuple[PatternElement, ...]
    that: tuple[PatternElement, ...] = (STAR,)
    topic: tuple[PatternElement, ...] = (STAR,)


@dataclass(frozen=True)
class SourceRef:
    """Where a category came from: file name plus 1-based position in the file."""

    file: str
    ordinal: int
    line: int = 0

    def __str__(self) -> str:
        return f"{self.file}#{self.ordinal}"


# --- template tree -----------------------------------------------------------

@dataclass(frozen=True)
class Text:
    value: str


@dataclass(frozen=True)
class Star:
    """Reference to the n-th wildcard capture of the matched input (1-based)."""

    index: int = 1


@dataclass(frozen=True)
class Srai:
    """Re-enter matching with the rendered child text as fresh input."""

    children: tuple[TemplateNode, ...]


@dataclass(frozen=True)
class Random:
    """Uniform choice between response items, one per <li>."""

    items: tuple[tuple[TemplateNode, ...], ...]


@dataclass(frozen=True)
class Set:
    """Store the rendered child text as a predicate; evaluates to that text."""

    name: str
    children: tuple[TemplateNode, ...]


@dataclass(frozen=True)
class Get:
    name: str


@dataclass(frozen=True)
class Think:
    """Evaluate children for their side effects, discarding the output."""

    children: tuple[TemplateNode, ...]


@dataclass(frozen=True)
class Condition:
    """Render children only while the named predicate equals the given value."""

    name: str
    value: str
    children: tuple[TemplateNode, ...]


@dataclass(frozen=True)
class Bot:
    name: str


@dataclass(frozen=True)
class Sequence:
    """Mixed text/element template content in document order."""

    children: tuple[TemplateNode, ...]


TemplateNode = Union[Text, Star, Srai, Random, Set, Get, Think, Condition, Bot, Sequence]


@dataclass(frozen=True)
class Category:
    """One stimulus-response knowledge unit."""

    path: PatternPath
    template: TemplateNode
    source: SourceRef


class BotProperties:
    """Bot identity values rendered by <bot name="..."/>.

    Lookup of an undefined property yields the empty string and a logged
    warning rather than an error.
    """

    def __init__(self, values: dict[str, str] | None = None):
        self._values = dict(values or {})

    def get(self, name: str) -> str:
        if name not in self._values:
            logger.warning("undefined bot property %r", name)
            return ""
        return self._values[name]

    def as_dict(self) -> dict[str, str]:
        return dict(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __contains__(self, name: str) -> bool:
        return name in self._values

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BotProperties) and self._values == other._values


@dataclass(frozen=True)
class KnowledgeBase:
    """Immutable set of categories plus the trie index and bot properties."""

    categories: tuple[Category, ...]
    index: "GraphNode"
    properties: BotProperties
    version: str | None = None
    encoding: str = "UTF-8"


def validate_category(cat: Category) -> list[str]:
    """Return every violated structural rule of a parsed category.

    An empty list means the category is well formed.
    """
    problems: list[str] = []
    if not cat.path.input:
        problems.append("pattern must be non-empty")
    if not cat.path.that:
        problems.append("that pattern must be non-empty")
    if not cat.path.topic:
        problems.append("topic pattern must be non-empty")
    _validate_template(cat.template, problems)
    return problems


def _validate_template(node: TemplateNode, problems: list[str]) -> None:
    if isinstance(node, Star):
        if node.index < 1:
            problems.append(f"star index must be >= 1 (got {node.index})")
    elif isinstance(node, Random):
        if not node.items:
            problems.append("random must contain at least one li")
        for item in node.items:
            for child in item:
                _validate_template(child, problems)
    elif isinstance(node, (Srai, Set, Think, Condition, Sequence)):
        for child in node.children:
            _validate_template(child, problems)


# --- canonical serialization -------------------------------------------------
#
# Any template tree in canonical form (no nested/singleton Sequence, no
# adjacent Text nodes, whitespace already collapsed) serializes to AIML text
# that re-parses into an equal tree.

def pattern_to_text(elements: tuple[PatternElement, ...]) -> str:
    parts = []
    for el in elements:
        parts.append(el.symbol if isinstance(el, Wildcard) else el.text)
    return " ".join(parts)


def template_to_text(node: TemplateNode) -> str:
    """Serialize a template tree to the inner content of a <template> element."""
    if isinstance(node, Text):
        return escape(node.value)
    if isinstance(node, Star):
        return "<star/>" if node.index == 1 else f'<star index="{node.index}"/>'
    if isinstance(node, Srai):
        return f"<srai>{_children_to_text(node.children)}</srai>"
    if isinstance(node, Random):
        items = "".join(f"<li>{_children_to_text(item)}</li>" for item in node.items)
        return f"<random>{items}</random>"
    if isinstance(node, Set):
        return f"<set name={quoteattr(node.name)}>{_children_to_text(node.children)}</set>"
    if isinstance(node, Get):
        return f"<get name={quoteattr(node.name)}/>"
    if isinstance(node, Think):
        return f"<think>{_children_to_text(node.children)}</think>"
    if isinstance(node, Condition):
        return (
            f"<condition name={quoteattr(node.name)} value={quoteattr(node.value)}>"
            f"{_children_to_text(node.children)}</condition>"
        )
    if isinstance(node, Bot):
        return f"<bot name={quoteattr(node.name)}/>"
    if isinstance(node, Sequence):
        return _children_to_text(node.children)
    raise TypeError(f"not a template node: {node!r}")


def _children_to_text(children: tuple[TemplateNode, ...]) -> str:
    return "".join(template_to_text(child) for child in children)


def category_to_text(cat: Category) -> str:
    lines = ["<category>"]
    lines.append(f"  <pattern>{escape(pattern_to_text(cat.path.input))}</pattern>")
    if cat.path.that != (STAR,):
        lines.append(f"  <that>{escape(pattern_to_text(cat.path.that))}</that>")
    lines.append(f"  <template>{template_to_text(cat.template)}</template>")
    lines.append("</category>")
    body = "\n".join(lines)
    if cat.path.topic != (STAR,):
        topic = quoteattr(pattern_to_text(cat.path.topic))
        body = f"<topic name={topic}>\n{body}\n</topic>"
    return body


def document_to_text(
    categories: list[Category] | tuple[Category, ...],
    version: str = "1.0.1",
    encoding: str = "UTF-8",
) -> str:
    """Serialize categories to a canonical, loadable AIML document."""
    parts = [f'<aiml version="{version}" encoding="{encoding}">']
    parts.extend(category_to_text(cat) for cat in categories)
    parts.append("</aiml>")
    return "\n".join(parts) + "\n"
