"""Template evaluation: turn a matched category into reply text."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field

from . import model
from .graphmaster import MatchResult, match
from .model import KnowledgeBase, Token
from .normalize import Sentence, collapse_whitespace, normalize_input, tokenize_words
from .session import Session

logger = logging.getLogger(__name__)

MAX_SRAI_DEPTH = 64


class EvalError(Exception):
    """Evaluation cannot proceed (runaway recursion chains, mostly)."""


@dataclass
class SentenceTrace:
    """What happened while answering one input sentence."""

    input_text: str
    matched: list[str] = field(default_factory=list)
    srai_inputs: list[str] = field(default_factory=list)
    stars: list[str] = field(default_factory=list)
    reply: str = ""
    fell_back: bool = False


@dataclass
class EvalContext:
    """Everything a template can read or write while rendering."""

    kb: KnowledgeBase
    session: Session
    rng: random.Random
    stars: MatchResult
    depth: int = 0
    max_depth: int = MAX_SRAI_DEPTH
    trace: SentenceTrace | None = None


def _star_text(runs: tuple[tuple[Token, ...], ...], index: int) -> str:
    if index < 1 or index > len(runs):
        logger.warning("star index %d out of range (%d captures)", index, len(runs))
        return ""
    return " ".join(t.original for t in runs[index - 1])


def render(node: model.TemplateNode, ctx: EvalContext) -> str:
    """Evaluate one template node to text."""
    if isinstance(node, model.Text):
        return node.value
    if isinstance(node, model.Sequence):
        return "".join(render(child, ctx) for child in node.children)
    if isinstance(node, model.Star):
        return _star_text(ctx.stars.input_stars, node.index)
    if isinstance(node, model.Srai):
        inner = "".join(render(child, ctx) for child in node.children)
        return _srai(collapse_whitespace(inner), ctx)
    if isinstance(node, model.Random):
        if not node.items:
            return ""
        choice = ctx.rng.randrange(len(node.items))
        return "".join(render(child, ctx) for child in node.items[choice])
    if isinstance(node, model.Set):
        value = "".join(render(child, ctx) for child in node.children)
        ctx.session.set_predicate(node.name, value)
        return value
    if isinstance(node, model.Get):
        if node.name in ctx.session.predicates:
            return ctx.session.predicates[node.name]
        logger.warning("predicate %r is not set", node.name)
        return ""
    if isinstance(node, model.Think):
        for child in node.children:
            render(child, ctx)
        return ""
    if isinstance(node, model.Condition):
        if ctx.session.get_predicate(node.name).strip() == node.value.strip():
            return "".join(render(child, ctx) for child in node.children)
        return ""
    if isinstance(node, model.Bot):
        return ctx.kb.properties.get(node.name)
    raise TypeError(f"unknown template node: {node!r}")


def render_template(category: model.Category, ctx: EvalContext) -> str:
    return collapse_whitespace(render(category.template, ctx))


def _srai(text: str, ctx: EvalContext) -> str:
    """Feed rewritten text back through matching as a fresh input."""
    if ctx.depth + 1 > ctx.max_depth:
        raise EvalError(f"srai recursion exceeded {ctx.max_depth} levels at input {text!r}")
    if ctx.trace is not None:
        ctx.trace.srai_inputs.append(text)
    sentences = normalize_input(text)
    parts = []
    for sentence in sentences:
        reply = _respond_tokens(sentence.tokens, ctx.kb, ctx.session, ctx.rng,
                                ctx.depth + 1, ctx.trace, ctx.max_depth)
        if reply is None:
            logger.warning("srai input %r found no category", sentence.normalized_text())
            continue
        if reply:
            parts.append(reply)
    return " ".join(parts)


def _context_tokens(session: Session) -> tuple[tuple[Token, ...], tuple[Token, ...]]:
    that = session.that_sentence()
    that_tokens = that.tokens if that is not None else ()
    topic_tokens = tokenize_words(session.topic)
    return that_tokens, topic_tokens


def _respond_tokens(tokens, kb: KnowledgeBase, session: Session, rng: random.Random,
                    depth: int, trace: SentenceTrace | None,
                    max_depth: int = MAX_SRAI_DEPTH) -> str | None:
    that_tokens, topic_tokens = _context_tokens(session)
    result = match(kb.index, tokens, that_tokens, topic_tokens)
    if result is None:
        return None
    if trace is not None:
        trace.matched.append(str(result.category.source))
        if depth == 0:
            trace.stars.extend(
                " ".join(t.original for t in run) for run in result.input_stars)
    ctx = EvalContext(kb=kb, session=session, rng=rng, stars=result,
                      depth=depth, max_depth=max_depth, trace=trace)
    return render_template(result.category, ctx)


def respond_sentence(sentence: Sentence, kb: KnowledgeBase, session: Session,
                     rng: random.Random, trace: SentenceTrace | None = None,
                     max_depth: int = MAX_SRAI_DEPTH) -> str | None:
    """Answer one normalized sentence; None when nothing matches."""
    return _respond_tokens(sentence.tokens, kb, session, rng, 0, trace, max_depth)
