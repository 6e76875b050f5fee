"""Turn-level orchestration: one user input in, one bot reply out."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field

from .evaluator import MAX_SRAI_DEPTH, EvalError, SentenceTrace, respond_sentence
from .model import KnowledgeBase
from .normalize import collapse_whitespace, normalize_input
from .session import Session, SessionStore

logger = logging.getLogger(__name__)

DEFAULT_FALLBACK = "I have no answer for that."


@dataclass
class TurnTrace:
    """Diagnostics for one whole turn."""

    raw_input: str
    sentences: list[SentenceTrace] = field(default_factory=list)
    reply: str = ""


class Engine:
    """Drives conversations against one knowledge base.

    The random generator is owned by the engine so a seeded engine replays
    identically: same inputs, same session order, same replies.
    """

    def __init__(self, kb: KnowledgeBase, seed: int | None = None,
                 fallback: str = DEFAULT_FALLBACK,
                 max_srai_depth: int = MAX_SRAI_DEPTH):
        self.kb = kb
        self.rng = random.Random(seed)
        self.fallback = fallback
        self.max_srai_depth = max_srai_depth
        self.sessions = SessionStore()

    def respond(self, session_id: str, text: str, trace: TurnTrace | None = None) -> str:
        """Answer one input for the given session, creating it on first use.

        Every sentence of the input is answered independently; sentences that
        match nothing, or whose evaluation fails, produce the fallback line.
        The final sentence of the joined reply becomes the next that context.
        """
        session = self.sessions.get_or_create(session_id)
        session.turn_count += 1
        sentences = normalize_input(text)
        parts: list[str] = []
        for sentence in sentences:
            st = SentenceTrace(input_text=sentence.normalized_text())
            try:
                reply = respond_sentence(sentence, self.kb, session, self.rng, st,
                                         max_depth=self.max_srai_depth)
            except EvalError as exc:
                logger.warning("evaluation failed for %r: %s", sentence.normalized_text(), exc)
                reply = None
            if reply is None:
                reply = self.fallback
                st.fell_back = True
            st.reply = reply
            if trace is not None:
                trace.sentences.append(st)
            if reply:
                parts.append(reply)
        reply = collapse_whitespace(" ".join(parts))
        if not sentences:
            reply = self.fallback
        session.record_bot_reply(reply)
        if trace is not None:
            trace.reply = reply
        return reply
