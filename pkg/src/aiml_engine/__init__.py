"""A pattern-matching chatterbot engine.

Knowledge lives in XML documents pairing input patterns with reply templates.
The engine normalizes user input, matches it against a prefix trie with
wildcard priorities, and evaluates the winning template, which may rewrite
the input and recurse, draw a random variant, or read and write conversation
state.
"""

from __future__ import annotations

from .engine import DEFAULT_FALLBACK, Engine, TurnTrace
from .evaluator import MAX_SRAI_DEPTH, EvalContext, EvalError, SentenceTrace, respond_sentence
from .graphmaster import GraphNode, MatchResult, insert, match
from .loader import Issue, LoadReport, ParsedDocument, load_knowledge_base, parse_document
from .model import (
    STAR,
    UNDERSCORE,
    Bot,
    BotProperties,
    Category,
    Condition,
    Get,
    KnowledgeBase,
    PatternPath,
    Random,
    Sequence,
    Set,
    SourceRef,
    Srai,
    Star,
    Text,
    Think,
    Token,
    Wildcard,
    Word,
    validate_category,
)
from .normalize import Sentence, collapse_whitespace, normalize_input, normalize_pattern_text, tokenize_words
from .session import Session, SessionStore

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_FALLBACK",
    "MAX_SRAI_DEPTH",
    "STAR",
    "UNDERSCORE",
    "Bot",
    "BotProperties",
    "Category",
    "Condition",
    "Engine",
    "EvalContext",
    "EvalError",
    "Get",
    "GraphNode",
    "Issue",
    "KnowledgeBase",
    "LoadReport",
    "MatchResult",
    "ParsedDocument",
    "PatternPath",
    "Random",
    "Sentence",
    "SentenceTrace",
    "Sequence",
    "Session",
    "SessionStore",
    "Set",
    "SourceRef",
    "Srai",
    "Star",
    "Text",
    "Think",
    "Token",
    "TurnTrace",
    "Wildcard",
    "Word",
    "collapse_whitespace",
    "insert",
    "load_knowledge_base",
    "match",
    "normalize_input",
    "normalize_pattern_text",
    "parse_document",
    "respond_sentence",
    "tokenize_words",
    "validate_category",
]
