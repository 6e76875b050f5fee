from __future__ import annotations

from pathlib import Path

import pytest

from aiml_engine.graphmaster import GraphNode, insert
from aiml_engine.loader import load_knowledge_base, parse_document
from aiml_engine.model import BotProperties, KnowledgeBase

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def kb_from_text(text: str, source: str = "inline.aiml",
                 properties: BotProperties | None = None) -> KnowledgeBase:
    """Build a knowledge base from one document string; parse must be clean."""
    doc = parse_document(text, source)
    assert not doc.errors, [str(e) for e in doc.errors]
    root = GraphNode()
    for cat in doc.categories:
        insert(root, cat.path, cat)
    return KnowledgeBase(categories=tuple(doc.categories), index=root,
                         properties=properties or BotProperties(),
                         version=doc.version)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def make_kb():
    return kb_from_text


@pytest.fixture(scope="session")
def tables_kb() -> KnowledgeBase:
    kb, report = load_knowledge_base([FIXTURES / "tables"], FIXTURES / "bot.properties")
    assert kb is not None, [str(e) for e in report.errors]
    return kb
