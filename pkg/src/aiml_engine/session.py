"""Conversation state: predicates and a bounded history of bot replies."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .normalize import Sentence, normalize_input

THAT_HISTORY_LIMIT = 10


@dataclass
class Session:
    """State for one conversation.

    Predicates are the user-visible variables written by <set> and read by
    <get> and <condition>. ``that_history`` keeps the most recent bot replies,
    newest first, each already normalized into sentences.
    """

    session_id: str
    predicates: dict[str, str] = field(default_factory=dict)
    that_history: list[Sentence] = field(default_factory=list)
    created_at: float = field(default_factory=time.time)
    turn_count: int = 0

    def get_predicate(self, name: str) -> str:
        return self.predicates.get(name, "")

    def set_predicate(self, name: str, value: str) -> None:
        self.predicates[name] = value

    @property
    def topic(self) -> str:
        return self.predicates.get("topic", "")

    def that_sentence(self) -> Sentence | None:
        """The sentence a <that> pattern is matched against."""
        return self.that_history[0] if self.that_history else None

    def record_bot_reply(self, reply: str) -> None:
        """Push the final sentence of a reply onto the history.

        A reply with no sentences (empty or punctuation only) leaves the
        history untouched, so the previous that remains in force.
        """
        sentences = normalize_input(reply)
        if not sentences:
            return
        self.that_history.insert(0, sentences[-1])
        del self.that_history[THAT_HISTORY_LIMIT:]

    def snapshot(self) -> dict:
        return {
            "session_id": self.session_id,
            "predicates": dict(self.predicates),
            "that_history": [s.original_text() for s in self.that_history],
            "created_at": self.created_at,
            "turn_count": self.turn_count,
        }

    @classmethod
    def from_snapshot(cls, data: dict) -> Session:
        session = cls(
            session_id=data["session_id"],
            predicates=dict(data.get("predicates", {})),
            created_at=data.get("created_at", time.time()),
            turn_count=data.get("turn_count", 0),
        )
        for text in data.get("that_history", []):
            sentences = normalize_input(text)
            if sentences:
                session.that_history.append(sentences[-1])
        return session


class SessionStore:
    """In-memory session registry with optional JSON persistence."""

    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}

    def get(self, session_id: str) -> Session | None:
        return self._sessions.get(session_id)

    def get_or_create(self, session_id: str) -> Session:
        session = self._sessions.get(session_id)
        if session is None:
            session = Session(session_id)
            self._sessions[session_id] = session
        return session

    def drop(self, session_id: str) -> bool:
        return self._sessions.pop(session_id, None) is not None

    def ids(self) -> list[str]:
        return sorted(self._sessions)

    def __len__(self) -> int:
        return len(self._sessions)

    def __contains__(self, session_id: str) -> bool:
        return session_id in self._sessions

    def save(self, path: Path) -> None:
        data = {sid: s.snapshot() for sid, s in self._sessions.items()}
        path.write_text(json.dumps(data, indent=2, ensure_ascii=False), encoding="utf-8")

    @classmethod
    def load(cls, path: Path) -> SessionStore:
        store = cls()
        data = json.loads(path.read_text(encoding="utf-8"))
        for sid, snapshot in data.items():
            store._sessions[sid] = Session.from_snapshot(snapshot)
        return store
