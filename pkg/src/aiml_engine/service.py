"""HTTP chat service: sessions and messages over a small JSON API."""

from __future__ import annotations

import asyncio
import json
import logging
import secrets
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .engine import Engine, TurnTrace
from .session import SessionStore

logger = logging.getLogger(__name__)

MAX_BODY_BYTES = 16 * 1024
SNAPSHOT_FILE = "sessions.json"


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


def create_app(engine: Engine, static_dir: Path | None = None,
               snapshot_dir: Path | None = None) -> FastAPI:
    """Build the service around one engine instance.

    Requests for different sessions may interleave, but messages to the same
    session are answered strictly in arrival order. With ``snapshot_dir`` set,
    sessions persist as JSON after every turn and reload on startup.
    """
    app = FastAPI(title="aiml-engine", docs_url=None, redoc_url=None)
    locks: dict[str, asyncio.Lock] = {}
    snapshot_path = snapshot_dir / SNAPSHOT_FILE if snapshot_dir else None

    if snapshot_path and snapshot_path.is_file():
        try:
            engine.sessions = SessionStore.load(snapshot_path)
            logger.info("restored %d sessions from %s", len(engine.sessions), snapshot_path)
        except (OSError, ValueError, KeyError) as exc:
            logger.warning("could not restore sessions from %s: %s", snapshot_path, exc)

    def save_snapshot() -> None:
        if snapshot_path is None:
            return
        snapshot_path.parent.mkdir(parents=True, exist_ok=True)
        engine.sessions.save(snapshot_path)

    def lock_for(session_id: str) -> asyncio.Lock:
        lock = locks.get(session_id)
        if lock is None:
            lock = locks[session_id] = asyncio.Lock()
        return lock

    @app.get("/api/health")
    async def health() -> dict:
        return {
            "status": "ok",
            "categories": len(engine.kb.categories),
            "properties": len(engine.kb.properties),
            "sessions": len(engine.sessions),
            "version": engine.kb.version,
        }

    @app.post("/api/sessions", status_code=201)
    async def create_session() -> dict:
        session_id = secrets.token_urlsafe(16)
        engine.sessions.get_or_create(session_id)
        save_snapshot()
        return {"session_id": session_id}

    @app.get("/api/sessions/{session_id}")
    async def get_session(session_id: str):
        session = engine.sessions.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        that = session.that_sentence()
        return {
            "session_id": session.session_id,
            "predicates": dict(session.predicates),
            "topic": session.topic,
            "turn_count": session.turn_count,
            "that": that.original_text() if that else "",
        }

    @app.delete("/api/sessions/{session_id}")
    async def delete_session(session_id: str):
        if not engine.sessions.drop(session_id):
            return _error(404, "unknown session")
        locks.pop(session_id, None)
        save_snapshot()
        return {"deleted": session_id}

    @app.post("/api/sessions/{session_id}/messages")
    async def post_message(session_id: str, request: Request):
        body = await request.body()
        if len(body) > MAX_BODY_BYTES:
            return _error(413, f"body exceeds {MAX_BODY_BYTES} bytes")
        try:
            payload = json.loads(body)
        except (UnicodeDecodeError, json.JSONDecodeError):
            return _error(400, "body must be a JSON object")
        if not isinstance(payload, dict) or not isinstance(payload.get("text"), str):
            return _error(400, "body must be a JSON object with a string 'text' field")
        text = payload["text"]
        if not text.strip():
            return _error(422, "message text is empty")
        if engine.sessions.get(session_id) is None:
            return _error(404, "unknown session")
        async with lock_for(session_id):
            if engine.sessions.get(session_id) is None:
                return _error(404, "unknown session")
            trace = TurnTrace(raw_input=text)
            reply = engine.respond(session_id, text, trace)
            save_snapshot()
        matched = [source for st in trace.sentences for source in st.matched]
        stars = [star for st in trace.sentences for star in st.stars]
        return {
            "reply": reply,
            "matched": matched,
            "stars": stars,
            "fallback": any(st.fell_back for st in trace.sentences),
        }

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")

    return app
