"""Replay scripted conversations against the engine and diff the replies.

Script format, line oriented:

    # seed: 7                 engine seed for the run (default 0)
    # kb: tables/greet.aiml   knowledge source, relative to the script; repeatable
    # props: bot.properties   bot properties file, relative to the script
    > HELLO                   user turn
    < Hi there!               expected reply (bare "<" expects an empty reply)
    <~ Hi!                    alternative expectation for the previous turn

Blank lines and other ``#`` lines are comments. Each ``>`` starts a new turn;
expectation lines attach to the turn above them. A turn accepts any one of
its expectations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .engine import Engine
from .loader import load_knowledge_base


class ScriptLoadError(Exception):
    """The script file itself is unusable (syntax or missing knowledge)."""


@dataclass
class Turn:
    line: int
    user: str
    expected: list[str] = field(default_factory=list)


@dataclass
class Script:
    path: Path
    seed: int = 0
    kb_paths: list[Path] = field(default_factory=list)
    properties_path: Path | None = None
    turns: list[Turn] = field(default_factory=list)


@dataclass(frozen=True)
class Mismatch:
    script: str
    line: int
    user: str
    expected: tuple[str, ...]
    actual: str

    def __str__(self) -> str:
        wanted = " | ".join(repr(e) for e in self.expected)
        return (f"{self.script}:{self.line}: > {self.user}\n"
                f"  expected {wanted}\n"
                f"  actual   {self.actual!r}")


def parse_script(path: Path) -> Script:
    script = Script(path=path)
    base = path.parent
    turn: Turn | None = None
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            key, sep, value = body.partition(":")
            if not sep:
                continue
            key = key.strip().lower()
            value = value.strip()
            if key == "seed":
                try:
                    script.seed = int(value)
                except ValueError:
                    raise ScriptLoadError(f"{path.name}:{lineno}: seed must be an integer, got {value!r}")
            elif key == "kb":
                script.kb_paths.append(base / value)
            elif key == "props":
                script.properties_path = base / value
            continue
        if stripped.startswith("<~"):
            if turn is None:
                raise ScriptLoadError(f"{path.name}:{lineno}: expectation before any user turn")
            turn.expected.append(stripped[2:].strip())
        elif stripped.startswith("<"):
            if turn is None:
                raise ScriptLoadError(f"{path.name}:{lineno}: expectation before any user turn")
            turn.expected.append(stripped[1:].strip())
        elif stripped.startswith(">"):
            turn = Turn(line=lineno, user=stripped[1:].strip())
            script.turns.append(turn)
        else:
            raise ScriptLoadError(f"{path.name}:{lineno}: unrecognized line {stripped!r}")
    if not script.kb_paths:
        raise ScriptLoadError(f"{path.name}: no '# kb:' line")
    if not script.turns:
        raise ScriptLoadError(f"{path.name}: no user turns")
    return script


def run_script(script: Script, session_id: str = "replay") -> list[Mismatch]:
    """Run one script in a fresh engine; one mismatch per failed turn."""
    kb, report = load_knowledge_base(script.kb_paths, script.properties_path)
    if kb is None:
        details = "; ".join(str(e) for e in report.errors)
        raise ScriptLoadError(f"{script.path.name}: knowledge base failed to load: {details}")
    engine = Engine(kb, seed=script.seed)
    mismatches: list[Mismatch] = []
    for turn in script.turns:
        actual = engine.respond(session_id, turn.user)
        if turn.expected and actual not in turn.expected:
            mismatches.append(Mismatch(
                script=script.path.name,
                line=turn.line,
                user=turn.user,
                expected=tuple(turn.expected),
                actual=actual,
            ))
    return mismatches


def discover_scripts(root: Path) -> list[Path]:
    return sorted(root.rglob("*.txt"))
