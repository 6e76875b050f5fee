"""Command line front end: interactive chat, KB checking, script replay, serving."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import DEFAULT_FALLBACK, Engine, TurnTrace
from .evaluator import MAX_SRAI_DEPTH
from .harness import ScriptLoadError, discover_scripts, parse_script, run_script
from .loader import LoadReport, load_knowledge_base

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_LOAD = 2
EXIT_MISMATCH = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; this artifact reserves 2 for load errors."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_kb_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--kb", action="append", required=True, metavar="PATH",
                     help="knowledge file or directory (repeatable)")
    sub.add_argument("--props", metavar="FILE", help="bot properties file")


def _add_engine_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=None,
                     help="seed for random template choices")
    sub.add_argument("--fallback", default=DEFAULT_FALLBACK,
                     help="reply used when nothing matches")
    sub.add_argument("--max-srai-depth", type=int, default=MAX_SRAI_DEPTH,
                     metavar="N", help="recursion limit for <srai>")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aiml-engine", description="A pattern-matching chatterbot engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    chat = sub.add_parser("chat", help="interactive conversation")
    _add_kb_flags(chat)
    _add_engine_flags(chat)

    check = sub.add_parser("check", help="load and validate knowledge files")
    _add_kb_flags(check)

    replay = sub.add_parser("replay", help="run scripted conversations")
    replay.add_argument("--script", action="append", default=[], metavar="FILE",
                        help="script file (repeatable)")
    replay.add_argument("--scripts-dir", metavar="DIR",
                        help="directory searched for *.txt scripts")

    serve = sub.add_parser("serve", help="run the HTTP chat service")
    _add_kb_flags(serve)
    _add_engine_flags(serve)
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--bind", default="127.0.0.1")
    serve.add_argument("--static-dir", metavar="DIR", help="serve a web client from this directory")
    serve.add_argument("--snapshot-dir", metavar="DIR", help="persist sessions as JSON on each turn")
    return parser


def _print_report(report: LoadReport) -> None:
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    for error in report.errors:
        print(f"error: {error}", file=sys.stderr)


def _load_or_report(args):
    kb, report = load_knowledge_base(args.kb, args.props)
    _print_report(report)
    if kb is None:
        print("load failed", file=sys.stderr)
    return kb


def _cmd_chat(args) -> int:
    kb = _load_or_report(args)
    if kb is None:
        return EXIT_LOAD
    engine = Engine(kb, seed=args.seed, fallback=args.fallback,
                    max_srai_depth=args.max_srai_depth)
    show_trace = False
    print("Type :quit to leave, :trace to toggle diagnostics, :reload to reload.",
          file=sys.stderr)
    while True:
        print("> ", end="", file=sys.stderr, flush=True)
        try:
            line = input()
        except EOFError:
            print(file=sys.stderr)
            return EXIT_OK
        stripped = line.strip()
        if stripped == ":quit":
            return EXIT_OK
        if stripped == ":trace":
            show_trace = not show_trace
            print(f"trace {'on' if show_trace else 'off'}", file=sys.stderr)
            continue
        if stripped == ":reload":
            kb, report = load_knowledge_base(args.kb, args.props)
            _print_report(report)
            if kb is None:
                print("reload failed; keeping previous knowledge", file=sys.stderr)
            else:
                engine.kb = kb
                print(f"reloaded {report.category_count} categories", file=sys.stderr)
            continue
        if not stripped:
            continue
        trace = TurnTrace(raw_input=line)
        reply = engine.respond("cli", line, trace)
        if show_trace:
            for st in trace.sentences:
                matched = ", ".join(st.matched) if st.matched else "(fallback)"
                print(f"  [{st.input_text}] -> {matched}", file=sys.stderr)
                for srai_input in st.srai_inputs:
                    print(f"    srai: {srai_input}", file=sys.stderr)
        print(reply)


def _cmd_check(args) -> int:
    kb, report = load_knowledge_base(args.kb, args.props)
    _print_report(report)
    if kb is None:
        print("load failed", file=sys.stderr)
        return EXIT_LOAD
    print(f"ok: {report.files_loaded} files, {report.category_count} categories, "
          f"{len(report.warnings)} warnings")
    return EXIT_OK


def _cmd_replay(args) -> int:
    paths = [Path(p) for p in args.script]
    if args.scripts_dir:
        paths.extend(discover_scripts(Path(args.scripts_dir)))
    if not paths:
        print("replay: no scripts given (use --script or --scripts-dir)", file=sys.stderr)
        return EXIT_USAGE
    failed = False
    for path in paths:
        try:
            script = parse_script(path)
            mismatches = run_script(script)
        except (ScriptLoadError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_LOAD
        if mismatches:
            failed = True
            print(f"FAIL {path.name} ({len(mismatches)} mismatched turns)")
            for mismatch in mismatches:
                print(str(mismatch), file=sys.stderr)
        else:
            print(f"PASS {path.name}")
    return EXIT_MISMATCH if failed else EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    kb = _load_or_report(args)
    if kb is None:
        return EXIT_LOAD
    engine = Engine(kb, seed=args.seed, fallback=args.fallback,
                    max_srai_depth=args.max_srai_depth)
    snapshot_dir = Path(args.snapshot_dir) if args.snapshot_dir else None
    static_dir = Path(args.static_dir) if args.static_dir else None
    app = create_app(engine, static_dir=static_dir, snapshot_dir=snapshot_dir)
    uvicorn.run(app, host=args.bind, port=args.port, log_level="info")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "chat": _cmd_chat,
        "check": _cmd_check,
        "replay": _cmd_replay,
        "serve": _cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
