"""Command line front end.

Exit codes: 0 success, 1 the check/replay/search failed, 2 unusable input
(parse or I/O errors).
"""

from __future__ import annotations

import argparse
import os
import sys

from .autoprove import Found, SearchConfig, auto_search
from .equivalence import TacticTrace, tactics_to_derivation
from .kernel import check_derivation
from .tactics import replay
from .textio import (
    ParseError,
    render_derivation,
    render_script,
    render_sequent,
    render_tactic,
    parse_derivation,
    parse_script,
    parse_theorem,
)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        raise SystemExit(2)


def _parse(parser, text: str):
    try:
        return parser(text)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        raise SystemExit(2)


def cmd_check(args) -> int:
    df = _parse(parse_derivation, _read(args.derivation))
    result = check_derivation(df.to_derivation())
    if result.ok:
        print(f"accepted: {len(df.lines)} line(s)")
        return 0
    print(f"rejected at line {result.line}: {result.reason} ({result.message})")
    return 1


def cmd_replay(args) -> int:
    thm = _parse(parse_theorem, _read(args.theorem))
    script = _parse(parse_script, _read(args.script))
    initial = thm.initial_sequent()
    result = replay(initial, script)

    if args.trace:
        for i, state in enumerate(result.trace, start=1):
            goals = " ; ".join(render_sequent(g) for g in state.goals)
            applied = render_tactic(script.tactics[i - 2]) if i > 1 else ""
            print(f"{i} | {goals} | {applied}".rstrip())

    if result.error is not None:
        print(
            f"error at step {result.error_step} "
            f"({render_tactic(script.tactics[result.error_step - 1])}): {result.error}",
            file=sys.stderr,
        )
        return 1
    if not result.success:
        print(f"script exhausted: {result.remaining} goal(s) remaining", file=sys.stderr)
        return 1
    print(f"replayed {len(script)} tactic(s); all goals discharged")
    if args.emit_derivation:
        trace = TacticTrace.from_replay(initial, result)
        derivation = tactics_to_derivation(trace)
        with open(args.emit_derivation, "w", encoding="utf-8") as fh:
            fh.write(render_derivation(derivation))
        print(f"derivation written to {args.emit_derivation}")
    return 0


def cmd_auto(args) -> int:
    thm = _parse(parse_theorem, _read(args.theorem))
    cfg = SearchConfig(max_depth=args.depth)
    outcome = auto_search(thm.initial_sequent(), cfg)
    if isinstance(outcome, Found):
        sys.stdout.write(render_script(outcome.script))
        return 0
    print(f"no proof found: {outcome.reason}", file=sys.stderr)
    return 1


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(persist_dir=args.persist)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="minilog",
        description="Tactic-based proof assistant for minimal first-order logic",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check a derivation file against the inference rules")
    p.add_argument("derivation")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("replay", help="run a tactic script against a theorem file")
    p.add_argument("theorem")
    p.add_argument("script")
    p.add_argument("--emit-derivation", metavar="OUT",
                   help="write the kernel derivation compiled from the run")
    p.add_argument("--trace", action="store_true", help="print every intermediate goal state")
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("auto", help="search for a proof automatically")
    p.add_argument("theorem")
    p.add_argument("--depth", type=int, default=12, help="per-branch tactic budget (default 12)")
    p.set_defaults(fn=cmd_auto)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=int(os.environ.get("MINILOG_PORT", "8621")))
    p.add_argument("--persist", metavar="DIR", default=None,
                   help="directory for append-only session logs")
    p.set_defaults(fn=cmd_serve)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
