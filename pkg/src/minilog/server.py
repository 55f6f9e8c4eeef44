"""HTTP session service: interactive proof state over JSON.

Endpoints::

    POST /sessions                {"theorem": "<theorem file text>"}
    GET  /sessions/{id}
    POST /sessions/{id}/tactic    {"text": "intro."}
    POST /sessions/{id}/undo
    GET  /sessions/{id}/script    -> text/plain
    GET  /sessions/{id}/derivation-> text/plain (terminal sessions only, 409 otherwise)

Tactic failures come back as 422 with {"step", "code", "message"}; unknown
sessions are 404.  The script is the state: with --persist each session is
an append-only log of its theorem plus commands, and state is rebuilt by
replaying on load.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .core import And, Forall, Imp, Or, Sequent
from .core import Atom, Exists as ExistsFormula
from .equivalence import TacticTrace, tactics_to_derivation
from .tactics import EmptyHistory, GoalState, Tactic, TacticError, apply_tactic, replay, undo
from .textio import (
    ParseError,
    ScriptFile,
    TheoremFile,
    parse_script,
    parse_theorem,
    render_derivation,
    render_formula,
    render_script,
    render_sequent,
    render_tactic,
)

_PERSIST_SEPARATOR = "#script"


def _shape(f) -> str:
    match f:
        case Atom(_, _):
            return "atom"
        case Imp(_, _):
            return "imp"
        case And(_, _):
            return "and"
        case Or(_, _):
            return "or"
        case Forall(_, _):
            return "forall"
        case ExistsFormula(_, _):
            return "exists"
    return "unknown"


def _goal_json(seq: Sequent) -> dict:
    return {
        "render": render_sequent(seq),
        "conclusion": {"text": render_formula(seq.conclusion), "kind": _shape(seq.conclusion)},
        "hypotheses": [
            {"label": label, "text": render_formula(f), "kind": _shape(f)}
            for label, f in seq.context
        ],
    }


@dataclass
class Session:
    id: str
    theorem: TheoremFile
    state: GoalState
    tactics: list[Tactic] = field(default_factory=list)
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def initial_sequent(self) -> Sequent:
        return self.theorem.initial_sequent()

    def to_json(self) -> dict:
        return {
            "goals": [render_sequent(g) for g in self.state.goals],
            "goal_details": [_goal_json(g) for g in self.state.goals],
            "script": render_script(ScriptFile(tuple(self.tactics))),
            "terminal": self.state.terminal,
        }


class SessionStore:
    def __init__(self, persist_dir: str | None = None):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self.persist_dir = Path(persist_dir) if persist_dir else None
        if self.persist_dir:
            self.persist_dir.mkdir(parents=True, exist_ok=True)
            self._load_all()

    # persistence ------------------------------------------------------

    def _log_path(self, sid: str) -> Path:
        assert self.persist_dir is not None
        return self.persist_dir / f"{sid}.log"

    def _append(self, sid: str, line: str):
        if self.persist_dir:
            with open(self._log_path(sid), "a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def _load_all(self):
        assert self.persist_dir is not None
        for path in sorted(self.persist_dir.glob("*.log")):
            sid = path.stem
            text = path.read_text(encoding="utf-8")
            if _PERSIST_SEPARATOR not in text:
                continue
            theorem_text, _, command_log = text.partition(_PERSIST_SEPARATOR)
            theorem = parse_theorem(theorem_text)
            session = Session(sid, theorem, GoalState.initial(theorem.initial_sequent()))
            for raw in command_log.splitlines():
                raw = raw.strip()
                if not raw:
                    continue
                if raw == "undo":
                    session.state = undo(session.state)
                    session.tactics.pop()
                    continue
                (t,) = parse_script(raw).tactics
                session.state = apply_tactic(session.state, t)
                session.tactics.append(t)
            self._sessions[sid] = session

    # access -----------------------------------------------------------

    def create(self, theorem_text: str) -> Session:
        theorem = parse_theorem(theorem_text)
        sid = uuid.uuid4().hex[:12]
        session = Session(sid, theorem, GoalState.initial(theorem.initial_sequent()))
        with self._lock:
            self._sessions[sid] = session
        if self.persist_dir:
            with open(self._log_path(sid), "w", encoding="utf-8") as fh:
                fh.write(theorem_text.rstrip("\n") + "\n" + _PERSIST_SEPARATOR + "\n")
        return session

    def get(self, sid: str) -> Session | None:
        with self._lock:
            return self._sessions.get(sid)


class TheoremIn(BaseModel):
    theorem: str


class TacticIn(BaseModel):
    text: str


def _error(status: int, code: str, message: str, step: int | None = None) -> JSONResponse:
    return JSONResponse(status_code=status, content={"step": step, "code": code, "message": message})


def create_app(persist_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="minilog", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(persist_dir)
    app.state.store = store

    def lookup(sid: str) -> Session | JSONResponse:
        session = store.get(sid)
        if session is None:
            return _error(404, "UnknownSession", f"no session {sid!r}")
        return session

    @app.post("/sessions")
    def create_session(body: TheoremIn):
        try:
            session = store.create(body.theorem)
        except ParseError as e:
            return _error(422, type(e).__name__, str(e))
        return {"id": session.id, "state": session.to_json()}

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        session = lookup(sid)
        if isinstance(session, JSONResponse):
            return session
        return session.to_json()

    @app.post("/sessions/{sid}/tactic")
    def post_tactic(sid: str, body: TacticIn):
        session = lookup(sid)
        if isinstance(session, JSONResponse):
            return session
        with session.lock:
            try:
                script = parse_script(body.text)
            except ParseError as e:
                return _error(422, type(e).__name__, str(e))
            state = session.state
            applied = []
            for offset, t in enumerate(script.tactics):
                step = len(session.tactics) + offset + 1
                try:
                    state = apply_tactic(state, t)
                except TacticError as e:
                    return _error(422, e.code, str(e), step=step)
                applied.append(t)
            session.state = state
            session.tactics.extend(applied)
            session.updated = time.time()
            for t in applied:
                store._append(sid, f"{render_tactic(t)}.")
            return session.to_json()

    @app.post("/sessions/{sid}/undo")
    def post_undo(sid: str):
        session = lookup(sid)
        if isinstance(session, JSONResponse):
            return session
        with session.lock:
            try:
                session.state = undo(session.state)
            except EmptyHistory as e:
                return _error(422, e.code, str(e))
            session.tactics.pop()
            session.updated = time.time()
            store._append(sid, "undo")
            return session.to_json()

    @app.get("/sessions/{sid}/script")
    def get_script(sid: str):
        session = lookup(sid)
        if isinstance(session, JSONResponse):
            return session
        return PlainTextResponse(render_script(ScriptFile(tuple(session.tactics))))

    @app.get("/sessions/{sid}/derivation")
    def get_derivation(sid: str):
        session = lookup(sid)
        if isinstance(session, JSONResponse):
            return session
        with session.lock:
            if not session.state.terminal:
                return _error(409, "NotTerminal", "the session still has open goals")
            result = replay(session.initial_sequent(), ScriptFile(tuple(session.tactics)))
            trace = TacticTrace.from_replay(session.initial_sequent(), result)
            derivation = tactics_to_derivation(trace)
            return PlainTextResponse(render_derivation(derivation))

    return app
