"""Concrete syntax: parsing and printing for every file format.

Formula grammar (ASCII only)::

    formula := imp
    imp     := or ("->" imp)?               right associative
    or      := and ("\\/" and)*             left associative
    and     := qf ("/\\" qf)*               left associative
    qf      := atom | "(" formula ")" | ("forall"|"exists") ident "." imp
    atom    := ident ("(" term ("," term)* ")")?
    term    := ident ("(" term ("," term)* ")")?

Precedence is /\\ over \\/ over ->, and a quantifier's scope extends as far
right as possible.  Predicates always take parenthesized arguments; a bare
identifier in term position is a variable.  "--" starts a comment running to
the end of the line.

Theorem files are `hyp <label> : <formula>` lines followed by one
`theorem <name> : <formula>` line.  Script files are period-terminated tactic
commands.  Derivation files are pipe-separated numbered lines
(`<i> | <ctx> |- <formula> | <rule> <premises> [<witness>]`), optionally
preceded by `ctx <name> = f1, f2, ...` alias definitions; an equivalent JSON
object format is accepted as well.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .core import (
    And,
    App,
    Atom,
    Exists,
    Forall,
    Formula,
    Imp,
    Or,
    Sequent,
    Term,
    Var,
)
from .kernel import Derivation, Justification, RULES
from . import tactics as tac


class ParseError(Exception):
    """Input text rejected; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col


class ArityError(ParseError):
    """A predicate or function symbol used with inconsistent arity."""


class UnknownTactic(ParseError):
    pass


class DuplicateLabel(ParseError):
    pass


class BadIndex(ParseError):
    """Derivation line numbering broken, or a premise cites a later line."""


# ---------------------------------------------------------------------------
# lexer


@dataclass(frozen=True)
class _Tok:
    kind: str  # IDENT INT ARROW AND OR LPAR RPAR COMMA DOT COLON EQ PIPE TURNSTILE EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>--[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>\d+)
  | (?P<arrow>->)
  | (?P<andop>/\\)
  | (?P<orop>\\/)
  | (?P<turnstile>\|-)
  | (?P<pipe>\|)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<comma>,)
  | (?P<dot>\.)
  | (?P<colon>:)
  | (?P<eq>=)
    """,
    re.VERBOSE,
)

_KIND = {
    "ident": "IDENT",
    "int": "INT",
    "arrow": "ARROW",
    "andop": "AND",
    "orop": "OR",
    "turnstile": "TURNSTILE",
    "pipe": "PIPE",
    "lpar": "LPAR",
    "rpar": "RPAR",
    "comma": "COMMA",
    "dot": "DOT",
    "colon": "COLON",
    "eq": "EQ",
}


def _lex(text: str, line_offset: int = 0) -> list[_Tok]:
    toks = []
    line = 1 + line_offset
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind in ("ws", "comment"):
            nl = value.count("\n")
            if nl:
                line += nl
                line_start = m.start() + value.rindex("\n") + 1
        else:
            toks.append(_Tok(_KIND[kind], value, line, m.start() - line_start + 1))
        pos = m.end()
    toks.append(_Tok("EOF", "", line, pos - line_start + 1))
    return toks


class _Arities:
    """Tracks predicate and function arities within one parsed unit."""

    def __init__(self):
        self.preds: dict[str, int] = {}
        self.fns: dict[str, int] = {}

    def note(self, table: dict[str, int], name: str, n: int, tok: _Tok, what: str):
        seen = table.setdefault(name, n)
        if seen != n:
            raise ArityError(
                f"{what} {name!r} used with {n} argument(s), previously {seen}",
                tok.line,
                tok.col,
            )


class _Parser:
    def __init__(self, toks: list[_Tok], arities: _Arities | None = None):
        self.toks = toks
        self.pos = 0
        self.arities = arities or _Arities()

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def expect(self, kind: str, what: str | None = None) -> _Tok:
        t = self.peek()
        if t.kind != kind:
            found = repr(t.text) if t.text else "end of input"
            raise ParseError(f"expected {what or kind}, found {found}", t.line, t.col)
        return self.next()

    def fail(self, message: str):
        t = self.peek()
        raise ParseError(message, t.line, t.col)

    def at_ident(self, word: str) -> bool:
        t = self.peek()
        return t.kind == "IDENT" and t.text == word

    # formulas ---------------------------------------------------------

    def formula(self) -> Formula:
        return self._imp()

    def _imp(self) -> Formula:
        left = self._or()
        if self.peek().kind == "ARROW":
            self.next()
            return Imp(left, self._imp())
        return left

    def _or(self) -> Formula:
        f = self._and()
        while self.peek().kind == "OR":
            self.next()
            f = Or(f, self._and())
        return f

    def _and(self) -> Formula:
        f = self._qf()
        while self.peek().kind == "AND":
            self.next()
            f = And(f, self._qf())
        return f

    def _qf(self) -> Formula:
        t = self.peek()
        if t.kind == "LPAR":
            self.next()
            f = self.formula()
            self.expect("RPAR", "')'")
            return f
        if t.kind == "IDENT" and t.text in ("forall", "exists"):
            self.next()
            var = self.expect("IDENT", "a variable").text
            self.expect("DOT", "'.' after the quantified variable")
            body = self._imp()
            return Forall(var, body) if t.text == "forall" else Exists(var, body)
        if t.kind == "IDENT":
            return self._atom()
        found = repr(t.text) if t.text else "end of input"
        self.fail(f"expected a formula, found {found}")

    def _atom(self) -> Formula:
        name = self.expect("IDENT")
        args: tuple[Term, ...] = ()
        if self.peek().kind == "LPAR":
            self.next()
            lst = [self.term()]
            while self.peek().kind == "COMMA":
                self.next()
                lst.append(self.term())
            self.expect("RPAR", "')'")
            args = tuple(lst)
        self.arities.note(self.arities.preds, name.text, len(args), name, "predicate")
        return Atom(name.text, args)

    def term(self) -> Term:
        name = self.expect("IDENT", "a term")
        if self.peek().kind == "LPAR":
            self.next()
            args = [self.term()]
            while self.peek().kind == "COMMA":
                self.next()
                args.append(self.term())
            self.expect("RPAR", "')'")
            self.arities.note(self.arities.fns, name.text, len(args), name, "function")
            return App(name.text, tuple(args))
        return Var(name.text)


def parse_formula(text: str) -> Formula:
    p = _Parser(_lex(text))
    f = p.formula()
    if p.peek().kind != "EOF":
        p.fail(f"trailing input {p.peek().text!r}")
    return f


def parse_term(text: str) -> Term:
    p = _Parser(_lex(text))
    t = p.term()
    if p.peek().kind != "EOF":
        p.fail(f"trailing input {p.peek().text!r}")
    return t


# ---------------------------------------------------------------------------
# rendering

# Minimal parenthesization.  Binding levels: -> is 1, \/ is 2, /\ is 3,
# atoms 5.  A quantifier binds weakest of all but needs no parentheses when
# nothing follows it in the output, which the `rightmost` flag tracks.


def render_term(t: Term) -> str:
    match t:
        case Var(name):
            return name
        case App(fn, args):
            return f"{fn}({', '.join(render_term(a) for a in args)})"
    raise TypeError(f"not a term: {t!r}")


def _render(f: Formula, need: int, rightmost: bool) -> str:
    match f:
        case Atom(pred, args):
            if args:
                return f"{pred}({', '.join(render_term(a) for a in args)})"
            return pred
        case Imp(a, b):
            wrap = 1 < need
            inner_right = True if wrap else rightmost
            s = f"{_render(a, 2, False)} -> {_render(b, 1, inner_right)}"
            return f"({s})" if wrap else s
        case Or(a, b):
            wrap = 2 < need
            inner_right = True if wrap else rightmost
            s = f"{_render(a, 2, False)} \\/ {_render(b, 3, inner_right)}"
            return f"({s})" if wrap else s
        case And(a, b):
            wrap = 3 < need
            inner_right = True if wrap else rightmost
            s = f"{_render(a, 3, False)} /\\ {_render(b, 4, inner_right)}"
            return f"({s})" if wrap else s
        case Forall(x, body) | Exists(x, body):
            word = "forall" if isinstance(f, Forall) else "exists"
            wrap = not rightmost
            s = f"{word} {x}. {_render(body, 1, True)}"
            return f"({s})" if wrap else s
    raise TypeError(f"not a formula: {f!r}")


def render_formula(f: Formula) -> str:
    return _render(f, 1, True)


def render_sequent(seq: Sequent, labels: bool = True) -> str:
    if labels:
        ctx = ", ".join(f"{label}: {render_formula(f)}" for label, f in seq.context)
    else:
        ctx = ", ".join(render_formula(f) for _, f in seq.context)
    left = f"{ctx} " if ctx else ""
    return f"{left}|- {render_formula(seq.conclusion)}"


# ---------------------------------------------------------------------------
# theorem files


@dataclass(frozen=True)
class TheoremFile:
    hypotheses: tuple[tuple[str, Formula], ...]
    goal_name: str
    goal: Formula

    def initial_sequent(self) -> Sequent:
        return Sequent(self.hypotheses, self.goal)


def parse_theorem(text: str) -> TheoremFile:
    p = _Parser(_lex(text))
    hyps: list[tuple[str, Formula]] = []
    seen: set[str] = set()
    while p.at_ident("hyp"):
        p.next()
        label = p.expect("IDENT", "a hypothesis label")
        p.expect("COLON", "':'")
        f = p.formula()
        if label.text in seen:
            raise DuplicateLabel(f"hypothesis label {label.text!r} reused", label.line, label.col)
        seen.add(label.text)
        hyps.append((label.text, f))
    if not p.at_ident("theorem"):
        p.fail("expected 'hyp' or 'theorem'")
    p.next()
    name = p.expect("IDENT", "a theorem name").text
    p.expect("COLON", "':'")
    goal = p.formula()
    if p.peek().kind != "EOF":
        p.fail(f"trailing input {p.peek().text!r}")
    return TheoremFile(tuple(hyps), name, goal)


def render_theorem(thm: TheoremFile) -> str:
    lines = [f"hyp {label} : {render_formula(f)}" for label, f in thm.hypotheses]
    lines.append(f"theorem {thm.goal_name} : {render_formula(thm.goal)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# script files


@dataclass(frozen=True)
class ScriptFile:
    tactics: tuple[tac.Tactic, ...] = ()

    def __len__(self):
        return len(self.tactics)

    def __iter__(self):
        return iter(self.tactics)


_TACTIC_WORDS = (
    "intro", "split", "left", "right", "exists", "apply", "destruct",
    "assert", "cut", "trivial",
)


def _parse_command(p: _Parser) -> tac.Tactic:
    head = p.peek()
    if head.kind != "IDENT" or head.text not in _TACTIC_WORDS:
        raise UnknownTactic(f"unknown tactic {head.text!r}", head.line, head.col)
    p.next()
    word = head.text
    if word in ("intro", "split", "left", "right", "trivial"):
        return {
            "intro": tac.Intro(),
            "split": tac.Split(),
            "left": tac.Left(),
            "right": tac.Right(),
            "trivial": tac.Trivial(),
        }[word]
    if word == "exists":
        return tac.ExistsWith(p.term())
    if word == "apply":
        label = p.expect("IDENT", "a hypothesis label").text
        with_term = None
        if p.at_ident("with"):
            p.next()
            with_term = p.term()
        return tac.Apply(label, with_term)
    if word == "destruct":
        return tac.Destruct(p.expect("IDENT", "a hypothesis label").text)
    if word == "assert":
        p.expect("LPAR", "'(' around the asserted formula")
        f = p.formula()
        p.expect("RPAR", "')'")
        as_label = None
        if p.at_ident("as"):
            p.next()
            as_label = p.expect("IDENT", "a label").text
        return tac.Assert(f, as_label)
    if word == "cut":
        p.expect("LPAR", "'(' around the cut formula")
        f = p.formula()
        p.expect("RPAR", "')'")
        return tac.Cut(f)
    raise AssertionError(word)


def parse_script(text: str) -> ScriptFile:
    toks = _lex(text)
    # split on periods outside parentheses; quantifier dots inside assert/cut
    # formulas always sit within parentheses
    commands: list[list[_Tok]] = []
    current: list[_Tok] = []
    depth = 0
    for t in toks:
        if t.kind == "EOF":
            break
        if t.kind == "LPAR":
            depth += 1
        elif t.kind == "RPAR":
            depth = max(0, depth - 1)
        if t.kind == "DOT" and depth == 0:
            if not current:
                raise ParseError("empty command", t.line, t.col)
            commands.append(current)
            current = []
        else:
            current.append(t)
    if current:
        t = current[-1]
        raise ParseError("command not terminated by '.'", t.line, t.col)
    parsed = []
    eof = toks[-1]
    for cmd in commands:
        p = _Parser(cmd + [eof])
        parsed.append(_parse_command(p))
        if p.peek().kind != "EOF":
            p.fail(f"trailing input {p.peek().text!r} in command")
    return ScriptFile(tuple(parsed))


def render_tactic(t: tac.Tactic) -> str:
    match t:
        case tac.Intro():
            return "intro"
        case tac.Split():
            return "split"
        case tac.Left():
            return "left"
        case tac.Right():
            return "right"
        case tac.Trivial():
            return "trivial"
        case tac.ExistsWith(term):
            return f"exists {render_term(term)}"
        case tac.Apply(label, with_term):
            if with_term is not None:
                return f"apply {label} with {render_term(with_term)}"
            return f"apply {label}"
        case tac.Destruct(label):
            return f"destruct {label}"
        case tac.Assert(formula, as_label):
            if as_label:
                return f"assert ({render_formula(formula)}) as {as_label}"
            return f"assert ({render_formula(formula)})"
        case tac.Cut(formula):
            return f"cut ({render_formula(formula)})"
    raise TypeError(f"not a tactic: {t!r}")


def render_script(script: ScriptFile) -> str:
    return "".join(f"{render_tactic(t)}.\n" for t in script.tactics)


# ---------------------------------------------------------------------------
# derivation files


@dataclass(frozen=True)
class DerivationLine:
    index: int
    context: tuple[Formula, ...]
    conclusion: Formula
    rule: str
    premises: tuple[int, ...] = ()
    witness: Term | None = None
    eigen: str | None = None


@dataclass(frozen=True)
class DerivationFile:
    lines: tuple[DerivationLine, ...] = ()

    def to_derivation(self) -> Derivation:
        """Attach fresh labels (h1, h2, ...) so the kernel can consume it."""
        out = []
        for ln in self.lines:
            ctx = tuple((f"h{i}", f) for i, f in enumerate(ln.context, start=1))
            out.append(
                (
                    Sequent(ctx, ln.conclusion),
                    Justification(ln.rule, ln.premises, ln.witness, ln.eigen),
                )
            )
        return Derivation(tuple(out))


_RULES_WITH_WITNESS = ("ForallE", "ExistsI")
_RULES_WITH_EIGEN = ("ForallI", "ExistsE")


def _parse_derivation_line(raw: str, lineno: int, aliases: dict[str, tuple[Formula, ...]],
                           arities: _Arities) -> DerivationLine:
    p = _Parser(_lex(raw, line_offset=lineno - 1), arities)
    index = int(p.expect("INT", "a line number").text)
    p.expect("PIPE", "'|'")
    ctx: list[Formula] = []
    if p.peek().kind != "TURNSTILE":
        while True:
            f = p.formula()
            if isinstance(f, Atom) and not f.args and f.pred in aliases:
                ctx.extend(aliases[f.pred])
            else:
                ctx.append(f)
            if p.peek().kind == "COMMA":
                p.next()
                continue
            break
    p.expect("TURNSTILE", "'|-'")
    conclusion = p.formula()
    p.expect("PIPE", "'|'")
    rule_tok = p.expect("IDENT", "a rule name")
    rule = rule_tok.text
    if rule not in RULES:
        raise ParseError(f"unknown rule {rule!r}", rule_tok.line, rule_tok.col)
    premises = []
    while p.peek().kind == "INT":
        premises.append(int(p.next().text))
    witness = None
    eigen = None
    if p.peek().kind == "IDENT":
        if rule in _RULES_WITH_EIGEN:
            eigen = p.next().text
        elif rule in _RULES_WITH_WITNESS:
            witness = p.term()
        else:
            p.fail(f"rule {rule} takes no witness")
    if p.peek().kind != "EOF":
        p.fail(f"trailing input {p.peek().text!r}")
    for prem in premises:
        if prem >= index or prem < 1:
            raise BadIndex(
                f"line {index} cites premise {prem}, which is not an earlier line",
                lineno,
                1,
            )
    return DerivationLine(index, tuple(ctx), conclusion, rule, tuple(premises), witness, eigen)


def parse_derivation(text: str) -> DerivationFile:
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        return _parse_derivation_json(text)
    aliases: dict[str, tuple[Formula, ...]] = {}
    arities = _Arities()
    lines: list[DerivationLine] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        bare = raw.strip()
        if not bare or bare.startswith("--"):
            continue
        if bare.startswith("ctx "):
            p = _Parser(_lex(bare[4:], line_offset=lineno - 1), arities)
            name = p.expect("IDENT", "an alias name").text
            p.expect("EQ", "'='")
            fs = [p.formula()]
            while p.peek().kind == "COMMA":
                p.next()
                fs.append(p.formula())
            if p.peek().kind != "EOF":
                p.fail("trailing input in context alias")
            if name in aliases:
                raise DuplicateLabel(f"context alias {name!r} redefined", lineno, 1)
            aliases[name] = tuple(fs)
            continue
        lines.append(_parse_derivation_line(bare, lineno, aliases, arities))
    for want, ln in enumerate(lines, start=1):
        if ln.index != want:
            raise BadIndex(f"expected line {want}, found {ln.index}", 0, 0)
    return DerivationFile(tuple(lines))


def _parse_derivation_json(text: str) -> DerivationFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"bad JSON: {e}", e.lineno, e.colno) from None
    if isinstance(obj, dict):
        obj = obj.get("lines", [])
    arities = _Arities()

    def fml(s):
        p = _Parser(_lex(s), arities)
        f = p.formula()
        if p.peek().kind != "EOF":
            p.fail("trailing input")
        return f

    lines = []
    for i, entry in enumerate(obj, start=1):
        index = int(entry.get("index", i))
        ctx = tuple(fml(s) for s in entry.get("context", []))
        conclusion = fml(entry["conclusion"])
        rule = entry["rule"]
        if rule not in RULES:
            raise ParseError(f"unknown rule {rule!r}")
        premises = tuple(int(x) for x in entry.get("premises", []))
        for prem in premises:
            if prem >= index or prem < 1:
                raise BadIndex(f"line {index} cites premise {prem}", 0, 0)
        witness = entry.get("witness")
        w = parse_term(witness) if witness else None
        eigen = entry.get("eigen") or None
        lines.append(DerivationLine(index, ctx, conclusion, rule, premises, w, eigen))
    for want, ln in enumerate(lines, start=1):
        if ln.index != want:
            raise BadIndex(f"expected line {want}, found {ln.index}", 0, 0)
    return DerivationFile(tuple(lines))


def derivation_to_file(d: Derivation) -> DerivationFile:
    lines = []
    for i, (seq, j) in enumerate(d.lines, start=1):
        lines.append(
            DerivationLine(i, seq.formulas(), seq.conclusion, j.rule, j.premises, j.witness, j.eigen)
        )
    return DerivationFile(tuple(lines))


def render_derivation(d: Derivation | DerivationFile) -> str:
    df = derivation_to_file(d) if isinstance(d, Derivation) else d
    rows = []
    for ln in df.lines:
        ctx = ", ".join(render_formula(f) for f in ln.context)
        just = ln.rule
        if ln.premises:
            just += " " + " ".join(str(p) for p in ln.premises)
        if ln.witness is not None:
            just += " " + render_term(ln.witness)
        if ln.eigen is not None:
            just += " " + ln.eigen
        left = f"{ctx} " if ctx else ""
        rows.append(f"{ln.index} | {left}|- {render_formula(ln.conclusion)} | {just}")
    return "\n".join(rows) + "\n"


def render_derivation_json(d: Derivation | DerivationFile) -> str:
    df = derivation_to_file(d) if isinstance(d, Derivation) else d
    out = []
    for ln in df.lines:
        out.append(
            {
                "index": ln.index,
                "context": [render_formula(f) for f in ln.context],
                "conclusion": render_formula(ln.conclusion),
                "rule": ln.rule,
                "premises": list(ln.premises),
                "witness": render_term(ln.witness) if ln.witness is not None else None,
                "eigen": ln.eigen,
            }
        )
    return json.dumps({"lines": out}, indent=2) + "\n"
