"""The tactic engine: goal sequences and the transitions between them.

A state is an ordered sequence of open goals; the head is the current goal
and every tactic rewrites the head only, leaving the tail untouched.  The
empty sequence is the single terminal state, and nothing applies there.
Each application records (tactic, previous state) so sessions can undo.

Tactic groups:

* conclusion analysis -- intro, split, left, right, exists: run the matching
  introduction rule backwards on the goal formula;
* premise analysis -- apply on an implication (keep the hypothesis, prove
  its antecedent), destruct on a conjunction, disjunction or existential
  (consume the hypothesis, expose its parts);
* lemma assertion -- assert and cut, which invent an intermediate goal;
* discarding -- trivial (the goal is a hypothesis) and apply on a universal
  hypothesis whose instance is the goal; these remove the head outright.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import (
    And,
    Forall,
    Formula,
    Imp,
    Or,
    Sequent,
    Term,
    Var,
    alpha_eq,
    context_free_vars,
    free_vars,
    fresh_var,
    match_against,
    substitute,
)
from .core import Exists as ExistsFormula


# ---------------------------------------------------------------------------
# tactic vocabulary


@dataclass(frozen=True)
class Intro:
    pass


@dataclass(frozen=True)
class Split:
    pass


@dataclass(frozen=True)
class Left:
    pass


@dataclass(frozen=True)
class Right:
    pass


@dataclass(frozen=True)
class ExistsWith:
    term: Term


@dataclass(frozen=True)
class Apply:
    label: str
    with_term: Term | None = None


@dataclass(frozen=True)
class Destruct:
    label: str


@dataclass(frozen=True)
class Assert:
    formula: Formula
    as_label: str | None = None


@dataclass(frozen=True)
class Cut:
    formula: Formula


@dataclass(frozen=True)
class Trivial:
    pass


Tactic = (
    Intro | Split | Left | Right | ExistsWith | Apply | Destruct | Assert | Cut | Trivial
)


# ---------------------------------------------------------------------------
# errors


class TacticError(Exception):
    code = "TacticError"


class TacticMismatch(TacticError):
    """Tactic shape does not fit the head goal (e.g. split on an atom)."""

    code = "TacticMismatch"


class UnknownLabel(TacticError):
    code = "UnknownLabel"


class NoMatch(TacticError):
    """apply on a universal hypothesis found no instantiation."""

    code = "NoMatch"


class NotTrivial(TacticError):
    code = "NotTrivial"


class TerminalState(TacticError):
    """No transitions exist out of the empty goal sequence."""

    code = "TerminalState"


class LabelInUse(TacticError):
    code = "LabelInUse"


class EmptyHistory(TacticError):
    code = "EmptyHistory"


# ---------------------------------------------------------------------------
# goal states


@dataclass(frozen=True)
class GoalState:
    """A sequence of open goals plus the trail that produced it."""

    goals: tuple[Sequent, ...]
    history: tuple[tuple[Tactic, "GoalState"], ...] = ()

    @property
    def terminal(self) -> bool:
        return not self.goals

    @classmethod
    def initial(cls, goal: Sequent) -> "GoalState":
        return cls((goal,))


_AUTO_LABEL = re.compile(r"^H(\d+)$")


def auto_labels(taken: tuple[str, ...] | set[str], count: int = 1) -> list[str]:
    """The next `count` automatic hypothesis labels: H1, H2, ... continuing
    past the highest one already present."""
    high = 0
    for label in taken:
        m = _AUTO_LABEL.match(label)
        if m:
            high = max(high, int(m.group(1)))
    return [f"H{high + k}" for k in range(1, count + 1)]


def _with_hyp(seq: Sequent, f: Formula, conclusion: Formula) -> Sequent:
    (label,) = auto_labels(seq.labels())
    return Sequent(seq.context + ((label, f),), conclusion)


def _replace_hyp(seq: Sequent, label: str, parts: list[Formula],
                 conclusion: Formula | None = None) -> Sequent:
    """Splice `parts` (freshly labelled) in place of one hypothesis."""
    rest = [entry for entry in seq.context if entry[0] != label]
    names = auto_labels(tuple(l for l, _ in rest), len(parts))
    pos = next(i for i, entry in enumerate(seq.context) if entry[0] == label)
    new = rest[:pos] + list(zip(names, parts)) + rest[pos:]
    return Sequent(tuple(new), conclusion if conclusion is not None else seq.conclusion)


def intro_variable(goal: Sequent) -> str:
    """The variable a goal `forall x. A` is opened with: x itself unless that
    collides with a free variable of the context."""
    concl = goal.conclusion
    assert isinstance(concl, Forall)
    ctx_fv = context_free_vars(goal.formulas())
    if concl.var in ctx_fv:
        return fresh_var(concl.var, ctx_fv | free_vars(concl.body))
    return concl.var


def destruct_variable(goal: Sequent, label: str) -> str:
    """The variable an existential hypothesis is opened with: the bound name
    unless it collides with the remaining context or the conclusion."""
    f = goal.get(label)
    assert isinstance(f, ExistsFormula)
    others = tuple(g for l, g in goal.context if l != label)
    avoid = context_free_vars(others) | free_vars(goal.conclusion)
    if f.var in avoid:
        # also keep clear of the body's own free variables, otherwise the
        # rename would conflate distinct variables
        return fresh_var(f.var, avoid | free_vars(f.body))
    return f.var


def apply_tactic(state: GoalState, t: Tactic) -> GoalState:
    """One transition.  Rewrites the head goal according to the tactic and
    returns the successor state; raises a TacticError subclass when the
    tactic does not apply."""
    if state.terminal:
        raise TerminalState("no goals left")
    head, tail = state.goals[0], state.goals[1:]
    concl = head.conclusion
    new_goals: tuple[Sequent, ...]

    match t:
        case Intro():
            match concl:
                case Imp(a, b):
                    new_goals = (_with_hyp(head, a, b),)
                case Forall(x, body):
                    x2 = intro_variable(head)
                    new_goals = (Sequent(head.context, substitute(body, x, Var(x2))),)
                case _:
                    raise TacticMismatch("intro needs an implication or universal goal")
        case Split():
            if not isinstance(concl, And):
                raise TacticMismatch("split needs a conjunction goal")
            new_goals = (Sequent(head.context, concl.left), Sequent(head.context, concl.right))
        case Left():
            if not isinstance(concl, Or):
                raise TacticMismatch("left needs a disjunction goal")
            new_goals = (Sequent(head.context, concl.left),)
        case Right():
            if not isinstance(concl, Or):
                raise TacticMismatch("right needs a disjunction goal")
            new_goals = (Sequent(head.context, concl.right),)
        case ExistsWith(term):
            if not isinstance(concl, ExistsFormula):
                raise TacticMismatch("exists needs an existential goal")
            new_goals = (Sequent(head.context, substitute(concl.body, concl.var, term)),)
        case Apply(label, with_term):
            f = head.get(label)
            if f is None:
                raise UnknownLabel(f"no hypothesis {label!r}")
            match f:
                case Imp(a, b):
                    if not alpha_eq(b, concl):
                        raise TacticMismatch(
                            f"apply {label}: the goal is not the consequent of {label}"
                        )
                    new_goals = (Sequent(head.context, a),)
                case Forall(x, body):
                    if with_term is not None:
                        if not alpha_eq(substitute(body, x, with_term), concl):
                            raise NoMatch(f"apply {label}: the given term does not yield the goal")
                    else:
                        found = match_against(body, x, concl)
                        if found is None:
                            raise NoMatch(f"apply {label}: the goal is not an instance of {label}")
                    new_goals = ()
                case _:
                    raise TacticMismatch("apply needs an implication or universal hypothesis")
        case Destruct(label):
            f = head.get(label)
            if f is None:
                raise UnknownLabel(f"no hypothesis {label!r}")
            match f:
                case And(a, b):
                    new_goals = (_replace_hyp(head, label, [a, b]),)
                case Or(a, b):
                    new_goals = (
                        _replace_hyp(head, label, [a]),
                        _replace_hyp(head, label, [b]),
                    )
                case ExistsFormula(x, body):
                    x2 = destruct_variable(head, label)
                    new_goals = (_replace_hyp(head, label, [substitute(body, x, Var(x2))]),)
                case _:
                    raise TacticMismatch(
                        "destruct needs a conjunction, disjunction or existential hypothesis"
                    )
        case Assert(formula, as_label):
            if as_label is not None and head.get(as_label) is not None:
                raise LabelInUse(f"label {as_label!r} already names a hypothesis")
            label = as_label or auto_labels(head.labels())[0]
            new_goals = (
                Sequent(head.context, formula),
                Sequent(head.context + ((label, formula),), concl),
            )
        case Cut(formula):
            new_goals = (
                Sequent(head.context, Imp(formula, concl)),
                Sequent(head.context, formula),
            )
        case Trivial():
            if not any(alpha_eq(f, concl) for f in head.formulas()):
                raise NotTrivial("the goal is not among the hypotheses")
            new_goals = ()
        case _:
            raise TacticMismatch(f"unrecognized tactic {t!r}")

    return GoalState(new_goals + tail, state.history + ((t, state),))


def undo(state: GoalState) -> GoalState:
    if not state.history:
        raise EmptyHistory("nothing to undo")
    return state.history[-1][1]


# ---------------------------------------------------------------------------
# replay


@dataclass(frozen=True)
class ReplayResult:
    """The full state trace of running a script, plus how it ended.

    `success` means every goal was discharged.  `error` holds the first
    tactic failure (with its 1-based step) and `exhausted` flags a script
    that ran out of commands with goals remaining.
    """

    trace: tuple[GoalState, ...]
    success: bool
    error: TacticError | None = None
    error_step: int | None = None
    exhausted: bool = False

    @property
    def final(self) -> GoalState:
        return self.trace[-1]

    @property
    def remaining(self) -> int:
        return len(self.final.goals)


def replay(initial: Sequent, script) -> ReplayResult:
    """Fold the script over the singleton state [initial] and report the
    trace."""
    state = GoalState.initial(initial)
    trace = [state]
    for step, t in enumerate(script, start=1):
        try:
            state = apply_tactic(state, t)
        except TacticError as e:
            return ReplayResult(tuple(trace), False, e, step)
        trace.append(state)
    if state.terminal:
        return ReplayResult(tuple(trace), True)
    return ReplayResult(tuple(trace), False, exhausted=True)
