"""Translating between tactic runs and kernel derivations, both directions.

A successful tactic run and a checked derivation prove exactly the same
judgments; this module realizes that equivalence constructively.

Forward (`tactics_to_derivation`): because new subgoals are always put in
front and tactics only ever touch the head goal, a successful script is a
preorder walk of an implicit proof tree.  Walking the script once therefore
recovers the tree, and each tactic maps to a fixed derivation-building
recipe: conclusion-analysis tactics become the matching introduction rule,
apply becomes a hypothesis line plus an elimination, destruct wraps the
subproof in the matching elimination (weakening it under the consumed
hypothesis first), and assert/cut become grafting respectively one modus
ponens.

Backward (`derivation_to_tactics`): each rule is simulated by a short tactic
recipe, using assert to re-establish premises of eliminations.  The
generator replays its own output while emitting it, so hypothesis labels are
always read off the live state rather than guessed, and a running renaming
maps the derivation's eigenvariables onto whatever fresh names the replay
actually picks.
"""

from __future__ import annotations

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
    match_against,
    substitute,
    substitute_many,
    substitute_term,
)
from .core import ANY, Exists as ExistsFormula
from .kernel import (
    Derivation,
    Node,
    check_derivation,
    from_tree,
    graft_tree,
    to_tree,
    weaken_tree,
)
from . import tactics as tac
from .tactics import GoalState, ReplayResult, Tactic, apply_tactic, auto_labels, replay
from .textio import ScriptFile


class MalformedTrace(Exception):
    """Recorded states disagree with actually replaying the tactics."""


@dataclass(frozen=True)
class TacticTrace:
    """A successful run: the starting judgment and every (tactic, state)
    step, ending in the empty goal sequence."""

    initial: Sequent
    steps: tuple[tuple[Tactic, GoalState], ...]

    @property
    def tactics(self) -> tuple[Tactic, ...]:
        return tuple(t for t, _ in self.steps)

    @classmethod
    def from_replay(cls, initial: Sequent, result: ReplayResult) -> "TacticTrace":
        if not result.success:
            raise MalformedTrace("replay did not end with all goals discharged")
        steps = tuple(
            (state.history[-1][0], state) for state in result.trace[1:]
        )
        return cls(initial, steps)

    def validate(self) -> None:
        state = GoalState.initial(self.initial)
        for t, recorded in self.steps:
            state = apply_tactic(state, t)
            if state.goals != recorded.goals:
                raise MalformedTrace(f"state after {t!r} does not match the recording")
        if not state.terminal:
            raise MalformedTrace("trace does not end in the terminal state")


def _hyp(seq: Sequent) -> Node:
    return Node(seq, "Hyp")


def _subgoals(goal: Sequent, t: Tactic) -> tuple[Sequent, ...]:
    return apply_tactic(GoalState.initial(goal), t).goals


def tactics_to_derivation(trace: TacticTrace) -> Derivation:
    """Compile a successful run into a derivation of its initial judgment
    that the kernel accepts."""
    trace.validate()
    stream = iter(trace.tactics)

    def build(goal: Sequent) -> Node:
        t = next(stream)
        subs = _subgoals(goal, t)
        concl = goal.conclusion
        match t:
            case tac.Trivial():
                return _hyp(goal)
            case tac.Apply(label, with_term):
                f = goal.get(label)
                if isinstance(f, Imp):
                    minor = build(subs[0])
                    return Node(goal, "ImpE", (_hyp(Sequent(goal.context, f)), minor))
                assert isinstance(f, Forall)
                witness = with_term
                if witness is None:
                    found = match_against(f.body, f.var, concl)
                    witness = Var(f.var) if found is ANY else found
                return Node(goal, "ForallE", (_hyp(Sequent(goal.context, f)),), witness=witness)
            case tac.Intro():
                sub = build(subs[0])
                if isinstance(concl, Imp):
                    return Node(goal, "ImpI", (sub,))
                assert isinstance(concl, Forall)
                eigen = tac.intro_variable(goal)
                return Node(goal, "ForallI", (sub,), eigen=eigen)
            case tac.Split():
                return Node(goal, "AndI", (build(subs[0]), build(subs[1])))
            case tac.Left():
                return Node(goal, "OrIL", (build(subs[0]),))
            case tac.Right():
                return Node(goal, "OrIR", (build(subs[0]),))
            case tac.ExistsWith(term):
                return Node(goal, "ExistsI", (build(subs[0]),), witness=term)
            case tac.Destruct(label):
                f = goal.get(label)
                match f:
                    case And(a, b):
                        sub = weaken_tree(build(subs[0]), (f,))
                        dleft = Node(Sequent(goal.context, a), "AndEL", (_hyp(Sequent(goal.context, f)),))
                        dright = Node(Sequent(goal.context, b), "AndER", (_hyp(Sequent(goal.context, f)),))
                        step = graft_tree(sub, weaken_tree(dleft, (b,)))
                        return graft_tree(step, dright)
                    case Or(a, b):
                        born = weaken_tree(build(subs[0]), (f,))
                        brot = weaken_tree(build(subs[1]), (f,))
                        return Node(goal, "OrE", (_hyp(Sequent(goal.context, f)), born, brot))
                    case ExistsFormula(_, _):
                        eigen = tac.destruct_variable(goal, label)
                        minor = weaken_tree(build(subs[0]), (f,))
                        return Node(goal, "ExistsE",
                                    (_hyp(Sequent(goal.context, f)), minor), eigen=eigen)
                raise MalformedTrace(f"destruct on unexpected hypothesis {f!r}")
            case tac.Assert(_, _):
                lemma = build(subs[0])
                main = build(subs[1])
                return graft_tree(main, lemma)
            case tac.Cut(_):
                major = build(subs[0])
                minor = build(subs[1])
                return Node(goal, "ImpE", (major, minor))
        raise MalformedTrace(f"unexpected tactic {t!r}")

    root = build(trace.initial)
    leftover = next(stream, None)
    if leftover is not None:
        raise MalformedTrace("trace continues past the terminal state")
    return from_tree(root)


# ---------------------------------------------------------------------------
# derivations back to scripts


def _read_opened_variable(body: Formula, var: str, after: Formula) -> str:
    """Given a quantified body and the formula the replay opened it into,
    read off which variable the engine picked."""
    found = match_against(body, var, after)
    if found is ANY:
        return var
    assert isinstance(found, Var)
    return found.name


def derivation_to_tactics(d: Derivation) -> ScriptFile:
    """Compile a checked derivation (with nothing assumed) into a script that
    replays its final judgment down to no goals."""
    res = check_derivation(d)
    if not res.ok:
        raise ValueError(f"input derivation does not check: {res.reason} at line {res.line}")
    if d.assumed:
        raise ValueError("cannot produce a script for a derivation with assumed judgments")
    tree = to_tree(d)
    goal = d.final()

    emitted: list[Tactic] = []
    state = GoalState.initial(goal)

    def emit(t: Tactic) -> None:
        nonlocal state
        state = apply_tactic(state, t)
        emitted.append(t)

    def fresh_label() -> str:
        return auto_labels(state.goals[0].labels())[0]

    def gen(node: Node, ren: dict[str, Term]) -> None:
        """Discharge the head goal, which is the image of `node` under the
        renaming `ren` (and possibly extra hypotheses)."""
        head = state.goals[0]
        concl = node.sequent.conclusion
        match node.rule:
            case "Hyp":
                emit(tac.Trivial())
            case "ImpI":
                emit(tac.Intro())
                gen(node.children[0], ren)
            case "AndI":
                emit(tac.Split())
                gen(node.children[0], ren)
                gen(node.children[1], ren)
            case "OrIL":
                emit(tac.Left())
                gen(node.children[0], ren)
            case "OrIR":
                emit(tac.Right())
                gen(node.children[0], ren)
            case "ForallI":
                before = head.conclusion
                assert isinstance(before, Forall)
                emit(tac.Intro())
                picked = _read_opened_variable(before.body, before.var, state.goals[0].conclusion)
                eigen = node.eigen or (concl.var if isinstance(concl, Forall) else None)
                assert eigen is not None
                gen(node.children[0], {**ren, eigen: Var(picked)})
            case "ExistsI":
                assert node.witness is not None
                emit(tac.ExistsWith(substitute_term(node.witness, ren)))
                gen(node.children[0], ren)
            case "ImpE":
                major, minor = _orient_imp(node)
                label = fresh_label()
                emit(tac.Assert(substitute_many(major.sequent.conclusion, ren), label))
                gen(major, ren)
                emit(tac.Apply(label))
                gen(minor, ren)
            case "AndEL" | "AndER":
                (sub,) = node.children
                label = fresh_label()
                emit(tac.Assert(substitute_many(sub.sequent.conclusion, ren), label))
                gen(sub, ren)
                emit(tac.Destruct(label))
                emit(tac.Trivial())
            case "OrE":
                major, left, right = node.children
                label = fresh_label()
                emit(tac.Assert(substitute_many(major.sequent.conclusion, ren), label))
                gen(major, ren)
                emit(tac.Destruct(label))
                gen(left, ren)
                gen(right, ren)
            case "ForallE":
                (sub,) = node.children
                assert node.witness is not None
                label = fresh_label()
                emit(tac.Assert(substitute_many(sub.sequent.conclusion, ren), label))
                gen(sub, ren)
                emit(tac.Apply(label, substitute_term(node.witness, ren)))
            case "ExistsE":
                major, minor = node.children
                label = fresh_label()
                asserted = substitute_many(major.sequent.conclusion, ren)
                emit(tac.Assert(asserted, label))
                gen(major, ren)
                before_entries = set(state.goals[0].context)
                emit(tac.Destruct(label))
                # destruct may recycle the consumed label, so diff whole entries
                new_hyp = next(
                    f for entry in state.goals[0].context
                    if entry not in before_entries
                    for f in (entry[1],)
                )
                assert isinstance(asserted, ExistsFormula)
                picked = _read_opened_variable(asserted.body, asserted.var, new_hyp)
                eigen = node.eigen
                if eigen is None and isinstance(major.sequent.conclusion, ExistsFormula):
                    eigen = major.sequent.conclusion.var
                assert eigen is not None
                gen(minor, {**ren, eigen: Var(picked)})
            case "Assumed":
                raise ValueError("assumed judgments cannot be replayed")
            case other:
                raise ValueError(f"unexpected rule {other!r}")

    gen(tree, {})
    if not state.terminal:
        raise AssertionError("generated script left goals open")
    return ScriptFile(tuple(emitted))


def _orient_imp(node: Node) -> tuple[Node, Node]:
    """Order the two premises of a modus ponens as (implication, antecedent)."""
    p1, p2 = node.children
    goal = node.sequent.conclusion
    for major, minor in ((p1, p2), (p2, p1)):
        c = major.sequent.conclusion
        if isinstance(c, Imp) and alpha_eq(c.left, minor.sequent.conclusion) and alpha_eq(
            c.right, goal
        ):
            return major, minor
    raise ValueError("modus ponens premises do not fit together")
