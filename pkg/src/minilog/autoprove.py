"""Automated backward search over the tactic transition system.

The prover works the goal queue the way a person would: try to discard the
head goal outright (it is a hypothesis, or an instance of a universal
hypothesis), otherwise decompose it by its main connective, otherwise work
on a hypothesis, and as a last resort assert a lemma.  Lemma candidates are
deliberately restricted to consequents of implication hypotheses --
inventing arbitrary intermediate formulas is hopeless, and this small pool
is what makes chains like "to get s, get r, and for r case-split on q or r"
reachable.

Search is iterative deepening on the per-branch tactic count.  Within one
depth limit each goal is solved independently (tactics never look past the
head goal, so solutions compose), and results are memoized per judgment.
Memoized scripts are stored with hypotheses referenced by formula rather
than by label, then re-bound to concrete labels when the final script is
assembled.
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
    alpha_eq,
    canonical,
    formula_set,
    free_vars,
    in_context,
    match_against,
    AmbiguousMatch,
)
from .core import App, Atom, Exists as ExistsFormula, Var
from . import tactics as tac
from .tactics import GoalState, TacticError, apply_tactic
from .textio import ScriptFile


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int = 12
    max_nodes: int = 100_000
    lemma_policy: str = "implication-consequents"  # or "none"

    def __post_init__(self):
        if self.max_depth < 1 or self.max_nodes < 1:
            raise ValueError("search bounds must be positive")
        if self.lemma_policy not in ("implication-consequents", "none"):
            raise ValueError(f"unknown lemma policy {self.lemma_policy!r}")


@dataclass(frozen=True)
class Found:
    script: ScriptFile


@dataclass(frozen=True)
class NotFound:
    reason: str  # DepthExhausted | NodesExhausted


DEPTH_EXHAUSTED = "DepthExhausted"
NODES_EXHAUSTED = "NodesExhausted"


class _Exhausted(Exception):
    pass


# abstract moves: hypotheses are picked by formula, not label, so solved
# goals can be reused across states that carry different labels
@dataclass(frozen=True)
class _ByFormula:
    kind: str  # "apply" | "destruct"
    formula: Formula
    with_term: Term | None = None


_Move = tac.Tactic | _ByFormula


def _bind(goal: Sequent, move: _Move) -> tac.Tactic:
    if not isinstance(move, _ByFormula):
        return move
    for label, f in goal.context:
        if alpha_eq(f, move.formula):
            if move.kind == "apply":
                return tac.Apply(label, move.with_term)
            return tac.Destruct(label)
    raise AssertionError("memoized hypothesis not present in goal context")


def term_pool(goal: Sequent) -> list[Term]:
    """Subterms of the sequent whose variables are all free at their
    occurrence; candidates for instantiating quantifiers."""
    pool: list[Term] = []
    seen: set[Term] = set()

    def add(t: Term, bound: frozenset[str]):
        if free_vars(t) & bound:
            pass
        elif t not in seen:
            seen.add(t)
            pool.append(t)
        if isinstance(t, App):
            for a in t.args:
                add(a, bound)

    def walk(f: Formula, bound: frozenset[str]):
        match f:
            case Atom(_, args):
                for a in args:
                    add(a, bound)
            case Imp(a, b) | And(a, b) | Or(a, b):
                walk(a, bound)
                walk(b, bound)
            case Forall(x, body) | ExistsFormula(x, body):
                walk(body, bound | {x})

    for f in goal.formulas():
        walk(f, frozenset())
    walk(goal.conclusion, frozenset())
    return pool


def _candidates(goal: Sequent, policy: str) -> list[_Move]:
    moves: list[_Move] = []
    concl = goal.conclusion

    # discarding moves first
    if any(alpha_eq(f, concl) for f in goal.formulas()):
        moves.append(tac.Trivial())
    for _, f in goal.context:
        if isinstance(f, Forall):
            try:
                if match_against(f.body, f.var, concl) is not None:
                    moves.append(_ByFormula("apply", f))
            except AmbiguousMatch:
                pass

    # conclusion analysis
    match concl:
        case Imp(_, _) | Forall(_, _):
            moves.append(tac.Intro())
        case And(_, _):
            moves.append(tac.Split())
        case Or(_, _):
            moves.append(tac.Left())
            moves.append(tac.Right())
        case ExistsFormula(_, _):
            for t in term_pool(goal):
                moves.append(tac.ExistsWith(t))

    # premise analysis
    for _, f in goal.context:
        match f:
            case Imp(_, b) if alpha_eq(b, concl):
                moves.append(_ByFormula("apply", f))
            case And(_, _) | Or(_, _) | ExistsFormula(_, _):
                moves.append(_ByFormula("destruct", f))

    # lemma assertion
    if policy == "implication-consequents":
        queued: set[Formula] = set()
        for _, f in goal.context:
            if isinstance(f, Imp):
                lemma = f.right
                key = canonical(lemma)
                if key in queued:
                    continue
                if alpha_eq(lemma, concl) or in_context(lemma, goal.formulas()):
                    continue
                queued.add(key)
                moves.append(tac.Assert(lemma))
    return moves


def _goal_key(goal: Sequent):
    return (formula_set(goal.formulas()), canonical(goal.conclusion))


def auto_search(goal: Sequent, cfg: SearchConfig = SearchConfig()) -> Found | NotFound:
    """Search for a script proving the goal.  Every returned script replays
    to the terminal state; NotFound reports which budget ran out."""
    cache: dict[tuple, tuple[int, list[_Move] | None]] = {}
    nodes = 0

    def solve(goal: Sequent, budget: int) -> list[_Move] | None:
        """Shortest-by-branch-depth abstract script discharging this single
        goal within `budget` tactics along any branch, or None."""
        nonlocal nodes
        key = _goal_key(goal)
        hit = cache.get(key)
        if hit is not None:
            tried, script = hit
            if script is not None and _depth_of(script) <= budget:
                return script
            if script is None and tried >= budget:
                return None
        if budget <= 0:
            return None
        nodes += 1
        if nodes > cfg.max_nodes:
            raise _Exhausted
        best: list[_Move] | None = None
        for move in _candidates(goal, cfg.lemma_policy):
            concrete = _bind(goal, move)
            try:
                subgoals = apply_tactic(GoalState.initial(goal), concrete).goals
            except TacticError:
                continue
            parts: list[list[_Move]] = []
            for sub in subgoals:
                solved = solve(sub, budget - 1)
                if solved is None:
                    break
                parts.append(solved)
            else:
                best = [move]
                for p in parts:
                    best.extend(p)
                break
        cache[key] = (budget, best)
        return best

    script: list[_Move] | None = None
    try:
        for limit in range(1, cfg.max_depth + 1):
            script = solve(goal, limit)
            if script is not None:
                break
    except _Exhausted:
        return NotFound(NODES_EXHAUSTED)
    if script is None:
        return NotFound(DEPTH_EXHAUSTED)

    # re-bind formula references to the labels of the actual run
    state = GoalState.initial(goal)
    concrete_script: list[tac.Tactic] = []
    for move in script:
        t = _bind(state.goals[0], move)
        state = apply_tactic(state, t)
        concrete_script.append(t)
    assert state.terminal
    return Found(ScriptFile(tuple(concrete_script)))


def _depth_of(script: list[_Move]) -> int:
    """Maximum per-branch tactic count of an abstract script, recomputed from
    its tree structure (each move knows how many subgoals it creates)."""
    # replaying is the simplest honest way to recover branch depths, but the
    # scripts cached here are abstract; instead walk the implicit tree using
    # the arity of each move
    pos = 0

    def walk() -> int:
        nonlocal pos
        move = script[pos]
        pos += 1
        n = _arity(move)
        deepest = 0
        for _ in range(n):
            deepest = max(deepest, walk())
        return 1 + deepest

    depth = walk()
    assert pos == len(script)
    return depth


def _arity(move: _Move) -> int:
    match move:
        case tac.Trivial():
            return 0
        case _ByFormula("apply", f, _):
            return 0 if isinstance(f, Forall) else 1
        case _ByFormula("destruct", f, _):
            return 2 if isinstance(f, Or) else 1
        case tac.Split() | tac.Assert(_, _) | tac.Cut(_):
            return 2
        case _:
            return 1
