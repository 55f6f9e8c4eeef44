"""Syntax of minimal first-order logic: terms, formulas, sequents.

The connective set is implication, conjunction, disjunction and the two
quantifiers; there is deliberately no negation and no falsum constructor.
Formula equality throughout the package means alpha-equivalence, never raw
structural equality, so that machine-generated renamings of bound variables
stay interchangeable with what the user wrote.

All values are immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    """A term variable."""

    name: str


@dataclass(frozen=True)
class App:
    """A function application; constants are zero-argument applications."""

    fn: str
    args: tuple["Term", ...] = ()


Term = Union[Var, App]


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Atom:
    """Predicate applied to terms; a zero-argument atom is a propositional
    variable."""

    pred: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Atom, Imp, And, Or, Forall, Exists]

BINARY = (Imp, And, Or)
QUANTIFIERS = (Forall, Exists)


# ---------------------------------------------------------------------------
# sequents


@dataclass(frozen=True)
class Sequent:
    """A judgment: labelled hypotheses on the left, one conclusion on the
    right.

    The context is stored as an ordered list so files and interactive
    sessions stay readable, but membership and comparison elsewhere treat it
    as a set of formulas.  Labels must be pairwise distinct.
    """

    context: tuple[tuple[str, Formula], ...]
    conclusion: Formula

    def __post_init__(self):
        labels = [label for label, _ in self.context]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate hypothesis labels: {labels}")

    def formulas(self) -> tuple[Formula, ...]:
        return tuple(f for _, f in self.context)

    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.context)

    def get(self, label: str) -> Formula | None:
        for name, f in self.context:
            if name == label:
                return f
        return None


def sequent(hypotheses: Iterable[Formula], conclusion: Formula, prefix: str = "h") -> Sequent:
    """Build a sequent from bare formulas, inventing labels h1, h2, ..."""
    ctx = tuple((f"{prefix}{i}", f) for i, f in enumerate(hypotheses, start=1))
    return Sequent(ctx, conclusion)


# ---------------------------------------------------------------------------
# free variables and freshness


def free_vars(obj: Formula | Term) -> set[str]:
    """Variables occurring free in a term or formula; quantifiers bind their
    variable within their body."""
    match obj:
        case Var(name):
            return {name}
        case App(_, args) | Atom(_, args):
            out: set[str] = set()
            for a in args:
                out |= free_vars(a)
            return out
        case Imp(a, b) | And(a, b) | Or(a, b):
            return free_vars(a) | free_vars(b)
        case Forall(x, body) | Exists(x, body):
            return free_vars(body) - {x}
    raise TypeError(f"not a term or formula: {obj!r}")


def context_free_vars(formulas: Iterable[Formula]) -> set[str]:
    out: set[str] = set()
    for f in formulas:
        out |= free_vars(f)
    return out


def all_names(obj: Formula | Term) -> set[str]:
    """Every variable-like identifier occurring in the object, free or bound.
    Used when inventing names that must not collide with anything."""
    match obj:
        case Var(name):
            return {name}
        case App(_, args) | Atom(_, args):
            out: set[str] = set()
            for a in args:
                out |= all_names(a)
            return out
        case Imp(a, b) | And(a, b) | Or(a, b):
            return all_names(a) | all_names(b)
        case Forall(x, body) | Exists(x, body):
            return all_names(body) | {x}
    raise TypeError(f"not a term or formula: {obj!r}")


def fresh_var(base: str, avoid: Iterable[str]) -> str:
    """`base` itself if unused, else base1, base2, ... (smallest free suffix)."""
    avoid = set(avoid)
    if base not in avoid:
        return base
    n = 1
    while f"{base}{n}" in avoid:
        n += 1
    return f"{base}{n}"


# ---------------------------------------------------------------------------
# substitution


def substitute_term(t: Term, sub: Mapping[str, Term]) -> Term:
    match t:
        case Var(name):
            return sub.get(name, t)
        case App(fn, args):
            return App(fn, tuple(substitute_term(a, sub) for a in args))
    raise TypeError(f"not a term: {t!r}")


def substitute_many(f: Formula, sub: Mapping[str, Term]) -> Formula:
    """Simultaneous capture-avoiding substitution of terms for free variables.

    Bound variables are renamed (x, x1, x2, ...) exactly when a replacement
    term would otherwise be captured, so output is deterministic.
    """
    relevant = {v: t for v, t in sub.items() if v in free_vars(f)}
    if not relevant:
        return f
    match f:
        case Atom(pred, args):
            return Atom(pred, tuple(substitute_term(a, relevant) for a in args))
        case Imp(a, b):
            return Imp(substitute_many(a, relevant), substitute_many(b, relevant))
        case And(a, b):
            return And(substitute_many(a, relevant), substitute_many(b, relevant))
        case Or(a, b):
            return Or(substitute_many(a, relevant), substitute_many(b, relevant))
        case Forall(x, body) | Exists(x, body):
            inner = {v: t for v, t in relevant.items() if v != x}
            ctor = type(f)
            if not inner:
                return f
            incoming: set[str] = set()
            for t in inner.values():
                incoming |= free_vars(t)
            if x in incoming:
                avoid = (free_vars(body) - {x}) | incoming | set(inner)
                x2 = fresh_var(x, avoid)
                inner[x] = Var(x2)
                return ctor(x2, substitute_many(body, inner))
            return ctor(x, substitute_many(body, inner))
    raise TypeError(f"not a formula: {f!r}")


def substitute(f: Formula, x: str, t: Term) -> Formula:
    """Replace free occurrences of x in f by t, avoiding capture."""
    return substitute_many(f, {x: t})


# ---------------------------------------------------------------------------
# alpha-equivalence

# The walkers below identify bound variables by the depth at which their
# binder was entered, i.e. a throwaway de Bruijn level.


def _alpha_term(s: Term, t: Term, env1: dict[str, int], env2: dict[str, int]) -> bool:
    match s, t:
        case (Var(a), Var(b)):
            if a in env1 or b in env2:
                return env1.get(a) == env2.get(b) and a in env1 and b in env2
            return a == b
        case (App(f, xs), App(g, ys)):
            return f == g and len(xs) == len(ys) and all(
                _alpha_term(x, y, env1, env2) for x, y in zip(xs, ys)
            )
    return False


def _alpha(f: Formula, g: Formula, env1: dict[str, int], env2: dict[str, int], depth: int) -> bool:
    if type(f) is not type(g):
        return False
    match f, g:
        case (Atom(p, xs), Atom(q, ys)):
            return p == q and len(xs) == len(ys) and all(
                _alpha_term(x, y, env1, env2) for x, y in zip(xs, ys)
            )
        case (Imp(a, b), Imp(c, d)) | (And(a, b), And(c, d)) | (Or(a, b), Or(c, d)):
            return _alpha(a, c, env1, env2, depth) and _alpha(b, d, env1, env2, depth)
        case (Forall(x, a), Forall(y, b)) | (Exists(x, a), Exists(y, b)):
            return _alpha(a, b, {**env1, x: depth}, {**env2, y: depth}, depth + 1)
    return False


def alpha_eq(f: Formula, g: Formula) -> bool:
    """True iff f and g agree up to consistent renaming of bound variables."""
    return _alpha(f, g, {}, {}, 0)


def canonical(f: Formula) -> Formula:
    """Alpha-normal form: bound variables renamed to $1, $2, ... in traversal
    order.  Two formulas are alpha-equal iff their canonical forms are ==,
    which makes canonical forms usable as set/dict keys."""

    def walk(f: Formula, env: dict[str, str], counter: list[int]) -> Formula:
        match f:
            case Atom(pred, args):
                return Atom(pred, tuple(_canon_term(a, env) for a in args))
            case Imp(a, b):
                return Imp(walk(a, env, counter), walk(b, env, counter))
            case And(a, b):
                return And(walk(a, env, counter), walk(b, env, counter))
            case Or(a, b):
                return Or(walk(a, env, counter), walk(b, env, counter))
            case Forall(x, body) | Exists(x, body):
                counter[0] += 1
                name = f"${counter[0]}"
                return type(f)(name, walk(body, {**env, x: name}, counter))
        raise TypeError(f"not a formula: {f!r}")

    return walk(f, {}, [0])


def _canon_term(t: Term, env: dict[str, str]) -> Term:
    match t:
        case Var(name):
            return Var(env.get(name, name))
        case App(fn, args):
            return App(fn, tuple(_canon_term(a, env) for a in args))
    raise TypeError(f"not a term: {t!r}")


def formula_set(formulas: Iterable[Formula]) -> frozenset[Formula]:
    """The set of alpha-classes of the given formulas."""
    return frozenset(canonical(f) for f in formulas)


def in_context(f: Formula, formulas: Iterable[Formula]) -> bool:
    return any(alpha_eq(f, g) for g in formulas)


# ---------------------------------------------------------------------------
# first-order matching against one distinguished variable


class _AnyTerm:
    """Marker: the match variable does not occur, any instantiation works."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ANY"


ANY = _AnyTerm()


class AmbiguousMatch(Exception):
    """Two occurrences of the match variable demand different terms."""

    code = "AmbiguousMatch"

    def __init__(self, first: Term, second: Term):
        super().__init__(f"conflicting instantiations: {first!r} vs {second!r}")
        self.first = first
        self.second = second


def match_against(pattern: Formula, bound: str, target: Formula) -> Term | _AnyTerm | None:
    """Find t such that substitute(pattern, bound, t) is alpha-equal to target.

    Returns the unique such t, ANY when `bound` has no free occurrence and the
    formulas already agree, or None when no instantiation exists.  Raises
    AmbiguousMatch when distinct occurrences would need distinct terms.
    """
    found: list[Term] = []
    if not _match_f(pattern, target, {}, {}, 0, bound, found):
        return None
    if not found:
        return ANY
    first = found[0]
    for other in found[1:]:
        if other != first:
            raise AmbiguousMatch(first, other)
    return first


def _match_t(p: Term, t: Term, env1: dict[str, int], env2: dict[str, int],
             bound: str, found: list[Term]) -> bool:
    match p:
        case Var(v):
            if v == bound and v not in env1:
                # candidate instantiation; it must not mention variables that
                # are bound at this point in the target, or substitution could
                # never reproduce it
                if free_vars(t) & env2.keys():
                    return False
                found.append(t)
                return True
            if v in env1:
                return isinstance(t, Var) and t.name in env2 and env2[t.name] == env1[v]
            return isinstance(t, Var) and t.name == v and t.name not in env2
        case App(fn, args):
            return (
                isinstance(t, App)
                and t.fn == fn
                and len(t.args) == len(args)
                and all(_match_t(a, b, env1, env2, bound, found) for a, b in zip(args, t.args))
            )
    return False


def _match_f(p: Formula, g: Formula, env1: dict[str, int], env2: dict[str, int],
             depth: int, bound: str, found: list[Term]) -> bool:
    if type(p) is not type(g):
        return False
    match p, g:
        case (Atom(pr, xs), Atom(qr, ys)):
            return pr == qr and len(xs) == len(ys) and all(
                _match_t(x, y, env1, env2, bound, found) for x, y in zip(xs, ys)
            )
        case (Imp(a, b), Imp(c, d)) | (And(a, b), And(c, d)) | (Or(a, b), Or(c, d)):
            return _match_f(a, c, env1, env2, depth, bound, found) and _match_f(
                b, d, env1, env2, depth, bound, found
            )
        case (Forall(x, a), Forall(y, b)) | (Exists(x, a), Exists(y, b)):
            return _match_f(
                a, b, {**env1, x: depth}, {**env2, y: depth}, depth + 1, bound, found
            )
    return False
