"""Shared test machinery: formula strategies and random generators.

Two generators matter here.  `random_formula` drives parse/render and
substitution properties.  `random_derivation` builds kernel-accepted
derivations by running a randomized goal-directed prover over the actual
inference rules; it is the forward-generation oracle behind the translation
suites, and everything it returns is independently re-checked by the kernel
before a test relies on it.
"""

from __future__ import annotations

import random
from pathlib import Path

from hypothesis import strategies as st

from minilog.core import (
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
    alpha_eq,
    context_free_vars,
    free_vars,
    fresh_var,
    in_context,
    match_against,
    substitute,
    AmbiguousMatch,
    ANY,
)
from minilog.kernel import Derivation, Node, check_derivation, from_tree

DATA = Path(__file__).parent / "data"


def load(name: str) -> str:
    return (DATA / name).read_text(encoding="utf-8")


# ---------------------------------------------------------------------------
# hypothesis strategies

_VARS = ("x", "y", "z", "w")
_PROPS = ("p", "q", "r", "s")
# one fixed signature everywhere, so anything generated re-parses
_PRED_ARITY = {"P": 1, "Q": 1, "R": 2}
_FN_ARITY = {"f": 1, "g": 2}


def terms(max_depth: int = 2) -> st.SearchStrategy[Term]:
    base = st.sampled_from(_VARS).map(Var)

    def apply(kids):
        return st.sampled_from(sorted(_FN_ARITY)).flatmap(
            lambda fn: st.tuples(*([kids] * _FN_ARITY[fn])).map(lambda a: App(fn, a))
        )

    return st.recursive(base, apply, max_leaves=max_depth + 1)


def atoms(first_order: bool) -> st.SearchStrategy[Formula]:
    prop = st.sampled_from(_PROPS).map(lambda s: Atom(s, ()))
    if not first_order:
        return prop
    pred = st.sampled_from(sorted(_PRED_ARITY)).flatmap(
        lambda name: st.tuples(*([terms()] * _PRED_ARITY[name])).map(
            lambda a: Atom(name, a)
        )
    )
    return st.one_of(prop, pred)


def formulas(first_order: bool = True, max_leaves: int = 8) -> st.SearchStrategy[Formula]:
    def extend(kids):
        binary = st.one_of(
            st.builds(Imp, kids, kids),
            st.builds(And, kids, kids),
            st.builds(Or, kids, kids),
        )
        if not first_order:
            return binary
        quant = st.builds(
            lambda ctor, v, body: ctor(v, body),
            st.sampled_from((Forall, Exists)),
            st.sampled_from(_VARS),
            kids,
        )
        return st.one_of(binary, quant)

    return st.recursive(atoms(first_order), extend, max_leaves=max_leaves)


# ---------------------------------------------------------------------------
# seeded random formulas (for counted corpora)


def random_term(rng: random.Random, depth: int = 2) -> Term:
    if depth == 0 or rng.random() < 0.6:
        return Var(rng.choice(_VARS))
    fn = rng.choice(sorted(_FN_ARITY))
    return App(fn, tuple(random_term(rng, depth - 1) for _ in range(_FN_ARITY[fn])))


def random_formula(rng: random.Random, depth: int = 3, first_order: bool = True) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        if first_order and rng.random() < 0.5:
            name = rng.choice(sorted(_PRED_ARITY))
            return Atom(name, tuple(random_term(rng, 1) for _ in range(_PRED_ARITY[name])))
        return Atom(rng.choice(_PROPS), ())
    kind = rng.randint(0, 4 if first_order else 2)
    if kind == 0:
        return Imp(random_formula(rng, depth - 1, first_order), random_formula(rng, depth - 1, first_order))
    if kind == 1:
        return And(random_formula(rng, depth - 1, first_order), random_formula(rng, depth - 1, first_order))
    if kind == 2:
        return Or(random_formula(rng, depth - 1, first_order), random_formula(rng, depth - 1, first_order))
    ctor = Forall if kind == 3 else Exists
    return ctor(rng.choice(_VARS), random_formula(rng, depth - 1, first_order))


# ---------------------------------------------------------------------------
# random accepted derivations
#
# A small randomized prover over the rules themselves.  It searches
# goal-directed with bounded depth and a bias toward closing quickly, and
# failure just means "try another random instance", so the only thing a test
# may assume is what the kernel re-check confirms.


def _pool(formulas_: tuple[Formula, ...]) -> list[Term]:
    out: list[Term] = []
    seen = set()

    def add(t: Term, bound: frozenset[str]):
        if not (free_vars(t) & bound) and t not in seen:
            seen.add(t)
            out.append(t)
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
            case Forall(x, body) | Exists(x, body):
                walk(body, bound | {x})

    for f in formulas_:
        walk(f, frozenset())
    return out


def _try_prove(rng: random.Random, ctx: tuple[Formula, ...], target: Formula,
               depth: int) -> Node | None:
    def seq(c: tuple[Formula, ...], g: Formula) -> Sequent:
        return Sequent(tuple((f"h{i}", f) for i, f in enumerate(c, 1)), g)

    here = seq(ctx, target)

    if in_context(target, ctx) and rng.random() < 0.7:
        return Node(here, "Hyp")

    if depth == 0:
        if in_context(target, ctx):
            return Node(here, "Hyp")
        return None

    options: list = []

    # introductions, guided by the goal
    match target:
        case Imp(a, b):
            options.append(("ImpI", a, b))
        case And(a, b):
            options.append(("AndI", a, b))
        case Or(a, b):
            options.append(("OrIL", a, None))
            options.append(("OrIR", b, None))
        case Forall(x, body):
            options.append(("ForallI", x, body))
        case Exists(x, body):
            for t in _pool(ctx + (target,))[:4] + [Var(x)]:
                options.append(("ExistsI", t, (x, body)))

    # eliminations, guided by the hypotheses
    for h in ctx:
        match h:
            case Imp(a, b) if alpha_eq(b, target):
                options.append(("ImpE", h, a))
            case And(a, b):
                if alpha_eq(a, target):
                    options.append(("AndEL", h, None))
                if alpha_eq(b, target):
                    options.append(("AndER", h, None))
            case Or(_, _) if depth >= 2:
                options.append(("OrE", h, None))
            case Exists(_, _) if depth >= 2:
                options.append(("ExistsE", h, None))
            case Forall(x, body):
                try:
                    t = match_against(body, x, target)
                except AmbiguousMatch:
                    t = None
                if t is ANY:
                    t = Var(x)
                if t is not None:
                    options.append(("ForallE", h, t))

    if in_context(target, ctx):
        options.append(("Hyp", None, None))

    rng.shuffle(options)
    for kind, a, b in options:
        node = _attempt(rng, ctx, target, depth, kind, a, b, seq)
        if node is not None:
            return node
    return None


def _attempt(rng, ctx, target, depth, kind, a, b, seq) -> Node | None:
    here = seq(ctx, target)
    rec = lambda c, g: _try_prove(rng, c, g, depth - 1)
    match kind:
        case "Hyp":
            return Node(here, "Hyp")
        case "ImpI":
            sub = rec(ctx + ((a,) if not in_context(a, ctx) else ()), b)
            return Node(here, "ImpI", (sub,)) if sub else None
        case "AndI":
            s1 = rec(ctx, a)
            s2 = rec(ctx, b) if s1 else None
            return Node(here, "AndI", (s1, s2)) if s2 else None
        case "OrIL":
            sub = rec(ctx, a)
            return Node(here, "OrIL", (sub,)) if sub else None
        case "OrIR":
            sub = rec(ctx, a)
            return Node(here, "OrIR", (sub,)) if sub else None
        case "ForallI":
            x, body = a, b
            eigen = x
            if x in context_free_vars(ctx):
                eigen = fresh_var(x, context_free_vars(ctx) | free_vars(body))
            sub = rec(ctx, substitute(body, x, Var(eigen)))
            return Node(here, "ForallI", (sub,), eigen=eigen) if sub else None
        case "ExistsI":
            t, (x, body) = a, b
            sub = rec(ctx, substitute(body, x, t))
            return Node(here, "ExistsI", (sub,), witness=t) if sub else None
        case "ImpE":
            h, ant = a, b
            minor = rec(ctx, ant)
            return Node(here, "ImpE", (Node(seq(ctx, h), "Hyp"), minor)) if minor else None
        case "AndEL" | "AndER":
            return Node(here, kind, (Node(seq(ctx, a), "Hyp"),))
        case "OrE":
            h = a
            left = rec(ctx + ((h.left,) if not in_context(h.left, ctx) else ()), target)
            if left is None:
                return None
            right = rec(ctx + ((h.right,) if not in_context(h.right, ctx) else ()), target)
            if right is None:
                return None
            return Node(here, "OrE", (Node(seq(ctx, h), "Hyp"), left, right))
        case "ExistsE":
            h = a
            eigen = h.var
            avoid = context_free_vars(ctx) | free_vars(target) | free_vars(h.body)
            if h.var in avoid:
                eigen = fresh_var(h.var, avoid)
            opened = substitute(h.body, h.var, Var(eigen))
            if in_context(opened, ctx):
                minor = rec(ctx, target)
            else:
                minor = rec(ctx + (opened,), target)
            if minor is None:
                return None
            return Node(here, "ExistsE", (Node(seq(ctx, h), "Hyp"), minor), eigen=eigen)
        case "ForallE":
            h, t = a, b
            return Node(here, "ForallE", (Node(seq(ctx, h), "Hyp"),), witness=t)
    raise AssertionError(kind)


def random_derivation(rng: random.Random, first_order: bool = False,
                      max_depth: int = 6) -> Derivation:
    """One random kernel-accepted derivation (re-checked before returning)."""
    while True:
        n_hyps = rng.randint(0, 3)
        ctx: list[Formula] = []
        for _ in range(n_hyps):
            f = random_formula(rng, rng.randint(1, 2), first_order)
            if not in_context(f, ctx):
                ctx.append(f)
        target = random_formula(rng, rng.randint(1, 3), first_order)
        node = _try_prove(rng, tuple(ctx), target, rng.randint(2, max_depth))
        if node is None:
            continue
        d = from_tree(node)
        result = check_derivation(d)
        assert result.ok, f"generator produced a bad derivation: {result}"
        if len(d.lines) >= 2 or rng.random() < 0.25:
            return d
