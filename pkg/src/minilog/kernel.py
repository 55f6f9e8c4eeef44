"""The proof kernel: checking linear derivations against the inference rules.

A derivation is a numbered sequence of judgments, each one either a
hypothesis axiom, an explicitly assumed judgment, or the conclusion of a
rule applied to earlier lines.  Contexts are compared as *sets* of
alpha-classes, so permutation and duplication never matter.

The module also provides two admissible transformations on checked
derivations: `weaken` (add hypotheses everywhere, renaming eigenvariables
out of the way) and `graft` (replace hypothesis uses of a formula by a
derivation of it).  Both return derivations that check again; they are the
machinery behind translating assert/cut-style reasoning into plain rule
applications.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    And,
    Exists,
    Forall,
    Formula,
    Imp,
    Or,
    Sequent,
    Term,
    Var,
    all_names,
    alpha_eq,
    canonical,
    formula_set,
    free_vars,
    fresh_var,
    in_context,
    substitute,
    substitute_many,
    substitute_term,
)

# rule name -> number of premises
RULES = {
    "Hyp": 0,
    "Assumed": 0,
    "ImpI": 1,
    "ImpE": 2,
    "AndI": 2,
    "AndEL": 1,
    "AndER": 1,
    "OrIL": 1,
    "OrIR": 1,
    "OrE": 3,
    "ForallI": 1,
    "ForallE": 1,
    "ExistsI": 1,
    "ExistsE": 2,
}

# machine-readable rejection reasons
BAD_HYP = "BadHyp"
BAD_PREMISE_SHAPE = "BadPremiseShape"
EIGENVARIABLE_CAPTURED = "EigenvariableCaptured"
WITNESS_MISMATCH = "WitnessMismatch"
CONTEXT_MISMATCH = "ContextMismatch"


@dataclass(frozen=True)
class Justification:
    """Why a derivation line holds: a rule, cited premise lines, and for the
    quantifier rules an instantiating term or an eigenvariable."""

    rule: str
    premises: tuple[int, ...] = ()
    witness: Term | None = None  # ForallE / ExistsI
    eigen: str | None = None  # ForallI / ExistsE


@dataclass(frozen=True)
class Derivation:
    """A linear proof; the last line is the derived judgment.  `assumed`
    lists judgments that may be cited without proof (empty means a real
    proof)."""

    lines: tuple[tuple[Sequent, Justification], ...]
    assumed: tuple[Sequent, ...] = ()

    def final(self) -> Sequent:
        return self.lines[-1][0]


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    line: int | None = None
    reason: str | None = None
    message: str = ""

    def __bool__(self):
        return self.ok


ACCEPT = CheckResult(True)


class ContextMismatch(Exception):
    """weaken/graft precondition violated."""

    code = CONTEXT_MISMATCH


def check_judgment_equal(a: Sequent, b: Sequent) -> bool:
    """Equality with set semantics on the context and alpha on the formulas."""
    return formula_set(a.formulas()) == formula_set(b.formulas()) and alpha_eq(
        a.conclusion, b.conclusion
    )


def _ctx_key(seq: Sequent) -> frozenset[Formula]:
    return formula_set(seq.formulas())


def _reject(i: int, reason: str, message: str) -> CheckResult:
    return CheckResult(False, i, reason, message)


def _existential_body(f: Exists, eigen: str) -> Formula | None:
    """The body of an existential, renamed to the eigenvariable; None when the
    eigenvariable already occurs free in the body (no valid instance)."""
    if eigen == f.var:
        return f.body
    if eigen in free_vars(f.body) - {f.var}:
        return None
    return substitute(f.body, f.var, Var(eigen))


def _check_line(i: int, seq: Sequent, j: Justification,
                lines: tuple[tuple[Sequent, Justification], ...],
                assumed: tuple[Sequent, ...]) -> CheckResult:
    if j.rule not in RULES:
        return _reject(i, BAD_PREMISE_SHAPE, f"unknown rule {j.rule!r}")
    if len(j.premises) != RULES[j.rule]:
        return _reject(
            i, BAD_PREMISE_SHAPE,
            f"{j.rule} takes {RULES[j.rule]} premise(s), got {len(j.premises)}",
        )
    for p in j.premises:
        if not (1 <= p < i):
            return _reject(i, BAD_PREMISE_SHAPE, f"premise {p} is not an earlier line")
    prems = [lines[p - 1][0] for p in j.premises]
    ctx = _ctx_key(seq)
    goal = seq.conclusion

    def same_ctx(*seqs: Sequent) -> bool:
        return all(_ctx_key(s) == ctx for s in seqs)

    match j.rule:
        case "Hyp":
            if in_context(goal, seq.formulas()):
                return ACCEPT
            return _reject(i, BAD_HYP, "conclusion is not a hypothesis")
        case "Assumed":
            if any(check_judgment_equal(seq, h) for h in assumed):
                return ACCEPT
            return _reject(i, BAD_HYP, "judgment is not among the assumed ones")
        case "ImpI":
            if not isinstance(goal, Imp):
                return _reject(i, BAD_PREMISE_SHAPE, "conclusion is not an implication")
            (p1,) = prems
            if not alpha_eq(p1.conclusion, goal.right):
                return _reject(i, BAD_PREMISE_SHAPE, "premise does not conclude the consequent")
            if _ctx_key(p1) != formula_set(seq.formulas() + (goal.left,)):
                return _reject(i, CONTEXT_MISMATCH, "premise context must add the antecedent")
            return ACCEPT
        case "ImpE":
            p1, p2 = prems
            if not same_ctx(p1, p2):
                return _reject(i, CONTEXT_MISMATCH, "premise contexts differ from conclusion")
            for major, minor in ((p1, p2), (p2, p1)):
                c = major.conclusion
                if (
                    isinstance(c, Imp)
                    and alpha_eq(c.left, minor.conclusion)
                    and alpha_eq(c.right, goal)
                ):
                    return ACCEPT
            return _reject(i, BAD_PREMISE_SHAPE, "premises do not form an implication and its antecedent")
        case "AndI":
            if not isinstance(goal, And):
                return _reject(i, BAD_PREMISE_SHAPE, "conclusion is not a conjunction")
            p1, p2 = prems
            if not same_ctx(p1, p2):
                return _reject(i, CONTEXT_MISMATCH, "premise contexts differ from conclusion")
            if alpha_eq(p1.conclusion, goal.left) and alpha_eq(p2.conclusion, goal.right):
                return ACCEPT
            return _reject(i, BAD_PREMISE_SHAPE, "premises do not match the two conjuncts")
        case "AndEL" | "AndER":
            (p1,) = prems
            if not same_ctx(p1):
                return _reject(i, CONTEXT_MISMATCH, "premise context differs from conclusion")
            c = p1.conclusion
            if not isinstance(c, And):
                return _reject(i, BAD_PREMISE_SHAPE, "premise is not a conjunction")
            side = c.left if j.rule == "AndEL" else c.right
            if alpha_eq(side, goal):
                return ACCEPT
            return _reject(i, BAD_PREMISE_SHAPE, "conclusion is not the selected conjunct")
        case "OrIL" | "OrIR":
            if not isinstance(goal, Or):
                return _reject(i, BAD_PREMISE_SHAPE, "conclusion is not a disjunction")
            (p1,) = prems
            if not same_ctx(p1):
                return _reject(i, CONTEXT_MISMATCH, "premise context differs from conclusion")
            side = goal.left if j.rule == "OrIL" else goal.right
            if alpha_eq(p1.conclusion, side):
                return ACCEPT
            return _reject(i, BAD_PREMISE_SHAPE, "premise is not the selected disjunct")
        case "OrE":
            p1, p2, p3 = prems
            c = p1.conclusion
            if not isinstance(c, Or):
                return _reject(i, BAD_PREMISE_SHAPE, "first premise is not a disjunction")
            if not same_ctx(p1):
                return _reject(i, CONTEXT_MISMATCH, "major premise context differs")
            if not (alpha_eq(p2.conclusion, goal) and alpha_eq(p3.conclusion, goal)):
                return _reject(i, BAD_PREMISE_SHAPE, "case premises do not conclude the goal")
            if _ctx_key(p2) != formula_set(seq.formulas() + (c.left,)):
                return _reject(i, CONTEXT_MISMATCH, "left case context must add the left disjunct")
            if _ctx_key(p3) != formula_set(seq.formulas() + (c.right,)):
                return _reject(i, CONTEXT_MISMATCH, "right case context must add the right disjunct")
            return ACCEPT
        case "ForallI":
            if not isinstance(goal, Forall):
                return _reject(i, BAD_PREMISE_SHAPE, "conclusion is not universal")
            (p1,) = prems
            if not same_ctx(p1):
                return _reject(i, CONTEXT_MISMATCH, "premise context differs from conclusion")
            eigen = j.eigen or goal.var
            if any(eigen in free_vars(f) for f in seq.formulas()):
                return _reject(i, EIGENVARIABLE_CAPTURED,
                               f"eigenvariable {eigen!r} occurs free in the context")
            if alpha_eq(Forall(eigen, p1.conclusion), goal):
                return ACCEPT
            return _reject(i, BAD_PREMISE_SHAPE, "premise is not the body at the eigenvariable")
        case "ForallE":
            (p1,) = prems
            if not same_ctx(p1):
                return _reject(i, CONTEXT_MISMATCH, "premise context differs from conclusion")
            c = p1.conclusion
            if not isinstance(c, Forall):
                return _reject(i, BAD_PREMISE_SHAPE, "premise is not universal")
            if j.witness is None:
                return _reject(i, BAD_PREMISE_SHAPE, "missing instantiation term")
            if alpha_eq(substitute(c.body, c.var, j.witness), goal):
                return ACCEPT
            return _reject(i, WITNESS_MISMATCH, "conclusion is not the body at the given term")
        case "ExistsI":
            if not isinstance(goal, Exists):
                return _reject(i, BAD_PREMISE_SHAPE, "conclusion is not existential")
            (p1,) = prems
            if not same_ctx(p1):
                return _reject(i, CONTEXT_MISMATCH, "premise context differs from conclusion")
            if j.witness is None:
                return _reject(i, BAD_PREMISE_SHAPE, "missing witness term")
            if alpha_eq(substitute(goal.body, goal.var, j.witness), p1.conclusion):
                return ACCEPT
            return _reject(i, WITNESS_MISMATCH, "premise is not the body at the witness")
        case "ExistsE":
            p1, p2 = prems
            c = p1.conclusion
            if not isinstance(c, Exists):
                return _reject(i, BAD_PREMISE_SHAPE, "major premise is not existential")
            if not same_ctx(p1):
                return _reject(i, CONTEXT_MISMATCH, "major premise context differs")
            eigen = j.eigen or c.var
            if any(eigen in free_vars(f) for f in seq.formulas()) or eigen in free_vars(goal):
                return _reject(i, EIGENVARIABLE_CAPTURED,
                               f"eigenvariable {eigen!r} occurs free in the context or goal")
            body = _existential_body(c, eigen)
            if body is None:
                return _reject(i, EIGENVARIABLE_CAPTURED,
                               f"eigenvariable {eigen!r} occurs free in the existential body")
            if not alpha_eq(p2.conclusion, goal):
                return _reject(i, BAD_PREMISE_SHAPE, "case premise does not conclude the goal")
            if _ctx_key(p2) != formula_set(seq.formulas() + (body,)):
                return _reject(i, CONTEXT_MISMATCH, "case context must add the instantiated body")
            return ACCEPT
    raise AssertionError(j.rule)


def check_derivation(d: Derivation) -> CheckResult:
    """Accept iff every line is justified; otherwise report the first bad line
    with a machine-readable reason."""
    if not d.lines:
        return CheckResult(False, 0, BAD_PREMISE_SHAPE, "empty derivation")
    for i, (seq, j) in enumerate(d.lines, start=1):
        res = _check_line(i, seq, j, d.lines, d.assumed)
        if not res.ok:
            return res
    return ACCEPT


# ---------------------------------------------------------------------------
# tree view
#
# Lines cite premises by index, forming a DAG; the transformations below work
# on the unfolded tree and linearize back at the end (sharing identical lines
# again where possible).


@dataclass(frozen=True)
class Node:
    sequent: Sequent
    rule: str
    children: tuple["Node", ...] = ()
    witness: Term | None = None
    eigen: str | None = None


def to_tree(d: Derivation) -> Node:
    memo: dict[int, Node] = {}

    def build(i: int) -> Node:
        if i in memo:
            return memo[i]
        seq, j = d.lines[i - 1]
        node = Node(seq, j.rule, tuple(build(p) for p in j.premises), j.witness, j.eigen)
        memo[i] = node
        return node

    return build(len(d.lines))


def from_tree(root: Node) -> Derivation:
    lines: list[tuple[Sequent, Justification]] = []
    index: dict[tuple, int] = {}
    assumed: list[Sequent] = []

    def emit(node: Node) -> int:
        child_ids = tuple(emit(c) for c in node.children)
        key = (node.sequent, node.rule, child_ids, node.witness, node.eigen)
        if key in index:
            return index[key]
        if node.rule == "Assumed" and not any(
            check_judgment_equal(node.sequent, s) for s in assumed
        ):
            assumed.append(node.sequent)
        lines.append((node.sequent, Justification(node.rule, child_ids, node.witness, node.eigen)))
        index[key] = len(lines)
        return len(lines)

    emit(root)
    return Derivation(tuple(lines), tuple(assumed))


def _tree_names(node: Node) -> set[str]:
    names: set[str] = set()
    for _, f in node.sequent.context:
        names |= all_names(f)
    names |= all_names(node.sequent.conclusion)
    if node.witness is not None:
        names |= all_names(node.witness)
    if node.eigen is not None:
        names.add(node.eigen)
    for c in node.children:
        names |= _tree_names(c)
    return names


def rename_free_in_tree(node: Node, old: str, new: str) -> Node:
    """Rename a free variable throughout a subtree, including instantiation
    terms and eigenvariables named `old`.  Sound whenever `new` occurs nowhere
    in the subtree."""
    sub = {old: Var(new)}
    ctx = tuple((label, substitute_many(f, sub)) for label, f in node.sequent.context)
    seq = Sequent(ctx, substitute_many(node.sequent.conclusion, sub))
    witness = substitute_term(node.witness, sub) if node.witness is not None else None
    eigen = new if node.eigen == old else node.eigen
    return Node(seq, node.rule,
                tuple(rename_free_in_tree(c, old, new) for c in node.children),
                witness, eigen)


def _fresh_label(taken: set[str], base: str = "w") -> str:
    n = 1
    while f"{base}{n}" in taken:
        n += 1
    return f"{base}{n}"


def _extend_context(seq: Sequent, extra: tuple[Formula, ...]) -> Sequent:
    """Append the formulas not already present (up to alpha), with fresh
    labels."""
    ctx = list(seq.context)
    taken = set(seq.labels())
    for f in extra:
        if in_context(f, (g for _, g in ctx)):
            continue
        label = _fresh_label(taken)
        taken.add(label)
        ctx.append((label, f))
    return Sequent(tuple(ctx), seq.conclusion)


def weaken_tree(node: Node, extra: tuple[Formula, ...]) -> Node:
    if not extra:
        return node
    extra_fv: set[str] = set()
    for f in extra:
        extra_fv |= free_vars(f)
    children = node.children
    eigen = node.eigen
    if node.rule in ("ForallI", "ExistsE") and eigen is not None and eigen in extra_fv:
        # the quantifier side condition would break; rename the eigenvariable
        # to something globally fresh first
        avoid = _tree_names(node) | extra_fv
        new_eigen = fresh_var(eigen, avoid)
        which = 0 if node.rule == "ForallI" else 1
        children = tuple(
            rename_free_in_tree(c, eigen, new_eigen) if k == which else c
            for k, c in enumerate(children)
        )
        eigen = new_eigen
    children = tuple(weaken_tree(c, extra) for c in children)
    return Node(_extend_context(node.sequent, extra), node.rule, children, node.witness, eigen)


def weaken(d: Derivation, extra: list[Formula] | tuple[Formula, ...]) -> Derivation:
    """Derive the same conclusion under additional hypotheses.  Eigenvariables
    clashing with the new hypotheses are renamed, so this is total on checked
    derivations."""
    return from_tree(weaken_tree(to_tree(d), tuple(extra)))


def _strip(seq: Sequent, cut: Formula) -> Sequent:
    ctx = tuple((label, f) for label, f in seq.context if not alpha_eq(f, cut))
    return Sequent(ctx, seq.conclusion)


def graft_tree(major: Node, minor: Node) -> Node:
    """From major : Γ,A ⊢ C and minor : Γ ⊢ A build Γ ⊢ C by replacing
    hypothesis uses of A with (weakened) copies of minor."""
    cut = minor.sequent.conclusion
    major_ctx = formula_set(major.sequent.formulas())
    minor_ctx = formula_set(minor.sequent.formulas())
    if major_ctx != minor_ctx | {canonical(cut)}:
        raise ContextMismatch(
            "graft requires the major context to be the minor context plus its conclusion"
        )
    if canonical(cut) in minor_ctx:
        # Γ already contains A, so the major derivation already proves Γ ⊢ C
        return major

    def readds_cut(node: Node, child_pos: int) -> bool:
        match node.rule, node.sequent.conclusion:
            case ("ImpI", Imp(a, _)):
                return alpha_eq(a, cut)
            case ("OrE", _):
                disj = node.children[0].sequent.conclusion
                if child_pos == 1 and isinstance(disj, Or):
                    return alpha_eq(disj.left, cut)
                if child_pos == 2 and isinstance(disj, Or):
                    return alpha_eq(disj.right, cut)
                return False
            case ("ExistsE", _):
                ex = node.children[0].sequent.conclusion
                if child_pos == 1 and isinstance(ex, Exists) and node.eigen is not None:
                    body = _existential_body(ex, node.eigen)
                    return body is not None and alpha_eq(body, cut)
                return False
        return False

    def walk(node: Node) -> Node:
        stripped = _strip(node.sequent, cut)
        if node.rule == "Hyp":
            if in_context(node.sequent.conclusion, stripped.formulas()):
                return Node(stripped, "Hyp")
            # this hypothesis use *was* the cut formula: substitute the proof
            extras = tuple(
                f for f in stripped.formulas()
                if not in_context(f, minor.sequent.formulas())
            )
            return weaken_tree(minor, extras)
        children = tuple(
            c if readds_cut(node, k) else walk(c) for k, c in enumerate(node.children)
        )
        return Node(stripped, node.rule, children, node.witness, node.eigen)

    return walk(major)


def graft(major: Derivation, minor: Derivation) -> Derivation:
    """The substitution property, constructively: from Γ,A ⊢ C and Γ ⊢ A
    produce a derivation of Γ ⊢ C."""
    return from_tree(graft_tree(to_tree(major), to_tree(minor)))
