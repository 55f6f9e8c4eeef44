"""Parsing and printing: grammar, precedence, round-trips, file formats."""

import random

import pytest
from hypothesis import given, settings

from minilog.core import And, App, Atom, Exists, Forall, Imp, Or, Var, alpha_eq
from minilog import tactics as tac
from minilog.textio import (
    ArityError,
    BadIndex,
    DuplicateLabel,
    ParseError,
    UnknownTactic,
    parse_derivation,
    parse_formula,
    parse_script,
    parse_term,
    parse_theorem,
    render_derivation,
    render_derivation_json,
    render_formula,
    render_script,
    render_theorem,
)

from helpers import formulas, load, random_formula

p, q, r, s = Atom("p"), Atom("q"), Atom("r"), Atom("s")
a, b, c, d = Atom("a"), Atom("b"), Atom("c"), Atom("d")


class TestParseFormula:
    def test_imp_binds_weakest(self):
        assert parse_formula("p -> q \\/ r") == Imp(p, Or(q, r))

    def test_and_over_or_over_imp(self):
        got = parse_formula("a /\\ b \\/ c -> d")
        # the fully parenthesized spelling is the reference reading
        assert got == parse_formula("((a /\\ b) \\/ c) -> d")
        assert got == Imp(Or(And(a, b), c), d)

    def test_imp_right_associative(self):
        assert parse_formula("a -> b -> c") == Imp(a, Imp(b, c))

    def test_and_or_left_associative(self):
        assert parse_formula("a /\\ b /\\ c") == And(And(a, b), c)
        assert parse_formula("a \\/ b \\/ c") == Or(Or(a, b), c)

    def test_quantifier_scope_is_maximal(self):
        got = parse_formula("forall x. P(x) -> Q(x)")
        assert got == Forall("x", Imp(Atom("P", (Var("x"),)), Atom("Q", (Var("x"),))))

    def test_quantifier_needs_parens_on_the_left(self):
        got = parse_formula("(forall x. P(x)) -> q")
        assert got == Imp(Forall("x", Atom("P", (Var("x"),))), q)

    def test_nested_terms(self):
        got = parse_formula("R(f(x, g(y)), z)")
        assert got == Atom(
            "R", (App("f", (Var("x"), App("g", (Var("y"),)))), Var("z"))
        )

    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError) as err:
            parse_formula("p -> ")
        assert err.value.line == 1
        assert err.value.col >= 5

    def test_comments_ignored(self):
        assert parse_formula("p -- tail\n  -> q") == Imp(p, q)

    def test_predicate_arity_checked(self):
        with pytest.raises(ArityError):
            parse_formula("P(x) /\\ P(x, y)")

    def test_function_arity_checked(self):
        with pytest.raises(ArityError):
            parse_formula("P(f(x)) /\\ Q(f(x, y))")

    def test_unicode_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("p ∧ q")


class TestRenderFormula:
    def test_spec_shapes(self):
        assert render_formula(Imp(p, Or(q, r))) == "p -> q \\/ r"
        assert render_formula(p) == "p"
        assert render_formula(Or(And(a, b), c)) == "a /\\ b \\/ c"

    def test_right_nesting_parenthesized(self):
        assert render_formula(Or(a, Or(b, c))) == "a \\/ (b \\/ c)"
        assert render_formula(And(a, And(b, c))) == "a /\\ (b /\\ c)"

    def test_quantifier_positions(self):
        f = Imp(Forall("x", Atom("P", (Var("x"),))), q)
        assert render_formula(f) == "(forall x. P(x)) -> q"
        g = And(a, Exists("x", Atom("P", (Var("x"),))))
        assert render_formula(g) == "a /\\ exists x. P(x)"
        h = Imp(And(a, Forall("x", b)), c)
        assert render_formula(h) == "a /\\ (forall x. b) -> c"

    @given(formulas())
    @settings(max_examples=400)
    def test_parse_render_fixpoint(self, f):
        assert alpha_eq(parse_formula(render_formula(f)), f)

    def test_seeded_corpus_fixpoint(self):
        rng = random.Random(99)
        for _ in range(300):
            f = random_formula(rng, depth=4)
            assert parse_formula(render_formula(f)) == f

    def test_render_parse_render_stable(self):
        rng = random.Random(100)
        for _ in range(200):
            text = render_formula(random_formula(rng, depth=4))
            assert render_formula(parse_formula(text)) == text


class TestScripts:
    def test_basic_commands(self):
        script = parse_script("intro. apply H3. trivial.")
        assert script.tactics == (tac.Intro(), tac.Apply("H3"), tac.Trivial())

    def test_empty_script(self):
        assert parse_script("").tactics == ()

    def test_exists_takes_a_term(self):
        assert parse_script("exists y.").tactics == (tac.ExistsWith(Var("y")),)

    def test_assert_with_label_and_inner_period(self):
        script = parse_script("assert (forall x. P(x)) as H4.")
        assert script.tactics == (
            tac.Assert(Forall("x", Atom("P", (Var("x"),))), "H4"),
        )

    def test_apply_with_witness(self):
        script = parse_script("apply H1 with f(y).")
        assert script.tactics == (tac.Apply("H1", App("f", (Var("y"),))),)

    def test_cut(self):
        assert parse_script("cut (p -> q).").tactics == (tac.Cut(Imp(p, q)),)

    def test_unknown_tactic(self):
        with pytest.raises(UnknownTactic):
            parse_script("frobnicate.")

    def test_missing_period(self):
        with pytest.raises(ParseError):
            parse_script("intro")

    def test_comments(self):
        script = parse_script("-- warm-up\nintro. -- open the implication\ntrivial.")
        assert len(script) == 2

    def test_script_render_roundtrip(self):
        text = "intro.\napply H3.\nassert (q \\/ r) as H5.\nexists f(x).\ncut (p).\n"
        script = parse_script(text)
        assert render_script(script) == text


class TestTheoremFiles:
    def test_golden_file(self):
        thm = parse_theorem(load("chain.thm"))
        assert [lbl for lbl, _ in thm.hypotheses] == ["H1", "H2", "H3"]
        assert thm.hypotheses[0][1] == Imp(p, Or(q, r))
        assert thm.goal_name == "chain"
        assert thm.goal == Imp(p, s)

    def test_no_hypotheses(self):
        thm = parse_theorem("theorem t : p -> p")
        assert thm.hypotheses == ()

    def test_duplicate_label(self):
        with pytest.raises(DuplicateLabel):
            parse_theorem("hyp H : p\nhyp H : q\ntheorem t : p")

    def test_roundtrip(self):
        text = load("puzzle.thm")
        thm = parse_theorem(text)
        assert parse_theorem(render_theorem(thm)) == thm

    def test_arity_consistency_across_the_file(self):
        with pytest.raises(ArityError):
            parse_theorem("hyp H1 : P(x)\ntheorem t : P(x, y)")


class TestDerivationFiles:
    def test_one_liner(self):
        df = parse_derivation("1 | p |- p | Hyp")
        assert len(df.lines) == 1
        line = df.lines[0]
        assert line.context == (p,)
        assert line.conclusion == p
        assert line.rule == "Hyp"

    def test_golden_file_with_alias(self):
        df = parse_derivation(load("chain.drv"))
        assert len(df.lines) == 11
        # the alias G expands to the three hypotheses
        assert df.lines[0].context == (Imp(p, Or(q, r)), Imp(q, r), Imp(r, s), p)
        assert df.lines[10].conclusion == Imp(p, s)
        assert df.lines[2].premises == (1, 2)

    def test_premise_must_be_earlier(self):
        with pytest.raises(BadIndex):
            parse_derivation("1 | p |- p | Hyp\n2 | p |- p | ImpE 2 5")

    def test_line_numbering_must_be_consecutive(self):
        with pytest.raises(BadIndex):
            parse_derivation("1 | p |- p | Hyp\n3 | p |- p | Hyp")

    def test_witness_terms(self):
        df = parse_derivation(
            "1 | forall x. P(x) |- forall x. P(x) | Hyp\n"
            "2 | forall x. P(x) |- P(f(y)) | ForallE 1 f(y)"
        )
        assert df.lines[1].witness == App("f", (Var("y"),))

    def test_eigenvariables(self):
        df = parse_derivation(
            "1 | P(x) |- P(x) | Hyp\n2 | P(x) |- exists z. P(z) | ExistsI 1 x"
        )
        assert df.lines[1].witness == Var("x")
        df2 = parse_derivation(
            "1 | forall y. P(y) |- P(w) | Hyp\n"
            "2 | forall y. P(y) |- forall w. P(w) | ForallI 1 w"
        )
        assert df2.lines[1].eigen == "w"

    def test_text_roundtrip(self):
        text = load("chain.drv")
        df = parse_derivation(text)
        assert parse_derivation(render_derivation(df)) == df

    def test_json_roundtrip(self):
        df = parse_derivation(load("chain.drv"))
        assert parse_derivation(render_derivation_json(df)) == df

    def test_unknown_rule(self):
        with pytest.raises(ParseError):
            parse_derivation("1 | p |- p | Frob")


def test_parse_term_plain():
    assert parse_term("f(x, g(y))") == App("f", (Var("x"), App("g", (Var("y"),))))
    assert parse_term("y") == Var("y")


def test_worked_example_formulas_all_parse():
    texts = [
        "p -> q \\/ r",
        "q -> r",
        "r -> s",
        "p -> s",
        "(x \\/ p) /\\ q -> l",
        "m \\/ q -> s /\\ t",
        "(s /\\ t) /\\ l -> x",
        "p -> q",
        "m /\\ p -> x",
        "(forall v. P(v) -> Q(v)) -> forall x. (exists y. P(y) /\\ R(x,y)) -> exists z. Q(z) /\\ R(x,z)",
        "q \\/ r",
        "((p -> q) -> p) -> p",
    ]
    for text in texts:
        f = parse_formula(text)
        assert alpha_eq(parse_formula(render_formula(f)), f)
