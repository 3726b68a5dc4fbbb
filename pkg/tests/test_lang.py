import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reflkit.gen import TermGen
from reflkit.lang import (
    FALSE, TRUE, UNIT, App, Bool, Closure, Code, CodeV, Done, Err, Int, Lam, LiftError,
    Lit, OutOfFuel, Pair, PairV, ParseError, Prim, PrimOp, Quote, Sym, Tagged, Var,
    evaluate, evaluate_counted, lift, parse, parse_value, print_term, size, term_eq,
)
from reflkit.lang.reference import reference_eval
from reflkit.lang.terms import Fix, OpenTermError, check_well_formed, shift


# -- parse / print ---------------------------------------------------------

def test_parse_identity():
    assert parse("(lam a a)") == Lam(Var(0))


def test_parse_quoted_identity():
    assert parse("(quote (lam a a))") == Quote(Lam(Var(0)))


def test_parse_increment():
    t = parse("(lam a (add a 1))")
    assert t == Lam(Prim(PrimOp.ADD, (Var(0), Lit(Int(1)))))
    assert parse(print_term(t)) == t


def test_print_examples():
    assert print_term(Lam(Var(0))) == "(lam a a)"
    assert print_term(Quote(Lam(Var(0)))) == "(quote (lam a a))"


def test_names_are_irrelevant():
    assert parse("(lam x (lam y x))") == parse("(lam (p q) p)") == Lam(Lam(Var(1)))


def test_implicit_and_explicit_application():
    assert parse("((lam (u v) u) 1 2)") == parse("(app (app (lam u (lam v u)) 1) 2)")
    assert parse("(app (lam u u) 1 2)") == App(App(Lam(Var(0)), Lit(Int(1))), Lit(Int(2)))


def test_literals():
    assert parse("-12") == Lit(Int(-12))
    assert parse("'x0") == Lit(Sym("x0"))
    assert parse("true") == Lit(TRUE)
    assert parse("unit") == Lit(UNIT)


def test_sugar_desugars_to_core():
    assert parse("(let x 1 x)") == App(Lam(Var(0)), Lit(Int(1)))
    t = parse("(lam a (if a 1 a))")
    assert print_term(t) == "(lam a (case a (b 1) (b a)))"


@pytest.mark.parametrize("text, line, col", [
    ("(lam a", 1, 1),
    ("(lam a b)", 1, 8),
    ("(lam a\n  (add a zz))", 2, 10),
    (")", 1, 1),
    ("(add 1)", 1, 1),
    ("(lam a (quote a))", 1, 15),
    ("(fix f 3)", 1, 1),
    ("#", 1, 1),
])
def test_parse_errors_carry_location(text, line, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.col) == (line, col)


def test_quote_must_be_closed():
    with pytest.raises(ParseError, match="closed"):
        parse("(lam a (quote (lam b a)))")


def test_prim_arity_enforced_at_construction():
    with pytest.raises(ValueError):
        Prim(PrimOp.ADD, (Lit(Int(1)),))


def test_fix_body_must_be_lambda():
    with pytest.raises(ValueError):
        Fix(Var(0))


def test_check_well_formed():
    check_well_formed(parse("(lam a (quote (lam b b)))"))
    with pytest.raises(OpenTermError):
        check_well_formed(Lam(Var(1)))
    with pytest.raises(OpenTermError):
        check_well_formed(Quote(Var(0)))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_print_parse_roundtrip(seed):
    t, _, _ = TermGen(random.Random(seed)).unary()
    assert parse(print_term(t)) == t


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_print_after_parse_is_idempotent(seed):
    text = print_term(TermGen(random.Random(seed)).binary()[0])
    once = print_term(parse(text))
    assert print_term(parse(once)) == once == text


# -- evaluation ------------------------------------------------------------

def test_eval_identity_application():
    assert evaluate(App(Lam(Var(0)), Lit(Int(7))), 10) == Done(Int(7))


def test_eval_divergence_runs_out_of_fuel():
    loop = parse("((fix f (lam x (f x))) 0)")
    assert evaluate(loop, 1000) == OutOfFuel(0)


def test_eval_addition():
    # 41 + 1 by integer arithmetic
    assert evaluate(Prim(PrimOp.ADD, (Lit(Int(41)), Lit(Int(1)))), 10) == Done(Int(42))


def test_fuel_accounting_beta_and_prim_cost_one():
    out, used = evaluate_counted(parse("((lam a (add a 1)) 2)"), 10)
    assert (out, used) == (Done(Int(3)), 2)
    assert evaluate(parse("((lam a (add a 1)) 2)"), 1) == OutOfFuel(0)
    # pairs, projections and case dispatch are free
    assert evaluate_counted(parse("(fst (pair 1 (case (inl 2) (x x) (y y))))"), 0) == (Done(Int(1)), 0)


def test_run_charges_the_caller():
    # run: 1 prim step, then 1 beta inside the code
    out, used = evaluate_counted(parse("(run (quote (lam a a)) 5)"), 10)
    assert (out, used) == (Done(Int(5)), 2)
    assert evaluate(parse("(run (quote (lam a a)) 5)"), 1) == OutOfFuel(0)


def test_arbitrary_precision():
    t = parse("((fix f (lam n (if (le n 0) 1 (mul 2 (f (sub n 1)))))) 200)")
    assert evaluate(t, 10_000) == Done(Int(2**200))


def test_recursive_sum():
    t = parse("((fix f (lam n (if (le n 0) 0 (add n (f (sub n 1)))))) 100)")
    assert evaluate(t, 10_000) == Done(Int(5050))


def test_deep_recursion_does_not_use_python_stack():
    t = parse("((fix f (lam n (if (le n 0) 0 (add 1 (f (sub n 1)))))) 50000)")
    assert evaluate(t, 10**6) == Done(Int(50000))


@pytest.mark.parametrize("text, kind", [
    ("(add 1 true)", "type-mismatch"),
    ("(fst 3)", "type-mismatch"),
    ("(3 4)", "type-mismatch"),
    ("(case 3 (x x) (y y))", "type-mismatch"),
    ("(not 0)", "type-mismatch"),
    ("(eq-sym 1 'a)", "type-mismatch"),
    ("(run 1 2)", "type-mismatch"),
    ("(size 1)", "type-mismatch"),
    ("(spec (quote (lam a a)) (lam b b))", "lift-failure"),
    ("(run (quote (lam a a)) (lam b b))", "lift-failure"),
])
def test_eval_errors(text, kind):
    out = evaluate(parse(text), 100)
    assert isinstance(out, Err) and out.kind == kind


def test_open_term_reports_unbound():
    assert evaluate(Var(0), 10).kind == "unbound"


def test_case_on_booleans():
    assert evaluate(parse("(if true 1 2)"), 5) == Done(Int(1))
    assert evaluate(parse("(if false 1 2)"), 5) == Done(Int(2))


def test_code_primitives():
    assert evaluate(parse("(size (quote (lam a (add a 1))))"), 5) == Done(Int(4))
    assert evaluate(parse("(code-eq (quote (lam x x)) (quote (lam y y)))"), 5) == Done(TRUE)
    assert evaluate(parse("(code-eq (quote (lam x x)) (quote (lam y 1)))"), 5) == Done(FALSE)
    spec = evaluate(parse("(spec (quote (lam (x a) x)) 9)"), 5)
    assert spec == Done(CodeV(Code(App(Lam(Lam(Var(1))), Lit(Int(9))))))


def test_size_counts_every_node():
    # Lam, Pair, Var, Quote, Lam, Var
    assert size(parse("(lam a (pair a (quote (lam b b))))")) == 6


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 400))
def test_fuel_monotone(seed, extra):
    g = TermGen(random.Random(seed))
    t, in_ty, _ = g.unary()
    prog = App(t, lift(g.value(in_ty)))
    out, used = evaluate_counted(prog, 10**5)
    if isinstance(out, Done):
        assert evaluate(prog, used + extra) == out
        if used:
            assert evaluate(prog, used - 1) == OutOfFuel(0)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_eval_is_pure(seed):
    t, in_ty, _ = TermGen(random.Random(seed)).unary()
    prog = App(t, lift(TermGen(random.Random(seed + 1)).value(in_ty)))
    assert evaluate(prog, 5000) == evaluate(prog, 5000)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_machine_agrees_with_substitution_reference(seed):
    g = TermGen(random.Random(seed))
    t, in_ty, _ = g.unary()
    prog = App(t, lift(g.value(in_ty)))
    out = evaluate(prog, 10**5)
    ref = reference_eval(prog)
    if isinstance(out, Done):
        assert out.value == ref
    elif isinstance(out, Err):
        assert ref == "stuck"


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_copy_and_discard_first_order_values(seed):
    # a value bound once and used twice behaves like the value duplicated;
    # a value bound and never used behaves like it was never there
    g = TermGen(random.Random(seed))
    ty = g.first_order_type()
    v = g.value(ty)
    dup = App(Lam(Pair(Var(0), Var(0))), lift(v))
    assert evaluate(dup, 10) == Done(PairV(v, v))
    body, _, _ = g.unary()
    other = g.literal(g.first_order_type())
    drop = App(Lam(shift(App(body, other), 1)), lift(v))
    direct, used = evaluate_counted(App(body, other), 10**5)
    if not isinstance(direct, OutOfFuel):
        # the discarded binding costs exactly one beta step
        assert evaluate_counted(drop, 10**5) == (direct, used + 1)


# -- lift and term_eq ------------------------------------------------------

def test_lift_ground():
    assert lift(Int(7)) == Lit(Int(7))


def test_lift_pair():
    assert lift(PairV(TRUE, UNIT)) == Pair(Lit(Bool(True)), Lit(UNIT))


def test_lift_code_roundtrip():
    c = CodeV(Code(Lam(Var(0))))
    assert lift(c) == Quote(Lam(Var(0)))
    assert evaluate(lift(c), 1) == Done(c)


def test_lift_rejects_closures():
    with pytest.raises(LiftError):
        lift(PairV(Int(1), Closure(None, Var(0))))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_lift_evaluates_back_for_free(seed):
    g = TermGen(random.Random(seed))
    v = g.value(g.first_order_type(3))
    assert evaluate(lift(v), 0) == Done(v)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 2**32))
def test_lift_injective(s1, s2):
    g1, g2 = TermGen(random.Random(s1)), TermGen(random.Random(s2))
    v1, v2 = g1.value(g1.first_order_type()), g2.value(g2.first_order_type())
    assert (lift(v1) == lift(v2)) == (v1 == v2)


def test_tagged_lift():
    assert evaluate(lift(Tagged("right", Sym("k"))), 0) == Done(Tagged("right", Sym("k")))


def test_term_eq_alpha():
    assert term_eq(parse("(lam a a)"), parse("(lam b b)"))
    assert not term_eq(parse("(lam a a)"), parse("(lam a (pair a a))"))


def test_parse_value():
    assert parse_value("(pair 1 'x)") == PairV(Int(1), Sym("x"))
    with pytest.raises(ValueError):
        parse_value("(fst 1)")
