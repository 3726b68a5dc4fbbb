import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reflkit.gen import TermGen
from reflkit.lang import (
    App, Closure, Code, CodeV, Done, Err, Int, Lam, OutOfFuel, PairV, Sym, Var,
    evaluate, lift, parse, term_eq,
)
from reflkit.lang.reference import reference_eval
from reflkit.fixpoint import kleene_fix
from reflkit.lang.terms import OpenTermError
from reflkit.smn import specialize
from reflkit.universal import (
    StatefulStep, decode, encode, interpret, interpret_stateful,
)


def test_encode_identity():
    assert encode(Lam(Var(0))) == Code(Lam(Var(0)))


def test_encode_parsed_term():
    t = parse("(lam a (add a 1))")
    assert encode(t).term == t


def test_encode_rejects_open_terms():
    with pytest.raises(OpenTermError):
        encode(Lam(Var(3)))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_encode_decode_roundtrip(seed):
    t, _, _ = TermGen(random.Random(seed)).unary()
    assert term_eq(decode(encode(t)), t)


def test_interpret_identity():
    assert interpret(encode(parse("(lam a a)")), Int(7), 10) == Done(Int(7))


def test_interpret_increment():
    # 41 + 1
    assert interpret(encode(parse("(lam a (add a 1))")), Int(41), 10) == Done(Int(42))


def test_interpret_specialized_product():
    g = encode(parse("(lam (x a) (mul x a))"))
    # oracle: the unspecialized application evaluated directly
    direct = evaluate(App(App(g.term, lift(Int(3))), lift(Int(5))), 100)
    assert direct == Done(Int(15))
    assert interpret(specialize(g, Int(3)), Int(5), 100) == direct


def test_interpret_charges_one_for_dispatch():
    c = encode(parse("(lam a a)"))
    assert interpret(c, Int(1), 1) == OutOfFuel(0)
    assert interpret(c, Int(1), 2) == Done(Int(1))
    assert interpret(c, Int(1), 0) == OutOfFuel(0)


def test_interpret_rejects_closure_input():
    out = interpret(encode(parse("(lam a a)")), Closure(None, Var(0)), 10)
    assert isinstance(out, Err) and out.kind == "lift-failure"


def test_interpret_accepts_code_input():
    c = encode(parse("(lam q (size q))"))
    assert interpret(c, CodeV(Code(Lam(Var(0)))), 10) == Done(Int(2))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32))
def test_universality_against_reference(seed):
    g = TermGen(random.Random(seed))
    t, in_ty, _ = g.unary()
    a = g.value(in_ty)
    out = interpret(encode(t), a, 10**5)
    ref = reference_eval(App(t, lift(a)))
    if isinstance(out, Done):
        assert out.value == ref
    elif isinstance(out, Err):
        assert ref == "stuck"


def test_self_application_through_run():
    # a code that interprets another code it receives
    runner = encode(parse("(lam p (run (fst p) (snd p)))"))
    inc = CodeV(encode(parse("(lam a (add a 1))")))
    assert interpret(runner, PairV(inc, Int(4)), 20) == Done(Int(5))
    # and a runner handed itself, bounded by fuel
    tower = encode(parse("(lam p (run p p))"))
    assert interpret(tower, CodeV(tower), 500) == OutOfFuel(0)


def test_stateful_constant_belief():
    # beta with {beta}(a) = (beta, 0), obtained as a fixpoint
    beta = kleene_fix(Code(parse("(lam (p a) (pair p 0))")))
    for a in (Int(1), Sym("x"), PairV(Int(0), Int(0))):
        step = interpret_stateful(beta, a, 100)
        assert isinstance(step, StatefulStep)
        assert term_eq(step.next_belief.term, beta.term)
        assert step.output == Int(0)


def test_stateful_fixed_reply():
    const = Code(parse("(lam a (pair (quote (lam a 0)) 0))"))
    assert interpret_stateful(const, Sym("i"), 10) == StatefulStep(Code(parse("(lam a 0)")), Int(0))


def test_stateful_toggle_belief():
    from reflkit.belief import MealyMachine, belief_of, compile_machine
    m = MealyMachine.from_rows([("x0", "i", "x1", "p"), ("x1", "i", "x0", "q")])
    beta = belief_of(compile_machine(m))
    step = interpret_stateful(beta(Sym("x0")), Sym("i"), 1000)
    # table: (x0, i) -> (x1, p)
    assert step.output == Sym("p")
    assert term_eq(step.next_belief.term, beta(Sym("x1")).term)


def test_stateful_shape_mismatch():
    out = interpret_stateful(encode(parse("(lam a 3)")), Int(1), 10)
    assert isinstance(out, Err) and out.kind == "shape-mismatch"


def test_stateful_out_of_fuel_propagates():
    loop = encode(parse("(lam a ((fix f (lam x (f x))) a))"))
    assert interpret_stateful(loop, Int(1), 100) == OutOfFuel(0)


def test_stateful_projection_coherence():
    b = Code(parse("(lam a (pair (quote (lam z z)) (add a 1)))"))
    whole = interpret(b, Int(2), 20)
    step = interpret_stateful(b, Int(2), 20)
    assert whole.value.first == CodeV(step.next_belief)
    assert whole.value.second == step.output
