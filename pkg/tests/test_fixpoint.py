import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reflkit.fixpoint import (
    CAVEAT, CONTROL, NEGATION, ProvabilityQuery, budget_truth_agreement, goedel_sentence,
    goedel_sweep, kleene_fix, negate, proof_of, provable,
)
from reflkit.gen import BOOL, TermGen
from reflkit.lang import (
    FALSE, App, Code, CodeV, Done, Int, Lam, OutOfFuel, Unit, lift, parse,
)
from reflkit.lang.reference import _count, reference_eval
from reflkit.smn import specialize
from reflkit.universal import encode, interpret, interpret2


def test_fixpoint_of_code_ignoring_family():
    gamma = kleene_fix(encode(parse("(lam (p a) a)")))
    for a in range(-2, 5):
        assert interpret(gamma, Int(a), 100) == Done(Int(a))


def test_size_quine():
    gamma = kleene_fix(encode(parse("(lam (p a) (size p))")))
    # H = 2 lam + 2 app + g (4) + spec (3) + var = 12; Gamma = app + H + quote + H = 26
    assert interpret(gamma, Int(0), 100) == Done(Int(26))
    assert _count(gamma.term) == 26


def test_recursive_fixpoint_counts_down():
    g = encode(parse("(lam (p a) (if (le a 0) 0 (add 1 (run p (sub a 1)))))"))
    gamma = kleene_fix(g)
    for a in range(11):
        assert interpret(gamma, Int(a), 10_000) == Done(Int(a))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), st.integers(-1, 6))
def test_fixpoint_law(seed, a):
    g = Code(TermGen(random.Random(seed)).fix_family())
    gamma = kleene_fix(g)
    out = interpret(gamma, Int(a), 10**5)
    assert out == interpret2(g, CodeV(gamma), Int(a), 10**5)
    ref = reference_eval(App(App(g.term, lift(CodeV(gamma))), lift(Int(a))))
    # generated families are total; a few carry a deliberate type error
    assert out.value == ref if isinstance(out, Done) else ref == "stuck"


def test_provable_control():
    assert provable(ProvabilityQuery(encode(parse("(lam a true)")), Int(3), 1000))


def test_diverging_predicate_is_never_provable():
    loop = encode(parse("(lam a ((fix f (lam x (f x))) a))"))
    for k in (0, 10, 1000, 10**4):
        assert not provable(ProvabilityQuery(loop, Unit(), k))


def test_provable_equality_predicate():
    p = encode(parse("(lam a (eq-int a 5))"))
    assert provable(ProvabilityQuery(p, Int(5), 100))
    assert not provable(ProvabilityQuery(p, Int(4), 100))


def test_non_boolean_result_is_not_a_proof():
    assert not provable(ProvabilityQuery(encode(parse("(lam a 1)")), Int(0), 100))


def test_negative_budget_rejected():
    with pytest.raises(ValueError):
        ProvabilityQuery(CONTROL, Unit(), -1)


def test_proof_object_is_the_trace():
    proof = proof_of(ProvabilityQuery(CONTROL, Unit(), 10))
    assert [k for k, _ in proof] == ["dispatch", "beta"]
    assert proof_of(ProvabilityQuery(encode(parse("(lam a false)")), Unit(), 10)) is None


def test_provability_monotone_in_budget():
    p = encode(parse("(lam a (le ((fix f (lam n (if (le n 0) 0 (add 1 (f (sub n 1)))))) a) 20))"))
    results = [provable(ProvabilityQuery(p, Int(10), k)) for k in range(0, 80)]
    first = results.index(True)
    assert all(results[first:]) and not any(results[:first])


def test_budget_truth_agreement_examples():
    assert budget_truth_agreement(encode(parse("(lam a true)")), Unit(), 10)
    assert budget_truth_agreement(encode(parse("(lam a false)")), Unit(), 10)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_budget_truth_agreement_random(seed):
    g = TermGen(random.Random(seed))
    ty = g.first_order_type()
    pred = Code(Lam(g.expr(BOOL, [ty], 4)))
    assert budget_truth_agreement(pred, g.value(ty), 10**4)


def test_negation_wrapper():
    p = encode(parse("(lam a (le a 3))"))
    np = negate(p)
    assert np == specialize(NEGATION, CodeV(p))
    assert interpret(np, Int(1), 100) == Done(FALSE)


def test_goedel_pair_shape():
    pair = goedel_sentence()
    assert pair.neg_gamma.term == App(NEGATION.term, lift(CodeV(pair.gamma)))


def test_goedel_sweep_neither_provable():
    rows = goedel_sweep((10**2, 10**3, 10**4, 10**5))
    for r in rows:
        assert not r.provable_gamma and not r.provable_neg_gamma
        # budget exhausted: the search never terminates
        assert r.steps_gamma == r.budget == r.steps_neg_gamma
    assert provable(ProvabilityQuery(CONTROL, Unit(), 10))


def test_goedel_sentences_diverge():
    pair = goedel_sentence()
    assert interpret(pair.gamma, Unit(), 5000) == OutOfFuel(0)
    assert interpret(pair.neg_gamma, Unit(), 5000) == OutOfFuel(0)


def test_caveat_mentions_budget():
    assert "budget" in CAVEAT
