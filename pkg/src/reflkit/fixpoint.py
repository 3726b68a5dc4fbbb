"""Kleene fixpoints and a budget-bounded Goedel sentence."""

from __future__ import annotations

from dataclasses import dataclass

from .lang import (
    TRUE, App, Code, CodeV, Done, Lam, Prim, PrimOp, Unit, Value, Var,
    evaluate_counted, lift, parse,
)
from .smn import diagonal, specialize
from .universal import interpret

DEFAULT_SWEEP = (10**2, 10**3, 10**4, 10**5)

CAVEAT = (
    "caveat: this shows non-provability only up to each listed budget; "
    "it is not a proof that no budget suffices"
)

# \q. \a. not (run q a)
NEGATION = Code(parse("(lam (q a) (not (run q a)))"))

# Provability by evaluation: the proof of c(a) is its terminating run.
# Forces a boolean answer so a non-boolean run is not mistaken for a proof.
PROVES = parse("(lam (c a) (if (run c a) true false))")


@dataclass(frozen=True)
class ProvabilityQuery:
    predicate: Code
    input: Value
    budget: int

    def __post_init__(self) -> None:
        if self.budget < 0:
            raise ValueError("budget must be non-negative")


@dataclass(frozen=True)
class GoedelPair:
    gamma: Code
    neg_gamma: Code


@dataclass(frozen=True)
class SweepRow:
    budget: int
    provable_gamma: bool
    provable_neg_gamma: bool
    steps_gamma: int
    steps_neg_gamma: int


def kleene_fix(g: Code) -> Code:
    """Return Gamma with ``{Gamma}(a) == g(code(Gamma), a)``.

    Gamma is ``H`` applied to its own code, where
    ``H = \\q. \\a. g (spec q q) a`` with ``g`` spliced in verbatim.
    """
    self_code = Prim(PrimOp.SPEC, (Var(1), Var(1)))
    h = Code(Lam(Lam(App(App(g.term, self_code), Var(0)))))
    return diagonal(h)


def negate(p: Code) -> Code:
    """Code of the boolean negation of predicate ``p``."""
    return specialize(NEGATION, CodeV(p))


def provable(q: ProvabilityQuery) -> bool:
    return interpret(q.predicate, q.input, q.budget) == Done(TRUE)


def proof_of(q: ProvabilityQuery) -> list | None:
    """The evaluation trace witnessing ``provable(q)``, or ``None``."""
    if q.budget <= 0:
        return None
    trace: list = [("dispatch", "")]
    out, _ = evaluate_counted(App(q.predicate.term, lift(q.input)), q.budget - 1, trace)
    return trace if out == Done(TRUE) else None


def budget_truth_agreement(p: Code, a: Value, fuel: int) -> bool:
    by_search = provable(ProvabilityQuery(p, a, fuel))
    by_truth = interpret(p, a, fuel) == Done(TRUE)
    return by_search == by_truth


def goedel_sentence() -> GoedelPair:
    """gamma is the fixpoint of ``g(p, a) = provable(not p, a)``."""
    neg_of_p = Prim(PrimOp.SPEC, (lift(CodeV(NEGATION)), Var(1)))
    g = Code(Lam(Lam(App(App(PROVES, neg_of_p), Var(0)))))
    gamma = kleene_fix(g)
    return GoedelPair(gamma, negate(gamma))


def steps_to_decide(p: Code, a: Value, budget: int) -> tuple[bool, int]:
    """Whether ``p(a)`` is provable within ``budget``, and the steps spent."""
    if budget <= 0:
        return False, 0
    out, used = evaluate_counted(App(p.term, lift(a)), budget - 1)
    return out == Done(TRUE), used + 1


def goedel_sweep(budgets=DEFAULT_SWEEP, pair: GoedelPair | None = None,
                 a: Value = Unit()) -> list[SweepRow]:
    pair = pair or goedel_sentence()
    rows = []
    for k in budgets:
        pg, sg = steps_to_decide(pair.gamma, a, k)
        pn, sn = steps_to_decide(pair.neg_gamma, a, k)
        rows.append(SweepRow(k, pg, pn, sg, sn))
    return rows


CONTROL = Code(parse("(lam a true)"))
