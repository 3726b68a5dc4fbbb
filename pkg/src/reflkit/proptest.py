"""Seeded property suites for every construction.

Each case draws from its own RNG seeded by ``(seed, case index)``, so cases
are independent and can be fanned out to worker processes without changing
the output.
"""

from __future__ import annotations

import random
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import dynlogic
from .belief import (
    belief_of, compile_machine, output_leg, self_confirming_at, simulate_and_check,
)
from .fixpoint import kleene_fix
from .gen import TermGen, random_frame, random_machine, random_stream
from .lang import (
    App, Code, CodeV, Done, Err, Int, Lam, OutOfFuel, Prim, PrimOp, Sym, Var,
    evaluate, evaluate_counted, lift, parse, print_term, term_eq,
)
from .lang.reference import _count as reference_size
from .lang.reference import reference_eval
from .smn import specialize
from .universal import encode, interpret, interpret2

FUEL = 100_000
REFERENCE_LIMIT = 100_000

CaseResult = dict  # law name -> True | False | None (not applicable)


def _agrees(out, ref) -> bool | None:
    """Compare a machine outcome with a reference result; None if not halting."""
    if ref == "exhausted" or isinstance(out, OutOfFuel):
        return None
    if ref == "stuck":
        return isinstance(out, Err)
    if ref == "function":
        return None
    return isinstance(out, Done) and out.value == ref


def _rng(seed: int, suite: str, i: int) -> random.Random:
    return random.Random(f"{suite}:{seed}:{i}")


def case_univ(seed: int, i: int) -> CaseResult:
    g = TermGen(_rng(seed, "univ", i))
    t, in_ty, _ = g.unary()
    code = encode(t)
    results, monotone = [], True
    for _ in range(5):
        a = g.value(in_ty)
        out = interpret(code, a, FUEL)
        results.append(_agrees(out, reference_eval(App(t, lift(a)), REFERENCE_LIMIT)))
        if isinstance(out, Done):
            first, used = evaluate_counted(App(t, lift(a)), FUEL)
            need = used
            monotone &= (evaluate(App(t, lift(a)), need) == first
                         and evaluate(App(t, lift(a)), 2 * need + 7) == first
                         and (need == 0 or isinstance(evaluate(App(t, lift(a)), need - 1), OutOfFuel)))
    checked = [r for r in results if r is not None]
    return {
        "universality": all(checked) if checked else None,
        "print-parse": parse(print_term(t)) == t,
        "fuel-monotone": monotone,
    }


def case_smn(seed: int, i: int) -> CaseResult:
    g = TermGen(_rng(seed, "smn", i))
    term, x_ty, a_ty = g.binary()
    code = Code(term)
    x = g.value(x_ty)
    spec = specialize(code, x)
    results, meta = [], []
    for _ in range(3):
        a = g.value(a_ty)
        out = interpret(spec, a, FUEL)
        results.append(_agrees(out, reference_eval(App(App(term, lift(x)), lift(a)))))
        nested = interpret2(code, x, a, FUEL)
        if not isinstance(out, OutOfFuel) and not isinstance(nested, OutOfFuel):
            meta.append(out == nested)
    checked = [r for r in results if r is not None]
    obj = evaluate(Prim(PrimOp.SPEC, (lift(CodeV(code)), lift(x))), 10)
    return {
        "smn-law": all(checked) if checked else None,
        "nested-interpret": all(meta) if meta else None,
        "object-meta": obj == Done(CodeV(spec)),
        "syntactic-stability": spec.term.fn == term,
    }


def case_fix(seed: int, i: int) -> CaseResult:
    rng = _rng(seed, "fix", i)
    g = Code(TermGen(rng).fix_family())
    gamma = kleene_fix(g)
    results = []
    for _ in range(3):
        a = Int(rng.randint(-1, 6))
        out = interpret(gamma, a, FUEL)
        ref = reference_eval(App(App(g.term, lift(CodeV(gamma))), lift(a)), REFERENCE_LIMIT)
        results.append(_agrees(out, ref) is True)
    k = rng.randint(0, 9)
    quine = kleene_fix(Code(parse(f"(lam (p a) (add (size p) {k}))")))
    size_out = interpret(quine, Int(rng.randint(0, 5)), FUEL)
    return {
        "fixpoint-law": all(results),
        "size-quine": size_out == Done(Int(reference_size(quine.term) + k)),
    }


def case_fund(seed: int, i: int) -> CaseResult:
    rng = _rng(seed, "fund", i)
    g = TermGen(rng)
    x_ty = g.first_order_type(1)
    t = Code(g.transition_family(x_ty))
    results = []
    for _ in range(2):
        x = g.value(x_ty)
        expl = self_confirming_at(t, x)
        for _ in range(2):
            a = Int(rng.randint(-1, 6))
            out = interpret(expl, a, FUEL)
            ref = reference_eval(App(App(App(t.term, lift(CodeV(expl))), lift(x)), lift(a)),
                                 REFERENCE_LIMIT)
            results.append(_agrees(out, ref) is True)
    x = g.value(x_ty)
    size_t = Code(Lam(Lam(Lam(Prim(PrimOp.SIZE, (Var(2),))))))
    expl = self_confirming_at(size_t, x)
    return {
        "self-confirmation": all(results),
        "size-self": interpret(expl, Int(0), FUEL) == Done(Int(reference_size(expl.term))),
    }


def case_ana(seed: int, i: int, length: int = 50) -> CaseResult:
    rng = _rng(seed, "ana", i)
    m = random_machine(rng)
    stream = random_stream(rng, m, length)
    report = simulate_and_check(m, stream, FUEL)
    coherent = all(
        output_leg(m, s.state, s.input, FUEL) == Done(Sym(s.predicted_output))
        for s in report.steps
    )
    beta1, beta2 = belief_of(compile_machine(m)), belief_of(compile_machine(m))
    stable = all(term_eq(beta1(Sym(x)).term, beta2(Sym(x)).term) for x in m.states)
    return {
        "unfalsifiability": report.verdict == "all-consistent" and len(report.steps) == length,
        "projection-coherence": coherent,
        "belief-determinism": stable,
        "steps": len(report.steps),
    }


def case_galois(seed: int, i: int) -> CaseResult:
    rng = _rng(seed, "galois", i)
    frame = random_frame(rng, worlds=4, events=2)
    rep = dynlogic.check_galois(frame)
    preds = list(frame.predicates())
    mono = True
    for a in preds:
        for b in preds:
            if a <= b:
                for e in frame.events:
                    mono &= dynlogic.sp(frame, a, e) <= dynlogic.sp(frame, b, e)
                    mono &= dynlogic.wp(frame, e, a) <= dynlogic.wp(frame, e, b)
    meet = dict(frame.events)
    meet["meet"] = frame.events["e0"] & frame.events["e1"]
    small = dynlogic.DynamicFrame(frame.worlds, meet)
    antitone = all(dynlogic.wp(small, "e0", b) <= dynlogic.wp(small, "meet", b) for b in preds)
    return {
        "galois": rep.pairs == rep.agree,
        "interior": rep.singles == rep.interior,
        "closure": rep.singles == rep.closure,
        "monotonicity": mono,
        "wp-antitone": antitone,
    }


SUITES: dict[str, Callable[[int, int], CaseResult]] = {
    "univ": case_univ,
    "smn": case_smn,
    "fix": case_fix,
    "fund": case_fund,
    "ana": case_ana,
    "galois": case_galois,
}


@dataclass
class LawCount:
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    failures: list[int] = field(default_factory=list)


@dataclass
class SuiteResult:
    suite: str
    cases: int
    seed: int
    laws: dict[str, LawCount]
    extra: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.failed == 0 for c in self.laws.values())

    def summary(self) -> str:
        lines = [f"suite {self.suite}  cases {self.cases}  seed {self.seed}"]
        width = max((len(k) for k in self.laws), default=0)
        for name, c in self.laws.items():
            total = c.passed + c.failed
            line = f"  {name:<{width}}  {c.passed}/{total} pass"
            if c.skipped:
                line += f"  ({c.skipped} skipped: no halting comparison)"
            if c.failures:
                line += "  failing cases: " + ",".join(map(str, c.failures[:10]))
            lines.append(line)
        for k, v in self.extra.items():
            lines.append(f"  {k}: {v}")
        lines.append("result: " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "suite": self.suite, "cases": self.cases, "seed": self.seed, "ok": self.ok,
            "laws": {k: {"passed": c.passed, "failed": c.failed, "skipped": c.skipped,
                         "failingCases": c.failures}
                     for k, c in self.laws.items()},
            "extra": self.extra,
        }


def _run_one(args: tuple[str, int, int]) -> CaseResult:
    suite, seed, i = args
    return SUITES[suite](seed, i)


def run_suite(suite: str, cases: int, seed: int = 0, workers: int = 1) -> SuiteResult:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    jobs = [(suite, seed, i) for i in range(cases)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=8))
    else:
        results = [_run_one(j) for j in jobs]
    laws: dict[str, LawCount] = {}
    extra: dict[str, int] = {}
    for i, res in enumerate(results):
        for name, ok in res.items():
            if not isinstance(ok, (bool, type(None))):
                extra[name] = extra.get(name, 0) + ok
                continue
            c = laws.setdefault(name, LawCount())
            if ok is None:
                c.skipped += 1
            elif ok:
                c.passed += 1
            else:
                c.failed += 1
                c.failures.append(i)
    return SuiteResult(suite, cases, seed, laws, extra)


__all__ = ["SUITES", "SuiteResult", "run_suite"]
