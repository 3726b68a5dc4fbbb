"""Self-confirming explanations and unfalsifiable beliefs for Mealy machines."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .lang import (
    App, Case, Code, Done, Err, Lam, Lit, Outcome, Pair, PairV, Prim, PrimOp, Proj1, Proj2,
    Quote, Sym, Term, UNIT, Value, Var, print_value, term_eq,
)
from .smn import diagonal, specialize
from .universal import StatefulStep, interpret, interpret_stateful


class MachineError(ValueError):
    pass


@dataclass(frozen=True)
class MealyMachine:
    """Finite deterministic Mealy machine over symbol alphabets.

    ``delta`` and ``out`` map ``(state, input)`` to the next state and the
    output respectively and must be total on ``states x inputs``.
    """

    states: tuple[str, ...]
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    delta: Mapping[tuple[str, str], str]
    out: Mapping[tuple[str, str], str]
    initial: str

    def __post_init__(self) -> None:
        if not self.states or not self.inputs:
            raise MachineError("machine needs at least one state and one input")
        if self.initial not in self.states:
            raise MachineError(f"initial state {self.initial!r} is not a state")
        for x in self.states:
            for a in self.inputs:
                if (x, a) not in self.delta or (x, a) not in self.out:
                    raise MachineError(f"transition table is missing ({x}, {a})")
                if self.delta[x, a] not in self.states:
                    raise MachineError(f"({x}, {a}) moves to undeclared state {self.delta[x, a]!r}")
                if self.out[x, a] not in self.outputs:
                    raise MachineError(f"({x}, {a}) emits undeclared output {self.out[x, a]!r}")
        extra = set(self.delta) - {(x, a) for x in self.states for a in self.inputs}
        if extra:
            raise MachineError(f"transitions for undeclared state/input: {sorted(extra)}")

    def step(self, x: str, a: str) -> tuple[str, str]:
        return self.delta[x, a], self.out[x, a]

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[str, str, str, str]], initial: str | None = None,
                  states: Sequence[str] = (), inputs: Sequence[str] = (),
                  outputs: Sequence[str] = ()) -> MealyMachine:
        delta, out = {}, {}
        xs, as_, bs = list(states), list(inputs), list(outputs)
        for x, a, x2, b in rows:
            if (x, a) in delta:
                raise MachineError(f"duplicate transition for ({x}, {a})")
            delta[x, a], out[x, a] = x2, b
            for seq, item in ((xs, x), (as_, a), (xs, x2), (bs, b)):
                if item not in seq:
                    seq.append(item)
        if not xs:
            raise MachineError("empty machine")
        return cls(tuple(xs), tuple(as_), tuple(bs), delta, out, initial or xs[0])


def parse_machine(text: str) -> MealyMachine:
    """Read the plain-text table format.

    One transition per line, ``state input -> next output``. Optional
    ``initial <state>`` and ``states:``/``inputs:``/``outputs:`` lines declare
    the start state and fix alphabet order. ``#`` starts a comment.
    """
    rows, initial, decl = [], None, {"states": [], "inputs": [], "outputs": []}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(":", 1)
        if len(head) == 2 and head[0].strip() in decl:
            decl[head[0].strip()] = head[1].split()
            continue
        words = line.split()
        if words[0] == "initial" and len(words) == 2:
            initial = words[1]
        elif len(words) == 5 and words[2] == "->":
            rows.append((words[0], words[1], words[3], words[4]))
        else:
            raise MachineError(f"line {lineno}: expected 'state input -> next output'")
    return MealyMachine.from_rows(rows, initial, decl["states"], decl["inputs"], decl["outputs"])


def format_machine(m: MealyMachine) -> str:
    lines = [f"initial {m.initial}", "states: " + " ".join(m.states),
             "inputs: " + " ".join(m.inputs), "outputs: " + " ".join(m.outputs)]
    for x in m.states:
        for a in m.inputs:
            x2, b = m.step(x, a)
            lines.append(f"{x} {a} -> {x2} {b}")
    return "\n".join(lines) + "\n"


# -- compilation -----------------------------------------------------------

_STUCK = Proj1(Lit(UNIT))  # evaluates to a type-mismatch error


def _dispatch(keys: Sequence[str], project, depth: int, leaf) -> Term:
    # Case branches bind a variable, so the pair argument sits at Var(depth).
    if not keys:
        return _STUCK
    k = keys[0]
    test = Prim(PrimOp.EQ_SYM, (project(Var(depth)), Lit(Sym(k))))
    return Case(test, leaf(k, depth + 1), _dispatch(keys[1:], project, depth + 1, leaf))


def compile_machine(m: MealyMachine) -> Code:
    """Object program mapping ``(pair x a)`` to ``(pair delta(x,a) out(x,a))``."""
    def per_state(x: str, depth: int) -> Term:
        def leaf(a: str, _depth: int) -> Term:
            x2, b = m.step(x, a)
            return Pair(Lit(Sym(x2)), Lit(Sym(b)))
        return _dispatch(m.inputs, Proj2, depth, leaf)

    return Code(Lam(_dispatch(m.states, Proj1, 0, per_state)))


# -- self-confirming explanations ------------------------------------------

def _self_spec(r: int, x: Term) -> Term:
    return Prim(PrimOp.SPEC, (Prim(PrimOp.SPEC, (Var(r), Var(r))), x))


def self_confirming_at(t: Code, x: Value) -> Code:
    """Explanation at state ``x`` that ``t`` confirms when fed that explanation.

    ``t`` takes an explanation code, a state and an input. With
    ``E = \\r. \\x. \\a. t (spec (spec r r) x) x a`` the result is
    ``spec(diag(E), x)``, and ``spec (spec E E) x`` rebuilds it verbatim.
    """
    e = Code(Lam(Lam(Lam(App(App(App(t.term, _self_spec(2, Var(1))), Var(1)), Var(0))))))
    return specialize(diagonal(e), x)


def belief_of(q: Code) -> Callable[[Value], Code]:
    """Belief assignment for a process code ``q : (pair x a) -> (pair x' b)``.

    The belief at ``x`` answers ``(pair <belief at x'> b)``.
    """
    # \r. \x. \a. let p = run q (pair x a) in pair (spec (spec r r) (fst p)) (snd p)
    update = Pair(_self_spec(3, Proj1(Var(0))), Proj2(Var(0)))
    run_q = Prim(PrimOp.RUN, (Quote(q.term), Pair(Var(1), Var(0))))
    u = Code(Lam(Lam(Lam(App(Lam(update), run_q)))))
    diag_u = diagonal(u)

    def at(x: Value) -> Code:
        return specialize(diag_u, x)

    return at


@dataclass(frozen=True)
class BeliefAssignment:
    machine: MealyMachine
    belief_at: Mapping[str, Code]

    @classmethod
    def for_machine(cls, m: MealyMachine) -> BeliefAssignment:
        beta = belief_of(compile_machine(m))
        return cls(m, {x: beta(Sym(x)) for x in m.states})

    def replace(self, state: str, code: Code) -> BeliefAssignment:
        beliefs = dict(self.belief_at)
        beliefs[state] = code
        return BeliefAssignment(self.machine, beliefs)


# -- simulation harness ----------------------------------------------------

@dataclass(frozen=True)
class StepRecord:
    index: int
    state: str
    input: str
    true_output: str
    predicted_output: str | None
    next_belief_matches: bool
    error: str | None = None
    # Filled only on a syntactic mismatch: do the two beliefs still behave alike?
    next_belief_agrees: bool | None = None

    @property
    def consistent(self) -> bool:
        return (self.error is None and self.next_belief_matches
                and self.predicted_output == self.true_output)


@dataclass(frozen=True)
class TraceReport:
    steps: tuple[StepRecord, ...] = field(default_factory=tuple)

    @property
    def first_divergence(self) -> int | None:
        for s in self.steps:
            if not s.consistent:
                return s.index
        return None

    @property
    def verdict(self) -> str | int:
        d = self.first_divergence
        return "all-consistent" if d is None else d

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "steps": [
                {"index": s.index, "state": s.state, "input": s.input,
                 "trueOutput": s.true_output, "predictedOutput": s.predicted_output,
                 "nextBeliefMatches": s.next_belief_matches, "error": s.error,
                 **({} if s.next_belief_agrees is None
                    else {"nextBeliefAgrees": s.next_belief_agrees})}
                for s in self.steps
            ],
        }


def _symbol(v: Value) -> str:
    return v.name if isinstance(v, Sym) else print_value(v)


def extensionally_agree(c1: Code, c2: Code, inputs: Sequence[str], fuel: int,
                        depth: int = 2) -> bool:
    """Sampled behavioural equality of two belief codes.

    Both are run on every input and must give the same output; their next
    beliefs are then compared the same way, ``depth`` levels deep.
    """
    if depth <= 0 or term_eq(c1.term, c2.term):
        return True
    for a in inputs:
        r1 = interpret_stateful(c1, Sym(a), fuel)
        r2 = interpret_stateful(c2, Sym(a), fuel)
        if not (isinstance(r1, StatefulStep) and isinstance(r2, StatefulStep)):
            return r1 == r2
        if r1.output != r2.output:
            return False
        if not extensionally_agree(r1.next_belief, r2.next_belief, inputs, fuel, depth - 1):
            return False
    return True


def simulate_and_check(m: MealyMachine, stream: Sequence[str], fuel: int,
                       assignment: BeliefAssignment | None = None) -> TraceReport:
    """Run the machine table and its beliefs in lock-step along ``stream``.

    The belief side is driven only by its own predicted next beliefs; each
    prediction is compared with the assignment at the machine's true next
    state. Stops at the first evaluation failure.
    """
    assignment = assignment or BeliefAssignment.for_machine(m)
    for a in stream:
        if a not in m.inputs:
            raise MachineError(f"input {a!r} is not in the machine's alphabet")
    x = m.initial
    belief = assignment.belief_at[x]
    steps = []
    for i, a in enumerate(stream):
        x2, b = m.step(x, a)
        res = interpret_stateful(belief, Sym(a), fuel)
        if not isinstance(res, StatefulStep):
            detail = "out of fuel" if not isinstance(res, Err) else f"{res.kind}: {res.detail}"
            steps.append(StepRecord(i, x, a, b, None, False, detail))
            break
        expected = assignment.belief_at[x2]
        matches = term_eq(res.next_belief.term, expected.term)
        agrees = None if matches else extensionally_agree(
            res.next_belief, expected, m.inputs, fuel)
        steps.append(StepRecord(i, x, a, b, _symbol(res.output), matches, None, agrees))
        x, belief = x2, res.next_belief
    return TraceReport(tuple(steps))


def output_leg(m: MealyMachine, x: str, a: str, fuel: int) -> Outcome:
    """Second projection of the process code run directly on ``(x, a)``."""
    res = interpret(compile_machine(m), PairV(Sym(x), Sym(a)), fuel)
    if isinstance(res, Done) and isinstance(res.value, PairV):
        return Done(res.value.second)
    return res


__all__ = [
    "BeliefAssignment", "MachineError", "MealyMachine", "StepRecord", "TraceReport",
    "belief_of", "compile_machine", "extensionally_agree", "format_machine", "output_leg", "parse_machine",
    "self_confirming_at", "simulate_and_check",
]
