"""The universal interpreter, plain and stateful."""

from __future__ import annotations

from dataclasses import dataclass

from .lang import (
    App, Code, CodeV, Done, Err, OpenTermError, OutOfFuel, Outcome, PairV, Term, Value,
    check_well_formed, evaluate, is_first_order, lift,
)


@dataclass(frozen=True)
class StatefulStep:
    next_belief: Code
    output: Value


def encode(t: Term) -> Code:
    """Wrap a closed term as a code."""
    check_well_formed(t)
    return Code(t)


def decode(c: Code) -> Term:
    return c.term


def _call(fn: Term, args: tuple[Value, ...], fuel: int) -> Outcome:
    for a in args:
        if not is_first_order(a):
            return Err("lift-failure", "interpreter input contains a closure")
        fn = App(fn, lift(a))
    return evaluate(fn, fuel)


def interpret(c: Code, a: Value, fuel: int) -> Outcome:
    """Run code ``c`` on ``a``; one unit of fuel is charged for dispatch."""
    if fuel <= 0:
        return OutOfFuel(0)
    return _call(c.term, (a,), fuel - 1)


def interpret2(g: Code, x: Value, a: Value, fuel: int) -> Outcome:
    """Apply a curried two-argument code to ``x`` then ``a``."""
    return _call(g.term, (x, a), fuel)


def interpret3(t: Code, l: Value, x: Value, a: Value, fuel: int) -> Outcome:
    return _call(t.term, (l, x, a), fuel)


def interpret_stateful(b: Code, a: Value, fuel: int) -> StatefulStep | Outcome:
    """Run a belief code; it must answer ``(pair <next code> <output>)``.

    Returns a :class:`StatefulStep` on success, otherwise the failing
    outcome (``OutOfFuel`` or ``Err``, including ``shape-mismatch``).
    """
    out = interpret(b, a, fuel)
    if not isinstance(out, Done):
        return out
    v = out.value
    if not (isinstance(v, PairV) and isinstance(v.first, CodeV) and is_first_order(v.second)):
        return Err("shape-mismatch", "belief did not return (pair <code> <output>)")
    return StatefulStep(v.first.code, v.second)


__all__ = [
    "OpenTermError", "StatefulStep", "decode", "encode", "interpret", "interpret2",
    "interpret3", "interpret_stateful",
]
