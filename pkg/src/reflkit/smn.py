"""Specialization of coded parametric families."""

from __future__ import annotations

from collections.abc import Iterable

from .lang import App, Code, CodeV, Value, lift


def specialize(g: Code, x: Value) -> Code:
    """Fix the first argument of ``g`` to ``x``.

    Purely syntactic: the result is ``g`` applied to the literal for ``x``.
    Raises :class:`~reflkit.lang.LiftError` if ``x`` holds a closure.
    """
    return Code(App(g.term, lift(x)))


def specialize_many(g: Code, xs: Iterable[Value]) -> Code:
    for x in xs:
        g = specialize(g, x)
    return g


def diagonal(p: Code) -> Code:
    """``p`` specialized to its own code."""
    return specialize(p, CodeV(p))
