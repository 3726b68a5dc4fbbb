"""Object-language syntax and runtime values.

Terms use de Bruijn indices: ``Var(0)`` refers to the nearest enclosing
binder. Binders are ``Lam``, ``Fix`` (binds the recursive function itself),
and each branch of ``Case``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union


class PrimOp(Enum):
    ADD = ("add", 2)
    SUB = ("sub", 2)
    MUL = ("mul", 2)
    LE = ("le", 2)
    EQ_INT = ("eq-int", 2)
    EQ_SYM = ("eq-sym", 2)
    NOT = ("not", 1)
    CODE_EQ = ("code-eq", 2)
    SPEC = ("spec", 2)
    RUN = ("run", 2)
    SIZE = ("size", 1)

    def __init__(self, surface: str, arity: int) -> None:
        self.surface = surface
        self.arity = arity

    @classmethod
    def from_surface(cls, name: str) -> PrimOp | None:
        return _PRIMS_BY_NAME.get(name)


_PRIMS_BY_NAME = {op.surface: op for op in PrimOp}


# -- ground values ---------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Unit:
    def __repr__(self) -> str:
        return "Unit()"


@dataclass(frozen=True, slots=True)
class Bool:
    value: bool


@dataclass(frozen=True, slots=True)
class Int:
    value: int


@dataclass(frozen=True, slots=True)
class Sym:
    name: str


GroundValue = Union[Unit, Bool, Int, Sym]
UNIT = Unit()
TRUE = Bool(True)
FALSE = Bool(False)


# -- terms -----------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Var:
    index: int


@dataclass(frozen=True, slots=True)
class Lam:
    body: Term


@dataclass(frozen=True, slots=True)
class App:
    fn: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Lit:
    ground: GroundValue


@dataclass(frozen=True, slots=True)
class Pair:
    first: Term
    second: Term


@dataclass(frozen=True, slots=True)
class Proj1:
    t: Term


@dataclass(frozen=True, slots=True)
class Proj2:
    t: Term


@dataclass(frozen=True, slots=True)
class Inj1:
    t: Term


@dataclass(frozen=True, slots=True)
class Inj2:
    t: Term


@dataclass(frozen=True, slots=True)
class Case:
    """Branch on a tagged value; ``Bool`` scrutinees pick left for true.

    Each branch binds one variable: the payload, or ``unit`` for booleans.
    """

    scrut: Term
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Fix:
    """Recursive function; ``body`` must be a ``Lam`` and sees itself at index 0."""

    body: Term

    def __post_init__(self) -> None:
        if not isinstance(self.body, Lam):
            raise ValueError("fix body must be a lambda")


@dataclass(frozen=True, slots=True)
class Prim:
    op: PrimOp
    args: tuple[Term, ...]

    def __post_init__(self) -> None:
        if len(self.args) != self.op.arity:
            raise ValueError(
                f"{self.op.surface} expects {self.op.arity} argument(s), got {len(self.args)}"
            )


@dataclass(frozen=True, slots=True)
class Quote:
    inner: Term


Term = Union[Var, Lam, App, Lit, Pair, Proj1, Proj2, Inj1, Inj2, Case, Fix, Prim, Quote]


# -- codes and values ------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Code:
    """A closed term reified as data."""

    term: Term


@dataclass(frozen=True, slots=True)
class PairV:
    first: Value
    second: Value


@dataclass(frozen=True, slots=True)
class Tagged:
    side: str  # "left" | "right"
    value: Value


@dataclass(frozen=True, slots=True)
class Closure:
    """Function value. ``env`` is a cons list ``(value, rest)`` or ``None``.

    A recursive closure (from ``Fix``) re-binds itself below the argument
    on every application.
    """

    env: tuple | None
    body: Term
    recursive: bool = False


@dataclass(frozen=True, slots=True)
class CodeV:
    code: Code


Value = Union[Unit, Bool, Int, Sym, PairV, Tagged, Closure, CodeV]
GROUND_TYPES = (Unit, Bool, Int, Sym)


# -- outcomes --------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Done:
    value: Value


@dataclass(frozen=True, slots=True)
class OutOfFuel:
    remaining: int = 0


ERROR_KINDS = frozenset({"type-mismatch", "unbound", "arity", "lift-failure", "shape-mismatch"})


@dataclass(frozen=True, slots=True)
class Err:
    kind: str
    detail: str = ""


Outcome = Union[Done, OutOfFuel, Err]


class LiftError(ValueError):
    """Raised when a value containing a closure is lifted into a term."""


class OpenTermError(ValueError):
    pass


# -- structural helpers ----------------------------------------------------

def is_first_order(v: Value) -> bool:
    stack = [v]
    while stack:
        v = stack.pop()
        if isinstance(v, Closure):
            return False
        if isinstance(v, PairV):
            stack.append(v.first)
            stack.append(v.second)
        elif isinstance(v, Tagged):
            stack.append(v.value)
    return True


def lift(v: Value) -> Term:
    """Embed a first-order value (or code) as a term that evaluates to it."""
    if isinstance(v, GROUND_TYPES):
        return Lit(v)
    if isinstance(v, PairV):
        return Pair(lift(v.first), lift(v.second))
    if isinstance(v, Tagged):
        inner = lift(v.value)
        return Inj1(inner) if v.side == "left" else Inj2(inner)
    if isinstance(v, CodeV):
        return Quote(v.code.term)
    raise LiftError(f"cannot lift {type(v).__name__}")


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, (Var, Lit, Quote)):
        return ()
    if isinstance(t, (Lam, Fix)):
        return (t.body,)
    if isinstance(t, App):
        return (t.fn, t.arg)
    if isinstance(t, Pair):
        return (t.first, t.second)
    if isinstance(t, (Proj1, Proj2, Inj1, Inj2)):
        return (t.t,)
    if isinstance(t, Case):
        return (t.scrut, t.left, t.right)
    if isinstance(t, Prim):
        return t.args
    raise TypeError(f"not a term: {t!r}")


def size(t: Term) -> int:
    """Node count. A quote counts itself plus every node of the quoted term."""
    n = 0
    stack = [t]
    while stack:
        t = stack.pop()
        n += 1
        if isinstance(t, Quote):
            stack.append(t.inner)
        else:
            stack.extend(children(t))
    return n


def max_free(t: Term, depth: int = 0) -> int:
    """Largest number of binders a free variable escapes; 0 when closed."""
    if isinstance(t, Var):
        return t.index - depth + 1 if t.index >= depth else 0
    if isinstance(t, (Lit, Quote)):
        return 0
    if isinstance(t, (Lam, Fix)):
        return max_free(t.body, depth + 1)
    if isinstance(t, Case):
        return max(max_free(t.scrut, depth), max_free(t.left, depth + 1),
                   max_free(t.right, depth + 1))
    return max((max_free(c, depth) for c in children(t)), default=0)


def is_closed(t: Term) -> bool:
    return max_free(t) == 0


def check_well_formed(t: Term) -> None:
    """Raise ``OpenTermError`` if ``t`` is open or contains an open quote."""
    if not is_closed(t):
        raise OpenTermError("term has free variables")
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, Quote):
            if not is_closed(t.inner):
                raise OpenTermError("quoted term has free variables")
            stack.append(t.inner)
        else:
            stack.extend(children(t))


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Shift free variables at or above ``cutoff`` by ``by``."""
    if isinstance(t, Var):
        return Var(t.index + by) if t.index >= cutoff else t
    if isinstance(t, (Lit, Quote)):
        return t
    if isinstance(t, Lam):
        return Lam(shift(t.body, by, cutoff + 1))
    if isinstance(t, Fix):
        return Fix(shift(t.body, by, cutoff + 1))
    if isinstance(t, App):
        return App(shift(t.fn, by, cutoff), shift(t.arg, by, cutoff))
    if isinstance(t, Pair):
        return Pair(shift(t.first, by, cutoff), shift(t.second, by, cutoff))
    if isinstance(t, Case):
        return Case(shift(t.scrut, by, cutoff), shift(t.left, by, cutoff + 1),
                    shift(t.right, by, cutoff + 1))
    if isinstance(t, Prim):
        return Prim(t.op, tuple(shift(a, by, cutoff) for a in t.args))
    return type(t)(shift(t.t, by, cutoff))


def term_eq(t1: Term, t2: Term) -> bool:
    """Alpha-equivalence; on de Bruijn terms this is structural equality."""
    return t1 == t2
