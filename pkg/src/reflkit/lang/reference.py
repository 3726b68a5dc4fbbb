"""Reference evaluator by de Bruijn substitution.

Deliberately shares nothing with :mod:`reflkit.lang.machine` beyond the term
datatypes: values are terms in normal form, binders are eliminated by
substitution, and recursion is unfolded syntactically. It is slow and uses
the Python stack, and exists to cross-check the machine.
"""

from __future__ import annotations

import sys

from .terms import (
    App, Bool, Case, Code, CodeV, Fix, Inj1, Inj2, Int, Lam, Lit, Pair, PairV, Prim,
    PrimOp, Proj1, Proj2, Quote, Sym, Tagged, Term, UNIT, Value, Var, shift,
)


class Stuck(Exception):
    """Evaluation went wrong (ill-typed primitive, bad projection, ...)."""


class Exhausted(Exception):
    """The step limit was reached."""


def subst(t: Term, j: int, s: Term) -> Term:
    """Replace ``Var(j)`` by closed ``s`` and lower the variables above ``j``."""
    if isinstance(t, Var):
        if t.index == j:
            return s
        return Var(t.index - 1) if t.index > j else t
    if isinstance(t, (Lit, Quote)):
        return t
    if isinstance(t, Lam):
        return Lam(subst(t.body, j + 1, s))
    if isinstance(t, Fix):
        return Fix(subst(t.body, j + 1, s))
    if isinstance(t, App):
        return App(subst(t.fn, j, s), subst(t.arg, j, s))
    if isinstance(t, Pair):
        return Pair(subst(t.first, j, s), subst(t.second, j, s))
    if isinstance(t, Case):
        return Case(subst(t.scrut, j, s), subst(t.left, j + 1, s), subst(t.right, j + 1, s))
    if isinstance(t, Prim):
        return Prim(t.op, tuple(subst(a, j, s) for a in t.args))
    return type(t)(subst(t.t, j, s))


class Reference:
    def __init__(self, limit: int) -> None:
        self.limit = limit

    def tick(self) -> None:
        if self.limit <= 0:
            raise Exhausted
        self.limit -= 1

    def ev(self, t: Term) -> Term:
        if isinstance(t, (Lit, Lam, Quote)):
            return t
        if isinstance(t, Fix):
            # fix f. \x. b  ~>  \x. b[fix f. \x. b / f]
            return Lam(subst(t.body.body, 1, shift(t, 1)))
        if isinstance(t, Var):
            raise Stuck("free variable")
        if isinstance(t, App):
            f = self.ev(t.fn)
            a = self.ev(t.arg)
            return self.beta(f, a)
        if isinstance(t, Pair):
            return Pair(self.ev(t.first), self.ev(t.second))
        if isinstance(t, (Proj1, Proj2)):
            p = self.ev(t.t)
            if not isinstance(p, Pair):
                raise Stuck("projection")
            return p.first if isinstance(t, Proj1) else p.second
        if isinstance(t, (Inj1, Inj2)):
            return type(t)(self.ev(t.t))
        if isinstance(t, Case):
            s = self.ev(t.scrut)
            if isinstance(s, Inj1):
                return self.ev(subst(t.left, 0, s.t))
            if isinstance(s, Inj2):
                return self.ev(subst(t.right, 0, s.t))
            if isinstance(s, Lit) and isinstance(s.ground, Bool):
                branch = t.left if s.ground.value else t.right
                return self.ev(subst(branch, 0, Lit(UNIT)))
            raise Stuck("case")
        if isinstance(t, Prim):
            args = [self.ev(a) for a in t.args]
            self.tick()
            return self.prim(t.op, args)
        raise Stuck(f"unknown term {t!r}")

    def beta(self, f: Term, a: Term) -> Term:
        if not isinstance(f, Lam):
            raise Stuck("apply")
        self.tick()
        return self.ev(subst(f.body, 0, a))

    def prim(self, op: PrimOp, args: list[Term]) -> Term:
        g = [a.ground if isinstance(a, Lit) else None for a in args]
        if op.surface in ("add", "sub", "mul", "le", "eq-int"):
            if not all(isinstance(x, Int) for x in g):
                raise Stuck(op.surface)
            x, y = g[0].value, g[1].value
            r = {"add": lambda: Int(x + y), "sub": lambda: Int(x - y),
                 "mul": lambda: Int(x * y), "le": lambda: Bool(x <= y),
                 "eq-int": lambda: Bool(x == y)}[op.surface]()
            return Lit(r)
        if op is PrimOp.EQ_SYM:
            if not all(isinstance(x, Sym) for x in g):
                raise Stuck("eq-sym")
            return Lit(Bool(g[0] == g[1]))
        if op is PrimOp.NOT:
            if not isinstance(g[0], Bool):
                raise Stuck("not")
            return Lit(Bool(not g[0].value))
        if not isinstance(args[0], Quote):
            raise Stuck(op.surface)
        code = args[0].inner
        if op is PrimOp.SIZE:
            return Lit(Int(_count(code)))
        if op is PrimOp.CODE_EQ:
            if not isinstance(args[1], Quote):
                raise Stuck("code-eq")
            return Lit(Bool(code == args[1].inner))
        if _has_lam(args[1]):
            raise Stuck("lift")
        if op is PrimOp.SPEC:
            return Quote(App(code, args[1]))
        # run: apply the code to the argument value
        return self.beta(self.ev(code), args[1])


def _count(t: Term) -> int:
    if isinstance(t, (Var, Lit)):
        return 1
    if isinstance(t, Quote):
        return 1 + _count(t.inner)
    if isinstance(t, (Lam, Fix)):
        return 1 + _count(t.body)
    if isinstance(t, App):
        return 1 + _count(t.fn) + _count(t.arg)
    if isinstance(t, Pair):
        return 1 + _count(t.first) + _count(t.second)
    if isinstance(t, Case):
        return 1 + _count(t.scrut) + _count(t.left) + _count(t.right)
    if isinstance(t, Prim):
        return 1 + sum(_count(a) for a in t.args)
    return 1 + _count(t.t)


def _has_lam(t: Term) -> bool:
    if isinstance(t, (Lam, Fix)):
        return True
    if isinstance(t, Pair):
        return _has_lam(t.first) or _has_lam(t.second)
    if isinstance(t, (Inj1, Inj2)):
        return _has_lam(t.t)
    return False


def to_value(t: Term) -> Value:
    """Convert a first-order normal form back into a machine value."""
    if isinstance(t, Lit):
        return t.ground
    if isinstance(t, Pair):
        return PairV(to_value(t.first), to_value(t.second))
    if isinstance(t, Inj1):
        return Tagged("left", to_value(t.t))
    if isinstance(t, Inj2):
        return Tagged("right", to_value(t.t))
    if isinstance(t, Quote):
        return CodeV(Code(t.inner))
    raise Stuck("higher-order result")


def reference_eval(t: Term, limit: int = 100_000) -> Value | str:
    """Evaluate ``t``; return a value, ``"stuck"`` or ``"exhausted"``.

    A function-valued result is reported as ``"function"``.
    """
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20_000))
    try:
        nf = Reference(limit).ev(t)
    except Stuck:
        return "stuck"
    except (Exhausted, RecursionError):
        return "exhausted"
    finally:
        sys.setrecursionlimit(old)
    if _has_lam(nf):
        return "function"
    return to_value(nf)
