"""Seeded random generators for terms, codes, machines and frames.

Terms are generated against a small first-order type discipline so that most
of them halt without error; a few ill-typed projections are mixed in on
purpose so error propagation is exercised too.
"""

from __future__ import annotations

import random

from .dynlogic import DynamicFrame
from .belief import MealyMachine
from .lang import (
    FALSE, TRUE, UNIT, App, Case, Code, CodeV, Fix, Inj1, Inj2, Int, Lam, Lit,
    Pair, PairV, Prim, PrimOp, Proj1, Proj2, Sym, Tagged, Term, Value, Var, lift,
)

INT, BOOL, SYM, UNIT_T, CODE = ("int",), ("bool",), ("sym",), ("unit",), ("code",)
SYMBOLS = ("s0", "s1", "s2")

_QUOTABLE = (
    Lam(Var(0)),
    Lam(Prim(PrimOp.ADD, (Var(0), Lit(Int(1))))),
    Lam(Lam(Pair(Var(1), Var(0)))),
    Lam(Lit(TRUE)),
)


def pair_t(a, b):
    return ("pair", a, b)


def sum_t(a, b):
    return ("sum", a, b)


class TermGen:
    def __init__(self, rng: random.Random, err_rate: float = 0.02) -> None:
        self.rng = rng
        self.err_rate = err_rate

    # -- types and values --------------------------------------------------

    def first_order_type(self, depth: int = 2):
        r = self.rng.random()
        if depth <= 0 or r < 0.5:
            return self.rng.choice((INT, INT, BOOL, SYM))
        if r < 0.8:
            return pair_t(self.first_order_type(depth - 1), self.first_order_type(depth - 1))
        return sum_t(self.first_order_type(depth - 1), self.first_order_type(depth - 1))

    def value(self, ty) -> Value:
        rng = self.rng
        tag = ty[0]
        if tag == "int":
            return Int(rng.randint(-5, 12))
        if tag == "bool":
            return TRUE if rng.random() < 0.5 else FALSE
        if tag == "sym":
            return Sym(rng.choice(SYMBOLS))
        if tag == "unit":
            return UNIT
        if tag == "pair":
            return PairV(self.value(ty[1]), self.value(ty[2]))
        if tag == "sum":
            side = rng.choice(("left", "right"))
            return Tagged(side, self.value(ty[1] if side == "left" else ty[2]))
        return CodeV(Code(rng.choice(_QUOTABLE)))

    def literal(self, ty) -> Term:
        return lift(self.value(ty))

    # -- expressions -------------------------------------------------------

    def var_of(self, ty, ctx: list) -> Term | None:
        hits = [len(ctx) - 1 - i for i, t in enumerate(ctx) if t == ty]
        return Var(self.rng.choice(hits)) if hits else None

    def expr(self, ty, ctx: list, depth: int) -> Term:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.2:
            v = self.var_of(ty, ctx)
            if v is not None and rng.random() < 0.7:
                return v
            return self.literal(ty)
        choice = rng.random()
        if choice < 0.12:
            return self._if(ty, ctx, depth)
        if choice < 0.20:
            return self._let(ty, ctx, depth)
        if choice < 0.26:
            return self._proj(ty, ctx, depth)
        if choice < 0.32:
            return self._case(ty, ctx, depth)
        if choice < 0.36:
            return self._apply_lambda(ty, ctx, depth)
        return self._intro(ty, ctx, depth)

    def _intro(self, ty, ctx, depth) -> Term:
        rng = self.rng
        tag = ty[0]
        d = depth - 1
        if tag == "int":
            r = rng.random()
            if r < self.err_rate:
                return Proj1(Lit(Int(rng.randint(0, 3))))
            if r < 0.12:
                return self._countdown(ctx, d)
            if r < 0.22 and CODE in ctx:
                return Prim(PrimOp.SIZE, (self.expr(CODE, ctx, d),))
            op = rng.choice((PrimOp.ADD, PrimOp.SUB, PrimOp.MUL, PrimOp.ADD))
            return Prim(op, (self.expr(INT, ctx, d), self.expr(INT, ctx, d)))
        if tag == "bool":
            r = rng.random()
            if r < 0.35:
                op = rng.choice((PrimOp.LE, PrimOp.EQ_INT))
                return Prim(op, (self.expr(INT, ctx, d), self.expr(INT, ctx, d)))
            if r < 0.55:
                return Prim(PrimOp.NOT, (self.expr(BOOL, ctx, d),))
            if r < 0.75:
                return Prim(PrimOp.EQ_SYM, (self.expr(SYM, ctx, d), self.expr(SYM, ctx, d)))
            if r < 0.85 and CODE in ctx:
                return Prim(PrimOp.CODE_EQ, (self.expr(CODE, ctx, d), self.expr(CODE, ctx, d)))
            return self.literal(ty)
        if tag == "pair":
            return Pair(self.expr(ty[1], ctx, d), self.expr(ty[2], ctx, d))
        if tag == "sum":
            if rng.random() < 0.5:
                return Inj1(self.expr(ty[1], ctx, d))
            return Inj2(self.expr(ty[2], ctx, d))
        if tag == "code" and rng.random() < 0.4:
            return Prim(PrimOp.SPEC, (self.expr(CODE, ctx, d),
                                      self.expr(self.first_order_type(1), ctx, d)))
        v = self.var_of(ty, ctx)
        return v if v is not None else self.literal(ty)

    def _if(self, ty, ctx, depth) -> Term:
        d = depth - 1
        inner = ctx + [UNIT_T]
        return Case(self.expr(BOOL, ctx, d), self.expr(ty, inner, d), self.expr(ty, inner, d))

    def _let(self, ty, ctx, depth) -> Term:
        d = depth - 1
        bty = self.first_order_type(1)
        return App(Lam(self.expr(ty, ctx + [bty], d)), self.expr(bty, ctx, d))

    def _apply_lambda(self, ty, ctx, depth) -> Term:
        # ((lam y. (lam z. body)) e1) e2 : a curried two-argument call
        d = depth - 1
        t1, t2 = self.first_order_type(1), self.first_order_type(1)
        body = self.expr(ty, ctx + [t1, t2], d)
        return App(App(Lam(Lam(body)), self.expr(t1, ctx, d)), self.expr(t2, ctx, d))

    def _proj(self, ty, ctx, depth) -> Term:
        other = self.first_order_type(1)
        if self.rng.random() < 0.5:
            return Proj1(self.expr(pair_t(ty, other), ctx, depth - 1))
        return Proj2(self.expr(pair_t(other, ty), ctx, depth - 1))

    def _case(self, ty, ctx, depth) -> Term:
        d = depth - 1
        l, r = self.first_order_type(1), self.first_order_type(1)
        return Case(self.expr(sum_t(l, r), ctx, d), self.expr(ty, ctx + [l], d),
                    self.expr(ty, ctx + [r], d))

    def _countdown(self, ctx, depth) -> Term:
        # (fix f (lam n (if (le n 0) base (add step (f (sub n 1)))))) k
        inner = ctx + [("fn",), INT]
        n = Var(0)
        base = self.expr(INT, inner + [UNIT_T], max(depth - 1, 0))
        step = self.expr(INT, inner + [UNIT_T], max(depth - 1, 0))
        rec = App(Var(2), Prim(PrimOp.SUB, (Var(1), Lit(Int(1)))))
        body = Case(Prim(PrimOp.LE, (n, Lit(Int(0)))), base,
                    Prim(PrimOp.ADD, (step, rec)))
        return App(Fix(Lam(body)), Lit(Int(self.rng.randint(0, 6))))

    # -- whole programs ----------------------------------------------------

    def unary(self, depth: int = 4):
        """A closed one-argument term, its input type and output type."""
        in_ty, out_ty = self.first_order_type(), self.first_order_type()
        return Lam(self.expr(out_ty, [in_ty], depth)), in_ty, out_ty

    def binary(self, depth: int = 4):
        """A closed curried two-argument term ``\\x. \\a. body``."""
        x_ty, a_ty, out_ty = self.first_order_type(), self.first_order_type(1), self.first_order_type()
        return Lam(Lam(self.expr(out_ty, [x_ty, a_ty], depth))), x_ty, a_ty

    def guarded_recursion(self, ctx: list, code_var: int, depth: int) -> Term:
        """``if a <= 0 then base else step + run <code> (a - 1)``; ``a`` is Var(0)."""
        inner = ctx + [UNIT_T]
        base = self.expr(INT, inner, depth)
        step = self.expr(INT, inner, depth)
        call = Prim(PrimOp.RUN, (Var(code_var + 1), Prim(PrimOp.SUB, (Var(1), Lit(Int(1))))))
        return Case(Prim(PrimOp.LE, (Var(0), Lit(Int(0)))), base,
                    Prim(PrimOp.ADD, (step, call)))

    def fix_family(self, depth: int = 4) -> Term:
        """Total ``\\p. \\a. body`` with ``p`` a code and ``a`` an integer."""
        ctx = [CODE, INT]
        if self.rng.random() < 0.3:
            return Lam(Lam(self.guarded_recursion(ctx, 1, depth - 1)))
        return Lam(Lam(self.expr(self.first_order_type(), ctx, depth)))

    def transition_family(self, x_ty, depth: int = 4) -> Term:
        """Total ``\\l. \\x. \\a. body`` with ``l`` a code and ``a`` an integer."""
        ctx = [CODE, x_ty, INT]
        if self.rng.random() < 0.3:
            return Lam(Lam(Lam(self.guarded_recursion(ctx, 2, depth - 1))))
        return Lam(Lam(Lam(self.expr(self.first_order_type(), ctx, depth))))


def random_machine(rng: random.Random, max_states: int = 6, max_inputs: int = 4,
                   max_outputs: int = 4) -> MealyMachine:
    xs = [f"x{i}" for i in range(rng.randint(1, max_states))]
    as_ = [f"i{i}" for i in range(rng.randint(1, max_inputs))]
    bs = [f"o{i}" for i in range(rng.randint(1, max_outputs))]
    delta = {(x, a): rng.choice(xs) for x in xs for a in as_}
    out = {(x, a): rng.choice(bs) for x in xs for a in as_}
    return MealyMachine(tuple(xs), tuple(as_), tuple(bs), delta, out, rng.choice(xs))


def random_stream(rng: random.Random, m: MealyMachine, length: int) -> list[str]:
    return [rng.choice(m.inputs) for _ in range(length)]


def random_frame(rng: random.Random, worlds: int = 4, events: int = 2,
                 density: float = 0.35) -> DynamicFrame:
    ws = tuple(f"w{i}" for i in range(worlds))
    rels = {}
    for k in range(events):
        rels[f"e{k}"] = frozenset((u, v) for u in ws for v in ws if rng.random() < density)
    return DynamicFrame(ws, rels)


__all__ = ["TermGen", "random_frame", "random_machine", "random_stream"]
