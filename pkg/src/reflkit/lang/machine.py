"""Fuel-bounded call-by-value evaluator.

An explicit-stack CEK machine, so deep object-level recursion never touches
the Python call stack. Each beta step and each primitive step costs one unit
of fuel; everything else (lookup, pairing, projection, case dispatch) is free.
``run`` evaluates its code inline against the caller's remaining fuel.
"""

from __future__ import annotations

from .terms import (
    App, Bool, Case, Closure, Code, CodeV, Done, Err, Fix, Inj1, Inj2, Int, Lam,
    LiftError, Lit, OutOfFuel, Outcome, Pair, PairV, Prim, PrimOp, Proj1, Proj2,
    Quote, Sym, Tagged, Term, UNIT, Value, Var, is_first_order, lift, size,
)

# continuation frame tags
_ARG, _CALL, _APPLY_TO, _PAIR2, _PAIRMK, _FST, _SND, _INL, _INR, _CASE, _PRIM = range(11)


def evaluate(term: Term, fuel: int, trace: list | None = None) -> Outcome:
    """Evaluate a closed term with at most ``fuel`` steps.

    When ``trace`` is a list, one ``(kind, detail)`` entry is appended per
    charged step.
    """
    return evaluate_counted(term, fuel, trace)[0]


def evaluate_counted(term: Term, fuel: int, trace: list | None = None) -> tuple[Outcome, int]:
    """Like :func:`evaluate` but also report the number of steps charged."""
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    start = fuel
    stack: list[tuple] = []
    t: Term = term
    env = None
    v: Value = UNIT
    evaluating = True

    while True:
        if evaluating:
            tp = type(t)
            if tp is Var:
                e = env
                for _ in range(t.index):
                    if e is None:
                        break
                    e = e[1]
                if e is None:
                    return Err("unbound", f"variable index {t.index}"), start - fuel
                v = e[0]
                evaluating = False
            elif tp is Lit:
                v = t.ground
                evaluating = False
            elif tp is Lam:
                v = Closure(env, t.body)
                evaluating = False
            elif tp is App:
                stack.append((_ARG, t.arg, env))
                t = t.fn
            elif tp is Prim:
                stack.append((_PRIM, t.op, t.args, 1, (), env))
                t = t.args[0]
            elif tp is Case:
                stack.append((_CASE, t.left, t.right, env))
                t = t.scrut
            elif tp is Pair:
                stack.append((_PAIR2, t.second, env))
                t = t.first
            elif tp is Proj1:
                stack.append((_FST,))
                t = t.t
            elif tp is Proj2:
                stack.append((_SND,))
                t = t.t
            elif tp is Inj1:
                stack.append((_INL,))
                t = t.t
            elif tp is Inj2:
                stack.append((_INR,))
                t = t.t
            elif tp is Quote:
                v = CodeV(Code(t.inner))
                evaluating = False
            elif tp is Fix:
                v = Closure(env, t.body.body, True)
                evaluating = False
            else:
                return Err("type-mismatch", f"not a term: {t!r}"), start - fuel
            continue

        if not stack:
            return Done(v), start - fuel
        frame = stack.pop()
        k = frame[0]
        if k == _ARG:
            stack.append((_CALL, v))
            t, env = frame[1], frame[2]
            evaluating = True
        elif k == _CALL or k == _APPLY_TO:
            f, arg = (frame[1], v) if k == _CALL else (v, frame[1])
            if type(f) is not Closure:
                return Err("type-mismatch", "application of a non-function"), start - fuel
            if fuel == 0:
                return OutOfFuel(0), start
            fuel -= 1
            if trace is not None:
                trace.append(("beta", ""))
            env = (arg, (f, f.env)) if f.recursive else (arg, f.env)
            t = f.body
            evaluating = True
        elif k == _PRIM:
            _, op, args, i, vals, fenv = frame
            vals = vals + (v,)
            if i < len(args):
                stack.append((_PRIM, op, args, i + 1, vals, fenv))
                t, env = args[i], fenv
                evaluating = True
                continue
            if fuel == 0:
                return OutOfFuel(0), start
            fuel -= 1
            if trace is not None:
                trace.append(("prim", op.surface))
            if op is PrimOp.RUN:
                code, arg = vals
                if type(code) is not CodeV:
                    return Err("type-mismatch", "run expects a code"), start - fuel
                if not is_first_order(arg):
                    return Err("lift-failure", "run input contains a closure"), start - fuel
                stack.append((_APPLY_TO, arg))
                t, env = code.code.term, None
                evaluating = True
                continue
            res = apply_prim(op, vals)
            if type(res) is Err:
                return res, start - fuel
            v = res
        elif k == _CASE:
            tp = type(v)
            if tp is Tagged:
                env = (v.value, frame[3])
                t = frame[1] if v.side == "left" else frame[2]
            elif tp is Bool:
                env = (UNIT, frame[3])
                t = frame[1] if v.value else frame[2]
            else:
                return Err("type-mismatch", "case on a non-sum value"), start - fuel
            evaluating = True
        elif k == _PAIR2:
            stack.append((_PAIRMK, v))
            t, env = frame[1], frame[2]
            evaluating = True
        elif k == _PAIRMK:
            v = PairV(frame[1], v)
        elif k == _FST or k == _SND:
            if type(v) is not PairV:
                return Err("type-mismatch", "projection from a non-pair"), start - fuel
            v = v.first if k == _FST else v.second
        elif k == _INL:
            v = Tagged("left", v)
        else:  # _INR
            v = Tagged("right", v)


def _ints(op: PrimOp, vals: tuple) -> tuple[int, ...] | Err:
    if not all(type(x) is Int for x in vals):
        return Err("type-mismatch", f"{op.surface} expects integers")
    return tuple(x.value for x in vals)


def apply_prim(op: PrimOp, vals: tuple) -> Value | Err:
    """Apply every primitive except ``run`` (which needs the machine)."""
    if op in (PrimOp.ADD, PrimOp.SUB, PrimOp.MUL, PrimOp.LE, PrimOp.EQ_INT):
        ns = _ints(op, vals)
        if isinstance(ns, Err):
            return ns
        x, y = ns
        if op is PrimOp.ADD:
            return Int(x + y)
        if op is PrimOp.SUB:
            return Int(x - y)
        if op is PrimOp.MUL:
            return Int(x * y)
        if op is PrimOp.LE:
            return Bool(x <= y)
        return Bool(x == y)
    if op is PrimOp.EQ_SYM:
        if not all(type(x) is Sym for x in vals):
            return Err("type-mismatch", "eq-sym expects symbols")
        return Bool(vals[0] == vals[1])
    if op is PrimOp.NOT:
        (b,) = vals
        if type(b) is not Bool:
            return Err("type-mismatch", "not expects a boolean")
        return Bool(not b.value)
    if op is PrimOp.CODE_EQ:
        if not all(type(x) is CodeV for x in vals):
            return Err("type-mismatch", "code-eq expects codes")
        return Bool(vals[0].code.term == vals[1].code.term)
    if op is PrimOp.SIZE:
        (c,) = vals
        if type(c) is not CodeV:
            return Err("type-mismatch", "size expects a code")
        return Int(size(c.code.term))
    if op is PrimOp.SPEC:
        c, x = vals
        if type(c) is not CodeV:
            return Err("type-mismatch", "spec expects a code")
        try:
            return CodeV(Code(App(c.code.term, lift(x))))
        except LiftError as e:
            return Err("lift-failure", str(e))
    raise ValueError(f"unhandled primitive {op}")
