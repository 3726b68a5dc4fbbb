"""S-expression surface syntax.

Grammar (``;`` starts a comment)::

    term ::= ident | int | true | false | unit | 'sym
           | (lam x body) | (lam (x y ...) body)
           | (app f a ...) | (f a ...)
           | (pair t t) | (fst t) | (snd t) | (inl t) | (inr t)
           | (case t (x left) (y right))
           | (fix f (lam x body))
           | (quote t)
           | (op t ...)            op in add sub mul le eq-int eq-sym not
                                      code-eq spec run size
           | (let x t body)        sugar for (app (lam x body) t)
           | (if c t e)            sugar for case on a boolean

The printer emits the canonical core form: explicit ``app``, one binder per
``lam``, and binder names chosen from binder depth. Quoted terms restart
naming at depth zero since they are closed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .terms import (
    App, Bool, Case, Code, CodeV, Closure, FALSE, Fix, Inj1, Inj2, Int, Lam, Lit,
    Pair, PairV, Prim, PrimOp, Proj1, Proj2, Quote, Sym, Tagged, Term, TRUE, UNIT,
    Unit, Value, Var, shift,
)

KEYWORDS = frozenset(
    {"lam", "app", "quote", "pair", "fst", "snd", "inl", "inr", "case", "fix",
     "let", "if", "true", "false", "unit"}
    | {op.surface for op in PrimOp}
)

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>;[^\n]*)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<sym>'[A-Za-z0-9_\-]+)
  | (?P<int>-?[0-9]+(?![A-Za-z_\-]))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_\-]*'*)
""", re.VERBOSE)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


@dataclass
class _Atom:
    kind: str
    text: str
    line: int
    col: int


@dataclass
class _List:
    items: list
    line: int
    col: int


def _read(text: str) -> list:
    pos, line, col = 0, 1, 1
    stack: list[_List] = [_List([], 1, 1)]
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "nl":
            line, col = line + 1, 1
            pos = m.end()
            continue
        if kind == "lp":
            stack.append(_List([], line, col))
        elif kind == "rp":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", line, col)
            done = stack.pop()
            stack[-1].items.append(done)
        elif kind not in ("ws", "comment"):
            stack[-1].items.append(_Atom(kind, tok, line, col))
        col += len(tok)
        pos = m.end()
    if len(stack) > 1:
        open_ = stack[-1]
        raise ParseError("unclosed '('", open_.line, open_.col)
    return stack[0].items


class _Parser:
    def __init__(self) -> None:
        self.scope: list[str] = []

    def lookup(self, atom: _Atom) -> Var:
        for i, name in enumerate(reversed(self.scope)):
            if name == atom.text:
                return Var(i)
        raise ParseError(f"unbound identifier {atom.text!r}", atom.line, atom.col)

    def binder(self, node) -> str:
        if not isinstance(node, _Atom) or node.kind != "ident" or node.text in KEYWORDS:
            line, col = node.line, node.col
            raise ParseError("expected a variable name", line, col)
        return node.text

    def bound(self, names: list[str], node) -> Term:
        self.scope.extend(names)
        try:
            return self.term(node)
        finally:
            del self.scope[len(self.scope) - len(names):]

    def expect(self, node: _List, n: int, form: str) -> None:
        if len(node.items) != n:
            raise ParseError(f"{form} expects {n - 1} operand(s)", node.line, node.col)

    def term(self, node) -> Term:
        if isinstance(node, _Atom):
            return self.atom(node)
        if not node.items:
            raise ParseError("empty list", node.line, node.col)
        head = node.items[0]
        if isinstance(head, _Atom) and head.kind == "ident":
            form = getattr(self, "form_" + head.text.replace("-", "_"), None)
            if form is not None and head.text in KEYWORDS:
                return form(node)
            op = PrimOp.from_surface(head.text)
            if op is not None:
                self.expect(node, op.arity + 1, op.surface)
                return Prim(op, tuple(self.term(a) for a in node.items[1:]))
            if head.text in KEYWORDS:
                raise ParseError(f"{head.text!r} cannot be applied", head.line, head.col)
        return self.apply(node.items)

    def atom(self, a: _Atom) -> Term:
        if a.kind == "int":
            return Lit(Int(int(a.text)))
        if a.kind == "sym":
            return Lit(Sym(a.text[1:]))
        if a.text == "true":
            return Lit(TRUE)
        if a.text == "false":
            return Lit(FALSE)
        if a.text == "unit":
            return Lit(UNIT)
        if a.text in KEYWORDS:
            raise ParseError(f"keyword {a.text!r} used as a value", a.line, a.col)
        return self.lookup(a)

    def apply(self, items: list) -> Term:
        if len(items) < 2:
            node = items[0]
            raise ParseError("application needs an argument", node.line, node.col)
        t = self.term(items[0])
        for arg in items[1:]:
            t = App(t, self.term(arg))
        return t

    def form_app(self, node: _List) -> Term:
        if len(node.items) < 3:
            raise ParseError("app needs a function and an argument", node.line, node.col)
        return self.apply(node.items[1:])

    def form_lam(self, node: _List) -> Term:
        self.expect(node, 3, "lam")
        params = node.items[1]
        names = ([self.binder(p) for p in params.items] if isinstance(params, _List)
                 else [self.binder(params)])
        if not names:
            raise ParseError("lam needs a parameter", node.line, node.col)
        body = self.bound(names, node.items[2])
        for _ in names:
            body = Lam(body)
        return body

    def form_fix(self, node: _List) -> Term:
        self.expect(node, 3, "fix")
        body = self.bound([self.binder(node.items[1])], node.items[2])
        if not isinstance(body, Lam):
            raise ParseError("fix body must be a lam", node.line, node.col)
        return Fix(body)

    def form_let(self, node: _List) -> Term:
        self.expect(node, 4, "let")
        name = self.binder(node.items[1])
        bound = self.term(node.items[2])
        return App(Lam(self.bound([name], node.items[3])), bound)

    def form_if(self, node: _List) -> Term:
        self.expect(node, 4, "if")
        c, t, e = (self.term(x) for x in node.items[1:])
        return Case(c, shift(t, 1), shift(e, 1))

    def form_case(self, node: _List) -> Term:
        self.expect(node, 4, "case")
        scrut = self.term(node.items[1])
        branches = []
        for br in node.items[2:]:
            if not isinstance(br, _List) or len(br.items) != 2:
                raise ParseError("case branch must be (name body)", br.line, br.col)
            branches.append(self.bound([self.binder(br.items[0])], br.items[1]))
        return Case(scrut, branches[0], branches[1])

    def form_quote(self, node: _List) -> Term:
        self.expect(node, 2, "quote")
        saved, self.scope = self.scope, []
        try:
            return Quote(self.term(node.items[1]))
        except ParseError as e:
            if "unbound" in str(e):
                raise ParseError("quoted term must be closed; " + str(e).split(": ", 1)[1],
                                 e.line, e.col) from None
            raise
        finally:
            self.scope = saved

    def _unary(self, node: _List, form: str, cls) -> Term:
        self.expect(node, 2, form)
        return cls(self.term(node.items[1]))

    def form_pair(self, node: _List) -> Term:
        self.expect(node, 3, "pair")
        return Pair(self.term(node.items[1]), self.term(node.items[2]))

    def form_fst(self, node: _List) -> Term:
        return self._unary(node, "fst", Proj1)

    def form_snd(self, node: _List) -> Term:
        return self._unary(node, "snd", Proj2)

    def form_inl(self, node: _List) -> Term:
        return self._unary(node, "inl", Inj1)

    def form_inr(self, node: _List) -> Term:
        return self._unary(node, "inr", Inj2)


def parse(text: str) -> Term:
    """Parse exactly one closed term."""
    nodes = _read(text)
    if len(nodes) != 1:
        raise ParseError(f"expected one term, found {len(nodes)}", 1, 1)
    return _Parser().term(nodes[0])


def parse_value(text: str) -> Value:
    """Parse a first-order value literal such as ``(pair 1 'x)``."""
    from .machine import evaluate
    from .terms import Done

    out = evaluate(parse(text), 1000)
    if not isinstance(out, Done):
        raise ValueError(f"not a value: {text!r}")
    return out.value


def binder_name(depth: int) -> str:
    if depth < 26:
        return chr(ord("a") + depth)
    return f"v{depth}"


def print_term(t: Term) -> str:
    parts: list[str] = []
    _emit(t, 0, parts)
    return "".join(parts)


def _emit(t: Term, depth: int, out: list[str]) -> None:
    if isinstance(t, Var):
        out.append(binder_name(depth - 1 - t.index))
    elif isinstance(t, Lit):
        out.append(print_value(t.ground))
    elif isinstance(t, Lam):
        out.append(f"(lam {binder_name(depth)} ")
        _emit(t.body, depth + 1, out)
        out.append(")")
    elif isinstance(t, Fix):
        out.append(f"(fix {binder_name(depth)} ")
        _emit(t.body, depth + 1, out)
        out.append(")")
    elif isinstance(t, Case):
        out.append("(case ")
        _emit(t.scrut, depth, out)
        for branch in (t.left, t.right):
            out.append(f" ({binder_name(depth)} ")
            _emit(branch, depth + 1, out)
            out.append(")")
        out.append(")")
    elif isinstance(t, Quote):
        out.append("(quote ")
        _emit(t.inner, 0, out)
        out.append(")")
    else:
        head, args = _head(t)
        out.append("(" + head)
        for a in args:
            out.append(" ")
            _emit(a, depth, out)
        out.append(")")


def _head(t: Term) -> tuple[str, tuple]:
    if isinstance(t, App):
        return "app", (t.fn, t.arg)
    if isinstance(t, Pair):
        return "pair", (t.first, t.second)
    if isinstance(t, Prim):
        return t.op.surface, t.args
    names = {Proj1: "fst", Proj2: "snd", Inj1: "inl", Inj2: "inr"}
    return names[type(t)], (t.t,)


def print_value(v: Value) -> str:
    if isinstance(v, Int):
        return str(v.value)
    if isinstance(v, Bool):
        return "true" if v.value else "false"
    if isinstance(v, Unit):
        return "unit"
    if isinstance(v, Sym):
        return "'" + v.name
    if isinstance(v, PairV):
        return f"(pair {print_value(v.first)} {print_value(v.second)})"
    if isinstance(v, Tagged):
        return f"({'inl' if v.side == 'left' else 'inr'} {print_value(v.value)})"
    if isinstance(v, CodeV):
        return f"(quote {print_term(v.code.term)})"
    if isinstance(v, Closure):
        return "<closure>"
    raise TypeError(f"not a value: {v!r}")


def print_code(c: Code) -> str:
    return f"(quote {print_term(c.term)})"
