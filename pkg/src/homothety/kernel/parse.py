"""Infix expression grammar: tokenizer, parser, renderer.

Grammar::

    expr    := term (('+' | '-') term)*
    term    := operand (('*' | '/') operand)*
    operand := unary
    unary   := '-' unary | power
    power   := atom ('^' unary)?
    atom    := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

``^`` is right associative and binds tighter than unary minus.  A minus
sign directly in front of a numeric literal (not followed by ``^``) is
part of the literal, and ``p/q`` with integer literals on both sides in
multiplicative position is one exact rational.  Parentheses never create
nodes, so ``render`` can always reproduce a parsed tree exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .nodes import FUNCTIONS, Expr, Func, Negate, Num, Power, Product, Sum, Symbol

KNOWN_CALLS = FUNCTIONS + ("sqrt",)

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class ParseError(ValueError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


@dataclass(frozen=True)
class _Tok:
    kind: str  # "num", "int", "ident", "op", "end"
    text: str
    offset: int


def tokenize(text: str) -> list[_Tok]:
    data = text.encode("utf-8")
    if len(data) != len(text):
        bad = next(i for i, ch in enumerate(text) if ord(ch) > 127)
        raise ParseError(f"unexpected character {text[bad]!r}", len(text[:bad].encode("utf-8")))
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, ident, op = m.groups()
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if num is not None:
            out.append(_Tok("int" if num.isdigit() else "num", num, start))
        elif ident is not None:
            out.append(_Tok("ident", ident, start))
        elif op is not None:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r}", start)
            out.append(_Tok("op", op, start))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, functions: Mapping[str, Sequence[str]]) -> None:
        self.toks = tokenize(text)
        self.i = 0
        self.functions = functions

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def is_op(self, op: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind == "op" and t.text == op

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op: str) -> None:
        if not self.is_op(op):
            t = self.peek()
            raise ParseError(f"expected {op!r}", t.offset)
        self.take()

    def parse(self) -> Expr:
        if self.peek().kind == "end":
            raise ParseError("empty expression", 0)
        node = self.expr()
        if self.peek().kind != "end":
            t = self.peek()
            raise ParseError(f"unexpected token {t.text!r}", t.offset)
        return node

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.is_op("+") or self.is_op("-"):
            op = self.take().text
            t = self.term()
            terms.append(t if op == "+" else Negate(t))
        return terms[0] if len(terms) == 1 else Sum(terms)

    def term(self) -> Expr:
        factors = [self.operand(fold=True)]
        while self.is_op("*") or self.is_op("/"):
            op = self.take().text
            if op == "*":
                factors.append(self.operand(fold=True))
            else:
                factors.append(Power(self.operand(fold=False), Num(-1)))
        return factors[0] if len(factors) == 1 else Product(factors)

    def operand(self, fold: bool) -> Expr:
        if fold:
            k = 1 if self.is_op("-") else 0
            if (self.peek(k).kind == "int" and self.is_op("/", k + 1)
                    and self.peek(k + 2).kind == "int" and not self.is_op("^", k + 3)):
                sign = -1 if k else 1
                if k:
                    self.take()
                p = int(self.take().text)
                self.take()
                qtok = self.take()
                q = int(qtok.text)
                if q == 0:
                    raise ParseError("zero denominator", qtok.offset)
                return Num(Fraction(sign * p, q))
        return self.unary()

    def unary(self) -> Expr:
        if self.is_op("-"):
            nxt = self.peek(1)
            if nxt.kind in ("int", "num") and not self.is_op("^", 2):
                self.take()
                return Num(-_literal(self.take().text))
            self.take()
            return Negate(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.is_op("^"):
            self.take()
            return Power(base, self.unary())
        return base

    def atom(self) -> Expr:
        t = self.peek()
        if t.kind in ("int", "num"):
            self.take()
            return Num(_literal(t.text))
        if t.kind == "ident":
            self.take()
            if self.is_op("("):
                if t.text not in KNOWN_CALLS:
                    raise ParseError(f"unknown function {t.text!r}", t.offset)
                self.take()
                arg = self.expr()
                self.expect(")")
                if t.text == "sqrt":
                    return Power(arg, Num(Fraction(1, 2)))
                return Func(t.text, arg)
            if t.text in KNOWN_CALLS:
                raise ParseError(f"function {t.text!r} used without argument", t.offset)
            return Symbol(t.text, self.functions.get(t.text, ()))
        if self.is_op("("):
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "end":
            raise ParseError("unexpected end of input", t.offset)
        raise ParseError(f"unexpected token {t.text!r}", t.offset)


def _literal(text: str) -> Fraction:
    return Fraction(text)


def parse(text: str, functions: Mapping[str, Sequence[str]] | None = None) -> Expr:
    """Parse ``text`` into an unsimplified tree.

    ``functions`` declares undetermined functions, e.g. ``{"nu": ("t", "r")}``;
    their identifiers become symbols that depend on those coordinates.
    """
    return _Parser(text, functions or {}).parse()


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _num(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _is_plain(e: Expr) -> bool:
    """Renders as a single token or call, no parentheses needed."""
    if isinstance(e, Num):
        return e.value >= 0 and e.value.denominator == 1
    return isinstance(e, (Symbol, Func))


def _wrap(e: Expr) -> str:
    return f"({render(e)})"


def render(e: Expr) -> str:
    """Exact printer: ``parse(render(e))`` reproduces ``e`` node for node."""
    if isinstance(e, Num):
        return _num(e.value)
    if isinstance(e, Symbol):
        return e.label
    if isinstance(e, Func):
        return f"{e.name}({render(e.arg)})"
    if isinstance(e, Power):
        base = render(e.base) if _is_plain(e.base) else _wrap(e.base)
        ex = render(e.exp) if _is_plain(e.exp) else _wrap(e.exp)
        return f"{base}^{ex}"
    if isinstance(e, Negate):
        a = e.arg
        if isinstance(a, (Num, Sum, Product, Negate)):
            return "-" + _wrap(a)
        return "-" + render(a)
    if isinstance(e, Product):
        parts = [_factor(e.args[0], first=True)]
        prev = e.args[0]
        for f in e.args[1:]:
            if isinstance(f, Power) and isinstance(f.exp, Num) and f.exp.value == -1:
                b = f.base
                # "2/3" would read back as one rational literal
                bare = isinstance(b, (Symbol, Func, Power)) or (_is_plain(b) and not isinstance(prev, Num))
                parts.append("/" + (render(b) if bare else _wrap(b)))
            else:
                parts.append("*" + _factor(f, first=False))
            prev = f
        return "".join(parts)
    if isinstance(e, Sum):
        parts = [_term(e.args[0], first=True)]
        for t in e.args[1:]:
            if isinstance(t, Negate):
                a = t.arg
                if isinstance(a, (Sum, Negate)) or (isinstance(a, Num) and a.value < 0) \
                        or _leading_minus(a):
                    parts.append("-" + _wrap(a))
                else:
                    parts.append("-" + render(a))
            else:
                parts.append("+" + _term(t, first=False))
        return "".join(parts)
    raise TypeError(type(e).__name__)  # pragma: no cover


def _leading_minus(e: Expr) -> bool:
    return render(e).startswith("-")


def _factor(f: Expr, first: bool) -> str:
    if isinstance(f, (Sum, Product)):
        return _wrap(f)
    if isinstance(f, Num):
        if first:
            return _num(f.value)
        return render(f) if _is_plain(f) else _wrap(f)
    if isinstance(f, Negate) and not first:
        return _wrap(f)
    return render(f)


def _term(t: Expr, first: bool) -> str:
    if isinstance(t, Sum):
        return _wrap(t)
    s = render(t)
    if not first and s.startswith("-"):
        return f"({s})"
    return s


# ---------------------------------------------------------------------------
# display form
# ---------------------------------------------------------------------------

def _negative_exponent(e: Expr) -> bool:
    if isinstance(e, Num):
        return e.value < 0
    if isinstance(e, Product) and isinstance(e.args[0], Num):
        return e.args[0].value < 0
    return False


def to_display(e: Expr) -> Expr:
    """Turn a canonical tree into a readable parse-shaped tree.

    Negative coefficients become negations and negative powers move into a
    single denominator, so ``render(to_display(e))`` reads like
    ``t/(2*r)``; simplifying its parse gives ``e`` back.
    """
    from .canon import mul, split_coeff

    if isinstance(e, Sum):
        terms = list(e.args)
        nums = [t for t in terms if isinstance(t, Num)]
        terms = [t for t in terms if not isinstance(t, Num)] + nums
        out = []
        for i, t in enumerate(terms):
            c, _ = split_coeff(t)
            if c < 0 and i == 0:
                out.append(_negated(to_display(mul(Num(-1), t))))
            elif c < 0:
                out.append(Negate(to_display(mul(Num(-1), t))))
            else:
                out.append(to_display(t))
        return Sum(out)
    if isinstance(e, Num):
        return e
    if isinstance(e, (Product, Power)):
        c, mono = split_coeff(e)
        if c < 0:
            return _negated(to_display(mul(Num(-1), e)))
        factors = mono.args if isinstance(mono, Product) else (mono,)
        numer: list[Expr] = []
        denom: list[Expr] = []
        if c.numerator != 1:
            numer.append(Num(c.numerator))
        if c.denominator != 1:
            denom.append(Num(c.denominator))
        for f in factors:
            if isinstance(f, Power) and _negative_exponent(f.exp) and not (
                    isinstance(f.base, Sum) and f.exp != Num(-1)):
                # a sum squared in a denominator would be expanded on re-reading
                flipped = mul(Num(-1), f.exp)
                denom.append(to_display(f.base) if flipped == Num(1)
                             else Power(to_display(f.base), to_display(flipped)))
            elif isinstance(f, Power):
                numer.append(Power(to_display(f.base), to_display(f.exp)))
            else:
                numer.append(to_display(f))
        if not denom:
            return numer[0] if len(numer) == 1 else Product(numer)
        den = denom[0] if len(denom) == 1 else Product(denom)
        if not numer:
            numer = [Num(1)]
        return Product(numer + [Power(den, Num(-1))])
    if isinstance(e, Func):
        return Func(e.name, to_display(e.arg))
    return e


def _negated(node: Expr) -> Expr:
    if isinstance(node, Product):
        first = node.args[0]
        first = Num(-first.value) if isinstance(first, Num) else Negate(first)
        return Product((first,) + node.args[1:])
    if isinstance(node, Num):
        return Num(-node.value)
    return Negate(node)


def pretty(e: Expr) -> str:
    return render(to_display(e))
