"""Exact partial differentiation and substitution."""

from __future__ import annotations

from typing import Mapping

from .canon import add, cos_, ln_, mul, power, rebuild, simplify, sin_
from .nodes import MINUS_ONE, ONE, ZERO, Expr, Func, Num, Power, Product, Sum, Symbol, as_expr


def _name(s: Symbol | str) -> str:
    return s if isinstance(s, str) else s.name


def differentiate(e: Expr, s: Symbol | str) -> Expr:
    """Partial derivative of ``e`` with respect to the coordinate ``s``.

    Symbols that declare a dependence on ``s`` (undetermined functions)
    differentiate to a new symbol carrying the derivative index.
    """
    var = _name(s)
    memo: dict[Expr, Expr] = {}

    def d(node: Expr) -> Expr:
        if not node.has(var):
            return ZERO
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Symbol):
            if node.name == var and not node.depends:
                out = ONE
            elif var in node.depends:
                out = Symbol(node.name, node.depends, node.derivs + (var,))
            else:
                out = ZERO
        elif isinstance(node, Sum):
            out = add(*[d(a) for a in node.args])
        elif isinstance(node, Product):
            terms = []
            args = node.args
            for i, a in enumerate(args):
                da = d(a)
                if da != ZERO:
                    terms.append(mul(da, *args[:i], *args[i + 1:]))
            out = add(*terms)
        elif isinstance(node, Power):
            b, x = node.base, node.exp
            db = d(b)
            if not x.has(var):
                out = mul(x, power(b, add(x, MINUS_ONE)), db)
            else:
                # b^x * (x' ln b + x b'/b)
                out = mul(node, add(mul(d(x), ln_(b)), mul(x, db, power(b, MINUS_ONE))))
        elif isinstance(node, Func):
            a = node.arg
            da = d(a)
            if node.name == "exp":
                out = mul(node, da)
            elif node.name == "ln":
                out = mul(da, power(a, MINUS_ONE))
            elif node.name == "sin":
                out = mul(cos_(a), da)
            elif node.name == "cos":
                out = mul(MINUS_ONE, sin_(a), da)
            else:
                # tan/cot/csc never survive canonicalisation
                out = d(simplify(node))
        else:
            out = d(simplify(node))
        memo[node] = out
        return out

    return d(simplify(e))


def substitute(e: Expr, bindings: Mapping[str | Symbol, Expr | str | int]) -> Expr:
    """Simultaneous substitution of symbols, followed by simplification.

    Keys are symbol names (or symbols).  A binding for an undetermined
    function ``nu`` also replaces its derivative symbols ``nu__t`` etc.
    by differentiating the bound expression.
    """
    table = {_name(k): as_expr(v) for k, v in bindings.items()}

    def leaf(s: Symbol) -> Expr:
        if s.name not in table:
            return s
        if s.derivs and s.label in table:
            return table[s.label]
        out = table[s.name]
        for c in s.derivs:
            out = differentiate(out, c)
        return out

    return rebuild(e, leaf)


def is_constant(e: Expr, coords) -> bool:
    """No dependence on any of the given coordinate names."""
    return not any(e.has(_name(c)) for c in coords)


def numeric_value(e: Expr) -> Num | None:
    e = simplify(e)
    return e if isinstance(e, Num) else None


__all__ = ["differentiate", "substitute", "is_constant", "numeric_value"]
