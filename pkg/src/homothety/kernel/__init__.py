"""Exact symbolic expressions: parse, simplify, differentiate, evaluate."""

from .calculus import differentiate, is_constant, substitute
from .canon import add, exp_, func, ln_, mul, power, simplify
from .evaluate import (
    DomainError,
    SampleDomain,
    UnboundSymbolError,
    ZeroVerdict,
    eval_at,
    is_zero,
)
from .nodes import (
    HALF,
    MINUS_ONE,
    ONE,
    TWO,
    ZERO,
    Expr,
    Func,
    Negate,
    Num,
    Power,
    Product,
    Sum,
    Symbol,
    as_expr,
    sym,
)
from .parse import ParseError, parse, pretty, render, to_display


def expr(text: str, functions=None) -> Expr:
    """Parse and simplify in one go."""
    return simplify(parse(text, functions))


__all__ = [
    "DomainError", "Expr", "HALF", "Func", "MINUS_ONE", "Negate", "Num", "ONE", "ParseError",
    "Power", "Product", "SampleDomain", "Sum", "Symbol", "TWO", "UnboundSymbolError",
    "ZERO", "ZeroVerdict", "add", "as_expr", "differentiate", "eval_at", "exp_", "expr",
    "func", "is_constant", "is_zero", "ln_", "mul", "parse", "power", "pretty", "render",
    "simplify", "substitute", "sym", "to_display",
]
