"""Seeded random expression trees for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .nodes import Expr, Func, Negate, Num, Power, Product, Sum, Symbol

LEAF_SYMBOLS = ("t", "r")


def random_expr(rng: random.Random, depth: int = 3, symbols=LEAF_SYMBOLS) -> Expr:
    """Raw (unsimplified) tree that usually evaluates on the default box.

    Logarithms and fractional powers only wrap arguments built to be
    positive there, so few sample points are rejected.
    """
    if depth <= 0 or rng.random() < 0.25:
        return _leaf(rng, symbols)
    k = rng.randrange(9)
    sub = lambda: random_expr(rng, depth - 1, symbols)  # noqa: E731
    if k == 0:
        return Sum([sub() for _ in range(rng.randint(2, 3))])
    if k == 1:
        return Product([sub() for _ in range(rng.randint(2, 3))])
    if k == 2:
        return Power(sub(), Num(rng.choice([2, 3, -1, -2])))
    if k == 3:
        # shallow argument: deep ones oscillate faster than a 1e-5 stencil resolves
        return Func(rng.choice(("sin", "cos")), random_expr(rng, min(depth - 1, 1), symbols))
    if k == 4:
        return Func("exp", Product([Num(Fraction(1, rng.randint(2, 4))), _bounded(rng, symbols)]))
    if k == 5:
        return Func("ln", _positive(rng, symbols))
    if k == 6:
        return Power(_positive(rng, symbols), Num(Fraction(rng.choice([1, -1, 3]), 2)))
    if k == 7:
        return Negate(sub())
    return Power(Symbol(rng.choice(symbols)), _leaf(rng, symbols))


def _leaf(rng: random.Random, symbols) -> Expr:
    if rng.random() < 0.6:
        return Symbol(rng.choice(symbols))
    if rng.random() < 0.5:
        return Num(rng.randint(-3, 4))
    return Num(Fraction(rng.randint(-5, 5), rng.randint(2, 5)))


def _positive(rng: random.Random, symbols) -> Expr:
    """A sum of positive monomials in the (positive) sampling variables."""
    terms = [Symbol(s) if rng.random() < 0.7 else Power(Symbol(s), Num(2))
             for s in rng.sample(list(symbols), rng.randint(1, len(symbols)))]
    terms.append(Num(rng.randint(1, 3)))
    return Sum(terms)


def _bounded(rng: random.Random, symbols) -> Expr:
    return Func(rng.choice(("sin", "cos")), Symbol(rng.choice(symbols))) if rng.random() < 0.5 \
        else Symbol(rng.choice(symbols))
