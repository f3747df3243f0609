"""Canonical constructors and the simplifier.

Every constructor here returns a tree in canonical form:

* numbers are exact :class:`~fractions.Fraction` values;
* sums and products are flat, constant-folded, like terms / like bases
  are collected, and operands are sorted by ``Expr.sort_key``;
* products are fully distributed over sums, positive integer powers of
  sums are expanded;
* ``exp`` factors of one product merge into one ``exp`` and
  ``exp(c*ln(b) + rest)`` becomes ``b^c * exp(rest)``;
* ``ln`` of products/powers/exp is split;
* ``tan``, ``cot`` and ``csc`` become sin/cos powers and ``cos^k`` for
  ``k >= 2`` is rewritten through ``1 - sin^2`` (so sin^2+cos^2 closes);
* in a sum, terms sharing a power of the same polynomial ``S`` at
  exponents that differ by integers are put over the lowest power and the
  common numerator is divided by ``S`` as long as it divides exactly.

Real-valued positive-domain identities are assumed throughout, e.g.
``(b^a)^c = b^(a c)`` and ``ln(a b) = ln a + ln b``.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable

from .nodes import (
    MINUS_ONE,
    ONE,
    ZERO,
    Expr,
    Func,
    Negate,
    Num,
    Power,
    Product,
    Sum,
    Symbol,
)

MAX_EXPAND = 12


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------

def _sorted(items: Iterable[Expr]) -> list[Expr]:
    return sorted(items, key=lambda e: e.sort_key())


def split_coeff(e: Expr) -> tuple[Fraction, Expr]:
    """``e == c * mono`` with ``c`` rational and ``mono`` coefficient-free."""
    if isinstance(e, Num):
        return e.value, ONE
    if isinstance(e, Product) and isinstance(e.args[0], Num):
        rest = e.args[1:]
        return e.args[0].value, rest[0] if len(rest) == 1 else Product(rest)
    return Fraction(1), e


def base_exp_pairs(mono: Expr) -> list[tuple[Expr, Expr]]:
    if mono == ONE:
        return []
    factors = mono.args if isinstance(mono, Product) else (mono,)
    out = []
    for f in factors:
        if isinstance(f, Num):
            continue
        if isinstance(f, Power):
            out.append((f.base, f.exp))
        else:
            out.append((f, ONE))
    return out


def _factor_node(base: Expr, e: Expr) -> Expr:
    return base if e == ONE else Power(base, e)


def _make_product(coeff: Fraction, factors: list[Expr]) -> Expr:
    if coeff == 0:
        return ZERO
    factors = _sorted(factors)
    if not factors:
        return Num(coeff)
    if coeff == 1:
        return factors[0] if len(factors) == 1 else Product(factors)
    return Product([Num(coeff)] + factors)


def _with_coeff(coeff: Fraction, mono: Expr) -> Expr:
    if mono == ONE:
        return Num(coeff)
    if coeff == 1:
        return mono
    if isinstance(mono, Product):
        return Product((Num(coeff),) + mono.args)
    return Product((Num(coeff), mono))


def _int_root(n: int, k: int) -> int | None:
    if n < 0:
        return None
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def mul(*factors: Expr) -> Expr:
    coeff = Fraction(1)
    bases: dict[Expr, list[Expr]] = {}
    exp_args: list[Expr] = []
    sums: list[Expr] = []

    stack = list(factors)
    while stack:
        f = stack.pop()
        if isinstance(f, Num):
            coeff *= f.value
            if coeff == 0:
                return ZERO
        elif isinstance(f, Product):
            stack.extend(f.args)
        elif isinstance(f, Power):
            bases.setdefault(f.base, []).append(f.exp)
        elif isinstance(f, Func) and f.name == "exp":
            exp_args.append(f.arg)
        elif isinstance(f, Sum):
            sums.append(f)
        elif isinstance(f, Negate):
            coeff = -coeff
            stack.append(f.arg)
        else:
            bases.setdefault(f, []).append(ONE)

    # a bare sum that is also a power base merges into that power
    loose = []
    for s in sums:
        if s in bases:
            bases[s].append(ONE)
        else:
            loose.append(s)
    sums = loose

    if exp_args:
        merged = exp_(add(*exp_args))
        c, mono = split_coeff(merged)
        coeff *= c
        for b, e in base_exp_pairs(mono):
            bases.setdefault(b, []).append(e)

    out: list[Expr] = []
    for b in _sorted(bases):
        total = add(*bases[b])
        if total == ZERO:
            continue
        p = power(b, total)
        if isinstance(p, Num):
            coeff *= p.value
        elif isinstance(p, Sum):
            sums.append(p)
        elif isinstance(p, Product):
            for a in p.args:
                if isinstance(a, Num):
                    coeff *= a.value
                elif isinstance(a, Sum):
                    sums.append(a)
                else:
                    out.append(a)
        else:
            out.append(p)
        if coeff == 0:
            return ZERO

    if not sums:
        # distinct input bases can still produce clashing output bases
        # (e.g. b^a with exp pieces); merge them one more time if so.
        out_bases = [f.base if isinstance(f, Power) else f for f in out]
        n_exp = sum(1 for f in out if isinstance(f, Func) and f.name == "exp")
        if len(set(out_bases)) < len(out) or n_exp > 1:
            return mul(Num(coeff), *out)
        return _make_product(coeff, out)

    terms = [_make_product(coeff, out)]
    for s in sums:
        terms = [mul(t, a) for t in terms for a in s.args]
    return add(*terms)


def add(*terms: Expr) -> Expr:
    return _add(terms, depth=0)


def _add(terms: Iterable[Expr], depth: int) -> Expr:
    coeffs: dict[Expr, Fraction] = defaultdict(Fraction)
    stack = list(terms)
    while stack:
        t = stack.pop()
        if isinstance(t, Sum):
            stack.extend(t.args)
            continue
        if isinstance(t, Negate) or isinstance(t, Product) and any(
                isinstance(a, (Sum, Negate, Product)) for a in t.args):
            t = mul(t)
            if isinstance(t, Sum):
                stack.extend(t.args)
                continue
        c, mono = split_coeff(t)
        coeffs[mono] += c

    items = [(m, c) for m, c in coeffs.items() if c != 0]
    if depth < 8:
        replaced = _recombine(items)
        if replaced is not None:
            return _add(replaced, depth + 1)

    out = _sorted(_with_coeff(c, m) for m, c in items)
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    return Sum(out)


def power(base: Expr, e: Expr) -> Expr:
    if isinstance(e, Num):
        if e.value == 0:
            return ONE
        if e.value == 1:
            return base

    if isinstance(base, Num):
        bv = base.value
        if bv == 1:
            return ONE
        if bv == 0:
            if isinstance(e, Num):
                if e.value > 0:
                    return ZERO
                raise ZeroDivisionError("zero raised to a non-positive power")
            return Power(base, e)
        if isinstance(e, Num):
            ev = e.value
            if ev.denominator == 1:
                return Num(bv ** int(ev))
            if bv > 0:
                p = _int_root(bv.numerator, ev.denominator)
                q = _int_root(bv.denominator, ev.denominator)
                if p is not None and q is not None:
                    return Num(Fraction(p, q) ** ev.numerator)
        return Power(base, e)

    if isinstance(base, Product):
        return mul(*[power(f, e) for f in base.args])
    if isinstance(base, Power):
        return power(base.base, mul(base.exp, e))
    if isinstance(base, Negate):
        return power(mul(MINUS_ONE, base.arg), e)
    if isinstance(base, Func) and base.name == "exp":
        return exp_(mul(base.arg, e))

    if isinstance(base, Sum):
        expands = isinstance(e, Num) and e.is_integer and 0 < e.value <= MAX_EXPAND
        if not expands:
            content = _monomial_content(base)
            if content is not None:
                rest = add(*[mul(t, power(content, MINUS_ONE)) for t in base.args])
                return mul(power(content, e), power(rest, e))
        if isinstance(e, Num) and e.is_integer:
            n = int(e.value)
            if 0 < n <= MAX_EXPAND:
                acc: Expr = base
                for _ in range(n - 1):
                    acc = mul(acc, base)
                return acc
            if n < 0:
                c, prim = _primitive(base)
                if c != 1:
                    return mul(Num(c ** n), Power(prim, e))
        return Power(base, e)

    if isinstance(base, Func) and base.name == "cos" and isinstance(e, Num) \
            and e.is_integer and e.value >= 2:
        n = int(e.value)
        one_minus_sin2 = add(ONE, mul(MINUS_ONE, power(sin_(base.arg), Num(2))))
        rest = base if n % 2 else ONE
        return mul(rest, power(one_minus_sin2, Num(n // 2)))

    if isinstance(base, Func) and base.name in ("tan", "cot", "csc"):
        return power(func(base.name, base.arg), e)

    return Power(base, e)


def _monomial_content(s: Sum) -> Expr | None:
    """Largest monomial dividing every term (bases with rational exponents), or None."""
    common: dict[Expr, Fraction] | None = None
    for t in s.args:
        exps: dict[Expr, Fraction] = {}
        for b, e in base_exp_pairs(split_coeff(t)[1]):
            if isinstance(e, Num):
                exps[b] = e.value
        if common is None:
            common = exps
        else:
            common = {b: min(x, exps[b]) for b, x in common.items() if b in exps}
        if not common:
            return None
    factors = [power(b, Num(x)) for b, x in common.items() if x != 0]
    return mul(*factors) if factors else None


def _primitive(s: Sum) -> tuple[Fraction, Expr]:
    """Split ``s = c * p`` where ``p``'s leading term has coefficient 1."""
    c, _ = split_coeff(s.args[0])
    if c == 1:
        return c, s
    return c, Sum([_with_coeff(k / c, m) for k, m in map(split_coeff, s.args)])


def exp_(arg: Expr) -> Expr:
    if arg == ZERO:
        return ONE
    terms = arg.args if isinstance(arg, Sum) else (arg,)
    logs: dict[Expr, list[Expr]] = {}
    rest: list[Expr] = []
    for t in terms:
        c, mono = split_coeff(t)
        pairs = base_exp_pairs(mono)
        ln_idx = [i for i, (b, e) in enumerate(pairs)
                  if isinstance(b, Func) and b.name == "ln" and e == ONE]
        if len(ln_idx) == 1:
            i = ln_idx[0]
            cof = _make_product(c, [_factor_node(b, e) for j, (b, e) in enumerate(pairs) if j != i])
            logs.setdefault(pairs[i][0].arg, []).append(cof)  # type: ignore[attr-defined]
        else:
            rest.append(t)
    if not logs:
        return Func("exp", arg)
    pieces = [power(b, add(*cs)) for b, cs in logs.items()]
    if rest:
        pieces.append(exp_(add(*rest)))
    return mul(*pieces)


def ln_(arg: Expr) -> Expr:
    if isinstance(arg, Num):
        v = arg.value
        if v == 1:
            return ZERO
        if v > 0 and v.denominator != 1:
            return add(ln_(Num(v.numerator)), mul(MINUS_ONE, ln_(Num(v.denominator))))
        return Func("ln", arg)
    if isinstance(arg, Product):
        return add(*[ln_(f) for f in arg.args])
    if isinstance(arg, Power):
        return mul(arg.exp, ln_(arg.base))
    if isinstance(arg, Func) and arg.name == "exp":
        return arg.arg
    return Func("ln", arg)


def _neg_coeff(arg: Expr) -> bool:
    c, _ = split_coeff(arg)
    return c < 0


def sin_(arg: Expr) -> Expr:
    if arg == ZERO:
        return ZERO
    if _neg_coeff(arg):
        return mul(MINUS_ONE, Func("sin", mul(MINUS_ONE, arg)))
    return Func("sin", arg)


def cos_(arg: Expr) -> Expr:
    if arg == ZERO:
        return ONE
    if _neg_coeff(arg):
        return Func("cos", mul(MINUS_ONE, arg))
    return Func("cos", arg)


def func(name: str, arg: Expr) -> Expr:
    if name == "exp":
        return exp_(arg)
    if name == "ln":
        return ln_(arg)
    if name == "sin":
        return sin_(arg)
    if name == "cos":
        return cos_(arg)
    if name == "tan":
        return mul(sin_(arg), power(cos_(arg), MINUS_ONE))
    if name == "cot":
        return mul(cos_(arg), power(sin_(arg), MINUS_ONE))
    if name == "csc":
        return power(sin_(arg), MINUS_ONE)
    raise ValueError(f"unknown function {name!r}")


# ---------------------------------------------------------------------------
# sum-base recombination
# ---------------------------------------------------------------------------

def _recombine(items: list[tuple[Expr, Fraction]]) -> list[Expr] | None:
    occurrences: dict[Expr, list[tuple[int, Expr]]] = defaultdict(list)
    split = []
    for idx, (mono, _) in enumerate(items):
        pairs = base_exp_pairs(mono)
        split.append(pairs)
        for b, e in pairs:
            if isinstance(b, Sum):
                occurrences[b].append((idx, e))
    if not occurrences:
        return None

    for s in _sorted(occurrences):
        clusters: list[list[tuple[int, Expr, int]]] = []
        for idx, e in occurrences[s]:
            for cl in clusters:
                d = add(e, mul(MINUS_ONE, cl[0][1]))
                if isinstance(d, Num) and d.is_integer:
                    cl.append((idx, e, int(d.value) + cl[0][2]))
                    break
            else:
                clusters.append([(idx, e, 0)])

        for cl in clusters:
            low = min(off for _, _, off in cl)
            base_exp = next(e for _, e, off in cl if off == low)
            numer_terms = []
            for idx, e, off in cl:
                mono, c = items[idx]
                cof = [_factor_node(b, x) for b, x in split[idx] if b != s]
                numer_terms.append(mul(Num(c), *cof, power(s, Num(off - low))))
            numer = add(*numer_terms)
            k = 0
            while numer != ZERO:
                q = poly_divide(numer, s)
                if q is None:
                    break
                numer, k = q, k + 1
            distinct = len({off for _, _, off in cl}) > 1
            if numer != ZERO and k == 0 and not distinct:
                continue
            used = {idx for idx, _, _ in cl}
            keep = [_with_coeff(c, m) for i, (m, c) in enumerate(items) if i not in used]
            if numer != ZERO:
                keep.append(mul(numer, power(s, add(base_exp, Num(k)))))
            return keep
    return None


def poly_divide(numer: Expr, divisor: Expr) -> Expr | None:
    """Exact division of ``numer`` by the polynomial ``divisor``.

    Both are viewed as polynomials in the bases occurring in ``divisor``
    (which must all carry positive integer exponents); everything else is
    coefficient.  Returns the quotient, or ``None`` when the division is
    not exact or the view does not apply.
    """
    dterms = divisor.args if isinstance(divisor, Sum) else (divisor,)
    dpoly: dict[tuple, Fraction] = {}
    variables: list[Expr] = []
    dsplit = []
    for t in dterms:
        c, mono = split_coeff(t)
        pairs = base_exp_pairs(mono)
        for b, e in pairs:
            if not (isinstance(e, Num) and e.is_integer and e.value > 0):
                return None
            if b not in variables:
                variables.append(b)
        dsplit.append((c, pairs))
    variables = _sorted(variables)
    vindex = {v: i for i, v in enumerate(variables)}
    nv = len(variables)
    for c, pairs in dsplit:
        key = [0] * nv
        for b, e in pairs:
            key[vindex[b]] += int(e.value)  # type: ignore[attr-defined]
        dpoly[tuple(key)] = c
    lead = max(dpoly)
    lead_c = dpoly[lead]

    poly: dict[tuple, dict[Expr, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
    nterms = numer.args if isinstance(numer, Sum) else (numer,)
    for t in nterms:
        c, mono = split_coeff(t)
        key = [0] * nv
        cof = []
        for b, e in base_exp_pairs(mono):
            if b in vindex:
                if not (isinstance(e, Num) and e.is_integer and e.value > 0):
                    return None
                key[vindex[b]] += int(e.value)
            else:
                cof.append(_factor_node(b, e))
        poly[tuple(key)][_make_product(Fraction(1), cof)] += c

    quotient: list[Expr] = []
    for _ in range(10_000):
        poly = {k: v for k, v in ((k, {m: c for m, c in v.items() if c != 0}) for k, v in poly.items()) if v}
        if not poly:
            return add(*quotient)
        top = max(poly)
        if any(a < b for a, b in zip(top, lead)):
            return None
        shift = tuple(a - b for a, b in zip(top, lead))
        qcoef = {m: c / lead_c for m, c in poly[top].items()}
        monomial = [power(variables[i], Num(n)) for i, n in enumerate(shift) if n]
        for m, c in qcoef.items():
            quotient.append(mul(Num(c), m, *monomial))
        for dk, dc in dpoly.items():
            target = tuple(a + b for a, b in zip(shift, dk))
            slot = poly.setdefault(target, defaultdict(Fraction))
            for m, c in qcoef.items():
                slot[m] = slot.get(m, Fraction(0)) - c * dc
    return None


# ---------------------------------------------------------------------------
# simplify
# ---------------------------------------------------------------------------

def rebuild(e: Expr, leaf) -> Expr:
    """Rebuild ``e`` bottom-up through the canonical constructors.

    ``leaf`` maps each :class:`Symbol` to its replacement expression.
    """
    memo: dict[Expr, Expr] = {}

    def go(node: Expr) -> Expr:
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Num):
            out: Expr = node
        elif isinstance(node, Symbol):
            out = leaf(node)
        elif isinstance(node, Sum):
            out = add(*[go(a) for a in node.args])
        elif isinstance(node, Product):
            out = mul(*[go(a) for a in node.args])
        elif isinstance(node, Power):
            out = power(go(node.base), go(node.exp))
        elif isinstance(node, Negate):
            out = mul(MINUS_ONE, go(node.arg))
        elif isinstance(node, Func):
            out = func(node.name, go(node.arg))
        else:  # pragma: no cover
            raise TypeError(type(node).__name__)
        memo[node] = out
        return out

    return go(e)


def simplify(e: Expr) -> Expr:
    """Canonical form of ``e`` (idempotent)."""
    return rebuild(e, lambda s: s)
