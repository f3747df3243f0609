"""Lie derivatives of the metric, homothety residuals, brackets, closure."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .geometry import N, SPHERICAL, Chart, ChartMismatchError, Matrix, Metric
from .kernel import (
    MINUS_ONE,
    ZERO,
    Expr,
    SampleDomain,
    ZeroVerdict,
    add,
    as_expr,
    differentiate,
    eval_at,
    is_zero,
    mul,
    pretty,
    simplify,
)
from .kernel.evaluate import DomainError, labels_of


@dataclass(frozen=True)
class VectorField:
    """``H = H^a d/dx^a`` with simplified components."""

    components: tuple[Expr, Expr, Expr, Expr]
    chart: Chart = SPHERICAL
    name: str = ""

    def __post_init__(self) -> None:
        comps = tuple(simplify(as_expr(c)) for c in self.components)
        if len(comps) != N:
            raise ValueError("a vector field needs 4 components")
        object.__setattr__(self, "components", comps)

    def __getitem__(self, a: int) -> Expr:
        return self.components[a]

    def __add__(self, other: VectorField) -> VectorField:
        _same_chart(self.chart, other.chart)
        return VectorField(tuple(add(x, y) for x, y in zip(self, other)), self.chart)

    def __iter__(self):
        return iter(self.components)

    def scaled(self, c) -> VectorField:
        c = as_expr(c)
        return VectorField(tuple(mul(c, x) for x in self), self.chart, self.name)

    def named(self, name: str) -> VectorField:
        return VectorField(self.components, self.chart, name)

    @property
    def is_zero_field(self) -> bool:
        return all(c == ZERO for c in self.components)

    def __str__(self) -> str:
        parts = [f"({pretty(c)})*d_{x}" for c, x in zip(self.components, self.chart.coords) if c != ZERO]
        return " + ".join(parts) or "0"


def coordinate_field(name: str, chart: Chart = SPHERICAL) -> VectorField:
    comps = [ZERO] * N
    comps[chart.index(name)] = as_expr(1)
    return VectorField(tuple(comps), chart, f"d_{name}")


def _same_chart(a: Chart, b: Chart) -> None:
    if a != b:
        raise ChartMismatchError(f"charts differ: {a.coords} vs {b.coords}")


def lie_derivative_metric(H: VectorField, g: Metric) -> Matrix:
    """``(L_H g)_ab = H^c d_c g_ab + g_cb d_a H^c + g_ac d_b H^c``."""
    _same_chart(H.chart, g.chart)
    coords = g.chart.coords
    G = g.components
    dH = [[differentiate(H[c], coords[a]) for c in range(N)] for a in range(N)]
    out = [[ZERO] * N for _ in range(N)]
    for a in range(N):
        for b in range(a, N):
            terms = [mul(H[c], differentiate(G[a][b], coords[c])) for c in range(N) if H[c] != ZERO]
            for c in range(N):
                terms.append(mul(G[c][b], dH[a][c]))
                terms.append(mul(G[a][c], dH[b][c]))
            out[a][b] = out[b][a] = add(*terms)
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True)
class HomothetyResult:
    residual: Matrix
    verdicts: dict[tuple[int, int], ZeroVerdict]
    phi0: Expr

    @property
    def is_homothety(self) -> bool:
        return all(v.is_zero for v in self.verdicts.values())

    @property
    def is_killing(self) -> bool:
        return self.is_homothety and self.phi0 == ZERO

    @property
    def tier(self) -> str:
        tiers = {v.tier for v in self.verdicts.values()}
        if "nonzero" in tiers:
            return "nonzero"
        return "numeric" if "numeric" in tiers else "symbolic"

    def first_failure(self):
        for ab, v in sorted(self.verdicts.items()):
            if not v.is_zero:
                return ab, v
        return None


def homothety_residual(H: VectorField, g: Metric, phi0=ZERO,
                       domain: SampleDomain | None = None, seed: int = 0) -> HomothetyResult:
    """``(L_H g)_ab - 2 phi0 g_ab`` with a zero verdict for each of the 10 components.

    ``H`` is a homothety iff every component vanishes, and a Killing vector
    iff additionally ``phi0 == 0``.
    """
    phi0 = simplify(as_expr(phi0))
    L = lie_derivative_metric(H, g)
    two_phi = mul(as_expr(-2), phi0)
    res = tuple(tuple(add(L[a][b], mul(two_phi, g.components[a][b])) for b in range(N))
                for a in range(N))
    verdicts = {(a, b): is_zero(res[a][b], domain, seed) for a in range(N) for b in range(a, N)}
    return HomothetyResult(res, verdicts, phi0)


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """``[X, Y]^a = X^b d_b Y^a - Y^b d_b X^a``."""
    _same_chart(X.chart, Y.chart)
    coords = X.chart.coords
    comps = []
    for a in range(N):
        terms = []
        for b in range(N):
            if X[b] != ZERO:
                terms.append(mul(X[b], differentiate(Y[a], coords[b])))
            if Y[b] != ZERO:
                terms.append(mul(MINUS_ONE, Y[b], differentiate(X[a], coords[b])))
        comps.append(add(*terms))
    return VectorField(tuple(comps), X.chart)


def field_difference_is_zero(X: VectorField, Y: VectorField, domain=None, seed: int = 0) -> bool:
    return all(is_zero(add(x, mul(MINUS_ONE, y)), domain, seed).is_zero for x, y in zip(X, Y))


def jacobi(X: VectorField, Y: VectorField, Z: VectorField) -> VectorField:
    """``[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]]``."""
    return lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) \
        + lie_bracket(Z, lie_bracket(X, Y))


@dataclass(frozen=True)
class AlgebraTable:
    """Brackets of a generator list in the generator basis.

    ``brackets[(i, j)]`` (``i < j``) holds the rational coefficients of
    ``[X_i, X_j]`` or ``None`` when the bracket leaves the span.
    """

    generators: tuple[VectorField, ...]
    brackets: dict[tuple[int, int], tuple[Fraction, ...] | None]

    @property
    def closes(self) -> bool:
        return all(v is not None for v in self.brackets.values())

    def bracket(self, i: int, j: int) -> tuple[Fraction, ...] | None:
        if i == j:
            return (Fraction(0),) * len(self.generators)
        if i < j:
            return self.brackets[(i, j)]
        c = self.brackets[(j, i)]
        return None if c is None else tuple(-x for x in c)

    def structure_constants(self) -> dict[tuple[int, int, int], Fraction]:
        """Nonzero ``C^k_ij`` with ``[X_i, X_j] = C^k_ij X_k`` for ``i < j``."""
        out = {}
        for (i, j), c in sorted(self.brackets.items()):
            if c is None:
                continue
            for k, x in enumerate(c):
                if x:
                    out[(i, j, k)] = x
        return out

    def names(self) -> list[str]:
        return [g.name or f"X{i}" for i, g in enumerate(self.generators)]

    def format(self) -> str:
        names = self.names()
        lines = []
        for (i, j), c in sorted(self.brackets.items()):
            lhs = f"[{names[i]}, {names[j]}]"
            if c is None:
                lines.append(f"{lhs} = not in span")
                continue
            terms = [_term(x, names[k]) for k, x in enumerate(c) if x]
            rhs = " ".join(terms).lstrip("+ ") if terms else "0"
            lines.append(f"{lhs} = {rhs.replace('- ', '-', 1) if rhs.startswith('- ') else rhs}")
        return "\n".join(lines)


def _term(x: Fraction, name: str) -> str:
    sign = "-" if x < 0 else "+"
    x = abs(x)
    if x == 1:
        return f"{sign} {name}"
    mag = str(x.numerator) if x.denominator == 1 else f"({x})"
    return f"{sign} {mag}*{name}"


def _solve_span(target: VectorField, basis: Sequence[VectorField], domain: SampleDomain,
                seed: int, points: int = 12) -> tuple[Fraction, ...] | None:
    """Constant rational ``c`` with ``target = sum c_k basis_k``, or None.

    Candidates come from least squares over sampled points and are then
    confirmed exactly component by component.
    """
    if target.is_zero_field:
        return (Fraction(0),) * len(basis)
    labels = labels_of(*target, *(x for v in basis for x in v))
    rng = random.Random(seed)
    rows, rhs = [], []
    tries = 0
    while len(rows) < points * N and tries < 100 * points:
        tries += 1
        p = domain.draw(labels, rng)
        if not domain.admits(p):
            continue
        try:
            block = [[eval_at(v[a], p) for v in basis] for a in range(N)]
            vals = [eval_at(target[a], p) for a in range(N)]
        except DomainError:
            continue
        rows.extend(block)
        rhs.extend(vals)
    if not rows:
        return None
    coef, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    cand = tuple(Fraction(float(x)).limit_denominator(1000) for x in coef)
    combo = [add(*[mul(as_expr(c), v[a]) for c, v in zip(cand, basis)]) for a in range(N)]
    for a in range(N):
        if not is_zero(add(target[a], mul(MINUS_ONE, combo[a])), domain, seed).is_zero:
            return None
    return cand


def closure_table(generators: Sequence[VectorField], domain: SampleDomain | None = None,
                  seed: int = 0) -> AlgebraTable:
    if len(generators) < 2:
        raise ValueError("closure needs at least two generators")
    for g in generators[1:]:
        _same_chart(generators[0].chart, g.chart)
    domain = domain or SampleDomain()
    brackets = {}
    for i, j in itertools.combinations(range(len(generators)), 2):
        b = lie_bracket(generators[i], generators[j])
        brackets[(i, j)] = _solve_span(b, generators, domain, seed)
    return AlgebraTable(tuple(generators), brackets)
