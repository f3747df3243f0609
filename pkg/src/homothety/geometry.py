"""Curvature chain for a metric over a four-dimensional chart.

Conventions (torsion-free Levi-Civita connection, signature (+,-,-,-))::

    Gamma^a_bc = 1/2 g^ad (d_b g_dc + d_c g_db - d_d g_bc)
    R^a_bcd    = d_c Gamma^a_bd - d_d Gamma^a_bc
                 + Gamma^a_ce Gamma^e_bd - Gamma^a_de Gamma^e_bc
    R_ab       = R^c_acb,   R = g^ab R_ab
    G_ab       = R_ab - 1/2 R g_ab = kappa T_ab   (no cosmological term)

With these, the 2-sphere block of e^nu dt^2 - dr^2 - r^2 dOmega^2 has
positive R_22 = -r nu'/2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .kernel import (
    HALF,
    MINUS_ONE,
    ONE,
    ZERO,
    Expr,
    SampleDomain,
    Symbol,
    add,
    as_expr,
    differentiate,
    is_zero,
    mul,
    power,
    simplify,
)

N = 4
Matrix = tuple[tuple[Expr, ...], ...]


class MetricError(ValueError):
    pass


class ChartMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    coords: tuple[str, str, str, str] = ("t", "r", "theta", "phi")

    def __post_init__(self) -> None:
        if len(self.coords) != N or len(set(self.coords)) != N:
            raise ValueError(f"a chart needs exactly 4 distinct coordinates, got {self.coords}")

    @property
    def symbols(self) -> tuple[Symbol, ...]:
        return tuple(Symbol(c) for c in self.coords)

    def index(self, name: str) -> int:
        return self.coords.index(name)

    def __getitem__(self, i: int) -> str:
        return self.coords[i]


SPHERICAL = Chart()


def _matrix(rows) -> Matrix:
    return tuple(tuple(simplify(as_expr(x)) for x in row) for row in rows)


def zeros() -> Matrix:
    return tuple((ZERO,) * N for _ in range(N))


@dataclass(frozen=True)
class Metric:
    """Symmetric 4x4 metric ``g_ab`` over ``chart``."""

    components: Matrix
    chart: Chart = SPHERICAL
    check: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", _matrix(self.components))
        g = self.components
        if len(g) != N or any(len(row) != N for row in g):
            raise MetricError("metric must be 4x4")
        for a, b in itertools.combinations(range(N), 2):
            if g[a][b] != g[b][a]:
                raise MetricError(f"metric not symmetric in ({a},{b})")
        if self.check:
            for a in range(N):
                if is_zero(g[a][a]).is_zero:
                    raise MetricError(f"diagonal entry g_{a}{a} vanishes")

    @classmethod
    def diagonal(cls, entries, chart: Chart = SPHERICAL, check: bool = True) -> Metric:
        entries = [as_expr(e) for e in entries]
        rows = [[entries[a] if a == b else ZERO for b in range(N)] for a in range(N)]
        return cls(rows, chart, check)

    def __getitem__(self, ab: tuple[int, int]) -> Expr:
        return self.components[ab[0]][ab[1]]

    @property
    def is_diagonal(self) -> bool:
        g = self.components
        return all(g[a][b] == ZERO for a in range(N) for b in range(N) if a != b)


# ---------------------------------------------------------------------------
# curvature chain
# ---------------------------------------------------------------------------

def _det(m: list[list[Expr]]) -> Expr:
    if len(m) == 1:
        return m[0][0]
    terms = []
    for j, x in enumerate(m[0]):
        if x == ZERO:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        sign = ONE if j % 2 == 0 else MINUS_ONE
        terms.append(mul(sign, x, _det(minor)))
    return add(*terms)


def metric_inverse(g: Metric) -> Matrix:
    """``g^ab``; reciprocal entries for a diagonal metric, adjugate otherwise."""
    comps = g.components
    if g.is_diagonal:
        inv = []
        for a in range(N):
            if comps[a][a] == ZERO:
                raise MetricError("metric is not invertible")
            inv.append([power(comps[a][a], MINUS_ONE) if a == b else ZERO for b in range(N)])
        return _matrix(inv)
    rows = [list(r) for r in comps]
    det = _det(rows)
    if det == ZERO:
        raise MetricError("metric is not invertible (zero determinant)")
    det_inv = power(det, MINUS_ONE)
    inv = [[ZERO] * N for _ in range(N)]
    for a in range(N):
        for b in range(N):
            minor = [row[:a] + row[a + 1:] for i, row in enumerate(rows) if i != b]
            sign = ONE if (a + b) % 2 == 0 else MINUS_ONE
            inv[a][b] = mul(sign, _det(minor), det_inv)
    return _matrix(inv)


def _derivs(g: Metric) -> list[Matrix]:
    """``dg[c][a][b] = d_c g_ab``."""
    coords = g.chart.coords
    out = []
    for c in coords:
        rows = [[ZERO] * N for _ in range(N)]
        for a in range(N):
            for b in range(a, N):
                rows[a][b] = rows[b][a] = differentiate(g.components[a][b], c)
        out.append(tuple(tuple(r) for r in rows))
    return out


def christoffel(g: Metric, inverse: Matrix | None = None):
    """``Gamma[a][b][c]`` = Gamma^a_bc, symmetric in (b, c)."""
    ginv = inverse if inverse is not None else metric_inverse(g)
    dg = _derivs(g)
    gam = [[[ZERO] * N for _ in range(N)] for _ in range(N)]
    for a in range(N):
        for b in range(N):
            for c in range(b, N):
                terms = []
                for d in range(N):
                    if ginv[a][d] == ZERO:
                        continue
                    inner = add(dg[b][d][c], dg[c][d][b], mul(MINUS_ONE, dg[d][b][c]))
                    if inner != ZERO:
                        terms.append(mul(HALF, ginv[a][d], inner))
                gam[a][b][c] = gam[a][c][b] = add(*terms)
    return tuple(tuple(tuple(row) for row in block) for block in gam)


def riemann(g: Metric, gamma=None):
    """``Riem[a][b][c][d]`` = R^a_bcd; all 256 components."""
    gam = gamma if gamma is not None else christoffel(g)
    coords = g.chart.coords
    dgam = [[[[ZERO] * N for _ in range(N)] for _ in range(N)] for _ in range(N)]
    for c in range(N):
        for a in range(N):
            for b in range(N):
                for d in range(b, N):
                    dgam[c][a][b][d] = dgam[c][a][d][b] = differentiate(gam[a][b][d], coords[c])
    R = [[[[ZERO] * N for _ in range(N)] for _ in range(N)] for _ in range(N)]
    for a, b in itertools.product(range(N), repeat=2):
        for c in range(N):
            for d in range(c + 1, N):
                terms = [dgam[c][a][b][d], mul(MINUS_ONE, dgam[d][a][b][c])]
                for e in range(N):
                    terms.append(mul(gam[a][c][e], gam[e][b][d]))
                    terms.append(mul(MINUS_ONE, gam[a][d][e], gam[e][b][c]))
                val = add(*terms)
                R[a][b][c][d] = val
                R[a][b][d][c] = mul(MINUS_ONE, val)
    return tuple(tuple(tuple(tuple(x) for x in y) for y in z) for z in R)


def ricci(g: Metric, riem=None, inverse: Matrix | None = None) -> tuple[Matrix, Expr]:
    """``(R_ab, R)`` with ``R_ab = R^c_acb`` and ``R = g^ab R_ab``."""
    riem = riem if riem is not None else riemann(g)
    ginv = inverse if inverse is not None else metric_inverse(g)
    ric = [[ZERO] * N for _ in range(N)]
    for a in range(N):
        for b in range(a, N):
            ric[a][b] = ric[b][a] = add(*[riem[c][a][c][b] for c in range(N)])
    scalar = add(*[mul(ginv[a][b], ric[a][b]) for a in range(N) for b in range(N)])
    return tuple(tuple(r) for r in ric), scalar


def einstein(g: Metric, ric: Matrix, scalar: Expr) -> Matrix:
    half_r = mul(HALF, scalar)
    return tuple(tuple(add(ric[a][b], mul(MINUS_ONE, half_r, g.components[a][b]))
                       for b in range(N)) for a in range(N))


def stress_energy(g: Metric, ric: Matrix, scalar: Expr,
                  inverse: Matrix | None = None) -> tuple[Matrix, Expr]:
    """``(kappa T_ab, kappa T)``; the trace is taken with ``g^ab``."""
    ginv = inverse if inverse is not None else metric_inverse(g)
    T = einstein(g, ric, scalar)
    trace = add(*[mul(ginv[a][b], T[a][b]) for a in range(N) for b in range(N)])
    return T, trace


@dataclass(frozen=True)
class CurvatureBundle:
    metric: Metric
    inverse: Matrix
    christoffel: tuple
    riemann: tuple
    ricci: Matrix
    ricci_scalar: Expr
    einstein: Matrix
    stress_energy: Matrix
    stress_trace: Expr

    @cached_property
    def einstein_up(self) -> Matrix:
        gi, G = self.inverse, self.einstein
        return tuple(tuple(add(*[mul(gi[a][c], gi[b][d], G[c][d])
                                 for c in range(N) for d in range(N)
                                 if gi[a][c] != ZERO and gi[b][d] != ZERO])
                           for b in range(N)) for a in range(N))

    def bianchi(self) -> tuple[Expr, ...]:
        """Divergence ``nabla_a G^ab`` (identically zero)."""
        Gu = self.einstein_up
        gam = self.christoffel
        coords = self.metric.chart.coords
        out = []
        for b in range(N):
            terms = [differentiate(Gu[a][b], coords[a]) for a in range(N)]
            for a, e in itertools.product(range(N), repeat=2):
                terms.append(mul(gam[a][a][e], Gu[e][b]))
                terms.append(mul(gam[b][a][e], Gu[a][e]))
            out.append(add(*terms))
        return tuple(out)

    def trace_identity(self) -> Expr:
        """``kappa T + R``, zero in four dimensions without a cosmological term."""
        return add(self.stress_trace, self.ricci_scalar)

    @property
    def is_flat(self) -> bool:
        return all(x == ZERO for x in itertools.chain.from_iterable(
            itertools.chain.from_iterable(itertools.chain.from_iterable(self.riemann))))


def curvature(g: Metric) -> CurvatureBundle:
    ginv = metric_inverse(g)
    gam = christoffel(g, ginv)
    riem = riemann(g, gam)
    ric, scalar = ricci(g, riem, ginv)
    T, trace = stress_energy(g, ric, scalar, ginv)
    return CurvatureBundle(g, ginv, gam, riem, ric, scalar, einstein(g, ric, scalar), T, trace)


def symmetry_defects(bundle: CurvatureBundle, domain: SampleDomain | None = None, seed: int = 0):
    """Index symmetries that fail ``is_zero``; empty when all hold."""
    bad = []
    gam, riem, ric = bundle.christoffel, bundle.riemann, bundle.ricci
    for a, b, c in itertools.product(range(N), repeat=3):
        if b < c and not is_zero(add(gam[a][b][c], mul(MINUS_ONE, gam[a][c][b])), domain, seed):
            bad.append(("christoffel", a, b, c))
    for a, b in itertools.combinations(range(N), 2):
        if not is_zero(add(ric[a][b], mul(MINUS_ONE, ric[b][a])), domain, seed):
            bad.append(("ricci", a, b))
    for a, b, c, d in itertools.product(range(N), repeat=4):
        if c <= d and not is_zero(add(riem[a][b][c][d], riem[a][b][d][c]), domain, seed):
            bad.append(("riemann", a, b, c, d))
    return bad


def inverse_defects(g: Metric, inverse: Matrix, domain: SampleDomain | None = None, seed: int = 0):
    bad = []
    for a, b in itertools.product(range(N), repeat=2):
        prod = add(*[mul(inverse[a][c], g.components[c][b]) for c in range(N)])
        target = ONE if a == b else ZERO
        if not is_zero(add(prod, mul(MINUS_ONE, target)), domain, seed):
            bad.append((a, b))
    return bad
