"""Independent numeric checks: finite differences and seeded sampling.

Nothing here differentiates symbolically.  ``fd_curvature`` evaluates the
metric components at stencil points and builds the connection and Ricci
tensor from those numbers alone, so it can validate the exact chain.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .geometry import N, CurvatureBundle, Metric
from .kernel import Expr, SampleDomain, as_expr, eval_at
from .kernel.evaluate import DomainError, labels_of

FD_STEP = 1e-5
# curvature stencils are fourth order, so they take coarser steps
FD_STEP_CURVATURE = 1e-3
FD_STEP_SECOND = 2e-3
# |a - b| / max(1, |b|): relative for large values, absolute near zero
REL_FLOOR = 1.0

__all__ = [
    "FD_STEP", "FD_STEP_CURVATURE", "FD_STEP_SECOND", "FDCurvature", "OracleError", "OracleReport",
    "SampleDomain", "compare_curvature", "curvature_points", "draw_points", "fd_curvature",
    "fd_derivative", "fd_resolved", "relative_deviation", "sample_compare", "sample_max_residual",
]


class OracleError(RuntimeError):
    pass


def _step(x: float, rel: float) -> float:
    return rel * max(1.0, abs(x))


def fd_derivative(e: Expr, s: str, point: Mapping[str, float], step: float = FD_STEP) -> float:
    """Central difference of ``e`` in ``s`` with step ``step * max(1, |x_s|)``.

    A :class:`DomainError` at a stencil point propagates to the caller.
    """
    e = as_expr(e)
    x = float(point[s])
    h = _step(x, step)
    hi = dict(point, **{s: x + h})
    lo = dict(point, **{s: x - h})
    return (eval_at(e, hi) - eval_at(e, lo)) / (2 * h)


def fd_resolved(e: Expr, s: str, point: Mapping[str, float], step: float = FD_STEP,
                tol: float = 1e-7) -> bool:
    """Whether the central difference at ``point`` is trustworthy.

    Compares the stencil at ``step`` and ``2 * step``; their gap is about three
    times the truncation error.  Near a pole the gap blows up and the point is
    useless as an oracle sample, whatever the exact derivative says.
    """
    d1 = fd_derivative(e, s, point, step)
    d2 = fd_derivative(e, s, point, 2 * step)
    return abs(d2 - d1) / 3 <= tol * max(REL_FLOOR, abs(d1))


@dataclass(frozen=True)
class FDCurvature:
    metric: np.ndarray
    inverse: np.ndarray
    christoffel: np.ndarray  # [a, b, c] -> Gamma^a_bc
    riemann: np.ndarray  # [a, b, c, d] -> R^a_bcd
    ricci: np.ndarray
    ricci_scalar: float


def _metric_at(g: Metric, point: Mapping[str, float]) -> np.ndarray:
    return np.array([[eval_at(g.components[a][b], point) for b in range(N)] for a in range(N)])


# fourth-order central stencils: offsets and weights (denominator 12 h or 12 h^2)
_D1 = ((-2, 1), (-1, -8), (1, 8), (2, -1))
_D2 = ((-2, -1), (-1, 16), (0, -30), (1, 16), (2, -1))


def fd_curvature(g: Metric, point: Mapping[str, float], step: float = FD_STEP_CURVATURE,
                 step2: float = FD_STEP_SECOND) -> FDCurvature:
    """Christoffel symbols, Riemann and Ricci tensors and the scalar at ``point``.

    Only metric values enter: first and second metric derivatives come from
    fourth-order central stencils (relative steps ``step`` and ``step2``),
    mixed second derivatives from the tensor product of two first-derivative
    stencils.  The higher order lets the steps be large enough that rounding
    stays near 1e-10 while truncation stays smaller still.
    """
    coords = g.chart.coords
    point = dict(point)
    g0 = _metric_at(g, point)
    if abs(np.linalg.det(g0)) < 1e-12:
        raise DomainError("metric is singular at the point")
    ginv = np.linalg.inv(g0)
    cache: dict[tuple, np.ndarray] = {}

    def at(**shift: float) -> np.ndarray:
        key = tuple(sorted(shift.items()))
        if key not in cache:
            p = dict(point)
            for k, v in shift.items():
                p[k] = point[k] + v
            cache[key] = _metric_at(g, p)
        return cache[key]

    dg = np.zeros((N, N, N))  # [e, a, b] -> d_e g_ab
    ddg = np.zeros((N, N, N, N))  # [e, f, a, b] -> d_e d_f g_ab
    for e_, name in enumerate(coords):
        h = _step(point[name], step)
        dg[e_] = sum(w * at(**{name: k * h}) for k, w in _D1) / (12 * h)
    for e_, f_ in itertools.combinations_with_replacement(range(N), 2):
        ne, nf = coords[e_], coords[f_]
        he, hf = _step(point[ne], step2), _step(point[nf], step2)
        if e_ == f_:
            val = sum(w * (at(**{ne: k * he}) if k else g0) for k, w in _D2) / (12 * he * he)
        else:
            val = sum(wi * wj * at(**{ne: i * he, nf: j * hf})
                      for i, wi in _D1 for j, wj in _D1) / (144 * he * hf)
        ddg[e_, f_] = ddg[f_, e_] = val

    # lowered connection [d, b, c] = 1/2 (d_b g_dc + d_c g_db - d_d g_bc)
    low = 0.5 * (np.einsum("bdc->dbc", dg) + np.einsum("cdb->dbc", dg) - dg)
    gamma = np.einsum("ad,dbc->abc", ginv, low)
    dlow = 0.5 * (np.einsum("ebdc->edbc", ddg) + np.einsum("ecdb->edbc", ddg) - ddg)
    dginv = -np.einsum("ai,eij,jd->ead", ginv, dg, ginv)
    dgamma = np.einsum("ead,dbc->eabc", dginv, low) + np.einsum("ad,edbc->eabc", ginv, dlow)

    # R^a_bcd = d_c Gamma^a_bd - d_d Gamma^a_bc + Gamma^a_ce Gamma^e_bd - Gamma^a_de Gamma^e_bc
    riem = (np.einsum("cabd->abcd", dgamma) - np.einsum("dabc->abcd", dgamma)
            + np.einsum("ace,ebd->abcd", gamma, gamma) - np.einsum("ade,ebc->abcd", gamma, gamma))
    ric = np.einsum("cacb->ab", riem)
    scalar = float(np.einsum("ab,ab->", ginv, ric))
    return FDCurvature(g0, ginv, gamma, riem, ric, scalar)


def relative_deviation(a: float, b: float) -> float:
    return float(abs(a - b) / max(REL_FLOOR, abs(b)))


def compare_curvature(bundle: CurvatureBundle, point: Mapping[str, float]) -> dict[str, float]:
    """Worst relative deviation of each exact curvature family from ``fd_curvature``."""
    fd = fd_curvature(bundle.metric, point)
    worst = {"christoffel": 0.0, "riemann": 0.0, "ricci": 0.0, "ricci_scalar": 0.0}
    for a, b, c, d in itertools.product(range(N), repeat=4):
        v = eval_at(bundle.riemann[a][b][c][d], point)
        worst["riemann"] = max(worst["riemann"], relative_deviation(fd.riemann[a, b, c, d], v))
    for a, b, c in itertools.product(range(N), repeat=3):
        v = eval_at(bundle.christoffel[a][b][c], point)
        worst["christoffel"] = max(worst["christoffel"], relative_deviation(fd.christoffel[a, b, c], v))
    for a, b in itertools.product(range(N), repeat=2):
        v = eval_at(bundle.ricci[a][b], point)
        worst["ricci"] = max(worst["ricci"], relative_deviation(fd.ricci[a, b], v))
    worst["ricci_scalar"] = relative_deviation(fd.ricci_scalar, eval_at(bundle.ricci_scalar, point))
    return worst


def curvature_points(g: Metric, domain: SampleDomain | None, n: int, seed: int) -> list[dict[str, float]]:
    """Seeded points over every chart coordinate where ``fd_curvature`` is defined."""
    comps = [x for row in g.components for x in row]
    return draw_points(comps, domain, n, seed, check=lambda p: fd_curvature(g, p),
                       extra_labels=g.chart.coords)


@dataclass(frozen=True)
class OracleReport:
    max_abs: float
    max_rel: float
    worst_point: dict[str, float] | None
    samples: int
    seed: int

    def passes(self, tol: float, relative: bool = False) -> bool:
        return (self.max_rel if relative else self.max_abs) <= tol

    def as_dict(self) -> dict:
        return {
            "max_abs": self.max_abs,
            "max_rel": self.max_rel,
            "worst_point": self.worst_point,
            "samples": self.samples,
            "seed": self.seed,
        }


def _flatten(e) -> list[Expr]:
    if isinstance(e, (Expr, int, str)) or not isinstance(e, Iterable):
        return [as_expr(e)]
    out: list[Expr] = []
    for x in e:
        out.extend(_flatten(x))
    return out


def draw_points(exprs: Iterable[Expr], domain: SampleDomain | None, n: int, seed: int,
                check=None, extra_labels: Iterable[str] = ()) -> list[dict[str, float]]:
    """``n`` accepted points in sample order; rejects after ``100 n`` attempts.

    ``check(point)`` may raise :class:`DomainError` to reject a point.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    exprs = list(exprs)
    domain = domain or SampleDomain()
    labels = labels_of(*exprs, *domain.positive) | set(extra_labels)
    rng = random.Random(seed)
    out: list[dict[str, float]] = []
    attempts = 0
    while len(out) < n:
        if attempts >= 100 * n:
            raise OracleError(f"only {len(out)} of {n} valid samples after {attempts} attempts")
        attempts += 1
        p = domain.draw(labels, rng)
        if not domain.admits(p):
            continue
        try:
            for e in exprs:
                eval_at(e, p)
            if check is not None:
                check(p)
        except DomainError:
            continue
        out.append(p)
    return out


def sample_compare(actual, expected, domain: SampleDomain | None = None, n: int = 100,
                   seed: int = 0) -> OracleReport:
    """Largest entrywise deviation of ``actual`` from ``expected`` over seeded points."""
    a, b = _flatten(actual), _flatten(expected)
    if len(a) != len(b):
        raise ValueError("shape mismatch")
    pts = draw_points(a + b, domain or SampleDomain(), n, seed)
    max_abs = max_rel = 0.0
    worst = pts[0]
    for p in pts:
        for x, y in zip(a, b):
            va, vb = eval_at(x, p), eval_at(y, p)
            if abs(va - vb) > max_abs:
                max_abs, worst = abs(va - vb), p
            max_rel = max(max_rel, relative_deviation(va, vb))
    return OracleReport(max_abs, max_rel, worst, len(pts), seed)


def sample_max_residual(e, domain: SampleDomain | None = None, n: int = 100,
                        seed: int = 0) -> OracleReport:
    """Largest ``|e|`` over ``n`` seeded accepted points.

    ``e`` may be an expression or any nesting of sequences of expressions.
    Residuals have no natural scale, so the relative figure equals the
    absolute one.
    """
    zeros = [as_expr(0)] * len(_flatten(e))
    return sample_compare(e, zeros, domain, n, seed)
