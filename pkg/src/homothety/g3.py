"""Homotheties of spherically symmetric metrics with a maximal SO(3) isometry group.

The metric family is ``e^nu dt^2 - e^lambda dr^2 - e^x dOmega^2`` with
``nu, lambda, x`` functions of ``(t, r)``.  This module builds the general
homothety vector of that family, the constraint residuals its coefficient
functions must satisfy, and the two explicit solution branches with
``x = 2 ln r``:

* the static-radius branch (``lambda = 0``), whose vector is
  ``phi0 (h(t) d_t + r d_r)`` plus a rotation;
* the separable branch, where ``alpha = alpha_1 t + alpha_2`` and the
  metric is ``r^(2(alpha_1+1)) dt^2 - r^m alpha^(m/alpha_1) dr^2 - r^2 dOmega^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import SPHERICAL, Metric
from .kernel import (
    MINUS_ONE,
    ONE,
    TWO,
    ZERO,
    Expr,
    SampleDomain,
    Symbol,
    add,
    as_expr,
    differentiate,
    exp_,
    func,
    is_zero,
    ln_,
    mul,
    power,
    simplify,
    sym,
)
from .lie import VectorField

T, R, THETA, PHI = (sym(c) for c in SPHERICAL.coords)
_ANGLES = ("theta", "phi")


def _dt(e: Expr) -> Expr:
    return differentiate(e, "t")


def _dr(e: Expr) -> Expr:
    return differentiate(e, "r")


def _neg(e: Expr) -> Expr:
    return mul(MINUS_ONE, e)


def _check_tr(name: str, e: Expr) -> Expr:
    e = simplify(as_expr(e))
    for c in _ANGLES:
        if differentiate(e, c) != ZERO:
            raise ValueError(f"{name} must depend on t and r only, found {c}")
    return e


def _check_constant(name: str, e: Expr) -> Expr:
    e = simplify(as_expr(e))
    for c in SPHERICAL.coords:
        if differentiate(e, c) != ZERO:
            raise ValueError(f"{name} must be constant, depends on {c}")
    return e


@dataclass(frozen=True)
class MetricAnsatz:
    nu: Expr
    lam: Expr
    x: Expr

    def __post_init__(self) -> None:
        for name in ("nu", "lam", "x"):
            object.__setattr__(self, name, _check_tr(name, getattr(self, name)))

    @classmethod
    def symbolic(cls) -> MetricAnsatz:
        """``nu, lambda, x`` as undetermined functions of ``(t, r)``."""
        dep = ("t", "r")
        return cls(Symbol("nu", dep), Symbol("lambda", dep), Symbol("x", dep))

    @property
    def mu(self) -> Expr:
        return add(self.x, mul(as_expr(-2), ln_(R)))

    def metric(self, check: bool = True) -> Metric:
        return Metric.diagonal(
            [exp_(self.nu), _neg(exp_(self.lam)), _neg(exp_(self.x)),
             _neg(mul(exp_(self.x), power(func("sin", THETA), TWO)))],
            SPHERICAL, check)


@dataclass(frozen=True)
class GFunctions:
    g1: Expr = ZERO
    g2: Expr = ZERO
    g3: Expr = ZERO
    g4: Expr = ZERO
    g5: Expr = ZERO

    def __post_init__(self) -> None:
        for name in ("g1", "g2", "g3", "g4", "g5"):
            object.__setattr__(self, name, _check_tr(name, getattr(self, name)))


@dataclass(frozen=True)
class RotationParams:
    c1: Expr = ZERO
    c2: Expr = ZERO
    c3: Expr = ZERO

    def __post_init__(self) -> None:
        for name in ("c1", "c2", "c3"):
            object.__setattr__(self, name, _check_constant(name, getattr(self, name)))

    @classmethod
    def symbolic(cls) -> RotationParams:
        return cls(sym("c_1"), sym("c_2"), sym("c_3"))


@dataclass(frozen=True)
class Case2Params:
    alpha_1: Expr = sym("alpha_1")
    alpha_2: Expr = sym("alpha_2")
    m: Expr = sym("m")

    def __post_init__(self) -> None:
        for name in ("alpha_1", "alpha_2", "m"):
            object.__setattr__(self, name, _check_constant(name, getattr(self, name)))
        if self.alpha_1 == ZERO:
            raise ValueError("alpha_1 must be nonzero")

    @property
    def alpha(self) -> Expr:
        """``alpha_1 t + alpha_2``."""
        return add(mul(self.alpha_1, T), self.alpha_2)

    def domain(self, base: SampleDomain | None = None) -> SampleDomain:
        """Sampling domain that keeps ``alpha`` positive."""
        return (base or SampleDomain()).with_overrides(positive=[self.alpha])

    def bindings(self) -> dict[str, Expr]:
        return {"alpha_1": self.alpha_1, "alpha_2": self.alpha_2, "m": self.m}


def rotation_field(rot: RotationParams) -> VectorField:
    """``(c1 sin phi - c2 cos phi) d_theta + (cot theta (c1 cos phi + c2 sin phi) + c3) d_phi``."""
    s, c = func("sin", PHI), func("cos", PHI)
    h2 = add(mul(rot.c1, s), _neg(mul(rot.c2, c)))
    h3 = add(mul(func("cot", THETA), add(mul(rot.c1, c), mul(rot.c2, s))), rot.c3)
    return VectorField((ZERO, ZERO, h2, h3))


def general_homothety(gf: GFunctions, rot: RotationParams, a: MetricAnsatz) -> VectorField:
    """Homothety vector of the SO(3)-symmetric family, component by component.

    The ``g3`` term of the radial component carries ``cos theta`` as in the
    published ansatz.
    """
    st, ct = func("sin", THETA), func("cos", THETA)
    sp, cp = func("sin", PHI), func("cos", PHI)
    r2 = power(R, TWO)
    h0 = add(
        _neg(mul(r2, exp_(add(a.mu, _neg(a.nu))),
                 add(mul(st, add(mul(_dt(gf.g1), sp), _neg(mul(_dt(gf.g2), cp)))),
                     mul(_dt(gf.g3), cp)))),
        gf.g4)
    h1 = add(
        mul(r2, exp_(add(a.mu, _neg(a.lam))),
            add(mul(st, add(mul(_dr(gf.g1), sp), _neg(mul(_dr(gf.g2), cp)))),
                mul(_dr(gf.g3), ct))),
        gf.g5)
    h2 = add(_neg(mul(ct, add(mul(gf.g1, sp), _neg(mul(gf.g2, cp))))),
             mul(gf.g3, st),
             add(mul(rot.c1, sp), _neg(mul(rot.c2, cp))))
    h3 = add(_neg(mul(func("csc", THETA), add(mul(gf.g1, cp), mul(gf.g2, sp)))),
             mul(func("cot", THETA), add(mul(rot.c1, cp), mul(rot.c2, sp))),
             rot.c3)
    return VectorField((h0, h1, h2, h3))


def gj_constraint_residuals(a: MetricAnsatz, gj, corrected: bool = True) -> tuple[Expr, ...]:
    """Four residuals the coefficient functions ``g1, g2, g3`` must zero.

    With ``corrected=False`` the second residual is taken literally, where
    the ``e^(nu-lambda)`` term lacks its ``g_j'`` factor, so ``g_j = 0``
    does not solve it unless ``nu' = 0``.
    """
    g = _check_tr("g_j", gj)
    nu, lam, x = a.nu, a.lam, a.x
    gt, gr = _dt(g), _dr(g)
    r1 = add(_neg(mul(_dt(x), exp_(add(x, _neg(nu))), gt)),
             mul(_dr(x), exp_(add(x, _neg(lam))), gr),
             mul(TWO, g))
    tail = mul(_dr(nu), exp_(add(nu, _neg(lam))))
    if corrected:
        tail = mul(tail, gr)
    r2 = add(mul(TWO, _dt(gt)),
             mul(add(mul(TWO, _dt(x)), _neg(_dt(nu))), gt),
             _neg(tail),
             mul(TWO, gr))
    r3 = add(mul(TWO, _dr(gt)),
             mul(add(_dr(x), _neg(_dr(nu))), gt),
             mul(add(_dt(x), _neg(_dt(lam))), gr))
    r4 = add(mul(TWO, _dr(gr)),
             mul(add(mul(TWO, _dr(x)), _neg(_dr(lam))), gr),
             _neg(mul(exp_(add(lam, _neg(nu))), gt)))
    return (r1, r2, r3, r4)


def g45_constraint_residuals(a: MetricAnsatz, g4, g5, phi0) -> tuple[Expr, ...]:
    g4, g5 = _check_tr("g4", g4), _check_tr("g5", g5)
    two_phi = mul(as_expr(-2), as_expr(phi0))
    nu, lam, x = a.nu, a.lam, a.x
    return (
        add(mul(_dt(x), g4), mul(_dr(x), g5), two_phi),
        add(mul(TWO, _dt(g4)), mul(_dt(nu), g4), mul(_dr(nu), g5), two_phi),
        add(mul(exp_(nu), _dr(g4)), _neg(mul(exp_(lam), _dt(g5)))),
        add(mul(TWO, _dr(g5)), mul(_dr(lam), g5), mul(_dt(lam), g4), two_phi),
    )


def reduced_residuals(nu, lam, h, g) -> tuple[Expr, ...]:
    """Constraints left after ``x = 2 ln r`` and ``g4 = phi0 h``, ``g5 = phi0 g``.

    ``phi0`` has been divided out, so the residuals do not involve it.
    """
    nu, lam = _check_tr("nu", nu), _check_tr("lambda", lam)
    h, g = _check_tr("h", h), _check_tr("g", g)
    return (
        add(g, _neg(R)),
        add(mul(TWO, _dt(h)), mul(_dt(nu), h), mul(_dr(nu), R), as_expr(-2)),
        _dr(h),
        add(mul(_dr(lam), R), mul(_dt(lam), h)),
    )


def h_from_lambda(lam) -> Expr:
    """``h = -r lambda' / lambda_t`` from the last reduced constraint."""
    lam = _check_tr("lambda", lam)
    lt = _dt(lam)
    if lt == ZERO:
        raise ValueError("lambda is independent of t; h is not determined by it")
    return mul(MINUS_ONE, R, _dr(lam), power(lt, MINUS_ONE))


def x_power_law() -> Expr:
    """``x = 2 ln r``, i.e. areal radius ``r``."""
    return mul(TWO, ln_(R))


def case1_metric(nu, check: bool = True) -> Metric:
    """``e^nu dt^2 - dr^2 - r^2 dOmega^2``."""
    return MetricAnsatz(nu, ZERO, x_power_law()).metric(check)


def case1_homothety(h, phi0, rot: RotationParams | None = None) -> VectorField:
    h = simplify(as_expr(h))
    if _dr(h) != ZERO or any(differentiate(h, c) != ZERO for c in _ANGLES):
        raise ValueError("h must depend on t only")
    phi0 = as_expr(phi0)
    base = VectorField((mul(phi0, h), mul(phi0, R), ZERO, ZERO))
    return base + rotation_field(rot or RotationParams())


def case2_ansatz(p: Case2Params) -> MetricAnsatz:
    nu = mul(TWO, add(p.alpha_1, ONE), ln_(R))
    lam = add(mul(p.m, ln_(R)), mul(p.m, power(p.alpha_1, MINUS_ONE), ln_(p.alpha)))
    return MetricAnsatz(nu, lam, x_power_law())


def case2_metric(p: Case2Params, check: bool = True) -> Metric:
    """``r^(2(alpha_1+1)) dt^2 - r^m alpha^(m/alpha_1) dr^2 - r^2 dOmega^2``."""
    return case2_ansatz(p).metric(check)


def case2_homothety(p: Case2Params, phi0, rot: RotationParams | None = None) -> VectorField:
    phi0 = as_expr(phi0)
    base = VectorField((_neg(mul(phi0, p.alpha)), mul(phi0, R), ZERO, ZERO))
    return base + rotation_field(rot or RotationParams())


def so3_generators() -> tuple[VectorField, VectorField, VectorField]:
    one = ONE
    return (
        rotation_field(RotationParams(c1=one)).named("X1"),
        rotation_field(RotationParams(c2=one)).named("X2"),
        rotation_field(RotationParams(c3=one)).named("X3"),
    )


def case2_generators(p: Case2Params) -> tuple[VectorField, ...]:
    """``X0 = -alpha d_t + r d_r`` followed by the three rotations."""
    x0 = case2_homothety(p, ONE).named("X0")
    return (x0, *so3_generators())
