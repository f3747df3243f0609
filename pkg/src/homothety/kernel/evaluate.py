"""Floating-point evaluation, sampling domains and the zero test."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Mapping

from .canon import simplify
from .nodes import Expr, Func, Negate, Num, Power, Product, Sum, Symbol, as_expr

# |sin x|, |cos x| or a power base below this count as zero when inverted
SINGULAR_EPS = 1e-12
ZERO_TOL = 1e-9
ZERO_SAMPLES = 16


class DomainError(ArithmeticError):
    """Evaluation left the real domain of an expression."""


class UnboundSymbolError(KeyError):
    pass


def eval_at(e: Expr, point: Mapping[str, float]) -> float:
    """Evaluate ``e`` in IEEE double precision.

    ``point`` maps symbol labels (``"t"``, ``"alpha_1"``, ``"nu__t"``) to
    floats.  Raises :class:`DomainError` outside the real domain and
    :class:`UnboundSymbolError` for a missing symbol.
    """
    memo: dict[Expr, float] = {}

    def ev(node: Expr) -> float:
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Num):
            out = float(node.value)
        elif isinstance(node, Symbol):
            try:
                out = float(point[node.label])
            except KeyError:
                raise UnboundSymbolError(node.label) from None
        elif isinstance(node, Sum):
            out = math.fsum(ev(a) for a in node.args)
        elif isinstance(node, Product):
            out = 1.0
            for a in node.args:
                out *= ev(a)
        elif isinstance(node, Negate):
            out = -ev(node.arg)
        elif isinstance(node, Power):
            out = _pow(ev(node.base), node.exp, ev(node.exp))
        elif isinstance(node, Func):
            out = _func(node.name, ev(node.arg))
        else:  # pragma: no cover
            raise TypeError(type(node).__name__)
        if math.isnan(out) or math.isinf(out):
            raise DomainError(f"non-finite value in {node}")
        memo[node] = out
        return out

    try:
        return ev(e)
    except OverflowError as exc:
        raise DomainError(str(exc)) from None


def _pow(b: float, exp_node: Expr, x: float) -> float:
    integral = isinstance(exp_node, Num) and exp_node.is_integer
    if b < 0 and not integral:
        raise DomainError("negative base with non-integer exponent")
    if abs(b) < SINGULAR_EPS and x < 0:
        raise DomainError("division by zero")
    if integral:
        return b ** int(exp_node.value)  # type: ignore[attr-defined]
    return b ** x


def _func(name: str, a: float) -> float:
    if name == "exp":
        return math.exp(a)
    if name == "ln":
        if a <= 0:
            raise DomainError("ln of a non-positive number")
        return math.log(a)
    if name == "sin":
        return math.sin(a)
    if name == "cos":
        return math.cos(a)
    if name == "tan":
        c = math.cos(a)
        if abs(c) < SINGULAR_EPS:
            raise DomainError("tan at a pole")
        return math.sin(a) / c
    s = math.sin(a)
    if abs(s) < SINGULAR_EPS:
        raise DomainError(f"{name} at a pole")
    if name == "cot":
        return math.cos(a) / s
    if name == "csc":
        return 1.0 / s
    raise ValueError(name)  # pragma: no cover


DEFAULT_BOX = {
    "t": (0.5, 2.0),
    "r": (0.5, 2.0),
    "theta": (0.3, 2.8),
    "phi": (0.1, 6.1),
}


@dataclass(frozen=True)
class SampleDomain:
    """Box of sampling intervals plus positivity constraints.

    Symbols without an interval of their own (parameters, jet variables
    of undetermined functions) use ``default``.
    """

    intervals: Mapping[str, tuple[float, float]] = field(default_factory=lambda: dict(DEFAULT_BOX))
    default: tuple[float, float] = (0.5, 2.0)
    positive: tuple[Expr, ...] = ()

    def __post_init__(self) -> None:
        for name, (lo, hi) in list(self.intervals.items()) + [("default", self.default)]:
            if not lo < hi:
                raise ValueError(f"degenerate interval for {name}: [{lo}, {hi}]")

    def interval(self, label: str) -> tuple[float, float]:
        return self.intervals.get(label, self.default)

    def with_overrides(self, intervals=None, positive=()) -> SampleDomain:
        box = dict(self.intervals)
        box.update(intervals or {})
        return SampleDomain(box, self.default, tuple(self.positive) + tuple(as_expr(p) for p in positive))

    def draw(self, labels, rng: random.Random) -> dict[str, float]:
        return {lab: rng.uniform(*self.interval(lab)) for lab in sorted(labels)}

    def admits(self, point: Mapping[str, float]) -> bool:
        for p in self.positive:
            try:
                if eval_at(p, point) <= 0:
                    return False
            except (DomainError, UnboundSymbolError):
                return False
        return True


def labels_of(*exprs: Expr) -> set[str]:
    out: set[str] = set()
    for e in exprs:
        out.update(s.label for s in e.free_symbols)
    return out


@dataclass(frozen=True)
class ZeroVerdict:
    tier: str  # "symbolic", "numeric" or "nonzero"
    witness: dict | None = None
    value: float | None = None
    samples: int = 0

    @property
    def is_zero(self) -> bool:
        return self.tier != "nonzero"

    def __bool__(self) -> bool:
        return self.is_zero


def is_zero(e: Expr, domain: SampleDomain | None = None, seed: int = 0,
            samples: int = ZERO_SAMPLES, tol: float = ZERO_TOL) -> ZeroVerdict:
    """Decide whether ``e`` vanishes identically.

    Symbolic tier: the canonical form is the literal 0.  Otherwise ``e``
    is evaluated at ``samples`` seeded points; all ``|value| <= tol`` gives
    the numeric tier, else the first offending point is the witness.
    Points where evaluation fails are redrawn (at most 100 attempts each).
    """
    e = simplify(e)
    if isinstance(e, Num) and e.value == 0:
        return ZeroVerdict("symbolic")
    domain = domain or SampleDomain()
    rng = random.Random(seed)
    labels = labels_of(e, *domain.positive)
    taken = 0
    for _ in range(samples):
        for _attempt in range(100):
            point = domain.draw(labels, rng)
            if not domain.admits(point):
                continue
            try:
                v = eval_at(e, point)
            except DomainError:
                continue
            break
        else:
            continue
        taken += 1
        if abs(v) > tol:
            return ZeroVerdict("nonzero", point, v, taken)
    if taken == 0:
        return ZeroVerdict("nonzero", None, math.nan, 0)
    return ZeroVerdict("numeric", None, None, taken)
