"""Reference component lists for the two explicit solution branches.

Static-radius branch (``nu = t/r``): exact golden values, checked as hard
equalities.  Separable branch: the reference lists are written in terms of
``alpha`` and are only compared numerically after substituting
``alpha = alpha_1 t + alpha_2``; several entries are known not to agree
with the engine (see the comparison table in the suite report).
"""

from __future__ import annotations

from .kernel import Expr, expr, substitute

CASE1_RICCI = {
    (0, 0): "t^2*exp(t/r)/(4*r^4)",
    (1, 1): "-t/r^4*(r+t/4)",
    (2, 2): "t/(2*r)",
    (3, 3): "t/(2*r)*sin(theta)^2",
}
CASE1_RICCI_SCALAR = "t^2/(2*r^4)"
CASE1_STRESS = {
    (0, 0): "0",
    (1, 1): "-t/r^3",
    (2, 2): "t*(2*r+t)/(4*r^2)",
    (3, 3): "t*(2*r+t)/(4*r^2)*sin(theta)^2",
}
CASE1_STRESS_TRACE = "-t^2/(2*r^4)"

_R22 = ("r^(-3)*(r^3 - r*alpha_1*alpha^(-2/alpha_1) + (m-1)*r^(3-m)*alpha^(-m/alpha_1)"
        " + alpha^(-3/alpha_1)*(1-3*r*alpha^(1/alpha_1)))")
_KT22 = ("1/2*(3*r^(-m)*alpha^(-m/alpha_1) + alpha^(-2/alpha_1)*r^(-2)*(3-2*r*alpha^(1/alpha_1))"
         " + m*(r^(-2*alpha_1)*alpha^(-2)-r^(-m)*alpha^(-m/alpha_1))"
         " - 2^(-1)*(2+m^2)*r^(-2*alpha_1)*alpha^(-2)"
         " + r^(2-m-2*alpha_1)*alpha^(-2+(2-m)/alpha_1)"
         " - alpha^(-4/alpha_1)*(-1+r*alpha^(1/alpha_1)+3*r^2*alpha^(2/alpha_1)-r^3*alpha^(3/alpha_1))*r^(-4)"
         " - (2+m)*r^(-m)*alpha^(-m/alpha_1) + alpha_1"
         " - (alpha^(-1/alpha_1)*r^(-1)-3*r^(-m)*alpha^(-m/alpha_1))*alpha_1^2)")
_SCALAR = ("r^(-6)*(-1/2*m^2*r^(4-2*alpha_1)*alpha^(-2)"
           " + alpha^(-m/alpha_1)*r^(4-m)*(3*alpha_1^2-3*m-alpha_1*m+3*alpha_1)"
           " + alpha_1*m*r^(4-2*alpha_1)*alpha^(-2)"
           " + r^(-2*alpha_1-m+6)*alpha^((-2*alpha_1-m+2)/alpha_1)"
           " - r^(4-2*alpha_1)*alpha^(-2) - 2*r^4"
           " - r^3*alpha^(-1/alpha_1)*(alpha_1^2+2*alpha_1+1)"
           " + r^2*alpha^(-2/alpha_1)*(5*alpha_1+9) - r*alpha^(-3/alpha_1) - alpha^(-4/alpha_1))")

# keys: ("ricci", a, b), ("ricci_scalar",), ("stress", a, b), ("stress_trace",)
CASE2_REFERENCE: dict[tuple, str] = {
    ("ricci", 0, 0): (
        "alpha^(-2)*(-1 + m*alpha_1/2 + (1+alpha_1)*("
        "3*r^(-2*(alpha_1-1))*alpha^(2*(alpha_1-1)/alpha_1)"
        " - r^(2*alpha_1-1)*(1+alpha_1)*alpha^((2*alpha_1-1)/alpha_1)"
        " + r^(2*alpha_1-m)*(1-m+2*alpha_1)*alpha^((2*alpha_1-m)/alpha_1)))"),
    ("ricci", 0, 1): "2/(r*alpha)",
    ("ricci", 1, 1): (
        "r^(-2)*(2 + 2*(1+alpha_1) - (1+alpha_1)^2"
        " - r^(-2*(alpha_1-1))*alpha^(-2*(alpha_1-1)/alpha_1)"
        " + 1/2*m*r^(m-2*alpha_1)*(m-alpha_1)*alpha^((m-2*alpha_1)/alpha_1))"),
    ("ricci", 2, 2): _R22,
    ("ricci", 3, 3): f"({_R22} + (1 - r*alpha^(1/alpha_1))/(r^4*alpha^(4/alpha_1)))*sin(theta)^2",
    ("ricci_scalar",): _SCALAR,
    ("stress", 0, 0): (
        "1/4*((m^2-2)*alpha^2 - 2*alpha^((2-m)/alpha_1-2)*r^(2-m)"
        " + alpha^(-(m+2)/alpha_1)*(2*alpha^(2/alpha_1)*r^2*(alpha_1^2-m*alpha_1+3*alpha_1+m+2)"
        " - 2*alpha^(m/alpha_1)*r^m*(alpha^(1/alpha_1)*(alpha_1+1)^2*r-alpha_1))*r^(2*alpha_1-m-2)"
        " + 2*alpha^(-4/alpha_1)*(2*alpha^(4/alpha_1)*r^4-3*alpha^(2/alpha_1)*r^2"
        "+alpha^(1/alpha_1)*r+1)*r^(2*alpha_1-4))"),
    ("stress", 0, 1): "2/(alpha*r)",
    ("stress", 1, 1): (
        "1/4*((m^2-2)*alpha^((m-2*alpha_1)/alpha_1)*r^(-2*alpha_1+m-2)"
        " - 2*alpha^((m-4)/alpha_1)*r^(m-6) - 2*alpha^((m-3)/alpha_1)*r^(m-5)"
        " + 18*r^(m-4)*alpha^((m-2)/alpha_1) - 2*alpha^((m-1)/alpha_1)*r^(m-3)"
        " - 4*alpha^(m/alpha_1)*r^(m-2) + 2*alpha_1^2*r^(-3)*(r-alpha^((m-1)/alpha_1)*r^m)"
        " - 6*r^(-2)*(m-2)"
        " - 2*alpha_1*(2*alpha^((m-1)/alpha_1)*r^(m+1)-5*alpha^((m-2)/alpha_1)*r^m+m*r^2-3*r^2)*r^(-4)"
        " - 2*alpha^(2/alpha_1-2)*r^(-2*alpha_1))"),
    ("stress", 2, 2): _KT22,
    ("stress", 3, 3): f"({_KT22} + alpha^(-4/alpha_1)*r^(-4)*(1-r*alpha^(1/alpha_1)))*sin(theta)^2",
    ("stress_trace",): (
        "r^(-6)*(1/2*m^2*r^(4-2*alpha_1)*alpha^(-2)"
        " - alpha^(-m/alpha_1)*r^(4-m)*(3*alpha_1^2-3*m-alpha_1*m+3*alpha_1)"
        " - alpha_1*m*r^(4-2*alpha_1)*alpha^(-2)"
        " - r^(-2*alpha_1-m+6)*alpha^((-2*alpha_1-m+2)/alpha_1)"
        " + r^(4-2*alpha_1)*alpha^(-2) + 2*r^4"
        " + r^3*alpha^(-1/alpha_1)*(alpha_1^2+2*alpha_1+1)"
        " - r^2*alpha^(-2/alpha_1)*(5*alpha_1+9) + r*alpha^(-3/alpha_1) + alpha^(-4/alpha_1))"),
}


def case1_reference() -> dict[tuple, Expr]:
    out: dict[tuple, Expr] = {}
    for ab, s in CASE1_RICCI.items():
        out[("ricci", *ab)] = expr(s)
    out[("ricci_scalar",)] = expr(CASE1_RICCI_SCALAR)
    for ab, s in CASE1_STRESS.items():
        out[("stress", *ab)] = expr(s)
    out[("stress_trace",)] = expr(CASE1_STRESS_TRACE)
    return out


def case2_reference(alpha: Expr) -> dict[tuple, Expr]:
    """Reference list with ``alpha`` replaced by the given expression."""
    return {k: substitute(expr(s), {"alpha": alpha}) for k, s in CASE2_REFERENCE.items()}


def component_label(key: tuple) -> str:
    names = {"ricci": "R", "stress": "kT", "ricci_scalar": "R", "stress_trace": "kT"}
    if len(key) == 1:
        return names[key[0]]
    return f"{names[key[0]]}_{key[1]}{key[2]}"
