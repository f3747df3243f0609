from __future__ import annotations

import pytest

from homothety.g3 import (
    Case2Params,
    GFunctions,
    MetricAnsatz,
    RotationParams,
    case1_homothety,
    case1_metric,
    case2_ansatz,
    case2_generators,
    case2_homothety,
    case2_metric,
    g45_constraint_residuals,
    general_homothety,
    gj_constraint_residuals,
    h_from_lambda,
    reduced_residuals,
    x_power_law,
)
from homothety.kernel import ONE, ZERO, expr, is_zero, sym
from homothety.lie import VectorField, field_difference_is_zero, homothety_residual

PHI0 = sym("phi_0")
R = expr("r")


def vf(*comps: str) -> VectorField:
    return VectorField(tuple(expr(c) for c in comps))


def all_zero(exprs, domain=None) -> bool:
    return all(is_zero(e, domain).is_zero for e in exprs)


def case1_ansatz(nu: str = "t/r") -> MetricAnsatz:
    return MetricAnsatz(expr(nu), ZERO, x_power_law())


# -- constructors -------------------------------------------------------------

def test_radial_scaling_ansatz():
    a = MetricAnsatz.symbolic()
    H = general_homothety(GFunctions(g4=expr("t^2"), g5=R), RotationParams(), a)
    assert field_difference_is_zero(H, vf("t^2", "r", "0", "0"))


def test_axial_rotation_ansatz():
    H = general_homothety(GFunctions(), RotationParams(c3=ONE), MetricAnsatz.symbolic())
    assert field_difference_is_zero(H, vf("0", "0", "0", "1"))


def test_first_rotation_generator():
    H = general_homothety(GFunctions(), RotationParams(c1=ONE), MetricAnsatz.symbolic())
    assert field_difference_is_zero(H, vf("0", "0", "sin(phi)", "cot(theta)*cos(phi)"))


def test_angle_dependent_inputs_are_rejected():
    with pytest.raises(ValueError):
        MetricAnsatz(expr("theta"), ZERO, ZERO)
    with pytest.raises(ValueError):
        GFunctions(g4=expr("phi"))
    with pytest.raises(ValueError):
        RotationParams(c1=expr("t"))


def test_mu_strips_the_areal_log():
    assert MetricAnsatz(ZERO, ZERO, x_power_law()).mu == ZERO


# -- g_j residuals ------------------------------------------------------------

def test_vanishing_gj_solves_the_corrected_system():
    assert gj_constraint_residuals(case1_ansatz(), ZERO) == (ZERO,) * 4


def test_vanishing_gj_fails_the_literal_second_residual():
    res = gj_constraint_residuals(case1_ansatz(), ZERO, corrected=False)
    assert res[0] == res[2] == res[3] == ZERO
    # -nu' e^(nu - lambda) with nu = t/r
    assert is_zero(res[1] - expr("t/r^2*exp(t/r)")).is_zero
    assert not is_zero(res[1]).is_zero


@pytest.mark.parametrize("corrected", [True, False])
def test_constant_nu_satisfies_both_forms(corrected):
    a = MetricAnsatz(expr("3"), expr("t"), x_power_law())
    assert gj_constraint_residuals(a, ZERO, corrected) == (ZERO,) * 4


def test_symbolic_ansatz_literal_residual_is_nu_prime_term():
    a = MetricAnsatz.symbolic()
    res = gj_constraint_residuals(a, ZERO, corrected=False)
    assert not is_zero(res[1]).is_zero


# -- g4/g5 and reduced residuals ----------------------------------------------

def test_case1_bindings_solve_g45():
    res = g45_constraint_residuals(case1_ansatz(), PHI0 * expr("t"), PHI0 * R, PHI0)
    assert all_zero(res)


def test_case2_bindings_solve_g45():
    p = Case2Params()
    res = g45_constraint_residuals(case2_ansatz(p), -PHI0 * p.alpha, PHI0 * R, PHI0)
    assert all(e == ZERO for e in res)


def test_trivial_g45():
    assert g45_constraint_residuals(MetricAnsatz.symbolic(), ZERO, ZERO, ZERO) == (ZERO,) * 4


def test_case1_reduced_residuals_vanish():
    assert all_zero(reduced_residuals(expr("t/r"), ZERO, expr("t"), R))


def test_case2_reduced_residuals_vanish():
    p = Case2Params()
    a = case2_ansatz(p)
    assert all(e == ZERO for e in reduced_residuals(a.nu, a.lam, -p.alpha, R))


def test_radially_varying_h_breaks_third_residual():
    res = reduced_residuals(expr("t/r"), ZERO, expr("t*r"), R)
    assert not is_zero(res[2]).is_zero


def test_h_follows_from_lambda():
    p = Case2Params()
    assert is_zero(h_from_lambda(case2_ansatz(p).lam) + p.alpha, p.domain()).is_zero


def test_static_lambda_cannot_fix_h():
    with pytest.raises(ValueError):
        h_from_lambda(expr("ln(r)"))


# -- Case 1 -------------------------------------------------------------------

def test_case1_metric_entries():
    g = case1_metric(expr("t/r"))
    assert [g[i, i] for i in range(4)] == [
        expr("exp(t/r)"), expr("-1"), expr("-r^2"), expr("-r^2*sin(theta)^2")]


def test_case1_with_zero_nu_is_flat_spherical_minkowski():
    g = case1_metric(ZERO)
    assert g[0, 0] == ONE and g[1, 1] == expr("-1")


def test_case1_power_law():
    assert case1_metric(expr("2*ln(r)"))[0, 0] == expr("r^2")


def test_case1_homothety_shapes():
    assert field_difference_is_zero(case1_homothety(expr("t"), PHI0), vf("phi_0*t", "phi_0*r", "0", "0"))
    with_axial = case1_homothety(expr("t"), PHI0, RotationParams(c3=ONE))
    assert field_difference_is_zero(with_axial, vf("phi_0*t", "phi_0*r", "0", "1"))
    assert field_difference_is_zero(case1_homothety(expr("t"), ZERO, RotationParams(c3=ONE)),
                                    vf("0", "0", "0", "1"))


def test_case1_h_must_be_time_only():
    with pytest.raises(ValueError):
        case1_homothety(expr("t*r"), PHI0)


@pytest.mark.parametrize("nu,h", [("t/r", "t"), ("2*ln(r)", "1"), ("0", "t"), ("2*ln(t)", "t/2")])
def test_constraint_satisfying_pairs_give_homotheties(nu, h):
    # each pair zeroes 2 h' + nu_t h + nu_r r - 2
    assert is_zero(reduced_residuals(expr(nu), ZERO, expr(h), R)[1]).is_zero
    res = homothety_residual(case1_homothety(expr(h), PHI0, RotationParams.symbolic()),
                             case1_metric(expr(nu)), PHI0)
    assert res.is_homothety


def test_constraint_violating_pair_is_not_a_homothety():
    nu, h = expr("t/r"), expr("t^2")
    assert not is_zero(reduced_residuals(nu, ZERO, h, R)[1]).is_zero
    res = homothety_residual(case1_homothety(h, PHI0), case1_metric(nu), PHI0)
    assert not res.is_homothety


# -- Case 2 -------------------------------------------------------------------

def test_case2_numeric_metric():
    g = case2_metric(Case2Params(1, 0, 2))
    assert g[0, 0] == expr("r^4")
    assert g[1, 1] == expr("-r^2*t^2")


def test_case2_without_m_has_no_lambda():
    assert case2_ansatz(Case2Params(1, 0, 0)).lam == ZERO


def test_case2_degenerates_into_case1_family():
    a = case2_ansatz(Case2Params(1, 0, 0))
    assert a.lam == ZERO
    h = expr("-t")
    assert all_zero(reduced_residuals(a.nu, ZERO, h, R))


@pytest.mark.parametrize("alpha_1", [0, "0", "alpha_1-alpha_1"])
def test_zero_separation_constant_is_rejected(alpha_1):
    with pytest.raises(ValueError, match="alpha_1"):
        Case2Params(expr(str(alpha_1)), 1, 2)


def test_case2_homothety_shapes():
    assert field_difference_is_zero(case2_homothety(Case2Params(1, 0, sym("m")), ONE),
                                    vf("-t", "r", "0", "0"))
    with_rot = case2_homothety(Case2Params(1, 0, 2), ONE, RotationParams(c1=ONE))
    assert field_difference_is_zero(with_rot, vf("-t", "r", "sin(phi)", "cot(theta)*cos(phi)"))
    assert field_difference_is_zero(case2_homothety(Case2Params(), ZERO, RotationParams(c3=ONE)),
                                    vf("0", "0", "0", "1"))


def test_case2_symbolic_homothety():
    p = Case2Params()
    res = homothety_residual(case2_homothety(p, PHI0, RotationParams.symbolic()), case2_metric(p),
                             PHI0, p.domain())
    assert res.is_homothety and res.tier == "symbolic"


def test_case2_generators_are_homothety_and_killing():
    p = Case2Params()
    g = case2_metric(p)
    x0, _, _, x3 = case2_generators(p)
    assert homothety_residual(x0, g, ONE, p.domain()).is_homothety
    assert homothety_residual(x3, g, ZERO, p.domain()).is_killing


def test_case2_domain_keeps_alpha_positive():
    p = Case2Params(-1, 3, 2)
    dom = p.domain()
    assert not dom.admits({"t": 3.5})
    assert dom.admits({"t": 1.0})
