from __future__ import annotations

import itertools

import pytest

from homothety.g3 import Case2Params, case1_metric, case2_metric
from homothety.geometry import (
    N,
    Metric,
    MetricError,
    christoffel,
    curvature,
    inverse_defects,
    metric_inverse,
    symmetry_defects,
)
from homothety.kernel import ZERO, eval_at, expr, is_zero, sym
from homothety.oracle import compare_curvature, curvature_points, draw_points

MINKOWSKI_CARTESIAN = Metric.diagonal(["1", "-1", "-1", "-1"])


def minkowski_spherical() -> Metric:
    return case1_metric(ZERO)


def test_constant_metric_is_its_own_inverse():
    inv = metric_inverse(MINKOWSKI_CARTESIAN)
    assert [list(row) for row in inv] == [
        [expr(x) if i == j else ZERO for j, x in enumerate(["1", "-1", "-1", "-1"])] for i in range(N)]


def test_case1_inverse_is_diagonal_reciprocal():
    inv = metric_inverse(case1_metric(expr("t/r")))
    expected = ["exp(-t/r)", "-1", "-r^(-2)", "-r^(-2)*csc(theta)^2"]
    for i in range(N):
        assert is_zero(inv[i][i] - expr(expected[i])).is_zero
    assert all(inv[i][j] == ZERO for i in range(N) for j in range(N) if i != j)


def test_case2_inverse_time_component():
    inv = metric_inverse(case2_metric(Case2Params()))
    assert is_zero(inv[0][0] - expr("r^(-2*(alpha_1+1))")).is_zero


def test_inverse_of_non_diagonal_metric():
    g = Metric([[expr("1"), expr("t"), ZERO, ZERO],
                [expr("t"), expr("-1"), ZERO, ZERO],
                [ZERO, ZERO, expr("-r^2"), ZERO],
                [ZERO, ZERO, ZERO, expr("-r^2*sin(theta)^2")]])
    assert all(v.is_zero for v in inverse_defects(g, metric_inverse(g)))


def test_minkowski_spherical_christoffels_match_the_flat_chart():
    gam = christoffel(minkowski_spherical())
    assert gam[1][2][2] == expr("-r")
    assert gam[2][1][2] == expr("1/r")
    assert is_zero(gam[3][2][3] - expr("cot(theta)")).is_zero
    assert curvature(minkowski_spherical()).is_flat


def test_cartesian_minkowski_connection_vanishes():
    gam = christoffel(MINKOWSKI_CARTESIAN)
    assert all(c == ZERO for c in itertools.chain.from_iterable(itertools.chain.from_iterable(gam)))


def test_case1_time_christoffel(case1_bundle):
    # half the t-derivative of nu = t/r
    assert is_zero(case1_bundle.christoffel[0][0][0] - expr("1/(2*r)")).is_zero


@pytest.mark.parametrize("nu", ["t/r", "0", "2*ln(r)"])
def test_sphere_block_christoffel(nu):
    gam = christoffel(case1_metric(expr(nu)))
    assert is_zero(gam[2][3][3] - expr("-sin(theta)*cos(theta)")).is_zero


def test_flat_space_curvature_is_all_zero():
    b = curvature(minkowski_spherical())
    assert b.ricci_scalar == ZERO and b.stress_trace == ZERO
    assert all(x == ZERO for row in b.ricci for x in row)
    assert all(x == ZERO for row in b.stress_energy for x in row)


@pytest.mark.parametrize("label,i,j,value", [
    ("R_00", 0, 0, "t^2/(4*r^4)*exp(t/r)"),
    ("R_11", 1, 1, "-(t/r^4)*(r+t/4)"),
    ("R_22", 2, 2, "t/(2*r)"),
    ("R_33", 3, 3, "t/(2*r)*sin(theta)^2"),
])
def test_case1_ricci_values(case1_bundle, label, i, j, value):
    assert is_zero(case1_bundle.ricci[i][j] - expr(value)).is_zero, label


@pytest.mark.parametrize("i,j,value", [
    (0, 0, "0"),
    (1, 1, "-t/r^3"),
    (2, 2, "t*(2*r+t)/(4*r^2)"),
])
def test_case1_stress_values(case1_bundle, i, j, value):
    assert is_zero(case1_bundle.stress_energy[i][j] - expr(value)).is_zero


def test_case1_scalars(case1_bundle):
    assert is_zero(case1_bundle.ricci_scalar - expr("t^2/(2*r^4)")).is_zero
    assert is_zero(case1_bundle.stress_trace - expr("-t^2/(2*r^4)")).is_zero


def test_trace_identity_holds_on_both_branches(case1_bundle, case2_bundle, case2_params):
    assert is_zero(case1_bundle.trace_identity()).is_zero
    assert is_zero(case2_bundle.trace_identity(), case2_params.domain()).is_zero


def test_index_symmetries(case1_bundle, case2_bundle, case2_params):
    assert all(v.is_zero for v in symmetry_defects(case1_bundle))
    assert all(v.is_zero for v in symmetry_defects(case2_bundle, case2_params.domain()))


def test_riemann_antisymmetry_on_last_pair(case2_bundle, case2_params):
    riem = case2_bundle.riemann
    dom = case2_params.domain()
    for a, b, c, d in itertools.product(range(N), repeat=4):
        if c < d:
            assert is_zero(riem[a][b][c][d] + riem[a][b][d][c], dom).is_zero


@pytest.mark.parametrize("which", ["case1", "case2"])
def test_contracted_bianchi_at_20_points(which, case1_bundle, case2_bundle, case2_params):
    bundle = case1_bundle if which == "case1" else case2_bundle
    dom = case2_params.domain() if which == "case2" else None
    exprs = list(bundle.bianchi())
    pts = draw_points(exprs, dom, 20, seed=5)
    worst = max(abs(eval_at(e, p)) for e in exprs for p in pts)
    assert worst <= 1e-6


@pytest.mark.parametrize("triple", [(1, 0, 2), (1, 1, 2), (2, 1, 3)])
def test_symbolic_curvature_matches_finite_differences(triple):
    g = case2_metric(Case2Params(*triple))
    b = curvature(g)
    for p in curvature_points(g, Case2Params(*triple).domain(), 20, seed=3):
        dev = compare_curvature(b, p)
        assert max(dev.values()) <= 1e-6, (p, dev)


def test_case1_curvature_matches_finite_differences(case1_bundle):
    g = case1_metric(expr("t/r"))
    for p in curvature_points(g, None, 20, seed=3):
        assert max(compare_curvature(case1_bundle, p).values()) <= 1e-6


def test_asymmetric_components_are_rejected():
    rows = [[expr("1"), expr("t"), ZERO, ZERO],
            [expr("r"), expr("-1"), ZERO, ZERO],
            [ZERO, ZERO, expr("-1"), ZERO],
            [ZERO, ZERO, ZERO, expr("-1")]]
    with pytest.raises(MetricError):
        Metric(rows)


def test_zero_diagonal_entry_is_rejected():
    with pytest.raises(MetricError):
        Metric.diagonal(["1", "-1", "sin(t)^2+cos(t)^2-1", "-1"])


def test_singular_non_diagonal_metric_is_rejected():
    g = Metric([[expr("1"), expr("1"), ZERO, ZERO],
                [expr("1"), expr("1"), ZERO, ZERO],
                [ZERO, ZERO, expr("-1"), ZERO],
                [ZERO, ZERO, ZERO, expr("-1")]])
    with pytest.raises(MetricError):
        metric_inverse(g)


def test_wrong_shape_is_rejected():
    with pytest.raises(MetricError):
        Metric([[sym("t")]])
