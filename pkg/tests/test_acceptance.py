"""Acceptance criteria, one test each.

Every test prints a single ``PASS criterion N: ...`` or ``FAIL criterion N:
...`` line to the terminal (capture is bypassed) before asserting, so a
plain ``pytest tests/test_acceptance.py`` run doubles as the acceptance
report.  Running this file as a script prints the same lines without pytest.
"""

from __future__ import annotations

import contextlib
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import pytest

from homothety.cli import main as cli_main
from homothety.g3 import (
    Case2Params,
    MetricAnsatz,
    RotationParams,
    case1_homothety,
    case1_metric,
    case2_ansatz,
    case2_generators,
    case2_homothety,
    case2_metric,
    g45_constraint_residuals,
    gj_constraint_residuals,
    reduced_residuals,
    so3_generators,
)
from homothety.geometry import curvature
from homothety.kernel import ZERO, expr, is_zero, sym
from homothety.lie import closure_table, homothety_residual, jacobi
from homothety.oracle import compare_curvature, curvature_points, sample_max_residual
from homothety.published import case1_reference
from homothety.report import zero_check
from homothety.suite import (
    CASE2_FIXTURES,
    FIXTURES,
    NUMERIC_TRIPLES,
    derivative_oracle_check,
    load_fixture,
)

SEED = 42
PHI0 = sym("phi_0")
R = expr("r")


@dataclass
class Outcome:
    number: int
    title: str
    failures: list[str] = field(default_factory=list)
    details: list[str] = field(default_factory=list)

    def require(self, ok: bool, what: str) -> None:
        if not ok:
            self.failures.append(what)

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        info = "; ".join(self.failures if self.failures else self.details)
        return f"{verdict} criterion {self.number}: {self.title}" + (f" ({info})" if info else "")


def _symbolic(e) -> bool:
    return is_zero(e).tier == "symbolic"


def _all_symbolic(exprs) -> bool:
    return all(_symbolic(e) for e in exprs)


def _upper(matrix):
    return [matrix[a][b] for a in range(4) for b in range(a, 4)]


# -- criteria -----------------------------------------------------------------

def criterion_1() -> Outcome:
    out = Outcome(1, "static-radius homothety vector solves the homothety equation")
    H = case1_homothety(expr("t"), PHI0, RotationParams.symbolic())
    res = homothety_residual(H, case1_metric(expr("t/r")), PHI0)
    comps = _upper(res.residual)
    out.require(len(comps) == 10, "expected 10 independent components")
    if _all_symbolic(comps):
        out.details.append("all 10 components symbolically zero")
    else:
        worst = sample_max_residual(comps, None, 100, SEED).max_abs
        out.require(worst <= 1e-9, f"numeric fallback max {worst:.3e} > 1e-9")
        out.details.append(f"numeric fallback max {worst:.3e}")
    return out


def criterion_2() -> Outcome:
    out = Outcome(2, "static-radius curvature matches the published component list")
    b = curvature(case1_metric(expr("t/r")))
    engine = {("ricci", a, c): b.ricci[a][c] for a in range(4) for c in range(4)}
    engine.update({("stress", a, c): b.stress_energy[a][c] for a in range(4) for c in range(4)})
    engine[("ricci_scalar",)] = b.ricci_scalar
    engine[("stress_trace",)] = b.stress_trace
    refs = case1_reference()
    refs[("ricci", 3, 3)] = refs[("ricci", 2, 2)] * expr("sin(theta)^2")
    tiers = []
    for key, ref in sorted(refs.items()):
        chk = zero_check("-".join(map(str, key)), engine[key] - ref, None, SEED, 100, 1e-9)
        out.require(chk.passed, f"{key} differs (max {chk.max_residual})")
        tiers.append(chk.status)
    out.details.append(f"{len(refs)} components, tiers: {', '.join(sorted(set(tiers)))}")
    return out


def criterion_3() -> Outcome:
    out = Outcome(3, "separable-branch homothety vector solves the homothety equation")
    p = Case2Params()
    res = homothety_residual(case2_homothety(p, PHI0, RotationParams.symbolic()), case2_metric(p),
                             PHI0, p.domain())
    out.require(_all_symbolic(_upper(res.residual)), "symbolic residual not literally zero")
    for triple in NUMERIC_TRIPLES:
        q = Case2Params(*triple)
        r = homothety_residual(case2_homothety(q, PHI0, RotationParams.symbolic()), case2_metric(q), PHI0)
        worst = sample_max_residual(_upper(r.residual), q.domain(), 100, SEED).max_abs
        out.require(worst <= 1e-9, f"{triple}: max {worst:.3e}")
        out.details.append(f"{triple} max {worst:.1e}")
    return out


def criterion_4() -> Outcome:
    out = Outcome(4, "constraint systems vanish; the literal g_j residual does not")
    c1 = MetricAnsatz(expr("t/r"), ZERO, expr("2*ln(r)"))
    out.require(_all_symbolic(g45_constraint_residuals(c1, PHI0 * expr("t"), PHI0 * R, PHI0)),
                "static-radius g4/g5 residuals")
    out.require(_all_symbolic(reduced_residuals(c1.nu, c1.lam, expr("t"), R)),
                "static-radius reduced residuals")
    p = Case2Params()
    c2 = case2_ansatz(p)
    out.require(_all_symbolic(g45_constraint_residuals(c2, -PHI0 * p.alpha, PHI0 * R, PHI0)),
                "separable g4/g5 residuals")
    out.require(_all_symbolic(reduced_residuals(c2.nu, c2.lam, -p.alpha, R)),
                "separable reduced residuals")
    for name, a in (("static-radius", c1), ("separable", c2)):
        out.require(_all_symbolic(gj_constraint_residuals(a, ZERO, corrected=True)),
                    f"{name} corrected g_j residuals")
    literal = gj_constraint_residuals(c1, ZERO, corrected=False)[1]
    verdict = is_zero(literal)
    out.require(not verdict.is_zero, "literal second g_j residual should be nonzero")
    if verdict.witness is not None:
        out.details.append(f"literal residual = {verdict.value:.4g} at "
                           + ", ".join(f"{k}={v:.3g}" for k, v in sorted(verdict.witness.items())))
    return out


def criterion_5() -> Outcome:
    out = Outcome(5, "homothety algebra closes with central scaling and SO(3) constants")
    p = Case2Params()
    gens = case2_generators(p)
    table = closure_table(gens, p.domain(), SEED)
    out.require(table.closes, "algebra does not close")
    if table.closes:
        for i in (1, 2, 3):
            out.require(table.bracket(0, i) == (0, 0, 0, 0), f"[X0, X{i}] != 0")
        consts = table.structure_constants()
        out.require(set(consts.values()) <= {1, -1} and len(consts) == 3,
                    f"unexpected constants {consts}")
        out.require({(i, j) for i, j, _ in consts} == {(1, 2), (1, 3), (2, 3)},
                    "each rotation pair should give one generator")
        out.details.append(table.format().replace("\n", ", "))
    for i in range(4):
        for j in range(i + 1, 4):
            for k in range(j + 1, 4):
                out.require(_all_symbolic(jacobi(gens[i], gens[j], gens[k])), f"Jacobi ({i},{j},{k})")
    return out


def criterion_6() -> Outcome:
    out = Outcome(6, "rotations are Killing vectors of the general family")
    g = MetricAnsatz.symbolic().metric()
    for X in so3_generators():
        res = homothety_residual(X, g, ZERO)
        out.require(res.is_killing and _all_symbolic(_upper(res.residual)), f"{X.name} not Killing")
    return out


def criterion_7() -> Outcome:
    out = Outcome(7, "symbolic results agree with finite differences")
    metrics = {"static-radius": (case1_metric(expr("t/r")), None)}
    p = Case2Params()
    metrics["separable"] = (case2_metric(p), p.domain())
    for triple in NUMERIC_TRIPLES:
        q = Case2Params(*triple)
        metrics[f"separable{triple}"] = (case2_metric(q), q.domain())
    worst_all = 0.0
    for name, (g, dom) in metrics.items():
        b = curvature(g)
        worst = 0.0
        for pt in curvature_points(g, dom, 20, SEED):
            dev = compare_curvature(b, pt)
            worst = max(worst, dev["christoffel"], dev["ricci"], dev["ricci_scalar"])
        out.require(worst <= 1e-4, f"{name}: curvature rel {worst:.3e} > 1e-4")
        worst_all = max(worst_all, worst)
    chk = derivative_oracle_check(SEED, 1000)
    out.require(chk.passed, f"derivatives rel {chk.max_residual:.3e} > 1e-6")
    out.details.append(f"curvature max rel {worst_all:.2e}; derivatives max rel {chk.max_residual:.2e}")
    return out


def criterion_8() -> Outcome:
    out = Outcome(8, "trace identity holds for every fixture metric")
    for name in FIXTURES:
        b = curvature(load_fixture(name).metric)
        out.require(_symbolic(b.trace_identity()), f"{name}: kT + R not symbolically zero")
    out.details.append(f"{len(FIXTURES)} fixtures")
    return out


def _suite(tmp: Path, label: str, seed: int) -> tuple[int, Path]:
    target = tmp / label
    code = cli_main(["paper-suite", "--out", str(target), "--seed", str(seed)])
    return code, target / "report.json"


def criterion_9(tmp: Path) -> Outcome:
    out = Outcome(9, "published separable-branch list compared at 20 points per fixture")
    code, path = _suite(tmp, "compare", SEED)
    rows = json.loads(path.read_text())["case2_comparison"]
    labels = ("R_00", "R_01", "R_11", "R_22", "R_33", "R", "kT_00", "kT_01", "kT_11", "kT_22",
              "kT_33", "kT")
    for fx in CASE2_FIXTURES:
        mine = {r["component"]: r for r in rows if r["fixture"] == fx}
        out.require(set(mine) == set(labels), f"{fx}: missing components")
        for r in mine.values():
            out.require(r["points"] == 20, f"{fx} {r['component']}: {r['points']} points")
            out.require(math.isfinite(r["max_abs_deviation"]), f"{fx} {r['component']}: no deviation")
    out.require(code == 0, "hard-gated suite checks failed")
    agree = sum(r["agrees"] for r in rows)
    out.details.append(f"{len(rows)} rows reported, {agree} agree within 1e-6 (not gated)")
    return out


def criterion_10(tmp: Path) -> Outcome:
    out = Outcome(10, "paper-suite output is byte-identical for a fixed seed")
    start = time.perf_counter()
    _, first = _suite(tmp, "run1", SEED)
    elapsed = time.perf_counter() - start
    _, second = _suite(tmp, "run2", SEED)
    out.require(first.read_bytes() == second.read_bytes(), "report.json differs between runs")
    out.require(elapsed < 60, f"suite took {elapsed:.1f}s")
    out.details.append(f"one run takes {elapsed:.1f}s")
    return out


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}
NEEDS_TMP = {9, 10}


def evaluate(number: int, tmp: Path) -> Outcome:
    fn = CRITERIA[number]
    # the suite runs print their own summaries; keep only the criterion line
    with contextlib.redirect_stdout(io.StringIO()):
        return fn(tmp) if number in NEEDS_TMP else fn()


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_acceptance_criterion(number, tmp_path, capsys):
    with capsys.disabled():
        outcome = evaluate(number, tmp_path)
        print(f"\n{outcome.line()}")
    assert outcome.ok, outcome.line()


if __name__ == "__main__":
    import tempfile

    failed = 0
    with tempfile.TemporaryDirectory() as d:
        for n in sorted(CRITERIA):
            outcome = evaluate(n, Path(d))
            print(outcome.line())
            failed += not outcome.ok
    sys.exit(1 if failed else 0)
