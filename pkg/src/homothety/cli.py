"""Command-line entry point.

Exit codes: 0 when every check passes, 1 when any check fails, 2 for
invalid input (unreadable or malformed problem file, unknown names,
missing bindings).
"""

from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

from .g3 import (
    R as R_SYM,
    Case2Params,
    MetricAnsatz,
    case2_ansatz,
    g45_constraint_residuals,
    gj_constraint_residuals,
    reduced_residuals,
)
from .geometry import N, curvature
from .kernel import MINUS_ONE, ZERO, ParseError, add, expr, mul, pretty, sym
from .lie import closure_table, homothety_residual
from .oracle import OracleError, compare_curvature, curvature_points
from .problem import Problem, ProblemError, load_problem
from .report import FAIL, NUMERIC_PASS, SYMBOLIC_PASS, Check, Report, default_seed, zero_check
from .suite import run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
ORACLE_POINTS = 20
ORACLE_TOL = 1e-4


def _emit(report: Report, as_json: bool) -> int:
    sys.stdout.write(report.to_json() if as_json else report.to_text())
    return report.exit_code


def _require_metric(prob: Problem):
    if prob.metric is None:
        raise ProblemError("the file defines no metric", source=prob.source)
    return prob.metric


def cmd_curvature(args) -> int:
    prob = load_problem(args.file)
    g = _require_metric(prob)
    seed = default_seed()
    b = curvature(g)
    report = Report(f"curvature: {args.file}", seed)
    coords = g.chart.coords
    lines: list[str] = []
    rendered: dict[str, str] = {}

    def show(label: str, e) -> None:
        if e != ZERO:
            s = pretty(e)
            rendered[label] = s
            lines.append(f"{label} = {s}")

    for a, i, j in itertools.product(range(N), repeat=3):
        if i <= j:
            show(f"Gamma^{coords[a]}_{coords[i]}{coords[j]}", b.christoffel[a][i][j])
    for name, mat in (("R", b.ricci), ("G", b.einstein), ("kT", b.stress_energy)):
        for i in range(N):
            for j in range(i, N):
                show(f"{name}_{i}{j}", mat[i][j])
    show("R", b.ricci_scalar)
    show("kT", b.stress_trace)
    if b.is_flat:
        lines.append("all curvature components zero")
    report.text.extend(lines)
    report.sections["components"] = rendered
    report.add(zero_check("trace_identity", b.trace_identity(), prob.domain, seed))
    report.add(zero_check("bianchi", list(b.bianchi()), prob.domain, seed))
    if args.oracle:
        try:
            pts = curvature_points(g, prob.domain, ORACLE_POINTS, seed)
        except OracleError as exc:
            report.add(Check("oracle", FAIL, "oracle", note=str(exc)))
        else:
            worst = max(max(compare_curvature(b, q).values()) for q in pts)
            report.add(Check("oracle", NUMERIC_PASS if worst <= ORACLE_TOL else FAIL, "oracle",
                             max_residual=worst))
    return _emit(report, args.json)


def _phi0(prob: Problem, raw: str | None):
    if raw is None:
        return prob.phi0 if prob.phi0 is not None else ZERO
    try:
        return expr(raw)
    except ParseError as exc:
        raise ProblemError(f"--phi0: {exc}") from None


def cmd_check_homothety(args) -> int:
    prob = load_problem(args.file)
    g = _require_metric(prob)
    H = prob.field_named(args.field)
    phi0 = _phi0(prob, args.phi0)
    seed = default_seed()
    res = homothety_residual(H, g, phi0, prob.domain, seed)
    report = Report(f"homothety check: field {args.field} with phi0 = {pretty(phi0)}", seed)
    report.text.append(f"H = {H}")
    for a in range(N):
        for b in range(a, N):
            report.add(zero_check(f"residual_{a}{b}", res.residual[a][b], prob.domain, seed))
    kind = "Killing vector" if res.is_killing else "homothety" if res.is_homothety else "neither"
    report.text.append(f"verdict: {kind}")
    report.sections["verdict"] = kind
    return _emit(report, args.json)


def cmd_closure(args) -> int:
    prob = load_problem(args.file)
    names = [n.strip() for n in args.fields.split(",") if n.strip()]
    if len(names) < 2:
        raise ProblemError("--fields needs at least two names")
    gens = [prob.field_named(n) for n in names]
    seed = default_seed()
    table = closure_table(gens, prob.domain, seed)
    report = Report(f"closure: {', '.join(names)}", seed)
    report.text.extend(table.format().splitlines())
    for (i, j), c in sorted(table.brackets.items()):
        cid = f"bracket.{names[i]}.{names[j]}"
        report.add(Check(cid, SYMBOLIC_PASS if c is not None else FAIL, "symbolic"))
    report.sections["structure_constants"] = {
        f"{names[i]},{names[j]}": None if c is None else [str(x) for x in c]
        for (i, j), c in sorted(table.brackets.items())
    }
    report.text.append("algebra closes" if table.closes else "algebra does not close")
    return _emit(report, args.json)


def _shorthand(prob: Problem) -> MetricAnsatz:
    if prob.shorthand is None:
        raise ProblemError("this case needs the {nu, lambda, x} metric shorthand", source=prob.source)
    s = prob.shorthand
    return MetricAnsatz(s["nu"], s["lambda"], s["x"])


def cmd_constraints(args) -> int:
    prob = load_problem(args.file)
    seed = default_seed()
    corrected = not args.as_printed
    form = "corrected" if corrected else "as-printed"
    report = Report(f"constraints ({args.case}, {form} second g_j residual)", seed)
    report.sections["gj_residual_form"] = form
    dom = prob.domain
    phi0 = prob.phi0 if prob.phi0 is not None else sym("phi_0")

    def gj_checks(ansatz: MetricAnsatz, gfuncs: dict) -> None:
        for name, gj in gfuncs.items():
            for k, e in enumerate(gj_constraint_residuals(ansatz, gj, corrected), start=1):
                report.add(zero_check(f"{name}.{k}", e, dom, seed))

    def g45_checks(ansatz: MetricAnsatz, g4, g5) -> None:
        for k, e in enumerate(g45_constraint_residuals(ansatz, g4, g5, phi0), start=1):
            report.add(zero_check(f"g45.{k}", e, dom, seed))

    def reduced_checks(nu, lam, h, gfun) -> None:
        for k, e in enumerate(reduced_residuals(nu, lam, h, gfun), start=1):
            report.add(zero_check(f"reduced.{k}", e, dom, seed))

    if args.case == "general":
        a = _shorthand(prob)
        named = {k: prob.bindings[k] for k in ("g1", "g2", "g3") if k in prob.bindings}
        gj_checks(a, named or {"gj": prob.binding("gj")})
        g45_checks(a, prob.binding("g4"), prob.binding("g5"))
    elif args.case == "reduced":
        a = _shorthand(prob)
        report.add(zero_check("x_is_2lnr", add(a.x, mul(MINUS_ONE, expr("2*ln(r)"))), dom, seed))
        reduced_checks(a.nu, a.lam, prob.binding("h"), prob.binding("g"))
    elif args.case == "case1":
        a = _shorthand(prob)
        report.add(zero_check("lambda_zero", a.lam, dom, seed))
        h = prob.binding("h")
        reduced_checks(a.nu, a.lam, h, R_SYM)
        g45_checks(a, mul(phi0, h), mul(phi0, R_SYM))
        gj_checks(a, {"gj": ZERO})
    else:
        values = [prob.parameter(k) for k in ("alpha_1", "alpha_2", "m")]
        try:
            p = Case2Params(*values)
        except ValueError as exc:
            raise ProblemError(str(exc), source=prob.source) from None
        a = case2_ansatz(p)
        dom = p.domain(dom)
        h = mul(MINUS_ONE, p.alpha)
        reduced_checks(a.nu, a.lam, h, R_SYM)
        g45_checks(a, mul(phi0, h), mul(phi0, R_SYM))
        gj_checks(a, {"gj": ZERO})
    return _emit(report, args.json)


def cmd_paper_suite(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    report = run_suite(seed)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(report.to_json(), encoding="utf-8")
        if not args.json_only:
            (out / "report.txt").write_text(report.to_text(), encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_INPUT
    failed = [c.check_id for c in report.checks if not c.passed]
    print(f"{len(report.checks) - len(failed)}/{len(report.checks)} checks passed; report in {out}")
    for cid in failed:
        print(f"failed: {cid}")
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="homothety",
                                 description="Curvature, homothety and symmetry-algebra checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curvature", help="curvature chain of the file's metric")
    p.add_argument("file")
    p.add_argument("--oracle", action="store_true", help="cross-check against finite differences")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("check-homothety", help="test L_H g = 2 phi0 g for a named field")
    p.add_argument("file")
    p.add_argument("--field", required=True)
    p.add_argument("--phi0", default=None, help="homothety constant (default: the file's phi0, else 0)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check_homothety)

    p = sub.add_parser("closure", help="bracket table of named fields")
    p.add_argument("file")
    p.add_argument("--fields", required=True, help="comma-separated field names")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("constraints", help="constraint residuals for a solution branch")
    p.add_argument("file")
    p.add_argument("--case", required=True, choices=("general", "reduced", "case1", "case2"))
    p.add_argument("--as-printed", action="store_true",
                   help="use the second g_j residual without its g_j' factor")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_constraints)

    p = sub.add_parser("paper-suite", help="run every built-in check and write reports")
    p.add_argument("--out", default="suite-report")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json-only", action="store_true")
    p.set_defaults(func=cmd_paper_suite)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        # e.g. a malformed HOMOTHETY_SEED
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
