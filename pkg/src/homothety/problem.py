"""Problem files: JSON descriptions of a metric, vector fields and parameters.

Example::

    {
      "chart": ["t", "r", "theta", "phi"],
      "parameters": {"phi_0": null, "alpha_1": 1},
      "metric": {"nu": "t/r", "lambda": "0", "x": "2*ln(r)"},
      "fields": {"H": ["phi_0*t", "phi_0*r", "0", "0"]},
      "phi0": "phi_0",
      "domain": {"intervals": {"t": [0.5, 2]}, "positive": ["t"]},
      "bindings": {"h": "t"}
    }

``metric`` is either the diagonal ``{nu, lambda, x}`` shorthand for
``e^nu dt^2 - e^lambda dr^2 - e^x dOmega^2`` or ``{"components": {...}}``
keyed by index pairs such as ``"00"``, ``"01"`` (missing entries are 0), or a
4x4 array of strings.  Every symbol that is not a chart coordinate or a
declared function must be listed under ``parameters``; numeric parameter
values are substituted on load, ``null`` keeps the parameter symbolic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .g3 import MetricAnsatz
from .geometry import SPHERICAL, Chart, Metric, MetricError
from .kernel import Expr, ParseError, SampleDomain, parse, simplify, substitute
from .lie import VectorField


class ProblemError(ValueError):
    """Invalid problem file; the message carries a line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str = "") -> None:
        where = f"{source}:" if source else ""
        if line is not None:
            where += f"{line}:{column}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass
class Problem:
    chart: Chart
    parameters: dict[str, Expr | None]
    metric: Metric | None
    shorthand: dict[str, Expr] | None
    fields: dict[str, VectorField]
    phi0: Expr | None
    domain: SampleDomain
    bindings: dict[str, Expr]
    functions: dict[str, tuple[str, ...]] = field(default_factory=dict)
    source: str = ""

    def field_named(self, name: str) -> VectorField:
        try:
            return self.fields[name]
        except KeyError:
            known = ", ".join(sorted(self.fields)) or "none"
            raise ProblemError(f"unknown field {name!r} (known: {known})", source=self.source) from None

    def binding(self, name: str) -> Expr:
        if name not in self.bindings:
            raise ProblemError(f"missing binding {name!r}", source=self.source)
        return self.bindings[name]

    def parameter(self, name: str) -> Expr:
        if name not in self.parameters:
            raise ProblemError(f"missing parameter {name!r}", source=self.source)
        v = self.parameters[name]
        return v if v is not None else parse(name)


class _Loader:
    def __init__(self, text: str, source: str) -> None:
        self.text = text
        self.source = source

    def locate(self, needle: Any, offset: int = 0) -> tuple[int | None, int | None]:
        """Line and column of the first occurrence of a JSON string value."""
        if not isinstance(needle, str):
            return None, None
        pos = self.text.find(json.dumps(needle))
        if pos < 0:
            return None, None
        pos += 1 + offset
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def fail(self, message: str, near: Any = None, offset: int = 0) -> ProblemError:
        line, col = self.locate(near, offset)
        return ProblemError(message, line, col, self.source)

    def expression(self, value: Any, where: str, functions, allowed: set[str]) -> Expr:
        if isinstance(value, bool) or not isinstance(value, (str, int, float)):
            raise self.fail(f"{where}: expected an expression string", value)
        text = value if isinstance(value, str) else _number_text(value)
        try:
            e = parse(text, functions)
        except ParseError as exc:
            raise self.fail(f"{where}: {exc.message}", value, exc.offset) from None
        unknown = sorted({s.name for s in e.free_symbols} - allowed)
        if unknown:
            raise self.fail(f"{where}: undeclared symbol(s) {', '.join(unknown)}", value)
        return e


def _number_text(v: int | float) -> str:
    return str(Fraction(str(v)))


def load_problem(path: str | Path) -> Problem:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemError(f"cannot read file: {exc.strerror}", source=str(path)) from None
    return loads_problem(text, str(path))


def loads_problem(text: str, source: str = "<string>") -> Problem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(exc.msg, exc.lineno, exc.colno, source) from None
    ld = _Loader(text, source)
    if not isinstance(data, dict):
        raise ProblemError("top level must be an object", 1, 1, source)
    known_keys = {"chart", "functions", "parameters", "metric", "fields", "phi0", "domain",
                  "bindings", "description"}
    extra = sorted(set(data) - known_keys)
    if extra:
        raise ld.fail(f"unknown key {extra[0]!r}", extra[0])

    coords = data.get("chart", ["t", "r", "theta", "phi"])
    try:
        chart = Chart(tuple(coords))
    except (TypeError, ValueError) as exc:
        raise ld.fail(f"chart: {exc}", "chart") from None

    functions: dict[str, tuple[str, ...]] = {}
    for name, deps in (data.get("functions") or {}).items():
        if not isinstance(deps, list) or any(d not in chart.coords for d in deps):
            raise ld.fail(f"functions.{name}: dependencies must be chart coordinates", name)
        functions[name] = tuple(deps)

    raw_params = data.get("parameters") or {}
    if not isinstance(raw_params, dict):
        raise ld.fail("parameters must be an object", "parameters")
    allowed = set(chart.coords) | set(functions) | set(raw_params)
    params: dict[str, Expr | None] = {}
    for name, v in raw_params.items():
        params[name] = None if v is None else simplify(
            ld.expression(v, f"parameters.{name}", functions, set()))
    numeric = {k: v for k, v in params.items() if v is not None}

    def ex(value: Any, where: str) -> Expr:
        e = ld.expression(value, where, functions, allowed)
        return simplify(substitute(e, numeric)) if numeric else simplify(e)

    shorthand = None
    metric = None
    m = data.get("metric")
    if m is not None:
        try:
            if isinstance(m, dict) and "components" not in m:
                missing = [k for k in ("nu", "lambda", "x") if k not in m]
                if missing:
                    raise ld.fail(f"metric shorthand needs nu, lambda and x (missing {missing[0]})", "metric")
                if chart != SPHERICAL:
                    raise ld.fail("metric shorthand needs the chart [t, r, theta, phi]", "metric")
                shorthand = {k: ex(m[k], f"metric.{k}") for k in ("nu", "lambda", "x")}
                try:
                    metric = MetricAnsatz(shorthand["nu"], shorthand["lambda"], shorthand["x"]).metric()
                except ValueError as exc:
                    raise ld.fail(f"metric: {exc}", "metric") from None
            else:
                metric = Metric(_components(m, ex, ld), chart)
        except MetricError as exc:
            raise ld.fail(f"metric: {exc}", "metric") from None

    fields = {}
    for name, comps in (data.get("fields") or {}).items():
        if not isinstance(comps, list) or len(comps) != 4:
            raise ld.fail(f"fields.{name}: expected 4 component strings", name)
        fields[name] = VectorField(tuple(ex(c, f"fields.{name}[{i}]") for i, c in enumerate(comps)),
                                   chart, name)

    phi0 = data.get("phi0")
    phi0 = None if phi0 is None else ex(phi0, "phi0")

    dom = data.get("domain") or {}
    try:
        intervals = {k: (float(v[0]), float(v[1])) for k, v in (dom.get("intervals") or {}).items()}
        positive = [ex(p, "domain.positive") for p in dom.get("positive", [])]
        domain = SampleDomain().with_overrides(intervals, positive)
    except (TypeError, ValueError, IndexError) as exc:
        raise ld.fail(f"domain: {exc}", "domain") from None

    bindings = {k: ex(v, f"bindings.{k}") for k, v in (data.get("bindings") or {}).items()}
    return Problem(chart, params, metric, shorthand, fields, phi0, domain, bindings, functions, source)


def _components(m: Any, ex, ld: _Loader):
    rows = [["0"] * 4 for _ in range(4)]
    if isinstance(m, dict):
        for key, v in m["components"].items():
            if len(key) != 2 or not key.isdigit() or not all(c in "0123" for c in key):
                raise ld.fail(f"metric.components: bad index {key!r}", key)
            a, b = int(key[0]), int(key[1])
            rows[a][b] = rows[b][a] = v
    elif isinstance(m, list) and len(m) == 4 and all(isinstance(r, list) and len(r) == 4 for r in m):
        rows = m
    else:
        raise ld.fail("metric must be the {nu, lambda, x} shorthand, components, or a 4x4 array", "metric")
    return [[ex(rows[a][b], f"metric[{a}][{b}]") for b in range(4)] for a in range(4)]
