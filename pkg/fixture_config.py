"""
Custom fixtures from a JSON document.

    {
      "name": "my_map",
      "domain": {"lower": 0, "upper": 1},
      "codomain_dim": 1,
      "cone": "Rplus",
      "branches": [
        {"when": "x <= y", "value": "interval(-1, y)"},
        {"when": "y < x",  "value": "interval(-x, y)"}
      ]
    }

Conditions are comparisons of affine expressions in x and y joined with &, |
and ~, each comparison in parentheses (Eq(a, b) and Ne(a, b) test equality,
"True" is a catch-all).
Values are one of interval(lo, hi), open_interval(lo, hi, lo_open, hi_open),
point(e1, ..., ed), quarter_disc(r) and disc(cx, cy, r), with arguments that
are arbitrary expressions in x and y.
"""
import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List

import sympy
from sympy.logic.boolalg import BooleanAtom
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from domains import DomainGrid
from fixtures import Branch, PiecewiseRule, SetValuedFixture, eq, le, lt
from value_sets import Ball, Interval, Sampling, point, quarter_disc

logger = logging.getLogger(__name__)

X, Y = sympy.symbols("x y", real=True)

VALUE_CONSTRUCTORS = ("interval", "open_interval", "point", "quarter_disc", "disc")


class FixtureConfigError(ValueError):
    """Malformed fixture document or expression."""


def _local_names() -> Dict[str, Any]:
    names: Dict[str, Any] = {"x": X, "y": Y, "Eq": sympy.Eq, "Ne": sympy.Ne}
    names.update({name: sympy.Function(name) for name in VALUE_CONSTRUCTORS})
    return names


def parse_expression(text: str) -> sympy.Basic:
    try:
        return parse_expr(str(text), local_dict=_local_names(), transformations=standard_transformations)
    except (SyntaxError, TypeError, ValueError, sympy.SympifyError) as exc:
        raise FixtureConfigError(f"cannot parse '{text}': {exc}") from exc


def _numeric(expr: sympy.Basic, text: str) -> Callable[[float, float], float]:
    extra = expr.free_symbols - {X, Y}
    if extra:
        raise FixtureConfigError(f"'{text}' uses unknown names {sorted(str(s) for s in extra)}")
    return sympy.lambdify((X, Y), expr, modules="math")


def _affine(expr: sympy.Basic, text: str) -> None:
    try:
        degree = sympy.Poly(expr, X, Y).total_degree()
    except sympy.PolynomialError:
        degree = None
    if degree is None or degree > 1:
        raise FixtureConfigError(f"branch condition '{text}' compares expressions that are not affine")


_COMPARE = {
    sympy.LessThan: lambda a, b: le(a, b),
    sympy.StrictLessThan: lambda a, b: lt(a, b),
    sympy.GreaterThan: lambda a, b: le(b, a),
    sympy.StrictGreaterThan: lambda a, b: lt(b, a),
    sympy.Equality: lambda a, b: eq(a, b),
    sympy.Unequality: lambda a, b: not eq(a, b),
}


def compile_condition(text: str) -> Callable[[float, float], bool]:
    """Branch predicate with the tolerant comparisons used by the built-in fixtures."""
    expr = parse_expression(text)
    if isinstance(expr, bool):
        if expr and text.strip() == "True":
            return lambda x, y: True
        raise FixtureConfigError(f"'{text}' collapsed to {expr}; write equality tests as Eq(a, b) or Ne(a, b)")
    return _compile_boolean(expr, text)


def _compile_boolean(expr, text: str) -> Callable[[float, float], bool]:
    if isinstance(expr, BooleanAtom):
        value = bool(expr)
        return lambda x, y: value
    if isinstance(expr, sympy.And):
        parts = [_compile_boolean(a, text) for a in expr.args]
        return lambda x, y: all(p(x, y) for p in parts)
    if isinstance(expr, sympy.Or):
        parts = [_compile_boolean(a, text) for a in expr.args]
        return lambda x, y: any(p(x, y) for p in parts)
    if isinstance(expr, sympy.Not):
        inner = _compile_boolean(expr.args[0], text)
        return lambda x, y: not inner(x, y)
    compare = _COMPARE.get(type(expr))
    if compare is None:
        raise FixtureConfigError(f"'{text}' is not a comparison: {expr}")
    _affine(expr.lhs - expr.rhs, text)
    lhs, rhs = _numeric(expr.lhs, text), _numeric(expr.rhs, text)
    return lambda x, y: compare(lhs(x, y), rhs(x, y))


def compile_value(text: str, codomain_dim: int) -> Callable[[float, float], Any]:
    expr = parse_expression(text)
    name = getattr(expr.func, "__name__", "")
    if name not in VALUE_CONSTRUCTORS:
        raise FixtureConfigError(f"value '{text}' must be one of {', '.join(VALUE_CONSTRUCTORS)}")
    args = [_numeric(a, text) for a in expr.args]

    def ev(x, y) -> List[float]:
        return [float(f(x, y)) for f in args]

    if name == "interval":
        _arity(name, args, 2, text)
        _dimension(name, 1, codomain_dim, text)
        return lambda x, y: Interval(*ev(x, y))
    if name == "open_interval":
        _arity(name, args, 4, text)
        _dimension(name, 1, codomain_dim, text)

        def _open(x, y):
            lo, hi, lo_open, hi_open = ev(x, y)
            return Interval(lo, hi, bool(lo_open), bool(hi_open))

        return _open
    if name == "point":
        _arity(name, args, codomain_dim, text)
        return lambda x, y: point(*ev(x, y))
    _dimension(name, 2, codomain_dim, text)
    if name == "quarter_disc":
        _arity(name, args, 1, text)
        return lambda x, y: quarter_disc(ev(x, y)[0])
    _arity(name, args, 3, text)

    def _disc(x, y):
        cx, cy, r = ev(x, y)
        return Ball((cx, cy), r)

    return _disc


def _arity(name: str, args: list, expected: int, text: str) -> None:
    if len(args) != expected:
        raise FixtureConfigError(f"{name} takes {expected} arguments in '{text}', got {len(args)}")


def _dimension(name: str, dim: int, codomain_dim: int, text: str) -> None:
    if dim != codomain_dim:
        raise FixtureConfigError(f"{name} in '{text}' gives values in R^{dim}, the fixture declares R^{codomain_dim}")


def fixture_from_dict(spec: Dict[str, Any], resolution: int = 50, sampling: Sampling = Sampling()) -> SetValuedFixture:
    try:
        name = str(spec["name"])
        branches = spec["branches"]
        codomain_dim = int(spec.get("codomain_dim", 1))
        domain = spec.get("domain", {})
        lower, upper = float(domain.get("lower", 0.0)), float(domain.get("upper", 1.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise FixtureConfigError(f"fixture document is missing or mistypes a field: {exc}") from exc
    if not branches:
        raise FixtureConfigError(f"fixture '{name}' has no branches")
    rule_branches = []
    for i, b in enumerate(branches):
        if "when" not in b or "value" not in b:
            raise FixtureConfigError(f"branch {i} of '{name}' needs 'when' and 'value'")
        rule_branches.append(Branch(str(b.get("label", b["when"])), compile_condition(b["when"]),
                                    compile_value(b["value"], codomain_dim)))
    try:
        grid = DomainGrid.interval(lower, upper, int(domain.get("resolution", resolution)))
    except ValueError as exc:
        raise FixtureConfigError(f"bad domain for '{name}': {exc}") from exc
    cone = spec.get("cone", "Rplus" if codomain_dim == 1 else "R2plus")
    fx = SetValuedFixture(
        name, grid, codomain_dim, PiecewiseRule(rule_branches),
        single_valued=bool(spec.get("single_valued", False)),
        sampling=sampling,
        description=str(spec.get("description", "")),
        unary=bool(spec.get("unary", False)),
        default_cone=json.dumps(cone) if isinstance(cone, dict) else str(cone),
    )
    logger.info("loaded fixture %s with %d branches", name, len(rule_branches))
    return fx


def load_fixture_file(path: str, resolution: int = 50, sampling: Sampling = Sampling()) -> SetValuedFixture:
    try:
        spec = json.loads(Path(path).read_text())
    except OSError as exc:
        raise FixtureConfigError(f"cannot read fixture file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FixtureConfigError(f"fixture file {path} is not valid JSON: {exc}") from exc
    if not isinstance(spec, dict):
        raise FixtureConfigError(f"fixture file {path} must hold a JSON object")
    return fixture_from_dict(spec, resolution, sampling)

