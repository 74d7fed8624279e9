"""Numeric evaluation of equation-rooted interdependencies.

Only formulas of the shape ``eq(target-variable, arithmetic-expression)``
are evaluable; anything else is skipped with a notice. Evaluation never runs
against findings: an operator's formulas are gated on the availability check
and the operator-scoped unit check first.

Arithmetic is 64-bit binary floating point. Division by zero is an error
rather than infinity (a zero flow rate is a modeling error worth surfacing),
and no result may be NaN or infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    Application,
    Constant,
    OmExpression,
    ProcessModel,
    Variable,
    collect_variables,
    expression_symbols,
    expression_text,
)
from .verification import (
    MISMATCH,
    AvailabilityFinding,
    UnitFinding,
    check_data_availability,
    check_units,
    filter_context_data,
)

EQ = ("relation1", "eq")
_ARITHMETIC = {
    ("arith1", "plus"),
    ("arith1", "times"),
    ("arith1", "minus"),
    ("arith1", "divide"),
    ("arith1", "power"),
}


class EvaluationError(ValueError):
    """Raised when a formula cannot be evaluated; carries the formula root."""

    def __init__(self, message: str, formula: str | None = None):
        self.formula = formula
        super().__init__(message)


class AmbiguousBindingError(EvaluationError):
    pass


class MissingValueError(EvaluationError):
    pass


class NonEvaluableError(EvaluationError):
    pass


@dataclass(frozen=True)
class BindingEntry:
    value: float
    unit: str | None
    data_element: str


BindingEnvironment = dict[str, BindingEntry]


@dataclass(frozen=True)
class EvaluationResult:
    target: str
    value: float
    unit: str | None
    formula: str | None
    inputs: tuple[tuple[str, BindingEntry], ...]


@dataclass(frozen=True)
class Refusal:
    formula: str
    availability: tuple[AvailabilityFinding, ...]
    unit_mismatches: tuple[UnitFinding, ...]


@dataclass
class OperatorEvaluation:
    operator: str
    results: list[EvaluationResult]
    refusals: list[Refusal]
    notices: list[str]
    errors: list[tuple[str, str]]

    @property
    def ok(self) -> bool:
        return not self.refusals and not self.errors


def _eq_parts(formula: OmExpression) -> tuple[Variable, OmExpression] | None:
    """(target variable, right-hand side) for an evaluable equation root."""
    if (
        isinstance(formula, Application)
        and (formula.symbol.cd, formula.symbol.name) == EQ
        and len(formula.arguments) == 2
        and isinstance(formula.arguments[0], Variable)
    ):
        return formula.arguments[0], formula.arguments[1]
    return None


def _numeric_literal(lexical: str) -> float | None:
    try:
        return float(lexical)
    except ValueError:
        return None


def build_environment(
    model: ProcessModel,
    operator: str,
    formula: OmExpression,
) -> BindingEnvironment:
    """Load the unique in-context value for every non-target variable.

    Errors on an ambiguous binding (two in-context data elements for one
    variable), a bound element without a stored value, or a value that is
    not numeric.
    """
    parts = _eq_parts(formula)
    needed = sorted(collect_variables(parts[1]) if parts else collect_variables(formula))
    root = formula.iri if isinstance(formula, Application) else None
    context = filter_context_data(model, operator)
    env: BindingEnvironment = {}
    for variable in needed:
        candidates = [de for de in model.bound_data_elements(variable) if de in context]
        if not candidates:
            raise EvaluationError(f"no in-context data element for {variable}", root)
        if len(candidates) > 1:
            raise AmbiguousBindingError(
                f"ambiguous binding for {variable}: " + ", ".join(candidates), root
            )
        data_element = candidates[0]
        view = model.data_element(data_element)
        literal = view.value if view else None
        if literal is None and view:
            for td in view.type_descriptions:
                desc = model.type_descriptions.get(td)
                if desc and desc.value is not None:
                    literal = desc.value
                    break
        if literal is None:
            raise MissingValueError(f"data element {data_element} carries no value", root)
        value = _numeric_literal(literal.lexical)
        if value is None:
            raise EvaluationError(
                f"data element {data_element} carries a non-numeric value "
                f"{literal.lexical!r}",
                root,
            )
        unit = None
        if view:
            for td in view.type_descriptions:
                desc = model.type_descriptions.get(td)
                if desc and desc.direct_units:
                    unit = desc.direct_units[0]
                    break
        env[variable] = BindingEntry(value, unit, data_element)
    return env


def _apply(symbol: tuple[str, str], values: list[float], formula: str | None) -> float:
    cd_name = f"{symbol[0]}/{symbol[1]}"
    if symbol == ("arith1", "plus"):
        # n-ary; the empty sum is 0
        return math.fsum(values)
    if symbol == ("arith1", "times"):
        # n-ary; the empty product is 1
        out = 1.0
        for v in values:
            out *= v
        return out
    if symbol == ("arith1", "minus"):
        if len(values) != 2:
            raise EvaluationError(f"{cd_name} needs exactly two arguments", formula)
        return values[0] - values[1]
    if symbol == ("arith1", "divide"):
        if len(values) != 2:
            raise EvaluationError(f"{cd_name} needs exactly two arguments", formula)
        if values[1] == 0.0:
            raise EvaluationError("division by zero", formula)
        return values[0] / values[1]
    if symbol == ("arith1", "power"):
        if len(values) != 2:
            raise EvaluationError(f"{cd_name} needs exactly two arguments", formula)
        try:
            result = values[0] ** values[1]
        except (OverflowError, ZeroDivisionError) as exc:
            raise EvaluationError(f"power failed: {exc}", formula) from exc
        if isinstance(result, complex):
            raise EvaluationError("power of negative base with fractional exponent", formula)
        return result
    raise NonEvaluableError(f"unknown operator symbol {cd_name}", formula)


def _eval(node: OmExpression, env: BindingEnvironment, used: set[str], formula: str | None) -> float:
    if isinstance(node, Constant):
        return node.value
    if isinstance(node, Variable):
        entry = env.get(node.iri)
        if entry is None:
            raise EvaluationError(f"unbound variable {node.iri}", formula)
        used.add(node.iri)
        return entry.value
    values = [_eval(argument, env, used, formula) for argument in node.arguments]
    return _apply((node.symbol.cd, node.symbol.name), values, formula)


def evaluate(formula: OmExpression, env: BindingEnvironment) -> EvaluationResult:
    """Evaluate an equation with a bare variable on the left-hand side.

    The result carries the target variable's declared expected unit; units
    are never converted or invented here.
    """
    root = formula.iri if isinstance(formula, Application) else None
    parts = _eq_parts(formula)
    if parts is None:
        raise NonEvaluableError(
            "formula is not an equation with a bare target variable "
            f"({expression_text(formula)})",
            root,
        )
    target, rhs = parts
    used: set[str] = set()
    value = _eval(rhs, env, used, root)
    if not math.isfinite(value):
        raise EvaluationError("result is not finite", root)
    inputs = tuple((v, env[v]) for v in sorted(used))
    return EvaluationResult(target.iri, value, target.expected_unit, root, inputs)


def evaluate_operator(model: ProcessModel, operator: str) -> OperatorEvaluation:
    """Run all of an operator's evaluable interdependencies.

    Refuses any formula for which the availability check or the
    operator-scoped unit check reports findings; never returns a numeric
    result alongside findings for the same formula. Non-equation or
    unknown-symbol formulas are skipped with a notice.
    """
    view = model.operator(operator)
    out = OperatorEvaluation(operator, [], [], [], [])
    if not view.interdependencies:
        return out

    availability = check_data_availability(model, operator)
    mismatches = [f for f in check_units(model, scope=operator) if f.kind == MISMATCH]

    for dep in sorted(view.interdependencies, key=lambda d: d.root):
        expr = dep.expression
        parts = _eq_parts(expr)
        if parts is None:
            out.notices.append(
                f"{dep.root}: not an equation with a bare target variable; skipped"
            )
            continue
        symbols = {(s.cd, s.name) for s in expression_symbols(parts[1])}
        if not symbols <= _ARITHMETIC:
            unknown = sorted("/".join(s) for s in symbols - _ARITHMETIC)
            out.notices.append(
                f"{dep.root}: non-evaluable operator symbol(s) {', '.join(unknown)}; skipped"
            )
            continue
        variables = collect_variables(expr)
        blocking_avail = tuple(
            f for f in availability.findings if f.formula == dep.root
        )
        blocking_units = tuple(f for f in mismatches if f.variable in variables)
        if blocking_avail or blocking_units:
            out.refusals.append(Refusal(dep.root, blocking_avail, blocking_units))
            continue
        try:
            env = build_environment(model, operator, expr)
            out.results.append(evaluate(expr, env))
        except EvaluationError as exc:
            out.errors.append((dep.root, str(exc)))
    return out
