"""The three consistency checks over a loaded process model.

* context filtering: which data elements a process operator may legally
  draw on (its output states' data, its input states' data, its assigned
  technical resources' data, and its own);
* unit check: every variable declaring an expected unit must only bind data
  elements whose type descriptions are classified under that unit;
* data availability: every variable of an operator's interdependency
  formulas must have at least one in-context data element, provided the
  operator's outputs are wired to a result variable at all.

All checks are pure functions of the immutable model and return sorted
results, so repeated runs over the same graph are byte-for-byte identical.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    Interdependency,
    OmExpression,
    ProcessModel,
    collect_variables,
)

MISMATCH = "mismatch"
UNIT_UNKNOWN = "unit-unknown"
MISSING_EXPECTATION = "missing-expectation"


@dataclass(frozen=True)
class ProcessContext:
    """Data elements reachable from one operator via the four context branches."""

    operator: str
    data_elements: frozenset[str]

    def __contains__(self, data_element: str) -> bool:
        return data_element in self.data_elements


@dataclass(frozen=True)
class VariableBinding:
    variable: str
    data_element: str
    in_context: bool


@dataclass(frozen=True)
class UnitFinding:
    kind: str
    variable: str
    expected_unit: str | None
    actual_unit: str | None
    actual_type: str | None
    data_element: str | None


@dataclass(frozen=True)
class AvailabilityFinding:
    process: str
    missing_variable: str
    formula: str


@dataclass(frozen=True)
class StructuralFinding:
    """A failed precondition of the availability workflow, by step number."""

    process: str
    step: int
    code: str
    detail: str


@dataclass
class AvailabilityResult:
    findings: list[AvailabilityFinding]
    structural: list[StructuralFinding]


def filter_context_data(model: ProcessModel, operator: str) -> ProcessContext:
    """Collect the operator's context-relevant data elements.

    Membership comes from exactly four branches: data elements of each
    output state, of each input state, of each assigned technical resource,
    and of the operator itself. No other path admits membership.
    """
    view = model.operator(operator)
    members: set[str] = set()
    for state in view.outputs:
        members.update(model.state_data_elements(state))
    for state in view.inputs:
        members.update(model.state_data_elements(state))
    for resource in view.resources:
        members.update(model.resource_data_elements(resource))
    members.update(view.data_elements)
    return ProcessContext(operator, frozenset(members))


def resolve_bindings(
    model: ProcessModel,
    operator: str,
    formula: OmExpression,
    filtered: bool,
) -> list[VariableBinding]:
    """One row per (formula variable, bound data element) pair.

    With ``filtered=True`` only rows whose data element lies in the
    operator's context are returned; the ``in_context`` flag is populated
    either way. Rows are sorted by variable IRI, then data element IRI.
    """
    context = filter_context_data(model, operator)
    rows: list[VariableBinding] = []
    for variable in sorted(collect_variables(formula)):
        for data_element in model.bound_data_elements(variable):
            in_context = data_element in context
            if filtered and not in_context:
                continue
            rows.append(VariableBinding(variable, data_element, in_context))
    return rows


def _pair_finding(
    model: ProcessModel,
    variable: str,
    expected: tuple[str, ...],
    data_element: str,
) -> UnitFinding | None:
    """The single unit-check outcome for one (variable, data element) pair."""
    de_view = model.data_element(data_element)
    tds = de_view.type_descriptions if de_view else ()
    unit_classes = model.unit_classes_of(data_element)
    if not unit_classes:
        return UnitFinding(
            UNIT_UNKNOWN,
            variable,
            expected[0] if expected else None,
            None,
            tds[0] if tds else None,
            data_element,
        )
    violated = [u for u in expected if u not in unit_classes]
    if not violated:
        return None
    actual_type = None
    actual_unit = None
    for td in tds:
        desc = model.type_descriptions.get(td)
        if desc and desc.direct_units:
            actual_type = td
            actual_unit = desc.direct_units[0]
            break
    if actual_type is None:
        actual_type = tds[0] if tds else None
        actual_unit = min(unit_classes)
    return UnitFinding(MISMATCH, variable, violated[0], actual_unit, actual_type, data_element)


def check_units(
    model: ProcessModel,
    scope: str | None = None,
    strict: bool = False,
) -> list[UnitFinding]:
    """Expected-unit verification.

    Each (variable with a declared expected unit, bound data element) pair
    produces exactly one of: nothing, a mismatch finding, or a unit-unknown
    finding when the type description carries no unit classification at all.
    Variables without an expectation are skipped unless ``strict`` is set,
    in which case they are reported as missing the declaration.

    With ``scope`` set to an operator IRI, pairs are restricted to the
    variables of that operator's interdependencies and to data elements
    inside its context, which is the gate evaluation relies on.
    """
    if scope is not None:
        view = model.operator(scope)
        variables: set[str] = set()
        for dep in view.interdependencies:
            variables |= collect_variables(dep.expression)
        allowed = filter_context_data(model, scope).data_elements
    else:
        variables = set(model.variables)
        allowed = None

    findings: list[UnitFinding] = []
    for variable in sorted(variables):
        expected = model.expected_units_of(variable)
        if not expected:
            if strict:
                findings.append(
                    UnitFinding(MISSING_EXPECTATION, variable, None, None, None, None)
                )
            continue
        for data_element in model.bound_data_elements(variable):
            if allowed is not None and data_element not in allowed:
                continue
            finding = _pair_finding(model, variable, expected, data_element)
            if finding is not None:
                findings.append(finding)
    return findings


def _relevant_interdependencies(view) -> list[Interdependency]:
    return sorted(view.interdependencies, key=lambda dep: dep.root)


def check_data_availability(model: ProcessModel, operator: str) -> AvailabilityResult:
    """Input-data completeness for an operator's interdependencies.

    Workflow: (1) take the operator and its output states; (2) those states
    must carry data elements; (3) some output data element must be bound to
    a variable of one of the operator's interdependencies; (4) every
    variable anywhere in each formula tree must have at least one bound data
    element inside the operator's context. Steps 2 and 3 failing produce
    structural findings (distinct codes) instead of availability findings;
    an operator with no interdependencies has nothing to verify.
    """
    view = model.operator(operator)
    result = AvailabilityResult([], [])
    if not view.interdependencies:
        return result

    output_data: set[str] = set()
    for state in view.outputs:
        output_data.update(model.state_data_elements(state))
    if not output_data:
        result.structural.append(
            StructuralFinding(
                operator, 2, "no-output-data", "no output state carries a data element"
            )
        )
        return result

    formula_variables: set[str] = set()
    for dep in view.interdependencies:
        formula_variables |= collect_variables(dep.expression)
    result_bound = any(
        variable in formula_variables
        for de in sorted(output_data)
        for variable in (model.data_element(de).bound_variables if model.data_element(de) else ())
    )
    if not result_bound:
        result.structural.append(
            StructuralFinding(
                operator,
                3,
                "output-data-unbound",
                "no output data element is bound to a result variable of an interdependency",
            )
        )
        return result

    context = filter_context_data(model, operator)
    for dep in _relevant_interdependencies(view):
        for variable in sorted(collect_variables(dep.expression)):
            in_context = [
                de for de in model.bound_data_elements(variable) if de in context
            ]
            if not in_context:
                result.findings.append(AvailabilityFinding(operator, variable, dep.root))
            elif len(in_context) > 1:
                result.structural.append(
                    StructuralFinding(
                        operator,
                        4,
                        "ambiguous-binding",
                        f"variable {variable} has several in-context data elements: "
                        + ", ".join(in_context),
                    )
                )
    return result
