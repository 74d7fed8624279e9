"""Typed views over a normalized process-model graph.

Wraps the raw triples in immutable snapshots of the domain structure:
process operators with their input/output states, assigned technical
resources, owned data elements, and decoded expression trees for the
mathematical interdependencies attached to each operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph, MalformedListError, decode_list
from .terms import Iri, Literal, Term, node_id
from .vocab import (
    AliasTable,
    DINEN61360,
    OM,
    OPENMATH_CD_BASE,
    PARX,
    RDF,
    TypeIndex,
    VDI3682,
    default_aliases,
    is_unit_class,
    normalize,
)

DEFAULT_VALUE_PREDICATE = DINEN61360.term("Value").value

# Operator symbols the evaluator understands; anything else still decodes
# into the tree but marks the expression non-evaluable.
KNOWN_SYMBOLS: frozenset[tuple[str, str]] = frozenset(
    {
        ("relation1", "eq"),
        ("arith1", "plus"),
        ("arith1", "times"),
        ("arith1", "minus"),
        ("arith1", "divide"),
        ("arith1", "power"),
    }
)


class ExpressionError(ValueError):
    """An expression node that cannot be decoded into a tree."""

    def __init__(self, node: Term | str, reason: str):
        self.node = node if isinstance(node, str) else node_id(node)
        self.reason = reason
        super().__init__(f"cannot decode expression at {self.node}: {reason}")


class UnknownProcessError(KeyError):
    def __init__(self, iri: str):
        self.iri = iri
        super().__init__(f"unknown process operator: {iri}")


@dataclass(frozen=True)
class CdSymbol:
    """Content-dictionary symbol, e.g. ``arith1/divide``."""

    cd: str
    name: str
    iri: str

    @classmethod
    def from_iri(cls, iri: str) -> "CdSymbol":
        if iri.startswith(OPENMATH_CD_BASE) and "#" in iri:
            cd, _, name = iri[len(OPENMATH_CD_BASE) :].partition("#")
            return cls(cd, name, iri)
        # tolerate .../cd/arith1/divide style paths
        parts = iri.rstrip("/").rsplit("/", 2)
        if len(parts) == 3 and "cd" in parts[0].split("/"):
            return cls(parts[1], parts[2], iri)
        return cls("", iri.rsplit("#", 1)[-1].rsplit("/", 1)[-1], iri)

    @property
    def known(self) -> bool:
        return (self.cd, self.name) in KNOWN_SYMBOLS

    def __str__(self) -> str:
        return f"{self.cd}/{self.name}" if self.cd else self.name


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Variable:
    iri: str
    expected_unit: str | None = None


@dataclass(frozen=True)
class Application:
    symbol: CdSymbol
    arguments: tuple["OmExpression", ...]
    iri: str | None = None


OmExpression = Application | Variable | Constant


def _literal_value(literal: Literal) -> float:
    try:
        return float(literal.lexical)
    except ValueError:
        raise ExpressionError(f'"{literal.lexical}"', "non-numeric literal") from None


def decode_expression(
    graph: Graph,
    root: Term,
    type_index: TypeIndex | None = None,
    _path: frozenset[Term] = frozenset(),
) -> OmExpression:
    """Decode an OpenMath-RDF node into an expression tree.

    Applications resolve their operator symbol and decode arguments in
    rdf:List order; both list cycles and application self-nesting raise
    :class:`ExpressionError`.
    """
    if isinstance(root, Literal):
        return Constant(_literal_value(root))

    index = type_index if type_index is not None else TypeIndex.from_graph(graph)
    types = index.all_types(root)

    if OM.term("Variable").value in types:
        expected = sorted(
            o.value for o in graph.objects(root, PARX.term("expectsUnit")) if isinstance(o, Iri)
        )
        return Variable(node_id(root), expected[0] if expected else None)

    operators = graph.objects(root, OM.term("operator"))
    arguments = graph.objects(root, OM.term("arguments"))
    if OM.term("Application").value in types or operators or arguments:
        if root in _path:
            raise ExpressionError(root, "expression cycle")
        if not operators:
            raise ExpressionError(root, "application has no operator")
        if len(operators) > 1:
            raise ExpressionError(root, "application has multiple operators")
        if not isinstance(operators[0], Iri):
            raise ExpressionError(root, "operator is not an IRI")
        if not arguments:
            raise ExpressionError(root, "application has no argument list")
        if len(arguments) > 1:
            raise ExpressionError(root, "application has multiple argument lists")
        try:
            members = decode_list(graph, arguments[0])
        except MalformedListError as exc:
            raise ExpressionError(root, f"malformed argument list: {exc.reason}") from exc
        path = _path | {root}
        args = tuple(decode_expression(graph, m, index, path) for m in members)
        return Application(CdSymbol.from_iri(operators[0].value), args, node_id(root))

    values = [o for o in graph.objects(root, OM.term("value")) if isinstance(o, Literal)]
    if values:
        return Constant(_literal_value(values[0]))

    raise ExpressionError(root, "not an expression node")


def collect_variables(expression: OmExpression) -> set[str]:
    """IRIs of all variable leaves, at any depth, deduplicated."""
    out: set[str] = set()
    stack: list[OmExpression] = [expression]
    while stack:
        node = stack.pop()
        if isinstance(node, Variable):
            out.add(node.iri)
        elif isinstance(node, Application):
            stack.extend(node.arguments)
    return out


def expression_symbols(expression: OmExpression) -> set[CdSymbol]:
    out: set[CdSymbol] = set()
    stack: list[OmExpression] = [expression]
    while stack:
        node = stack.pop()
        if isinstance(node, Application):
            out.add(node.symbol)
            stack.extend(node.arguments)
    return out


def expression_text(expression: OmExpression) -> str:
    """Compact functional rendering, for messages and notices."""
    if isinstance(expression, Constant):
        return f"{expression.value:g}"
    if isinstance(expression, Variable):
        return expression.iri.rsplit("#", 1)[-1].rsplit("/", 1)[-1]
    inner = ", ".join(expression_text(a) for a in expression.arguments)
    return f"{expression.symbol}({inner})"


@dataclass(frozen=True)
class StructuralWarning:
    code: str
    subject: str
    detail: str


@dataclass(frozen=True)
class TypeDescriptionView:
    iri: str
    unit_classes: frozenset[str]
    direct_units: tuple[str, ...]
    value: Literal | None


@dataclass(frozen=True)
class DataElementView:
    iri: str
    type_descriptions: tuple[str, ...]
    bound_variables: tuple[str, ...]
    owners: tuple[str, ...]
    value: Literal | None


@dataclass(frozen=True)
class StateView:
    iri: str
    kind: str | None
    data_elements: tuple[str, ...]


@dataclass(frozen=True)
class ResourceView:
    iri: str
    data_elements: tuple[str, ...]


@dataclass(frozen=True)
class Interdependency:
    root: str
    expression: OmExpression


@dataclass(frozen=True)
class OperatorView:
    iri: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    resources: tuple[str, ...]
    data_elements: tuple[str, ...]
    interdependencies: tuple[Interdependency, ...]


_STATE_KINDS = ("Product", "Energy", "Information")


@dataclass
class ProcessModel:
    graph: Graph
    type_index: TypeIndex
    operators: dict[str, OperatorView]
    states: dict[str, StateView]
    resources: dict[str, ResourceView]
    data_elements: dict[str, DataElementView]
    type_descriptions: dict[str, TypeDescriptionView]
    variable_bindings: dict[str, tuple[str, ...]]
    expected_units: dict[str, tuple[str, ...]]
    variables: tuple[str, ...]
    warnings: list[StructuralWarning] = field(default_factory=list)
    value_predicate: str = DEFAULT_VALUE_PREDICATE

    def operator(self, iri: str) -> OperatorView:
        try:
            return self.operators[iri]
        except KeyError:
            raise UnknownProcessError(iri) from None

    def bound_data_elements(self, variable: str) -> tuple[str, ...]:
        return self.variable_bindings.get(variable, ())

    def expected_units_of(self, variable: str) -> tuple[str, ...]:
        return self.expected_units.get(variable, ())

    def data_element(self, iri: str) -> DataElementView | None:
        return self.data_elements.get(iri)

    def state_data_elements(self, state_iri: str) -> tuple[str, ...]:
        view = self.states.get(state_iri)
        return view.data_elements if view else ()

    def resource_data_elements(self, resource_iri: str) -> tuple[str, ...]:
        view = self.resources.get(resource_iri)
        return view.data_elements if view else ()

    def unit_classes_of(self, data_element: str) -> frozenset[str]:
        """Union of unit classifications across the element's descriptions."""
        out: set[str] = set()
        view = self.data_elements.get(data_element)
        if view:
            for td in view.type_descriptions:
                desc = self.type_descriptions.get(td)
                if desc:
                    out |= desc.unit_classes
        return frozenset(out)


def load_model(graph: Graph, value_predicate: str = DEFAULT_VALUE_PREDICATE) -> ProcessModel:
    """Build the typed views. Expects a normalized graph.

    Dangling references and undecodable interdependencies produce structured
    warnings rather than failures, so a partially broken model can still be
    inspected and verified.
    """
    index = TypeIndex.from_graph(graph)
    warnings: list[StructuralWarning] = []

    def iri_objects(subject: Term, predicate: Iri) -> tuple[str, ...]:
        return tuple(
            sorted(node_id(o) for o in graph.objects(subject, predicate) if not isinstance(o, Literal))
        )

    def exists(node_iri: str) -> bool:
        return bool(graph.match(s=_term_for(node_iri))) or bool(index.direct_types(node_iri))

    has_de = DINEN61360.term("has_Data_Element")
    has_td = DINEN61360.term("has_Type_Description")
    is_data_for = PARX.term("isDataFor")
    value_pred = Iri(value_predicate)

    def first_value_literal(subject: Term) -> Literal | None:
        literals = sorted(
            (o for o in graph.objects(subject, value_pred) if isinstance(o, Literal)),
            key=lambda lit: (lit.lexical, lit.datatype),
        )
        return literals[0] if literals else None

    # --- type descriptions ---------------------------------------------
    td_iris: set[str] = set(index.instances_of(DINEN61360.term("Type_Description").value))
    for t in graph.match(p=has_td):
        if not isinstance(t.object, Literal):
            td_iris.add(node_id(t.object))
    type_descriptions: dict[str, TypeDescriptionView] = {}
    for td in sorted(td_iris):
        term: Term = _term_for(td)
        closure_units = frozenset(c for c in index.all_types(td) if is_unit_class(index, c))
        direct = tuple(sorted(c for c in index.direct_types(td) if is_unit_class(index, c)))
        type_descriptions[td] = TypeDescriptionView(
            td, closure_units, direct, first_value_literal(term)
        )

    # --- data elements ---------------------------------------------------
    de_iris: set[str] = set(index.instances_of(DINEN61360.term("Data_Element").value))
    owners: dict[str, set[str]] = {}
    for t in graph.match(p=has_de):
        if isinstance(t.object, Literal):
            continue
        de = node_id(t.object)
        de_iris.add(de)
        owners.setdefault(de, set()).add(node_id(t.subject))
    for t in graph.match(p=is_data_for):
        de_iris.add(node_id(t.subject))

    data_elements: dict[str, DataElementView] = {}
    for de in sorted(de_iris):
        term = _term_for(de)
        tds = iri_objects(term, has_td)
        if len(tds) > 1:
            warnings.append(
                StructuralWarning(
                    "multiple-type-descriptions", de, "data element has several type descriptions"
                )
            )
        bound = tuple(
            sorted(node_id(o) for o in graph.objects(term, is_data_for) if not isinstance(o, Literal))
        )
        data_elements[de] = DataElementView(
            de, tds, bound, tuple(sorted(owners.get(de, ()))), first_value_literal(term)
        )

    # --- variable bindings and expectations -------------------------------
    variable_bindings: dict[str, set[str]] = {}
    for t in graph.match(p=is_data_for):
        if isinstance(t.object, Literal):
            continue
        variable_bindings.setdefault(node_id(t.object), set()).add(node_id(t.subject))
    expected_units: dict[str, tuple[str, ...]] = {}
    for t in graph.match(p=PARX.term("expectsUnit")):
        if isinstance(t.object, Iri):
            var = node_id(t.subject)
            expected_units.setdefault(var, ())
            expected_units[var] = tuple(sorted(set(expected_units[var]) | {t.object.value}))
    variables = tuple(index.instances_of(OM.term("Variable").value))

    # --- states and resources ---------------------------------------------
    state_kind_classes = {VDI3682.term(k).value for k in _STATE_KINDS}
    state_iris: set[str] = set()
    for kind_class in state_kind_classes:
        state_iris.update(index.instances_of(kind_class))
    resource_iris: set[str] = set(index.instances_of(VDI3682.term("TechnicalResource").value))

    operator_iris = index.instances_of(VDI3682.term("ProcessOperator").value)
    for op in operator_iris:
        op_term = Iri(op)
        state_iris.update(iri_objects(op_term, VDI3682.term("hasInput")))
        state_iris.update(iri_objects(op_term, VDI3682.term("hasOutput")))
        resource_iris.update(iri_objects(op_term, VDI3682.term("isAssignedTo")))

    states: dict[str, StateView] = {}
    for state in sorted(state_iris):
        term = _term_for(state)
        kinds = sorted(index.all_types(state) & state_kind_classes)
        kind = kinds[0] if len(kinds) == 1 else None
        if not exists(state):
            warnings.append(
                StructuralWarning("dangling-reference", state, "referenced state has no triples")
            )
        elif kind is None:
            warnings.append(
                StructuralWarning(
                    "state-kind", state, f"expected exactly one state kind, found {len(kinds)}"
                )
            )
        states[state] = StateView(state, kind, iri_objects(term, has_de))

    resources: dict[str, ResourceView] = {}
    for resource in sorted(resource_iris):
        term = _term_for(resource)
        if not exists(resource):
            warnings.append(
                StructuralWarning(
                    "dangling-reference", resource, "referenced resource has no triples"
                )
            )
        resources[resource] = ResourceView(resource, iri_objects(term, has_de))

    # --- operators ---------------------------------------------------------
    operators: dict[str, OperatorView] = {}
    for op in operator_iris:
        op_term = Iri(op)
        roots = iri_objects(op_term, PARX.term("hasInterdependency"))
        interdependencies: list[Interdependency] = []
        for root in roots:
            root_term: Term = _term_for(root)
            try:
                interdependencies.append(
                    Interdependency(root, decode_expression(graph, root_term, index))
                )
            except ExpressionError as exc:
                warnings.append(StructuralWarning("interdependency-decode-failed", root, str(exc)))
        operators[op] = OperatorView(
            op,
            inputs=iri_objects(op_term, VDI3682.term("hasInput")),
            outputs=iri_objects(op_term, VDI3682.term("hasOutput")),
            resources=iri_objects(op_term, VDI3682.term("isAssignedTo")),
            data_elements=iri_objects(op_term, has_de),
            interdependencies=tuple(interdependencies),
        )

    return ProcessModel(
        graph=graph,
        type_index=index,
        operators=operators,
        states=states,
        resources=resources,
        data_elements=data_elements,
        type_descriptions=type_descriptions,
        variable_bindings={k: tuple(sorted(v)) for k, v in variable_bindings.items()},
        expected_units=expected_units,
        variables=variables,
        warnings=warnings,
        value_predicate=value_predicate,
    )


def _term_for(key: str) -> Term:
    from .terms import BlankNode

    return BlankNode(key[2:]) if key.startswith("_:") else Iri(key)


def model_from_graph(
    graph: Graph,
    aliases: AliasTable | None = None,
    value_predicate: str = DEFAULT_VALUE_PREDICATE,
) -> ProcessModel:
    """Normalize a raw graph with the (default) alias table and load it."""
    table = aliases if aliases is not None else default_aliases()
    return load_model(normalize(graph, table), value_predicate=value_predicate)
