"""Verifier and evaluator for ontology-based manufacturing process models.

Loads Turtle models built on the VDI 3682 / DIN EN 61360 / UNECE / ParX /
OpenMath-RDF vocabularies and checks them for context-irrelevant data
bindings, unit mismatches, and missing input data for mathematical
interdependencies; consistent models get their equations evaluated.
"""

__version__ = "0.1.0"

from .terms import BlankNode, Iri, Literal, Term, Triple
from .graph import Graph, MalformedListError, decode_list, merge_graphs, serialize_ntriples
from .turtle import TurtleParseError, parse_turtle, parse_turtle_document
from .vocab import (
    AliasTable,
    TypeIndex,
    all_types,
    default_aliases,
    is_unit_class,
    normalize,
)
from .model import (
    Application,
    CdSymbol,
    Constant,
    ExpressionError,
    OmExpression,
    ProcessModel,
    UnknownProcessError,
    Variable,
    collect_variables,
    decode_expression,
    load_model,
    model_from_graph,
)
from .verification import (
    AvailabilityFinding,
    AvailabilityResult,
    ProcessContext,
    StructuralFinding,
    UnitFinding,
    VariableBinding,
    check_data_availability,
    check_units,
    filter_context_data,
    resolve_bindings,
)
from .evaluation import (
    BindingEntry,
    BindingEnvironment,
    EvaluationError,
    EvaluationResult,
    OperatorEvaluation,
    build_environment,
    evaluate,
    evaluate_operator,
)

__all__ = [
    "__version__",
    "BlankNode",
    "Iri",
    "Literal",
    "Term",
    "Triple",
    "Graph",
    "MalformedListError",
    "decode_list",
    "merge_graphs",
    "serialize_ntriples",
    "TurtleParseError",
    "parse_turtle",
    "parse_turtle_document",
    "AliasTable",
    "TypeIndex",
    "all_types",
    "default_aliases",
    "is_unit_class",
    "normalize",
    "Application",
    "CdSymbol",
    "Constant",
    "ExpressionError",
    "OmExpression",
    "ProcessModel",
    "UnknownProcessError",
    "Variable",
    "collect_variables",
    "decode_expression",
    "load_model",
    "model_from_graph",
    "AvailabilityFinding",
    "AvailabilityResult",
    "ProcessContext",
    "StructuralFinding",
    "UnitFinding",
    "VariableBinding",
    "check_data_availability",
    "check_units",
    "filter_context_data",
    "resolve_bindings",
    "BindingEntry",
    "BindingEnvironment",
    "EvaluationError",
    "EvaluationResult",
    "OperatorEvaluation",
    "build_environment",
    "evaluate",
    "evaluate_operator",
]
