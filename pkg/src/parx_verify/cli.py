"""Command-line front end.

Subcommands::

    parx-verify filter      --process IRI [--formula IRI] [--unfiltered] FILES...
    parx-verify check-units [--process IRI] [--strict] FILES...
    parx-verify check-data  --process IRI FILES...
    parx-verify verify      [--json PATH] FILES...
    parx-verify evaluate    --process IRI FILES...

Multiple input files are merged into one graph (blank nodes relabeled), so a
vocabulary file can ship separately from the instance model. IRIs on the
command line may use registered prefixes (``ex:Injection``) or be written in
full.

Exit codes: 0 consistent/success, 1 findings present or evaluation refused,
2 input or parse error, 3 unknown entity.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .evaluation import evaluate_operator
from .model import ProcessModel, UnknownProcessError, model_from_graph
from .graph import merge_graphs
from .report import (
    SCHEMA_VERSION,
    TOOL_NAME,
    VERDICT_CONSISTENT,
    VERDICT_INCONSISTENT,
    compact_iri,
    local_name,
    format_value,
    render_availability_table,
    render_bindings_table,
    render_report,
    render_result_line,
    render_unit_table,
    report_json,
    timestamp_now,
)
from .turtle import TurtleParseError, parse_turtle_document
from .vocab import CANONICAL_PREFIXES, AliasTable, default_aliases, load_alias_file
from .verification import (
    MISMATCH,
    check_data_availability,
    check_units,
    resolve_bindings,
)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_INPUT_ERROR = 2
EXIT_UNKNOWN_ENTITY = 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


@dataclass
class LoadedModel:
    model: ProcessModel
    prefixes: dict[str, str]
    aliases: AliasTable
    files: list[str]


def _load(files: list[str], aliases_path: str | None) -> LoadedModel:
    aliases = default_aliases()
    if aliases_path:
        try:
            aliases = aliases.extended_with(load_alias_file(aliases_path))
        except OSError as exc:
            raise CliError(EXIT_INPUT_ERROR, f"cannot read alias file: {exc}") from exc
        except ValueError as exc:
            raise CliError(EXIT_INPUT_ERROR, f"bad alias file: {exc}") from exc
    documents = []
    for name in files:
        path = Path(name)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(EXIT_INPUT_ERROR, f"cannot read {name}: {exc}") from exc
        try:
            documents.append(parse_turtle_document(text, base_iri=path.absolute().as_uri()))
        except TurtleParseError as exc:
            raise CliError(EXIT_INPUT_ERROR, f"{name}: {exc}") from exc
    graph = merge_graphs(doc.graph for doc in documents)
    model = model_from_graph(graph, aliases)

    base_to_prefix: dict[str, str] = {}
    for doc in documents:
        for prefix, base in sorted(doc.prefixes.items()):
            base_to_prefix[aliases.canonical(base)] = prefix
    for prefix, base in CANONICAL_PREFIXES.items():
        base_to_prefix[base] = prefix
    prefixes = {p: b for b, p in base_to_prefix.items()}
    return LoadedModel(model, prefixes, aliases, list(files))


def _resolve(arg: str, loaded: LoadedModel) -> str:
    if arg.startswith("<") and arg.endswith(">"):
        return loaded.aliases.canonical(arg[1:-1])
    if "://" in arg or arg.startswith("urn:"):
        return loaded.aliases.canonical(arg)
    if ":" in arg:
        prefix, _, local = arg.partition(":")
        if prefix in loaded.prefixes:
            return loaded.aliases.canonical(loaded.prefixes[prefix] + local)
        raise CliError(EXIT_UNKNOWN_ENTITY, f"unknown prefix {prefix + ':'!r} in {arg!r}")
    raise CliError(EXIT_UNKNOWN_ENTITY, f"{arg!r} is neither a prefixed name nor an IRI")


def _operator(loaded: LoadedModel, arg: str):
    iri = _resolve(arg, loaded)
    try:
        return loaded.model.operator(iri)
    except UnknownProcessError as exc:
        raise CliError(EXIT_UNKNOWN_ENTITY, str(exc)) from exc


def cmd_filter(args: argparse.Namespace) -> int:
    loaded = _load(args.files, args.aliases)
    view = _operator(loaded, args.process)
    deps = list(view.interdependencies)
    if args.formula:
        formula_iri = _resolve(args.formula, loaded)
        deps = [d for d in deps if d.root == formula_iri]
        if not deps:
            raise CliError(
                EXIT_UNKNOWN_ENTITY,
                f"operator {view.iri} has no interdependency {formula_iri}",
            )
    rows: dict[tuple[str, str], bool] = {}
    for dep in deps:
        for binding in resolve_bindings(
            loaded.model, view.iri, dep.expression, filtered=not args.unfiltered
        ):
            rows[(binding.variable, binding.data_element)] = binding.in_context
    bindings = [
        {"variable": v, "data_element": d, "in_context": flag}
        for (v, d), flag in sorted(rows.items())
    ]
    print(render_bindings_table(bindings, loaded.prefixes))
    return EXIT_OK


def cmd_check_units(args: argparse.Namespace) -> int:
    loaded = _load(args.files, args.aliases)
    scope = None
    if args.process:
        scope = _operator(loaded, args.process).iri
    findings = check_units(loaded.model, scope=scope, strict=args.strict)
    print(render_unit_table([asdict(f) for f in findings], loaded.prefixes))
    return EXIT_FINDINGS if findings else EXIT_OK


def cmd_check_data(args: argparse.Namespace) -> int:
    loaded = _load(args.files, args.aliases)
    view = _operator(loaded, args.process)
    result = check_data_availability(loaded.model, view.iri)
    print(render_availability_table([asdict(f) for f in result.findings], loaded.prefixes))
    for note in result.structural:
        print(
            f"note: step {note.step} [{note.code}] "
            f"{compact_iri(note.process, loaded.prefixes)}: {note.detail}",
            file=sys.stderr,
        )
    return EXIT_FINDINGS if result.findings else EXIT_OK


def _build_report(loaded: LoadedModel) -> dict:
    model = loaded.model
    bindings = []
    for op_iri in sorted(model.operators):
        view = model.operators[op_iri]
        seen: set[tuple[str, str, str]] = set()
        for dep in sorted(view.interdependencies, key=lambda d: d.root):
            for b in resolve_bindings(model, op_iri, dep.expression, filtered=False):
                key = (dep.root, b.variable, b.data_element)
                if key in seen:
                    continue
                seen.add(key)
                bindings.append(
                    {
                        "operator": op_iri,
                        "formula": dep.root,
                        "variable": b.variable,
                        "data_element": b.data_element,
                        "in_context": b.in_context,
                    }
                )

    unit_findings = [asdict(f) for f in check_units(model)]
    availability = []
    structural = []
    for op_iri in sorted(model.operators):
        result = check_data_availability(model, op_iri)
        availability.extend(asdict(f) for f in result.findings)
        structural.extend(asdict(f) for f in result.structural)

    mismatch_count = sum(1 for f in unit_findings if f["kind"] == MISMATCH)
    verdict = (
        VERDICT_CONSISTENT
        if mismatch_count == 0 and not availability
        else VERDICT_INCONSISTENT
    )

    evaluation: dict = {
        "performed": False,
        "note": None,
        "results": [],
        "refusals": [],
        "errors": [],
        "notices": [],
    }
    if verdict == VERDICT_CONSISTENT:
        evaluation["performed"] = True
        for op_iri in sorted(model.operators):
            outcome = evaluate_operator(model, op_iri)
            for r in outcome.results:
                evaluation["results"].append(
                    {
                        "process": op_iri,
                        "formula": r.formula,
                        "target": r.target,
                        "value": r.value,
                        "unit": r.unit,
                        "inputs": [
                            {
                                "variable": variable,
                                "data_element": entry.data_element,
                                "value": entry.value,
                                "unit": entry.unit,
                            }
                            for variable, entry in r.inputs
                        ],
                    }
                )
            for refusal in outcome.refusals:
                evaluation["refusals"].append(
                    {
                        "process": op_iri,
                        "formula": refusal.formula,
                        "reasons": [
                            f"missing data for {f.missing_variable}"
                            for f in refusal.availability
                        ]
                        + [
                            f"unit mismatch on {f.variable} via {f.data_element}"
                            for f in refusal.unit_mismatches
                        ],
                    }
                )
            for formula, message in outcome.errors:
                evaluation["errors"].append(
                    {"process": op_iri, "formula": formula, "message": message}
                )
            evaluation["notices"].extend(outcome.notices)
    else:
        evaluation["note"] = "skipped: model has findings"

    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": TOOL_NAME, "version": __version__},
        "generated_at": timestamp_now(),
        "inputs": list(loaded.files),
        "prefixes": dict(sorted(loaded.prefixes.items())),
        "operators": sorted(loaded.model.operators),
        "context_bindings": bindings,
        "unit_findings": unit_findings,
        "availability_findings": availability,
        "structural_findings": structural,
        "warnings": [asdict(w) for w in model.warnings],
        "evaluation": evaluation,
        "verdict": verdict,
    }


def cmd_verify(args: argparse.Namespace) -> int:
    loaded = _load(args.files, args.aliases)
    report = _build_report(loaded)
    if args.json_path:
        try:
            Path(args.json_path).write_text(report_json(report), encoding="utf-8")
        except OSError as exc:
            raise CliError(EXIT_INPUT_ERROR, f"cannot write report: {exc}") from exc
    print(render_report(report), end="")
    return EXIT_OK if report["verdict"] == VERDICT_CONSISTENT else EXIT_FINDINGS


def cmd_evaluate(args: argparse.Namespace) -> int:
    loaded = _load(args.files, args.aliases)
    view = _operator(loaded, args.process)
    if not view.interdependencies:
        print("no evaluable interdependencies")
        return EXIT_OK
    outcome = evaluate_operator(loaded.model, view.iri)
    for result in outcome.results:
        print(
            render_result_line(
                {"target": result.target, "value": result.value, "unit": result.unit},
                loaded.prefixes,
            )
        )
    for refusal in outcome.refusals:
        print(
            f"refused {compact_iri(refusal.formula, loaded.prefixes)}: evaluation blocked by",
            file=sys.stderr,
        )
        for f in refusal.availability:
            print(
                f"  - missing data for {compact_iri(f.missing_variable, loaded.prefixes)} "
                f"in {compact_iri(f.process, loaded.prefixes)}",
                file=sys.stderr,
            )
        for f in refusal.unit_mismatches:
            print(
                f"  - unit mismatch on {compact_iri(f.variable, loaded.prefixes)} via "
                f"{compact_iri(f.data_element or '-', loaded.prefixes)}",
                file=sys.stderr,
            )
    for formula, message in outcome.errors:
        print(f"error in {compact_iri(formula, loaded.prefixes)}: {message}", file=sys.stderr)
    for notice in outcome.notices:
        print(f"note: {notice}", file=sys.stderr)
    return EXIT_OK if outcome.ok else EXIT_FINDINGS


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Verify ontology-based process models and evaluate their "
        "parameter interdependencies.",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("files", nargs="+", metavar="FILE", help="Turtle input files (merged)")
    common.add_argument("--aliases", metavar="PATH", help="alias-override file")

    p = sub.add_parser("filter", parents=[common], help="show context-filtered variable bindings")
    p.add_argument("--process", required=True, metavar="IRI")
    p.add_argument("--formula", metavar="IRI", help="restrict to one interdependency")
    p.add_argument("--unfiltered", action="store_true", help="include out-of-context rows")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("check-units", parents=[common], help="expected-unit consistency check")
    p.add_argument("--process", metavar="IRI", help="restrict to one operator's context")
    p.add_argument("--strict", action="store_true", help="also report variables without an expected unit")
    p.set_defaults(func=cmd_check_units)

    p = sub.add_parser("check-data", parents=[common], help="input-data availability check")
    p.add_argument("--process", required=True, metavar="IRI")
    p.set_defaults(func=cmd_check_data)

    p = sub.add_parser("verify", parents=[common], help="run all checks and build a report")
    p.add_argument("--json", dest="json_path", metavar="PATH", help="write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("evaluate", parents=[common], help="evaluate an operator's interdependencies")
    p.add_argument("--process", required=True, metavar="IRI")
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"{TOOL_NAME}: {exc}", file=sys.stderr)
        return exc.code


def entry() -> None:  # console-script hook
    sys.exit(main())
