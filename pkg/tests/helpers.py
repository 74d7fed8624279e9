"""Shared test utilities: independent oracles and graph helpers.

Everything here deliberately reimplements behavior from first principles
(four-branch traversal, naive recursive arithmetic, exhaustive isomorphism
search) so the production code is checked against a second route, not
against itself.
"""

from __future__ import annotations

import math
import random

from parx_verify.graph import Graph, RDF_FIRST, RDF_NIL, RDF_REST
from parx_verify.model import Application, CdSymbol, Constant, OmExpression, Variable
from parx_verify.terms import BlankNode, Iri, Literal, Term, Triple, node_id
from parx_verify.vocab import DINEN61360, OM, PARX, RDF, UNECE, VDI3682

EX = "http://example.org/rtm#"


def ex(name: str) -> str:
    return EX + name


def ex_iri(name: str) -> Iri:
    return Iri(EX + name)


# --- rdf:List encoding (inverse of decode_list) ---------------------------


def encode_list(members: list[Term], label_prefix: str = "cell") -> tuple[Term, list[Triple]]:
    """Emit a first/rest chain for ``members``; returns (head, triples)."""
    if not members:
        return RDF_NIL, []
    cells = [BlankNode(f"{label_prefix}{i}") for i in range(len(members))]
    triples: list[Triple] = []
    for i, member in enumerate(members):
        triples.append(Triple(cells[i], RDF_FIRST, member))
        rest: Term = cells[i + 1] if i + 1 < len(members) else RDF_NIL
        triples.append(Triple(cells[i], RDF_REST, rest))
    return cells[0], triples


# --- index audit -----------------------------------------------------------


def audit_indexes(graph: Graph) -> None:
    """All three indexes must agree exactly with the triple set."""
    by_s: dict[Term, set[Triple]] = {}
    by_p: dict[Term, set[Triple]] = {}
    by_o: dict[Term, set[Triple]] = {}
    for t in graph:
        by_s.setdefault(t.subject, set()).add(t)
        by_p.setdefault(t.predicate, set()).add(t)
        by_o.setdefault(t.object, set()).add(t)
    assert {k: set(v) for k, v in graph.by_subject.items()} == by_s
    assert {k: set(v) for k, v in graph.by_predicate.items()} == by_p
    assert {k: set(v) for k, v in graph.by_object.items()} == by_o
    assert sum(len(v) for v in graph.by_subject.values()) == len(graph)


# --- blank-node isomorphism (exhaustive search, test-only) -----------------


def _bnode_labels(graph: Graph) -> list[str]:
    labels = []
    seen = set()
    for t in graph:
        for term in (t.subject, t.object):
            if isinstance(term, BlankNode) and term.label not in seen:
                seen.add(term.label)
                labels.append(term.label)
    return sorted(labels)


def _signature(graph: Graph, label: str):
    node = BlankNode(label)
    return (
        tuple(sorted(t.predicate.value for t in graph.match(s=node))),
        tuple(sorted(t.predicate.value for t in graph.match(o=node))),
    )


def graphs_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Equality up to blank node relabeling (exhaustive with pruning)."""
    if len(g1) != len(g2):
        return False
    b1, b2 = _bnode_labels(g1), _bnode_labels(g2)
    if len(b1) != len(b2):
        return False
    target = set(g2)
    candidates = {
        l1: [l2 for l2 in b2 if _signature(g2, l2) == _signature(g1, l1)] for l1 in b1
    }
    triples = list(g1)

    def mapped(t: Triple, mapping: dict[str, str]) -> Triple:
        def m(term: Term) -> Term:
            if isinstance(term, BlankNode):
                return BlankNode(mapping[term.label])
            return term

        return Triple(m(t.subject), t.predicate, m(t.object))  # type: ignore[arg-type]

    def consistent(mapping: dict[str, str]) -> bool:
        for t in triples:
            labels = {
                term.label for term in (t.subject, t.object) if isinstance(term, BlankNode)
            }
            if labels and labels <= mapping.keys():
                if mapped(t, mapping) not in target:
                    return False
        return True

    def backtrack(i: int, mapping: dict[str, str], used: set[str]) -> bool:
        if i == len(b1):
            return all(mapped(t, mapping) in target for t in triples)
        for cand in candidates[b1[i]]:
            if cand in used:
                continue
            mapping[b1[i]] = cand
            used.add(cand)
            if consistent(mapping) and backtrack(i + 1, mapping, used):
                return True
            del mapping[b1[i]]
            used.discard(cand)
        return False

    return backtrack(0, {}, set())


# --- independent four-branch context oracle --------------------------------

_HAS_DE = DINEN61360.term("has_Data_Element")
_HAS_IN = VDI3682.term("hasInput")
_HAS_OUT = VDI3682.term("hasOutput")
_ASSIGNED = VDI3682.term("isAssignedTo")


def context_oracle(graph: Graph, operator_iri: str) -> set[str]:
    """Recompute context membership straight from the triples."""
    op = Iri(operator_iri)
    out: set[str] = set()
    for hop in (_HAS_OUT, _HAS_IN):
        for state in graph.objects(op, hop):
            for de in graph.objects(state, _HAS_DE):
                if not isinstance(de, Literal):
                    out.add(node_id(de))
    for resource in graph.objects(op, _ASSIGNED):
        for de in graph.objects(resource, _HAS_DE):
            if not isinstance(de, Literal):
                out.add(node_id(de))
    for de in graph.objects(op, _HAS_DE):
        if not isinstance(de, Literal):
            out.add(node_id(de))
    return out


# --- naive recursive arithmetic oracle --------------------------------------


class OracleFailure(Exception):
    pass


def naive_eval(node: OmExpression, values: dict[str, float]) -> float:
    if isinstance(node, Constant):
        return node.value
    if isinstance(node, Variable):
        if node.iri not in values:
            raise OracleFailure(f"unbound {node.iri}")
        return values[node.iri]
    args = [naive_eval(a, values) for a in node.arguments]
    name = (node.symbol.cd, node.symbol.name)
    if name == ("arith1", "plus"):
        total = 0.0
        for a in args:
            total += a
        return total
    if name == ("arith1", "times"):
        total = 1.0
        for a in args:
            total *= a
        return total
    if name == ("arith1", "minus"):
        return args[0] - args[1]
    if name == ("arith1", "divide"):
        if args[1] == 0.0:
            raise OracleFailure("division by zero")
        return args[0] / args[1]
    if name == ("arith1", "power"):
        try:
            r = args[0] ** args[1]
        except (OverflowError, ZeroDivisionError) as exc:
            raise OracleFailure(str(exc)) from exc
        if isinstance(r, complex):
            raise OracleFailure("complex result")
        return r
    raise OracleFailure(f"unknown symbol {name}")


def oracle_outcome(node: OmExpression, values: dict[str, float]):
    """("ok", finite value) or ("fail", reason) — mirrors evaluator semantics."""
    try:
        value = naive_eval(node, values)
    except OracleFailure as exc:
        return ("fail", str(exc))
    if not math.isfinite(value):
        return ("fail", "non-finite")
    return ("ok", value)


def close_enough(a: float, b: float, rel: float = 1e-12) -> bool:
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


# --- CLI table scraping ------------------------------------------------------


def table_rows(stdout: str) -> list[list[str]]:
    """Data rows of a rendered table (header and separator dropped)."""
    lines = [line for line in stdout.splitlines() if line.strip()]
    if not lines or "|" not in lines[0]:
        return []
    rows = []
    for line in lines[2:]:
        if "|" not in line:
            break
        rows.append([cell.strip() for cell in line.split("|")])
    return rows


# --- random generators -------------------------------------------------------

_ARITH_SYMBOLS = [
    ("arith1", "plus"),
    ("arith1", "times"),
    ("arith1", "minus"),
    ("arith1", "divide"),
    ("arith1", "power"),
]


def cd_symbol(cd: str, name: str) -> CdSymbol:
    return CdSymbol(cd, name, f"http://www.openmath.org/cd/{cd}#{name}")


def random_tree(rng: random.Random, depth: int, variables: list[str]) -> OmExpression:
    if depth <= 0 or rng.random() < 0.25:
        if variables and rng.random() < 0.6:
            return Variable(rng.choice(variables))
        magnitude = rng.uniform(0.25, 3.0)
        return Constant(round(magnitude if rng.random() < 0.7 else -magnitude, 4))
    cd, name = rng.choice(_ARITH_SYMBOLS)
    args = tuple(random_tree(rng, depth - 1, variables) for _ in range(2))
    return Application(cd_symbol(cd, name), args)


def random_bindings(rng: random.Random, variables: list[str]) -> dict[str, float]:
    out = {}
    for v in variables:
        magnitude = rng.uniform(0.25, 3.0)
        out[v] = round(magnitude if rng.random() < 0.75 else -magnitude, 4)
    return out


def random_process_graph(rng: random.Random, max_operators: int = 20) -> Graph:
    """Small random process structure with decoys for the context filter."""
    rdf_type = RDF.term("type")
    triples: list[Triple] = []
    n_ops = rng.randint(1, max_operators)
    n_states = max(2, n_ops * 2)
    n_resources = max(1, n_ops)
    n_des = n_states + n_resources + rng.randint(1, 6)

    states = [Iri(ex(f"State{i}")) for i in range(n_states)]
    resources = [Iri(ex(f"Res{i}")) for i in range(n_resources)]
    des = [Iri(ex(f"DE{i}")) for i in range(n_des)]
    kinds = ["Product", "Energy", "Information"]

    for state in states:
        triples.append(Triple(state, rdf_type, VDI3682.term(rng.choice(kinds))))
        for de in rng.sample(des, k=rng.randint(0, 2)):
            triples.append(Triple(state, _HAS_DE, de))
    for resource in resources:
        triples.append(Triple(resource, rdf_type, VDI3682.term("TechnicalResource")))
        for de in rng.sample(des, k=rng.randint(0, 2)):
            triples.append(Triple(resource, _HAS_DE, de))
    for de in des:
        triples.append(Triple(de, rdf_type, DINEN61360.term("Data_Element")))

    for i in range(n_ops):
        op = Iri(ex(f"Op{i}"))
        triples.append(Triple(op, rdf_type, VDI3682.term("ProcessOperator")))
        for state in rng.sample(states, k=rng.randint(0, 3)):
            triples.append(Triple(op, _HAS_IN, state))
        for state in rng.sample(states, k=rng.randint(0, 2)):
            triples.append(Triple(op, _HAS_OUT, state))
        for resource in rng.sample(resources, k=rng.randint(0, 2)):
            triples.append(Triple(op, _ASSIGNED, resource))
        for de in rng.sample(des, k=rng.randint(0, 1)):
            triples.append(Triple(op, _HAS_DE, de))
        # decoy: a two-hop chain that must NOT count as context
        decoy_state = rng.choice(states)
        triples.append(Triple(op, Iri(ex("relatedTo")), decoy_state))
    return Graph(triples)
