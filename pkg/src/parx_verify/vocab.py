"""Namespaces, IRI alias normalization, and the class/typing index.

The alignment vocabularies these models use have drifted spellings in the
wild (``hasDataElement`` vs ``has_Data_Element``, a ``DIN61360`` namespace
variant, camelCase class names). The shipped alias table rewrites every known
variant to one canonical spelling at load time so downstream queries are
single-spelling. An override file can extend or change the table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .graph import Graph
from .terms import Iri, Term, Triple


class Namespace:
    def __init__(self, base: str):
        self.base = base

    def term(self, name: str) -> Iri:
        return Iri(self.base + name)

    def __getattr__(self, name: str) -> Iri:
        if name.startswith("_"):
            raise AttributeError(name)
        return self.term(name)

    def __contains__(self, iri: str | Iri) -> bool:
        value = iri.value if isinstance(iri, Iri) else iri
        return value.startswith(self.base)

    def __repr__(self) -> str:
        return f"Namespace({self.base!r})"


VDI3682 = Namespace("http://www.w3id.org/hsu-aut/VDI3682#")
DINEN61360 = Namespace("http://www.w3id.org/hsu-aut/DINEN61360#")
UNECE = Namespace("http://www.w3id.org/hsu-aut/UNECE#")
PARX = Namespace("http://www.hsu-hh.de/aut/ParX#")
OM = Namespace("http://openmath.org/vocab/math#")
RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")

OPENMATH_CD_BASE = "http://www.openmath.org/cd/"

CANONICAL_PREFIXES: dict[str, str] = {
    "VDI3682": VDI3682.base,
    "DINEN61360": DINEN61360.base,
    "UNECE": UNECE.base,
    "ParX": PARX.base,
    "OM": OM.base,
    "rdf": RDF.base,
    "rdfs": RDFS.base,
    "xsd": XSD.base,
}

# Noncanonical spellings seen in circulating models
_DIN_VARIANT_NS = "http://www.w3id.org/hsu-aut/DIN61360#"
_OM_WWW_NS = "http://www.openmath.org/vocab/math#"


@dataclass
class AliasTable:
    """Maps noncanonical IRIs to canonical ones.

    ``namespaces`` rewrites whole namespace bases, ``exact`` single IRIs.
    Namespace rules apply first, then exact rules; canonical IRIs are fixed
    points, so applying the table twice changes nothing.
    """

    exact: dict[str, str] = field(default_factory=dict)
    namespaces: dict[str, str] = field(default_factory=dict)

    def canonical(self, iri: str) -> str:
        for src, dst in self.namespaces.items():
            if iri.startswith(src):
                iri = dst + iri[len(src) :]
                break
        return self.exact.get(iri, iri)

    def extended_with(self, other: "AliasTable") -> "AliasTable":
        return AliasTable(
            exact={**self.exact, **other.exact},
            namespaces={**self.namespaces, **other.namespaces},
        )


def default_aliases() -> AliasTable:
    return AliasTable(
        exact={
            DINEN61360.term("hasDataElement").value: DINEN61360.term("has_Data_Element").value,
            DINEN61360.term("hasTypeDescription").value: DINEN61360.term(
                "has_Type_Description"
            ).value,
            DINEN61360.term("DataElement").value: DINEN61360.term("Data_Element").value,
            DINEN61360.term("TypeDescription").value: DINEN61360.term("Type_Description").value,
        },
        namespaces={
            _DIN_VARIANT_NS: DINEN61360.base,
            _OM_WWW_NS: OM.base,
        },
    )


def parse_alias_lines(text: str) -> AliasTable:
    """Alias override format: one ``noncanonical canonical`` IRI pair per
    line, ``#`` comments. Pairs whose IRIs both end in ``#`` or ``/`` are
    namespace rules."""
    table = AliasTable()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        # only whole-line comments: IRIs legitimately contain '#'
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"alias line {lineno}: expected two IRIs, got {len(parts)} fields")
        src, dst = parts
        if src.endswith(("#", "/")) and dst.endswith(("#", "/")):
            table.namespaces[src] = dst
        else:
            table.exact[src] = dst
    return table


def load_alias_file(path: str | Path) -> AliasTable:
    return parse_alias_lines(Path(path).read_text(encoding="utf-8"))


def normalize(graph: Graph, aliases: AliasTable) -> Graph:
    """Rewrite every aliased IRI to its canonical form.

    Alias collapse can merge previously distinct triples, so the result is
    never larger than the input.
    """

    def rewrite(term: Term) -> Term:
        if isinstance(term, Iri):
            canonical = aliases.canonical(term.value)
            if canonical != term.value:
                return Iri(canonical)
        return term

    return Graph(
        Triple(rewrite(t.subject), rewrite(t.predicate), rewrite(t.object))  # type: ignore[arg-type]
        for t in graph
    )


class TypeIndex:
    """rdf:type assertions plus the transitive rdfs:subClassOf closure.

    Computed eagerly at construction (the store is immutable). Subclass
    cycles are tolerated: closure membership stays well-defined because
    reachability simply includes every class on the cycle.
    """

    def __init__(
        self,
        instance_types: dict[str, set[str]],
        subclass_edges: dict[str, set[str]],
    ):
        self.instance_types = instance_types
        self.subclass_edges = subclass_edges
        self._ancestors: dict[str, frozenset[str]] = {}
        for cls in subclass_edges:
            self.superclasses(cls)

    @classmethod
    def from_graph(cls, graph: Graph) -> "TypeIndex":
        instance_types: dict[str, set[str]] = {}
        subclass_edges: dict[str, set[str]] = {}
        for t in graph.match(p=RDF.term("type")):
            if isinstance(t.object, Iri):
                key = _node_key(t.subject)
                instance_types.setdefault(key, set()).add(t.object.value)
        for t in graph.match(p=RDFS.term("subClassOf")):
            if isinstance(t.subject, Iri) and isinstance(t.object, Iri):
                subclass_edges.setdefault(t.subject.value, set()).add(t.object.value)
        return cls(instance_types, subclass_edges)

    def superclasses(self, class_iri: str) -> frozenset[str]:
        """All classes transitively above ``class_iri`` (exclusive)."""
        cached = self._ancestors.get(class_iri)
        if cached is not None:
            return cached
        seen: set[str] = set()
        stack = list(self.subclass_edges.get(class_iri, ()))
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(self.subclass_edges.get(cur, ()))
        result = frozenset(seen)
        self._ancestors[class_iri] = result
        return result

    def all_types(self, node: Term | str) -> frozenset[str]:
        """Direct rdf:type classes plus all transitive superclasses."""
        key = node if isinstance(node, str) else _node_key(node)
        direct = self.instance_types.get(key, set())
        out = set(direct)
        for cls in direct:
            out |= self.superclasses(cls)
        return frozenset(out)

    def direct_types(self, node: Term | str) -> frozenset[str]:
        key = node if isinstance(node, str) else _node_key(node)
        return frozenset(self.instance_types.get(key, set()))

    def instances_of(self, class_iri: str) -> list[str]:
        """Nodes directly typed with ``class_iri``, sorted."""
        return sorted(k for k, types in self.instance_types.items() if class_iri in types)


def _node_key(term: Term) -> str:
    from .terms import node_id

    return node_id(term)


def all_types(index: TypeIndex, node: Term | str) -> frozenset[str]:
    return index.all_types(node)


def is_unit_class(index: TypeIndex, class_iri: str) -> bool:
    """Whether ``class_iri`` denotes a unit of measure.

    True for the unit root class, any declared (transitive) subclass of it,
    and as a fallback for any IRI in the unit-code namespace — models often
    type instances with unit codes without shipping the subclass axioms.
    """
    unit_root = UNECE.term("Unit").value
    if class_iri == unit_root:
        return True
    if unit_root in index.superclasses(class_iri):
        return True
    return class_iri.startswith(UNECE.base)
