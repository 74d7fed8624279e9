"""Indexed in-memory triple set.

A :class:`Graph` is immutable once constructed: build it from an iterable of
triples and only read it afterwards. Any number of concurrent readers is safe.
Insertion has set semantics (duplicates are no-ops) while iteration order is
the insertion order, which keeps downstream output deterministic regardless of
interpreter hash randomization.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .terms import BlankNode, Iri, Literal, Term, Triple, term_to_ntriples, triple_to_ntriples

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDF_FIRST = Iri(RDF_NS + "first")
RDF_REST = Iri(RDF_NS + "rest")
RDF_NIL = Iri(RDF_NS + "nil")


class MalformedListError(ValueError):
    """An rdf:List chain that cannot be decoded; names the offending cell."""

    def __init__(self, cell: Term, reason: str):
        self.cell = cell
        self.reason = reason
        super().__init__(f"malformed rdf:List at {term_to_ntriples(cell)}: {reason}")


class Graph:
    def __init__(self, triples: Iterable[Triple] = ()):
        # dict keys double as an insertion-ordered set
        self._triples: dict[Triple, None] = {}
        self.by_subject: dict[Term, list[Triple]] = {}
        self.by_predicate: dict[Term, list[Triple]] = {}
        self.by_object: dict[Term, list[Triple]] = {}
        for t in triples:
            if t in self._triples:
                continue
            self._triples[t] = None
            self.by_subject.setdefault(t.subject, []).append(t)
            self.by_predicate.setdefault(t.predicate, []).append(t)
            self.by_object.setdefault(t.object, []).append(t)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples.keys() == other._triples.keys()

    def __hash__(self):  # pragma: no cover - graphs are not hashable
        raise TypeError("Graph is unhashable")

    def __repr__(self) -> str:
        return f"Graph({len(self)} triples)"

    def match(
        self,
        s: Term | None = None,
        p: Term | None = None,
        o: Term | None = None,
    ) -> list[Triple]:
        """All triples agreeing with the bound positions (None = wildcard).

        Scans the most selective available index.
        """
        candidates: Iterable[Triple]
        pools = []
        if s is not None:
            pools.append(self.by_subject.get(s, []))
        if p is not None:
            pools.append(self.by_predicate.get(p, []))
        if o is not None:
            pools.append(self.by_object.get(o, []))
        if pools:
            candidates = min(pools, key=len)
        else:
            candidates = self._triples
        return [
            t
            for t in candidates
            if (s is None or t.subject == s)
            and (p is None or t.predicate == p)
            and (o is None or t.object == o)
        ]

    def objects(self, s: Term, p: Term) -> list[Term]:
        return [t.object for t in self.match(s=s, p=p)]

    def subjects(self, p: Term, o: Term) -> list[Term]:
        return [t.subject for t in self.match(p=p, o=o)]

    def value(self, s: Term, p: Term) -> Term | None:
        """First object for (s, p), or None."""
        found = self.objects(s, p)
        return found[0] if found else None

    def subject_nodes(self) -> list[Term]:
        return list(self.by_subject)


def decode_list(graph: Graph, head: Term) -> list[Term]:
    """Members of the rdf:List starting at ``head``, in chain order.

    ``head`` may be rdf:nil (empty list). Raises :class:`MalformedListError`
    on a missing rdf:first, an rdf:rest fan-out, or a cycle.
    """
    members: list[Term] = []
    seen: set[Term] = set()
    cell = head
    while cell != RDF_NIL:
        if isinstance(cell, Literal):
            raise MalformedListError(cell, "literal used as list cell")
        if cell in seen:
            raise MalformedListError(cell, "cycle in rdf:rest chain")
        seen.add(cell)
        firsts = graph.objects(cell, RDF_FIRST)
        if len(firsts) == 0:
            raise MalformedListError(cell, "cell has no rdf:first")
        if len(firsts) > 1:
            raise MalformedListError(cell, "cell has multiple rdf:first values")
        rests = graph.objects(cell, RDF_REST)
        if len(rests) == 0:
            raise MalformedListError(cell, "cell has no rdf:rest")
        if len(rests) > 1:
            raise MalformedListError(cell, "rdf:rest fan-out")
        members.append(firsts[0])
        cell = rests[0]
    return members


def serialize_ntriples(graph: Graph) -> str:
    """Deterministic N-Triples rendering: one triple per line, sorted."""
    lines = sorted(triple_to_ntriples(t) for t in graph)
    return "".join(line + "\n" for line in lines)


def _relabel(labels: list[str], doc_index: int, taken: set[str]) -> dict[str, str]:
    """Collision-free relabeling for one document's blank node labels.

    Labels keep their spelling unless already taken; renamed labels never
    collide with ``taken``, with each other, or with this document's own
    originals.
    """
    originals = set(labels)
    mapping: dict[str, str] = {}
    assigned: set[str] = set()
    for label in labels:
        if label not in taken:
            mapping[label] = label
            assigned.add(label)
    for label in labels:
        if label in mapping:
            continue
        candidate = f"{label}_m{doc_index}"
        while candidate in taken or candidate in assigned or candidate in originals:
            candidate += "x"
        mapping[label] = candidate
        assigned.add(candidate)
    return mapping


def merge_graphs(graphs: Iterable[Graph]) -> Graph:
    """Union of several document graphs.

    Blank node labels are document-scoped, so labels already used by an
    earlier document are deterministically renamed before merging.
    """
    out: list[Triple] = []
    used: set[str] = set()
    for index, graph in enumerate(graphs):
        labels: list[str] = []
        label_set: set[str] = set()
        for t in graph:
            for term in (t.subject, t.object):
                if isinstance(term, BlankNode) and term.label not in label_set:
                    label_set.add(term.label)
                    labels.append(term.label)
        mapping = _relabel(labels, index, used)

        def rename(term: Term) -> Term:
            if isinstance(term, BlankNode):
                return BlankNode(mapping[term.label])
            return term

        for t in graph:
            out.append(Triple(rename(t.subject), t.predicate, rename(t.object)))  # type: ignore[arg-type]
        used |= set(mapping.values())
    return Graph(out)
