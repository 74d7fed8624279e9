"""RDF term and triple model.

All terms are immutable values. Literals compare by (lexical form, datatype,
language) with no value-space canonicalization, so ``"1.0"`` and ``"1.00"``
are distinct terms.
"""

from __future__ import annotations

from dataclasses import dataclass

XSD_STRING = "http://www.w3.org/2001/XMLSchema#string"
XSD_INTEGER = "http://www.w3.org/2001/XMLSchema#integer"
XSD_DECIMAL = "http://www.w3.org/2001/XMLSchema#decimal"
XSD_DOUBLE = "http://www.w3.org/2001/XMLSchema#double"
XSD_BOOLEAN = "http://www.w3.org/2001/XMLSchema#boolean"
RDF_LANGSTRING = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString"


@dataclass(frozen=True)
class Iri:
    value: str

    def __repr__(self) -> str:
        return f"Iri({self.value!r})"


@dataclass(frozen=True)
class BlankNode:
    """Blank node with a document-scoped label (no leading ``_:``)."""

    label: str

    def __repr__(self) -> str:
        return f"BlankNode({self.label!r})"


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    language: str | None = None

    def __repr__(self) -> str:
        if self.language:
            return f"Literal({self.lexical!r}@{self.language})"
        return f"Literal({self.lexical!r}^^{self.datatype})"


Term = Iri | BlankNode | Literal


@dataclass(frozen=True)
class Triple:
    subject: Iri | BlankNode
    predicate: Iri
    object: Term

    def __post_init__(self) -> None:
        if isinstance(self.subject, Literal):
            raise TypeError("literal in subject position")
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise TypeError(f"bad subject: {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise TypeError(f"predicate must be an IRI: {self.predicate!r}")
        if not isinstance(self.object, (Iri, BlankNode, Literal)):
            raise TypeError(f"bad object: {self.object!r}")


def node_id(term: Term) -> str:
    """Stable string identity for a node (IRI value or ``_:label``)."""
    if isinstance(term, Iri):
        return term.value
    if isinstance(term, BlankNode):
        return "_:" + term.label
    raise TypeError(f"literals have no node identity: {term!r}")


def _escape_literal(text: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def term_to_ntriples(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    if isinstance(term, Literal):
        body = f'"{_escape_literal(term.lexical)}"'
        if term.language:
            return f"{body}@{term.language}"
        if term.datatype and term.datatype != XSD_STRING:
            return f"{body}^^<{term.datatype}>"
        return body
    raise TypeError(f"not a term: {term!r}")


def triple_to_ntriples(triple: Triple) -> str:
    return (
        f"{term_to_ntriples(triple.subject)} "
        f"{term_to_ntriples(triple.predicate)} "
        f"{term_to_ntriples(triple.object)} ."
    )


def term_sort_key(term: Term) -> tuple[int, str]:
    """Total order over terms: IRIs, then blank nodes, then literals."""
    if isinstance(term, Iri):
        return (0, term.value)
    if isinstance(term, BlankNode):
        return (1, term.label)
    return (2, term_to_ntriples(term))
