"""Turtle reader for the model subset used by the verifier.

Supported syntax: ``@prefix`` / ``@base`` directives, IRIs and prefixed
names, the ``a`` keyword, string / numeric / boolean literals with ``^^``
datatypes and ``@lang`` tags, predicate lists (``;``), object lists (``,``),
blank node property lists (``[ ... ]``), explicit ``_:label`` nodes, and
collections (``( ... )``) expanded to rdf:first/rdf:rest/rdf:nil chains.

Not Turtle-complete on purpose: no TriG/quads, no SPARQL-style
``PREFIX``/``BASE`` keywords, no triple-quoted strings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urljoin

from .graph import Graph, RDF_FIRST, RDF_NIL, RDF_NS, RDF_REST
from .terms import (
    BlankNode,
    Iri,
    Literal,
    RDF_LANGSTRING,
    Term,
    Triple,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
)

RDF_TYPE = Iri(RDF_NS + "type")

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.\d+|\.\d+|\d+)(?:[eE][+-]?\d+)?")
_PNAME_PREFIX_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-.]*")
_BNODE_LABEL_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_\-.]*")
_EXPLICIT_LABEL_RE = re.compile(r"_:([A-Za-z0-9_][A-Za-z0-9_\-.]*)")

_LOCAL_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-")

_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


class TurtleParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


@dataclass
class _Token:
    kind: str
    value: object
    line: int
    col: int


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str, line: int | None = None, col: int | None = None):
        raise TurtleParseError(
            message, self.line if line is None else line, self.col if col is None else col
        )

    def _advance(self, count: int) -> None:
        for _ in range(count):
            if self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _peek(self, offset: int = 0) -> str:
        index = self.pos + offset
        return self.text[index] if index < len(self.text) else ""

    def tokens(self) -> list[_Token]:
        out: list[_Token] = []
        while True:
            tok = self._next_token()
            out.append(tok)
            if tok.kind == "eof":
                return out

    def _next_token(self) -> _Token:
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch in " \t\r\n":
                self._advance(1)
                continue
            if ch == "#":
                while self.pos < len(text) and text[self.pos] not in "\r\n":
                    self._advance(1)
                continue
            break
        if self.pos >= len(text):
            return _Token("eof", None, self.line, self.col)

        line, col = self.line, self.col
        ch = text[self.pos]

        if ch == "<":
            end = text.find(">", self.pos + 1)
            if end == -1:
                self.error("unterminated IRI", line, col)
            raw = text[self.pos + 1 : end]
            if any(c in raw for c in ' "{}|^`\\') or "\n" in raw:
                self.error("illegal character in IRI", line, col)
            self._advance(end + 1 - self.pos)
            return _Token("iriref", raw, line, col)

        if ch == "@":
            self._advance(1)
            start = self.pos
            while self._peek().isalpha() or (
                self.pos > start and (self._peek().isalnum() or self._peek() == "-")
            ):
                self._advance(1)
            word = text[start : self.pos]
            if word == "prefix":
                return _Token("at_prefix", None, line, col)
            if word == "base":
                return _Token("at_base", None, line, col)
            if re.fullmatch(r"[A-Za-z]+(-[A-Za-z0-9]+)*", word):
                return _Token("langtag", word, line, col)
            self.error(f"unknown directive @{word}", line, col)

        if ch == '"':
            return self._string(line, col)

        if ch == "^":
            if self._peek(1) == "^":
                self._advance(2)
                return _Token("hathat", None, line, col)
            self.error("lone '^' (expected '^^')", line, col)

        if ch in ".;,[]()":
            # '.' might start a number like .5
            if ch == "." and self._peek(1).isdigit():
                return self._number(line, col)
            self._advance(1)
            kinds = {
                ".": "dot",
                ";": "semicolon",
                ",": "comma",
                "[": "lbracket",
                "]": "rbracket",
                "(": "lparen",
                ")": "rparen",
            }
            return _Token(kinds[ch], None, line, col)

        if ch == "_" and self._peek(1) == ":":
            m = _BNODE_LABEL_RE.match(text, self.pos + 2)
            if not m:
                self.error("bad blank node label", line, col)
            label = m.group(0)
            while label.endswith("."):
                label = label[:-1]
            self._advance(2 + len(label))
            return _Token("bnode", label, line, col)

        if ch.isdigit() or (ch in "+-" and (self._peek(1).isdigit() or self._peek(1) == ".")):
            return self._number(line, col)

        return self._pname_or_keyword(line, col)

    def _string(self, line: int, col: int) -> _Token:
        text = self.text
        self._advance(1)
        out: list[str] = []
        while True:
            if self.pos >= len(text):
                self.error("unterminated string", line, col)
            ch = text[self.pos]
            if ch == '"':
                self._advance(1)
                return _Token("string", "".join(out), line, col)
            if ch in "\r\n":
                self.error("newline in string", line, col)
            if ch == "\\":
                esc = self._peek(1)
                if esc in _ESCAPES:
                    out.append(_ESCAPES[esc])
                    self._advance(2)
                elif esc == "u" or esc == "U":
                    width = 4 if esc == "u" else 8
                    digits = text[self.pos + 2 : self.pos + 2 + width]
                    if len(digits) != width or not re.fullmatch(r"[0-9A-Fa-f]+", digits):
                        self.error("bad unicode escape", line, col)
                    out.append(chr(int(digits, 16)))
                    self._advance(2 + width)
                else:
                    self.error(f"bad escape \\{esc}", line, col)
                continue
            out.append(ch)
            self._advance(1)

    def _number(self, line: int, col: int) -> _Token:
        m = _NUMBER_RE.match(self.text, self.pos)
        if not m:
            self.error("bad numeric literal", line, col)
        lexical = m.group(0)
        if "e" in lexical or "E" in lexical:
            datatype = XSD_DOUBLE
        elif "." in lexical:
            datatype = XSD_DECIMAL
        else:
            datatype = XSD_INTEGER
        self._advance(len(lexical))
        return _Token("number", Literal(lexical, datatype), line, col)

    def _pname_or_keyword(self, line: int, col: int) -> _Token:
        text = self.text
        start = self.pos
        if text[self.pos] == ":":
            prefix = ""
            self._advance(1)
        else:
            m = _PNAME_PREFIX_RE.match(text, self.pos)
            if not m:
                self.error(f"unexpected character {text[self.pos]!r}", line, col)
            word = m.group(0)
            while word.endswith("."):
                word = word[:-1]
            self._advance(len(word))
            if self._peek() != ":":
                if word == "a":
                    return _Token("a", None, line, col)
                if word in ("true", "false"):
                    return _Token("boolean", Literal(word, XSD_BOOLEAN), line, col)
                self.error(f"unexpected token {word!r}", line, col)
            prefix = word
            self._advance(1)
        local = self._local_name()
        return _Token("pname", (prefix, local), line, col)

    def _local_name(self) -> str:
        out: list[str] = []
        while True:
            ch = self._peek()
            if ch in _LOCAL_CHARS:
                out.append(ch)
                self._advance(1)
            elif ch == "." and self._peek(1) in _LOCAL_CHARS:
                out.append(ch)
                self._advance(1)
            else:
                return "".join(out)


class _Parser:
    def __init__(self, tokens: list[_Token], base_iri: str | None, used_labels: set[str]):
        self.tokens = tokens
        self.index = 0
        self.base = base_iri
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        self.used_labels = used_labels
        self.bnode_counter = 0

    def error(self, message: str, tok: _Token):
        raise TurtleParseError(message, tok.line, tok.col)

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def next(self) -> _Token:
        tok = self.tokens[self.index]
        if tok.kind != "eof":
            self.index += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            self.error(f"expected {kind}, found {tok.kind}", tok)
        return tok

    def fresh_bnode(self) -> BlankNode:
        while True:
            label = f"genid{self.bnode_counter}"
            self.bnode_counter += 1
            if label not in self.used_labels:
                self.used_labels.add(label)
                return BlankNode(label)

    def resolve_iri(self, raw: str, tok: _Token) -> Iri:
        if _SCHEME_RE.match(raw):
            return Iri(raw)
        if self.base is None:
            self.error(f"relative IRI {raw!r} with no base", tok)
        return Iri(urljoin(self.base, raw))

    def expand_pname(self, prefix: str, local: str, tok: _Token) -> Iri:
        if prefix not in self.prefixes:
            self.error(f"undefined prefix {prefix + ':'!r}", tok)
        return Iri(self.prefixes[prefix] + local)

    def parse(self) -> None:
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return
            if tok.kind == "at_prefix":
                self.next()
                name_tok = self.expect("pname")
                prefix, local = name_tok.value  # type: ignore[misc]
                if local:
                    self.error("prefix declaration must end with ':'", name_tok)
                iri_tok = self.expect("iriref")
                self.prefixes[prefix] = self.resolve_iri(str(iri_tok.value), iri_tok).value
                self.expect("dot")
                continue
            if tok.kind == "at_base":
                self.next()
                iri_tok = self.expect("iriref")
                self.base = self.resolve_iri(str(iri_tok.value), iri_tok).value
                self.expect("dot")
                continue
            self.parse_statement()

    def parse_statement(self) -> None:
        tok = self.peek()
        if tok.kind == "lbracket":
            subject = self.parse_bnode_property_list()
            if self.peek().kind == "dot":  # bare [ ... ] .
                self.next()
                return
            self.parse_predicate_object_list(subject)
        else:
            subject = self.parse_subject()
            self.parse_predicate_object_list(subject)
        self.expect("dot")

    def parse_subject(self) -> Iri | BlankNode:
        tok = self.next()
        if tok.kind == "iriref":
            return self.resolve_iri(str(tok.value), tok)
        if tok.kind == "pname":
            prefix, local = tok.value  # type: ignore[misc]
            return self.expand_pname(prefix, local, tok)
        if tok.kind == "bnode":
            label = str(tok.value)
            self.used_labels.add(label)
            return BlankNode(label)
        if tok.kind == "lparen":
            return self.parse_collection()
        self.error(f"bad subject ({tok.kind})", tok)
        raise AssertionError  # unreachable

    def parse_predicate_object_list(self, subject: Iri | BlankNode) -> None:
        while True:
            predicate = self.parse_verb()
            self.parse_object_list(subject, predicate)
            if self.peek().kind != "semicolon":
                return
            while self.peek().kind == "semicolon":
                self.next()
            if self.peek().kind in ("dot", "rbracket"):
                return

    def parse_verb(self) -> Iri:
        tok = self.next()
        if tok.kind == "a":
            return RDF_TYPE
        if tok.kind == "iriref":
            return self.resolve_iri(str(tok.value), tok)
        if tok.kind == "pname":
            prefix, local = tok.value  # type: ignore[misc]
            return self.expand_pname(prefix, local, tok)
        self.error(f"bad predicate ({tok.kind})", tok)
        raise AssertionError

    def parse_object_list(self, subject: Iri | BlankNode, predicate: Iri) -> None:
        while True:
            obj = self.parse_object()
            self.triples.append(Triple(subject, predicate, obj))
            if self.peek().kind != "comma":
                return
            self.next()

    def parse_object(self) -> Term:
        tok = self.peek()
        if tok.kind == "lbracket":
            return self.parse_bnode_property_list()
        if tok.kind == "lparen":
            self.next()
            return self.parse_collection()
        tok = self.next()
        if tok.kind == "iriref":
            return self.resolve_iri(str(tok.value), tok)
        if tok.kind == "pname":
            prefix, local = tok.value  # type: ignore[misc]
            return self.expand_pname(prefix, local, tok)
        if tok.kind == "bnode":
            label = str(tok.value)
            self.used_labels.add(label)
            return BlankNode(label)
        if tok.kind in ("number", "boolean"):
            return tok.value  # type: ignore[return-value]
        if tok.kind == "string":
            return self.finish_literal(str(tok.value))
        self.error(f"bad object ({tok.kind})", tok)
        raise AssertionError

    def finish_literal(self, lexical: str) -> Literal:
        tok = self.peek()
        if tok.kind == "langtag":
            self.next()
            return Literal(lexical, RDF_LANGSTRING, str(tok.value))
        if tok.kind == "hathat":
            self.next()
            dt_tok = self.next()
            if dt_tok.kind == "iriref":
                datatype = self.resolve_iri(str(dt_tok.value), dt_tok)
            elif dt_tok.kind == "pname":
                prefix, local = dt_tok.value  # type: ignore[misc]
                datatype = self.expand_pname(prefix, local, dt_tok)
            else:
                self.error("expected datatype IRI after '^^'", dt_tok)
                raise AssertionError
            return Literal(lexical, datatype.value)
        return Literal(lexical)

    def parse_bnode_property_list(self) -> BlankNode:
        self.expect("lbracket")
        node = self.fresh_bnode()
        if self.peek().kind != "rbracket":
            self.parse_predicate_object_list(node)
        self.expect("rbracket")
        return node

    def parse_collection(self) -> Iri | BlankNode:
        # opening '(' already consumed by caller
        members: list[Term] = []
        while self.peek().kind != "rparen":
            if self.peek().kind == "eof":
                self.error("unterminated collection", self.peek())
            members.append(self.parse_object())
        self.next()  # ')'
        if not members:
            return RDF_NIL
        head = self.fresh_bnode()
        cell: Iri | BlankNode = head
        for position, member in enumerate(members):
            self.triples.append(Triple(cell, RDF_FIRST, member))
            if position == len(members) - 1:
                self.triples.append(Triple(cell, RDF_REST, RDF_NIL))
            else:
                nxt = self.fresh_bnode()
                self.triples.append(Triple(cell, RDF_REST, nxt))
                cell = nxt
        return head


@dataclass
class TurtleDocument:
    graph: Graph
    prefixes: dict[str, str]
    base: str | None


def parse_turtle_document(source: str, base_iri: str | None = None) -> TurtleDocument:
    """Parse Turtle text, keeping the prefix map for downstream rendering."""
    tokens = _Lexer(source).tokens()
    # Pre-seed with every explicit label so generated labels cannot collide
    used = set(_EXPLICIT_LABEL_RE.findall(source))
    parser = _Parser(tokens, base_iri, used)
    parser.parse()
    return TurtleDocument(Graph(parser.triples), dict(parser.prefixes), parser.base)


def parse_turtle(source: str, base_iri: str | None = None) -> Graph:
    """Parse a Turtle document into a :class:`Graph`."""
    return parse_turtle_document(source, base_iri).graph
