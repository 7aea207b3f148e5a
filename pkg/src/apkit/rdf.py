"""Turn conformant instance documents into RDF triples; N-Triples and Turtle
serialization plus an N-Triples reader."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Union

from .errors import ProfileError
from .iri import DEFAULT_PREFIXES, RDF_TYPE, XSD, compact, expand_curie, try_expand
from .ir import RangeKind, SchemaIR, effective_slot_map
from .lexical import lexical_form
from .validate import RESERVED, InstanceDocument, as_list, default_class, validate

XSD_STRING = XSD + "string"
XSD_ANYURI = XSD + "anyURI"


class IRI(str):
    __slots__ = ()

    def n3(self) -> str:
        return "<" + _escape_iri(self) + ">"


class BNode(str):
    __slots__ = ()

    def n3(self) -> str:
        return "_:" + self


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str | None = None
    language: str | None = None

    def n3(self) -> str:
        text = '"' + _escape_literal(self.lexical) + '"'
        if self.language:
            return text + "@" + self.language
        if self.datatype and self.datatype != XSD_STRING:
            return text + "^^" + IRI(self.datatype).n3()
        return text


Term = Union[IRI, BNode, Literal]
Triple = tuple


@dataclass
class TripleSet:
    triples: list[tuple[Term, IRI, Term]] = field(default_factory=list)
    base_iri: str | None = None

    def __post_init__(self):
        seen = set()
        unique = []
        for t in self.triples:
            if t not in seen:
                seen.add(t)
                unique.append(t)
        self.triples = unique
        self._seen = seen

    def add(self, s: Term, p: IRI, o: Term) -> bool:
        t = (s, p, o)
        if t in self._seen:
            return False
        self._seen.add(t)
        self.triples.append(t)
        return True

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self):
        return iter(self.triples)

    def as_set(self) -> set:
        return set(self.triples)

    def predicates(self) -> set[str]:
        return {p for _, p, _ in self.triples}


class RdfFormat(str, Enum):
    NTRIPLES = "nt"
    TURTLE = "ttl"


# escaping

_ECHAR = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r"}
_IRI_BAD = set('<>"{}|^`\\ ')


def _escape_literal(text: str) -> str:
    return "".join(_ECHAR.get(ch, ch) for ch in text)


def _escape_iri(text: str) -> str:
    out = []
    for ch in text:
        if ch in _IRI_BAD or ord(ch) <= 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


# emission


def _object_iri(value: str, prefixes: dict[str, str]) -> IRI:
    table = dict(DEFAULT_PREFIXES)
    table.update(prefixes)
    return IRI(try_expand(value, table))


class _Emitter:
    def __init__(self, ir: SchemaIR, ts: TripleSet, blank_prefix: str):
        self.ir = ir
        self.ts = ts
        self.blank_prefix = blank_prefix
        self.counter = 0

    def subject(self, node: dict) -> Term:
        if isinstance(node.get("@id"), str):
            return _object_iri(node["@id"], self.ir.prefix_map)
        label = f"{self.blank_prefix}{self.counter}"
        self.counter += 1
        return BNode(label)

    def node(self, node: dict, cls: str) -> Term:
        ir = self.ir
        s = self.subject(node)
        cls = node.get("@type") or cls
        self.ts.add(s, IRI(RDF_TYPE), IRI(ir.classes[cls].class_uri))
        slots = effective_slot_map(ir, cls)
        for key, raw in node.items():
            if key in RESERVED:
                continue
            slot = slots[key]
            p = IRI(slot.slot_uri)
            for item in as_list(raw):
                if slot.range.kind is RangeKind.DATATYPE:
                    o = self.scalar(item, slot.range.name)
                elif isinstance(item, dict):
                    o = self.node(item, default_class(slot.range))
                else:
                    o = _object_iri(item, ir.prefix_map)
                self.ts.add(s, p, o)
        return s

    def scalar(self, value, datatype: str) -> Term:
        dt = self.ir.datatype(datatype)
        if dt.base_uri == XSD_ANYURI:
            return _object_iri(str(value), self.ir.prefix_map)
        if dt.base_uri == XSD_STRING:
            return Literal(lexical_form(value))
        return Literal(lexical_form(value), dt.base_uri)


def to_triples(doc: InstanceDocument, ir: SchemaIR, blank_prefix: str = "b", check: bool = True) -> TripleSet:
    """Emit one rdf:type triple per record and one triple per slot value.

    Records without ``@id`` become blank nodes ``_:b0``, ``_:b1`` ... in
    pre-order. anyURI-valued slots (``rdf_type`` among them) produce IRI
    objects, so ``rdf_type`` adds extra rdf:type triples.
    """
    if check:
        report = validate(doc, ir)
        if not report.conformant:
            raise ProfileError("NOT_CONFORMANT", f"{doc.source_name} does not conform to {ir.id}", report)
    ts = TripleSet()
    _Emitter(ir, ts, blank_prefix).node(doc.root, doc.root_class)
    return ts


def materialize_super_properties(ts: TripleSet, ir: SchemaIR) -> TripleSet:
    """Add a triple for every super-slot URI of each sub-slot predicate."""
    ancestors: dict[str, set[str]] = {}
    for name, slot in ir.slots.items():
        chain = {ir.slots[a].slot_uri for a in ir.slot_ancestors(name)} - {slot.slot_uri}
        if chain:
            ancestors.setdefault(slot.slot_uri, set()).update(chain)
    out = TripleSet(list(ts.triples), ts.base_iri)
    for s, p, o in ts.triples:
        for uri in sorted(ancestors.get(p, ())):
            out.add(s, IRI(uri), o)
    return out


# serialization


def serialize_ntriples(ts: TripleSet) -> str:
    lines = sorted(f"{s.n3()} {p.n3()} {o.n3()} ." for s, p, o in ts.triples)
    return "".join(line + "\n" for line in lines)


def _turtle_term(term: Term, prefixes: dict[str, str]) -> str:
    if isinstance(term, IRI):
        short = compact(term, prefixes)
        return short if short else term.n3()
    if isinstance(term, Literal) and term.datatype and term.datatype != XSD_STRING and not term.language:
        short = compact(term.datatype, prefixes)
        if short:
            return '"' + _escape_literal(term.lexical) + '"^^' + short
    return term.n3()


def serialize_turtle(ts: TripleSet, prefixes: dict[str, str] | None = None) -> str:
    table = dict(DEFAULT_PREFIXES)
    table.update(prefixes or {})
    # One prefix per namespace, preferring the lexicographically first name.
    by_ns: dict[str, str] = {}
    for p, ns in sorted(table.items()):
        by_ns.setdefault(ns, p)
    table = {p: ns for ns, p in by_ns.items()}

    groups: dict[Term, list] = {}
    for s, p, o in ts.triples:
        groups.setdefault(s, []).append((p, o))
    used: set[str] = set()
    body = []
    for s in sorted(groups, key=lambda t: (isinstance(t, BNode), str(t))):
        by_pred: dict[str, list] = {}
        for p, o in groups[s]:
            by_pred.setdefault(p, []).append(o)
        preds = sorted(by_pred, key=lambda p: (p != RDF_TYPE, p))
        parts = []
        for p in preds:
            pt = "a" if p == RDF_TYPE else _turtle_term(IRI(p), table)
            objs = sorted((_turtle_term(o, table) for o in by_pred[p]))
            parts.append(f"{pt} " + " ,\n        ".join(objs))
        body.append(_turtle_term(s, table) + "\n    " + " ;\n    ".join(parts) + " .\n")
    text = "\n".join(body)
    for p, ns in table.items():
        if re.search(rf"(?<![\w<\"]){re.escape(p)}:", text):
            used.add(p)
    header = "".join(f"@prefix {p}: <{table[p]}> .\n" for p in sorted(used))
    return header + ("\n" if header and body else "") + text


def serialize(ts: TripleSet, fmt: RdfFormat | str = RdfFormat.NTRIPLES, prefixes: dict[str, str] | None = None) -> bytes:
    fmt = RdfFormat(fmt)
    if fmt is RdfFormat.NTRIPLES:
        return serialize_ntriples(ts).encode("utf-8")
    return serialize_turtle(ts, prefixes).encode("utf-8")


# N-Triples reader

_NT_TOKEN = re.compile(
    r"""\s*(?:
        <(?P<iri>[^>]*)>
      | _:(?P<bnode>[A-Za-z0-9_][A-Za-z0-9_.\-]*)
      | "(?P<lit>(?:[^"\\]|\\.)*)"(?:\^\^<(?P<dt>[^>]*)>|@(?P<lang>[A-Za-z]+(?:-[A-Za-z0-9]+)*))?
      | (?P<dot>\.)
    )""",
    re.VERBOSE,
)
_UNESCAPE = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|[tbnrf\"'\\])")
_SIMPLE = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape(text: str) -> str:
    def sub(m):
        code = m.group(1)
        if code[0] in "uU":
            return chr(int(code[1:], 16))
        return _SIMPLE[code]

    return _UNESCAPE.sub(sub, text)


def parse_ntriples(text: str | bytes) -> TripleSet:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    triples = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        terms: list[Term] = []
        pos = 0
        while pos < len(line):
            m = _NT_TOKEN.match(line, pos)
            if not m or m.end() == pos:
                raise ProfileError("MALFORMED_NTRIPLES", f"line {lineno}: cannot parse at column {pos + 1}")
            pos = m.end()
            if m.group("dot"):
                break
            if m.group("iri") is not None:
                terms.append(IRI(_unescape(m.group("iri"))))
            elif m.group("bnode") is not None:
                terms.append(BNode(m.group("bnode")))
            else:
                terms.append(Literal(_unescape(m.group("lit")), m.group("dt"), m.group("lang")))
        if len(terms) != 3 or not isinstance(terms[1], IRI) or isinstance(terms[0], Literal):
            raise ProfileError("MALFORMED_NTRIPLES", f"line {lineno}: expected subject, predicate, object")
        s, p, o = terms
        if isinstance(o, Literal) and o.datatype == XSD_STRING:
            o = Literal(o.lexical)
        triples.append((s, p, o))
    return TripleSet(triples)


def merge_triplesets(sets: Iterable[TripleSet]) -> TripleSet:
    out = TripleSet()
    for ts in sets:
        for t in ts:
            out.add(*t)
    return out


def expand(value: str, ir: SchemaIR) -> str:
    table = dict(DEFAULT_PREFIXES)
    table.update(ir.prefix_map)
    return expand_curie(value, table)
