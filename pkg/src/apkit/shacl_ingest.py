"""Read SHACL shapes serialized as JSON-LD and compile them into a SchemaIR.

Only a documented subset of JSON-LD is understood: a top-level ``@context``
with prefix and term definitions, ``@graph`` arrays, ``@id``/``@type``,
nested node objects, value objects and ``@list`` (for ``sh:or``). Anything
else is reported as a warning and skipped.

Porting rules: node shapes targeting an ontology class become classes, shapes
designating an XSD datatype become datatypes, property shapes become slots.
``sh:targetClass`` and ``sh:path`` are kept verbatim as class and slot URIs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ProfileError
from .iri import (
    DEFAULT_PREFIXES,
    META,
    RDF,
    RDFS,
    SH,
    XSD,
    NameAllocator,
    expand_curie,
    is_absolute_iri,
    is_blank,
    local_name,
    snake_case,
)
from .ir import (
    BUILTIN_DATATYPES,
    SUPPORTED_XSD,
    UNBOUNDED,
    ClassDef,
    DatatypeDef,
    RangeSpec,
    SchemaIR,
    SlotDef,
    SlotUsage,
    inherited_slot,
)
from .report import ValidationReport

# Keys whose plain-string values are read as IRIs even without @type coercion.
_IRI_KEYS = {
    SH + "targetClass",
    SH + "path",
    SH + "class",
    SH + "datatype",
    SH + "node",
    SH + "nodeKind",
    SH + "property",
    RDF + "type",
    META + "parent",
    META + "mixin",
    META + "mapping",
}

_SUPPORTED_SH = {
    "targetClass", "property", "path", "minCount", "maxCount", "class",
    "datatype", "or", "node", "nodeKind", "pattern",
}
_ANNOTATION_SH = {
    "name", "description", "order", "group", "severity", "message",
    "deactivated", "defaultValue", "NodeShape", "PropertyShape",
}

_DATE_LIKE = {XSD + "date", XSD + "dateTime", XSD + "gYear", XSD + "gYearMonth"}
_DATATYPE_ALIASES = {
    RDF + "langString": "string",
    RDF + "PlainLiteral": "string",
    RDFS + "Literal": "string",
    XSD + "normalizedString": "string",
    XSD + "token": "string",
    XSD + "nonNegativeInteger": "integer",
    XSD + "positiveInteger": "integer",
    XSD + "int": "integer",
    XSD + "long": "integer",
    XSD + "double": "decimal",
    XSD + "float": "decimal",
    XSD + "gYear": "date",
    XSD + "gYearMonth": "date",
}


# parsed graph


@dataclass
class Value:
    """One object of a JSON-LD property: an IRI, a literal, a node or a list."""

    kind: str  # "iri" | "literal" | "node" | "list"
    value: Any

    @property
    def text(self) -> str:
        return self.value if isinstance(self.value, str) else str(self.value)


@dataclass
class PropertyShape:
    id: str
    path: str | None = None
    name: str | None = None
    min_count: int | None = None
    max_count: int | None = None
    class_constraints: list[str] = field(default_factory=list)
    datatype_constraints: list[str] = field(default_factory=list)
    or_branches: list[dict] = field(default_factory=list)
    node_refs: list[str] = field(default_factory=list)
    node_kind: str | None = None
    pattern: str | None = None
    description: str | None = None
    inherited: bool = False
    super_slot: str | None = None
    range_hint: list[str] = field(default_factory=list)
    mappings: list[str] = field(default_factory=list)


@dataclass
class NodeShape:
    id: str
    target_class: str | None = None
    property_shapes: list[PropertyShape] = field(default_factory=list)
    description: str | None = None
    datatype: str | None = None
    name: str | None = None
    parents: list[str] = field(default_factory=list)
    mixins: list[str] = field(default_factory=list)
    is_mixin: bool = False
    is_abstract: bool = False
    lexical_rule: str | None = None
    pattern: str | None = None


@dataclass
class ShapeGraph:
    prefix_map: dict[str, str] = field(default_factory=dict)
    node_shapes: list[NodeShape] = field(default_factory=list)
    parse_warnings: list[str] = field(default_factory=list)
    # Property shapes standing on their own (not attached to a node shape).
    slot_declarations: list[PropertyShape] = field(default_factory=list)

    def node_shape(self, shape_id: str) -> NodeShape | None:
        for ns in self.node_shapes:
            if ns.id == shape_id:
                return ns
        return None

    def to_jsonld(self) -> dict:
        """Re-serialize to the JSON-LD subset that :func:`parse_jsonld` reads."""
        return _graph_to_jsonld(self)


# JSON-LD subset reader


class _Reader:
    def __init__(self, context_overrides: dict | None):
        self.prefixes: dict[str, str] = {}
        self.terms: dict[str, dict] = {}
        self.overrides = context_overrides or {}
        self.warnings: list[str] = []
        self.nodes: dict[str, dict[str, list[Value]]] = {}
        self.order: list[str] = []
        self.top: list[str] = []
        self.counters = {"ps": 0, "ns": 0, "b": 0}

    # context

    def load_context(self, ctx) -> None:
        if ctx is None:
            return
        if isinstance(ctx, list):
            for item in ctx:
                self.load_context(item)
            return
        if isinstance(ctx, str):
            if ctx in self.overrides:
                self.load_context(self.overrides[ctx])
                return
            raise ProfileError(
                "MISSING_CONTEXT", f"remote @context {ctx!r} is not supported; supply a local override"
            )
        if not isinstance(ctx, dict):
            raise ProfileError("MALFORMED_JSON", "@context must be an object, string or array")
        if "@context" in ctx and len(ctx) == 1:
            self.load_context(ctx["@context"])
            return
        defs = {}
        for key, val in ctx.items():
            if key.startswith("@"):
                if key not in ("@version", "@language"):
                    self.warnings.append(f"unsupported @context keyword {key!r} ignored")
                continue
            if isinstance(val, str):
                defs[key] = {"@id": val}
            elif isinstance(val, dict) and "@id" in val:
                defs[key] = dict(val)
            else:
                self.warnings.append(f"unsupported term definition for {key!r} ignored")
        # Plain prefixes first, so term definitions may use them.
        for key, d in defs.items():
            target = d["@id"]
            if ":" not in key and not d.get("@type") and target[-1:] in ("#", "/", ":", "_"):
                self.prefixes[key] = self._expand_target(target)
        for key, d in defs.items():
            if key in self.prefixes:
                continue
            self.terms[key] = {"@id": self._expand_target(d["@id"]), "@type": d.get("@type")}

    def _expand_target(self, target: str) -> str:
        if ":" in target:
            p, rest = target.split(":", 1)
            if not rest.startswith("//") and p in self.prefixes:
                return self.prefixes[p] + rest
            if not rest.startswith("//") and p in DEFAULT_PREFIXES:
                return DEFAULT_PREFIXES[p] + rest
        return target

    def table(self) -> dict[str, str]:
        table = dict(DEFAULT_PREFIXES)
        table.update(self.prefixes)
        return table

    def expand(self, value: str) -> str:
        if value in self.terms:
            return self.terms[value]["@id"]
        return expand_curie(value, self.table())

    def expand_key(self, key: str) -> str:
        if key in self.terms:
            return self.terms[key]["@id"]
        if ":" not in key:
            raise ProfileError("MISSING_CONTEXT", f"key {key!r} is not a term, compact IRI or IRI")
        return expand_curie(key, self.table())

    # nodes

    def fresh(self, kind: str) -> str:
        self.counters[kind] += 1
        return f"_:{kind}{self.counters[kind]}"

    def read_node(self, obj: dict, kind: str) -> str:
        node_id = obj.get("@id")
        node_id = self.expand(node_id) if isinstance(node_id, str) else self.fresh(kind)
        props = self.nodes.get(node_id)
        if props is None:
            props = self.nodes[node_id] = {}
            self.order.append(node_id)
        for key, raw in obj.items():
            if key == "@id" or key == "@context":
                continue
            if key == "@type":
                types = raw if isinstance(raw, list) else [raw]
                props.setdefault(RDF + "type", []).extend(
                    Value("iri", self.expand(t)) for t in types
                )
                continue
            if key.startswith("@"):
                self.warnings.append(f"unsupported JSON-LD keyword {key!r} ignored on {node_id}")
                continue
            pred = self.expand_key(key)
            coerce = (self.terms.get(key) or {}).get("@type") == "@id" or pred in _IRI_KEYS
            items = raw if isinstance(raw, list) else [raw]
            child_kind = "ps" if pred == SH + "property" else "b"
            for item in items:
                props.setdefault(pred, []).append(self.read_value(item, coerce, child_kind))
        return node_id

    def read_value(self, item, coerce: bool, child_kind: str) -> Value:
        if isinstance(item, dict):
            if "@value" in item:
                return Value("literal", item["@value"])
            if "@list" in item:
                inner = item["@list"]
                return Value("list", [self.read_value(i, coerce, "b") for i in inner])
            if "@set" in item:
                inner = item["@set"]
                inner = inner if isinstance(inner, list) else [inner]
                return Value("list", [self.read_value(i, coerce, child_kind) for i in inner])
            if set(item) == {"@id"}:
                return Value("iri", self.expand(item["@id"]))
            return Value("node", self.read_node(item, child_kind))
        if isinstance(item, list):
            return Value("list", [self.read_value(i, coerce, child_kind) for i in item])
        if isinstance(item, str) and coerce:
            return Value("iri", self.expand(item))
        return Value("literal", item)


def _load_json(document) -> Any:
    if isinstance(document, (dict, list)):
        return document
    if isinstance(document, Path):
        document = document.read_bytes()
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ProfileError("MALFORMED_JSON", f"input is not UTF-8: {exc}") from exc
    try:
        return json.loads(document)
    except json.JSONDecodeError as exc:
        raise ProfileError("MALFORMED_JSON", str(exc)) from exc


def parse_jsonld(document, context_overrides: dict | None = None) -> ShapeGraph:
    """Parse a JSON-LD SHACL document (bytes, str, Path or decoded JSON).

    ``context_overrides`` maps remote context IRIs to local context objects.
    """
    data = _load_json(document)
    reader = _Reader(context_overrides)
    if isinstance(data, dict):
        reader.load_context(data.get("@context"))
        if "@graph" in data:
            graph = data["@graph"]
            top = graph if isinstance(graph, list) else [graph]
            rest = {k: v for k, v in data.items() if k not in ("@context", "@graph", "@id")}
            if rest:
                reader.warnings.append("properties beside @graph on the top-level object ignored")
        else:
            top = [{k: v for k, v in data.items() if k != "@context"}]
    elif isinstance(data, list):
        top = data
    else:
        raise ProfileError("MALFORMED_JSON", "top level must be an object or array")
    for obj in top:
        if not isinstance(obj, dict):
            reader.warnings.append("non-object entry in @graph ignored")
            continue
        if "@context" in obj:
            reader.load_context(obj["@context"])
        is_ps = _declares(obj, reader, "PropertyShape")
        reader.top.append(reader.read_node(obj, "ps" if is_ps else "ns"))
    return _build_graph(reader)


def _declares(obj: dict, reader: _Reader, local: str) -> bool:
    types = obj.get("@type", [])
    types = types if isinstance(types, list) else [types]
    for t in types:
        try:
            if reader.expand(t) == SH + local:
                return True
        except ProfileError:
            pass
    return False


def _first(props, pred, kind=None):
    for v in props.get(pred, []):
        if kind is None or v.kind == kind:
            return v
    return None


def _literal(props, pred):
    v = _first(props, pred)
    if v is None:
        return None
    return v.text if v.kind != "node" else None


def _int(props, pred, warnings, where):
    v = _first(props, pred)
    if v is None:
        return None
    try:
        return int(v.value)
    except (TypeError, ValueError):
        warnings.append(f"{where}: non-integer {local_name(pred)} {v.value!r} ignored")
        return None


def _bool(props, pred) -> bool:
    v = _first(props, pred)
    return v is not None and v.value in (True, "true", "True", 1)


def _iris(props, pred) -> list[str]:
    return [v.value for v in props.get(pred, []) if v.kind == "iri"]


def _types(props) -> set[str]:
    return {v.value for v in props.get(RDF + "type", []) if v.kind == "iri"}


def _check_keys(node_id: str, props: dict, warnings: list[str]) -> None:
    for pred in props:
        if pred.startswith(SH):
            term = pred[len(SH):]
            if term not in _SUPPORTED_SH and term not in _ANNOTATION_SH:
                warnings.append(f"{node_id}: unsupported SHACL constraint sh:{term} ignored")


def _build_graph(reader: _Reader) -> ShapeGraph:
    warnings = reader.warnings
    nodes = reader.nodes
    referenced_ps: set[str] = set()
    for props in nodes.values():
        for v in props.get(SH + "property", []):
            if v.kind in ("iri", "node"):
                referenced_ps.add(v.value)

    ps_cache: dict[str, PropertyShape] = {}

    def prop_shape(ps_id: str) -> PropertyShape:
        if ps_id in ps_cache:
            return ps_cache[ps_id]
        props = nodes.get(ps_id, {})
        _check_keys(ps_id, props, warnings)
        ps = PropertyShape(id=ps_id)
        path = _first(props, SH + "path")
        if path is not None:
            if path.kind == "iri":
                ps.path = path.value
            else:
                warnings.append(f"{ps_id}: complex sh:path expressions are not supported")
        ps.name = _literal(props, SH + "name")
        ps.min_count = _int(props, SH + "minCount", warnings, ps_id)
        ps.max_count = _int(props, SH + "maxCount", warnings, ps_id)
        ps.class_constraints = _iris(props, SH + "class")
        ps.datatype_constraints = _iris(props, SH + "datatype")
        ps.node_refs = _iris(props, SH + "node")
        kind = _first(props, SH + "nodeKind", "iri")
        ps.node_kind = kind.value if kind else None
        ps.pattern = _literal(props, SH + "pattern")
        ps.description = _literal(props, SH + "description") or _literal(props, RDFS + "comment")
        for v in props.get(SH + "or", []):
            members = v.value if v.kind == "list" else [v]
            for m in members:
                mprops = nodes.get(m.value, {}) if m.kind == "node" else {}
                ps.or_branches.append(
                    {
                        "class": _iris(mprops, SH + "class"),
                        "datatype": _iris(mprops, SH + "datatype"),
                    }
                )
        ps.inherited = _bool(props, META + "inherited")
        ps.super_slot = _literal(props, META + "superSlot")
        ps.range_hint = [v.text for v in props.get(META + "rangeClass", []) if v.kind == "literal"]
        ps.mappings = _iris(props, META + "mapping")
        ps_cache[ps_id] = ps
        return ps

    graph = ShapeGraph(prefix_map=dict(reader.prefixes), parse_warnings=warnings)
    for node_id in reader.top:
        props = nodes[node_id]
        types = _types(props)
        if SH + "PropertyShape" in types or (SH + "path" in props and SH + "NodeShape" not in types):
            if node_id not in referenced_ps:
                graph.slot_declarations.append(prop_shape(node_id))
            continue
        _check_keys(node_id, props, warnings)
        ns = NodeShape(id=node_id)
        target = _first(props, SH + "targetClass")
        if target is not None:
            if target.kind != "iri" or not is_absolute_iri(target.value):
                warnings.append(f"{node_id}: sh:targetClass is not an IRI")
            else:
                ns.target_class = target.value
        dt = _iris(props, SH + "datatype")
        ns.datatype = dt[0] if dt else None
        ns.description = _literal(props, SH + "description") or _literal(props, RDFS + "comment")
        ns.name = _literal(props, META + "name")
        ns.parents = _iris(props, META + "parent")
        ns.mixins = _iris(props, META + "mixin")
        ns.is_mixin = _bool(props, META + "isMixin")
        ns.is_abstract = _bool(props, META + "abstract")
        ns.lexical_rule = _literal(props, META + "lexicalRule")
        ns.pattern = _literal(props, SH + "pattern")
        for v in props.get(SH + "property", []):
            if v.kind in ("iri", "node"):
                ns.property_shapes.append(prop_shape(v.value))
            else:
                warnings.append(f"{node_id}: sh:property value is not a shape")
        graph.node_shapes.append(ns)
    return graph


# re-serialization


def _ps_to_jsonld(ps: PropertyShape) -> dict:
    d: dict[str, Any] = {"@type": "sh:PropertyShape"}
    if not is_blank(ps.id):
        d["@id"] = ps.id
    if ps.path:
        d["sh:path"] = {"@id": ps.path}
    if ps.name is not None:
        d["sh:name"] = ps.name
    if ps.description is not None:
        d["sh:description"] = ps.description
    if ps.min_count is not None:
        d["sh:minCount"] = ps.min_count
    if ps.max_count is not None:
        d["sh:maxCount"] = ps.max_count
    if ps.class_constraints:
        d["sh:class"] = [{"@id": c} for c in ps.class_constraints]
    if ps.datatype_constraints:
        d["sh:datatype"] = [{"@id": c} for c in ps.datatype_constraints]
    if ps.node_refs:
        d["sh:node"] = [{"@id": c} for c in ps.node_refs]
    if ps.node_kind:
        d["sh:nodeKind"] = {"@id": ps.node_kind}
    if ps.pattern is not None:
        d["sh:pattern"] = ps.pattern
    if ps.or_branches:
        branches = []
        for b in ps.or_branches:
            entry = {}
            if b["class"]:
                entry["sh:class"] = [{"@id": c} for c in b["class"]]
            if b["datatype"]:
                entry["sh:datatype"] = [{"@id": c} for c in b["datatype"]]
            branches.append(entry)
        d["sh:or"] = {"@list": branches}
    if ps.inherited:
        d["meta:inherited"] = True
    if ps.super_slot:
        d["meta:superSlot"] = ps.super_slot
    if ps.range_hint:
        d["meta:rangeClass"] = list(ps.range_hint)
    if ps.mappings:
        d["meta:mapping"] = [{"@id": m} for m in ps.mappings]
    return d


def _graph_to_jsonld(graph: ShapeGraph) -> dict:
    context = {"sh": SH, "xsd": XSD, "rdfs": RDFS, "meta": META}
    context.update(graph.prefix_map)
    items = []
    for ns in graph.node_shapes:
        d: dict[str, Any] = {"@type": "sh:NodeShape"}
        if not is_blank(ns.id):
            d["@id"] = ns.id
        if ns.target_class:
            d["sh:targetClass"] = {"@id": ns.target_class}
        if ns.datatype:
            d["sh:datatype"] = {"@id": ns.datatype}
        if ns.description is not None:
            d["sh:description"] = ns.description
        if ns.name is not None:
            d["meta:name"] = ns.name
        if ns.parents:
            d["meta:parent"] = [{"@id": p} for p in ns.parents]
        if ns.mixins:
            d["meta:mixin"] = [{"@id": p} for p in ns.mixins]
        if ns.is_mixin:
            d["meta:isMixin"] = True
        if ns.is_abstract:
            d["meta:abstract"] = True
        if ns.lexical_rule:
            d["meta:lexicalRule"] = ns.lexical_rule
        if ns.pattern is not None:
            d["sh:pattern"] = ns.pattern
        if ns.property_shapes:
            d["sh:property"] = [_ps_to_jsonld(ps) for ps in ns.property_shapes]
        items.append(d)
    items.extend(_ps_to_jsonld(ps) for ps in graph.slot_declarations)
    return {"@context": context, "@graph": items}


# compilation


def _is_xsd(iri: str | None) -> bool:
    return bool(iri) and (iri.startswith(XSD) or iri in _DATATYPE_ALIASES)


class _Compiler:
    def __init__(self, shapes: ShapeGraph, report: ValidationReport):
        self.shapes = shapes
        self.report = report
        self.classes: dict[str, ClassDef] = {}
        self.slots: dict[str, SlotDef] = {}
        self.datatypes: dict[str, DatatypeDef] = {}
        self.class_by_shape: dict[str, str] = {}
        self.datatype_by_shape: dict[str, str] = {}
        self.by_uri: dict[str, list[str]] = {}
        self.slot_keys: dict[tuple, str] = {}

    def warn(self, rule, path, message):
        self.report.warn(rule, path, message)

    def error(self, rule, path, message):
        self.report.error(rule, path, message)

    def datatype_name(self, iri: str, where: str) -> str | None:
        local = iri[len(XSD):] if iri.startswith(XSD) else None
        if local in SUPPORTED_XSD:
            return local
        alias = _DATATYPE_ALIASES.get(iri)
        if alias is not None:
            if alias == "date":
                self.warn("DATATYPE_NARROWED", where, f"{iri} narrowed to date")
            return alias
        self.error("UNRESOLVED_RANGE", where, f"unsupported datatype {iri}")
        return None

    def resolve_class(self, iri: str, hints: list[str], where: str) -> str | None:
        names = self.by_uri.get(iri, [])
        if not names:
            self.error("UNRESOLVED_RANGE", where, f"no class compiled for {iri}")
            return None
        if len(names) > 1:
            for h in hints:
                if h in names:
                    return h
            self.warn("AMBIGUOUS_RANGE", where, f"{iri} matches {names}; using {names[0]}")
        return names[0]

    def range_of(self, ps: PropertyShape, where: str) -> RangeSpec:
        fallback = RangeSpec.of_datatype("string")
        for ref in ps.node_refs:
            if ref in self.datatype_by_shape:
                return RangeSpec.of_datatype(self.datatype_by_shape[ref])
            self.warn("UNSUPPORTED_CONSTRAINT", where, f"sh:node {ref} ignored")
        if ps.or_branches:
            class_iris = [c for b in ps.or_branches for c in b["class"]]
            dt_iris = [d for b in ps.or_branches for d in b["datatype"]]
            if class_iris and not dt_iris:
                names = []
                for iri in class_iris:
                    name = self.resolve_class(iri, ps.range_hint, where)
                    if name is not None and name not in names:
                        names.append(name)
                if not names:
                    return fallback
                return RangeSpec.union(names) if len(names) > 1 else RangeSpec.of_class(names[0])
            if dt_iris and not class_iris:
                if set(dt_iris) <= _DATE_LIKE:
                    return RangeSpec.of_datatype("date")
                names = {self.datatype_name(d, where) for d in dt_iris}
                if len(names) == 1 and None not in names:
                    return RangeSpec.of_datatype(names.pop())
                self.warn("DATATYPE_UNION", where, "datatype union replaced by string")
                return fallback
            self.warn("MIXED_UNION", where, "union of classes and datatypes replaced by string")
            return fallback
        if ps.class_constraints:
            if len(ps.class_constraints) > 1:
                self.warn("MULTIPLE_CLASSES", where, "several sh:class values; using the first")
            name = self.resolve_class(ps.class_constraints[0], ps.range_hint, where)
            return RangeSpec.of_class(name) if name else fallback
        if ps.datatype_constraints:
            name = self.datatype_name(ps.datatype_constraints[0], where)
            return RangeSpec.of_datatype(name) if name else fallback
        if ps.node_kind == SH + "IRI":
            return RangeSpec.of_datatype("anyURI")
        self.warn("NO_RANGE", where, "property shape has no class or datatype constraint; using string")
        return fallback

    def run(self, profile_id: str, version: str) -> SchemaIR:
        shapes = self.shapes
        for w in shapes.parse_warnings:
            self.warn("PARSE_WARNING", "", w)

        class_shapes: list[NodeShape] = []
        dt_alloc = NameAllocator(BUILTIN_DATATYPES)
        for ns in shapes.node_shapes:
            dt_iri = ns.target_class if _is_xsd(ns.target_class) else None
            if dt_iri is None and ns.target_class is None and ns.datatype:
                dt_iri = ns.datatype
            if dt_iri is not None:
                base = self.datatype_name(dt_iri, ns.id)
                if base is None:
                    continue
                name = ns.name or base
                if name in self.datatypes or (
                    name in BUILTIN_DATATYPES and BUILTIN_DATATYPES[name].base_uri != XSD + base
                ):
                    name = dt_alloc.allocate(name, key=ns.id)
                rule = ns.lexical_rule or SUPPORTED_XSD[base]
                self.datatypes[name] = DatatypeDef(name, XSD + base, rule, ns.description)
                self.datatype_by_shape[ns.id] = name
            elif ns.target_class is not None:
                class_shapes.append(ns)
            else:
                self.warn("NO_TARGET", ns.id, "node shape has neither a class nor a datatype target; skipped")

        cls_alloc = NameAllocator((*self.datatypes, *BUILTIN_DATATYPES))
        for ns in class_shapes:
            name = cls_alloc.allocate(ns.name or local_name(ns.target_class), key=ns.id)
            self.class_by_shape[ns.id] = name
            self.by_uri.setdefault(ns.target_class, []).append(name)

        slot_alloc = NameAllocator((*self.datatypes, *BUILTIN_DATATYPES, *self.class_by_shape.values()))

        def slot_name(ps: PropertyShape) -> str:
            base = snake_case(ps.name) if ps.name else snake_case(local_name(ps.path))
            return slot_alloc.allocate(base or "slot", key=(ps.path, base))

        for ps in shapes.slot_declarations:
            if not ps.path:
                self.warn("NO_PATH", ps.id, "property shape without sh:path skipped")
                continue
            name = slot_name(ps)
            self.slots[name] = SlotDef(
                name=name,
                slot_uri=ps.path,
                range=self.range_of(ps, ps.id),
                min_cardinality=ps.min_count or 0,
                max_cardinality=ps.max_count if ps.max_count is not None else UNBOUNDED,
                super_slot=ps.super_slot,
                description=ps.description,
                mappings=tuple(ps.mappings),
            )

        pending_inherited = []
        for ns in class_shapes:
            cname = self.class_by_shape[ns.id]
            own: list[str] = []
            usage: dict[str, SlotUsage] = {}
            for ps in ns.property_shapes:
                where = f"{ns.id}/{ps.id}"
                if not ps.path:
                    self.warn("NO_PATH", where, "property shape without sh:path skipped")
                    continue
                name = slot_name(ps)
                rng = self.range_of(ps, where)
                resolved = SlotDef(
                    name=name,
                    slot_uri=ps.path,
                    range=rng,
                    min_cardinality=ps.min_count or 0,
                    max_cardinality=ps.max_count if ps.max_count is not None else UNBOUNDED,
                    super_slot=ps.super_slot,
                    description=ps.description,
                    mappings=tuple(ps.mappings),
                )
                if ps.inherited:
                    pending_inherited.append((cname, name, resolved))
                    continue
                if name not in self.slots:
                    self.slots[name] = SlotDef(
                        name=name,
                        slot_uri=ps.path,
                        range=rng,
                        super_slot=ps.super_slot,
                        description=ps.description,
                        mappings=tuple(ps.mappings),
                    )
                diff = SlotUsage.diff(resolved, self.slots[name])
                if not diff.is_empty():
                    usage[name] = diff
                if name not in own:
                    own.append(name)

            def refs(iris, kind):
                out = []
                for iri in iris:
                    if iri in self.class_by_shape:
                        out.append(self.class_by_shape[iri])
                    else:
                        self.warn("UNRESOLVED_REFERENCE", ns.id, f"{kind} shape {iri} not found")
                return tuple(out)

            self.classes[cname] = ClassDef(
                name=cname,
                class_uri=ns.target_class,
                description=ns.description,
                parents=refs(ns.parents, "parent"),
                mixins=refs(ns.mixins, "mixin"),
                own_slots=tuple(own),
                is_mixin=ns.is_mixin,
                is_abstract=ns.is_abstract,
                slot_usage=usage,
            )

        if self.report.errors:
            first = self.report.errors[0]
            raise ProfileError(first.rule, first.message, self.report)

        partial = SchemaIR(
            id=profile_id,
            version=version,
            prefix_map=dict(shapes.prefix_map),
            classes=self.classes,
            slots=self.slots,
            datatypes=self.datatypes,
            check=False,
        )
        for cname, sname, resolved in pending_inherited:
            base = inherited_slot(partial, cname, sname)
            if base is None:
                self.warn("UNRESOLVED_REFERENCE", cname, f"inherited slot {sname!r} not provided by any parent")
                continue
            diff = SlotUsage.diff(resolved, base)
            if not diff.is_empty():
                self.classes[cname].slot_usage[sname] = diff

        return SchemaIR(
            id=profile_id,
            version=version,
            prefix_map=dict(shapes.prefix_map),
            classes=self.classes,
            slots=self.slots,
            datatypes=self.datatypes,
        )


def compile_shapes(
    shapes: ShapeGraph,
    profile_id: str,
    version: str = "0.0.0",
    report: ValidationReport | None = None,
) -> SchemaIR:
    """Compile a parsed shape graph into a SchemaIR.

    Warnings (skipped shapes, unsupported constraints, narrowed datatype
    unions) are appended to ``report`` when given. Unresolvable references
    raise ProfileError with the collected report attached.
    """
    report = report if report is not None else ValidationReport()
    return _Compiler(shapes, report).run(profile_id, version)


def import_shacl(path, profile_id: str | None = None, report: ValidationReport | None = None,
                 context_overrides: dict | None = None) -> SchemaIR:
    """Parse and compile a ``.jsonld`` file in one step."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ProfileError("IO_ERROR", f"cannot read {path}: {exc}") from exc
    graph = parse_jsonld(raw, context_overrides)
    name = path.name.split(".")[0]
    return compile_shapes(graph, profile_id or name, report=report)
