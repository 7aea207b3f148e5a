"""Regenerate SHACL Core shapes from a SchemaIR.

Every node and property shape gets an IRI from a :class:`ShapeIriPolicy`.
Structure that SHACL Core has no word for (class names, parents, mixins,
super-slots, lexical rules) travels as ``meta:`` annotations so that the
JSON-LD output compiles back to the same IR.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from ..errors import ProfileError
from ..iri import META, RDFS, SH, XSD, compact, is_absolute_iri
from ..ir import UNBOUNDED, RangeKind, RangeSpec, SchemaIR, SlotDef, effective_slots
from ..lexical import PATTERNS


class IriMode(str, Enum):
    FRAGMENT = "FRAGMENT"
    PATH = "PATH"


@dataclass(frozen=True)
class ShapeIriPolicy:
    base: str = "https://w3id.org/apkit/shapes"
    mode: IriMode = IriMode.FRAGMENT
    node_template: str | None = None
    property_template: str | None = None
    slot_template: str | None = None
    datatype_template: str | None = None

    @property
    def sep(self) -> str:
        return "#" if IriMode(self.mode) is IriMode.FRAGMENT else "/"

    def _fill(self, template: str | None, default: str, **names) -> str:
        pattern = template or default.replace("#", self.sep)
        iri = pattern.format(base=self.base.rstrip("#/"), **names)
        if not is_absolute_iri(iri):
            raise ProfileError("INVALID_POLICY", f"shape IRI {iri!r} is not an absolute IRI")
        return iri

    def node(self, class_name: str) -> str:
        return self._fill(self.node_template, "{base}#{ClassName}Shape", ClassName=class_name)

    def property(self, class_name: str, slot_name: str) -> str:
        return self._fill(
            self.property_template, "{base}#{ClassName}-{slot_name}", ClassName=class_name, slot_name=slot_name
        )

    def slot(self, slot_name: str) -> str:
        return self._fill(self.slot_template, "{base}#slot-{slot_name}", slot_name=slot_name)

    def datatype(self, name: str) -> str:
        return self._fill(self.datatype_template, "{base}#{Name}DatatypeShape", Name=name)


class _Id(str):
    """An IRI-valued object (as opposed to a plain string literal)."""


class _List(list):
    """An RDF collection."""


def _shape_prefixes(ir: SchemaIR) -> dict[str, str]:
    table = {"sh": SH, "xsd": XSD, "rdfs": RDFS, "meta": META}
    for p, ns in ir.prefix_map.items():
        table.setdefault(p, ns)
    return table


class _Builder:
    def __init__(self, ir: SchemaIR, policy: ShapeIriPolicy):
        self.ir = ir
        self.policy = policy
        self.items: list[dict] = []
        self.seen: dict[str, str] = {}
        by_uri: dict[str, list[str]] = {}
        for c in ir.classes.values():
            by_uri.setdefault(c.class_uri, []).append(c.name)
        self.ambiguous = {uri for uri, names in by_uri.items() if len(names) > 1}

    def claim(self, iri: str, what: str) -> str:
        if iri in self.seen:
            raise ProfileError("POLICY_COLLISION", f"{what} and {self.seen[iri]} both map to {iri}")
        self.seen[iri] = what
        return iri

    def custom_datatype(self, name: str) -> bool:
        dt = self.ir.datatype(name)
        return not (dt.base_uri == XSD + name and dt.lexical_check == _default_rule(name))

    def range_props(self, rng: RangeSpec) -> dict:
        ir = self.ir
        out: dict = {}
        if rng.kind is RangeKind.DATATYPE:
            name = rng.name
            dt = ir.datatype(name)
            if self.custom_datatype(name):
                out["sh:node"] = _Id(self.policy.datatype(name))
            if dt.base_uri == XSD + "anyURI" and not self.custom_datatype(name):
                out["sh:nodeKind"] = _Id(SH + "IRI")
            else:
                out["sh:datatype"] = _Id(dt.base_uri)
            if dt.lexical_check in PATTERNS and dt.lexical_check not in ("ANYURI", "DURATION"):
                out["sh:pattern"] = PATTERNS[dt.lexical_check]
            return out
        members = rng.members
        uris = [ir.classes[m].class_uri for m in members]
        if rng.kind is RangeKind.UNION:
            out["sh:or"] = _List({"sh:class": _Id(u)} for u in uris)
        else:
            out["sh:class"] = _Id(uris[0])
        hints = [m for m, u in zip(members, uris) if u in self.ambiguous]
        if hints:
            out["meta:rangeClass"] = hints
        return out

    def property_shape(self, iri: str, slot: SlotDef, *, declaration: bool, inherited: bool = False) -> dict:
        d: dict = {"@id": iri, "@type": "sh:PropertyShape", "sh:path": _Id(slot.slot_uri), "sh:name": slot.name}
        if slot.min_cardinality:
            d["sh:minCount"] = slot.min_cardinality
        if slot.max_cardinality != UNBOUNDED:
            d["sh:maxCount"] = int(slot.max_cardinality)
        d.update(self.range_props(slot.range))
        if declaration:
            if slot.description:
                d["sh:description"] = slot.description
            if slot.super_slot:
                d["meta:superSlot"] = slot.super_slot
            if slot.mappings:
                d["meta:mapping"] = [_Id(m) for m in slot.mappings]
        if inherited:
            d["meta:inherited"] = True
        return d

    def build(self) -> list[dict]:
        ir, policy = self.ir, self.policy
        items = self.items
        for name, dt in ir.datatypes.items():
            d = {
                "@id": self.claim(policy.datatype(name), f"datatype {name}"),
                "@type": "sh:NodeShape",
                "sh:datatype": _Id(dt.base_uri),
                "meta:name": name,
                "meta:lexicalRule": dt.lexical_check,
            }
            if dt.lexical_check in PATTERNS:
                d["sh:pattern"] = PATTERNS[dt.lexical_check]
            if dt.description:
                d["sh:description"] = dt.description
            items.append(d)
        properties: list[dict] = []
        for cname, cls in ir.classes.items():
            d = {
                "@id": self.claim(policy.node(cname), f"class {cname}"),
                "@type": "sh:NodeShape",
                "sh:targetClass": _Id(cls.class_uri),
                "meta:name": cname,
            }
            if cls.description:
                d["sh:description"] = cls.description
            if cls.parents:
                d["meta:parent"] = [_Id(policy.node(p)) for p in cls.parents]
            if cls.mixins:
                d["meta:mixin"] = [_Id(policy.node(m)) for m in cls.mixins]
            if cls.is_mixin:
                d["meta:isMixin"] = True
            if cls.is_abstract:
                d["meta:abstract"] = True
            refs = []
            own = set(cls.own_slots)
            effective = dict(effective_slots(ir, cname))
            ordered = [s for s in cls.own_slots] + [s for s in effective if s not in own]
            for sname in ordered:
                iri = self.claim(policy.property(cname, sname), f"property {cname}.{sname}")
                refs.append(_Id(iri))
                properties.append(
                    self.property_shape(iri, effective[sname], declaration=False, inherited=sname not in own)
                )
            if refs:
                d["sh:property"] = refs
            items.append(d)
        items.extend(properties)
        for sname, slot in ir.slots.items():
            iri = self.claim(policy.slot(sname), f"slot {sname}")
            items.append(self.property_shape(iri, slot, declaration=True))
        return items


def _default_rule(name: str) -> str | None:
    from ..ir import SUPPORTED_XSD

    return SUPPORTED_XSD.get(name)


def shape_graph(ir: SchemaIR, policy: ShapeIriPolicy | None = None) -> tuple[dict[str, str], list[dict]]:
    """Prefix table and shape descriptions shared by both serializations."""
    policy = policy or ShapeIriPolicy()
    return _shape_prefixes(ir), _Builder(ir, policy).build()


# JSON-LD


def _jsonld_value(value):
    if isinstance(value, _Id):
        return {"@id": str(value)}
    if isinstance(value, _List):
        return {"@list": [_jsonld_value(v) for v in value]}
    if isinstance(value, dict):
        return {k: _jsonld_value(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_jsonld_value(v) for v in value]
    return value


def gen_shacl_jsonld(ir: SchemaIR, policy: ShapeIriPolicy | None = None) -> bytes:
    prefixes, items = shape_graph(ir, policy)
    doc = {"@context": prefixes, "@graph": [_jsonld_value(i) for i in items]}
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


# Turtle


def _quote(text: str) -> str:
    out = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\r", "\\r")
    return f'"{out}"'


class _TurtleWriter:
    def __init__(self, prefixes: dict[str, str]):
        self.prefixes = prefixes

    def iri(self, iri: str) -> str:
        return compact(iri, self.prefixes) or f"<{iri}>"

    def key(self, key: str) -> str:
        if key == "@type":
            return "a"
        prefix, local = key.split(":", 1)
        return self.iri(self.prefixes[prefix] + local)

    def value(self, v, indent: str) -> str:
        if isinstance(v, _Id):
            return self.iri(v)
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, int):
            return str(v)
        if isinstance(v, _List):
            inner = indent + "    "
            return "(\n" + "".join(f"{inner}{self.value(m, inner)}\n" for m in v) + indent + ")"
        if isinstance(v, dict):
            inner = indent + "    "
            return "[\n" + self.body(v, inner) + "\n" + indent + "]"
        return _quote(str(v))

    def body(self, node: dict, indent: str) -> str:
        parts = []
        for key, raw in node.items():
            if key == "@id":
                continue
            if key == "@type":
                vals = [self.key(raw)] if isinstance(raw, str) else [self.key(r) for r in raw]
            else:
                items = raw if isinstance(raw, list) and not isinstance(raw, _List) else [raw]
                vals = [self.value(v, indent) for v in items]
            parts.append(f"{indent}{self.key(key)} " + " , ".join(vals))
        return " ;\n".join(parts)

    def document(self, items: list[dict]) -> str:
        blocks = [f"{self.iri(i['@id'])}\n" + self.body(i, "    ") + " .\n" for i in items]
        header = "".join(f"@prefix {p}: <{ns}> .\n" for p, ns in sorted(self.prefixes.items()))
        return header + "\n" + "\n".join(blocks)


def gen_shacl(ir: SchemaIR, policy: ShapeIriPolicy | None = None) -> bytes:
    """Turtle rendering of the shapes for ``ir``."""
    prefixes, items = shape_graph(ir, policy)
    return _TurtleWriter(prefixes).document(items).encode("utf-8")
