"""JSON Schema (draft 2020-12) for instance documents of one root class.

The schema mirrors the validator: a nested record may omit ``@type`` only
when it is an instance of the first class of the slot range, a string that
is an absolute IRI stands for a record described elsewhere, and a slot
value may be written as a single item or as an array.
"""

from __future__ import annotations

import json

from ..errors import ProfileError
from ..ir import UNBOUNDED, RangeKind, RangeSpec, SchemaIR, effective_slots
from ..lexical import ANYURI_PATTERN, DATETIME_PATTERN, PATTERNS

DIALECT = "https://json-schema.org/draft/2020-12/schema"

_SCALAR = ["string", "number", "integer", "boolean"]


def _rule_schema(rule: str) -> dict:
    if rule == "STRING":
        return {"type": _SCALAR}
    if rule == "DATE":
        return {"type": "string", "format": "date", "pattern": r"^\d{4}-\d{2}-\d{2}$"}
    if rule == "DATETIME":
        return {"type": "string", "pattern": DATETIME_PATTERN}
    if rule == "DECIMAL":
        return {"anyOf": [{"type": "number"}, {"type": "string", "pattern": r"^[+-]?(\d+(\.\d*)?|\.\d+)$"}]}
    if rule == "INTEGER":
        return {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": r"^[+-]?\d+$"}]}
    if rule == "BOOLEAN":
        return {"anyOf": [{"type": "boolean"}, {"enum": ["true", "false", "1", "0"]}]}
    if rule in PATTERNS:
        return {"type": "string", "pattern": PATTERNS[rule]}
    raise ProfileError("UNKNOWN_RULE", f"no JSON Schema mapping for lexical rule {rule!r}")


def _ref(name: str) -> dict:
    return {"$ref": f"#/$defs/{name}"}


class _Generator:
    def __init__(self, ir: SchemaIR):
        self.ir = ir
        self.defs: dict[str, dict] = {}
        self.pending: list[str] = []

    def want(self, cls: str) -> None:
        if cls not in self.defs and cls not in self.pending:
            self.pending.append(cls)

    def range_schema(self, rng: RangeSpec) -> dict:
        ir = self.ir
        if rng.kind is RangeKind.DATATYPE:
            return _ref(rng.name) if rng.name in ir.datatypes else _rule_schema(ir.datatype(rng.name).lexical_check)
        default = rng.members[0]
        branches = []
        seen = set()
        for member in rng.members:
            for c in ir.descendants(member):
                if c in seen or not ir.classes[c].instantiable:
                    continue
                seen.add(c)
                self.want(c)
                if c == default:
                    branches.append(_ref(c))
                else:
                    branches.append({"allOf": [_ref(c)], "required": ["@type"]})
        branches.append({"type": "string", "pattern": ANYURI_PATTERN})
        return {"anyOf": branches}

    def slot_schema(self, slot) -> dict:
        item = self.range_schema(slot.range)
        lo, hi = slot.min_cardinality, slot.max_cardinality
        array: dict = {"type": "array", "items": item}
        if lo:
            array["minItems"] = lo
        if hi != UNBOUNDED:
            array["maxItems"] = int(hi)
        options = []
        if lo <= 1 <= hi:
            options.append(item)
        options.append(array)
        if lo == 0:
            options.append({"type": "null"})
        return {"anyOf": options}

    def class_schema(self, name: str) -> dict:
        cls = self.ir.classes[name]
        props: dict = {}
        required = []
        for sname, slot in effective_slots(self.ir, name):
            props[sname] = self.slot_schema(slot)
            if slot.min_cardinality >= 1:
                required.append(sname)
        d: dict = {"type": "object"}
        if cls.description:
            d["description"] = cls.description
        # Reserved keys sit apart from slot properties.
        d["patternProperties"] = {"^@id$": {"type": "string"}, "^@type$": {"const": name}}
        if props:
            d["properties"] = props
        if required:
            d["required"] = required
        d["additionalProperties"] = False
        return d

    def run(self, root_class: str) -> dict:
        ir = self.ir
        root = self.range_schema(RangeSpec.of_class(root_class))
        while self.pending:
            name = self.pending.pop(0)
            self.defs[name] = self.class_schema(name)
        for name, dt in ir.datatypes.items():
            d = _rule_schema(dt.lexical_check)
            if dt.description:
                d = {"description": dt.description, **d}
            self.defs[name] = d
        ordered = {n: self.defs[n] for n in (*ir.classes, *ir.datatypes) if n in self.defs}
        return {
            "$schema": DIALECT,
            "$id": f"urn:apkit:{ir.id}:{root_class}",
            "title": f"{root_class} ({ir.id} {ir.version})",
            **root,
            "$defs": ordered,
        }


def jsonschema_dict(ir: SchemaIR, root_class: str) -> dict:
    if root_class not in ir.classes:
        raise ProfileError("UNKNOWN_ROOT_CLASS", f"{root_class!r} is not a class of {ir.id}")
    return _Generator(ir).run(root_class)


def gen_jsonschema(ir: SchemaIR, root_class: str) -> bytes:
    return (json.dumps(jsonschema_dict(ir, root_class), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def jsonld_context(ir: SchemaIR) -> dict:
    """Static JSON-LD context mapping slot names to slot URIs."""
    ctx: dict = dict(sorted(ir.prefix_map.items()))
    for name, slot in ir.slots.items():
        entry: dict = {"@id": slot.slot_uri}
        if slot.range.kind is not RangeKind.DATATYPE or ir.datatype(slot.range.name).lexical_check == "ANYURI":
            entry["@type"] = "@id"
        elif ir.datatype(slot.range.name).base_uri != "http://www.w3.org/2001/XMLSchema#string":
            entry["@type"] = ir.datatype(slot.range.name).base_uri
        ctx[name] = entry
    for name, cls in ir.classes.items():
        ctx[name] = cls.class_uri
    return {"@context": ctx}
