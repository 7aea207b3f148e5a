"""Validate instance documents against a compiled profile, and project
extension-layer documents down to a base profile."""

from __future__ import annotations

import datetime as _dt
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from .errors import ProfileError
from .iri import is_absolute_iri
from .ir import RangeKind, RangeSpec, SchemaIR, effective_slot_map, subsumes
from .lexical import lexical_check
from .report import ValidationReport

RESERVED = ("@type", "@id")


@dataclass
class InstanceDocument:
    root_class: str
    root: Any
    source_name: str = "<memory>"


def _normalize(value, where: str):
    """Plain maps/lists/scalars with string keys; YAML dates become ISO text."""
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            if not isinstance(k, str):
                raise ProfileError("MALFORMED_PAYLOAD", f"{where}: map key {k!r} is not a string")
            if k in RESERVED and isinstance(v, (dict, list)):
                raise ProfileError("MALFORMED_PAYLOAD", f"{where}/{k}: reserved key must be a scalar")
            out[k] = _normalize(v, f"{where}/{k}")
        return out
    if isinstance(value, list):
        return [_normalize(v, f"{where}/{i}") for i, v in enumerate(value)]
    if isinstance(value, (_dt.date, _dt.datetime)):
        return value.isoformat()
    if value is None or isinstance(value, (str, int, float, bool)):
        return value
    raise ProfileError("MALFORMED_PAYLOAD", f"{where}: unsupported value {value!r}")


def make_document(data, root_class: str, source_name: str = "<memory>") -> InstanceDocument:
    if not isinstance(data, dict):
        raise ProfileError("MALFORMED_PAYLOAD", f"{source_name}: top level must be a mapping")
    return InstanceDocument(root_class, _normalize(data, ""), source_name)


def parse_instance(text: str, root_class: str, source_name: str = "<memory>", fmt: str | None = None) -> InstanceDocument:
    """Parse YAML or JSON text (JSON is tried when ``fmt`` is ``json``)."""
    try:
        data = json.loads(text) if fmt == "json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ProfileError("MALFORMED_PAYLOAD", f"{source_name}: {exc}") from exc
    if data is None:
        data = {}
    return make_document(data, root_class, source_name)


def load_instance(path, root_class: str) -> InstanceDocument:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProfileError("IO_ERROR", f"cannot read {path}: {exc}") from exc
    fmt = "json" if path.suffix.lower() == ".json" else "yaml"
    return parse_instance(text, root_class, str(path), fmt)


def as_list(value) -> list:
    if value is None:
        return []
    return value if isinstance(value, list) else [value]


def default_class(rng: RangeSpec) -> str:
    """Class assumed for a nested record that carries no ``@type``."""
    return rng.members[0]


def _item_path(path: str, key: str, raw, i: int) -> str:
    return f"{path}/{key}/{i}" if isinstance(raw, list) else f"{path}/{key}"


class _Validator:
    def __init__(self, ir: SchemaIR, report: ValidationReport):
        self.ir = ir
        self.report = report

    def node(self, value, rng: RangeSpec, path: str) -> None:
        ir = self.ir
        if isinstance(value, str) and is_absolute_iri(value):
            return  # reference to a record described elsewhere
        if not isinstance(value, dict):
            self.report.error(
                "RANGE_CLASS", path or "/", f"expected a {rng} record or an IRI reference, got {value!r}"
            )
            return
        claimed = value.get("@type")
        if claimed is not None:
            if not isinstance(claimed, str) or claimed not in ir.classes:
                self.report.error("RANGE_CLASS", path or "/", f"@type {claimed!r} is not a class of {ir.id}")
                return
            cls = claimed
        else:
            cls = default_class(rng)
        if not ir.classes[cls].instantiable:
            kind = "mixin" if ir.classes[cls].is_mixin else "abstract class"
            self.report.error("ABSTRACT_INSTANTIATION", path or "/", f"{cls} is a {kind} and cannot be instantiated")
            return
        if claimed is not None and not any(subsumes(ir, m, cls) for m in rng.members):
            self.report.error("RANGE_CLASS", path or "/", f"{cls} is not a {rng}")
            return
        ident = value.get("@id")
        if ident is not None and not isinstance(ident, str):
            self.report.error("RESERVED_KEY", f"{path}/@id", "@id must be a string")

        slots = effective_slot_map(ir, cls)
        for key, raw in value.items():
            if key in RESERVED:
                continue
            kpath = f"{path}/{key}"
            slot = slots.get(key)
            if slot is None:
                self.report.error("UNKNOWN_SLOT", kpath, f"{cls} has no slot {key!r}")
                continue
            items = as_list(raw)
            self.cardinality(slot, len(items), kpath)
            for i, item in enumerate(items):
                ipath = _item_path(path, key, raw, i)
                if slot.range.kind is RangeKind.DATATYPE:
                    self.scalar(item, slot.range.name, ipath)
                else:
                    self.node(item, slot.range, ipath)
        for name, slot in slots.items():
            if name not in value:
                self.cardinality(slot, 0, f"{path}/{name}")

    def cardinality(self, slot, count: int, path: str) -> None:
        if count < slot.min_cardinality or count > slot.max_cardinality:
            hi = "*" if slot.max_cardinality == float("inf") else slot.max_cardinality
            self.report.error(
                "CARDINALITY", path, f"{count} value(s) for {slot.name}; expected {slot.min_cardinality}..{hi}"
            )

    def scalar(self, item, datatype: str, path: str) -> None:
        dt = self.ir.datatype(datatype)
        if isinstance(item, (dict, list)) or item is None:
            self.report.error("RANGE_DATATYPE", path, f"expected a {datatype} value, got a structure")
        elif not lexical_check(dt.lexical_check, item):
            self.report.error("RANGE_DATATYPE", path, f"{item!r} is not a valid {datatype}")


def validate(doc: InstanceDocument, ir: SchemaIR) -> ValidationReport:
    """Check ``doc`` against ``ir`` and collect every finding (no fail-fast)."""
    if doc.root_class not in ir.classes:
        raise ProfileError("UNKNOWN_ROOT_CLASS", f"{doc.root_class!r} is not a class of {ir.id}")
    report = ValidationReport()
    _Validator(ir, report).node(doc.root, RangeSpec.of_class(doc.root_class), "")
    return report


# projection


def _base_class(ext: SchemaIR, base: SchemaIR, cls: str, wanted: RangeSpec | None) -> str | None:
    """Nearest ancestor of ``cls`` (itself included) known to ``base``,
    preferring one that fits the range expected by ``base``."""
    candidates = [
        c for c in (cls, *ext.ancestors(cls)) if c in base.classes and base.classes[c].instantiable
    ]
    if not candidates:
        return None
    if wanted is not None:
        for c in candidates:
            if any(subsumes(base, m, c) for m in wanted.members):
                return c
    return candidates[0]


def _project(value, ext: SchemaIR, base: SchemaIR, ext_range: RangeSpec, base_range: RangeSpec):
    if not isinstance(value, dict):
        return value
    cls = value.get("@type") or default_class(ext_range)
    target = _base_class(ext, base, cls, base_range)
    if target is None:
        return None
    out: dict = {}
    if "@id" in value:
        out["@id"] = value["@id"]
    if "@type" in value or target != default_class(base_range):
        out["@type"] = target

    ext_slots = effective_slot_map(ext, cls)
    base_slots = effective_slot_map(base, target)
    merged: dict[str, list] = {}
    single: dict[str, bool] = {}
    for key, raw in value.items():
        if key in RESERVED:
            continue
        name = key if key in base_slots else None
        if name is None and key in ext.slots:
            name = next((a for a in ext.slot_ancestors(key) if a in base_slots), None)
        if name is None:
            continue
        ext_slot = ext_slots[key]
        base_slot = base_slots[name]
        items = []
        for item in as_list(raw):
            if ext_slot.range.kind is RangeKind.DATATYPE:
                items.append(item)
            else:
                projected = _project(item, ext, base, ext_slot.range, base_slot.range)
                if projected is not None:
                    items.append(projected)
        if not items:
            continue
        single[name] = name not in merged and not isinstance(raw, list)
        merged.setdefault(name, []).extend(items)
    for name, items in merged.items():
        out[name] = items[0] if single[name] and len(items) == 1 else items
    return out


def project_to_base(doc: InstanceDocument, ext_ir: SchemaIR, base_ir: SchemaIR) -> InstanceDocument:
    """Rewrite a document so a consumer of ``base_ir`` can read it.

    Extension slots become their nearest super-slot known to the base (or are
    dropped), extension classes become their nearest base ancestor.
    """
    if base_ir.id not in ext_ir.lineage or not set(base_ir.classes) <= set(ext_ir.classes):
        raise ProfileError("NOT_AN_EXTENSION", f"{ext_ir.id!r} does not extend {base_ir.id!r}")
    root_range = RangeSpec.of_class(doc.root_class)
    base_root = _base_class(ext_ir, base_ir, doc.root_class, None)
    if base_root is None:
        raise ProfileError("NOT_AN_EXTENSION", f"root class {doc.root_class!r} has no base ancestor")
    root = _project(doc.root, ext_ir, base_ir, root_range, RangeSpec.of_class(base_root))
    return InstanceDocument(base_root, root, doc.source_name)
