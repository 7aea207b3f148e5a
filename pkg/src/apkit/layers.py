"""Profile extension layers: the two built-in layers, injection and linting.

Layers are data. ``dcat_ap_plus.layer.json`` adds a PROV-O activity pattern
to a compiled DCAT-AP profile, entering through the class that carries
``prov:Activity``; ``chem_dcat_ap.layer.json`` specializes that pattern for
chemistry. Both are shipped as package resources.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .errors import ProfileError
from .iri import PROV
from .ir import (
    ClassDef,
    DatatypeDef,
    RangeSpec,
    SchemaIR,
    SlotDef,
    SlotUsage,
    _card_in,
    _card_out,
    effective_slot_map,
    format_cardinality,
    merge_layers,
    range_narrows,
    subsumes,
)
from .report import ValidationReport

PROV_ACTIVITY = PROV + "Activity"
BUILTIN_LAYERS = {"plus": "dcat_ap_plus.layer.json", "chem": "chem_dcat_ap.layer.json"}


@dataclass
class ExtensionLayer:
    id: str
    layer_of: str
    version: str = "0.0.0"
    description: str | None = None
    prefix_map: dict[str, str] = field(default_factory=dict)
    new_classes: list[ClassDef] = field(default_factory=list)
    new_slots: list[SlotDef] = field(default_factory=list)
    new_datatypes: list[DatatypeDef] = field(default_factory=list)
    slot_attachments: list[tuple[str, str]] = field(default_factory=list)
    mixin_attachments: list[tuple[str, str]] = field(default_factory=list)
    cardinality_overrides: list[tuple[str, str, int, float]] = field(default_factory=list)
    range_overrides: list[tuple[str, str, RangeSpec]] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: dict) -> "ExtensionLayer":
        return cls(
            id=data["id"],
            layer_of=data["layer_of"],
            version=data.get("version", "0.0.0"),
            description=data.get("description"),
            prefix_map=dict(data.get("prefix_map", {})),
            new_classes=[ClassDef.from_dict(c) for c in data.get("new_classes", [])],
            new_slots=[SlotDef.from_dict(s) for s in data.get("new_slots", [])],
            new_datatypes=[DatatypeDef.from_dict(d) for d in data.get("new_datatypes", [])],
            slot_attachments=[tuple(a) for a in data.get("slot_attachments", [])],
            mixin_attachments=[tuple(a) for a in data.get("mixin_attachments", [])],
            cardinality_overrides=[
                (c, s, int(lo), _card_in(hi)) for c, s, lo, hi in data.get("cardinality_overrides", [])
            ],
            range_overrides=[
                (c, s, RangeSpec.from_dict(r)) for c, s, r in data.get("range_overrides", [])
            ],
        )

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "layer_of": self.layer_of,
            "version": self.version,
            "prefix_map": dict(self.prefix_map),
            "new_classes": [c.to_dict() for c in self.new_classes],
            "new_slots": [s.to_dict() for s in self.new_slots],
            "new_datatypes": [d.to_dict() for d in self.new_datatypes],
            "slot_attachments": [list(a) for a in self.slot_attachments],
            "mixin_attachments": [list(a) for a in self.mixin_attachments],
            "cardinality_overrides": [
                [c, s, lo, _card_out(hi)] for c, s, lo, hi in self.cardinality_overrides
            ],
            "range_overrides": [[c, s, r.to_dict()] for c, s, r in self.range_overrides],
        }
        if self.description:
            d["description"] = self.description
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def rebind(self, base_id: str, renames: dict[str, str] | None = None) -> "ExtensionLayer":
        """Copy of the layer targeting ``base_id``, with base class names renamed."""
        renames = renames or {}
        if not renames:
            return replace(self, layer_of=base_id)

        def rn(name):
            return renames.get(name, name)

        def rn_range(r: RangeSpec) -> RangeSpec:
            return RangeSpec(r.kind, tuple(rn(m) for m in r.members))

        return replace(
            self,
            layer_of=base_id,
            new_classes=[
                replace(
                    c,
                    parents=tuple(rn(p) for p in c.parents),
                    mixins=tuple(rn(m) for m in c.mixins),
                    slot_usage={
                        k: replace(u, range=rn_range(u.range) if u.range else None)
                        for k, u in c.slot_usage.items()
                    },
                )
                for c in self.new_classes
            ],
            new_slots=[replace(s, range=rn_range(s.range)) for s in self.new_slots],
            slot_attachments=[(rn(c), s) for c, s in self.slot_attachments],
            mixin_attachments=[(rn(c), m) for c, m in self.mixin_attachments],
            cardinality_overrides=[(rn(c), s, lo, hi) for c, s, lo, hi in self.cardinality_overrides],
            range_overrides=[(rn(c), s, rn_range(r)) for c, s, r in self.range_overrides],
        )

    def fragment(self, base: SchemaIR) -> SchemaIR:
        """The layer as an (unchecked) extension IR to merge onto ``base``."""
        classes: dict[str, ClassDef] = {}
        for c in self.new_classes:
            if c.name in classes:
                raise ProfileError("NAME_COLLISION", f"layer defines class {c.name!r} twice")
            classes[c.name] = c

        def touch(name: str) -> ClassDef:
            if name not in classes:
                if name not in base.classes:
                    raise ProfileError("UNKNOWN_CLASS", f"layer {self.id!r} refers to unknown class {name!r}")
                old = base.classes[name]
                classes[name] = ClassDef(
                    name=name,
                    class_uri=old.class_uri,
                    is_mixin=old.is_mixin,
                    is_abstract=old.is_abstract,
                )
            return classes[name]

        for cname, sname in self.slot_attachments:
            c = touch(cname)
            if sname not in c.own_slots:
                classes[cname] = replace(c, own_slots=(*c.own_slots, sname))
        for cname, mname in self.mixin_attachments:
            c = touch(cname)
            if mname not in c.mixins:
                classes[cname] = replace(c, mixins=(*c.mixins, mname))
        for cname, sname, lo, hi in self.cardinality_overrides:
            c = touch(cname)
            prev = c.slot_usage.get(sname, SlotUsage())
            usage = dict(c.slot_usage)
            usage[sname] = replace(prev, min_cardinality=lo, max_cardinality=hi)
            classes[cname] = replace(c, slot_usage=usage)
        for cname, sname, rng in self.range_overrides:
            c = touch(cname)
            prev = c.slot_usage.get(sname, SlotUsage())
            usage = dict(c.slot_usage)
            usage[sname] = replace(prev, range=rng)
            classes[cname] = replace(c, slot_usage=usage)

        slots = {}
        for s in self.new_slots:
            if s.name in slots:
                raise ProfileError("NAME_COLLISION", f"layer defines slot {s.name!r} twice")
            slots[s.name] = s
        return SchemaIR(
            id=self.id,
            version=self.version,
            prefix_map=dict(self.prefix_map),
            classes=classes,
            slots=slots,
            datatypes={d.name: d for d in self.new_datatypes},
            layer_of=self.layer_of,
            check=False,
        )

    def apply(self, base: SchemaIR) -> SchemaIR:
        return merge_layers(base, self.fragment(base))


def load_layer(path) -> ExtensionLayer:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ProfileError("IO_ERROR", f"cannot read layer {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProfileError("MALFORMED_JSON", f"{path}: {exc}") from exc
    return ExtensionLayer.from_dict(data)


def builtin_layer_text(key: str) -> str:
    try:
        fname = BUILTIN_LAYERS[key]
    except KeyError:
        raise ProfileError("UNKNOWN_LAYER", f"no built-in layer {key!r}; use plus or chem") from None
    return resources.files("apkit.resources").joinpath(fname).read_text(encoding="utf-8")


def builtin_layer(key: str) -> ExtensionLayer:
    return ExtensionLayer.from_dict(json.loads(builtin_layer_text(key)))


def _entry_point(base: SchemaIR) -> str:
    names = base.classes_by_uri(PROV_ACTIVITY)
    if not names:
        raise ProfileError(
            "MISSING_ENTRY_POINT", f"profile {base.id!r} has no class with class_uri {PROV_ACTIVITY}"
        )
    return names[0]


def provenance_layer_for(base: SchemaIR) -> ExtensionLayer:
    """The built-in provenance layer bound to ``base``."""
    activity = _entry_point(base)
    renames = {"Activity": activity} if activity != "Activity" else {}
    return builtin_layer("plus").rebind(base.id, renames)


def inject_provenance_layer(base: SchemaIR) -> SchemaIR:
    """Extend a compiled DCAT-AP profile with the provenance layer."""
    if _has_provenance_layer(base):
        raise ProfileError("ALREADY_EXTENDED", f"profile {base.id!r} already carries the provenance layer")
    layer = provenance_layer_for(base)
    try:
        return layer.apply(base)
    except ProfileError as exc:
        if exc.code == "NAME_COLLISION":
            raise ProfileError(
                "ALREADY_EXTENDED", f"profile {base.id!r} already carries the provenance layer ({exc.message})"
            ) from exc
        raise


def _has_provenance_layer(ir: SchemaIR) -> bool:
    if "DataGeneratingActivity" not in ir.classes:
        return False
    activities = ir.classes_by_uri(PROV_ACTIVITY)
    return any(subsumes(ir, a, "DataGeneratingActivity") for a in activities)


def chem_layer_for(plus: SchemaIR) -> ExtensionLayer:
    if not _has_provenance_layer(plus):
        raise ProfileError(
            "MISSING_BASE_LAYER",
            f"profile {plus.id!r} lacks the provenance layer (DataGeneratingActivity under prov:Activity)",
        )
    return builtin_layer("chem").rebind(plus.id)


def apply_chem_layer(plus: SchemaIR) -> SchemaIR:
    """Extend a provenance-layer profile with the chemistry layer."""
    return chem_layer_for(plus).apply(plus)


def resolve_layer(spec: str, base: SchemaIR) -> ExtensionLayer:
    """``plus``/``chem`` name the built-ins (bound to ``base``); anything else is a file."""
    if spec == "plus":
        return provenance_layer_for(base)
    if spec == "chem":
        return chem_layer_for(base)
    return load_layer(spec)


def lint_extension(base: SchemaIR, ext: ExtensionLayer) -> ValidationReport:
    """Check an extension against the narrowing-only extension rules.

    Findings: DUPLICATE_SEMANTICS (a slot added to a class that already has a
    different slot with the same slot_uri), BROADENED_CARDINALITY,
    MANDATORY_DROPPED (a mandatory slot made optional), BROADENED_RANGE, and
    NAME_COLLISION / INVALID_LAYER when the layer cannot be merged at all.
    """
    if ext.layer_of != base.id:
        raise ProfileError("LAYER_MISMATCH", f"layer {ext.id!r} targets {ext.layer_of!r}, not {base.id!r}")
    report = ValidationReport()
    new_slots = {s.name: s for s in ext.new_slots}

    def slot_def(name: str) -> SlotDef | None:
        return new_slots.get(name) or base.slots.get(name)

    def base_view(cname: str) -> dict[str, SlotDef]:
        """Slots ``cname`` already has in the base profile."""
        if cname in base.classes:
            return effective_slot_map(base, cname)
        out: dict[str, SlotDef] = {}
        for c in ext.new_classes:
            if c.name == cname:
                for p in (*c.parents, *c.mixins):
                    for k, v in base_view(p).items():
                        out.setdefault(k, v)
        return out

    def check_duplicate(cname: str, sname: str, where: str) -> None:
        slot = slot_def(sname)
        if slot is None:
            report.error("UNKNOWN_SLOT", where, f"slot {sname!r} is not defined")
            return
        for existing_name, existing in base_view(cname).items():
            if existing_name != sname and existing.slot_uri == slot.slot_uri:
                report.error(
                    "DUPLICATE_SEMANTICS",
                    where,
                    f"{cname}.{sname} repeats slot_uri {slot.slot_uri} of existing slot {existing_name!r}",
                )

    for cname, sname in ext.slot_attachments:
        check_duplicate(cname, sname, f"/{cname}/{sname}")
    for c in ext.new_classes:
        for sname in c.own_slots:
            check_duplicate(c.name, sname, f"/{c.name}/{sname}")

    for cname, sname, lo, hi in ext.cardinality_overrides:
        where = f"/{cname}/{sname}"
        current = base_view(cname).get(sname) or slot_def(sname)
        if current is None:
            report.error("UNKNOWN_SLOT", where, f"override of unknown slot {sname!r}")
            continue
        old = format_cardinality(current.min_cardinality, current.max_cardinality)
        new = format_cardinality(lo, hi)
        if current.min_cardinality >= 1 and lo == 0:
            report.error("MANDATORY_DROPPED", where, f"mandatory {old} relaxed to {new}")
        elif lo < current.min_cardinality or hi > current.max_cardinality:
            report.error("BROADENED_CARDINALITY", where, f"{old} broadened to {new}")

    for cname, sname, rng in ext.range_overrides:
        where = f"/{cname}/{sname}"
        current = base_view(cname).get(sname)
        if current is None:
            continue  # range of a slot the layer itself attaches
        try:
            probe = ext.fragment(base)
            merged = merge_layers(base, probe)
            ok = range_narrows(merged, current.range, rng)
        except ProfileError:
            ok = False
        if not ok:
            report.error("BROADENED_RANGE", where, f"range {current.range} widened to {rng}")

    if not report.errors:
        try:
            ext.apply(base)
        except ProfileError as exc:
            report.error(exc.code if exc.code == "NAME_COLLISION" else "INVALID_LAYER", "", exc.message)
    return report

