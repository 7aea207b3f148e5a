"""Profile intermediate representation.

A :class:`SchemaIR` is a compiled application profile: classes, slots and
datatypes keyed by name, plus the layer relation to the profile it extends.
Values are treated as immutable once built; every construction runs the
invariant checks in :func:`check_ir`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ProfileError
from .iri import XSD, is_absolute_iri

UNBOUNDED = math.inf


class RangeKind(str, Enum):
    CLASS = "CLASS"
    DATATYPE = "DATATYPE"
    UNION = "UNION"


@dataclass(frozen=True)
class RangeSpec:
    kind: RangeKind
    members: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "kind", RangeKind(self.kind))
        object.__setattr__(self, "members", tuple(self.members))
        if self.kind is RangeKind.UNION:
            if len(self.members) < 2:
                raise ProfileError("INVALID_RANGE", "a union range needs at least two members")
        elif len(self.members) != 1:
            raise ProfileError("INVALID_RANGE", f"{self.kind.value} range takes exactly one member")

    @classmethod
    def of_class(cls, name: str) -> "RangeSpec":
        return cls(RangeKind.CLASS, (name,))

    @classmethod
    def of_datatype(cls, name: str) -> "RangeSpec":
        return cls(RangeKind.DATATYPE, (name,))

    @classmethod
    def union(cls, names: Iterable[str]) -> "RangeSpec":
        return cls(RangeKind.UNION, tuple(names))

    @property
    def is_datatype(self) -> bool:
        return self.kind is RangeKind.DATATYPE

    @property
    def name(self) -> str:
        """The single member of a CLASS or DATATYPE range."""
        return self.members[0]

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "members": list(self.members)}

    @classmethod
    def from_dict(cls, data: dict) -> "RangeSpec":
        return cls(RangeKind(data["kind"]), tuple(data["members"]))

    def __str__(self) -> str:
        if self.kind is RangeKind.UNION:
            return " | ".join(self.members)
        return self.members[0]


def _card_out(value):
    return "*" if value == UNBOUNDED else value


def _card_in(value):
    return UNBOUNDED if value in ("*", None) else int(value)


def format_cardinality(lo: int, hi) -> str:
    return f"{lo}..{'*' if hi == UNBOUNDED else hi}"


@dataclass(frozen=True)
class DatatypeDef:
    name: str
    base_uri: str
    lexical_check: str
    description: str | None = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "base_uri": self.base_uri, "lexical_check": self.lexical_check}
        if self.description:
            d["description"] = self.description
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "DatatypeDef":
        return cls(data["name"], data["base_uri"], data["lexical_check"], data.get("description"))


# XSD local name -> lexical rule id.
SUPPORTED_XSD = {
    "string": "STRING",
    "date": "DATE",
    "dateTime": "DATETIME",
    "decimal": "DECIMAL",
    "integer": "INTEGER",
    "boolean": "BOOLEAN",
    "anyURI": "ANYURI",
    "duration": "DURATION",
}

BUILTIN_DATATYPES: dict[str, DatatypeDef] = {
    name: DatatypeDef(name, XSD + name, rule) for name, rule in SUPPORTED_XSD.items()
}


@dataclass(frozen=True)
class SlotDef:
    name: str
    slot_uri: str
    range: RangeSpec
    min_cardinality: int = 0
    max_cardinality: float = UNBOUNDED
    super_slot: str | None = None
    description: str | None = None
    mappings: tuple[str, ...] = ()

    @property
    def multivalued(self) -> bool:
        return self.max_cardinality > 1

    @property
    def required(self) -> bool:
        return self.min_cardinality >= 1

    def compatible_with(self, other: "SlotDef") -> bool:
        """Equal up to description; used to accept re-declarations."""
        return replace(self, description=None) == replace(other, description=None)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "slot_uri": self.slot_uri,
            "range": self.range.to_dict(),
            "min_cardinality": self.min_cardinality,
            "max_cardinality": _card_out(self.max_cardinality),
        }
        if self.super_slot:
            d["super_slot"] = self.super_slot
        if self.description:
            d["description"] = self.description
        if self.mappings:
            d["mappings"] = list(self.mappings)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SlotDef":
        return cls(
            name=data["name"],
            slot_uri=data["slot_uri"],
            range=RangeSpec.from_dict(data["range"]),
            min_cardinality=int(data.get("min_cardinality", 0)),
            max_cardinality=_card_in(data.get("max_cardinality", "*")),
            super_slot=data.get("super_slot"),
            description=data.get("description"),
            mappings=tuple(data.get("mappings", ())),
        )


@dataclass(frozen=True)
class SlotUsage:
    """Class-local refinement of a slot. ``None`` fields are not refined."""

    min_cardinality: int | None = None
    max_cardinality: float | None = None
    range: RangeSpec | None = None

    def apply(self, slot: SlotDef) -> SlotDef:
        changes = {}
        if self.min_cardinality is not None:
            changes["min_cardinality"] = self.min_cardinality
        if self.max_cardinality is not None:
            changes["max_cardinality"] = self.max_cardinality
        if self.range is not None:
            changes["range"] = self.range
        return replace(slot, **changes) if changes else slot

    def is_empty(self) -> bool:
        return self.min_cardinality is None and self.max_cardinality is None and self.range is None

    def to_dict(self) -> dict:
        d = {}
        if self.min_cardinality is not None:
            d["min_cardinality"] = self.min_cardinality
        if self.max_cardinality is not None:
            d["max_cardinality"] = _card_out(self.max_cardinality)
        if self.range is not None:
            d["range"] = self.range.to_dict()
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SlotUsage":
        return cls(
            min_cardinality=data.get("min_cardinality"),
            max_cardinality=_card_in(data["max_cardinality"]) if "max_cardinality" in data else None,
            range=RangeSpec.from_dict(data["range"]) if "range" in data else None,
        )

    @classmethod
    def diff(cls, resolved: SlotDef, inherited: SlotDef) -> "SlotUsage":
        """The usage that turns ``inherited`` into ``resolved``."""
        return cls(
            min_cardinality=(
                resolved.min_cardinality
                if resolved.min_cardinality != inherited.min_cardinality
                else None
            ),
            max_cardinality=(
                resolved.max_cardinality
                if resolved.max_cardinality != inherited.max_cardinality
                else None
            ),
            range=resolved.range if resolved.range != inherited.range else None,
        )


@dataclass(frozen=True)
class ClassDef:
    name: str
    class_uri: str
    description: str | None = None
    parents: tuple[str, ...] = ()
    mixins: tuple[str, ...] = ()
    own_slots: tuple[str, ...] = ()
    is_mixin: bool = False
    is_abstract: bool = False
    slot_usage: dict[str, SlotUsage] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(self, "mixins", tuple(self.mixins))
        object.__setattr__(self, "own_slots", tuple(self.own_slots))

    @property
    def instantiable(self) -> bool:
        return not (self.is_mixin or self.is_abstract)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "class_uri": self.class_uri,
            "parents": list(self.parents),
            "mixins": list(self.mixins),
            "own_slots": list(self.own_slots),
            "is_mixin": self.is_mixin,
            "is_abstract": self.is_abstract,
        }
        if self.description:
            d["description"] = self.description
        if self.slot_usage:
            d["slot_usage"] = {k: v.to_dict() for k, v in self.slot_usage.items()}
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ClassDef":
        return cls(
            name=data["name"],
            class_uri=data["class_uri"],
            description=data.get("description"),
            parents=tuple(data.get("parents", ())),
            mixins=tuple(data.get("mixins", ())),
            own_slots=tuple(data.get("own_slots", ())),
            is_mixin=bool(data.get("is_mixin", False)),
            is_abstract=bool(data.get("is_abstract", False)),
            slot_usage={k: SlotUsage.from_dict(v) for k, v in data.get("slot_usage", {}).items()},
        )


@dataclass(frozen=True)
class SchemaIR:
    id: str
    version: str = "0.0.0"
    prefix_map: dict[str, str] = field(default_factory=dict)
    classes: dict[str, ClassDef] = field(default_factory=dict)
    slots: dict[str, SlotDef] = field(default_factory=dict)
    datatypes: dict[str, DatatypeDef] = field(default_factory=dict)
    layer_of: str | None = None
    lineage: tuple[str, ...] = ()
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "lineage", tuple(self.lineage))
        if self.check:
            check_ir(self)

    # lookups

    def cls(self, name: str) -> ClassDef:
        try:
            return self.classes[name]
        except KeyError:
            raise ProfileError("UNKNOWN_CLASS", f"no class named {name!r} in {self.id}") from None

    def datatype(self, name: str) -> DatatypeDef | None:
        return self.datatypes.get(name) or BUILTIN_DATATYPES.get(name)

    def is_class(self, name: str) -> bool:
        return name in self.classes

    def is_datatype(self, name: str) -> bool:
        return name not in self.classes and self.datatype(name) is not None

    def classes_by_uri(self, uri: str) -> list[str]:
        return [c.name for c in self.classes.values() if c.class_uri == uri]

    def slots_by_uri(self, uri: str) -> list[str]:
        return [s.name for s in self.slots.values() if s.slot_uri == uri]

    def slot_ancestors(self, name: str) -> list[str]:
        """Super-slot chain of ``name``, nearest first (excluding itself)."""
        chain = []
        cur = self.slots[name].super_slot
        while cur is not None:
            chain.append(cur)
            cur = self.slots[cur].super_slot
        return chain

    def ancestors(self, name: str) -> list[str]:
        """Class ancestors via parents and mixins, breadth-first, nearest first."""
        seen = {name}
        order = []
        queue = [name]
        while queue:
            cur = queue.pop(0)
            c = self.classes[cur]
            for nxt in (*c.parents, *c.mixins):
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
                    queue.append(nxt)
        return order

    def descendants(self, name: str) -> list[str]:
        """Classes subsumed by ``name`` (including itself) in declaration order."""
        return [c for c in self.classes if subsumes(self, name, c)]

    # serialization

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "version": self.version,
            "layer_of": self.layer_of,
            "lineage": list(self.lineage),
            "prefix_map": dict(self.prefix_map),
            "classes": {k: v.to_dict() for k, v in self.classes.items()},
            "slots": {k: v.to_dict() for k, v in self.slots.items()},
            "datatypes": {k: v.to_dict() for k, v in self.datatypes.items()},
        }

    def content_dict(self) -> dict:
        """Class, slot and datatype content only (no profile metadata)."""
        d = self.to_dict()
        return {k: d[k] for k in ("classes", "slots", "datatypes")}

    @classmethod
    def from_dict(cls, data: dict, check: bool = True) -> "SchemaIR":
        # Declaration order is carried by the order of names in "order" when
        # present; sorted-key JSON would otherwise lose it.
        order = data.get("order", {})

        def ordered(section: str) -> list:
            items = data.get(section, {})
            names = order.get(section) or list(items)
            return [items[n] for n in names]

        return cls(
            id=data["id"],
            version=data.get("version", "0.0.0"),
            prefix_map=dict(data.get("prefix_map", {})),
            classes={c["name"]: ClassDef.from_dict(c) for c in ordered("classes")},
            slots={s["name"]: SlotDef.from_dict(s) for s in ordered("slots")},
            datatypes={d["name"]: DatatypeDef.from_dict(d) for d in ordered("datatypes")},
            layer_of=data.get("layer_of"),
            lineage=tuple(data.get("lineage", ())),
            check=check,
        )

    def canonical_json(self) -> str:
        """Sorted-key JSON, UTF-8 friendly, LF-terminated."""
        d = self.to_dict()
        d["order"] = {
            "classes": list(self.classes),
            "slots": list(self.slots),
            "datatypes": list(self.datatypes),
        }
        return json.dumps(d, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_ir(path) -> SchemaIR:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProfileError("IO_ERROR", f"cannot read profile {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileError("MALFORMED_JSON", f"{path}: {exc}") from exc
    return SchemaIR.from_dict(data)


def loads_ir(text: str) -> SchemaIR:
    return SchemaIR.from_dict(json.loads(text))


def dump_ir(ir: SchemaIR, path) -> None:
    Path(path).write_text(ir.canonical_json(), encoding="utf-8", newline="\n")


# invariants


def _find_cycle(nodes: Iterable[str], edges) -> list[str] | None:
    """Return one cycle (as a node list) in a directed graph, or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}
    stack: list[str] = []

    def visit(n):
        color[n] = GREY
        stack.append(n)
        for m in edges(n):
            if color.get(m, BLACK) == GREY:
                return stack[stack.index(m):] + [m]
            if color.get(m) == WHITE:
                found = visit(m)
                if found:
                    return found
        stack.pop()
        color[n] = BLACK
        return None

    for n in list(color):
        if color[n] == WHITE:
            found = visit(n)
            if found:
                return found
    return None


def check_ir(ir: SchemaIR) -> None:
    """Raise ProfileError on the first violated SchemaIR invariant."""
    names = {}
    for kind, table in (("class", ir.classes), ("slot", ir.slots), ("datatype", ir.datatypes)):
        for key, item in table.items():
            if key != item.name:
                raise ProfileError("INVALID_IR", f"{kind} keyed {key!r} is named {item.name!r}")
            if key in names:
                raise ProfileError(
                    "NAME_COLLISION", f"{key!r} is both a {names[key]} and a {kind}"
                )
            names[key] = kind
    for slot in ir.slots.values():
        if slot.name in BUILTIN_DATATYPES:
            raise ProfileError("NAME_COLLISION", f"slot {slot.name!r} shadows a built-in datatype")
    for c in ir.classes.values():
        if c.name in BUILTIN_DATATYPES:
            raise ProfileError("NAME_COLLISION", f"class {c.name!r} shadows a built-in datatype")

    for d in ir.datatypes.values():
        if not d.base_uri.startswith(XSD) or d.base_uri[len(XSD):] not in SUPPORTED_XSD:
            raise ProfileError(
                "UNSUPPORTED_DATATYPE", f"datatype {d.name!r} has unsupported base {d.base_uri}"
            )

    for c in ir.classes.values():
        if not is_absolute_iri(c.class_uri):
            raise ProfileError("INVALID_IRI", f"class {c.name!r} has invalid class_uri {c.class_uri!r}")
        for ref in (*c.parents, *c.mixins):
            if ref not in ir.classes:
                raise ProfileError("UNKNOWN_CLASS", f"class {c.name!r} refers to unknown class {ref!r}")
        for s in c.own_slots:
            if s not in ir.slots:
                raise ProfileError("UNKNOWN_SLOT", f"class {c.name!r} uses unknown slot {s!r}")
        for s, usage in c.slot_usage.items():
            if s not in ir.slots:
                raise ProfileError("UNKNOWN_SLOT", f"class {c.name!r} refines unknown slot {s!r}")
            if usage.range is not None:
                _check_range(ir, usage.range, f"{c.name}.{s}")

    cycle = _find_cycle(ir.classes, lambda n: (*ir.classes[n].parents, *ir.classes[n].mixins))
    if cycle:
        raise ProfileError("CYCLE", "is-a cycle: " + " -> ".join(cycle))

    for s in ir.slots.values():
        if not is_absolute_iri(s.slot_uri):
            raise ProfileError("INVALID_IRI", f"slot {s.name!r} has invalid slot_uri {s.slot_uri!r}")
        _check_range(ir, s.range, s.name)
        if s.min_cardinality < 0 or s.max_cardinality < 1 or s.min_cardinality > s.max_cardinality:
            raise ProfileError(
                "INVALID_CARDINALITY",
                f"slot {s.name!r} has cardinality "
                f"{format_cardinality(s.min_cardinality, s.max_cardinality)}",
            )
        if s.super_slot is not None and s.super_slot not in ir.slots:
            raise ProfileError("UNKNOWN_SLOT", f"slot {s.name!r} has unknown super_slot {s.super_slot!r}")

    cycle = _find_cycle(ir.slots, lambda n: [ir.slots[n].super_slot] if ir.slots[n].super_slot else [])
    if cycle:
        raise ProfileError("CYCLE", "super_slot cycle: " + " -> ".join(cycle))
    for s in ir.slots.values():
        if s.super_slot is not None and not range_narrows(ir, ir.slots[s.super_slot].range, s.range):
            raise ProfileError(
                "RANGE_NOT_NARROWED",
                f"slot {s.name!r} range {s.range} is not subsumed by super_slot "
                f"{s.super_slot!r} range {ir.slots[s.super_slot].range}",
            )

    if ir.id in ir.lineage or len(set(ir.lineage)) != len(ir.lineage):
        raise ProfileError("CYCLE", f"layer_of chain of {ir.id!r} is cyclic: {list(ir.lineage)}")
    if ir.layer_of is not None and (not ir.lineage or ir.lineage[-1] != ir.layer_of):
        raise ProfileError("INVALID_IR", f"layer_of {ir.layer_of!r} disagrees with lineage")

    for c in ir.classes.values():
        for s, usage in c.slot_usage.items():
            if usage.range is None or s in c.own_slots:
                continue
            inherited = inherited_slot(ir, c.name, s)
            if inherited is not None and not range_narrows(ir, inherited.range, usage.range):
                raise ProfileError(
                    "RANGE_NOT_NARROWED",
                    f"{c.name}.{s}: range {usage.range} does not narrow inherited {inherited.range}",
                )

    # Walk every class once so resolution errors surface at construction.
    for c in ir.classes:
        for _name, slot in effective_slots(ir, c):
            if slot.min_cardinality > slot.max_cardinality:
                raise ProfileError(
                    "INVALID_CARDINALITY",
                    f"{c}.{slot.name} resolves to "
                    f"{format_cardinality(slot.min_cardinality, slot.max_cardinality)}",
                )


def _check_range(ir: SchemaIR, rng: RangeSpec, where: str) -> None:
    if rng.kind is RangeKind.UNION:
        for m in rng.members:
            if m not in ir.classes:
                if ir.datatype(m) is not None:
                    raise ProfileError(
                        "DATATYPE_UNION", f"{where}: union ranges over datatypes are not supported"
                    )
                raise ProfileError("UNRESOLVED_RANGE", f"{where}: unknown union member {m!r}")
    elif rng.kind is RangeKind.CLASS:
        if rng.name not in ir.classes:
            raise ProfileError("UNRESOLVED_RANGE", f"{where}: unknown class {rng.name!r}")
    elif ir.datatype(rng.name) is None or rng.name in ir.classes:
        raise ProfileError("UNRESOLVED_RANGE", f"{where}: unknown datatype {rng.name!r}")


def range_narrows(ir: SchemaIR, wide: RangeSpec, narrow: RangeSpec) -> bool:
    """True when every value admitted by ``narrow`` is admitted by ``wide``."""
    if wide.is_datatype or narrow.is_datatype:
        return wide == narrow
    return all(any(subsumes(ir, w, n) for w in wide.members) for n in narrow.members)


# operations


def subsumes(ir: SchemaIR, ancestor: str, descendant: str) -> bool:
    """True iff ``descendant`` is ``ancestor`` or reaches it via parents/mixins."""
    ir.cls(ancestor)
    ir.cls(descendant)
    if ancestor == descendant:
        return True
    seen = set()
    stack = [descendant]
    while stack:
        cur = stack.pop()
        c = ir.classes[cur]
        for nxt in (*c.parents, *c.mixins):
            if nxt == ancestor:
                return True
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


def _resolve(ir: SchemaIR, class_name: str, memo: dict) -> list[tuple[str, SlotDef]]:
    if class_name in memo:
        return memo[class_name]
    c = ir.cls(class_name)
    out: dict[str, SlotDef] = {}
    for s in c.own_slots:
        if s not in out:
            out[s] = ir.slots[s]
    for parent in (*c.parents, *c.mixins):
        for s, slot in _resolve(ir, parent, memo):
            if s not in out:
                out[s] = slot
    for s, usage in c.slot_usage.items():
        if s in out:
            out[s] = usage.apply(out[s])
        else:
            raise ProfileError(
                "UNKNOWN_SLOT", f"class {class_name!r} refines {s!r}, which it does not have"
            )
    result = list(out.items())
    memo[class_name] = result
    return result


def effective_slots(ir: SchemaIR, class_name: str) -> list[tuple[str, SlotDef]]:
    """Own slots in declaration order, then inherited ones (parents first, then
    mixins, depth-first); the class's own slot_usage is applied last."""
    return _resolve(ir, class_name, {})


def effective_slot_map(ir: SchemaIR, class_name: str) -> dict[str, SlotDef]:
    return dict(effective_slots(ir, class_name))


def inherited_slot(ir: SchemaIR, class_name: str, slot_name: str) -> SlotDef | None:
    """What ``class_name`` would resolve ``slot_name`` to without its own usage."""
    c = ir.cls(class_name)
    if slot_name in c.own_slots:
        return ir.slots[slot_name]
    for parent in (*c.parents, *c.mixins):
        found = dict(effective_slots(ir, parent)).get(slot_name)
        if found is not None:
            return found
    return None


def _merge_class(old: ClassDef, new: ClassDef) -> ClassDef:
    for attr in ("class_uri", "is_mixin", "is_abstract"):
        if getattr(old, attr) != getattr(new, attr):
            raise ProfileError(
                "NAME_COLLISION",
                f"class {old.name!r} redefined with different {attr}: "
                f"{getattr(old, attr)!r} vs {getattr(new, attr)!r}",
            )

    def union(a, b):
        return tuple(dict.fromkeys((*a, *b)))

    usage = dict(old.slot_usage)
    for s, u in new.slot_usage.items():
        prev = usage.get(s, SlotUsage())
        usage[s] = SlotUsage(
            u.min_cardinality if u.min_cardinality is not None else prev.min_cardinality,
            u.max_cardinality if u.max_cardinality is not None else prev.max_cardinality,
            u.range if u.range is not None else prev.range,
        )
    return replace(
        old,
        description=old.description or new.description,
        parents=union(old.parents, new.parents),
        mixins=union(old.mixins, new.mixins),
        own_slots=union(old.own_slots, new.own_slots),
        slot_usage=usage,
    )


def merge_layers(base: SchemaIR, extension: SchemaIR) -> SchemaIR:
    """Combine ``base`` with an extension IR whose ``layer_of`` is ``base.id``.

    Extensions may add classes, slots and datatypes, add slots or mixins to
    existing classes and refine slots per class. Redefining an existing name
    with different content raises ``NAME_COLLISION``.
    """
    if extension.layer_of != base.id:
        raise ProfileError(
            "LAYER_MISMATCH",
            f"extension {extension.id!r} is a layer of {extension.layer_of!r}, not {base.id!r}",
        )
    classes = dict(base.classes)
    for name, c in extension.classes.items():
        if name in base.slots or name in base.datatypes:
            raise ProfileError("NAME_COLLISION", f"class {name!r} clashes with an existing slot or datatype")
        classes[name] = _merge_class(classes[name], c) if name in classes else c
    slots = dict(base.slots)
    for name, s in extension.slots.items():
        if name in base.classes or name in base.datatypes:
            raise ProfileError("NAME_COLLISION", f"slot {name!r} clashes with an existing class or datatype")
        if name in slots:
            if not slots[name].compatible_with(s):
                raise ProfileError("NAME_COLLISION", f"slot {name!r} redefined with different content")
            continue
        slots[name] = s
    datatypes = dict(base.datatypes)
    for name, d in extension.datatypes.items():
        if name in base.classes or name in base.slots:
            raise ProfileError("NAME_COLLISION", f"datatype {name!r} clashes with an existing class or slot")
        if name in datatypes and replace(datatypes[name], description=None) != replace(d, description=None):
            raise ProfileError("NAME_COLLISION", f"datatype {name!r} redefined with different content")
        datatypes.setdefault(name, d)
    prefixes = dict(base.prefix_map)
    for p, ns in extension.prefix_map.items():
        prefixes.setdefault(p, ns)
    return SchemaIR(
        id=extension.id,
        version=extension.version,
        prefix_map=prefixes,
        classes=classes,
        slots=slots,
        datatypes=datatypes,
        layer_of=base.id,
        lineage=(*base.lineage, base.id),
    )


def iter_class_ranges(rng: RangeSpec) -> Iterator[str]:
    if not rng.is_datatype:
        yield from rng.members
