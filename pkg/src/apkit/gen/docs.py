"""Markdown documentation: one page per class, an index and a layer page."""

from __future__ import annotations

from ..ir import RangeKind, SchemaIR, effective_slots, format_cardinality


def _cell(text) -> str:
    return str(text).replace("|", "\\|").replace("\n", " ")


def _class_link(name: str) -> str:
    return f"[{name}]({name}.md)"


def _range_text(ir: SchemaIR, rng) -> str:
    if rng.kind is RangeKind.DATATYPE:
        return f"`{rng.name}`"
    return " or ".join(_class_link(m) for m in rng.members)


def _class_page(ir: SchemaIR, name: str) -> str:
    cls = ir.classes[name]
    kind = "Mixin" if cls.is_mixin else "Abstract class" if cls.is_abstract else "Class"
    lines = [f"# {name}", ""]
    if cls.description:
        lines += [cls.description, ""]
    lines += [f"- Kind: {kind}", f"- class_uri: `{cls.class_uri}`"]
    if cls.parents:
        lines.append("- Parents: " + ", ".join(_class_link(p) for p in cls.parents))
    if cls.mixins:
        lines.append("- Mixins: " + ", ".join(_class_link(m) for m in cls.mixins))
    children = [c for c, d in ir.classes.items() if name in d.parents or name in d.mixins]
    if children:
        lines.append("- Specialized by: " + ", ".join(_class_link(c) for c in children))
    lines += ["", "[Back to index](index.md)", ""]
    slots = effective_slots(ir, name)
    if slots:
        own = set(cls.own_slots)
        lines += [
            "## Slots",
            "",
            "| Slot | Range | Cardinality | slot_uri | Inherited | Super-slot |",
            "|---|---|---|---|---|---|",
        ]
        for sname, slot in slots:
            lines.append(
                "| {} | {} | {} | `{}` | {} | {} |".format(
                    _cell(sname),
                    _range_text(ir, slot.range),
                    format_cardinality(slot.min_cardinality, slot.max_cardinality),
                    _cell(slot.slot_uri),
                    "" if sname in own else "yes",
                    f"`{slot.super_slot}`" if slot.super_slot else "",
                )
            )
        lines.append("")
    return "\n".join(lines)


def _index_page(ir: SchemaIR, with_layers: bool) -> str:
    lines = [f"# {ir.id} {ir.version}", ""]
    if with_layers:
        lines += ["See [layers](layers.md) for the extension chain.", ""]
    if ir.classes:
        lines += ["## Classes", "", "| Class | class_uri | Description |", "|---|---|---|"]
        for name, cls in ir.classes.items():
            lines.append(f"| {_class_link(name)} | `{_cell(cls.class_uri)}` | {_cell(cls.description or '')} |")
        lines.append("")
    if ir.datatypes:
        lines += ["## Datatypes", "", "| Datatype | Base | Lexical rule |", "|---|---|---|"]
        for name, dt in ir.datatypes.items():
            lines.append(f"| {name} | `{dt.base_uri}` | {dt.lexical_check} |")
        lines.append("")
    if not ir.classes and not ir.datatypes:
        lines += ["This profile declares no classes.", ""]
    return "\n".join(lines)


def _layers_page(ir: SchemaIR) -> str:
    chain = [*ir.lineage, ir.id]
    lines = ["# Layers", "", "Each layer extends the one above it.", "", "```"]
    for depth, layer in enumerate(chain):
        lines.append(("    " * (depth - 1) + "└── " if depth else "") + layer)
    lines += ["```", "", f"`{ir.id}` is layered on `{ir.layer_of}`." if ir.layer_of else "", ""]
    lines += ["[Back to index](index.md)", ""]
    return "\n".join(lines)


def gen_docs(ir: SchemaIR) -> dict[str, str]:
    """Map of file name to Markdown text."""
    with_layers = bool(ir.lineage)
    pages = {"index.md": _index_page(ir, with_layers)}
    if with_layers:
        pages["layers.md"] = _layers_page(ir)
    for name in ir.classes:
        pages[f"{name}.md"] = _class_page(ir, name)
    return pages
