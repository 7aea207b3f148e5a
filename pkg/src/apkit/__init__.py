"""Compile SHACL application profiles into a layered schema IR.

The package covers the whole pipeline: JSON-LD shape ingestion, profile
layering (a provenance layer and a chemistry layer ship built in), instance
validation, RDF emission and artifact generation (SHACL, JSON Schema, docs).
"""

from .errors import ProfileError
from .ir import (
    UNBOUNDED,
    ClassDef,
    DatatypeDef,
    RangeKind,
    RangeSpec,
    SchemaIR,
    SlotDef,
    SlotUsage,
    effective_slots,
    load_ir,
    merge_layers,
    subsumes,
)
from .report import Finding, Severity, ValidationReport

__version__ = "0.1.0"

__all__ = [
    "UNBOUNDED",
    "ClassDef",
    "DatatypeDef",
    "Finding",
    "ProfileError",
    "RangeKind",
    "RangeSpec",
    "SchemaIR",
    "Severity",
    "SlotDef",
    "SlotUsage",
    "ValidationReport",
    "effective_slots",
    "load_ir",
    "merge_layers",
    "subsumes",
]
