"""Lexical rules for scalar values, keyed by rule id."""

from __future__ import annotations

import datetime as _dt
import re
from typing import Callable

from .errors import ProfileError
from .iri import is_absolute_iri

INCHIKEY_PATTERN = r"^[A-Z]{14}-[A-Z]{10}-[A-Z]$"
SMILES_PATTERN = r"^\S+$"
ANYURI_PATTERN = r"^[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>\"{}|\\^`]+$"

_DATE = re.compile(r"^(\d{4})-(\d{2})-(\d{2})$")
DATETIME_PATTERN = r"^(\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2}):(\d{2})(\.\d+)?(Z|[+-]\d{2}:\d{2})?$"
_DATETIME = re.compile(DATETIME_PATTERN)
_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)$")
_INTEGER = re.compile(r"^[+-]?\d+$")
_DURATION = re.compile(
    r"^-?P(?=\d|T\d)(\d+Y)?(\d+M)?(\d+D)?(T(?=\d)(\d+H)?(\d+M)?(\d+(\.\d+)?S)?)?$"
)
_INCHIKEY = re.compile(INCHIKEY_PATTERN)


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _date(value) -> bool:
    if isinstance(value, _dt.date) and not isinstance(value, _dt.datetime):
        return True
    if not isinstance(value, str):
        return False
    m = _DATE.match(value)
    if not m:
        return False
    try:
        _dt.date(int(m[1]), int(m[2]), int(m[3]))
    except ValueError:
        return False
    return True


def _datetime(value) -> bool:
    if isinstance(value, _dt.datetime):
        return True
    if not isinstance(value, str):
        return False
    m = _DATETIME.match(value)
    if not m:
        return False
    try:
        _dt.datetime(int(m[1]), int(m[2]), int(m[3]), int(m[4]), int(m[5]), int(m[6]))
    except ValueError:
        return False
    return True


def _decimal(value) -> bool:
    if _is_number(value):
        return value == value and value not in (float("inf"), float("-inf"))
    return isinstance(value, str) and bool(_DECIMAL.match(value))


def _integer(value) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, int):
        return True
    return isinstance(value, str) and bool(_INTEGER.match(value))


def _boolean(value) -> bool:
    return isinstance(value, bool) or value in ("true", "false", "1", "0")


RULES: dict[str, Callable[[object], bool]] = {
    "STRING": lambda v: True,
    "DATE": _date,
    "DATETIME": _datetime,
    "DECIMAL": _decimal,
    "INTEGER": _integer,
    "BOOLEAN": _boolean,
    "ANYURI": is_absolute_iri,
    "DURATION": lambda v: isinstance(v, str) and bool(_DURATION.match(v)),
    "INCHIKEY": lambda v: isinstance(v, str) and bool(_INCHIKEY.match(v)),
    "SMILES_NONEMPTY": lambda v: isinstance(v, str) and bool(re.match(SMILES_PATTERN, v)),
}

# Regex equivalents, used by the JSON Schema and SHACL generators.
PATTERNS: dict[str, str] = {
    "INCHIKEY": INCHIKEY_PATTERN,
    "SMILES_NONEMPTY": SMILES_PATTERN,
    "ANYURI": ANYURI_PATTERN,
    "DURATION": _DURATION.pattern,
}


def lexical_check(rule: str, value) -> bool:
    """Return whether scalar ``value`` is in the lexical space of ``rule``."""
    try:
        check = RULES[rule]
    except KeyError:
        raise ProfileError("UNKNOWN_RULE", f"no lexical rule {rule!r}") from None
    if isinstance(value, (dict, list)) or value is None:
        return False
    return check(value)


def lexical_form(value) -> str:
    """Canonical string form of a scalar as written into RDF literals."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (_dt.date, _dt.datetime)):
        return value.isoformat()
    return str(value)
