"""IRI plumbing: the bundled prefix table, CURIE expansion and element naming."""

from __future__ import annotations

import re

from .errors import ProfileError

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"
SH = "http://www.w3.org/ns/shacl#"
DCAT = "http://www.w3.org/ns/dcat#"
DCTERMS = "http://purl.org/dc/terms/"
PROV = "http://www.w3.org/ns/prov#"
FOAF = "http://xmlns.com/foaf/0.1/"
QUDT = "http://qudt.org/schema/qudt/"
OBO = "http://purl.obolibrary.org/obo/"
SIO = "http://semanticscience.org/resource/"

RDF_TYPE = RDF + "type"

# Annotation vocabulary for IR structure that SHACL Core cannot carry.
META = "https://w3id.org/apkit/meta#"

DEFAULT_PREFIXES: dict[str, str] = {
    "rdf": RDF,
    "rdfs": RDFS,
    "xsd": XSD,
    "sh": SH,
    "owl": "http://www.w3.org/2002/07/owl#",
    "dcat": DCAT,
    "dcterms": DCTERMS,
    "dct": DCTERMS,
    "prov": PROV,
    "foaf": FOAF,
    "adms": "http://www.w3.org/ns/adms#",
    "skos": "http://www.w3.org/2004/02/skos/core#",
    "vcard": "http://www.w3.org/2006/vcard/ns#",
    "locn": "http://www.w3.org/ns/locn#",
    "odrl": "http://www.w3.org/ns/odrl/2/",
    "spdx": "http://spdx.org/rdf/terms#",
    "dcatap": "http://data.europa.eu/r5r/",
    "qudt": QUDT,
    "obo": OBO,
    "sio": SIO,
    "SIO": SIO,
    "meta": META,
}

# Prefixes minted under the OBO PURL policy: PREFIX:NUM -> obo/PREFIX_NUM.
OBO_PREFIXES = frozenset(
    {"CHEBI", "CHMO", "RXNO", "RO", "CHEMINF", "OBI", "IAO", "BFO", "PATO", "UO", "NCIT"}
)

_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_ABS_IRI = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>\"{}|\\^`]+$")
# Schemes that are never treated as CURIE prefixes.
_SCHEMES = frozenset({"http", "https", "urn", "mailto", "tag", "file", "ftp", "data", "doi"})


def is_absolute_iri(value: object) -> bool:
    return isinstance(value, str) and bool(_ABS_IRI.match(value))


def is_blank(value: str) -> bool:
    return value.startswith("_:")


def obo_purl(prefix: str, local: str) -> str:
    return f"{OBO}{prefix}_{local}"


def expand_curie(value: str, prefixes: dict[str, str] | None = None) -> str:
    """Expand a compact IRI; absolute IRIs and blank ids pass through.

    Raises ``MISSING_CONTEXT`` when the prefix cannot be resolved.
    """
    if is_blank(value):
        return value
    if ":" not in value:
        raise ProfileError("MISSING_CONTEXT", f"not an IRI or compact IRI: {value!r}")
    prefix, local = value.split(":", 1)
    table = DEFAULT_PREFIXES if prefixes is None else prefixes
    if prefix in table:
        return table[prefix] + local
    if prefix in OBO_PREFIXES:
        return obo_purl(prefix, local)
    if prefix.lower() in _SCHEMES or local.startswith("//"):
        return value
    raise ProfileError("MISSING_CONTEXT", f"no prefix mapping for {prefix!r} in {value!r}")


def try_expand(value: str, prefixes: dict[str, str] | None = None) -> str:
    try:
        return expand_curie(value, prefixes)
    except ProfileError:
        return value


def compact(iri: str, prefixes: dict[str, str]) -> str | None:
    """Return ``prefix:local`` for the longest matching namespace, if it is a
    legal Turtle prefixed name."""
    best = None
    for prefix, ns in prefixes.items():
        if iri.startswith(ns) and (best is None or len(ns) > len(best[1])):
            best = (prefix, ns)
    if best is None:
        return None
    local = iri[len(best[1]):]
    if local and not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_\-]*", local):
        return None
    return f"{best[0]}:{local}"


def local_name(iri: str) -> str:
    """Substring after the last ``#`` or ``/``."""
    cut = max(iri.rfind("#"), iri.rfind("/"))
    if cut < 0:
        cut = iri.rfind(":")
    return iri[cut + 1:]


def snake_case(name: str) -> str:
    name = re.sub(r"[^0-9A-Za-z]+", "_", name.strip())
    name = re.sub(r"([a-z0-9])([A-Z])", r"\1_\2", name)
    name = re.sub(r"([A-Z]+)([A-Z][a-z])", r"\1_\2", name)
    return re.sub(r"_+", "_", name).strip("_").lower()


class NameAllocator:
    """Hands out unique names; a taken base name gets ``_2``, ``_3``, ... in
    first-seen order. Asking again for the same key returns the same name."""

    def __init__(self, taken=()):
        self._taken: set[str] = set(taken)
        self._by_key: dict[object, str] = {}

    def allocate(self, base: str, key: object = None) -> str:
        if key is not None and key in self._by_key:
            return self._by_key[key]
        name = base
        n = 2
        while name in self._taken:
            name = f"{base}_{n}"
            n += 1
        self._taken.add(name)
        if key is not None:
            self._by_key[key] = name
        return name

    def reserve(self, name: str) -> None:
        self._taken.add(name)


def local_names(iris) -> list[str]:
    """Collision-free local names for ``iris`` in the given order."""
    alloc = NameAllocator()
    return [alloc.allocate(local_name(iri), key=iri) for iri in iris]
