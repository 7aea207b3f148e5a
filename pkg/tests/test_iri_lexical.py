import pytest

from apkit import ProfileError
from apkit.iri import (
    NameAllocator,
    compact,
    expand_curie,
    is_absolute_iri,
    local_name,
    local_names,
    snake_case,
)
from apkit.lexical import lexical_check, lexical_form


@pytest.mark.parametrize(
    "curie, iri",
    [
        ("dcat:Dataset", "http://www.w3.org/ns/dcat#Dataset"),
        ("RXNO:0000425", "http://purl.obolibrary.org/obo/RXNO_0000425"),
        ("RO:0004008", "http://purl.obolibrary.org/obo/RO_0004008"),
        ("CHMO:0000595", "http://purl.obolibrary.org/obo/CHMO_0000595"),
        ("obo:CHEBI_23367", "http://purl.obolibrary.org/obo/CHEBI_23367"),
        ("SIO:SIO_001378", "http://semanticscience.org/resource/SIO_001378"),
        ("https://example.org/x", "https://example.org/x"),
    ],
)
def test_expand_curie(curie, iri):
    assert expand_curie(curie) == iri


def test_unknown_prefix_is_missing_context():
    with pytest.raises(ProfileError) as e:
        expand_curie("nope:thing")
    assert e.value.code == "MISSING_CONTEXT"


def test_compact_prefers_longest_namespace_and_turtle_safe_locals():
    prefixes = {"ex": "https://example.org/", "exv": "https://example.org/vocab/"}
    assert compact("https://example.org/vocab/Thing", prefixes) == "exv:Thing"
    assert compact("https://example.org/a b", prefixes) is None
    assert compact("urn:x", prefixes) is None


def test_names():
    assert local_name("http://www.w3.org/ns/dcat#Dataset") == "Dataset"
    assert local_name("http://purl.org/dc/terms/title") == "title"
    assert snake_case("wasGeneratedBy") == "was_generated_by"
    assert snake_case("other identifier") == "other_identifier"
    assert snake_case("has_part") == "has_part"
    assert local_names(["http://a.org/x#title", "http://b.org/title", "http://a.org/x#title"]) == [
        "title", "title_2", "title"
    ]
    alloc = NameAllocator({"date"})
    assert alloc.allocate("date") == "date_2"


def test_absolute_iri():
    assert is_absolute_iri("http://purl.obolibrary.org/obo/CHMO_0000595")
    assert is_absolute_iri("urn:isbn:123")
    assert not is_absolute_iri("relative/path")
    assert not is_absolute_iri("http://bad iri")
    assert not is_absolute_iri(42)


@pytest.mark.parametrize(
    "rule, good, bad",
    [
        ("DATE", ["2024-03-15", "2024-02-29"], ["2024-02-30", "15.03.2024", 20240315, "2023-02-29"]),
        ("DATETIME", ["2024-03-15T10:00:00Z", "2024-03-15T10:00:00.5+01:00"], ["2024-03-15", "2024-03-15T25:00:00"]),
        ("DECIMAL", [7.4, "7.4", 3, "-0.5"], ["seven", True, float("nan")]),
        ("INTEGER", [3, "-12"], [3.5, "1e3", False]),
        ("BOOLEAN", [True, "false", "1"], ["yes", 2]),
        ("ANYURI", ["https://example.org/x", "urn:x:y"], ["not a uri", "x"]),
        ("DURATION", ["P1D", "PT2H30M", "P1Y2M3DT4H"], ["P", "1D", "PT"]),
        ("INCHIKEY", ["LFQSCWFLJHTTHZ-UHFFFAOYSA-N"], ["lfqscwfljhtthz-uhfffaoysa-n", "LFQSCWFLJHTTHZ-UHFFFAOYSA", ""]),
        ("SMILES_NONEMPTY", ["CCO", "c1ccccc1"], ["", "C CO"]),
    ],
)
def test_lexical_rules(rule, good, bad):
    for v in good:
        assert lexical_check(rule, v), (rule, v)
    for v in bad:
        assert not lexical_check(rule, v), (rule, v)


def test_structures_never_pass_and_unknown_rule_raises():
    assert not lexical_check("STRING", {"a": 1})
    assert not lexical_check("STRING", None)
    with pytest.raises(ProfileError) as e:
        lexical_check("NOPE", "x")
    assert e.value.code == "UNKNOWN_RULE"


def test_lexical_form():
    assert lexical_form(True) == "true"
    assert lexical_form(0.5) == "0.5"
    assert lexical_form("x") == "x"
