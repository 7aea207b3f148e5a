import json

import pytest
from jsonschema import Draft202012Validator, FormatChecker

from apkit import ProfileError
from apkit.gen.jsonschema import gen_jsonschema, jsonld_context, jsonschema_dict
from apkit.ir import ClassDef, SchemaIR
from apkit.validate import make_document, project_to_base, validate

from oracles import FIXTURES, DocumentGenerator, load_yaml, mutants

MUTANTS = mutants()


def plain(doc):
    """YAML dates become ISO strings, as in a JSON payload."""
    return make_document(doc, "Dataset").root


_CHECKERS = {}


def checker(ir, root="Dataset"):
    key = (ir.id, root)
    if key not in _CHECKERS:
        schema = jsonschema_dict(ir, root)
        Draft202012Validator.check_schema(schema)
        _CHECKERS[key] = Draft202012Validator(schema, format_checker=FormatChecker())
    return _CHECKERS[key]


def test_schema_is_valid_2020_12(chem):
    schema = json.loads(gen_jsonschema(chem, "Dataset"))
    assert schema["$schema"] == "https://json-schema.org/draft/2020-12/schema"
    Draft202012Validator.check_schema(schema)
    assert gen_jsonschema(chem, "Dataset") == gen_jsonschema(chem, "Dataset")


def test_nmr_and_projections_accepted(mini, plus, chem, nmr_doc):
    assert list(checker(chem).iter_errors(nmr_doc.root)) == []
    to_plus = project_to_base(nmr_doc, chem, plus)
    assert list(checker(plus).iter_errors(to_plus.root)) == []
    to_mini = project_to_base(to_plus, plus, mini)
    assert list(checker(mini).iter_errors(to_mini.root)) == []


@pytest.mark.parametrize("name", sorted(MUTANTS))
def test_mutants_rejected(chem, name):
    doc, _, _ = MUTANTS[name]
    assert not checker(chem).is_valid(plain(doc))


def test_harvest_fixture_records_agree_with_validator(chem):
    records = json.loads((FIXTURES / "harvest" / "records.json").read_text())
    v = checker(chem)
    for record in records:
        expected = validate(make_document(record, "Dataset"), chem).conformant
        assert v.is_valid(record) == expected, record["@id"]


@pytest.mark.parametrize("seed", range(25))
def test_random_documents_accepted(chem, seed):
    gen = DocumentGenerator(json.loads(chem.canonical_json()))
    doc = gen.document("Dataset", seed)
    assert list(checker(chem).iter_errors(doc)) == []


def test_type_required_off_default_member(chem):
    doc = plain(load_yaml())
    sample = doc["was_generated_by"][0]["evaluated_entity"][0]
    del sample["@type"]
    # without @type the sample is read as EvaluatedEntity, which has no inchikey
    assert not checker(chem).is_valid(doc)
    assert not validate(make_document(doc, "Dataset"), chem).conformant


def test_iri_reference_branch(chem):
    doc = plain(load_yaml())
    doc["was_generated_by"] = "https://example.org/activity/elsewhere"
    assert checker(chem).is_valid(doc)
    doc["was_generated_by"] = "elsewhere"
    assert not checker(chem).is_valid(doc)


def test_empty_class_gives_one_definition():
    ir = SchemaIR("empty", classes={"Thing": ClassDef("Thing", "https://example.org/Thing")})
    schema = jsonschema_dict(ir, "Thing")
    assert list(schema["$defs"]) == ["Thing"]
    assert "properties" not in schema["$defs"]["Thing"]
    v = Draft202012Validator(schema)
    assert v.is_valid({}) and v.is_valid({"@id": "https://example.org/t"})
    assert not v.is_valid({"x": 1})


def test_unknown_root_class(chem):
    with pytest.raises(ProfileError) as e:
        jsonschema_dict(chem, "Nope")
    assert e.value.code == "UNKNOWN_ROOT_CLASS"


def test_context_maps_slots_to_uris(chem):
    ctx = jsonld_context(chem)["@context"]
    assert ctx["title"] in ("http://purl.org/dc/terms/title", {"@id": "http://purl.org/dc/terms/title"})
