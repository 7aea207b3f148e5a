import json

import pytest

from apkit import ProfileError
from apkit.ir import ClassDef, RangeSpec, SchemaIR, effective_slot_map
from apkit.layers import (
    ExtensionLayer,
    apply_chem_layer,
    builtin_layer,
    chem_layer_for,
    inject_provenance_layer,
    lint_extension,
    load_layer,
    provenance_layer_for,
    resolve_layer,
)

from oracles import FIXTURES

OBO = "http://purl.obolibrary.org/obo/"
PROV = "http://www.w3.org/ns/prov#"


def test_builtin_layers_lint_clean(mini, plus):
    assert lint_extension(mini, provenance_layer_for(mini)).findings == []
    assert lint_extension(plus, chem_layer_for(plus)).findings == []


def test_lineage(mini, plus, chem):
    assert plus.layer_of == "dcat-ap-mini" and plus.lineage == ("dcat-ap-mini",)
    assert chem.layer_of == "dcat-ap-plus" and chem.lineage == ("dcat-ap-mini", "dcat-ap-plus")
    assert set(mini.classes) < set(plus.classes) < set(chem.classes)


def test_provenance_pattern(plus):
    dga = plus.classes["DataGeneratingActivity"]
    assert dga.parents == ("Activity",)
    slots = effective_slot_map(plus, "DataGeneratingActivity")
    assert slots["has_input_entity"].slot_uri == PROV + "used"
    assert slots["carried_out_by"].slot_uri == PROV + "wasAssociatedWith"
    assert slots["rdf_type"].slot_uri == "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
    assert slots["evaluated_entity"].super_slot == "has_input_entity"
    assert plus.classes["Entity"].class_uri == PROV + "Entity"


def test_chemistry_classes(chem):
    sample = chem.classes["SubstanceSample"]
    assert sample.class_uri == "http://semanticscience.org/resource/SIO_001378"
    assert sample.parents == ("EvaluatedEntity",) and sample.mixins == ("ChemicalSubstance",)
    assert chem.classes["ChemicalSubstance"].is_mixin
    assert chem.classes["ChemicalEntity"].class_uri == OBO + "CHEBI_23367"
    assert chem.datatypes["InChIKey"].lexical_check == "INCHIKEY"
    assert chem.slots["inchikey"].mappings == (OBO + "CHEMINF_000059",)


def test_inject_twice_is_rejected(plus):
    with pytest.raises(ProfileError) as e:
        inject_provenance_layer(plus)
    assert e.value.code == "ALREADY_EXTENDED"


def test_chem_needs_provenance_layer(mini):
    with pytest.raises(ProfileError) as e:
        apply_chem_layer(mini)
    assert e.value.code == "MISSING_BASE_LAYER"


def test_missing_entry_point():
    ir = SchemaIR("bare", classes={"Thing": ClassDef("Thing", "https://example.org/Thing")})
    with pytest.raises(ProfileError) as e:
        inject_provenance_layer(ir)
    assert e.value.code == "MISSING_ENTRY_POINT"


def test_entry_point_found_by_class_uri():
    ir = SchemaIR("renamed", classes={"Process": ClassDef("Process", PROV + "Activity")})
    plus = inject_provenance_layer(ir)
    assert plus.classes["DataGeneratingActivity"].parents == ("Process",)
    assert "Activity" not in plus.classes
    assert "carried_out_by" in plus.classes["Process"].own_slots


def test_layer_mismatch(mini):
    layer = builtin_layer("chem")
    with pytest.raises(ProfileError) as e:
        lint_extension(mini, layer)
    assert e.value.code == "LAYER_MISMATCH"


@pytest.mark.parametrize(
    "fixture, rule, path",
    [
        ("duplicate_slot_uri", "DUPLICATE_SEMANTICS", "/Dataset/headline"),
        ("broadened_cardinality", "BROADENED_CARDINALITY", "/Dataset/issued"),
        ("dropped_mandatory", "MANDATORY_DROPPED", "/Dataset/title"),
    ],
)
def test_crafted_bad_layers(mini, fixture, rule, path):
    report = lint_extension(mini, load_layer(FIXTURES / "layers" / f"{fixture}.layer.json"))
    assert [(f.rule, f.path) for f in report.findings] == [(rule, path)]


def test_narrowing_layer_is_admissible(mini):
    layer = load_layer(FIXTURES / "layers" / "narrowing_ok.layer.json")
    assert lint_extension(mini, layer).findings == []
    ext = layer.apply(mini)
    keyword = effective_slot_map(ext, "Dataset")["keyword"]
    assert (keyword.min_cardinality, keyword.max_cardinality) == (1, 5)


def test_broadened_range(plus):
    layer = ExtensionLayer(
        id="wide", layer_of=plus.id, range_overrides=[("DataGeneratingActivity", "carried_out_by", RangeSpec.of_class("Entity"))]
    )
    assert lint_extension(plus, layer).rules() == ["BROADENED_RANGE"]


def test_name_collision_reported(mini):
    layer = ExtensionLayer(
        id="clash", layer_of=mini.id, new_classes=[ClassDef("Dataset", "https://example.org/OtherDataset")]
    )
    assert lint_extension(mini, layer).rules() == ["NAME_COLLISION"]


def test_layer_json_round_trip():
    layer = builtin_layer("plus")
    again = ExtensionLayer.from_dict(json.loads(layer.to_json()))
    assert again == layer


def test_resolve_layer_file_and_builtin(mini, tmp_path):
    path = tmp_path / "x.layer.json"
    path.write_text((FIXTURES / "layers" / "narrowing_ok.layer.json").read_text())
    assert resolve_layer(str(path), mini).id == "narrowing-ok"
    assert resolve_layer("plus", mini).layer_of == mini.id
