import json

import pytest
from rdflib import Graph
from rdflib.compare import isomorphic

from apkit import ProfileError
from apkit.gen.shacl import IriMode, ShapeIriPolicy, gen_shacl, gen_shacl_jsonld, shape_graph
from apkit.ir import ClassDef, RangeSpec, SchemaIR, SlotDef
from apkit.report import ValidationReport
from apkit.shacl_ingest import compile_shapes, parse_jsonld

from conftest import canonical


def round_trip(ir, policy=None):
    report = ValidationReport()
    back = compile_shapes(parse_jsonld(gen_shacl_jsonld(ir, policy)), ir.id, ir.version, report=report)
    return back, report


@pytest.mark.parametrize("name", ["mini", "plus", "chem"])
def test_round_trip_preserves_content(request, name):
    ir = request.getfixturevalue(name)
    back, report = round_trip(ir)
    assert report.findings == []
    assert canonical(back) == canonical(ir)


@pytest.mark.parametrize("name", ["mini", "plus", "chem"])
def test_turtle_and_jsonld_describe_the_same_graph(request, name):
    ir = request.getfixturevalue(name)
    ttl = Graph().parse(data=gen_shacl(ir).decode(), format="turtle")
    jld = Graph().parse(data=gen_shacl_jsonld(ir).decode(), format="json-ld")
    assert len(ttl) > 0
    assert isomorphic(ttl, jld)


def test_default_policy_iris(chem):
    p = ShapeIriPolicy()
    assert p.node("Dataset") == "https://w3id.org/apkit/shapes#DatasetShape"
    assert p.property("Dataset", "title") == "https://w3id.org/apkit/shapes#Dataset-title"
    assert p.slot("title") == "https://w3id.org/apkit/shapes#slot-title"
    assert p.datatype("InChIKey") == "https://w3id.org/apkit/shapes#InChIKeyDatatypeShape"
    ids = {n["@id"] for n in shape_graph(chem)[1]}
    assert p.node("SubstanceSample") in ids


def test_path_mode_and_custom_template(mini):
    path = ShapeIriPolicy(base="https://example.org/shapes/", mode=IriMode.PATH)
    assert path.node("Dataset") == "https://example.org/shapes/DatasetShape"
    back, report = round_trip(mini, path)
    assert canonical(back) == canonical(mini)
    custom = ShapeIriPolicy(node_template="urn:shape:{ClassName}")
    assert custom.node("Dataset") == "urn:shape:Dataset"


def test_invalid_policy():
    with pytest.raises(ProfileError) as e:
        ShapeIriPolicy(base="not a base").node("Dataset")
    assert e.value.code == "INVALID_POLICY"


def test_policy_collision(mini):
    policy = ShapeIriPolicy(node_template="urn:shape:all")
    with pytest.raises(ProfileError) as e:
        gen_shacl(mini, policy)
    assert e.value.code == "POLICY_COLLISION"


def test_generation_is_deterministic(chem):
    assert gen_shacl(chem) == gen_shacl(chem)
    assert gen_shacl_jsonld(chem) == gen_shacl_jsonld(chem)


def test_inherited_slots_carry_effective_cardinality(chem):
    doc = json.loads(gen_shacl_jsonld(chem))
    graph = doc["@graph"]
    shape = next(n for n in graph if n["@id"].endswith("#Dataset-title"))
    assert shape["sh:minCount"] == 1
    inherited = next(n for n in graph if n["@id"].endswith("#SubstanceSample-title"))
    assert inherited["meta:inherited"] is True


def test_union_range_uses_sh_or(mini):
    doc = json.loads(gen_shacl_jsonld(mini))
    shape = next(n for n in doc["@graph"] if n["@id"].endswith("#CatalogRecord-primary_topic"))
    members = shape["sh:or"]["@list"]
    dcat = "http://www.w3.org/ns/dcat#"
    assert [m["sh:class"]["@id"] for m in members] == [dcat + "Dataset", dcat + "Catalog"]


def test_empty_profile():
    ir = SchemaIR("empty")
    assert Graph().parse(data=gen_shacl(ir).decode(), format="turtle") is not None
    back, _ = round_trip(ir)
    assert back.classes == {} and back.slots == {}


def test_shared_class_uri_round_trips():
    ex = "https://example.org/"
    ir = SchemaIR(
        "twins",
        classes={
            "A": ClassDef("A", ex + "Thing", own_slots=("link",)),
            "B": ClassDef("B", ex + "Thing"),
        },
        slots={"link": SlotDef("link", ex + "link", RangeSpec.of_class("B"))},
    )
    back, _ = round_trip(ir)
    assert canonical(back) == canonical(ir)
