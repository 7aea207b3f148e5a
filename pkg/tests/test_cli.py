import json
import subprocess
import sys

import pytest
from rdflib import Graph

from apkit.cli import run
from apkit.ir import load_ir

from oracles import FIXTURES, MINI_JSONLD, NMR_YAML, load_yaml

LAYERS = FIXTURES / "layers"


@pytest.fixture(scope="module")
def chain(tmp_path_factory):
    """mini -> plus -> chem built with the CLI alone."""
    d = tmp_path_factory.mktemp("cli")
    assert run(["import-shacl", str(MINI_JSONLD), "-o", str(d / "mini.json")]) == 0
    assert run(["extend", str(d / "mini.json"), "--layer", "plus", "-o", str(d / "plus.json")]) == 0
    assert run(["extend", str(d / "plus.json"), "--layer", "chem", "-o", str(d / "chem.json")]) == 0
    return d


def test_chain_matches_library(chain, chem):
    assert load_ir(chain / "chem.json").canonical_json() == chem.canonical_json()


def test_extend_two_layers_at_once(chain, tmp_path):
    out = tmp_path / "chem.json"
    assert run(["extend", str(chain / "mini.json"), "--layer", "plus", "--layer", "chem", "-o", str(out)]) == 0
    assert out.read_bytes() == (chain / "chem.json").read_bytes()


def test_extend_refuses_bad_layer(chain, tmp_path):
    out = tmp_path / "bad.json"
    code = run(["extend", str(chain / "mini.json"), "--layer", str(LAYERS / "dropped_mandatory.layer.json"),
                "-o", str(out)])
    assert code == 1 and not out.exists()


def test_lint(chain, capsys):
    assert run(["lint", str(chain / "mini.json"), "--layer", "plus"]) == 0
    capsys.readouterr()
    code = run(["lint", str(chain / "mini.json"), "--layer", str(LAYERS / "broadened_cardinality.layer.json"),
                "--format", "json"])
    assert code == 1
    data = json.loads(capsys.readouterr().out)
    assert [f["rule"] for f in data["findings"]] == ["BROADENED_CARDINALITY"]


def test_lint_wrong_base_is_an_error(chain):
    assert run(["lint", str(chain / "mini.json"), "--layer", "chem"]) == 3


def test_validate(chain, tmp_path, capsys):
    assert run(["validate", str(NMR_YAML), "--profile", str(chain / "chem.json"), "--class", "Dataset"]) == 0
    bad = load_yaml()
    bad["issued"] = "2024-02-30"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad, default=str))
    capsys.readouterr()
    code = run(["validate", str(path), "--profile", str(chain / "chem.json"), "--class", "Dataset",
                "--format", "json"])
    assert code == 1
    report = json.loads(capsys.readouterr().out)
    assert [(f["rule"], f["path"]) for f in report["findings"]] == [("RANGE_DATATYPE", "/issued")]


def test_validate_unknown_class_is_usage(chain):
    assert run(["validate", str(NMR_YAML), "--profile", str(chain / "chem.json"), "--class", "Nope"]) == 2


def test_convert_turtle(chain, tmp_path):
    out = tmp_path / "nmr.ttl"
    assert run(["convert", str(NMR_YAML), "--profile", str(chain / "chem.json"), "--class", "Dataset",
                "--format", "ttl", "-o", str(out)]) == 0
    assert len(Graph().parse(out, format="turtle")) == 38


def test_convert_non_conformant_emits_nothing(chain, tmp_path):
    bad = load_yaml()
    del bad["title"]
    src = tmp_path / "bad.json"
    src.write_text(json.dumps(bad, default=str))
    out = tmp_path / "bad.nt"
    assert run(["convert", str(src), "--profile", str(chain / "chem.json"), "--class", "Dataset",
                "-o", str(out)]) == 1
    assert not out.exists()


def test_gen_commands(chain, tmp_path):
    profile = str(chain / "chem.json")
    assert run(["gen", "shacl", "--profile", profile, "--out-dir", str(tmp_path)]) == 0
    assert run(["gen", "shacl", "--profile", profile, "--jsonld", "--out-dir", str(tmp_path)]) == 0
    assert run(["gen", "jsonschema", "--profile", profile, "--class", "Dataset", "--out-dir", str(tmp_path)]) == 0
    assert run(["gen", "docs", "--profile", profile, "--out-dir", str(tmp_path / "docs")]) == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert {"chem-dcat-ap.shapes.ttl", "chem-dcat-ap.shapes.jsonld", "chem-dcat-ap.Dataset.schema.json",
            "chem-dcat-ap.context.jsonld"} <= names
    assert (tmp_path / "docs" / "index.md").exists()
    reimported = tmp_path / "again.json"
    assert run(["import-shacl", str(tmp_path / "chem-dcat-ap.shapes.jsonld"), "--id", "chem-dcat-ap",
                "-o", str(reimported)]) == 0
    assert load_ir(reimported).content_dict() == load_ir(profile).content_dict()


def test_gen_usage_errors(chain):
    profile = str(chain / "chem.json")
    assert run(["gen", "jsonschema", "--profile", profile]) == 2
    assert run(["gen", "docs", "--profile", profile]) == 2
    assert run(["gen", "shacl", "--profile", profile, "--shape-base", "nope"]) == 2


def test_harvest_command(catalog, tmp_path, profiles, capsys):
    cfg = tmp_path / "source.yaml"
    cfg.write_text(f"name: mock\nurl: {catalog.base}/flat\nprofile: {profiles['chem']}\nroot_class: Dataset\n")
    code = run(["harvest", "--source", str(cfg), "--out", str(tmp_path / "out")])
    assert code == 1  # h-3 is not conformant
    summary = json.loads(capsys.readouterr().out)
    assert (summary["fetched"], summary["conformant"]) == (4, 3)
    cfg.write_text(f"name: mock\nurl: {catalog.base}/missing\nprofile: {profiles['chem']}\nroot_class: Dataset\n")
    assert run(["harvest", "--source", str(cfg), "--out", str(tmp_path / "out")]) == 3


def test_export(tmp_path):
    out = tmp_path / "plus.layer.json"
    assert run(["export", "plus", "-o", str(out)]) == 0
    layer = json.loads(out.read_text())
    assert "DataGeneratingActivity" in {c["name"] for c in layer["new_classes"]}
    assert run(["export", "nmr", "-o", str(tmp_path / "nmr.yaml")]) == 0
    assert (tmp_path / "nmr.yaml").read_bytes() == NMR_YAML.read_bytes()


@pytest.mark.parametrize(
    "argv, code",
    [
        ([], 2),
        (["frobnicate"], 2),
        (["validate", str(NMR_YAML)], 2),
        (["--color", "sometimes", "export", "plus"], 2),
        (["import-shacl", "/nonexistent.jsonld", "-o", "/tmp/x.json"], 3),
        (["--version"], 0),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert run(argv) == code


def test_global_flags_before_or_after_subcommand(tmp_path):
    out = tmp_path / "a.json"
    assert run(["--log-level", "DEBUG", "export", "plus", "-o", str(out)]) == 0
    assert run(["export", "plus", "--color", "never", "-o", str(out)]) == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "apkit", "export", "chem"], capture_output=True, check=True)
    assert json.loads(proc.stdout)["layer_of"] == "dcat-ap-plus"
