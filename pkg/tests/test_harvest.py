import json
import re
import shutil

import pytest

from apkit import ProfileError
from apkit.harvest import HarvestSource, harvest, load_source
from apkit.rdf import parse_ntriples

from oracles import FIXTURES, predicted_triples

RECORDS = json.loads((FIXTURES / "harvest" / "records.json").read_text())


def no_sleep(_):
    pass


def source(catalog, profiles, path="/catalog"):
    return HarvestSource("mock", catalog.base + path, profiles["chem"], "Dataset")


def test_paged_harvest(catalog, profiles, tmp_path):
    run = harvest(source(catalog, profiles), tmp_path, sleep=no_sleep)
    assert (run.fetched, run.conformant, run.malformed, run.pages) == (4, 3, 0, 2)
    assert sorted(p.name for p in (tmp_path / "records").iterdir()) == [
        "0000-https_example.org_dataset_h-1.json",
        "0001-https_example.org_dataset_h-2.json",
        "0002-https_example.org_dataset_h-3.json",
        "0003-https_example.org_dataset_h-4.json",
    ]
    report = json.loads(next((tmp_path / "reports").glob("0002-*.json")).read_text())
    assert report["conformant"] is False
    assert [f["rule"] for f in report["findings"]] == ["RANGE_DATATYPE"]
    run_json = json.loads((tmp_path / "run.json").read_text())
    assert run_json["fetched"] == 4 and run_json["triples"] == run.triples


def test_graph_size_matches_record_oracle(catalog, profiles, tmp_path):
    run = harvest(source(catalog, profiles), tmp_path, sleep=no_sleep)
    good = [r for r in RECORDS if r["@id"] != "https://example.org/dataset/h-3"]
    expected = sum(predicted_triples(r) for r in good)
    assert expected == 26
    graph = parse_ntriples((tmp_path / "graph.nt").read_text())
    assert len(graph) == run.triples == expected


def test_rerun_is_idempotent(catalog, profiles, tmp_path):
    harvest(source(catalog, profiles), tmp_path, sleep=no_sleep)
    first = {p.relative_to(tmp_path): p.read_bytes() for p in tmp_path.rglob("*") if p.is_file() and p.name != "run.json"}
    harvest(source(catalog, profiles), tmp_path, sleep=no_sleep)
    second = {p.relative_to(tmp_path): p.read_bytes() for p in tmp_path.rglob("*") if p.is_file() and p.name != "run.json"}
    assert first == second


def test_stale_records_are_cleared(catalog, profiles, tmp_path):
    harvest(source(catalog, profiles), tmp_path, sleep=no_sleep)
    harvest(source(catalog, profiles, "/empty"), tmp_path, sleep=no_sleep)
    assert list((tmp_path / "records").glob("*.json")) == []
    assert (tmp_path / "graph.nt").read_text() == ""


def test_flat_array(catalog, profiles, tmp_path):
    run = harvest(source(catalog, profiles, "/flat"), tmp_path, sleep=no_sleep)
    assert (run.fetched, run.conformant, run.pages) == (4, 3, 1)


def test_retry_then_success(catalog, profiles, tmp_path):
    delays = []
    run = harvest(source(catalog, profiles, "/flaky"), tmp_path, sleep=delays.append, backoff=0.5)
    assert run.fetched == 4
    assert catalog.hits["/flaky"] == 3
    assert delays == [0.5, 1.0]


def test_network_failure_after_three_attempts(catalog, profiles, tmp_path):
    with pytest.raises(ProfileError) as e:
        harvest(source(catalog, profiles, "/down"), tmp_path, sleep=no_sleep)
    assert e.value.code == "NETWORK"
    assert catalog.hits["/down"] == 3


def test_client_error_is_not_retried(catalog, profiles, tmp_path):
    with pytest.raises(ProfileError) as e:
        harvest(source(catalog, profiles, "/missing"), tmp_path, sleep=no_sleep)
    assert e.value.code == "NETWORK"
    assert catalog.hits["/missing"] == 1


def test_unreachable_host(profiles, tmp_path):
    src = HarvestSource("gone", "http://127.0.0.1:9/x", profiles["chem"], "Dataset")
    with pytest.raises(ProfileError) as e:
        harvest(src, tmp_path, sleep=no_sleep, timeout=1)
    assert e.value.code == "NETWORK"


def test_malformed_records_are_counted(catalog, profiles, tmp_path):
    run = harvest(source(catalog, profiles, "/garbage"), tmp_path, sleep=no_sleep)
    assert (run.fetched, run.conformant, run.malformed) == (3, 1, 2)
    rules = [f.rule for _, r in run.reports for f in r.findings]
    assert rules == ["MALFORMED_PAYLOAD", "MALFORMED_PAYLOAD"]


def test_next_loop_is_stopped(catalog, profiles, tmp_path):
    run = harvest(source(catalog, profiles, "/loop"), tmp_path, sleep=no_sleep)
    assert run.fetched == 1 and catalog.hits["/loop"] == 1


def test_page_cap(catalog, profiles, tmp_path):
    run = harvest(source(catalog, profiles), tmp_path, sleep=no_sleep, page_cap=1)
    assert (run.pages, run.fetched) == (1, 2)


def test_blank_node_labels_are_per_record(catalog, profiles, tmp_path):
    harvest(source(catalog, profiles), tmp_path, sleep=no_sleep)
    text = (tmp_path / "graph.nt").read_text()
    labels = {tok for line in text.splitlines() for tok in line.split() if tok.startswith("_:")}
    assert labels
    assert all(re.fullmatch(r"_:r[0-9]+b[0-9]+", label) for label in labels)
    # h-3 (index 2) is not conformant and contributes nothing
    assert not any(label.startswith("_:r2b") for label in labels)


def test_load_source_resolves_profile(tmp_path, profiles):
    cfg = tmp_path / "source.yaml"
    shutil.copy(profiles["chem"], tmp_path / "chem.profile.json")
    cfg.write_text((FIXTURES / "harvest" / "source.yaml").read_text())
    src = load_source(cfg)
    assert src.profile == tmp_path / "chem.profile.json"
    assert src.load_profile().id == "chem-dcat-ap"


@pytest.mark.parametrize("body", ["name: x\n", "- a\n", "name: x\nurl: ftp://h/x\nprofile: p\nroot_class: D\n"])
def test_invalid_source(tmp_path, body):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text(body)
    with pytest.raises(ProfileError) as e:
        load_source(cfg)
    assert e.value.code == "INVALID_SOURCE"
