import json

import pytest

from apkit.layers import apply_chem_layer, inject_provenance_layer
from apkit.shacl_ingest import import_shacl
from apkit.validate import load_instance

from mock_catalog import CatalogServer
from oracles import MINI_JSONLD, NMR_YAML


@pytest.fixture(scope="session")
def mini():
    return import_shacl(MINI_JSONLD)


@pytest.fixture(scope="session")
def plus(mini):
    return inject_provenance_layer(mini)


@pytest.fixture(scope="session")
def chem(plus):
    return apply_chem_layer(plus)


@pytest.fixture(scope="session")
def profiles(tmp_path_factory, mini, plus, chem):
    """The three profiles written as canonical JSON files."""
    d = tmp_path_factory.mktemp("profiles")
    paths = {}
    for key, ir in (("mini", mini), ("plus", plus), ("chem", chem)):
        paths[key] = d / f"{key}.profile.json"
        paths[key].write_text(ir.canonical_json(), encoding="utf-8")
    return paths


@pytest.fixture
def nmr_doc():
    return load_instance(NMR_YAML, "Dataset")


@pytest.fixture
def catalog():
    with CatalogServer() as server:
        yield server


def canonical(ir) -> str:
    return json.dumps(ir.content_dict(), sort_keys=True)


# one PASS/FAIL line per acceptance criterion

_CRITERIA: dict[str, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or report.outcome != "passed":
        previous = _CRITERIA.get(name)
        if previous != "FAIL":
            _CRITERIA[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        number, _, label = name[len("test_criterion_"):].partition("_")
        terminalreporter.write_line(f"{_CRITERIA[name]}  criterion {int(number):2d}: {label.replace('_', ' ')}")
