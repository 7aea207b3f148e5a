import re

from apkit.gen.docs import gen_docs
from apkit.ir import ClassDef, SchemaIR

LINK = re.compile(r"\]\(([^)]+)\)")


def dangling(pages: dict[str, str]) -> list[tuple[str, str]]:
    """Relative Markdown links that point at no generated page."""
    bad = []
    for name, text in pages.items():
        for target in LINK.findall(text):
            if "://" in target:
                continue
            if target.split("#")[0] not in pages:
                bad.append((name, target))
    return bad


def test_every_class_has_a_page_and_links_resolve(chem):
    pages = gen_docs(chem)
    assert {f"{c}.md" for c in chem.classes} | {"index.md", "layers.md"} == set(pages)
    assert dangling(pages) == []


def test_every_page_reachable_from_index(chem):
    pages = gen_docs(chem)
    seen, todo = set(), ["index.md"]
    while todo:
        page = todo.pop()
        if page in seen:
            continue
        seen.add(page)
        todo.extend(t for t in LINK.findall(pages[page]) if t in pages)
    assert seen == set(pages)


def test_class_page_content(chem):
    page = gen_docs(chem)["SubstanceSample.md"]
    assert "http://semanticscience.org/resource/SIO_001378" in page
    assert "[EvaluatedEntity](EvaluatedEntity.md)" in page
    assert "[ChemicalSubstance](ChemicalSubstance.md)" in page
    row = next(line for line in page.splitlines() if line.startswith("| title |"))
    assert "yes" in row  # inherited


def test_layers_page_shows_chain(chem, mini):
    text = gen_docs(chem)["layers.md"]
    assert text.index("dcat-ap-mini") < text.index("dcat-ap-plus") < text.index("chem-dcat-ap")
    assert "layers.md" not in gen_docs(mini)


def test_empty_profile_has_index_only():
    pages = gen_docs(SchemaIR("empty"))
    assert list(pages) == ["index.md"]
    assert dangling(pages) == []


def test_pipe_in_description_is_escaped():
    ir = SchemaIR("p", classes={"A": ClassDef("A", "https://example.org/A", description="x | y")})
    index = gen_docs(ir)["index.md"]
    assert r"x \| y" in index
