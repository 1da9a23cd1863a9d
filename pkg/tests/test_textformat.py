import random
from pathlib import Path

import pytest

from cwa.chains import ChainHomotopy
from cwa.core_model import CorePresentation, sphere_core
from cwa.generators import random_core, random_presentation, random_retract_case
from cwa.textformat import (
    CoreError,
    DanglingReferenceError,
    DocumentError,
    DocumentModel,
    FormatError,
    HomotopyEntry,
    MapEntry,
    Ref,
    parse,
    parses,
    serialize,
    validate_document,
)

FIXTURES = sorted((Path(__file__).parent / "fixtures").glob("*.cwa"))

RP2 = """\
# projective plane
[core S0]
cell s dim=0

[complex rp2 core=S0]
cell e dim=1 layer=1
cell f dim=2 layer=2
attach f deg 1: 1 x 1
  2
"""


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.name)
def test_fixture_round_trip(path):
    text = path.read_text()
    doc = parse(path)
    assert serialize(doc) == text
    assert parses(serialize(doc)) == doc
    assert validate_document(doc) == []


def test_comments_and_layout_are_not_significant():
    doc = parses(RP2)
    again = parses("[core S0]\n  cell s dim=0   # base\n[complex rp2 core=S0]\n"
                   "cell e dim=1\ncell f dim=2\nattach f deg 1: 1 x 1\n\t2\n")
    assert doc == again
    x = doc.complexes["rp2"]
    assert x.cell("f").image("s") == {("e", "s"): 2}
    assert x.cell("e").layer == 1


def _random_doc(rng):
    core = random_core(rng)
    doc = DocumentModel({core.name: core})
    for i in range(rng.randint(1, 3)):
        doc.complexes[f"x{i}"] = random_presentation(rng, core, 8, proper=rng.random() < 0.5)
    return doc


def test_random_documents_round_trip():
    rng = random.Random(21)
    for _ in range(60):
        doc = _random_doc(rng)
        text = serialize(doc)
        assert parses(text) == doc
        assert serialize(parses(text)) == text


def test_maps_and_homotopies_round_trip():
    rng = random.Random(8)
    for _ in range(20):
        case = random_retract_case(rng)
        a, b = case.x.core, case.core
        if a.name == b.name:
            continue
        h = ChainHomotopy.zero(b.chain, b.chain)
        doc = DocumentModel({a.name: a, b.name: b}, {"x": case.x},
                            {"alpha": MapEntry(Ref(a.name), Ref(b.name), case.alpha),
                             "beta": MapEntry(Ref(b.name), Ref(a.name), case.beta)},
                            {"h": HomotopyEntry(Ref(b.name), Ref(b.name), h)})
        text = serialize(doc)
        back = parses(text)
        assert back == doc
        assert back.maps["alpha"].map == case.alpha


def test_restricted_reference_resolves_to_subcomplex():
    doc = parse(Path(__file__).parent / "fixtures" / "intervals.cwa")
    entry = doc.maps["glue"]
    assert entry.source == Ref("I1", ("p", "q"))
    assert str(entry.source) == "I1[p,q]"
    assert entry.map.source.rank(0) == 2


@pytest.mark.parametrize("text,line,col", [
    ("cell s dim=0\n", 1, 1),
    ("[core A]\ncell s\n", 2, 1),
    ("[core A]\ncell s dim=x\n", 2, 12),
    ("[core A]\n  cell s dim=0 layer=1\n", 2, 16),
    ("[core A]\ncell s dim=0\n[widget B]\n", 3, 2),
    ("[complex X]\n", 1, 1),
    ("[complex X core=A colour=red]\n", 1, 19),
    ("[core A]\ncell s dim=0\ncell t dim=1\ndeg 1: 1 x 1\n  1 y\n", 5, 5),
    ("[core A]\ncell s dim=0\ncell t dim=1\ndeg 1: 1 x 2\n  1\n", 4, 1),
    ("[core A]\nfrobnicate\n", 2, 1),
    ("[core A]\ncell s dim=0\ndeg one: 1 x 1\n", 3, 5),
])
def test_syntax_errors_carry_line_and_column(text, line, col):
    with pytest.raises(FormatError) as info:
        parses(text)
    assert (info.value.line, info.value.col) == (line, col)
    assert str(info.value).startswith(f"{line}:{col}: ")


def test_dangling_core_is_named():
    with pytest.raises(DanglingReferenceError) as info:
        parses("[complex X core=Q]\ncell a dim=1\n")
    assert info.value.name == "Q" and info.value.line == 1
    assert "'Q'" in str(info.value)


def test_dangling_references_in_maps_and_attach():
    base = "[core S0]\ncell s dim=0\n[complex X core=S0]\ncell a dim=1\n"
    with pytest.raises(DanglingReferenceError) as info:
        parses(base + "[map f from=X to=Y]\n")
    assert info.value.name == "Y"
    with pytest.raises(DanglingReferenceError) as info:
        parses(base + "[map f from=X[a,zz] to=X]\n")
    assert info.value.name == "zz"
    with pytest.raises(DanglingReferenceError) as info:
        parses(base + "attach b deg 0: 0 x 1\n")
    assert info.value.name == "b"


def test_document_errors():
    base = "[core S0]\ncell s dim=0\n"
    with pytest.raises(DocumentError, match="defined twice"):
        parses(base + base)
    with pytest.raises(DocumentError, match="expected 1 x 1"):
        parses(base + "[map f from=S0 to=S0]\ndeg 0: 2 x 1\n 1 1\n")
    with pytest.raises(DocumentError, match="expected 0 x 1"):
        parses(base + "[complex X core=S0]\ncell a dim=1\nattach a deg 0: 1 x 1\n 1\n")
    # boundary squares to a nonzero map
    with pytest.raises(CoreError) as info:
        parses("[core A]\ncell p dim=0\ncell e dim=1\ncell f dim=2\n"
               "deg 1: 1 x 1\n 1\ndeg 2: 1 x 1\n 1\n")
    assert info.value.violation.degree == 2


def test_validate_document_reports_bad_complex_and_map():
    doc = parses("[core S0]\ncell s dim=0\n"
                 "[complex X core=S0]\ncell a dim=1\ncell b dim=2\ncell c dim=3\n"
                 "attach b deg 1: 1 x 1\n 1\nattach c deg 2: 1 x 1\n 1\n"
                 "[complex C core=S0]\ncell p dim=1\ncell q dim=2\nattach q deg 1: 1 x 1\n 1\n"
                 "[map f from=C to=C]\ndeg 1: 1 x 1\n 1\n")
    problems = dict(validate_document(doc))
    assert set(problems) == {"X", "f"}
    assert problems["X"].degree == 2
    assert problems["f"].degree is not None


def test_merged_documents():
    a = parses(RP2)
    b = parses("[core S0]\ncell s dim=0\n[complex c core=S0]\ncell e dim=1\n")
    m = a.merged(b)
    assert list(m.complexes) == ["rp2", "c"]
    with pytest.raises(DocumentError):
        a.merged(a)
    clash = DocumentModel({"S0": CorePresentation("S0", sphere_core(1).chain)})
    with pytest.raises(DocumentError, match="differently"):
        a.merged(clash)
