import json

import pytest
from hypothesis import given, strategies as st

from qkan import fixtures
from qkan.workspace import (
    InvalidEntity,
    ParseError,
    UnknownName,
    WorkspaceError,
    load,
    parse_workspace,
    serialize,
    to_document,
    witness_document,
)

MINIMAL = {"quantale": {"kind": "chain-tnorm", "size": 2, "tnorm": "godel"},
           "categories": {"S": {"objects": [{"id": "s", "type": "*"}]}}}


def test_minimal_document():
    ws = parse_workspace(MINIMAL)
    assert ws.category("S").n == 1
    assert ws.category("S").hom.tolist() == [[1]]


def test_reflexivity_failure_is_reported():
    doc = {"quantale": {"kind": "chain-tnorm", "size": 3, "tnorm": "lukasiewicz"},
           "categories": {"A": {"objects": ["x"], "hom": [["x", "x", "0"]]}}}
    with pytest.raises(InvalidEntity) as exc:
        parse_workspace(doc)
    assert exc.value.axiom == "reflexivity" and exc.value.name == "A"


def test_omitted_hom_gives_discrete_category():
    doc = {"quantale": {"kind": "chain-tnorm", "size": 3, "tnorm": "godel"},
           "categories": {"D": {"objects": ["x", "y"]}}}
    D = parse_workspace(doc).category("D")
    assert D.hom.tolist() == [[2, 0], [0, 2]]


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_workspace('{"quantale": {"kind": "chain-tnorm",\n  "size": 2,, }}')
    assert exc.value.line == 2


@pytest.mark.parametrize("doc,error", [
    ({}, ParseError),
    ({"quantale": {"kind": "chain-tnorm"}}, ParseError),
    (dict(MINIMAL, extra=1), ParseError),
    ({"quantale": {"kind": "nope"}}, InvalidEntity),
    (dict(MINIMAL, distributors={"p": {"from": "S", "to": "T"}}), UnknownName),
    (dict(MINIMAL, distributors={"p": {"from": "S", "to": "S", "matrix": [["s", "s", "7/8"]]}}), UnknownName),
    (dict(MINIMAL, functors={"F": {"from": "S", "to": "S", "map": {}}}), UnknownName),
])
def test_document_errors(doc, error):
    with pytest.raises(error):
        parse_workspace(doc)


def test_invalid_distributor_names_the_entry():
    doc = {"quantale": {"kind": "chain-tnorm", "size": 2, "tnorm": "godel"},
           "categories": {"C": {"objects": ["a", "b"], "hom": [["a", "b", "1"]]},
                          "S": {"objects": ["s"]}},
           "distributors": {"p": {"from": "C", "to": "S", "matrix": [["b", "s", "1"]]}}}
    with pytest.raises(InvalidEntity) as exc:
        parse_workspace(doc)
    assert exc.value.entry == ("a", "s")


def test_load_missing_file(tmp_path):
    with pytest.raises(WorkspaceError):
        load(str(tmp_path / "missing.json"))


def test_quantaloid_key_for_diagonals():
    doc = {"quantaloid": {"kind": "diagonals", "atoms": 2},
           "categories": {"M": {"objects": [{"id": "x", "type": "a"}, {"id": "y", "type": "b"}]}}}
    ws = parse_workspace(doc)
    assert ws.category("M").types == (1, 2) or list(ws.category("M").types) == [1, 2]
    assert "quantaloid" in to_document(ws)


cats = st.sampled_from(["2", "godel-3", "lukasiewicz-3", "boolean-4"])


@given(cats, st.data())
def test_round_trip(base, data):
    Q = fixtures.quantale(base)
    names = sorted(fixtures.categories(Q))
    chosen = data.draw(st.lists(st.sampled_from(names), min_size=1, max_size=3, unique=True))
    all_cats = fixtures.categories(Q)
    from qkan.qdist import all_distributor_matrices, QDistributor
    from qkan.workspace import category_decl, distributor_decl

    doc = {"quantale": fixtures.SPECS[base], "categories": {n: category_decl(all_cats[n]) for n in chosen},
           "functors": {}, "distributors": {}}
    A = all_cats[chosen[0]]
    mats = all_distributor_matrices(A, A) if A.n <= 2 else []
    if len(mats):
        M = mats[data.draw(st.integers(0, len(mats) - 1))]
        doc["distributors"]["phi"] = distributor_decl(QDistributor(A, A, M), chosen[0], chosen[0])
    ws = parse_workspace(json.dumps(doc))
    text = serialize(ws)
    again = parse_workspace(text)
    assert serialize(again) == text
    assert to_document(again) == json.loads(text)
    for n in chosen:
        a, b = again.category(n), ws.category(n)
        assert a.names == b.names and a.types == b.types and a.hom.tolist() == b.hom.tolist()


def test_witness_document_parses():
    Q = fixtures.quantale("lukasiewicz-3")
    A = fixtures.chain_category(Q)
    doc = witness_document(fixtures.SPECS["lukasiewicz-3"], {"A": A})
    B = parse_workspace(doc).category("A")
    assert B.names == A.names and B.hom.tolist() == A.hom.tolist()
