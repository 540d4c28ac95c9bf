import json

import pytest
from pydantic import ValidationError

from src.hypercube.certificates import CycleCertificate, LinearForestCertificate
from src.hypercube.core import Matching
from src.hypercube.documents import (
    CycleDocument,
    MatchingDocument,
    PathDocument,
    ReportDocument,
    dump_cycle,
    dump_json,
    dump_matching,
    load_matching,
    to_dot,
)
from tests.conftest import parse_dot


def test_matching_json_round_trip(long_edges_d4):
    m = long_edges_d4.copy()
    m.set_label(2, -1)
    text = dump_matching(m)
    back = load_matching(text)
    assert back == m
    assert json.loads(text)["forbidden"] == [2]


def test_edges_are_canonicalized():
    doc = MatchingDocument(d=3, edges=[(7, 0), (3, 1)])
    assert doc.edges == [(0, 7), (1, 3)]


@pytest.mark.parametrize(
    "payload",
    [
        {"d": 3, "edges": [[0, 8]]},
        {"d": 3, "edges": [[0, 1], [1, 2]]},
        {"d": 3, "edges": [[0, 1]], "forbidden": [1]},
        {"d": 3, "edges": [[2, 2]]},
        {"d": 0, "edges": []},
        {"d": 3, "edges": [], "colour": "red"},
    ],
)
def test_malformed_documents(payload):
    with pytest.raises(ValidationError):
        MatchingDocument.model_validate(payload)


def test_load_matching_from_file(tmp_matching_file):
    path = tmp_matching_file('{"d": 2, "edges": [[0, 3]], "terminals": []}')
    assert load_matching(path).edges() == [(0, 3)]
    assert load_matching(str(path)).edges() == [(0, 3)]


def test_cycle_and_path_documents(diagonal_d2):
    cert = CycleCertificate(vertices=[0, 3, 1], matching=diagonal_d2, avoided=frozenset({2}))
    doc = CycleDocument.model_validate_json(dump_cycle(cert))
    assert doc.cycle == [0, 3, 1] and doc.avoided == [2]

    m = Matching.from_edges(2, [(0, 3)])
    forest = LinearForestCertificate(paths=[[1, 0, 3, 2]], matching=m, terminals=[1, 2])
    pdoc = PathDocument.model_validate_json(dump_cycle(forest))
    assert pdoc.paths == [[1, 0, 3, 2]] and pdoc.terminals == [1, 2]


def test_report_json_is_sorted_and_stable():
    doc = ReportDocument(suite="lemma_bank", seed=3, total=2, passed=2, tags={"b": 1, "a": 2})
    text = dump_json(doc)
    assert text == dump_json(ReportDocument.model_validate_json(text))
    assert text.index('"a"') < text.index('"b"')


def test_dot_export_parses(diagonal_d2):
    cert = CycleCertificate(vertices=[0, 3, 1], matching=diagonal_d2, avoided=frozenset({2}))
    name, nodes, edges = parse_dot(to_dot(cert, name="triangle"))
    assert name == "triangle"
    assert set(nodes) == {0, 1, 2, 3}
    assert nodes[2]["style"] == "dashed"
    assert nodes[3]["label"] == "11"
    red = [(u, v) for u, v, a in edges if a.get("color") == "red"]
    assert red == [(0, 3)]
    assert len(edges) == 3
