import json

import pytest

from src.cli import EXIT_BUDGET, EXIT_MALFORMED, EXIT_NEGATIVE, EXIT_OK, main
from src.harness.instances import gen_instance
from src.extender.trace import CaseTrace
from src.hypercube.documents import TraceDocument, dump_json
from tests.conftest import parse_dot


@pytest.fixture
def instance_file(tmp_path):
    def write(kind: str, d: int, seed: int = 0, index: int = 0):
        path = tmp_path / f"{kind}_{d}_{index}.json"
        path.write_text(dump_json(gen_instance(kind, d, seed, index).document()))
        return str(path)

    return write


def test_gen_prints_a_matching_document(capsys):
    assert main(["gen", "--kind", "parity_class", "--d", "3", "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["d"] == 3 and len(doc["edges"]) == 2


def test_extend_writes_json_and_dot(tmp_matching_file, tmp_path, capsys):
    src = tmp_matching_file('{"d": 2, "edges": [[0, 3]]}')
    out, dot = tmp_path / "cycle.json", tmp_path / "cycle.dot"
    code = main(["extend", "--in", str(src), "--out", str(out), "--dot", str(dot)])
    assert code == EXIT_OK
    assert "Cycle of length 3" in capsys.readouterr().out
    assert len(json.loads(out.read_text())["cycle"]) == 3
    cycle = json.loads(out.read_text())["cycle"]
    _, nodes, edges = parse_dot(dot.read_text())
    assert len(edges) == 3 and set(nodes) == set(cycle)
    assert [(u, v) for u, v, a in edges if a.get("color") == "red"] == [(0, 3)]


def test_extend_reports_h_violation(instance_file, tmp_path, capsys):
    trace = tmp_path / "trace.json"
    code = main(["extend", "--in", instance_file("h_violating", 5), "--trace", str(trace)])
    assert code == EXIT_NEGATIVE
    assert "(H) fails" in capsys.readouterr().out
    assert json.loads(trace.read_text()) == {"steps": [], "tags": {}}


def test_trace_file_round_trips(instance_file, tmp_path):
    trace = tmp_path / "trace.json"
    code = main(["hamlace", "--in", instance_file("hamlace", 5), "--trace", str(trace)])
    assert code == EXIT_OK
    doc = TraceDocument.model_validate_json(trace.read_text())
    assert doc.tags == {"base:oracle": 1}
    assert CaseTrace.from_dict({"steps": doc.steps}).tag_counts() == doc.tags


def test_long_cycle_option(instance_file, capsys):
    code = main(["extend", "--in", instance_file("uniform_qd", 4), "--long", "qd", "--json"])
    assert code == EXIT_OK
    assert len(json.loads(capsys.readouterr().out)["cycle"]) >= 11


def test_oracle_longest_cycle(tmp_matching_file, capsys):
    src = tmp_matching_file('{"d": 3, "edges": [[0, 3], [5, 6]]}')
    assert main(["oracle", "--in", str(src), "--max", "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["result"] == "yes" and doc["max_length"] == 6


def test_oracle_budget_exit_code(tmp_matching_file):
    src = tmp_matching_file('{"d": 3, "edges": [[0, 3], [5, 6]]}')
    assert main(["oracle", "--in", str(src), "--max", "--budget", "1"]) == EXIT_BUDGET


def test_oracle_linear_forest(tmp_matching_file, capsys):
    src = tmp_matching_file('{"d": 3, "edges": [[1, 6]], "terminals": [0, 7]}')
    assert main(["oracle", "--in", str(src), "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["cycle"] is None and len(doc["paths"]) == 1


def test_check_h(instance_file, capsys):
    assert main(["check-h", "--in", instance_file("h_violating", 4), "--json"]) == EXIT_NEGATIVE
    doc = json.loads(capsys.readouterr().out)
    assert doc["satisfied"] is False and len(doc["violating_directions"]) == 1


def test_layers_listing(tmp_matching_file, capsys):
    src = tmp_matching_file('{"d": 3, "edges": [[2, 3], [4, 5]]}')
    assert main(["layers", "--in", str(src), "--kinds", "half"]) == EXIT_OK
    assert "half direction 1 class 1" in capsys.readouterr().out


def test_maximalize_and_shorten(tmp_matching_file, tmp_path, capsys):
    src = tmp_matching_file('{"d": 3, "edges": [[0, 7]]}')
    grown = tmp_path / "grown.json"
    assert main(["maximalize", "--in", str(src), "--out", str(grown)]) == EXIT_OK
    assert main(["shorten", "--in", str(grown), "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out.split("\n", 1)[1])
    assert all(bin(u ^ v).count("1") == 1 for u, v in doc["edges"])


def test_shorten_rejects_non_maximal_input(tmp_matching_file):
    src = tmp_matching_file('{"d": 3, "edges": [[0, 7]]}')
    assert main(["shorten", "--in", str(src)]) == EXIT_MALFORMED


def test_hamlace_uses_marked_vertices(instance_file, capsys):
    assert main(["hamlace", "--in", instance_file("hamlace", 5)]) == EXIT_OK
    assert "Cycle of length 30" in capsys.readouterr().out
    assert main(["hamlace", "--in", instance_file("hamlace_planted", 5)]) == EXIT_NEGATIVE


@pytest.mark.parametrize(
    "text", ['{"d": 3, "edges": [[0, 8]]}', '{"d": 3, "edges": [[0, 1], [1, 2]]}', "not json"]
)
def test_malformed_input(tmp_matching_file, text):
    src = tmp_matching_file(text)
    assert main(["extend", "--in", str(src)]) == EXIT_MALFORMED


def test_missing_file(tmp_path):
    assert main(["check-h", "--in", str(tmp_path / "absent.json")]) == EXIT_MALFORMED


def test_suite_command(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["suite", "length_bounds", "--count", "2", "--dims", "4", "--jobs", "1",
                 "--fixture-dir", str(tmp_path), "--out", str(out)])
    assert code == EXIT_OK
    assert "Suite: length_bounds" in capsys.readouterr().out
    assert json.loads(out.read_text())["passed"] == 3
