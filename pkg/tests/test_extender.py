import pytest

from src.extender.induction import (
    HViolated,
    _choose_pairing,
    _surgery,
    extend_avoiding,
    extend_to_cycle,
    fink_extend_perfect,
)
from src.extender.stitch import (
    cut_endpoints,
    full_direction,
    lift_cycle,
    reroute_edge,
    side_vertices,
    split_at_edges,
    sub_direction,
)
from src.extender.trace import CaseStep, CaseTrace, cell_name
from src.harness.instances import gen_instance
from src.hypercube.certificates import certificate_check
from src.hypercube.constructors import parity_class_matching
from src.hypercube.core import ConstructionError, Matching, PreconditionError, canonical_edge
from src.hypercube.layers import half_layer_edges
from tests.conftest import assert_extends


# -----------------------------
# Stitching helpers
# -----------------------------
def test_direction_bookkeeping():
    assert sub_direction(1, 2) == 1
    assert sub_direction(3, 2) == 2
    assert full_direction(2, 2) == 3
    with pytest.raises(ValueError):
        sub_direction(2, 2)


def test_sides_and_lifting():
    assert side_vertices(3, 2, 1) == [2, 3, 6, 7]
    assert lift_cycle([0, 1, 3, 2], 3, 1) == [4, 5, 7, 6]
    m = Matching.from_edges(3, [(0, 4), (1, 2), (3, 7)])
    assert cut_endpoints(m, 3, 0) == [0, 3]
    assert cut_endpoints(m, 3, 1) == [4, 7]


def test_split_at_edges():
    assert split_at_edges([0, 1, 3, 2], [(0, 1), (3, 2)]) == [[1, 3], [2, 0]]
    with pytest.raises(ConstructionError):
        split_at_edges([0, 1, 3, 2], [(0, 3)])


def test_reroute_edge():
    assert reroute_edge([0, 1, 3, 2], 1, 3, [5, 7]) == [0, 1, 5, 7, 3, 2]
    assert reroute_edge([0, 1, 3, 2], 3, 1, [7, 5]) == [0, 1, 5, 7, 3, 2]
    with pytest.raises(ConstructionError):
        reroute_edge([0, 1, 3, 2], 0, 3, [7])


# -----------------------------
# Trace
# -----------------------------
def test_trace_records_and_round_trips():
    trace = CaseTrace()
    assert str(trace) == "<empty trace>"
    step = trace.open(6, 0)
    step.direction, step.rule, step.parity_case = 2, "3", 2
    step.tag("b")
    step.tag("biii")
    assert trace.tags() == ["b", "biii"]
    assert trace.tag_counts() == {"b": 1, "biii": 1, "case2": 1, "rule3": 1}
    assert str(trace) == "d=6 i=2 rule 3 case 2 b/biii"
    assert CaseTrace.from_dict(trace.to_dict()) == trace


def test_unknown_tags_are_rejected():
    with pytest.raises(ValueError):
        CaseStep(depth=0, d=5, z=0).tag("c")
    assert cell_name("free", "cross") == "u:free/ui:cross"
    with pytest.raises(ValueError):
        cell_name("free", "far")


# -----------------------------
# Perfect matchings
# -----------------------------
@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("index", range(3))
def test_fink_on_random_perfect_matchings(d, index):
    m = gen_instance("perfect_kqd", d, seed=11, index=index).matching
    cert = fink_extend_perfect(m)
    assert len(cert) == m.n
    assert_extends(cert.vertices, m)


def test_fink_on_parity_classes():
    m = Matching.from_edges(
        5, parity_class_matching(5, 0).edges() + parity_class_matching(5, 1).edges()
    )
    cert = fink_extend_perfect(m)
    assert certificate_check(cert).ok and len(cert) == 32


def test_fink_needs_a_perfect_matching(long_edges_d4):
    with pytest.raises(PreconditionError):
        fink_extend_perfect(long_edges_d4)
    with pytest.raises(PreconditionError):
        fink_extend_perfect(Matching(1))


# -----------------------------
# Arbitrary matchings
# -----------------------------
@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("index", range(4))
def test_extend_to_cycle(d, index):
    m = gen_instance("uniform_kqd", d, seed=5, index=index).matching
    cert = extend_to_cycle(m)
    assert_extends(cert.vertices, m)


def test_extend_to_cycle_ignores_labels(long_edges_d4):
    m = long_edges_d4.copy()
    m.set_label(2, -1)
    cert = extend_to_cycle(m)
    assert_extends(cert.vertices, long_edges_d4)
    with pytest.raises(PreconditionError):
        extend_to_cycle(Matching(1))


# -----------------------------
# Avoiding a vertex
# -----------------------------
@pytest.mark.parametrize("index", range(4))
def test_property_h_violation_is_reported(index):
    inst = gen_instance("h_violating", 5, seed=2, index=index)
    result = extend_avoiding(inst.matching, inst.z)
    assert isinstance(result, HViolated)
    assert not result.ok and result.z == inst.z


@pytest.mark.parametrize("index", range(4))
def test_avoiding_cycle_at_d5(index):
    inst = gen_instance("h_satisfying", 5, seed=3, index=index)
    cert = extend_avoiding(inst.matching, inst.z)
    assert cert.avoided == frozenset({inst.z})
    assert_extends(cert.vertices, inst.matching, [inst.z])


def test_oracle_base_is_traced():
    trace = CaseTrace()
    cert = extend_avoiding(Matching(5), 0, trace=trace)
    assert 0 not in cert.vertices
    assert trace.tag_counts() == {"base:oracle": 1}


def test_avoiding_preconditions():
    with pytest.raises(PreconditionError):
        extend_avoiding(Matching(4), 0)
    with pytest.raises(PreconditionError):
        extend_avoiding(Matching.from_edges(5, [(0, 31)]), 31)


@pytest.mark.slow
@pytest.mark.parametrize("index", range(6))
def test_avoiding_cycle_at_d6_splits_once(index):
    inst = gen_instance("h_satisfying", 6, seed=4, index=index)
    trace = CaseTrace()
    cert = extend_avoiding(inst.matching, inst.z, trace=trace)
    assert_extends(cert.vertices, inst.matching, [inst.z])
    top = trace.steps[0]
    assert top.d == 6 and top.direction is not None
    assert top.rule in ("1", "2", "3") and top.parity_case in (1, 2)
    assert all(s.base == "oracle" for s in trace.steps[1:] if s.d == 5)


@pytest.mark.slow
@pytest.mark.parametrize("index", range(4))
def test_extend_to_cycle_at_d6(index):
    m = gen_instance("uniform_kqd", 6, seed=9, index=index).matching
    assert_extends(extend_to_cycle(m).vertices, m)


# -----------------------------
# Odd-cut pairings
# -----------------------------
def _two_gap_far_side() -> Matching:
    """d=6, i=1, u=2: Q^1_1 holds a direction-2 half-layer missing two edges whose
    four ends are the cut endpoints left after the surgery at u."""
    layers = [half_layer_edges(6, 2, c, side=(1, 1)) for c in (0, 1)]
    layer = next(lay for lay in layers if all(3 not in e for e in lay))
    (a, b), kept, gaps = layer[0], layer[1:6], layer[6:]
    used = {v for e in layer for v in e} | {3}
    spare = [v for v in range(1, 64, 2) if v not in used]
    near = [v for v in spare if v & 2]
    far = [v for v in spare if not v & 2]
    edges = [(2, a), (3, b)] + kept
    edges += list(zip([4, 6, 8, 10], [v for e in gaps for v in e]))
    edges += [(near[0], near[1]), (near[2], near[3]), (near[4], near[5]), (near[6], far[0])]
    return Matching.from_edges(6, edges)


def test_two_gap_layer_pulls_both_gaps_back():
    m = _two_gap_far_side()
    step = CaseStep(depth=0, d=6, z=0)
    p0 = _choose_pairing(m, _surgery(m, 2, 1), 1, step, CaseTrace())
    assert step.pairing == "bii''" and step.subcases == ["bii''"]
    assert step.independent_directions == 1
    assert p0 == [(4, 6), (8, 10)]


def test_saturated_cut_pairs_through_every_dangerous_direction():
    inst = gen_instance("cut_saturated", 6, seed=5, index=0)
    m = inst.matching.translate(inst.z)
    s = _surgery(m, 2, 1)
    step = CaseStep(depth=0, d=6, z=0)
    p0 = _choose_pairing(m, s, 1, step, CaseTrace())
    assert step.pairing == "biii" and step.independent_directions == 3
    shortcuts = [(33, 35), (1, 5), (7, 15)]
    pulled = {canonical_edge(s.n.partner(x), s.n.partner(y)) for x, y in shortcuts}
    assert pulled <= set(p0)
    assert sorted(v for e in p0 for v in e) == sorted(v for v in range(0, 64, 2) if v not in (0, 2))


@pytest.mark.slow
@pytest.mark.parametrize("index", range(3))
def test_saturated_cut_extends_through_biii(index):
    inst = gen_instance("cut_saturated", 6, seed=5, index=index)
    trace = CaseTrace()
    cert = extend_avoiding(inst.matching, inst.z, trace=trace)
    assert_extends(cert.vertices, inst.matching, [inst.z])
    top = trace.steps[0]
    assert (top.rule, top.direction, top.cut) == ("3", 1, 31)
    assert top.u == 2 and top.u_rule == "3'"
    assert top.pairing == "biii" and trace.tag_counts()["biii"] >= 1
