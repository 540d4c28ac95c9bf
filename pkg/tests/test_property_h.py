import pytest
from hypothesis import assume, given, settings

from src.hypercube.core import Matching, PreconditionError
from src.hypercube.property_h import (
    XorMap,
    check_property_h,
    classify_h_violation,
    is_h_maximal,
    make_h_maximal,
    normalize_forbidden,
    satisfies_h,
)
from tests.strategies import matchings


@pytest.fixture
def odd_half_layer_d3() -> Matching:
    """Half-layer of class 1 in direction 1; 6 is the only free vertex of Q^1_0 besides 0."""
    return Matching.from_edges(3, [(2, 3), (4, 5)])


def test_empty_matching_satisfies_h():
    report = check_property_h(Matching(4))
    assert report.satisfied and report.witnesses == []


def test_free_vertex_keeps_h(odd_half_layer_d3):
    report = check_property_h(odd_half_layer_d3)
    assert report.satisfied
    assert report.free_vertices == {1: [6]}


def test_covering_the_lower_half_violates_h(odd_half_layer_d3):
    m = odd_half_layer_d3.with_edges([(1, 6)])
    report = check_property_h(m)
    assert not report.satisfied
    assert report.violating_directions == [1]
    assert report.witnesses[0].layer.parity_class == 1


def test_translated_avoided_vertex(odd_half_layer_d3):
    z = 5
    moved = odd_half_layer_d3.translate(z)
    report = check_property_h(moved, z)
    assert report.satisfied and report.free_vertices == {1: [3]}
    assert not satisfies_h(odd_half_layer_d3.with_edges([(1, 6)]).translate(z), z)


def test_covered_avoided_vertex_is_rejected():
    with pytest.raises(PreconditionError):
        check_property_h(Matching.from_edges(3, [(0, 1)]))


def test_normalize_forbidden_moves_z_to_origin():
    m = Matching.from_edges(3, [(1, 2)])
    norm, tr = normalize_forbidden(m, 3)
    assert norm.edges() == [(1, 2)]
    assert tr == XorMap(3) and tr(3) == 0
    assert tr.edges([(4, 7)]) == [(4, 7)]


def test_violation_case_i(odd_half_layer_d3):
    assert classify_h_violation(odd_half_layer_d3, 6, 1) == "i"


def test_violation_case_ii():
    # near half-layer of class 1 missing 4-5; the rest of Q^1_0 is covered
    m = Matching.from_edges(3, [(2, 3), (1, 6)])
    assert satisfies_h(m)
    assert classify_h_violation(m, 4, 1) == "ii"


def test_harmless_edge():
    assert classify_h_violation(Matching(3), 2, 1) is None


def test_violation_preconditions(odd_half_layer_d3):
    with pytest.raises(PreconditionError):
        classify_h_violation(odd_half_layer_d3, 1, 1)
    with pytest.raises(PreconditionError):
        classify_h_violation(odd_half_layer_d3, 2, 2)
    with pytest.raises(PreconditionError):
        classify_h_violation(odd_half_layer_d3.with_edges([(1, 6)]), 6, 1)


def test_only_violating_edge_left_is_h_maximal(odd_half_layer_d3):
    assert is_h_maximal(odd_half_layer_d3).maximal
    assert make_h_maximal(odd_half_layer_d3) == odd_half_layer_d3


def test_first_addable_edge():
    res = is_h_maximal(Matching(3))
    assert not res.maximal and res.edge == (1, 3)


@settings(max_examples=40, deadline=None)
@given(matchings(4, avoid=[0]))
def test_h_maximalization(m):
    assume(satisfies_h(m))
    mx = make_h_maximal(m)
    assert set(m.edges()) <= set(mx.edges())
    assert satisfies_h(mx)
    assert is_h_maximal(mx).maximal
    assert not mx.is_covered(0)


@settings(max_examples=20, deadline=None)
@given(matchings(4, avoid=[9]))
def test_h_maximalization_commutes_with_translation(m):
    assume(satisfies_h(m, 9))
    direct = make_h_maximal(m, 9)
    via_origin = make_h_maximal(m.translate(9), 0).translate(9)
    assert direct == via_origin
