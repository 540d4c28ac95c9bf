import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.hypercube.certificates import LinearForestCertificate, certificate_check
from src.hypercube.core import ConstructionError, MalformedMatchingError, Matching
from src.search.oracle import (
    SearchConfig,
    SearchOutcome,
    cycle_from_edges,
    extend_linear_forest,
    extends,
    max_cycle_length,
)
from tests.conftest import assert_extends, extending_cycles
from tests.strategies import matchings


def test_diagonal_of_q2_closes_a_triangle(diagonal_d2):
    res = extends(diagonal_d2)
    assert res.found
    assert certificate_check(res.certificate).ok
    assert_extends(res.certificate.vertices, diagonal_d2)
    assert max_cycle_length(diagonal_d2).max_length == 3


def test_even_class_of_q3_misses_two_vertices(even_perfect_d3):
    res = max_cycle_length(even_perfect_d3)
    assert res.outcome is SearchOutcome.YES
    assert res.max_length == 6


def test_empty_matching_uses_gray_code():
    res = extends(Matching(4))
    assert res.found and res.nodes == 0
    assert res.max_length == 16
    assert_extends(res.certificate.vertices, Matching(4))


@settings(max_examples=40, deadline=None)
@given(matchings(3), st.data())
def test_oracle_agrees_with_brute_force(m, data):
    free = [v for v in range(m.n) if not m.is_covered(v)]
    avoid = data.draw(st.lists(st.sampled_from(free), max_size=1, unique=True)) if free else []
    cycles = extending_cycles(m, avoid)
    res = extends(m, avoid=avoid)
    assert res.found == bool(cycles)
    if res.found:
        assert_extends(res.certificate.vertices, m, avoid)
    longest = max_cycle_length(m, avoid=avoid)
    assert (longest.max_length or 0) == max((len(c) for c in cycles), default=0)


@pytest.mark.parametrize("selection", ["min_free_degree", "first"])
@pytest.mark.parametrize("seed", [0, 7])
def test_search_settings_do_not_change_the_answer(long_edges_d4, selection, seed):
    cfg = SearchConfig(vertex_selection=selection, seed=seed)
    res = extends(long_edges_d4, cfg)
    assert res.found
    assert_extends(res.certificate.vertices, long_edges_d4)


def test_direction_order():
    assert SearchConfig().direction_order(4) == [1, 2, 3, 4]
    assert sorted(SearchConfig(seed=3).direction_order(4)) == [1, 2, 3, 4]


def test_linear_forest():
    m = Matching.from_edges(3, [(1, 6)])
    res = extend_linear_forest(m, [0, 7])
    assert res.found
    cert = res.certificate
    assert isinstance(cert, LinearForestCertificate)
    assert certificate_check(cert).ok
    assert {v for p in cert.paths for v in (p[0], p[-1])} == {0, 7}


def test_linear_forest_needs_terminals():
    with pytest.raises(MalformedMatchingError):
        extend_linear_forest(Matching(3), [])
    with pytest.raises(MalformedMatchingError):
        extend_linear_forest(Matching.from_edges(3, [(0, 1)]), [0, 3])


def test_budget_is_never_reported_as_no(even_perfect_d3):
    res = max_cycle_length(even_perfect_d3, SearchConfig(node_budget=1))
    assert res.outcome is SearchOutcome.BUDGET
    assert res.nodes == 1


@pytest.mark.parametrize(
    "m,avoid",
    [
        (Matching.from_edges(2, [], match=[0, 1]), []),
        (Matching.from_edges(2, [(0, 1)]), [1]),
        (Matching.from_edges(2, [], terminals=[0]), []),
    ],
)
def test_malformed_search_input(m, avoid):
    with pytest.raises(MalformedMatchingError):
        extends(m, avoid=avoid)


def test_bad_search_config():
    with pytest.raises(ValueError):
        SearchConfig(node_budget=0)
    with pytest.raises(ValueError):
        SearchConfig(vertex_selection="random")


def test_cycle_from_edges():
    assert cycle_from_edges([(0, 1), (1, 3), (2, 3), (0, 2)]) == [0, 1, 3, 2]
    with pytest.raises(ConstructionError):
        cycle_from_edges([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
