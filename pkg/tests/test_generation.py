import pytest

from src.hypercube.core import MalformedMatchingError, Matching
from src.search.generation import (
    GenerationConfig,
    generate_matchings,
    generate_matchings_bfs,
    generate_matchings_dfs,
)


def _all_match(d: int) -> Matching:
    return Matching.from_edges(d, [], match=range(1 << d))


@pytest.mark.parametrize(
    "cfg,expected",
    [
        (GenerationConfig(partial=True, dedup=False), 10),
        (GenerationConfig(partial=True), 7),
        (GenerationConfig(partial=True, translate=True), 5),
        (GenerationConfig(partial=True, fixed_directions=(1,)), 10),
        (GenerationConfig(partial=True, cube_edges_only=True, dedup=False), 7),
        (GenerationConfig(), 2),
    ],
)
def test_matchings_of_k4(cfg, expected):
    seed = _all_match(2)
    assert generate_matchings_dfs(seed, cfg=cfg) == expected
    assert len(generate_matchings_bfs(seed, cfg)) == expected
    assert generate_matchings(seed, cfg=cfg) == expected


def test_perfect_matchings_of_k8():
    found = []
    count = generate_matchings_dfs(_all_match(3), found.append)
    assert count == 105 == len(found)
    assert all(m.is_perfect() for m in found)


def test_hybrid_switches_to_dfs():
    cfg = GenerationConfig(partial=True, bfs_limit=1)
    seen = []
    assert generate_matchings(_all_match(3), seen.append, cfg) == len(seen)
    assert len(seen) == len(generate_matchings_bfs(_all_match(3), GenerationConfig(partial=True)))


def test_seed_edges_and_labels_are_kept():
    seed = Matching.from_edges(3, [(0, 7)], forbidden=[1], match=[2, 3, 4, 5])
    out = generate_matchings_bfs(seed, GenerationConfig(dedup=False))
    assert len(out) == 3
    for m in out:
        assert m.partner(0) == 7
        assert m.forbidden_vertices() == [1]
        assert m.uncovered_vertices() == [6]


def test_odd_match_set_needs_partial_mode():
    seed = Matching.from_edges(2, [], match=[0, 1, 2])
    with pytest.raises(MalformedMatchingError):
        generate_matchings_dfs(seed)
    assert generate_matchings_dfs(seed, cfg=GenerationConfig(partial=True, dedup=False)) == 4
