import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.hypercube.core import Matching
from src.search.canonical import (
    apply_permutation,
    are_isomorphic,
    canonical_form,
    direction_permutations,
)
from tests.strategies import matchings


def test_group_sizes():
    assert direction_permutations(3).shape == (6, 3)
    assert direction_permutations(3, (1,)).shape == (2, 3)
    assert direction_permutations(3, (1, 2, 3)).shape == (1, 3)


def test_apply_permutation():
    m = Matching.from_edges(3, [(0, 1)])
    assert apply_permutation(m, [2, 1, 3]).edges() == [(0, 2)]
    assert apply_permutation(m, [1, 2, 3]) == m
    with pytest.raises(ValueError):
        apply_permutation(m, [1, 1, 3])


def test_direction_swap_in_q2():
    a = Matching.from_edges(2, [(0, 1)])
    b = Matching.from_edges(2, [(0, 2)])
    assert are_isomorphic(a, b)
    assert not are_isomorphic(a, b, fixed_directions=[1])


def test_translation_is_optional():
    a = Matching.from_edges(2, [(0, 1)])
    b = Matching.from_edges(2, [(2, 3)])
    assert not are_isomorphic(a, b)
    assert are_isomorphic(a, b, translate=True)
    assert not are_isomorphic(a, Matching.from_edges(3, [(0, 1)]))


def test_canonical_form_round_trips_to_a_member_of_the_class(long_edges_d4):
    form = canonical_form(long_edges_d4)
    rep = form.matching()
    assert are_isomorphic(rep, long_edges_d4)
    assert canonical_form(rep) == form
    assert str(form).startswith("CanonicalForm(d=4")


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4).flatmap(matchings), st.data())
def test_canonical_form_is_invariant(m, data):
    perm = data.draw(st.permutations(list(range(1, m.d + 1))))
    z = data.draw(st.integers(0, m.n - 1))
    assert canonical_form(apply_permutation(m, perm)) == canonical_form(m)
    assert canonical_form(m.translate(z), translate=True) == canonical_form(m, translate=True)
