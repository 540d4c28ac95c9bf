import pytest

from src.harness.instances import KINDS, gen_instance, rng_for
from src.hypercube.core import DimensionError, PreconditionError, parity
from src.hypercube.layers import layer_directions
from src.hypercube.property_h import satisfies_h


@pytest.mark.parametrize("kind", KINDS)
def test_every_family_builds_at_d5(kind):
    inst = gen_instance(kind, 5, seed=0, index=1)
    assert inst.kind == kind and inst.d == 5
    again = gen_instance(kind, 5, seed=0, index=1)
    assert again.matching == inst.matching and again.marked == inst.marked


def test_seed_and_index_select_the_stream():
    a = rng_for(3, 4).integers(0, 1 << 30, size=4).tolist()
    assert a == rng_for(3, 4).integers(0, 1 << 30, size=4).tolist()
    assert a != rng_for(3, 5).integers(0, 1 << 30, size=4).tolist()


def test_parity_class_family():
    m = gen_instance("parity_class", 3, seed=1).matching
    assert len(m) == 2
    assert m.covered_vertices() == [0, 3, 5, 6]


def test_perfect_family():
    m = gen_instance("perfect_kqd", 4, seed=1).matching
    assert len(m) == 8 and m.is_perfect()


def test_uniform_qd_family_uses_cube_edges():
    for index in range(5):
        assert gen_instance("uniform_qd", 4, seed=2, index=index).matching.is_cube_matching()


def test_cut_saturated_family():
    for index in range(3):
        inst = gen_instance("cut_saturated", 6, seed=2, index=index)
        base = inst.matching.translate(inst.z)
        assert base.uncovered_vertices() == [0, 13]
        assert all((u ^ v) & 1 and u ^ v != 1 for u, v in base.edges())
        assert satisfies_h(inst.matching, inst.z)


@pytest.mark.parametrize("index", range(5))
def test_marked_families(index):
    bad = gen_instance("h_violating", 4, seed=6, index=index)
    assert not bad.matching.is_covered(bad.z)
    assert not satisfies_h(bad.matching, bad.z)
    assert bad.document().forbidden == [bad.z]

    lace = gen_instance("hamlace", 5, seed=6, index=index)
    assert sorted(lace.matching.uncovered_vertices()) == sorted((lace.x, lace.y))
    assert parity(lace.x) != parity(lace.y)
    assert layer_directions(lace.matching, 0) == []

    planted = gen_instance("hamlace_planted", 5, seed=6, index=index)
    assert layer_directions(planted.matching, 0)
    assert parity(planted.x) != parity(planted.y)


@pytest.mark.parametrize(
    "kind,d,error",
    [
        ("mystery", 4, PreconditionError),
        ("h_violating", 2, PreconditionError),
        ("hamlace", 4, PreconditionError),
        ("quad_planted", 3, PreconditionError),
        ("uniform_kqd", 0, DimensionError),
    ],
)
def test_bad_requests(kind, d, error):
    with pytest.raises(error):
        gen_instance(kind, d, seed=0)
