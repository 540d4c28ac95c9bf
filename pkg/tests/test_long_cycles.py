import pytest

from src.extender.long_cycles import (
    kqd_length_bound,
    long_cycle_kqd,
    long_cycle_qd,
    qd_length_bound,
)
from src.harness.instances import gen_instance
from src.hypercube.core import Matching, PreconditionError
from tests.conftest import assert_extends


def test_length_bounds():
    assert [qd_length_bound(d) for d in (2, 3, 4, 5)] == [3, 6, 11, 22]
    assert [kqd_length_bound(d) for d in (2, 3, 4, 5)] == [2, 4, 8, 16]


@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("index", range(3))
def test_long_cycle_through_cube_matching(d, index):
    m = gen_instance("uniform_qd", d, seed=8, index=index).matching
    cert = long_cycle_qd(m)
    assert len(cert) >= qd_length_bound(d)
    assert_extends(cert.vertices, m)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("index", range(3))
def test_long_cycle_through_arbitrary_matching(d, index):
    m = gen_instance("uniform_kqd", d, seed=8, index=index).matching
    cert = long_cycle_kqd(m)
    assert len(cert) >= kqd_length_bound(d)
    assert_extends(cert.vertices, m)


def test_empty_matching_still_gives_a_long_cycle():
    assert len(long_cycle_qd(Matching(4))) >= 11


def test_long_edges_are_rejected_for_qd(long_edges_d4):
    with pytest.raises(PreconditionError):
        long_cycle_qd(long_edges_d4)
    with pytest.raises(PreconditionError):
        long_cycle_kqd(Matching(1))
