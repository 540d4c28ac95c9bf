import pytest

from src.extender.hamlace import (
    HalfLayerPresent,
    avoids_second_vertex,
    hamlace_cycle,
    hamlace_path,
)
from src.harness.instances import gen_instance
from src.hypercube.certificates import LinearForestCertificate, certificate_check
from src.hypercube.core import ConstructionError, Matching, PreconditionError, canonical_edge
from tests.conftest import assert_extends


@pytest.mark.parametrize("index", range(4))
def test_cycle_through_all_but_two(index):
    inst = gen_instance("hamlace", 5, seed=1, index=index)
    cert = hamlace_cycle(inst.matching, inst.x, inst.y)
    assert len(cert) == 30
    assert cert.avoided == frozenset({inst.x, inst.y})
    assert_extends(cert.vertices, inst.matching, [inst.x, inst.y])


@pytest.mark.parametrize("index", range(4))
def test_path_from_x_to_y(index):
    inst = gen_instance("hamlace", 5, seed=1, index=index)
    m, x, y = inst.matching, inst.x, inst.y
    a, b = m.edges()[0]
    full = m.without_edges([(a, b)]).with_edges([canonical_edge(x, a), canonical_edge(y, b)])
    cert = hamlace_path(full, x, y)
    assert isinstance(cert, LinearForestCertificate)
    assert certificate_check(cert).ok
    [path] = cert.paths
    assert len(path) == 32 and path[0] == x and path[-1] == y


@pytest.mark.parametrize("index", range(4))
def test_half_layer_blocks_lacing(index):
    inst = gen_instance("hamlace_planted", 5, seed=1, index=index)
    verdict = hamlace_cycle(inst.matching, inst.x, inst.y)
    assert isinstance(verdict, HalfLayerPresent)
    assert verdict.directions and not verdict.ok


def test_second_vertex_follows_parity():
    inst = gen_instance("hamlace", 5, seed=1)
    cert = hamlace_cycle(inst.matching, inst.x, inst.y)
    assert avoids_second_vertex(inst.matching, cert.vertices, inst.x, inst.y)
    with pytest.raises(ConstructionError):
        avoids_second_vertex(inst.matching, cert.vertices + [inst.y], inst.x, inst.y)
    with pytest.raises(PreconditionError):
        avoids_second_vertex(inst.matching, cert.vertices + [inst.x], inst.x, inst.y)


def test_lacing_preconditions():
    inst = gen_instance("hamlace", 5, seed=1)
    m, x, y = inst.matching, inst.x, inst.y
    with pytest.raises(PreconditionError):
        hamlace_cycle(Matching.from_edges(4, [], forbidden=[0, 1]), 0, 1)
    with pytest.raises(PreconditionError):
        hamlace_cycle(m, x, x ^ 3)
    with pytest.raises(PreconditionError):
        hamlace_path(m, x, y)
    perfect = m.with_edges([canonical_edge(x, y)])
    with pytest.raises(PreconditionError):
        hamlace_path(perfect, x, y)
