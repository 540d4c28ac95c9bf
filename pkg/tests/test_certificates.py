import numpy as np
import pytest

from src.hypercube.certificates import (
    CycleCertificate,
    LinearForestCertificate,
    certificate_check,
)
from src.hypercube.core import Matching


def test_triangle_through_long_edge(diagonal_d2):
    cert = CycleCertificate(vertices=[0, 3, 1], matching=diagonal_d2)
    assert certificate_check(cert).ok


def test_non_cube_step_outside_matching(diagonal_d2):
    # 1-2 is a long edge that is not in M
    cert = CycleCertificate(vertices=[0, 3, 1, 2], matching=diagonal_d2)
    res = certificate_check(cert)
    assert not res.ok
    assert res.clause == "non-cube edge outside M"
    assert res.index == 2


def test_missing_matching_edge():
    m = Matching.from_edges(3, [(0, 1), (6, 7)])
    cert = CycleCertificate(vertices=[0, 1, 3, 2], matching=m)
    res = certificate_check(cert)
    assert res.clause == "matching edge missing"
    assert res.index == 7


def test_repeated_vertex_and_range():
    m = Matching(2)
    assert certificate_check(CycleCertificate([0, 1, 3, 1], m)).clause == "not simple"
    assert certificate_check(CycleCertificate([0, 1, 9], m)).clause == "vertex out of range"
    assert certificate_check(CycleCertificate([0, 1], m)).clause == "too short"


def test_avoided_vertex_visited():
    m = Matching.from_edges(2, [], forbidden=[2])
    res = certificate_check(CycleCertificate([0, 1, 3, 2], m))
    assert res.clause == "avoided vertex visited" and res.index == 3


def test_linear_forest():
    m = Matching.from_edges(3, [(1, 6)], terminals=[0, 7])
    ok = LinearForestCertificate(paths=[[0, 2, 6, 1, 5, 7]], matching=m, terminals=[0, 7])
    assert certificate_check(ok).ok
    wrong_ends = LinearForestCertificate(paths=[[0, 2, 6, 1, 3]], matching=m, terminals=[0, 7])
    assert certificate_check(wrong_ends).clause == "terminal mismatch"


def test_malformed_input_never_raises():
    res = certificate_check(CycleCertificate(vertices=None, matching=Matching(2)))
    assert not res.ok
    assert certificate_check("not a certificate").clause == "unknown certificate"


def test_alternating_long_steps_are_rejected():
    res = certificate_check(CycleCertificate([0, 7, 0, 7], Matching(3)))
    assert res.ok is False
    assert res.clause == "not simple" and res.index == 2
    assert not res


@pytest.mark.parametrize(
    "vertices,edges,forbidden,clause",
    [
        ([0, 1, 3, 2, 6], [], [], "non-cube edge outside M"),
        ([0, 1, 3, 2], [(4, 5)], [], "matching edge missing"),
        ([0, 1, 3, 1], [], [], "not simple"),
        ([0, 1, 3, 2], [], [3], "avoided vertex visited"),
    ],
)
def test_each_cycle_violation_fails(vertices, edges, forbidden, clause):
    m = Matching.from_edges(3, edges, forbidden=forbidden)
    res = certificate_check(CycleCertificate(vertices, m))
    assert res.ok is False
    assert res.clause == clause


@pytest.mark.parametrize(
    "paths,clause",
    [
        ([[0, 6, 1, 5, 7]], "non-cube edge outside M"),
        ([[0, 1, 3, 7]], "matching edge missing"),
        ([[0, 2, 6, 1, 5, 7], [2, 3]], "not simple"),
    ],
)
def test_each_forest_violation_fails(paths, clause):
    m = Matching.from_edges(3, [(1, 6)], terminals=[0, 7])
    res = certificate_check(LinearForestCertificate(paths=paths, matching=m, terminals=[0, 7]))
    assert res.ok is False
    assert res.clause == clause


def test_numpy_vertices_are_accepted():
    seq = list(np.array([0, 1, 3, 2], dtype=np.int64))
    assert certificate_check(CycleCertificate(seq, Matching(2))).ok
    bad = list(np.array([0, 1, 0, 1], dtype=np.int64))
    assert certificate_check(CycleCertificate(bad, Matching(2))).clause == "not simple"
