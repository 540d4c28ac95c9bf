"""
Hamilton laceability with a prescribed perfect matching.

A perfect matching of K(Q_d - {x, y}), x and y of opposite parity, extends
to a cycle through every other vertex exactly when it contains no
half-layer. The path form asks for a Hamilton path from x to y through a
perfect matching M of K(Q_d); it reduces to the cycle form on
M - x x^M - y y^M + x^M y^M.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

from src.hypercube.certificates import (
    CycleCertificate,
    LinearForestCertificate,
    certificate_check,
)
from src.hypercube.core import (
    ConstructionError,
    Matching,
    PreconditionError,
    canonical_edge,
    check_vertex,
    parity,
)
from src.hypercube.layers import layer_directions
from src.extender.induction import HViolated, extend_avoiding
from src.extender.trace import CaseTrace
from src.search.oracle import SearchConfig

logger = logging.getLogger("cubeham.hamlace")

MIN_DIMENSION = 5


@dataclass
class HalfLayerPresent:
    """The matching contains half-layers in `directions`; no extension exists."""

    directions: List[int]
    matching: Optional[Matching] = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return False


def _check_pair(d: int, x: int, y: int) -> None:
    if d < MIN_DIMENSION:
        raise PreconditionError(f"laceability needs d >= {MIN_DIMENSION}, got {d}")
    check_vertex(d, x)
    check_vertex(d, y)
    if parity(x) == parity(y):
        raise PreconditionError(f"{x} and {y} have the same parity")


def avoids_second_vertex(m: Matching, cycle: Sequence[int], x: int, y: int) -> bool:
    """Whether a cycle through the perfect matching m of K(Q_d - {x, y}) that
    misses x also misses y.

    The answer must be "yes" exactly when x and y differ in parity; a
    disagreement raises ConstructionError.
    """
    verts = set(cycle)
    if x in verts:
        raise PreconditionError(f"cycle passes through {x}")
    free = set(m.uncovered_vertices())
    if free != {x, y}:
        raise PreconditionError(f"matching leaves {sorted(free)} uncovered, expected {{{x}, {y}}}")
    avoided = y not in verts
    expected = parity(x) != parity(y)
    if avoided != expected:
        raise ConstructionError(
            f"cycle of length {len(cycle)} {'misses' if avoided else 'visits'} {y} "
            f"although parities are {parity(x)} and {parity(y)}"
        )
    return avoided


def hamlace_cycle(
    m: Matching,
    x: int,
    y: int,
    cfg: Optional[SearchConfig] = None,
    trace: Optional[CaseTrace] = None,
) -> Union[CycleCertificate, HalfLayerPresent]:
    """Cycle through the 2^d - 2 vertices other than x and y extending m."""
    _check_pair(m.d, x, y)
    work = m.edges_only()
    free = work.uncovered_vertices()
    if sorted(free) != sorted((x, y)):
        raise PreconditionError(
            f"matching must cover every vertex but {x} and {y}; uncovered: {free}"
        )
    halves = layer_directions(work, 0)
    if halves:
        logger.info("Half-layers in directions %s block laceability", halves)
        return HalfLayerPresent(directions=halves, matching=work)

    result = extend_avoiding(work, x, cfg, trace)
    if isinstance(result, HViolated):
        raise ConstructionError(
            f"(H) failed in direction {result.direction} without a half-layer", trace
        )
    avoids_second_vertex(work, result.vertices, x, y)
    cert = CycleCertificate(vertices=result.vertices, matching=work, avoided=frozenset({x, y}))
    check = certificate_check(cert)
    if not check.ok:
        raise ConstructionError(f"laceability cycle rejected: {check}", trace)
    return cert


def _open_cycle(cycle: Sequence[int], a: int, b: int) -> List[int]:
    """The cycle as a path from a to b, dropping the edge a b."""
    k = len(cycle)
    j = list(cycle).index(a)
    if cycle[(j + 1) % k] == b:
        return [cycle[(j - t) % k] for t in range(k)]
    if cycle[(j - 1) % k] == b:
        return [cycle[(j + t) % k] for t in range(k)]
    raise ConstructionError(f"({a}, {b}) is not a cycle edge")


def hamlace_path(
    m: Matching,
    x: int,
    y: int,
    cfg: Optional[SearchConfig] = None,
    trace: Optional[CaseTrace] = None,
) -> Union[LinearForestCertificate, HalfLayerPresent]:
    """Hamilton path from x to y extending the perfect matching m of K(Q_d)."""
    _check_pair(m.d, x, y)
    work = m.edges_only()
    if not work.is_perfect():
        raise PreconditionError("matching is not perfect")
    xm, ym = work.partner(x), work.partner(y)
    if xm == y:
        raise PreconditionError(f"({x}, {y}) is an edge of the matching")

    reduced = work.without_edges(
        [canonical_edge(x, xm), canonical_edge(y, ym)]
    ).with_edges([canonical_edge(xm, ym)])
    result = hamlace_cycle(reduced, x, y, cfg, trace)
    if isinstance(result, HalfLayerPresent):
        return result

    path = [x] + _open_cycle(result.vertices, xm, ym) + [y]
    cert = LinearForestCertificate(paths=[path], matching=work, terminals=[x, y])
    check = certificate_check(cert)
    if not check.ok or len(path) != work.n:
        raise ConstructionError(f"laceability path rejected: {check}", trace)
    return cert
