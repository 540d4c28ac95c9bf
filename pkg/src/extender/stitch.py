"""
Splitting along a direction and gluing sub-cycles back together.

All helpers take full Q_d coordinates unless the name says otherwise
(`sub_matching` produces, and `lift_cycle` consumes, Q_{d-1} coordinates).
"""

from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Sequence, Set, Tuple

import numpy as np

from src.hypercube.core import (
    ConstructionError,
    Edge,
    Matching,
    bit,
    canonical_edge,
    lift,
    project,
)

logger = logging.getLogger("cubeham.stitch")


def sub_direction(j: int, i: int) -> int:
    """Direction of Q_{d-1} that direction j != i becomes after dropping i."""
    if j == i:
        raise ValueError(f"direction {j} is the split direction")
    return j if j < i else j - 1


def full_direction(js: int, i: int) -> int:
    return js if js < i else js + 1


def side_vertices(d: int, i: int, b: int) -> List[int]:
    mask = bit(i)
    want = mask if b else 0
    return [v for v in range(1 << d) if v & mask == want]


def sub_matching(m: Matching, i: int, b: int, extra: Iterable[Edge] = ()) -> Matching:
    """Edges of m inside Q^i_b plus `extra` (full coordinates), as a matching of Q_{d-1}."""
    sub = m.restrict(i, b)
    for u, v in extra:
        sub.add_edge(project(u, i), project(v, i))
    return sub


def sub_cover(m: Matching, i: int, b: int) -> np.ndarray:
    """Coverage by m of the vertices of Q^i_b, indexed by Q_{d-1} vertex."""
    verts = np.array([lift(w, i, b) for w in range(1 << (m.d - 1))], dtype=np.int64)
    return m.slots[verts] >= 0


def lift_cycle(seq: Sequence[int], i: int, b: int) -> List[int]:
    return [lift(w, i, b) for w in seq]


def cut_endpoints(m: Matching, i: int, b: int) -> List[int]:
    """Endpoints in Q^i_b of the edges of m crossing direction i."""
    mask = bit(i)
    want = mask if b else 0
    out = []
    for u, v in m.edges():
        if (u & mask) != (v & mask):
            out.append(u if u & mask == want else v)
    return sorted(out)


def split_at_edges(cycle: Sequence[int], cut: Iterable[Edge]) -> List[List[int]]:
    """Paths left after deleting the edges `cut` from the cycle."""
    cut_set: Set[Edge] = {canonical_edge(a, b) for a, b in cut}
    k = len(cycle)
    marks = [
        j for j in range(k) if canonical_edge(cycle[j], cycle[(j + 1) % k]) in cut_set
    ]
    if len(marks) != len(cut_set) or not marks:
        raise ConstructionError(
            f"cycle contains {len(marks)} of the {len(cut_set)} edges to cut"
        )
    paths = []
    for a, b in zip(marks, marks[1:] + [marks[0] + k]):
        paths.append([cycle[t % k] for t in range(a + 1, b + 1)])
    return paths


def shortcut_edges(
    paths: Sequence[Sequence[int]], cross: Dict[int, int]
) -> Tuple[List[Edge], Dict[Edge, List[int]]]:
    """Shortcut edges on the far side of the cut, and the path each one replaces.

    A path from a to b becomes the edge cross[a] cross[b]; the stored path is
    oriented so that it starts at a.
    """
    edges: List[Edge] = []
    routes: Dict[Edge, List[int]] = {}
    for p in paths:
        a, b = p[0], p[-1]
        if a not in cross or b not in cross:
            raise ConstructionError(f"path ends {a}, {b} are not both cut endpoints")
        e = canonical_edge(cross[a], cross[b])
        edges.append(e)
        routes[e] = list(p)
    return edges, routes


def splice_paths(
    cycle: Sequence[int], routes: Dict[Edge, List[int]], cross: Dict[int, int]
) -> List[int]:
    """Replace every shortcut edge x y of `cycle` by x, route..., y."""
    k = len(cycle)
    out: List[int] = []
    used = 0
    for j in range(k):
        x, y = cycle[j], cycle[(j + 1) % k]
        out.append(x)
        route = routes.get(canonical_edge(x, y))
        if route is None:
            continue
        used += 1
        if cross[route[0]] == x:
            out.extend(route)
        else:
            out.extend(reversed(route))
    if used != len(routes):
        raise ConstructionError(f"cycle used {used} of {len(routes)} shortcut edges")
    return out


def stitch(
    cycle0: Sequence[int],
    p0: Iterable[Edge],
    cross: Dict[int, int],
    solve_far_side,
) -> List[int]:
    """Glue a cycle of one half to a cycle of the other through the cut.

    cycle0 extends the near-side matching plus the pairing p0; its p0-free
    paths become shortcut edges on the far side, `solve_far_side(shortcuts)`
    must return a far-side cycle containing them, and each shortcut is then
    replaced by cut edge, near-side path, cut edge.
    """
    paths = split_at_edges(cycle0, p0)
    shortcuts, routes = shortcut_edges(paths, cross)
    cycle1 = solve_far_side(shortcuts)
    return splice_paths(cycle1, routes, cross)


def reroute_edge(cycle: Sequence[int], a: int, b: int, via: Sequence[int]) -> List[int]:
    """Replace the cycle edge a b by the path a, via..., b."""
    k = len(cycle)
    for j in range(k):
        x, y = cycle[j], cycle[(j + 1) % k]
        if {x, y} == {a, b}:
            inner = list(via) if x == a else list(reversed(via))
            return list(cycle[: j + 1]) + inner + list(cycle[j + 1 :])
    raise ConstructionError(f"edge ({a}, {b}) is not on the cycle")
