"""
Matching constructions used by the cycle-extension proofs.

This module implements:
- Layer-avoiding completion of a matching on a set of uncovered vertices
- Replacement of long edges by cube edges while keeping maximality
- Greedy extension to a maximal matching (cube edges, optionally long ones)
- The maximal-matching size bound f(d) = d 2^d / (3d - 1)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence

from src.hypercube.core import (
    ConstructionError,
    Edge,
    Matching,
    PreconditionError,
    UNCOVERED,
    canonical_edge,
    edge_length,
    is_maximal,
    iter_cube_edges,
    parity,
    total_length,
)
from src.hypercube.layers import layer_directions

logger = logging.getLogger("cubeham.constructors")

__all__ = [
    "MaximalBound",
    "avoid_layer_completion",
    "bound_f",
    "extend_to_maximal",
    "is_maximal",
    "parity_class_matching",
    "shorten_matching",
]

_MODES = {"half": 0, "near_half": 1}


@dataclass(frozen=True)
class MaximalBound:
    d: int
    f: Fraction
    ceil_f: int
    ceil_per_direction: int


def bound_f(d: int) -> MaximalBound:
    """Exact value of f(d) = d 2^d / (3d - 1) with its ceilings."""
    if d < 2:
        raise PreconditionError(f"bound f(d) needs d >= 2, got {d}")
    f = Fraction(d * (1 << d), 3 * d - 1)
    return MaximalBound(
        d=d, f=f, ceil_f=math.ceil(f), ceil_per_direction=math.ceil(f / d)
    )


def parity_class_matching(d: int, c: int = 0) -> Matching:
    """Pair all vertices of parity c in ascending order with long edges."""
    verts = [v for v in range(1 << d) if parity(v) == c]
    return Matching.from_edges(d, zip(verts[0::2], verts[1::2]))


# -----------------------------
# Layer-avoiding completion
# -----------------------------
def _has_pattern(m: Matching, max_deficit: int) -> bool:
    return bool(layer_directions(m, max_deficit))


def avoid_layer_completion(
    m: Matching, a: Iterable[int], mode: str = "half"
) -> List[Edge]:
    """Perfect matching P on K(A) such that M + P has no (near) half-layer.

    Same-parity vertices are paired while |A| >= 6; such long edges never
    belong to a layer. The last four vertices are paired by parity where
    possible; with one vertex of the minority parity it is matched to a
    non-neighbor, or else to the first neighbor that keeps M + P layer-free.
    """
    if mode not in _MODES:
        raise PreconditionError(f"mode must be one of {sorted(_MODES)}, got {mode!r}")
    max_deficit = _MODES[mode]
    rest = sorted(set(a))
    if m.d < 4:
        raise PreconditionError(f"layer-avoiding completion needs d >= 4, got {m.d}")
    if len(rest) < 4 or len(rest) % 2:
        raise PreconditionError(f"|A| must be even and at least 4, got {len(rest)}")
    covered = [v for v in rest if m.is_covered(v)]
    if covered:
        raise PreconditionError(f"A meets V(M) in {covered}")
    if _has_pattern(m, max_deficit):
        raise PreconditionError(f"M already contains a {mode.replace('_', ' ')} layer")

    pairs: List[Edge] = []
    while len(rest) >= 6:
        by_class = [[v for v in rest if parity(v) == c] for c in (0, 1)]
        pool = min((cls for cls in by_class if len(cls) >= 2), key=lambda cls: cls[0])
        x, y = pool[0], pool[1]
        pairs.append((x, y))
        rest.remove(x)
        rest.remove(y)

    evens = [v for v in rest if parity(v) == 0]
    odds = [v for v in rest if parity(v) == 1]
    if len(evens) in (0, 4):
        pairs += [(rest[0], rest[1]), (rest[2], rest[3])]
    elif len(evens) == 2:
        pairs += [tuple(evens), tuple(odds)]
    else:
        lone, trio = (evens[0], odds) if len(evens) == 1 else (odds[0], evens)
        partner = next((o for o in trio if edge_length(lone, o) != 1), None)
        if partner is None:
            base = m.with_edges(pairs)
            for o in trio:
                others = [t for t in trio if t != o]
                trial = base.with_edges([(lone, o), (others[0], others[1])])
                if not _has_pattern(trial, max_deficit):
                    partner = o
                    break
        if partner is None:
            raise ConstructionError(
                f"every neighbor of {lone} in {trio} completes a {mode} layer"
            )
        others = [t for t in trio if t != partner]
        pairs += [canonical_edge(lone, partner), (others[0], others[1])]

    pairs = [canonical_edge(x, y) for x, y in pairs]
    if _has_pattern(m.with_edges(pairs), max_deficit):
        raise ConstructionError(f"completion {pairs} created a {mode} layer")
    return pairs


# -----------------------------
# Maximal matchings
# -----------------------------
def _free_mask(m: Matching, forbidden: Iterable[int]):
    free = m.slots == UNCOVERED
    for v in forbidden:
        free[v] = False
    return free


def extend_to_maximal(
    m: Matching, forbidden: Iterable[int] = (), long_edges: bool = False
) -> Matching:
    """Greedy maximal extension: cube edges ascending by (u, direction).

    With long_edges, leftover uncovered vertices are then paired within
    their parity class in ascending order.
    """
    forbidden = list(forbidden)
    out = m.copy()
    free = _free_mask(out, forbidden)
    for u, i in iter_cube_edges(out.d):
        v = u ^ (1 << (i - 1))
        if free[u] and free[v]:
            out.add_edge(u, v)
            free[u] = free[v] = False
    if long_edges:
        for c in (0, 1):
            left = [int(v) for v in range(out.n) if free[v] and parity(v) == c]
            for x, y in zip(left[0::2], left[1::2]):
                out.add_edge(x, y)
    if not is_maximal(out, forbidden):
        raise ConstructionError("greedy extension is not maximal")
    return out


def shorten_matching(m: Matching, forbidden: Sequence[int] = ()) -> Matching:
    """Replace long edges of a maximal matching by at most two cube edges each.

    Each round removes the lexicographically smallest long edge uv and
    matches u, then v, to their smallest uncovered neighbor (if any).
    """
    if not is_maximal(m, forbidden):
        raise PreconditionError("matching is not maximal")
    out = m.copy()
    free = _free_mask(out, forbidden)
    length = total_length(out.edges(), out.d)
    while True:
        long = [e for e in out.edges() if edge_length(*e) >= 2]
        if not long:
            break
        u, v = long[0]
        out.remove_edge(u, v)
        free[u] = free[v] = True
        for w in (u, v):
            if not free[w]:
                continue
            nbrs = sorted(w ^ (1 << k) for k in range(out.d))
            x = next((y for y in nbrs if free[y]), None)
            if x is not None:
                out.add_edge(w, x)
                free[w] = free[x] = False
        new_length = total_length(out.edges(), out.d)
        remaining = sum(1 for e in out.edges() if edge_length(*e) >= 2)
        if new_length > length or remaining >= len(long):
            raise ConstructionError(f"replacing long edge ({u}, {v}) did not shorten M")
        length = new_length
    if not is_maximal(out, forbidden):
        raise ConstructionError("shortened matching is not maximal")
    return out
