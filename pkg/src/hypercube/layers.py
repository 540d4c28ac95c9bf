"""
Half-layers, quad-layers and their near variants.

A half-layer in direction i and parity class c is the set of edges x x^i with
x in Q^i_0 of parity c (2^{d-2} edges). A quad-layer is a half-layer of a
(d-1)-dimensional subcube Q^j_b; its direction is the direction of its edges
and (j, b) is its side.

Detection is vectorized per direction: one boolean array says which lower
endpoints are matched across i, and each (class, side) mask reduces it to a
deficit count. "M contains a near half-layer" means a deficit of at most 1,
"2-near" at most 2; `find_layers` reports every pattern once under the kind
of its exact deficit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from src.hypercube.core import (
    ConstructionError,
    Edge,
    Matching,
    PreconditionError,
    bit,
    cut_sizes,
    is_maximal,
    parity,
)

logger = logging.getLogger("cubeham.layers")

HALF_KINDS = ("half", "near_half", "two_near_half")
QUAD_KINDS = ("quad", "near_quad", "two_near_quad")
KINDS = HALF_KINDS + QUAD_KINDS

_HALF_BY_DEFICIT = {0: "half", 1: "near_half", 2: "two_near_half"}
_QUAD_BY_DEFICIT = {0: "quad", 1: "near_quad", 2: "two_near_quad"}


@dataclass
class LayerPattern:
    kind: str
    direction: int
    parity_class: int
    side: Optional[Tuple[int, int]] = None
    edges: List[Edge] = field(default_factory=list)
    missing_edges: List[Edge] = field(default_factory=list)
    extension_vertices: List[int] = field(default_factory=list)
    covered: bool = False
    dangerous: Optional[bool] = None

    @property
    def deficit(self) -> int:
        return len(self.missing_edges)

    @property
    def is_quad(self) -> bool:
        return self.side is not None

    def full_edges(self) -> List[Edge]:
        return sorted(self.edges + self.missing_edges)

    def vertices(self) -> Set[int]:
        return {v for e in self.full_edges() for v in e}

    def avoids(self, x: int) -> bool:
        """True iff x is incident with no edge of the full pattern and, for
        quad-layers, lies in the hosting subcube."""
        if (parity(x) ^ ((x >> (self.direction - 1)) & 1)) == self.parity_class:
            return False
        if self.side is not None:
            j, b = self.side
            return ((x >> (j - 1)) & 1) == b
        return True


@dataclass
class DangerReport:
    x: int
    patterns: List[LayerPattern]
    covered_flags: List[bool]


@dataclass
class UnionReport:
    directions: List[int]
    shared_vertices: Optional[int]
    two_paths: Optional[bool]
    avoided: int
    expected_avoided: int

    @property
    def ok(self) -> bool:
        if self.avoided != self.expected_avoided:
            return False
        if self.shared_vertices is not None:
            k = len(self.directions)
            n = self.expected_avoided << k
            return self.two_paths is True and self.shared_vertices == n // 4
        return True


@lru_cache(maxsize=None)
def parity_table(d: int) -> np.ndarray:
    idx = np.arange(1 << d, dtype=np.int64)
    par = np.zeros_like(idx)
    for k in range(d):
        par ^= (idx >> k) & 1
    par.setflags(write=False)
    return par


def half_layer_edges(
    d: int, i: int, c: int, side: Optional[Tuple[int, int]] = None
) -> List[Edge]:
    """Edges of the half-layer (i, c), or of the quad-layer (i, c) on `side`."""
    b = bit(i)
    par = parity_table(d)
    out = []
    for x in range(1 << d):
        if x & b or par[x] != c:
            continue
        if side is not None and ((x >> (side[0] - 1)) & 1) != side[1]:
            continue
        out.append((x, x ^ b))
    return out


# -----------------------------
# Detection
# -----------------------------
def find_layers(
    m: Matching,
    kinds: Optional[Iterable[str]] = None,
    x: Optional[int] = None,
    cover: Optional[np.ndarray] = None,
) -> List[LayerPattern]:
    """Enumerate every pattern of the requested kinds contained in `m`.

    Args:
        m: the matching to scan.
        kinds: subset of KINDS; all kinds when omitted.
        x: when given, each pattern's `dangerous` flag says whether it is
            x-dangerous.
        cover: boolean coverage array used for the `covered` flag of near
            patterns; defaults to the coverage of `m` itself.

    Returns:
        Patterns ordered by direction, then half before quad, then side and
        parity class.
    """
    wanted = set(KINDS if kinds is None else kinds)
    unknown = wanted - set(KINDS)
    if unknown:
        raise PreconditionError(f"unknown layer kinds: {sorted(unknown)}")
    d = m.d
    if d < 2:
        return []
    slots = m.slots
    covered = (slots >= 0) if cover is None else np.asarray(cover, dtype=bool)
    idx = np.arange(1 << d, dtype=np.int64)
    par = parity_table(d)
    want_half = bool(wanted & set(HALF_KINDS))
    want_quad = bool(wanted & set(QUAD_KINDS)) and d >= 3

    out: List[LayerPattern] = []
    for i in range(1, d + 1):
        b = bit(i)
        lower = idx[(idx & b) == 0]
        ok = slots[lower] == (lower ^ b)
        lp = par[lower]
        if want_half:
            for c in (0, 1):
                sel = lp == c
                _emit(out, wanted, _HALF_BY_DEFICIT, lower[sel], ok[sel], i, c, None, b, covered, x)
        if want_quad:
            for j in range(1, d + 1):
                if j == i:
                    continue
                bj = (lower >> (j - 1)) & 1
                for s in (0, 1):
                    for c in (0, 1):
                        sel = (bj == s) & (lp == c)
                        _emit(
                            out, wanted, _QUAD_BY_DEFICIT, lower[sel], ok[sel],
                            i, c, (j, s), b, covered, x,
                        )
    return out


def _emit(out, wanted, by_deficit, verts, ok, i, c, side, b, covered, x) -> None:
    present = int(np.count_nonzero(ok))
    deficit = len(verts) - present
    kind = by_deficit.get(deficit)
    if kind is None or kind not in wanted or present == 0:
        return
    missing = [(int(v), int(v ^ b)) for v in verts[~ok]]
    ext = sorted(v for e in missing for v in e)
    pattern = LayerPattern(
        kind=kind,
        direction=i,
        parity_class=c,
        side=side,
        edges=[(int(v), int(v ^ b)) for v in verts[ok]],
        missing_edges=missing,
        extension_vertices=ext,
        covered=deficit > 0 and all(bool(covered[v]) for v in ext),
    )
    if x is not None:
        pattern.dangerous = pattern.avoids(x)
    out.append(pattern)


def danger_report(m: Matching, x: int, kinds: Optional[Iterable[str]] = None) -> DangerReport:
    patterns = [p for p in find_layers(m, kinds, x=x) if p.dangerous]
    return DangerReport(x=x, patterns=patterns, covered_flags=[p.covered for p in patterns])


def _kinds_up_to(max_deficit: int, quads: bool) -> List[str]:
    table = _QUAD_BY_DEFICIT if quads else _HALF_BY_DEFICIT
    return [k for dfc, k in table.items() if dfc <= max_deficit]


def layer_directions(
    m: Matching,
    max_deficit: int = 0,
    quads: bool = False,
    x: Optional[int] = None,
    covered_only: bool = False,
    side: Optional[Tuple[int, int]] = None,
    cover: Optional[np.ndarray] = None,
) -> List[int]:
    """Directions in which `m` contains a pattern with deficit <= max_deficit.

    With x given only x-dangerous patterns count; with covered_only, patterns
    with a deficit must be covered (full ones always count); with side given
    only quad-layers hosted by that subcube count.
    """
    dirs: Set[int] = set()
    for p in find_layers(m, _kinds_up_to(max_deficit, quads or side is not None), x, cover):
        if x is not None and not p.dangerous:
            continue
        if covered_only and p.deficit > 0 and not p.covered:
            continue
        if side is not None and p.side != side:
            continue
        dirs.add(p.direction)
    return sorted(dirs)


def has_half_layer(m: Matching, near: bool = False) -> bool:
    return bool(layer_directions(m, 1 if near else 0))


# -----------------------------
# Structure checks
# -----------------------------
def check_union_structure(
    layers: Sequence[LayerPattern], d: Optional[int] = None
) -> UnionReport:
    """Count shared and avoided vertices of full half-layers in distinct directions.

    For two layers every edge of one must meet exactly one edge of the other
    and they share 2^{d-2} vertices; k layers avoid exactly 2^{d-k} vertices.
    """
    if len(layers) < 2:
        raise PreconditionError("need at least two half-layers")
    for p in layers:
        if p.kind != "half" or p.side is not None:
            raise PreconditionError(f"{p.kind} pattern is not a full half-layer")
    dirs = [p.direction for p in layers]
    if len(set(dirs)) != len(dirs):
        raise PreconditionError(f"half-layers must lie in distinct directions, got {dirs}")
    if d is None:
        d = max(max(max(e) for p in layers for e in p.full_edges()).bit_length(), max(dirs))
    vsets = [p.vertices() for p in layers]
    union: Set[int] = set().union(*vsets)
    avoided = (1 << d) - len(union)

    shared = two_paths = None
    if len(layers) == 2:
        other = vsets[1]
        shared = len(vsets[0] & other)
        two_paths = all(
            ((a in other) + (b in other)) == 1 for a, b in layers[0].full_edges()
        ) and all(((a in vsets[0]) + (b in vsets[0])) == 1 for a, b in layers[1].full_edges())
    return UnionReport(
        directions=dirs,
        shared_vertices=shared,
        two_paths=two_paths,
        avoided=avoided,
        expected_avoided=1 << (d - len(layers)),
    )


def count_layer_directions(m: Matching, z: int = 0) -> Dict[str, List[int]]:
    """Per kind, the directions in which `m` contains that kind.

    Keys: half, near_half, two_near_half (containment, so a full half-layer
    also counts as near) and z_dangerous_quad ((near) quad-layers that are
    z-dangerous).
    """
    if z:
        m = m.translate(z)
    return {
        "half": layer_directions(m, 0),
        "near_half": layer_directions(m, 1),
        "two_near_half": layer_directions(m, 2),
        "z_dangerous_quad": layer_directions(m, 1, quads=True, x=0),
    }


# -----------------------------
# Direction choices
# -----------------------------
def choose_direction_maximal_cut(m: Matching) -> int:
    """Direction maximizing |M^i_-| for a maximal matching, with the cut bound asserted."""
    if m.d < 5:
        raise PreconditionError(f"maximal-cut choice needs d >= 5, got {m.d}")
    if not is_maximal(m):
        raise PreconditionError("matching is not maximal in K(Q_d)")
    cuts = cut_sizes(m)
    i = int(np.argmax(cuts)) + 1
    bound = 3 if m.d == 5 else 4
    if cuts[i - 1] < bound:
        raise ConstructionError(
            f"maximal matching with largest cut {int(cuts[i - 1])} < {bound} at d={m.d}"
        )
    return i


def _dangerous_subcube_directions(m: Matching, i: int) -> List[int]:
    """Directions of 0-dangerous (near) half-layers of Q^i_0 inside M^i_0."""
    return layer_directions(m, 1, x=0, side=(i, 0))


def choose_direction_q5_quad(m: Matching, z: int = 0) -> int:
    """Follow 0-dangerous (near) half-layers of Q^{i_k}_0 until none is left.

    Returns a direction i with |M^i_-| >= 3 such that M^i_0 contains no
    z-dangerous (near) half-layer of Q^i_0.
    """
    if m.d != 5:
        raise PreconditionError(f"the quad-layer direction choice is for d=5, got {m.d}")
    if z:
        m = m.translate(z)
    if m.is_covered(0):
        raise PreconditionError("matching covers the avoided vertex")
    start = layer_directions(m, 1, quads=True, x=0)
    if not start:
        raise PreconditionError("matching contains no z-dangerous (near) quad-layer")

    i = start[0]
    seen = [i]
    while True:
        nxt = _dangerous_subcube_directions(m, i)
        if not nxt:
            break
        i = nxt[0]
        if i in seen:
            raise ConstructionError(f"dangerous-layer walk revisited direction {i}: {seen}")
        seen.append(i)
    logger.debug("Quad-layer direction walk: %s", seen)

    cut = int(cut_sizes(m)[i - 1])
    if cut < 3:
        raise ConstructionError(f"direction {i} has cut {cut} < 3")
    return i
