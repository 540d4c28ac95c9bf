"""
Property (H) for z-avoiding extensions.

A matching M avoiding z satisfies (H) when, for every direction i in which M
contains a half-layer, some vertex of Q^i_0 other than z is left uncovered.
All public entry points take an arbitrary z; the work happens after the XOR
translation that moves z to the empty set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.hypercube.core import (
    FORBIDDEN,
    ConstructionError,
    Edge,
    Matching,
    PreconditionError,
    bit,
    check_direction,
    check_vertex,
    cut_sizes,
    parity,
)
from src.hypercube.layers import LayerPattern, find_layers, parity_table

logger = logging.getLogger("cubeham.property_h")


@dataclass(frozen=True)
class XorMap:
    """The involution x -> x XOR z."""

    z: int

    def __call__(self, v: int) -> int:
        return v ^ self.z

    def vertices(self, seq: Sequence[int]) -> List[int]:
        return [v ^ self.z for v in seq]

    def edges(self, edges: Sequence[Edge]) -> List[Edge]:
        out = []
        for u, v in edges:
            a, b = u ^ self.z, v ^ self.z
            out.append((a, b) if a < b else (b, a))
        return out


@dataclass
class HWitness:
    direction: int
    layer: LayerPattern
    covered_vertices: int


@dataclass
class HReport:
    satisfied: bool
    witnesses: List[HWitness] = field(default_factory=list)
    free_vertices: Dict[int, List[int]] = field(default_factory=dict)

    @property
    def violating_directions(self) -> List[int]:
        return [w.direction for w in self.witnesses]


@dataclass
class HMaximality:
    maximal: bool
    edge: Optional[Edge] = None


def normalize_forbidden(m: Matching, z: int) -> Tuple[Matching, XorMap]:
    check_vertex(m.d, z)
    mapping = XorMap(z)
    if z == 0:
        return m.copy(), mapping
    return m.translate(z), mapping


def _require_avoids_origin(m: Matching) -> None:
    if m.is_covered(0):
        raise PreconditionError(f"forbidden vertex is covered by edge (0, {m.partner(0)})")


def _lower_vertices(d: int, i: int) -> np.ndarray:
    idx = np.arange(1 << d)
    return idx[(idx & bit(i)) == 0]


def _uncovered_lower(m: Matching, i: int) -> List[int]:
    """Vertices of Q^i_0 other than 0 that m leaves uncovered."""
    lower = _lower_vertices(m.d, i)
    free = lower[(m.slots[lower] < 0) & (lower != 0)]
    return [int(v) for v in free]


def _check_h_origin(m: Matching) -> HReport:
    report = HReport(satisfied=True)
    for layer in find_layers(m, kinds=["half"]):
        i = layer.direction
        free = _uncovered_lower(m, i)
        odd = [v for v in free if parity(v)]
        if odd:
            raise ConstructionError(
                f"half-layer in direction {i} leaves odd vertices {odd} of Q^{i}_0 uncovered"
            )
        if free:
            report.free_vertices[i] = free
        else:
            report.satisfied = False
            report.witnesses.append(
                HWitness(direction=i, layer=layer, covered_vertices=(1 << (m.d - 1)) - 1)
            )
    return report


def check_property_h(m: Matching, z: int = 0) -> HReport:
    """Decide (H) for m and the avoided vertex z.

    Raises:
        PreconditionError: if m covers z.
    """
    norm, _ = normalize_forbidden(m, z)
    _require_avoids_origin(norm)
    report = _check_h_origin(norm)
    if z:
        report.free_vertices = {
            i: sorted(v ^ z for v in vs) for i, vs in report.free_vertices.items()
        }
    if not report.satisfied:
        logger.debug("Property (H) violated in directions %s", report.violating_directions)
    return report


def satisfies_h(m: Matching, z: int = 0) -> bool:
    return check_property_h(m, z).satisfied


# -----------------------------
# Violation classification
# -----------------------------
def _violation_case(m: Matching, u: int, i: int) -> Optional[str]:
    """Which violation case adding u u^i triggers, for z = 0 and (H) already holding."""
    if _uncovered_lower(m, i) != [u]:
        return None
    b = bit(i)
    lower = _lower_vertices(m.d, i)
    matched = m.slots[lower] == (lower ^ b)
    par = parity_table(m.d)[lower]
    for c in (0, 1):
        if np.all(matched[par == c]):
            return "i"
    if np.all(matched[(par == parity(u)) & (lower != u)]):
        return "ii"
    return None


def _assert_violation_bounds(m: Matching, i: int) -> None:
    d = m.d
    if d < 3:
        return
    cut = int(cut_sizes(m)[i - 1])
    if cut % 2:
        raise ConstructionError(f"violation in direction {i} with odd cut {cut}")
    if cut < (1 << (d - 2)):
        raise ConstructionError(f"violation in direction {i} with cut {cut} < 2^(d-2)")
    if m.edge_count < 3 * (1 << (d - 3)) - 1:
        raise ConstructionError(
            f"violation with only {m.edge_count} edges, below 3*2^(d-3)-1"
        )


def classify_h_violation(m: Matching, u: int, i: int, z: int = 0) -> Optional[str]:
    """Return "i", "ii" or None: whether M + {u u^i} violates (H), and how.

    Case "i": M has a half-layer in direction i and covers all of Q^i_0
    except z and u. Case "ii": M has a near half-layer in direction i whose
    missing edge is u u^i, with the same coverage.
    """
    check_direction(m.d, i)
    norm, tr = normalize_forbidden(m, z)
    u0 = tr(u)
    _require_avoids_origin(norm)
    if u0 & bit(i) or u0 == 0:
        raise PreconditionError(f"vertex {u} must lie in Q^{i}_0 and differ from z")
    if norm.is_covered(u0) or norm.is_covered(u0 ^ bit(i)):
        raise PreconditionError(f"vertices {u} and its direction-{i} neighbor must be uncovered")
    if not _check_h_origin(norm).satisfied:
        raise PreconditionError("matching does not satisfy (H)")

    case = _violation_case(norm, u0, i)
    violates = not _check_h_origin(norm.with_edges([(u0, u0 ^ bit(i))])).satisfied
    if violates != (case is not None):
        raise ConstructionError(
            f"violation case {case!r} disagrees with direct (H) check for edge ({u}, {u ^ bit(i)})"
        )
    if case is not None:
        _assert_violation_bounds(norm, i)
    return case


# -----------------------------
# H-maximality
# -----------------------------
def _addable_edges(m: Matching):
    """(u, i) with u in Q^i_0 minus {0}, both u and u^i uncovered, ascending."""
    free = (m.slots < 0) & (m.slots != FORBIDDEN)
    free[0] = False
    for u in np.nonzero(free)[0]:
        u = int(u)
        for i in range(1, m.d + 1):
            b = bit(i)
            if not u & b and free[u ^ b]:
                yield u, i


def _first_addable(m: Matching) -> Optional[Edge]:
    for u, i in _addable_edges(m):
        if _violation_case(m, u, i) is None:
            return (u, u ^ bit(i))
    return None


def is_h_maximal(m: Matching, z: int = 0) -> HMaximality:
    norm, tr = normalize_forbidden(m, z)
    _require_avoids_origin(norm)
    if not _check_h_origin(norm).satisfied:
        raise PreconditionError("matching does not satisfy (H)")
    edge = _first_addable(norm)
    if edge is None:
        return HMaximality(maximal=True)
    return HMaximality(maximal=False, edge=tr.edges([edge])[0])


def make_h_maximal(m: Matching, z: int = 0) -> Matching:
    """Greedily add cube edges that keep (H) until none is left.

    Adding an edge can only shrink the set of addable edges, so a single
    ascending pass reaches an H-maximal matching; the final re-check guards it.
    """
    norm, tr = normalize_forbidden(m, z)
    _require_avoids_origin(norm)
    if not _check_h_origin(norm).satisfied:
        raise PreconditionError("matching does not satisfy (H)")

    added = 0
    for u, i in list(_addable_edges(norm)):
        v = u ^ bit(i)
        if norm.is_covered(u) or norm.is_covered(v):
            continue
        if _violation_case(norm, u, i) is None:
            norm.add_edge(u, v)
            added += 1
    if _first_addable(norm) is not None:
        raise ConstructionError("greedy H-maximalization left an addable edge")
    if added > 1 << (m.d - 1):
        raise ConstructionError(f"H-maximalization added {added} edges")
    logger.debug("H-maximalization added %d edges", added)
    return norm if z == 0 else norm.translate(z)
