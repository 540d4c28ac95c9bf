"""
Core hypercube objects for cubeham.

This module implements:
- Vertices of Q_d as d-bit integers (element i of the subset <-> bit i-1)
- Canonical edges of K(Q_d), their length and direction
- Direction splits F -> (F_0, F_1, F_minus) and the total-length identity
- The partner-table Matching used by every other component
- Subcube projection helpers used by the inductive constructions
- The error hierarchy shared across the package
"""

from __future__ import annotations

import logging
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.config import MAX_DIMENSION

logger = logging.getLogger("cubeham.core")


# -------------------------------------------------------------------
# Errors
# -------------------------------------------------------------------


class CubehamError(Exception):
    """Base class of all cubeham errors."""


class DimensionError(CubehamError, ValueError):
    """Dimension, direction or vertex out of range."""


class MalformedMatchingError(CubehamError, ValueError):
    """Partner table or edge list violates the matching invariants."""


class PreconditionError(CubehamError, ValueError):
    """A documented precondition of an operation is not met."""


class ConstructionError(CubehamError, RuntimeError):
    """A guarantee of a constructive algorithm failed (always a bug)."""

    def __init__(self, message: str, trace: Optional[object] = None) -> None:
        super().__init__(message)
        self.trace = trace


class SearchBudgetExceeded(CubehamError, RuntimeError):
    """An oracle base case ran out of search nodes."""


# -------------------------------------------------------------------
# Slot labels
# -------------------------------------------------------------------

# Non-negative slot values are partners; the labels below are negative.
FORBIDDEN = -1
UNCOVERED = -2
TERMINAL = -3
MATCH = -4

LABEL_NAMES: Dict[int, str] = {
    FORBIDDEN: "FORBIDDEN",
    UNCOVERED: "UNCOVERED",
    TERMINAL: "TERMINAL",
    MATCH: "MATCH",
}

Edge = Tuple[int, int]


# -------------------------------------------------------------------
# Vertices and edges
# -------------------------------------------------------------------


def check_dimension(d: int) -> int:
    if not isinstance(d, (int, np.integer)) or not 1 <= d <= MAX_DIMENSION:
        raise DimensionError(f"dimension must be in 1..{MAX_DIMENSION}, got {d!r}")
    return int(d)


def check_vertex(d: int, u: int) -> int:
    if not 0 <= u < (1 << d):
        raise DimensionError(f"vertex {u} is not a vertex of Q_{d}")
    return int(u)


def check_direction(d: int, i: int) -> int:
    if not 1 <= i <= d:
        raise DimensionError(f"direction must be in 1..{d}, got {i}")
    return int(i)


def bit(i: int) -> int:
    return 1 << (i - 1)


def neighbor(u: int, i: int, d: Optional[int] = None) -> int:
    """Return u^i, the neighbor of u across direction i."""
    if d is not None:
        check_direction(d, i)
        check_vertex(d, u)
    elif i < 1:
        raise DimensionError(f"direction must be positive, got {i}")
    return u ^ (1 << (i - 1))


def popcount(u: int) -> int:
    return int(u).bit_count()


def parity(u: int) -> int:
    """0 for even vertices, 1 for odd ones."""
    return int(u).bit_count() & 1


def side(u: int, i: int) -> int:
    """0 if u lies in Q^i_0, 1 if in Q^i_1."""
    return (u >> (i - 1)) & 1


def canonical_edge(u: int, v: int) -> Edge:
    if u == v:
        raise MalformedMatchingError(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


def edge_length(u: int, v: int) -> int:
    return (u ^ v).bit_count()


def edge_direction(u: int, v: int) -> Optional[int]:
    """Direction of a cube edge, or None for long edges."""
    x = u ^ v
    if x == 0 or x & (x - 1):
        return None
    return x.bit_length()


def is_cube_edge(u: int, v: int) -> bool:
    return edge_length(u, v) == 1


def split(edges: Iterable[Edge], i: int) -> Tuple[List[Edge], List[Edge], List[Edge]]:
    """Partition edges into (F^i_0, F^i_1, F^i_-)."""
    f0: List[Edge] = []
    f1: List[Edge] = []
    fm: List[Edge] = []
    b = bit(i)
    for u, v in edges:
        su, sv = bool(u & b), bool(v & b)
        if su != sv:
            fm.append((u, v))
        elif su:
            f1.append((u, v))
        else:
            f0.append((u, v))
    return f0, f1, fm


def total_length(edges: Iterable[Edge], d: Optional[int] = None) -> int:
    """Sum of edge lengths, cross-checked against the sum of crossing counts."""
    edges = list(edges)
    by_length = sum(edge_length(u, v) for u, v in edges)
    if d is None:
        d = max((max(u, v).bit_length() for u, v in edges), default=0)
    by_cuts = sum(len(split(edges, i)[2]) for i in range(1, d + 1))
    if by_length != by_cuts:
        raise ConstructionError(
            f"length identity failed: sum of lengths {by_length} != sum of cuts {by_cuts}"
        )
    return by_length


def project(u: int, i: int) -> int:
    """Drop coordinate i, mapping a vertex of Q^i_b to a vertex of Q_{d-1}."""
    low = u & ((1 << (i - 1)) - 1)
    return low | ((u >> i) << (i - 1))


def lift(w: int, i: int, b: int) -> int:
    """Inverse of project for the subcube Q^i_b."""
    low = w & ((1 << (i - 1)) - 1)
    return low | (b << (i - 1)) | ((w >> (i - 1)) << i)


def gray_code_cycle(d: int) -> List[int]:
    """Reflected binary Gray code, a Hamilton cycle of Q_d for d >= 2."""
    return [g ^ (g >> 1) for g in range(1 << d)]


# -------------------------------------------------------------------
# Partner table
# -------------------------------------------------------------------


class Matching:
    """Partner table over all 2^d vertices.

    slots[u] >= 0 is the partner of u; negative values are the labels
    FORBIDDEN, UNCOVERED, TERMINAL and MATCH. The counters edge_count and
    terminal_count are maintained on every write.
    """

    __slots__ = ("d", "slots", "edge_count", "terminal_count")

    def __init__(self, d: int) -> None:
        self.d = check_dimension(d)
        self.slots = np.full(1 << self.d, UNCOVERED, dtype=np.int32)
        self.edge_count = 0
        self.terminal_count = 0

    # -----------------------------
    # Constructors
    # -----------------------------
    @classmethod
    def from_edges(
        cls,
        d: int,
        edges: Iterable[Sequence[int]] = (),
        forbidden: Iterable[int] = (),
        terminals: Iterable[int] = (),
        match: Iterable[int] = (),
    ) -> "Matching":
        m = cls(d)
        for e in edges:
            if len(e) != 2:
                raise MalformedMatchingError(f"edge {e!r} must have two endpoints")
            m.add_edge(int(e[0]), int(e[1]))
        for label, verts in ((FORBIDDEN, forbidden), (TERMINAL, terminals), (MATCH, match)):
            for u in verts:
                m.set_label(int(u), label)
        return m

    @classmethod
    def from_slots(cls, d: int, slots: Sequence[int]) -> "Matching":
        m = cls(d)
        arr = np.asarray(slots, dtype=np.int32)
        if arr.shape != (1 << m.d,):
            raise MalformedMatchingError(
                f"slot table has shape {arr.shape}, expected ({1 << m.d},)"
            )
        m.slots = arr.copy()
        m.recount()
        m.validate()
        return m

    def copy(self) -> "Matching":
        m = Matching.__new__(Matching)
        m.d = self.d
        m.slots = self.slots.copy()
        m.edge_count = self.edge_count
        m.terminal_count = self.terminal_count
        return m

    # -----------------------------
    # Queries
    # -----------------------------
    @property
    def n(self) -> int:
        return 1 << self.d

    def __len__(self) -> int:
        return self.edge_count

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self.d == other.d and bool(np.array_equal(self.slots, other.slots))

    def __hash__(self) -> int:
        return hash((self.d, self.slots.tobytes()))

    def __repr__(self) -> str:
        return f"Matching(d={self.d}, edges={self.edges()})"

    def __contains__(self, e: object) -> bool:
        if not isinstance(e, tuple) or len(e) != 2:
            return False
        u, v = e
        return 0 <= u < self.n and int(self.slots[u]) == v

    def label(self, u: int) -> int:
        return int(self.slots[u])

    def partner(self, u: int) -> Optional[int]:
        s = int(self.slots[u])
        return s if s >= 0 else None

    def is_covered(self, u: int) -> bool:
        return int(self.slots[u]) >= 0

    def edges(self) -> List[Edge]:
        idx = np.nonzero(self.slots > np.arange(self.n))[0]
        return [(int(u), int(self.slots[u])) for u in idx]

    def covered_mask(self) -> np.ndarray:
        return self.slots >= 0

    def covered_vertices(self) -> List[int]:
        return [int(u) for u in np.nonzero(self.slots >= 0)[0]]

    def vertices_with_label(self, label: int) -> List[int]:
        return [int(u) for u in np.nonzero(self.slots == label)[0]]

    def uncovered_vertices(self) -> List[int]:
        return self.vertices_with_label(UNCOVERED)

    def forbidden_vertices(self) -> List[int]:
        return self.vertices_with_label(FORBIDDEN)

    def terminal_vertices(self) -> List[int]:
        return self.vertices_with_label(TERMINAL)

    def is_perfect(self) -> bool:
        return bool(np.all(self.slots >= 0))

    def is_cube_matching(self) -> bool:
        return all(is_cube_edge(u, v) for u, v in self.edges())

    # -----------------------------
    # Mutation
    # -----------------------------
    def add_edge(self, u: int, v: int) -> None:
        check_vertex(self.d, u)
        check_vertex(self.d, v)
        if u == v:
            raise MalformedMatchingError(f"loop at vertex {u}")
        for w in (u, v):
            s = int(self.slots[w])
            if s >= 0:
                raise MalformedMatchingError(
                    f"vertex {w} already matched to {s}; cannot add edge ({u}, {v})"
                )
            if s == TERMINAL:
                self.terminal_count -= 1
        self.slots[u] = v
        self.slots[v] = u
        self.edge_count += 1
        if __debug__:
            self._check_local(u)
            self._check_local(v)

    def remove_edge(self, u: int, v: int, label: int = UNCOVERED) -> None:
        if int(self.slots[u]) != v:
            raise MalformedMatchingError(f"({u}, {v}) is not an edge of the matching")
        self.slots[u] = label
        self.slots[v] = label
        self.edge_count -= 1
        if label == TERMINAL:
            self.terminal_count += 2

    def set_label(self, u: int, label: int) -> None:
        check_vertex(self.d, u)
        if label not in LABEL_NAMES:
            raise MalformedMatchingError(f"unknown slot label {label}")
        s = int(self.slots[u])
        if s >= 0:
            raise MalformedMatchingError(
                f"vertex {u} is matched to {s}; cannot label it {LABEL_NAMES[label]}"
            )
        if s == TERMINAL:
            self.terminal_count -= 1
        if label == TERMINAL:
            self.terminal_count += 1
        self.slots[u] = label

    # -----------------------------
    # Derived matchings
    # -----------------------------
    def with_edges(self, extra: Iterable[Edge]) -> "Matching":
        m = self.copy()
        for u, v in extra:
            m.add_edge(u, v)
        return m

    def without_edges(self, removed: Iterable[Edge]) -> "Matching":
        m = self.copy()
        for u, v in removed:
            m.remove_edge(u, v)
        return m

    def edges_only(self) -> "Matching":
        """Same edges, every other slot UNCOVERED."""
        m = self.copy()
        m.slots[m.slots < 0] = UNCOVERED
        m.terminal_count = 0
        return m

    def translate(self, z: int) -> "Matching":
        """Image under the automorphism x -> x XOR z (labels move with vertices)."""
        check_vertex(self.d, z)
        idx = np.arange(self.n, dtype=np.int32) ^ np.int32(z)
        m = self.copy()
        image = np.where(self.slots >= 0, self.slots ^ np.int32(z), self.slots)
        m.slots = np.empty_like(self.slots)
        m.slots[idx] = image
        return m

    def restrict(self, i: int, b: int) -> "Matching":
        """Edges inside Q^i_b, projected to a matching of Q_{d-1}."""
        if self.d < 2:
            raise DimensionError("cannot restrict a matching of Q_1")
        check_direction(self.d, i)
        sub = Matching(self.d - 1)
        mask = bit(i)
        want = mask if b else 0
        for u, v in self.edges():
            if (u & mask) == want and (v & mask) == want:
                sub.add_edge(project(u, i), project(v, i))
        return sub

    # -----------------------------
    # Invariants
    # -----------------------------
    def _check_local(self, u: int) -> None:
        s = int(self.slots[u])
        if s >= 0 and (s == u or int(self.slots[s]) != u):
            raise MalformedMatchingError(f"partner symmetry broken at vertex {u}")

    def recount(self) -> None:
        self.edge_count = int(np.count_nonzero(self.slots >= 0)) // 2
        self.terminal_count = int(np.count_nonzero(self.slots == TERMINAL))

    def validate(self) -> None:
        """Full check of partner symmetry, label range and counters."""
        s = self.slots
        n = self.n
        partners = s >= 0
        if np.any(s[partners] >= n):
            raise MalformedMatchingError("partner index out of range")
        idx = np.nonzero(partners)[0]
        if np.any(s[idx] == idx) or np.any(s[s[idx]] != idx):
            bad = int(idx[(s[idx] == idx) | (s[s[idx]] != idx)][0])
            raise MalformedMatchingError(f"partner symmetry broken at vertex {bad}")
        if np.any(s < MATCH):
            raise MalformedMatchingError("unknown negative slot label")
        if self.edge_count != len(idx) // 2:
            raise MalformedMatchingError(
                f"edge_count {self.edge_count} disagrees with table ({len(idx) // 2})"
            )
        terminals = int(np.count_nonzero(s == TERMINAL))
        if self.terminal_count != terminals:
            raise MalformedMatchingError(
                f"terminal_count {self.terminal_count} disagrees with table ({terminals})"
            )


def iter_cube_edges(d: int) -> Iterator[Tuple[int, int]]:
    """All (u, i) with u in Q^i_0, in ascending (u, i) order."""
    for u in range(1 << d):
        for i in range(1, d + 1):
            if not u & (1 << (i - 1)):
                yield u, i


def cut_sizes(m: Matching) -> np.ndarray:
    """|M^i_-| for i = 1..d, as an array indexed by i - 1."""
    s = m.slots
    idx = np.arange(m.n)
    lower = idx[s > idx]
    diff = lower ^ s[lower]
    return np.array([int(np.count_nonzero((diff >> k) & 1)) for k in range(m.d)])


def is_maximal(m: Matching, forbidden: Iterable[int] = ()) -> bool:
    """True iff every Q_d edge between non-forbidden vertices has a covered end."""
    free = m.slots < 0
    free &= m.slots != FORBIDDEN
    for u in forbidden:
        free[u] = False
    idx = np.arange(m.n)
    for k in range(m.d):
        b = 1 << k
        lower = idx[(idx & b) == 0]
        if np.any(free[lower] & free[lower ^ b]):
            return False
    return True
