"""
Brute-force extendability oracle.

The search works on a compact partner table: every partial path built so far
is replaced by a single edge between its two ends, the inner vertices become
FORBIDDEN, and an undo journal restores the table on backtrack. A vertex with
a partner (or a TERMINAL) needs one more cube edge, so the search always
branches on such a vertex, preferring the one with the fewest non-forbidden
neighbors.

Results:
- YES with a certificate (cycle, or linear forest when TERMINALs are present)
- NO when the search space is exhausted
- BUDGET when the node budget runs out; never reported as NO
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Union

import numpy as np

from src.config import NODE_BUDGET
from src.hypercube.certificates import (
    CycleCertificate,
    LinearForestCertificate,
    certificate_check,
)
from src.hypercube.core import (
    FORBIDDEN,
    MATCH,
    TERMINAL,
    UNCOVERED,
    ConstructionError,
    Edge,
    MalformedMatchingError,
    Matching,
    gray_code_cycle,
    iter_cube_edges,
)

logger = logging.getLogger("cubeham.oracle")

try:
    from src.monitoring.prometheus_metrics import record_oracle_call
except Exception:  # pragma: no cover - metrics are optional

    def record_oracle_call(*args, **kwargs):
        return None


VERTEX_SELECTIONS = ("min_free_degree", "first")


class SearchOutcome(str, Enum):
    YES = "yes"
    NO = "no"
    BUDGET = "budget"


@dataclass
class SearchConfig:
    node_budget: int = NODE_BUDGET
    want_certificate: bool = True
    vertex_selection: str = "min_free_degree"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.node_budget <= 0:
            raise ValueError(f"node_budget must be positive, got {self.node_budget}")
        if self.vertex_selection not in VERTEX_SELECTIONS:
            raise ValueError(
                f"vertex_selection must be one of {VERTEX_SELECTIONS}, "
                f"got {self.vertex_selection!r}"
            )

    def direction_order(self, d: int) -> List[int]:
        """Directions in branching order; a nonzero seed shuffles them."""
        if not self.seed:
            return list(range(1, d + 1))
        rng = np.random.Generator(np.random.PCG64(self.seed))
        return [int(i) + 1 for i in rng.permutation(d)]


@dataclass
class SearchResult:
    outcome: SearchOutcome
    certificate: Optional[Union[CycleCertificate, LinearForestCertificate]] = None
    nodes: int = 0
    max_length: Optional[int] = None

    @property
    def found(self) -> bool:
        return self.outcome is SearchOutcome.YES


class _BudgetHit(Exception):
    pass


# -------------------------------------------------------------------
# Search state
# -------------------------------------------------------------------


class _SearchState:
    """Mutable compact table with counters and an undo journal."""

    def __init__(
        self,
        m: Matching,
        cfg: SearchConfig,
        exhaustive: bool = False,
        seed_edge: Optional[Edge] = None,
        nodes: int = 0,
    ) -> None:
        self.d = m.d
        self.n = m.n
        self.slot: List[int] = m.slots.tolist()
        self.edges = m.edge_count
        self.terms = m.terminal_count
        self.masks = [1 << (i - 1) for i in cfg.direction_order(m.d)]
        self.all_masks = [1 << k for k in range(m.d)]
        self.first = cfg.vertex_selection == "first"
        self.budget = cfg.node_budget
        self.nodes = nodes
        self.exhaustive = exhaustive
        self.base_edges: List[Edge] = m.edges()
        if seed_edge is not None:
            a, b = seed_edge
            self.slot[a], self.slot[b] = b, a
            self.edges += 1
            self.base_edges.append(seed_edge)
        self.nf = [
            sum(1 for bb in self.all_masks if self.slot[u ^ bb] != FORBIDDEN)
            for u in range(self.n)
        ]
        self.added: List[Edge] = []
        self.best_len = 0
        self.best_edges: Optional[List[Edge]] = None
        self.limit = sum(1 for s in self.slot if s != FORBIDDEN)

    # -----------------------------
    # Journal
    # -----------------------------
    def _set(self, frame: list, v: int, value: int) -> None:
        frame.append((v, self.slot[v]))
        self.slot[v] = value
        if value == FORBIDDEN:
            for bb in self.all_masks:
                self.nf[v ^ bb] -= 1

    def _undo(self, frame: list, edges: int, terms: int) -> None:
        for v, old in reversed(frame):
            if self.slot[v] == FORBIDDEN:
                for bb in self.all_masks:
                    self.nf[v ^ bb] += 1
            self.slot[v] = old
        self.edges = edges
        self.terms = terms

    # -----------------------------
    # Rules
    # -----------------------------
    def _choose(self) -> int:
        slot, nf = self.slot, self.nf
        best, best_count = -1, self.d + 1
        for u in range(self.n):
            s = slot[u]
            if s >= 0 or s == TERMINAL:
                if self.first:
                    return u
                if nf[u] < best_count:
                    best, best_count = u, nf[u]
                    if best_count == 0:
                        break
        return best

    def _is_last(self, u: int, w: int, su: int, sw: int) -> bool:
        if self.edges == 1 and self.terms == 0:
            return su == w and bool(self.added)
        if self.edges == 0 and self.terms == 2:
            return su == TERMINAL and sw == TERMINAL
        return False

    def _can_add(self, w: int, su: int, sw: int) -> bool:
        if su == w:
            return False
        if su == TERMINAL and sw == TERMINAL and self.terms < 4:
            return False
        return True

    def _add(self, u: int, w: int, su: int, sw: int) -> list:
        frame: list = []
        if su >= 0:
            if sw >= 0:
                self._set(frame, su, sw)
                self._set(frame, sw, su)
                self._set(frame, u, FORBIDDEN)
                self._set(frame, w, FORBIDDEN)
                self.edges -= 1
            elif sw == UNCOVERED:
                self._set(frame, su, w)
                self._set(frame, w, su)
                self._set(frame, u, FORBIDDEN)
            else:  # TERMINAL
                self._set(frame, u, FORBIDDEN)
                self._set(frame, w, FORBIDDEN)
                self._set(frame, su, TERMINAL)
                self.edges -= 1
        else:  # u is TERMINAL
            if sw >= 0:
                self._set(frame, u, FORBIDDEN)
                self._set(frame, w, FORBIDDEN)
                self._set(frame, sw, TERMINAL)
                self.edges -= 1
            elif sw == UNCOVERED:
                self._set(frame, u, FORBIDDEN)
                self._set(frame, w, TERMINAL)
            else:
                self._set(frame, u, FORBIDDEN)
                self._set(frame, w, FORBIDDEN)
                self.terms -= 2
        return frame

    # -----------------------------
    # Search
    # -----------------------------
    def _success(self) -> bool:
        length = len(self.base_edges) + len(self.added)
        if length > self.best_len:
            self.best_len = length
            self.best_edges = self.base_edges + list(self.added)
        if not self.exhaustive:
            return True
        return length >= self.limit

    def search(self) -> bool:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetHit
        u = self._choose()
        if u < 0:
            return False
        slot = self.slot
        su = slot[u]
        for b in self.masks:
            w = u ^ b
            sw = slot[w]
            if sw == FORBIDDEN:
                continue
            e = (u, w) if u < w else (w, u)
            if self._is_last(u, w, su, sw):
                self.added.append(e)
                if self._success():
                    return True
                self.added.pop()
                continue
            if self._can_add(w, su, sw):
                edges, terms = self.edges, self.terms
                frame = self._add(u, w, su, sw)
                self.added.append(e)
                if self.search():
                    return True
                self.added.pop()
                self._undo(frame, edges, terms)
        return False


# -------------------------------------------------------------------
# Certificates
# -------------------------------------------------------------------


def _adjacency(edges: Iterable[Edge]) -> Dict[int, List[int]]:
    adj: Dict[int, List[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    return adj


def cycle_from_edges(edges: Iterable[Edge]) -> List[int]:
    """Order the edges of a single cycle, starting at the smallest vertex and
    stepping to its smaller neighbor."""
    adj = _adjacency(edges)
    start = min(adj)
    prev, cur = start, min(adj[start])
    seq = [start]
    while cur != start:
        seq.append(cur)
        nxt = [x for x in adj[cur] if x != prev]
        if len(adj[cur]) != 2 or not nxt:
            raise ConstructionError(f"edge set is not a single cycle at vertex {cur}")
        prev, cur = cur, nxt[0]
    if len(seq) != len(adj):
        raise ConstructionError("edge set has more than one cycle")
    return seq


def paths_from_edges(edges: Iterable[Edge], terminals: Iterable[int]) -> List[List[int]]:
    adj = _adjacency(edges)
    todo = sorted(terminals)
    done = set()
    paths = []
    for t in todo:
        if t in done:
            continue
        path = [t]
        prev, cur = None, t
        while True:
            nxt = [x for x in adj.get(cur, []) if x != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            path.append(cur)
        done.update((path[0], path[-1]))
        paths.append(path)
    return paths


def _certificate(m: Matching, edges: List[Edge]):
    if m.terminal_count:
        terminals = m.terminal_vertices()
        return LinearForestCertificate(
            paths=paths_from_edges(edges, terminals), matching=m, terminals=terminals
        )
    return CycleCertificate(vertices=cycle_from_edges(edges), matching=m)


# -------------------------------------------------------------------
# Entry points
# -------------------------------------------------------------------


def _prepare(m: Matching, avoid: Iterable[int]) -> Matching:
    m.validate()
    if np.any(m.slots == MATCH):
        raise MalformedMatchingError("MATCH labels must be resolved before a search")
    if m.terminal_count % 2:
        raise MalformedMatchingError(f"odd number of terminals ({m.terminal_count})")
    avoid = [v for v in avoid if m.label(v) != FORBIDDEN]
    if not avoid:
        return m
    work = m.copy()
    for v in avoid:
        if work.is_covered(v):
            raise MalformedMatchingError(f"avoided vertex {v} is covered by the matching")
        work.set_label(v, FORBIDDEN)
    return work


def _seeds(m: Matching) -> List[Optional[Edge]]:
    """Search roots: the matching itself, or one forced cube edge per root when M
    is empty and some vertex is forbidden."""
    if m.edge_count or m.terminal_count:
        return [None]
    s = m.slots
    return [
        (u, u ^ (1 << (i - 1)))
        for u, i in iter_cube_edges(m.d)
        if s[u] != FORBIDDEN and s[u ^ (1 << (i - 1))] != FORBIDDEN
    ]


def _run(m: Matching, cfg: SearchConfig, exhaustive: bool) -> SearchResult:
    if m.edge_count == 0 and m.terminal_count == 0 and m.d >= 2:
        if not np.any(m.slots == FORBIDDEN):
            seq = gray_code_cycle(m.d)
            cert = CycleCertificate(vertices=seq, matching=m)
            return SearchResult(SearchOutcome.YES, cert, nodes=0, max_length=len(seq))

    nodes = 0
    best_len = 0
    best_edges: Optional[List[Edge]] = None
    state: Optional[_SearchState] = None
    try:
        for seed in _seeds(m):
            state = _SearchState(m, cfg, exhaustive=exhaustive, seed_edge=seed, nodes=nodes)
            done = state.search()
            nodes = state.nodes
            if state.best_len > best_len:
                best_len, best_edges = state.best_len, state.best_edges
            if done:
                break
    except _BudgetHit:
        if state is not None and state.best_len > best_len:
            best_len, best_edges = state.best_len, state.best_edges
        cert = None
        if best_edges is not None and cfg.want_certificate:
            cert = _certificate(m, best_edges)
        return SearchResult(SearchOutcome.BUDGET, cert, cfg.node_budget, best_len or None)

    if best_edges is None:
        return SearchResult(SearchOutcome.NO, None, nodes, 0 if exhaustive else None)
    cert = _certificate(m, best_edges) if cfg.want_certificate else None
    return SearchResult(SearchOutcome.YES, cert, nodes, best_len)


def _finish(result: SearchResult, label: str) -> SearchResult:
    if result.certificate is not None:
        check = certificate_check(result.certificate)
        if not check.ok:
            raise ConstructionError(f"oracle produced an invalid certificate: {check}")
    record_oracle_call(result.outcome.value, result.nodes)
    logger.debug("%s: %s after %d nodes", label, result.outcome.value, result.nodes)
    return result


def extends(
    m: Matching, cfg: Optional[SearchConfig] = None, avoid: Iterable[int] = ()
) -> SearchResult:
    """Decide whether M extends to a cycle (or to a linear forest joining its
    TERMINAL vertices) that uses cube edges outside M and avoids every
    FORBIDDEN vertex (plus `avoid`)."""
    cfg = cfg or SearchConfig()
    work = _prepare(m, avoid)
    return _finish(_run(work, cfg, exhaustive=False), "extends")


def max_cycle_length(
    m: Matching, cfg: Optional[SearchConfig] = None, avoid: Iterable[int] = ()
) -> SearchResult:
    """Longest extending cycle. On BUDGET, max_length is only a lower bound."""
    cfg = cfg or SearchConfig()
    work = _prepare(m, avoid)
    if work.terminal_count:
        raise MalformedMatchingError("cycle lengths are undefined with TERMINAL vertices")
    return _finish(_run(work, cfg, exhaustive=True), "max_cycle_length")


def extend_linear_forest(
    m: Matching,
    terminals: Iterable[int],
    cfg: Optional[SearchConfig] = None,
    avoid: Iterable[int] = (),
) -> SearchResult:
    """Linear forest extending M whose paths end exactly at `terminals`."""
    cfg = cfg or SearchConfig()
    work = m.copy()
    for t in terminals:
        if work.is_covered(t):
            raise MalformedMatchingError(f"terminal {t} is covered by the matching")
        work.set_label(t, TERMINAL)
    if work.terminal_count == 0:
        raise MalformedMatchingError("a linear forest needs at least two terminals")
    work = _prepare(work, avoid)
    return _finish(_run(work, cfg, exhaustive=False), "extend_linear_forest")
