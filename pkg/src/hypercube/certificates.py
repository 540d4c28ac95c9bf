"""
Certificates: explicit cycles and linear forests that prove an extension.

A certificate is checked from scratch by `certificate_check`, which never
trusts the code that produced it and never raises on bad input.
"""

from __future__ import annotations

import logging
import numbers
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Union

from src.hypercube.core import FORBIDDEN, Edge, Matching, canonical_edge, edge_length

logger = logging.getLogger("cubeham.certificates")

try:
    from src.monitoring.prometheus_metrics import record_certificate_check
except Exception:  # pragma: no cover - metrics are optional

    def record_certificate_check(*args, **kwargs):
        return None


@dataclass
class CycleCertificate:
    vertices: List[int]
    matching: Matching
    avoided: FrozenSet[int] = frozenset()

    @property
    def d(self) -> int:
        return self.matching.d

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> List[Edge]:
        k = len(self.vertices)
        return [
            canonical_edge(self.vertices[j], self.vertices[(j + 1) % k]) for j in range(k)
        ]

    def avoids(self, x: int) -> bool:
        return x not in set(self.vertices)


@dataclass
class LinearForestCertificate:
    paths: List[List[int]]
    matching: Matching
    terminals: List[int]
    avoided: FrozenSet[int] = frozenset()

    @property
    def d(self) -> int:
        return self.matching.d

    def edges(self) -> List[Edge]:
        out: List[Edge] = []
        for path in self.paths:
            out.extend(canonical_edge(a, b) for a, b in zip(path, path[1:]))
        return out


@dataclass
class CheckResult:
    """Outcome of a certificate check; falsy when a clause is violated."""

    ok: bool
    clause: Optional[str] = None
    index: Optional[int] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def violation(cls, clause: str, index: Optional[int], message: str) -> "CheckResult":
        return cls(ok=False, clause=clause, index=index, message=message)


Certificate = Union[CycleCertificate, LinearForestCertificate]


# -----------------------------
# Shared clause checks
# -----------------------------
def _check_vertices(d: int, seq: Sequence[int], seen: Set[int], offset: int):
    n = 1 << d
    for j, v in enumerate(seq):
        if not isinstance(v, numbers.Integral) or not 0 <= v < n:
            return CheckResult.violation(
                "vertex out of range", offset + j, f"{v!r} is not a vertex of Q_{d}"
            )
        v = int(v)
        if v in seen:
            return CheckResult.violation(
                "not simple", offset + j, f"vertex {v} appears more than once"
            )
        seen.add(v)
    return None


def _check_steps(m: Matching, pairs: Iterable[tuple], offset_of) -> Optional[CheckResult]:
    for j, (a, b) in pairs:
        if m.partner(a) == b:
            continue
        if edge_length(a, b) != 1:
            return CheckResult.violation(
                "non-cube edge outside M",
                offset_of(j),
                f"step {a}-{b} has length {edge_length(a, b)} and is not in M",
            )
    return None


def _check_matching_edges(m: Matching, consecutive: Set[Edge], visited: Set[int]):
    for u, v in m.edges():
        if (u, v) not in consecutive:
            where = u if u in visited else v
            return CheckResult.violation(
                "matching edge missing",
                where,
                f"matching edge ({u}, {v}) is not a consecutive pair",
            )
    return None


def _check_avoided(avoided: Iterable[int], visited: Set[int], order: List[int]):
    for x in sorted(avoided):
        if x in visited:
            return CheckResult.violation(
                "avoided vertex visited", order.index(x), f"avoided vertex {x} is visited"
            )
    return None


# -----------------------------
# Entry point
# -----------------------------
def certificate_check(cert: Certificate) -> CheckResult:
    """Verify every clause of a cycle or linear-forest certificate.

    The first violated clause is reported with the offending position
    (sequence index for vertex clauses, vertex id for matching clauses).
    """
    try:
        if isinstance(cert, CycleCertificate):
            result = _check_cycle(cert)
        elif isinstance(cert, LinearForestCertificate):
            result = _check_forest(cert)
        else:
            result = CheckResult.violation(
                "unknown certificate", None, f"cannot check {type(cert).__name__}"
            )
    except Exception as e:  # never trap on malformed input
        result = CheckResult.violation("malformed certificate", None, str(e))

    record_certificate_check("ok" if result.ok else "violation")
    if not result.ok:
        logger.debug("Certificate rejected: %s", result)
    return result


def _avoided_set(cert: Certificate) -> Set[int]:
    return set(cert.avoided) | set(cert.matching.vertices_with_label(FORBIDDEN))


def _check_cycle(cert: CycleCertificate) -> CheckResult:
    m = cert.matching
    seq = list(cert.vertices)
    k = len(seq)
    if k < 3:
        return CheckResult.violation("too short", k, f"a cycle needs 3 vertices, got {k}")

    seen: Set[int] = set()
    bad = _check_vertices(m.d, seq, seen, 0)
    if bad is not None:
        return bad
    seq = [int(v) for v in seq]

    pairs = [(j, (seq[j], seq[(j + 1) % k])) for j in range(k)]
    bad = _check_steps(m, pairs, lambda j: j)
    if bad is not None:
        return bad

    consecutive = {canonical_edge(a, b) for _, (a, b) in pairs}
    bad = _check_matching_edges(m, consecutive, seen)
    if bad is not None:
        return bad

    bad = _check_avoided(_avoided_set(cert), seen, seq)
    if bad is not None:
        return bad
    return CheckResult(ok=True)


def _check_forest(cert: LinearForestCertificate) -> CheckResult:
    m = cert.matching
    seen: Set[int] = set()
    flat: List[int] = []
    for p, path in enumerate(cert.paths):
        if len(path) < 2:
            return CheckResult.violation(
                "too short", len(flat), f"path {p} has fewer than two vertices"
            )
        bad = _check_vertices(m.d, path, seen, len(flat))
        if bad is not None:
            return bad
        flat.extend(int(v) for v in path)
    paths = [[int(v) for v in path] for path in cert.paths]

    pairs = []
    offsets = []
    base = 0
    for path in paths:
        for j in range(len(path) - 1):
            offsets.append(base + j)
            pairs.append((len(pairs), (path[j], path[j + 1])))
        base += len(path)
    bad = _check_steps(m, pairs, lambda j: offsets[j])
    if bad is not None:
        return bad

    consecutive = {canonical_edge(a, b) for _, (a, b) in pairs}
    bad = _check_matching_edges(m, consecutive, seen)
    if bad is not None:
        return bad

    ends = sorted(v for path in paths for v in (path[0], path[-1]))
    if ends != sorted(int(t) for t in cert.terminals):
        return CheckResult.violation(
            "terminal mismatch",
            None,
            f"path endpoints {ends} differ from terminals {sorted(cert.terminals)}",
        )

    bad = _check_avoided(_avoided_set(cert), seen, flat)
    if bad is not None:
        return bad
    return CheckResult(ok=True)
