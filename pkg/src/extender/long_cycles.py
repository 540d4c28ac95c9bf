"""
Long cycles through matchings.

Both constructions grow the input to a maximal matching M' with cube edges
and extend M' to a cycle, which then has at least 2|M'| vertices.
"""

from __future__ import annotations

import logging
from typing import Optional

from src.hypercube.certificates import CycleCertificate, certificate_check
from src.hypercube.constructors import bound_f, extend_to_maximal
from src.hypercube.core import ConstructionError, Matching, PreconditionError
from src.extender.induction import extend_to_cycle
from src.extender.trace import CaseTrace
from src.search.oracle import SearchConfig

logger = logging.getLogger("cubeham.long_cycles")


def qd_length_bound(d: int) -> int:
    """ceil(2^{d+1} / 3)."""
    return -(-(1 << (d + 1)) // 3)


def kqd_length_bound(d: int) -> int:
    return 1 << (d - 1)


def _long_cycle(
    m: Matching, floor: int, cfg: Optional[SearchConfig], trace: Optional[CaseTrace]
) -> CycleCertificate:
    work = m.edges_only()
    grown = extend_to_maximal(work)
    cert = extend_to_cycle(grown, cfg, trace)
    length = len(cert)
    if length < 2 * len(grown) or length < floor:
        raise ConstructionError(
            f"cycle of length {length} through {len(grown)} edges misses the bound {floor}",
            trace,
        )
    out = CycleCertificate(vertices=cert.vertices, matching=work)
    check = certificate_check(out)
    if not check.ok:
        raise ConstructionError(f"long cycle rejected: {check}", trace)
    logger.debug("Long cycle at d=%d: %d vertices via %d edges", m.d, length, len(grown))
    return out


def long_cycle_qd(
    m: Matching, cfg: Optional[SearchConfig] = None, trace: Optional[CaseTrace] = None
) -> CycleCertificate:
    """Cycle through the matching m of Q_d with at least ceil(2^{d+1}/3) vertices."""
    if m.d < 2:
        raise PreconditionError(f"long cycles need d >= 2, got {m.d}")
    if not m.is_cube_matching():
        long = [e for e in m.edges() if bin(e[0] ^ e[1]).count("1") != 1]
        raise PreconditionError(f"edges {long} are not edges of Q_{m.d}")
    floor = max(qd_length_bound(m.d), 2 * bound_f(m.d).ceil_f)
    return _long_cycle(m, floor, cfg, trace)


def long_cycle_kqd(
    m: Matching, cfg: Optional[SearchConfig] = None, trace: Optional[CaseTrace] = None
) -> CycleCertificate:
    """Cycle through the matching m of K(Q_d) with at least 2^{d-1} vertices."""
    if m.d < 2:
        raise PreconditionError(f"long cycles need d >= 2, got {m.d}")
    return _long_cycle(m, kqd_length_bound(m.d), cfg, trace)
