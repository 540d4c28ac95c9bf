"""
Constructive cycle extensions by splitting along a direction.

- fink_extend_perfect: Hamilton cycle through a perfect matching of K(Q_d)
- extend_to_cycle: some cycle through any matching of K(Q_d)
- extend_avoiding: a cycle that avoids z, or the (H) witness when (H) fails

Every construction works on matchings that avoid the origin (the avoided
vertex is moved there by an XOR translation). Each level picks a split
direction i, pairs the cut endpoints of Q^i_0, solves Q^i_0 recursively in
Q_{d-1} coordinates and glues the far half on through the shortcut edges of
stitch.py. Dimensions up to the base case go to the oracle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.hypercube.certificates import CycleCertificate, certificate_check
from src.hypercube.constructors import avoid_layer_completion
from src.hypercube.core import (
    ConstructionError,
    Edge,
    Matching,
    PreconditionError,
    SearchBudgetExceeded,
    bit,
    canonical_edge,
    check_vertex,
    cut_sizes,
    lift,
    parity,
    project,
)
from src.hypercube.layers import find_layers, half_layer_edges, layer_directions
from src.hypercube.property_h import (
    HReport,
    check_property_h,
    make_h_maximal,
    normalize_forbidden,
    satisfies_h,
)
from src.extender.stitch import (
    cut_endpoints,
    lift_cycle,
    reroute_edge,
    side_vertices,
    stitch,
    sub_matching,
)
from src.extender.trace import CaseStep, CaseTrace, cell_name
from src.search.oracle import SearchConfig, SearchOutcome, extends

logger = logging.getLogger("cubeham.induction")

try:
    from src.monitoring.prometheus_metrics import record_case_tags
except Exception:  # pragma: no cover - metrics are optional

    def record_case_tags(*args, **kwargs):
        return None


# Largest dimension handed to the oracle by each construction.
CYCLE_BASE_D = 4
AVOID_BASE_D = 5
FINK_BASE_D = 3


@dataclass
class HViolated:
    """(H) fails: no cycle through M avoids z."""

    z: int
    direction: int
    report: Optional[HReport] = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return False


# -----------------------------
# Shared helpers
# -----------------------------
def _fail(message: str, trace: Optional[CaseTrace]) -> ConstructionError:
    logger.error("%s; trace: %s", message, trace)
    return ConstructionError(message, trace)


def _oracle_cycle(
    m: Matching, cfg: Optional[SearchConfig], avoid: Sequence[int] = ()
) -> Optional[List[int]]:
    """Cycle from the oracle, None on NO."""
    res = extends(m, cfg, avoid=avoid)
    if res.outcome is SearchOutcome.BUDGET:
        raise SearchBudgetExceeded(
            f"oracle budget exhausted at d={m.d} after {res.nodes} nodes"
        )
    if res.outcome is SearchOutcome.NO:
        return None
    return list(res.certificate.vertices)


def _cross_map(m: Matching, i: int) -> Dict[int, int]:
    """Both endpoints of every edge crossing direction i, mapped to each other."""
    b = bit(i)
    cross: Dict[int, int] = {}
    for u, v in m.edges():
        if (u ^ v) & b:
            cross[u] = v
            cross[v] = u
    return cross


def _lift_edges(edges: Sequence[Edge], i: int, b: int) -> List[Edge]:
    return [canonical_edge(lift(x, i, b), lift(y, i, b)) for x, y in edges]


def _project_edges(edges: Sequence[Edge], i: int) -> List[Edge]:
    return [canonical_edge(project(x, i), project(y, i)) for x, y in edges]


def _certify(
    m: Matching, seq: List[int], avoided=(), trace: Optional[CaseTrace] = None
) -> CycleCertificate:
    cert = CycleCertificate(vertices=seq, matching=m, avoided=frozenset(avoided))
    check = certificate_check(cert)
    if not check.ok:
        raise _fail(f"constructed cycle rejected: {check}", trace)
    return cert


# -----------------------------
# Perfect matchings
# -----------------------------
def _fink(m: Matching, cfg: Optional[SearchConfig]) -> List[int]:
    if m.d <= FINK_BASE_D:
        seq = _oracle_cycle(m, cfg)
        if seq is None:
            raise ConstructionError(f"perfect matching {m.edges()} has no Hamilton extension")
        return seq
    cuts = cut_sizes(m)
    i = int(np.argmax(cuts)) + 1
    a0 = cut_endpoints(m, i, 0)
    if len(a0) < 2:
        raise ConstructionError(f"perfect matching at d={m.d} has largest cut {len(a0)}")
    cross = _cross_map(m, i)
    p0 = [(a0[k], a0[k + 1]) for k in range(0, len(a0), 2)]
    c0 = lift_cycle(_fink(sub_matching(m, i, 0, p0), cfg), i, 0)

    def far(shortcuts: List[Edge]) -> List[int]:
        return lift_cycle(_fink(sub_matching(m, i, 1, shortcuts), cfg), i, 1)

    return stitch(c0, p0, cross, far)


def fink_extend_perfect(m: Matching, cfg: Optional[SearchConfig] = None) -> CycleCertificate:
    """Hamilton cycle of Q_d containing the perfect matching m of K(Q_d)."""
    if m.d < 2:
        raise PreconditionError(f"Hamilton extension needs d >= 2, got {m.d}")
    work = m.edges_only()
    if not work.is_perfect():
        raise PreconditionError(
            f"matching covers {len(work.covered_vertices())} of {work.n} vertices"
        )
    return _certify(work, _fink(work, cfg))


# -----------------------------
# Arbitrary matchings
# -----------------------------
def _cycle(m: Matching, cfg, trace: CaseTrace, depth: int) -> List[int]:
    d = m.d
    if d <= CYCLE_BASE_D:
        seq = _oracle_cycle(m, cfg)
        if seq is None:
            raise _fail(f"no cycle extends {m.edges()} at d={d}", trace)
        return seq
    if m.is_perfect():
        return _fink(m, cfg)

    free = m.uncovered_vertices()
    halves = layer_directions(m, 0)
    if not halves:
        return _avoid(m, free[0], cfg, trace, depth)
    i = halves[0]
    b = bit(i)
    low = [v for v in free if not v & b]
    high = [v for v in free if v & b]
    for group in (low, high):
        if len(group) >= 2:
            z = next((x for x in group if satisfies_h(m, x)), None)
            if z is None:
                raise _fail(f"no uncovered vertex of {group} satisfies (H)", trace)
            return _avoid(m, z, cfg, trace, depth)

    u, v = low[0], high[0]
    if v == u ^ b:
        return _fink(m.with_edges([(u, v)]), cfg)
    ui = u ^ b
    uim = m.partner(ui)
    n = m.without_edges([canonical_edge(ui, uim)]).with_edges([canonical_edge(u, uim)])
    seq = _avoid(n, ui, cfg, trace, depth)
    return reroute_edge(seq, u, uim, [ui])


def extend_to_cycle(
    m: Matching, cfg: Optional[SearchConfig] = None, trace: Optional[CaseTrace] = None
) -> CycleCertificate:
    """Cycle of Q_d containing every edge of the matching m of K(Q_d).

    Only the edges of m matter; vertex labels are dropped.
    """
    if m.d < 2:
        raise PreconditionError(f"cycle extension needs d >= 2, got {m.d}")
    trace = trace if trace is not None else CaseTrace()
    work = m.edges_only()
    seq = _cycle(work, cfg, trace, 0)
    record_case_tags(trace.tags())
    return _certify(work, seq, trace=trace)


# -----------------------------
# Avoiding a vertex
# -----------------------------
def _avoid_or_witness(
    m: Matching, z: int, cfg, trace: CaseTrace, depth: int
) -> Union[List[int], HViolated]:
    norm, tr = normalize_forbidden(m, z)
    report = check_property_h(norm, 0)
    if not report.satisfied:
        return HViolated(z=z, direction=report.violating_directions[0], report=report)
    return tr.vertices(_avoid_origin(norm, cfg, trace, depth))


def _avoid(m: Matching, z: int, cfg, trace: CaseTrace, depth: int) -> List[int]:
    """Cycle avoiding z for a subproblem that must satisfy (H)."""
    result = _avoid_or_witness(m, z, cfg, trace, depth)
    if isinstance(result, HViolated):
        raise _fail(
            f"subproblem at d={m.d} violates (H) for z={z} in direction {result.direction}",
            trace,
        )
    return result


def extend_avoiding(
    m: Matching,
    z: int = 0,
    cfg: Optional[SearchConfig] = None,
    trace: Optional[CaseTrace] = None,
) -> Union[CycleCertificate, HViolated]:
    """Cycle through every edge of m that misses z, for d >= 5.

    Returns HViolated instead when m breaks (H) for z, in which case no such
    cycle exists.
    """
    if m.d < AVOID_BASE_D:
        raise PreconditionError(f"z-avoiding extension needs d >= {AVOID_BASE_D}, got {m.d}")
    check_vertex(m.d, z)
    work = m.edges_only()
    if work.is_covered(z):
        raise PreconditionError(f"vertex {z} is covered by edge ({z}, {work.partner(z)})")
    trace = trace if trace is not None else CaseTrace()
    result = _avoid_or_witness(work, z, cfg, trace, 0)
    record_case_tags(trace.tags())
    if isinstance(result, HViolated):
        logger.info("No %d-avoiding extension: (H) fails in direction %d", z, result.direction)
        return result
    return _certify(work, result, avoided={z}, trace=trace)


def _avoid_origin(m: Matching, cfg, trace: CaseTrace, depth: int) -> List[int]:
    """Cycle through m avoiding 0; m avoids 0 and satisfies (H)."""
    d = m.d
    step = trace.open(d, 0, depth)
    if d <= AVOID_BASE_D:
        step.base = "oracle"
        trace.log(step)
        seq = _oracle_cycle(m, cfg, avoid=[0])
        if seq is None:
            raise _fail(f"no 0-avoiding cycle extends {m.edges()} at d={d}", trace)
        return seq

    mx = make_h_maximal(m, 0)
    i, rule = _choose_direction(mx)
    cut = int(cut_sizes(mx)[i - 1])
    step.direction, step.rule, step.cut = i, rule, cut
    _check_direction_guarantees(mx, i, rule, cut, trace)

    if cut % 2 == 0:
        step.parity_case = 1
        trace.log(step)
        seq = _even_cut(mx, i, cfg, trace, depth)
    else:
        step.parity_case = 2
        seq = _odd_cut(mx, i, step, cfg, trace, depth)

    check = certificate_check(CycleCertificate(vertices=seq, matching=mx, avoided=frozenset({0})))
    if not check.ok:
        raise _fail(f"level d={d} split on {i} produced a bad cycle: {check}", trace)
    return seq


def _choose_direction(mx: Matching) -> Tuple[int, str]:
    covered_near_quads = layer_directions(mx, 1, quads=True, x=0, covered_only=True)
    if covered_near_quads:
        return covered_near_quads[0], "1"
    quads = layer_directions(mx, 0, quads=True)
    if quads:
        return quads[0], "2"
    return int(np.argmax(cut_sizes(mx))) + 1, "3"


def _check_direction_guarantees(
    mx: Matching, i: int, rule: str, cut: int, trace: CaseTrace
) -> None:
    near_lower = layer_directions(mx, 1, covered_only=True, side=(i, 0))
    if near_lower:
        raise _fail(
            f"M^{i}_0 contains covered near half-layers of Q^{i}_0 in directions {near_lower}",
            trace,
        )
    if layer_directions(mx, 0, side=(i, 1)) and rule == "3":
        raise _fail(f"M^{i}_1 contains a half-layer of Q^{i}_1 under rule 3", trace)
    floor = 7 if rule in ("1", "2") else 4
    if cut < floor:
        raise _fail(f"rule {rule} picked direction {i} with cut {cut} < {floor}", trace)


def _completion(sub0: Matching, ends: Sequence[int], trace: CaseTrace) -> List[Edge]:
    """Pairing of `ends` (Q_{d-1} coordinates) with no half-layer in sub0 + pairing."""
    ends = sorted(ends)
    if not ends:
        return []
    if len(ends) == 2:
        return [canonical_edge(ends[0], ends[1])]
    try:
        return avoid_layer_completion(sub0, ends, mode="half")
    except PreconditionError as exc:
        raise _fail(f"cannot complete {ends} without a half-layer: {exc}", trace) from exc


def _even_cut(mx: Matching, i: int, cfg, trace: CaseTrace, depth: int) -> List[int]:
    sub0 = mx.restrict(i, 0)
    a0 = [project(v, i) for v in cut_endpoints(mx, i, 0)]
    p0_sub = _completion(sub0, a0, trace)
    c0 = lift_cycle(_avoid(sub0.with_edges(p0_sub), 0, cfg, trace, depth + 1), i, 0)

    def far(shortcuts: List[Edge]) -> List[int]:
        return lift_cycle(_cycle(sub_matching(mx, i, 1, shortcuts), cfg, trace, depth + 1), i, 1)

    return stitch(c0, _lift_edges(p0_sub, i, 0), _cross_map(mx, i), far)


# -----------------------------
# Odd cut: surgery at a vertex u
# -----------------------------
@dataclass
class _Surgery:
    u: int
    ui: int
    v: int
    w: int
    n: Matching
    cell: str

    @property
    def via(self) -> List[int]:
        """Vertices the path v ... w must pass through to restore M."""
        return [x for x in (self.u, self.ui) if x not in (self.v, self.w)]


def _state(partner: Optional[int], own_side: int, b: int) -> str:
    if partner is None:
        return "free"
    return "same" if bool(partner & b) == bool(own_side) else "cross"


def _surgery(mx: Matching, u: int, i: int) -> _Surgery:
    """N = M - u u^M - u^i u^{iM} + v w with v = u^M or u and w = u^{iM} or u^i."""
    b = bit(i)
    ui = u ^ b
    um, uim = mx.partner(u), mx.partner(ui)
    if um == ui:
        raise ConstructionError(f"edge ({u}, {ui}) lies in the matching")
    removed = [canonical_edge(x, y) for x, y in ((u, um), (ui, uim)) if y is not None]
    v = um if um is not None else u
    w = uim if uim is not None else ui
    n = mx.without_edges(removed).with_edges([canonical_edge(v, w)])
    cell = cell_name(_state(um, 0, b), _state(uim, 1, b))
    return _Surgery(u=u, ui=ui, v=v, w=w, n=n, cell=cell)


def _choose_u(mx: Matching, i: int, step: CaseStep, trace: CaseTrace) -> _Surgery:
    b = bit(i)
    free0 = [x for x in side_vertices(mx.d, i, 0) if x and not mx.is_covered(x)]
    if free0:
        step.tag("a")
        for x in free0:
            if not mx.is_covered(x ^ b):
                raise _fail(f"both ends of cube edge ({x}, {x ^ b}) are uncovered", trace)
        crossing = [x for x in free0 if mx.partner(x ^ b) & b]
        if crossing:
            step.tag("ai")
            return _surgery(mx, crossing[0], i)
        step.tag("aii")
        for x in free0:
            s = _surgery(mx, x, i)
            if not layer_directions(s.n, 1, covered_only=True, side=(i, 0)):
                return s
        raise _fail(f"every uncovered vertex of Q^{i}_0 completes a near half-layer", trace)

    step.tag("b")
    odd_free = [
        x for x in side_vertices(mx.d, i, 0) if parity(x) and mx.partner(x) != x ^ b
    ]
    if not odd_free:
        raise _fail(f"every odd vertex of Q^{i}_0 is matched across direction {i}", trace)
    pool = set(odd_free)

    for p in find_layers(mx, kinds=("quad", "near_quad")):
        if p.side != (i, 1):
            continue
        cands = sorted(w ^ b for e in p.edges for w in e if parity(w) == 0 and w ^ b in pool)
        if cands:
            step.u_rule = "1'"
            return _surgery(mx, cands[0], i)
    # Containment: a quad or near quad of Q^i_0 also contains a 2-near one.
    for p in find_layers(mx, kinds=("quad", "near_quad", "two_near_quad")):
        if p.side != (i, 0):
            continue
        cands = sorted(w for e in p.edges for w in e if w in pool)
        if cands:
            step.u_rule = "2'"
            return _surgery(mx, cands[0], i)
    step.u_rule = "3'"
    return _surgery(mx, odd_free[0], i)


def _far_dangerous_directions(
    n: Matching, i: int, ui: int
) -> Dict[int, List[Edge]]:
    """Directions j of Q^i_1 with a half-layer L of Q^i_1 that is dangerous for u^i.

    L must miss u^i, each of its edges must lie in N^i_1 or join two cut
    endpoints, and the j-side of Q^i_1 holding u^i must be covered apart
    from u^i itself. Edges are in full coordinates.
    """
    d = n.d
    upper = side_vertices(d, i, 1)
    b1 = set(cut_endpoints(n, i, 1))
    found: Dict[int, List[Edge]] = {}
    for j in range(1, d + 1):
        if j == i:
            continue
        bj = bit(j)
        same_side = [w for w in upper if (w & bj) == (ui & bj) and w != ui]
        if not all(n.is_covered(w) for w in same_side):
            continue
        for c in (0, 1):
            layer = half_layer_edges(d, j, c, side=(i, 1))
            if any(ui in e for e in layer):
                continue
            if all(n.partner(x) == y or (x in b1 and y in b1) for x, y in layer):
                found[j] = layer
                break
    return found


def _pull_back(n: Matching, e: Edge, trace: CaseTrace) -> Edge:
    """The Q^i_0 pair whose shortcut is the far-side edge e."""
    x, y = e
    px, py = n.partner(x), n.partner(y)
    if px is None or py is None:
        raise _fail(f"far-side edge {e} has an uncovered end", trace)
    return canonical_edge(px, py)


def _choose_pairing(
    mx: Matching, s: _Surgery, i: int, step: CaseStep, trace: CaseTrace
) -> List[Edge]:
    """P_0 in full coordinates."""
    n = s.n
    sub0 = n.restrict(i, 0)
    b0 = cut_endpoints(n, i, 0)

    if not mx.is_covered(s.ui):
        step.pairing = "a"
        return _lift_edges(_completion(sub0, [project(v, i) for v in b0], trace), i, 0)

    layers = _far_dangerous_directions(n, i, s.ui)
    dirs = sorted(layers)
    step.independent_directions = len(dirs)
    forced: List[Edge] = []
    if not dirs:
        step.pairing = "bi"
    elif len(dirs) == 1:
        layer = layers[dirs[0]]
        missing = [e for e in layer if e not in n]
        if not missing:
            raise _fail(f"N^{i}_1 contains a half-layer of Q^{i}_1 in direction {dirs[0]}", trace)
        if len(b0) >= 6:
            step.pairing = "bii'"
            forced = [_pull_back(n, missing[0], trace)]
        else:
            step.pairing = "bii''"
            forced = [_pull_back(n, e, trace) for e in missing]
    else:
        step.pairing = "biii"
        b1 = set(cut_endpoints(n, i, 1))
        others = [k for k in range(1, n.d + 1) if k != i]
        for j in dirs:
            pj = others[(others.index(j) - 1) % len(others)]
            a = s.ui ^ bit(pj)
            e = canonical_edge(a, a ^ bit(j))
            layer = layers[j]
            if e not in layer:
                raise _fail(f"edge {e} is not in the dangerous layer of direction {j}", trace)
            if not all(x in b1 for x in e):
                raise _fail(f"edge {e} of direction {j} is not a shortcut candidate", trace)
            if e not in n:
                forced.append(_pull_back(n, e, trace))
    step.tag(step.pairing)

    used = [v for e in forced for v in e]
    if len(set(used)) != len(used):
        raise _fail(f"forced pairs {forced} share a vertex", trace)
    rest = [project(v, i) for v in b0 if v not in used]
    forced_sub = _project_edges(forced, i)
    tail = _completion(sub0.with_edges(forced_sub), rest, trace)
    p0 = forced + _lift_edges(tail, i, 0)
    if layer_directions(sub0.with_edges(forced_sub + tail), 0):
        raise _fail(f"pairing {p0} completes a half-layer of Q^{i}_0", trace)
    return p0


def _odd_cut(
    mx: Matching, i: int, step: CaseStep, cfg, trace: CaseTrace, depth: int
) -> List[int]:
    s = _choose_u(mx, i, step, trace)
    step.u, step.cell = s.u, s.cell
    n = s.n
    n_cut = int(cut_sizes(n)[i - 1])
    if n_cut % 2 or n_cut < 4:
        raise _fail(f"surgery at u={s.u} left cut {n_cut} in direction {i}", trace)

    p0 = _choose_pairing(mx, s, i, step, trace)
    trace.log(step)

    sub0 = sub_matching(n, i, 0, p0)
    c0 = lift_cycle(_avoid(sub0, 0, cfg, trace, depth + 1), i, 0)
    if mx.is_covered(s.u) and s.u in c0:
        raise _fail(f"cycle of Q^{i}_0 passes the vacated vertex {s.u}", trace)

    if mx.is_covered(s.ui):
        zf = project(s.ui, i)

        def far(shortcuts: List[Edge]) -> List[int]:
            sub1 = sub_matching(n, i, 1, shortcuts)
            return lift_cycle(_avoid(sub1, zf, cfg, trace, depth + 1), i, 1)

    else:

        def far(shortcuts: List[Edge]) -> List[int]:
            sub1 = sub_matching(n, i, 1, shortcuts)
            return lift_cycle(_cycle(sub1, cfg, trace, depth + 1), i, 1)

    seq = stitch(c0, p0, _cross_map(n, i), far)
    blocked = [x for x in s.via if x in seq]
    if blocked:
        raise _fail(f"cycle already visits {blocked} before the surgery is undone", trace)
    return reroute_edge(seq, s.v, s.w, s.via)
