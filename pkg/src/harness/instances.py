"""
Seeded instance families for the harness and the `gen` command.

Every instance is drawn from a PCG64 generator seeded with
SeedSequence([seed, index]), so instance k of a suite is the same no matter
which worker builds it. Each family is re-checked by its defining predicate
before it is returned.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.hypercube.core import (
    ConstructionError,
    Edge,
    Matching,
    PreconditionError,
    bit,
    canonical_edge,
    check_dimension,
    cut_sizes,
    iter_cube_edges,
    parity,
)
from src.hypercube.documents import MatchingDocument
from src.hypercube.layers import half_layer_edges, layer_directions
from src.hypercube.property_h import satisfies_h

logger = logging.getLogger("cubeham.instances")

# Retries for families defined by rejection.
MAX_ATTEMPTS = 200


@dataclass
class Instance:
    kind: str
    d: int
    seed: int
    index: int
    matching: Matching
    z: Optional[int] = None
    x: Optional[int] = None
    y: Optional[int] = None

    @property
    def marked(self) -> List[int]:
        return [v for v in (self.z, self.x, self.y) if v is not None]

    def document(self) -> MatchingDocument:
        """The matching with z (or x and y) recorded as forbidden vertices."""
        return MatchingDocument(
            d=self.d, edges=self.matching.edges(), forbidden=self.marked
        )


def rng_for(seed: int, index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


def _pairs(rng: np.random.Generator, verts: Sequence[int]) -> List[Edge]:
    perm = [int(v) for v in rng.permutation(np.asarray(verts, dtype=np.int64))]
    return [canonical_edge(perm[k], perm[k + 1]) for k in range(0, len(perm) - 1, 2)]


def _some_pairs(rng: np.random.Generator, verts: Sequence[int]) -> List[Edge]:
    pairs = _pairs(rng, verts)
    k = int(rng.integers(0, len(pairs) + 1))
    return pairs[:k]


# -----------------------------
# Families
# -----------------------------
def _uniform_kqd(d: int, rng) -> Tuple[Matching, Dict]:
    return Matching.from_edges(d, _some_pairs(rng, range(1 << d))), {}


def _uniform_qd(d: int, rng) -> Tuple[Matching, Dict]:
    cube = list(iter_cube_edges(d))
    keep = float(rng.random())
    m = Matching(d)
    for k in rng.permutation(len(cube)):
        u, i = cube[int(k)]
        v = u ^ bit(i)
        if not m.is_covered(u) and not m.is_covered(v) and rng.random() < keep:
            m.add_edge(u, v)
    return m, {}


def _perfect_kqd(d: int, rng) -> Tuple[Matching, Dict]:
    return Matching.from_edges(d, _pairs(rng, range(1 << d))), {}


def _h_satisfying(d: int, rng) -> Tuple[Matching, Dict]:
    z = int(rng.integers(0, 1 << d))
    others = [v for v in range(1 << d) if v != z]
    for _ in range(MAX_ATTEMPTS):
        m = Matching.from_edges(d, _some_pairs(rng, others))
        if satisfies_h(m, z):
            return m, {"z": z}
    raise ConstructionError(f"no (H)-satisfying draw in {MAX_ATTEMPTS} attempts at d={d}")


def _half_layer_planted(d: int, rng) -> Tuple[Matching, Dict]:
    i = int(rng.integers(1, d + 1))
    c = int(rng.integers(0, 2))
    layer = half_layer_edges(d, i, c)
    used = {v for e in layer for v in e}
    rest = [v for v in range(1 << d) if v not in used]
    return Matching.from_edges(d, layer + _some_pairs(rng, rest)), {}


def _parity_class(d: int, rng) -> Tuple[Matching, Dict]:
    evens = [v for v in range(1 << d) if parity(v) == 0]
    return Matching.from_edges(d, _pairs(rng, evens)), {}


def _h_violating(d: int, rng) -> Tuple[Matching, Dict]:
    """A half-layer of class 1 in direction i with all of Q^i_0 but 0 covered,
    moved to a random z."""
    i = int(rng.integers(1, d + 1))
    b = bit(i)
    edges = half_layer_edges(d, i, 1)
    evens = [v for v in range(1, 1 << d) if not v & b and parity(v) == 0]
    upper = [v for v in range(1 << d) if v & b and parity(v) == 1]
    evens = [int(v) for v in rng.permutation(evens)]
    upper = [int(v) for v in rng.permutation(upper)]
    t = int(rng.integers(0, (len(evens) - 1) // 2 + 1))
    edges += [canonical_edge(evens[2 * k], evens[2 * k + 1]) for k in range(t)]
    lone = evens[2 * t :]
    edges += [canonical_edge(v, upper[k]) for k, v in enumerate(lone)]
    edges += _some_pairs(rng, upper[len(lone) :])
    m = Matching.from_edges(d, edges)
    z = int(rng.integers(0, 1 << d))
    return m.translate(z), {"z": z}


def _quad_planted(d: int, rng) -> Tuple[Matching, Dict]:
    """A 0-dangerous (near) quad-layer plus random fill, moved to a random z."""
    for _ in range(MAX_ATTEMPTS):
        i = int(rng.integers(1, d + 1))
        j = int(rng.choice([k for k in range(1, d + 1) if k != i]))
        edges = half_layer_edges(d, i, 1, side=(j, 0))
        if rng.random() < 0.5:
            edges.pop(int(rng.integers(0, len(edges))))
        used = {v for e in edges for v in e}
        rest = [v for v in range(1, 1 << d) if v not in used]
        m = Matching.from_edges(d, edges + _some_pairs(rng, rest))
        if satisfies_h(m, 0) and layer_directions(m, 1, quads=True, x=0):
            z = int(rng.integers(0, 1 << d))
            return m.translate(z), {"z": z}
    raise ConstructionError(f"no quad-planted draw in {MAX_ATTEMPTS} attempts at d={d}")


SATURATED_FREE = 13


def _cut_saturated(d: int, rng) -> Tuple[Matching, Dict]:
    """Every vertex of Q^1_0 but 0 joined across direction 1 by a long edge.

    The far side keeps SATURATED_FREE uncovered, which lies opposite 3 in
    directions 2, 3 and 4, so the odd-cut step at u = 2 meets three dangerous
    half-layers of Q^1_1. Moved to a random z.
    """
    lower = list(range(2, 1 << d, 2))
    upper = [int(v) for v in rng.permutation(range(1, 1 << d, 2)) if v != SATURATED_FREE]
    for k, x in enumerate(lower):
        if upper[k] == x ^ 1:
            nxt = (k + 1) % len(upper)
            upper[k], upper[nxt] = upper[nxt], upper[k]
    m = Matching.from_edges(d, zip(lower, upper))
    z = int(rng.integers(0, 1 << d))
    return m.translate(z), {"z": z}


def _lacing_pair(rng, d: int) -> Tuple[int, int]:
    x = int(rng.integers(0, 1 << d))
    opposite = [v for v in range(1 << d) if parity(v) != parity(x)]
    return x, int(rng.choice(opposite))


def _hamlace(d: int, rng) -> Tuple[Matching, Dict]:
    for _ in range(MAX_ATTEMPTS):
        x, y = _lacing_pair(rng, d)
        rest = [v for v in range(1 << d) if v not in (x, y)]
        m = Matching.from_edges(d, _pairs(rng, rest))
        if not layer_directions(m, 0):
            return m, {"x": x, "y": y}
    raise ConstructionError(f"no half-layer-free draw in {MAX_ATTEMPTS} attempts at d={d}")


def _hamlace_planted(d: int, rng) -> Tuple[Matching, Dict]:
    i = int(rng.integers(1, d + 1))
    c = int(rng.integers(0, 2))
    layer = half_layer_edges(d, i, c)
    used = {v for e in layer for v in e}
    b = bit(i)
    lower = [v for v in range(1 << d) if not v & b and v not in used]
    upper = [v for v in range(1 << d) if v & b and v not in used]
    x = int(rng.choice(lower))
    y = int(rng.choice([v for v in upper if parity(v) != parity(x)]))
    rest = [v for v in lower + upper if v not in (x, y)]
    return Matching.from_edges(d, layer + _pairs(rng, rest)), {"x": x, "y": y}


# kind -> (builder, smallest d, largest d)
FAMILIES: Dict[str, Tuple[Callable, int, int]] = {
    "uniform_kqd": (_uniform_kqd, 2, 16),
    "uniform_qd": (_uniform_qd, 2, 16),
    "perfect_kqd": (_perfect_kqd, 2, 16),
    "h_satisfying": (_h_satisfying, 2, 16),
    "half_layer_planted": (_half_layer_planted, 2, 16),
    "parity_class": (_parity_class, 2, 16),
    "h_violating": (_h_violating, 3, 16),
    "quad_planted": (_quad_planted, 4, 16),
    "cut_saturated": (_cut_saturated, 4, 16),
    "hamlace": (_hamlace, 5, 16),
    "hamlace_planted": (_hamlace_planted, 5, 16),
}
KINDS = tuple(FAMILIES)


def _post_check(inst: Instance) -> None:
    m = inst.matching
    kind = inst.kind
    n = m.n
    if kind == "perfect_kqd":
        ok = m.is_perfect()
    elif kind == "uniform_qd":
        ok = m.is_cube_matching()
    elif kind == "h_satisfying":
        ok = satisfies_h(m, inst.z)
    elif kind == "h_violating":
        ok = not m.is_covered(inst.z) and not satisfies_h(m, inst.z)
    elif kind == "quad_planted":
        ok = satisfies_h(m, inst.z) and bool(
            layer_directions(m.translate(inst.z), 1, quads=True, x=0)
        )
    elif kind == "cut_saturated":
        base = m.translate(inst.z)
        ok = base.uncovered_vertices() == [0, SATURATED_FREE] and int(
            cut_sizes(base)[0]
        ) == (n // 2) - 1
    elif kind == "half_layer_planted":
        ok = bool(layer_directions(m, 0))
    elif kind == "parity_class":
        ok = m.covered_vertices() == [v for v in range(n) if parity(v) == 0]
    elif kind in ("hamlace", "hamlace_planted"):
        ok = sorted(m.uncovered_vertices()) == sorted((inst.x, inst.y)) and parity(
            inst.x
        ) != parity(inst.y)
        ok = ok and bool(layer_directions(m, 0)) == (kind == "hamlace_planted")
    else:
        ok = True
    if not ok:
        raise ConstructionError(f"{kind} instance {inst.index} (seed {inst.seed}) left its family")


def gen_instance(kind: str, d: int, seed: int, index: int = 0) -> Instance:
    """Instance `index` of family `kind` at dimension d."""
    if kind not in FAMILIES:
        raise PreconditionError(f"unknown instance kind {kind!r}; choose from {list(KINDS)}")
    check_dimension(d)
    builder, lo, hi = FAMILIES[kind]
    if not lo <= d <= hi:
        raise PreconditionError(f"{kind} instances need {lo} <= d <= {hi}, got {d}")
    m, marks = builder(d, rng_for(seed, index))
    inst = Instance(kind=kind, d=d, seed=seed, index=index, matching=m, **marks)
    _post_check(inst)
    logger.debug("Generated %s #%d at d=%d with %d edges", kind, index, d, len(m))
    return inst
