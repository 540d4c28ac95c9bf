"""
Generation of matchings on the MATCH-labelled vertices of a seed table.

- DFS keeps one partial matching and hands each completed one to a callback
- BFS grows a whole set one edge at a time, dropping isomorphic copies after
  every round
- hybrid runs BFS until the working set outgrows `bfs_limit`, then finishes
  every member by DFS

In partial mode a MATCH vertex may also be left uncovered, which enumerates
all (not only perfect) matchings on the MATCH set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np

from src.config import BFS_LIMIT
from src.hypercube.core import MATCH, UNCOVERED, MalformedMatchingError, Matching
from src.search.canonical import CanonicalForm, canonical_form

logger = logging.getLogger("cubeham.generation")


@dataclass
class GenerationConfig:
    fixed_directions: Tuple[int, ...] = ()
    translate: bool = False
    partial: bool = False
    cube_edges_only: bool = False
    dedup: bool = True
    bfs_limit: int = BFS_LIMIT

    def key(self, m: Matching) -> CanonicalForm:
        return canonical_form(m, self.fixed_directions, self.translate)


def _check_seed(seed: Matching, cfg: GenerationConfig) -> None:
    seed.validate()
    count = int(np.count_nonzero(seed.slots == MATCH))
    if count % 2 and not cfg.partial:
        raise MalformedMatchingError(f"odd number of MATCH vertices ({count})")


def _first_match(m: Matching) -> Optional[int]:
    idx = np.flatnonzero(m.slots == MATCH)
    return int(idx[0]) if len(idx) else None


def _children(m: Matching, cfg: GenerationConfig) -> Iterator[Matching]:
    """Matchings obtained by resolving the smallest MATCH vertex u."""
    u = _first_match(m)
    others = np.flatnonzero(m.slots == MATCH)
    for v in others:
        v = int(v)
        if v == u:
            continue
        if cfg.cube_edges_only and bin(u ^ v).count("1") != 1:
            continue
        child = m.copy()
        child.slots[u] = UNCOVERED
        child.slots[v] = UNCOVERED
        child.add_edge(u, v)
        yield child
    if cfg.partial:
        child = m.copy()
        child.slots[u] = UNCOVERED
        yield child


def _complete(m: Matching) -> bool:
    return not np.any(m.slots == MATCH)


# -----------------------------
# DFS
# -----------------------------
def _dfs(m: Matching, cfg: GenerationConfig) -> Iterator[Matching]:
    if _complete(m):
        yield m
        return
    for child in _children(m, cfg):
        yield from _dfs(child, cfg)


def generate_matchings_dfs(
    seed: Matching,
    on_complete: Optional[Callable[[Matching], None]] = None,
    cfg: Optional[GenerationConfig] = None,
) -> int:
    """Call on_complete for every completed matching; return how many were produced.

    With cfg.dedup the callback sees one representative per isomorphism class.
    """
    cfg = cfg or GenerationConfig(dedup=False)
    _check_seed(seed, cfg)
    seen = set()
    produced = 0
    for m in _dfs(seed.copy(), cfg):
        if cfg.dedup:
            k = cfg.key(m)
            if k in seen:
                continue
            seen.add(k)
        produced += 1
        if on_complete is not None:
            on_complete(m)
    logger.debug("DFS produced %d matchings", produced)
    return produced


# -----------------------------
# BFS
# -----------------------------
def _dedup(items: List[Matching], cfg: GenerationConfig) -> List[Matching]:
    if not cfg.dedup:
        return items
    reps: Dict[CanonicalForm, Matching] = {}
    for m in items:
        reps.setdefault(cfg.key(m), m)
    return [reps[k] for k in sorted(reps)]


def _bfs_round(items: List[Matching], cfg: GenerationConfig) -> List[Matching]:
    out: List[Matching] = []
    for m in items:
        if _complete(m):
            out.append(m)
        else:
            out.extend(_children(m, cfg))
    return _dedup(out, cfg)


def generate_matchings_bfs(
    seed: Matching, cfg: Optional[GenerationConfig] = None
) -> List[Matching]:
    """All completed matchings, one per isomorphism class when cfg.dedup is set."""
    cfg = cfg or GenerationConfig()
    _check_seed(seed, cfg)
    items = [seed.copy()]
    rounds = 0
    while not all(_complete(m) for m in items):
        items = _bfs_round(items, cfg)
        rounds += 1
        logger.debug("BFS round %d: %d matchings", rounds, len(items))
    return items


def generate_matchings(
    seed: Matching,
    on_complete: Optional[Callable[[Matching], None]] = None,
    cfg: Optional[GenerationConfig] = None,
) -> int:
    """Hybrid generation: BFS while the working set fits, then DFS per member.

    Completed matchings are deduplicated at the end when cfg.dedup is set, so
    the callback sees the same classes as generate_matchings_bfs.
    """
    cfg = cfg or GenerationConfig()
    _check_seed(seed, cfg)
    items = [seed.copy()]
    while not all(_complete(m) for m in items):
        nxt = _bfs_round(items, cfg)
        if len(nxt) > cfg.bfs_limit:
            logger.info(
                "Working set of %d exceeds %d; switching to DFS", len(nxt), cfg.bfs_limit
            )
            break
        items = nxt

    seen = set()
    produced = 0
    for start in items:
        for m in _dfs(start, cfg):
            if cfg.dedup:
                k = cfg.key(m)
                if k in seen:
                    continue
                seen.add(k)
            produced += 1
            if on_complete is not None:
                on_complete(m)
    return produced
