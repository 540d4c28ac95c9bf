"""
Canonical forms of partner tables under hypercube automorphisms.

The group is the set of direction permutations that fix the given
directions, optionally extended by all XOR translations. Every group element
is applied to the slot table and the lexicographically smallest image wins.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Tuple

import numpy as np

from src.hypercube.core import Matching, check_direction

logger = logging.getLogger("cubeham.canonical")

# Slots are shifted by this offset before encoding so that every value is a
# non-negative big-endian integer and byte order equals numeric order.
_OFFSET = 4
_DTYPE = ">u2"


@dataclass(frozen=True, order=True)
class CanonicalForm:
    d: int
    key: bytes

    def matching(self) -> Matching:
        slots = np.frombuffer(self.key, dtype=_DTYPE).astype(np.int32) - _OFFSET
        return Matching.from_slots(self.d, slots)

    def __str__(self) -> str:
        return f"CanonicalForm(d={self.d}, key={self.key.hex()})"


@lru_cache(maxsize=64)
def direction_permutations(d: int, fixed: Tuple[int, ...] = ()) -> np.ndarray:
    """All permutations (0-based bit images) fixing the 1-based directions in `fixed`."""
    free = [k for k in range(d) if k + 1 not in fixed]
    perms = []
    for images in itertools.permutations(free):
        p = list(range(d))
        for k, img in zip(free, images):
            p[k] = img
        perms.append(p)
    return np.array(perms, dtype=np.int64).reshape(len(perms), d)


@lru_cache(maxsize=64)
def _vertex_images(d: int, fixed: Tuple[int, ...], translate: bool) -> np.ndarray:
    """Vertex images, shape (n, |group|): column g is the map v -> g(v)."""
    n = 1 << d
    v = np.arange(n, dtype=np.int64)
    bits = (v[:, None] >> np.arange(d)) & 1
    weights = np.left_shift(1, direction_permutations(d, fixed))
    images = bits @ weights.T
    if translate:
        images = (images[:, :, None] ^ v[None, None, :]).reshape(n, -1)
    return images


def _normalize_fixed(d: int, fixed: Iterable[int]) -> Tuple[int, ...]:
    out = tuple(sorted(set(int(i) for i in fixed)))
    for i in out:
        check_direction(d, i)
    return out


def orbit_tables(
    m: Matching, fixed_directions: Iterable[int] = (), translate: bool = False
) -> np.ndarray:
    """Slot tables of all images of m, one per row (duplicates included)."""
    fixed = _normalize_fixed(m.d, fixed_directions)
    images = _vertex_images(m.d, fixed, translate)
    s = m.slots.astype(np.int64)
    partner = np.where(s >= 0, s, 0)
    mapped = np.where(s[:, None] >= 0, images[partner], s[:, None])
    tables = np.empty_like(mapped)
    np.put_along_axis(tables, images, mapped, axis=0)
    return tables.T


def canonical_form(
    m: Matching, fixed_directions: Iterable[int] = (), translate: bool = False
) -> CanonicalForm:
    """Lexicographically smallest slot table over the automorphism group."""
    tables = orbit_tables(m, fixed_directions, translate)
    order = np.lexsort(tables.T[::-1])
    best = tables[order[0]]
    key = (best + _OFFSET).astype(_DTYPE).tobytes()
    return CanonicalForm(d=m.d, key=key)


def are_isomorphic(
    a: Matching, b: Matching, fixed_directions: Iterable[int] = (), translate: bool = False
) -> bool:
    if a.d != b.d:
        return False
    fixed = tuple(fixed_directions)
    return canonical_form(a, fixed, translate) == canonical_form(b, fixed, translate)


def apply_permutation(m: Matching, perm: Iterable[int]) -> Matching:
    """Image of m under the direction map i -> perm[i-1] (1-based)."""
    p = [int(i) - 1 for i in perm]
    if sorted(p) != list(range(m.d)):
        raise ValueError(f"{list(perm)} is not a permutation of 1..{m.d}")
    v = np.arange(m.n, dtype=np.int64)
    bits = (v[:, None] >> np.arange(m.d)) & 1
    images = bits @ np.left_shift(1, np.array(p, dtype=np.int64))
    s = m.slots.astype(np.int64)
    mapped = np.where(s >= 0, images[np.where(s >= 0, s, 0)], s)
    out = np.empty_like(mapped)
    out[images] = mapped
    return Matching.from_slots(m.d, out)
