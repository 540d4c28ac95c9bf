"""Per-level records of the avoiding-extension induction."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

logger = logging.getLogger("cubeham.trace")

SUBCASE_TAGS = ("a", "ai", "aii", "b", "bi", "bii'", "bii''", "biii")
RULES = ("1", "2", "3")
# Position of a vertex's matching partner relative to the split direction.
CELL_STATES = ("free", "same", "cross")


@dataclass
class CaseStep:
    depth: int
    d: int
    z: int
    direction: Optional[int] = None
    rule: Optional[str] = None
    parity_case: Optional[int] = None
    subcases: List[str] = field(default_factory=list)
    u_rule: Optional[str] = None
    pairing: Optional[str] = None
    u: Optional[int] = None
    cell: Optional[str] = None
    cut: Optional[int] = None
    independent_directions: Optional[int] = None
    base: Optional[str] = None

    def tag(self, name: str) -> None:
        if name not in SUBCASE_TAGS:
            raise ValueError(f"unknown case tag {name!r}")
        self.subcases.append(name)


@dataclass
class CaseTrace:
    steps: List[CaseStep] = field(default_factory=list)

    def open(self, d: int, z: int, depth: int = 0) -> CaseStep:
        step = CaseStep(depth=depth, d=d, z=z)
        self.steps.append(step)
        return step

    def log(self, step: CaseStep) -> None:
        logger.debug("Case step: %s", asdict(step))

    def tags(self) -> List[str]:
        return [t for s in self.steps for t in s.subcases]

    def tag_counts(self) -> Dict[str, int]:
        counts = Counter(self.tags())
        for s in self.steps:
            if s.rule:
                counts[f"rule{s.rule}"] += 1
            if s.parity_case:
                counts[f"case{s.parity_case}"] += 1
            if s.base:
                counts[f"base:{s.base}"] += 1
        return dict(sorted(counts.items()))

    def to_dict(self) -> dict:
        return {"steps": [asdict(s) for s in self.steps]}

    @classmethod
    def from_dict(cls, data: dict) -> "CaseTrace":
        return cls(steps=[CaseStep(**s) for s in data.get("steps", [])])

    def __str__(self) -> str:
        parts = []
        for s in self.steps:
            bits = [f"d={s.d}"]
            if s.direction is not None:
                bits.append(f"i={s.direction}")
            if s.rule:
                bits.append(f"rule {s.rule}")
            if s.parity_case:
                bits.append(f"case {s.parity_case}")
            if s.subcases:
                bits.append("/".join(s.subcases))
            if s.base:
                bits.append(f"base {s.base}")
            parts.append(" ".join(bits))
        return " -> ".join(parts) or "<empty trace>"


def cell_name(u_state: str, ui_state: str) -> str:
    """Label of the surgery cell by where u and u^i are matched."""
    if u_state not in CELL_STATES or ui_state not in CELL_STATES:
        raise ValueError(f"unknown cell state ({u_state!r}, {ui_state!r})")
    return f"u:{u_state}/ui:{ui_state}"
