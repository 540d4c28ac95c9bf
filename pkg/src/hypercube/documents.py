"""
JSON documents exchanged by the command line and the harness.

Matching:  {"d": int, "edges": [[u, v], ...], "forbidden": [...], "terminals": [...]}
Cycle:     {"d": int, "cycle": [v0, ..., vk-1]}
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config import MAX_DIMENSION
from src.hypercube.certificates import CycleCertificate, LinearForestCertificate
from src.hypercube.core import MATCH, MalformedMatchingError, Matching

logger = logging.getLogger("cubeham.documents")


def _check_range(d: int, vertices, what: str) -> None:
    n = 1 << d
    bad = [v for v in vertices if not 0 <= v < n]
    if bad:
        raise ValueError(f"{what} {bad} out of range for d={d}")


class MatchingDocument(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    d: int = Field(ge=1, le=MAX_DIMENSION)
    edges: List[Tuple[int, int]] = Field(default_factory=list)
    forbidden: List[int] = Field(default_factory=list)
    terminals: List[int] = Field(default_factory=list)

    @field_validator("edges")
    @classmethod
    def _canonical_edges(cls, edges: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        out = []
        for u, v in edges:
            if u == v:
                raise ValueError(f"edge ({u}, {v}) is a loop")
            out.append((u, v) if u < v else (v, u))
        return sorted(out)

    @field_validator("forbidden", "terminals")
    @classmethod
    def _sorted_vertices(cls, vertices: List[int]) -> List[int]:
        return sorted(vertices)

    @model_validator(mode="after")
    def _check_vertices(self) -> "MatchingDocument":
        used = [x for e in self.edges for x in e]
        _check_range(self.d, used, "edge endpoints")
        _check_range(self.d, self.forbidden, "forbidden vertices")
        _check_range(self.d, self.terminals, "terminals")
        everything = used + self.forbidden + self.terminals
        if len(set(everything)) != len(everything):
            seen, dup = set(), set()
            for v in everything:
                (dup if v in seen else seen).add(v)
            raise ValueError(f"vertices {sorted(dup)} appear more than once")
        return self

    @classmethod
    def from_matching(cls, m: Matching) -> "MatchingDocument":
        if np.any(m.slots == MATCH):
            raise MalformedMatchingError("MATCH labels have no JSON form")
        return cls(
            d=m.d,
            edges=m.edges(),
            forbidden=m.forbidden_vertices(),
            terminals=m.terminal_vertices(),
        )

    def to_matching(self) -> Matching:
        return Matching.from_edges(
            self.d, self.edges, forbidden=self.forbidden, terminals=self.terminals
        )


class CycleDocument(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    d: int = Field(ge=1, le=MAX_DIMENSION)
    cycle: List[int]
    avoided: List[int] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_cycle(self) -> "CycleDocument":
        _check_range(self.d, self.cycle, "cycle vertices")
        _check_range(self.d, self.avoided, "avoided vertices")
        if len(set(self.cycle)) != len(self.cycle):
            raise ValueError("cycle repeats a vertex")
        return self

    @classmethod
    def from_certificate(cls, cert: CycleCertificate) -> "CycleDocument":
        return cls(d=cert.d, cycle=list(cert.vertices), avoided=sorted(cert.avoided))


class PathDocument(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    d: int = Field(ge=1, le=MAX_DIMENSION)
    paths: List[List[int]]
    terminals: List[int] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_paths(self) -> "PathDocument":
        flat = [v for p in self.paths for v in p]
        _check_range(self.d, flat, "path vertices")
        return self

    @classmethod
    def from_certificate(cls, cert: LinearForestCertificate) -> "PathDocument":
        return cls(d=cert.d, paths=[list(p) for p in cert.paths], terminals=sorted(cert.terminals))


class TraceDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    steps: List[Dict[str, Any]] = Field(default_factory=list)
    tags: Dict[str, int] = Field(default_factory=dict)

    @classmethod
    def from_trace(cls, trace) -> "TraceDocument":
        return cls(steps=trace.to_dict()["steps"], tags=trace.tag_counts())


class OracleDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    result: str
    cycle: Optional[List[int]] = None
    paths: Optional[List[List[int]]] = None
    max_length: Optional[int] = None
    nodes: int = 0


class FailureDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    status: str
    message: str = ""
    matching: Optional[MatchingDocument] = None
    trace: Optional[TraceDocument] = None


class ReportDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    suite: str
    seed: int
    total: int = 0
    passed: int = 0
    failed: int = 0
    budget_exhausted: int = 0
    tags: Dict[str, int] = Field(default_factory=dict)
    details: Dict[str, Any] = Field(default_factory=dict)
    failures: List[FailureDocument] = Field(default_factory=list)


# -----------------------------
# Helpers
# -----------------------------
def load_matching(source: Union[str, Path]) -> Matching:
    """Parse a matching from a JSON file path or a JSON string."""
    if isinstance(source, Path) or not str(source).lstrip().startswith("{"):
        text = Path(source).read_text()
    else:
        text = str(source)
    return MatchingDocument.model_validate_json(text).to_matching()


def dump_matching(m: Matching) -> str:
    return MatchingDocument.from_matching(m).model_dump_json()


def dump_cycle(cert: Union[CycleCertificate, LinearForestCertificate]) -> str:
    if isinstance(cert, LinearForestCertificate):
        return PathDocument.from_certificate(cert).model_dump_json()
    return CycleDocument.from_certificate(cert).model_dump_json()


def dump_json(doc: BaseModel, indent: Optional[int] = 2) -> str:
    """Stable JSON for reports: sorted keys, fixed indentation."""
    return json.dumps(doc.model_dump(mode="json"), indent=indent, sort_keys=True)


def to_dot(
    cert: Union[CycleCertificate, LinearForestCertificate], name: str = "extension"
) -> str:
    """Graphviz rendering: matching edges bold red, avoided vertices dashed."""
    m = cert.matching
    d = cert.d
    avoided = set(cert.avoided) | set(m.forbidden_vertices())
    if isinstance(cert, LinearForestCertificate):
        visited = [v for p in cert.paths for v in p]
    else:
        visited = list(cert.vertices)

    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for v in sorted(set(visited) | avoided):
        attrs = [f'label="{v:0{d}b}"']
        if v in avoided:
            attrs.append("style=dashed")
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in cert.edges():
        if m.partner(u) == v:
            lines.append(f"  {u} -- {v} [color=red, style=bold];")
        else:
            lines.append(f"  {u} -- {v} [color=black];")
    lines.append("}")
    return "\n".join(lines) + "\n"
