"""Shared fixtures: small matchings, an independent cycle checker and a DOT reader."""

from __future__ import annotations

import re
from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx
import pytest

from src.hypercube.constructors import parity_class_matching
from src.hypercube.core import Matching


# -----------------------------
# Independent checks
# -----------------------------
def cube_graph(d: int, m: Optional[Matching] = None) -> nx.Graph:
    """Q_d plus the (possibly long) edges of m."""
    g = nx.hypercube_graph(d)
    g = nx.relabel_nodes(g, {v: int("".join(map(str, reversed(v))), 2) for v in g.nodes})
    if m is not None:
        g.add_edges_from(m.edges())
    return g


def extending_cycles(m: Matching, avoid: Iterable[int] = ()) -> List[List[int]]:
    """Every simple cycle of Q_d + M through all edges of M and missing `avoid`.

    Brute force over networkx cycles; only for d <= 3.
    """
    assert m.d <= 3, "brute-force enumeration is for d <= 3"
    g = cube_graph(m.d, m)
    g.remove_nodes_from(list(avoid))
    wanted = {tuple(sorted(e)) for e in m.edges()}
    out = []
    for cycle in nx.simple_cycles(g):
        if len(cycle) < 3:
            continue
        k = len(cycle)
        steps = {tuple(sorted((cycle[j], cycle[(j + 1) % k]))) for j in range(k)}
        if wanted <= steps:
            out.append(cycle)
    return out


def assert_extends(vertices: List[int], m: Matching, avoid: Iterable[int] = ()) -> None:
    """Check a cycle against the graph directly, without certificate_check."""
    g = cube_graph(m.d, m)
    k = len(vertices)
    assert k >= 3 and len(set(vertices)) == k
    steps = set()
    for j in range(k):
        a, b = vertices[j], vertices[(j + 1) % k]
        assert g.has_edge(a, b), f"{a}-{b} is neither a cube edge nor in M"
        steps.add(tuple(sorted((a, b))))
    for e in m.edges():
        assert tuple(sorted(e)) in steps, f"matching edge {e} missing"
    assert not set(avoid) & set(vertices)


# -----------------------------
# DOT
# -----------------------------
_NODE = re.compile(r"^\s*(\d+)\s*\[(.*)\];\s*$")
_EDGE = re.compile(r"^\s*(\d+)\s*--\s*(\d+)\s*\[(.*)\];\s*$")
_HEAD = re.compile(r"^\s*graph\s+(\w+)\s*\{\s*$")


def _attrs(text: str) -> Dict[str, str]:
    out = {}
    for part in re.findall(r'(\w+)=("[^"]*"|[\w.]+)', text):
        out[part[0]] = part[1].strip('"')
    return out


def parse_dot(text: str) -> Tuple[str, Dict[int, Dict[str, str]], List[Tuple[int, int, Dict]]]:
    """Minimal reader for the undirected DOT subset emitted by to_dot."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    head = _HEAD.match(lines[0])
    if not head or lines[-1].strip() != "}":
        raise ValueError("not an undirected DOT graph")
    nodes: Dict[int, Dict[str, str]] = {}
    edges: List[Tuple[int, int, Dict]] = []
    for ln in lines[1:-1]:
        if ln.strip().startswith("node "):
            continue
        e = _EDGE.match(ln)
        if e:
            edges.append((int(e.group(1)), int(e.group(2)), _attrs(e.group(3))))
            continue
        n = _NODE.match(ln)
        if n:
            nodes[int(n.group(1))] = _attrs(n.group(2))
            continue
        raise ValueError(f"unparsed DOT line: {ln!r}")
    return head.group(1), nodes, edges


# -----------------------------
# Fixtures
# -----------------------------
@pytest.fixture
def diagonal_d2() -> Matching:
    """K(Q_2) with the single long edge 00-11."""
    return Matching.from_edges(2, [(0, 3)])


@pytest.fixture
def even_perfect_d3() -> Matching:
    """Perfect matching of the four even vertices of Q_3."""
    return parity_class_matching(3, 0)


@pytest.fixture
def long_edges_d4() -> Matching:
    return Matching.from_edges(4, [(0, 15), (1, 6), (3, 12), (5, 10)])


@pytest.fixture
def tmp_matching_file(tmp_path):
    """Write a MatchingDocument JSON string to a temp file and return its path."""

    def write(text: str, name: str = "matching.json"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return write
