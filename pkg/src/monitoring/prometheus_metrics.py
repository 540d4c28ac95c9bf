"""
Prometheus metrics for cubeham.

Tracks:
- Oracle calls (result, search nodes)
- Certificate checks (ok / violation)
- Case tags fired by the inductive construction
- Harness instances per suite and their outcome
- Suite wall time

This module is safe to import from any component. Nothing is served over
HTTP; suites dump the default registry to a textfile with
`write_metrics_textfile` (for a node-exporter textfile collector).
"""

from __future__ import annotations

from typing import Optional

from prometheus_client import REGISTRY, Counter, Histogram, write_to_textfile

# ---------------------------------------------------------
# SEARCH ORACLE
# ---------------------------------------------------------

ORACLE_CALLS_TOTAL = Counter(
    "cubeham_oracle_calls_total",
    "Total number of oracle extendability searches",
    ["result"],  # yes, no, budget
)

ORACLE_NODES = Histogram(
    "cubeham_oracle_nodes",
    "Search nodes expanded per oracle call",
    buckets=(10, 100, 1_000, 10_000, 100_000, 1_000_000, 10_000_000),
)

# ---------------------------------------------------------
# CONSTRUCTIONS
# ---------------------------------------------------------

CERTIFICATE_CHECKS_TOTAL = Counter(
    "cubeham_certificate_checks_total",
    "Certificate checks by status",
    ["status"],  # ok, violation
)

CASE_TAGS_TOTAL = Counter(
    "cubeham_case_tags_total",
    "Case tags fired by the inductive z-avoiding construction",
    ["tag"],
)

# ---------------------------------------------------------
# HARNESS
# ---------------------------------------------------------

HARNESS_INSTANCES_TOTAL = Counter(
    "cubeham_harness_instances_total",
    "Harness instances by suite and status",
    ["suite", "status"],  # passed, failed, budget
)

SUITE_DURATION_SECONDS = Histogram(
    "cubeham_suite_duration_seconds",
    "Wall time of a harness suite (seconds)",
    ["suite"],
)

# ---------------------------------------------------------
# Recording Helpers
# ---------------------------------------------------------


def record_oracle_call(result: str, nodes: int) -> None:
    """Record one oracle search."""
    try:
        ORACLE_CALLS_TOTAL.labels(result=result).inc()
        ORACLE_NODES.observe(max(nodes, 0))
    except Exception:
        pass


def record_certificate_check(status: str) -> None:
    try:
        CERTIFICATE_CHECKS_TOTAL.labels(status=status).inc()
    except Exception:
        pass


def record_case_tags(tags) -> None:
    """Increment the counter of every tag in an iterable."""
    try:
        for tag in tags:
            CASE_TAGS_TOTAL.labels(tag=tag).inc()
    except Exception:
        pass


def record_harness_instance(suite: str, status: str) -> None:
    try:
        HARNESS_INSTANCES_TOTAL.labels(suite=suite, status=status).inc()
    except Exception:
        pass


def record_suite_duration(suite: str, seconds: float) -> None:
    try:
        SUITE_DURATION_SECONDS.labels(suite=suite).observe(seconds)
    except Exception:
        pass


# ---------------------------------------------------------
# Textfile export
# ---------------------------------------------------------


def write_metrics_textfile(path: Optional[str]) -> bool:
    """
    Write the default registry to `path` in the Prometheus text format.

    Returns False (and writes nothing) when no path is configured or the
    write fails.
    """
    if not path:
        return False
    try:
        write_to_textfile(path, REGISTRY)
        return True
    except Exception:
        return False
