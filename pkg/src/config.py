"""
Runtime configuration for cubeham.

Values come from the environment (optionally a local `.env` file):
- CUBEHAM_JOBS: harness worker processes (default: logical cores)
- CUBEHAM_NODE_BUDGET: default search-node budget of the oracle
- CUBEHAM_LOG_LEVEL: log level used by the CLI
- CUBEHAM_FIXTURE_DIR: where regression fixtures are stored
- CUBEHAM_BFS_LIMIT: working-set size at which hybrid generation switches to DFS
- CUBEHAM_METRICS_FILE: optional Prometheus textfile written after suites
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from e
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


JOBS: int = _int_env("CUBEHAM_JOBS", os.cpu_count() or 1)
NODE_BUDGET: int = _int_env("CUBEHAM_NODE_BUDGET", 10**8)
BFS_LIMIT: int = _int_env("CUBEHAM_BFS_LIMIT", 200_000)
LOG_LEVEL: str = os.getenv("CUBEHAM_LOG_LEVEL", "WARNING").upper()
FIXTURE_DIR = Path(os.getenv("CUBEHAM_FIXTURE_DIR", "tests/fixtures"))
METRICS_FILE: Optional[str] = os.getenv("CUBEHAM_METRICS_FILE") or None

MAX_DIMENSION = 24
