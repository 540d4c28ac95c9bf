"""
Verification suites.

A suite expands into a list of tasks. Each task names a check, a dimension
and a global index; the instance a check works on is drawn from
(seed, index), so results do not depend on the worker count. Workers share
nothing, outcomes come back in index order and are aggregated with pandas
into a HarnessReport whose JSON form is byte-stable for a fixed seed.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd

from src.config import FIXTURE_DIR, JOBS, METRICS_FILE, NODE_BUDGET
from src.hypercube.constructors import (
    avoid_layer_completion,
    bound_f,
    extend_to_maximal,
    parity_class_matching,
)
from src.hypercube.core import (
    ConstructionError,
    CubehamError,
    Matching,
    SearchBudgetExceeded,
    canonical_edge,
    is_maximal,
)
from src.hypercube.documents import (
    FailureDocument,
    MatchingDocument,
    ReportDocument,
    TraceDocument,
    dump_json,
)
from src.hypercube.layers import (
    LayerPattern,
    check_union_structure,
    choose_direction_maximal_cut,
    choose_direction_q5_quad,
    half_layer_edges,
    layer_directions,
)
from src.hypercube.property_h import make_h_maximal, satisfies_h
from src.extender.hamlace import HalfLayerPresent, hamlace_cycle, hamlace_path
from src.extender.induction import HViolated, extend_avoiding, extend_to_cycle, fink_extend_perfect
from src.extender.long_cycles import (
    kqd_length_bound,
    long_cycle_kqd,
    long_cycle_qd,
    qd_length_bound,
)
from src.extender.trace import SUBCASE_TAGS, CaseTrace
from src.harness.instances import gen_instance, rng_for
from src.search.generation import GenerationConfig, generate_matchings
from src.search.oracle import (
    SearchConfig,
    SearchOutcome,
    extend_linear_forest,
    extends,
    max_cycle_length,
)

logger = logging.getLogger("cubeham.suites")

try:
    from src.monitoring.prometheus_metrics import (
        record_harness_instance,
        record_suite_duration,
        write_metrics_textfile,
    )
except Exception:  # pragma: no cover - metrics are optional

    def record_harness_instance(*args, **kwargs):
        return None

    def record_suite_duration(*args, **kwargs):
        return None

    def write_metrics_textfile(*args, **kwargs):
        return False


SUITES = (
    "exhaustive_d_le_4",
    "necessity_d45",
    "sampled_thm8_d5",
    "lemma_bank",
    "length_bounds",
    "hamlace_d5",
    "d4_counterexample_hunt",
    "forest_pairs_d5",
    "fink_d4_9",
    "case_coverage",
)

DEFAULT_DIMS: Dict[str, Tuple[int, ...]] = {
    "exhaustive_d_le_4": (2, 3, 4),
    "necessity_d45": (4, 5),
    "sampled_thm8_d5": (5, 6),
    "lemma_bank": (4, 5, 6),
    "length_bounds": (5, 6, 7),
    "hamlace_d5": (5,),
    "d4_counterexample_hunt": (4,),
    "forest_pairs_d5": (4,),
    "fink_d4_9": (4, 5, 6, 7, 8, 9),
    "case_coverage": (6, 7),
}

# Random instances per dimension.
DEFAULT_COUNTS: Dict[str, int] = {
    "necessity_d45": 10_000,
    "sampled_thm8_d5": 10_000,
    "lemma_bank": 10_000,
    "length_bounds": 1_000,
    "hamlace_d5": 1_000,
    "d4_counterexample_hunt": 20_000,
    "forest_pairs_d5": 2_000,
    "fink_d4_9": 1_000,
    "case_coverage": 2_000,
}

HUNT_FIXTURE = "d4_counterexample.json"

PASS, FAIL, BUDGET = "pass", "fail", "budget"


@dataclass
class SuiteConfig:
    name: str
    seed: int = 0
    count: Optional[int] = None
    dims: Optional[Tuple[int, ...]] = None
    jobs: int = JOBS
    node_budget: int = NODE_BUDGET
    fixture_dir: Path = FIXTURE_DIR
    write_fixtures: bool = True
    metrics_file: Optional[str] = METRICS_FILE

    def __post_init__(self) -> None:
        if self.name not in SUITES:
            raise ValueError(f"unknown suite {self.name!r}; choose from {list(SUITES)}")
        if self.count is not None and self.count <= 0:
            raise ValueError(f"count must be positive, got {self.count}")
        if self.jobs <= 0:
            raise ValueError(f"jobs must be positive, got {self.jobs}")
        self.fixture_dir = Path(self.fixture_dir)

    @property
    def dimensions(self) -> Tuple[int, ...]:
        return tuple(self.dims) if self.dims else DEFAULT_DIMS[self.name]

    @property
    def per_dimension(self) -> int:
        return self.count or DEFAULT_COUNTS.get(self.name, 1)


@dataclass
class Task:
    suite: str
    index: int
    check: str
    d: int
    seed: int
    node_budget: int
    matching: Optional[Matching] = None


@dataclass
class Outcome:
    index: int
    check: str
    d: int
    status: str
    message: str = ""
    value: Optional[int] = None
    matching: Optional[Dict[str, Any]] = None
    trace: Optional[Dict[str, Any]] = None
    tags: Dict[str, int] = field(default_factory=dict)
    witness: Optional[Dict[str, Any]] = None
    seconds: float = 0.0


@dataclass
class HarnessReport:
    suite: str
    seed: int
    total: int = 0
    passed: int = 0
    failed: int = 0
    budget_exhausted: int = 0
    tags: Dict[str, int] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    failures: List[FailureDocument] = field(default_factory=list)
    wall_seconds: float = 0.0
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def document(self) -> ReportDocument:
        return ReportDocument(
            suite=self.suite,
            seed=self.seed,
            total=self.total,
            passed=self.passed,
            failed=self.failed,
            budget_exhausted=self.budget_exhausted,
            tags=self.tags,
            details=self.details,
            failures=self.failures,
        )

    def to_json(self) -> str:
        return dump_json(self.document())

    def summary(self) -> str:
        lines = [
            "=" * 60,
            f"Suite: {self.suite} (seed {self.seed})",
            f"Instances: {self.total}  passed: {self.passed}  failed: {self.failed}  "
            f"budget: {self.budget_exhausted}",
            f"Wall time: {self.wall_seconds:.1f}s",
        ]
        for key, median in sorted(self.timings.items()):
            lines.append(f"  median {key}: {median * 1000:.1f} ms")
        if self.tags:
            lines.append("Tags: " + ", ".join(f"{k}={v}" for k, v in self.tags.items()))
        lines.append("=" * 60)
        return "\n".join(lines)


# -----------------------------
# Outcome helpers
# -----------------------------
def _cfg(task: Task) -> SearchConfig:
    return SearchConfig(node_budget=task.node_budget)


def _doc(m: Matching, marked=()) -> Dict[str, Any]:
    return MatchingDocument(d=m.d, edges=m.edges(), forbidden=sorted(marked)).model_dump()


def _passed(task: Task, value: Optional[int] = None, **extra) -> Outcome:
    return Outcome(index=task.index, check=task.check, d=task.d, status=PASS, value=value, **extra)


def _failed(task: Task, message: str, m: Optional[Matching] = None, marked=()) -> Outcome:
    return Outcome(
        index=task.index,
        check=task.check,
        d=task.d,
        status=FAIL,
        message=message,
        matching=_doc(m, marked) if m is not None else None,
    )


def _budget(task: Task, m: Optional[Matching] = None, marked=()) -> Outcome:
    return Outcome(
        index=task.index,
        check=task.check,
        d=task.d,
        status=BUDGET,
        message="oracle budget exhausted",
        matching=_doc(m, marked) if m is not None else None,
    )


# -----------------------------
# Checks
# -----------------------------
def _check_exhaustive(task: Task) -> Outcome:
    m = task.matching
    res = extends(m, _cfg(task))
    if res.outcome is SearchOutcome.BUDGET:
        return _budget(task, m)
    if res.outcome is SearchOutcome.NO:
        return _failed(task, "oracle found no extending cycle", m)
    cert = extend_to_cycle(m, _cfg(task))
    if m.d >= 4 and len(layer_directions(m, 1)) > 1:
        return _failed(task, f"near half-layers in directions {layer_directions(m, 1)}", m)
    return _passed(task, value=len(cert))


def _check_necessity(task: Task) -> Outcome:
    inst = gen_instance("h_violating", task.d, task.seed, task.index)
    res = extends(inst.matching, _cfg(task), avoid=[inst.z])
    if res.outcome is SearchOutcome.BUDGET:
        return _budget(task, inst.matching, inst.marked)
    if res.found:
        return _failed(task, f"cycle avoiding {inst.z} exists", inst.matching, inst.marked)
    return _passed(task)


def _check_avoid_oracle(task: Task) -> Outcome:
    inst = gen_instance("h_satisfying", task.d, task.seed, task.index)
    res = extends(inst.matching, _cfg(task), avoid=[inst.z])
    if res.outcome is SearchOutcome.BUDGET:
        return _budget(task, inst.matching, inst.marked)
    if not res.found:
        return _failed(task, f"no cycle avoids {inst.z}", inst.matching, inst.marked)
    return _passed(task, value=len(res.certificate))


def _check_avoid_construct(task: Task, kind: Optional[str] = None) -> Outcome:
    if kind is None:
        kind = "h_satisfying" if task.index % 2 == 0 else "quad_planted"
    inst = gen_instance(kind, task.d, task.seed, task.index)
    trace = CaseTrace()
    try:
        result = extend_avoiding(inst.matching, inst.z, _cfg(task), trace)
    except ConstructionError as exc:
        out = _failed(task, str(exc), inst.matching, inst.marked)
        out.trace = trace.to_dict()
        return out
    if isinstance(result, HViolated):
        return _failed(task, f"(H) reported violated in direction {result.direction}",
                       inst.matching, inst.marked)
    return _passed(task, value=len(result), tags=trace.tag_counts())


def _check_union_structure(task: Task) -> Outcome:
    rng = rng_for(task.seed, task.index)
    k = int(rng.integers(2, min(task.d, 3) + 1))
    dirs = sorted(int(i) + 1 for i in rng.choice(task.d, size=k, replace=False))
    layers = []
    for i in dirs:
        c = int(rng.integers(0, 2))
        layers.append(LayerPattern(kind="half", direction=i, parity_class=c,
                                   edges=half_layer_edges(task.d, i, c)))
    report = check_union_structure(layers, task.d)
    if not report.ok:
        return _failed(task, f"union of half-layers in {dirs}: {report}")
    return _passed(task, value=report.avoided)


def _check_layer_direction_counts(task: Task) -> Outcome:
    m = gen_instance("uniform_kqd", task.d, task.seed, task.index).matching
    # (smallest d, max deficit, quad-layers, dangerous for)
    rules = [(4, 1, False, None), (5, 2, False, None), (6, 1, True, 0)]
    worst = 0
    for lo, deficit, quads, x in rules:
        if task.d < lo:
            continue
        dirs = layer_directions(m, deficit, quads=quads, x=x)
        if len(dirs) > 1:
            what = "quad-layers" if quads else "half-layers"
            return _failed(task, f"deficit-{deficit} {what} in directions {dirs}", m)
        worst = max(worst, len(dirs))
    return _passed(task, value=worst)


def _check_maximal_qd(task: Task) -> Outcome:
    m = extend_to_maximal(gen_instance("uniform_qd", task.d, task.seed, task.index).matching)
    floor = bound_f(task.d).ceil_f
    if len(m) < floor:
        return _failed(task, f"maximal matching of Q_{task.d} with {len(m)} < {floor} edges", m)
    return _passed(task, value=len(m))


def _check_maximal_kqd(task: Task) -> Outcome:
    m = extend_to_maximal(gen_instance("uniform_kqd", task.d, task.seed, task.index).matching)
    floor = 1 << (task.d - 2)
    if len(m) < floor:
        return _failed(task, f"maximal matching with {len(m)} < {floor} edges", m)
    return _passed(task, value=len(m))


def _check_cut_bound(task: Task) -> Outcome:
    m = extend_to_maximal(gen_instance("uniform_kqd", task.d, task.seed, task.index).matching)
    try:
        i = choose_direction_maximal_cut(m)
    except ConstructionError as exc:
        return _failed(task, str(exc), m)
    return _passed(task, value=int(sum(1 for u, v in m.edges() if (u ^ v) >> (i - 1) & 1)))


def _check_completion(task: Task, mode: str) -> Outcome:
    deficit = 0 if mode == "half" else 1
    rng = rng_for(task.seed, task.index)
    n = 1 << task.d
    perm = [int(v) for v in rng.permutation(n)]
    pairs = [canonical_edge(perm[k], perm[k + 1]) for k in range(0, n, 2)]
    k = int(rng.integers(0, len(pairs) - 1))
    r = int(rng.integers(2, len(pairs) - k + 1))
    m = Matching.from_edges(task.d, pairs[:k])
    if layer_directions(m, deficit):
        return _passed(task)
    a = [v for e in pairs[k : k + r] for v in e]
    p = avoid_layer_completion(m, a, mode)
    if sorted(v for e in p for v in e) != sorted(a):
        return _failed(task, f"completion {p} is not perfect on {sorted(a)}", m)
    if layer_directions(m.with_edges(p), deficit):
        return _failed(task, f"completion {p} created a {mode} layer", m)
    return _passed(task, value=len(p))


def _check_h_maximal_maximal(task: Task) -> Outcome:
    inst = gen_instance("h_satisfying", task.d, task.seed, task.index)
    m0 = inst.matching.translate(inst.z)
    mx = make_h_maximal(m0, 0)
    if layer_directions(mx, 1, x=0):
        return _passed(task)
    if not is_maximal(mx, [0]):
        return _failed(task, "H-maximal matching without dangerous layers is not maximal", mx, [0])
    return _passed(task, value=len(mx))


def _check_q5_quad(task: Task) -> Outcome:
    inst = gen_instance("quad_planted", task.d, task.seed, task.index)
    m0 = inst.matching.translate(inst.z)
    try:
        i = choose_direction_q5_quad(m0, 0)
    except ConstructionError as exc:
        return _failed(task, str(exc), m0, [0])
    if layer_directions(m0, 1, x=0, side=(i, 0)):
        return _failed(task, f"direction {i} keeps a dangerous layer in Q^{i}_0", m0, [0])
    return _passed(task, value=i)


def _check_maximal_qd_exhaustive(task: Task) -> Outcome:
    d = task.d
    seed = Matching.from_edges(d, match=range(1 << d))
    sizes: List[int] = []

    def keep(m: Matching) -> None:
        if is_maximal(m):
            sizes.append(len(m))

    gcfg = GenerationConfig(translate=True, partial=True, cube_edges_only=True)
    generate_matchings(seed, keep, gcfg)
    floor = bound_f(d).ceil_f
    if not sizes or min(sizes) < floor:
        smallest = min(sizes, default=0)
        return _failed(task, f"smallest maximal matching of Q_{d} has {smallest} edges")
    return _passed(task, value=min(sizes))


def _check_fixed_values(task: Task) -> Outcome:
    expected = {5: (12, 3), 6: (23, 4)}
    for d, (ceil_f, per_dir) in expected.items():
        b = bound_f(d)
        if (b.ceil_f, b.ceil_per_direction) != (ceil_f, per_dir):
            return _failed(task, f"bound_f({d}) = {b}")
    for d in range(2, 7):
        m = parity_class_matching(d, 0)
        if len(m) != 1 << (d - 2) or not is_maximal(m):
            return _failed(task, f"parity-class matching at d={d} is not tight", m)
    return _passed(task)


def _check_length_exact(task: Task) -> Outcome:
    cfg = _cfg(task)
    small = Matching.from_edges(2, [(0, 3)])
    res = max_cycle_length(small, cfg)
    if res.max_length != 3:
        return _failed(task, f"K(Q_2) matching has longest cycle {res.max_length}", small)
    evens = parity_class_matching(3, 0)
    res = max_cycle_length(evens, cfg)
    if res.max_length != 6:
        message = f"even-class matching of Q_3 has longest cycle {res.max_length}"
        return _failed(task, message, evens)
    return _passed(task)


def _check_long(task: Task, kind: str) -> Outcome:
    m = gen_instance(kind, task.d, task.seed, task.index).matching
    trace = CaseTrace()
    if kind == "uniform_qd":
        cert, floor = long_cycle_qd(m, _cfg(task), trace), qd_length_bound(task.d)
    else:
        cert, floor = long_cycle_kqd(m, _cfg(task), trace), kqd_length_bound(task.d)
    if len(cert) < floor:
        return _failed(task, f"cycle of length {len(cert)} < {floor}", m)
    return _passed(task, value=len(cert), tags=trace.tag_counts())


def _check_hamlace_pos(task: Task) -> Outcome:
    inst = gen_instance("hamlace", task.d, task.seed, task.index)
    m, x, y = inst.matching, inst.x, inst.y
    cycle = hamlace_cycle(m, x, y, _cfg(task))
    if isinstance(cycle, HalfLayerPresent) or len(cycle) != m.n - 2:
        return _failed(task, f"laceability cycle missing: {cycle}", m, inst.marked)

    a, b = m.edges()[0]
    full = m.without_edges([(a, b)]).with_edges([canonical_edge(x, a), canonical_edge(y, b)])
    path = hamlace_path(full, x, y, _cfg(task))
    if isinstance(path, HalfLayerPresent):
        return _failed(task, "laceability path reported a half-layer", full)
    p = path.paths[0]
    if len(p) != m.n or {p[0], p[-1]} != {x, y}:
        return _failed(task, f"path with {len(p)} vertices from {p[0]} to {p[-1]}", full)
    return _passed(task, value=len(cycle))


def _check_hamlace_neg(task: Task) -> Outcome:
    inst = gen_instance("hamlace_planted", task.d, task.seed, task.index)
    m = inst.matching
    verdict = hamlace_cycle(m, inst.x, inst.y, _cfg(task))
    if not isinstance(verdict, HalfLayerPresent):
        return _failed(task, "planted half-layer went unnoticed", m, inst.marked)
    res = extends(m, _cfg(task), avoid=inst.marked)
    if res.outcome is SearchOutcome.BUDGET:
        return _budget(task, m, inst.marked)
    if res.found:
        return _failed(task, "oracle laces a matching with a half-layer", m, inst.marked)
    return _passed(task, value=len(verdict.directions))


def _hunt_candidate(task: Task) -> Matching:
    if task.index % 2:
        inst = gen_instance("h_satisfying", task.d, task.seed, task.index)
        return inst.matching.translate(inst.z)
    rng = rng_for(task.seed, task.index)
    n = 1 << task.d
    spare = int(rng.integers(1, n))
    rest = [int(v) for v in rng.permutation([v for v in range(1, n) if v != spare])]
    return Matching.from_edges(task.d, zip(rest[0::2], rest[1::2]))


def _check_hunt(task: Task) -> Outcome:
    m = _hunt_candidate(task)
    if not satisfies_h(m, 0):
        return _passed(task)
    res = extends(m, _cfg(task), avoid=[0])
    if res.outcome is SearchOutcome.BUDGET:
        return _budget(task, m, [0])
    if res.found:
        return _passed(task)
    return _passed(task, value=len(m), witness=_doc(m, [0]))


def _check_forest_pairs(task: Task) -> Outcome:
    rng = rng_for(task.seed, task.index)
    n = 1 << task.d
    verts = [int(v) for v in rng.permutation(range(1, n))]
    k = int(rng.integers(0, len(verts) // 2 + 1))
    m = extend_to_maximal(
        Matching.from_edges(task.d, zip(verts[0 : 2 * k : 2], verts[1 : 2 * k : 2])), [0]
    )
    if layer_directions(m, 1):
        return _passed(task)
    cfg = _cfg(task)
    res = extends(m, cfg, avoid=[0])
    if res.outcome is SearchOutcome.BUDGET:
        return _budget(task, m, [0])
    if res.found:
        return _passed(task)
    pairs = 0
    for e1, e2 in itertools.combinations(m.edges(), 2):
        rest = m.without_edges([e1, e2])
        forest = extend_linear_forest(rest, list(e1) + list(e2), cfg, avoid=[0])
        if forest.outcome is SearchOutcome.BUDGET:
            return _budget(task, m, [0])
        if not forest.found:
            return _failed(task, f"removing {e1} and {e2} leaves no linear forest", m, [0])
        pairs += 1
    return _passed(task, value=pairs)


def _check_fink(task: Task) -> Outcome:
    m = gen_instance("perfect_kqd", task.d, task.seed, task.index).matching
    cert = fink_extend_perfect(m, _cfg(task))
    if len(cert) != m.n:
        return _failed(task, f"Hamilton cycle has {len(cert)} vertices", m)
    return _passed(task, value=len(cert))


_CHECKS: Dict[str, Callable[[Task], Outcome]] = {
    "exhaustive": _check_exhaustive,
    "necessity": _check_necessity,
    "avoid_oracle": _check_avoid_oracle,
    "avoid_construct": _check_avoid_construct,
    "avoid_saturated": lambda t: _check_avoid_construct(t, "cut_saturated"),
    "union_structure": _check_union_structure,
    "layer_direction_counts": _check_layer_direction_counts,
    "maximal_qd": _check_maximal_qd,
    "maximal_kqd": _check_maximal_kqd,
    "cut_bound": _check_cut_bound,
    "completion_half": lambda t: _check_completion(t, "half"),
    "completion_near": lambda t: _check_completion(t, "near_half"),
    "h_maximal_maximal": _check_h_maximal_maximal,
    "q5_quad": _check_q5_quad,
    "maximal_qd_exhaustive": _check_maximal_qd_exhaustive,
    "fixed_values": _check_fixed_values,
    "length_exact": _check_length_exact,
    "long_qd": lambda t: _check_long(t, "uniform_qd"),
    "long_kqd": lambda t: _check_long(t, "uniform_kqd"),
    "hamlace_pos": _check_hamlace_pos,
    "hamlace_neg": _check_hamlace_neg,
    "hunt": _check_hunt,
    "forest_pairs": _check_forest_pairs,
    "fink": _check_fink,
}


def _run_task(task: Task) -> Outcome:
    start = time.perf_counter()
    try:
        out = _CHECKS[task.check](task)
    except SearchBudgetExceeded as exc:
        out = _budget(task)
        out.message = str(exc)
    except ConstructionError as exc:
        out = _failed(task, str(exc), task.matching)
        if isinstance(exc.trace, CaseTrace):
            out.trace = exc.trace.to_dict()
    except CubehamError as exc:
        out = _failed(task, f"{type(exc).__name__}: {exc}", task.matching)
    out.seconds = time.perf_counter() - start
    return out


# -----------------------------
# Task lists
# -----------------------------
# Bank checks by dimension.
_BANK_CHECKS = {
    4: [
        "union_structure",
        "layer_direction_counts",
        "maximal_qd",
        "maximal_kqd",
        "completion_half",
        "completion_near",
    ],
    5: [
        "union_structure",
        "layer_direction_counts",
        "maximal_qd",
        "maximal_kqd",
        "cut_bound",
        "completion_half",
        "completion_near",
        "h_maximal_maximal",
        "q5_quad",
    ],
}
_BANK_DEFAULT = [
    "union_structure",
    "layer_direction_counts",
    "maximal_qd",
    "maximal_kqd",
    "cut_bound",
    "completion_half",
    "completion_near",
]
_COVERAGE_CHECKS = ("avoid_construct", "avoid_construct", "avoid_saturated", "long_kqd")

# bii'' needs cut 5 under rule 3 next to a 2-near half-layer of Q^i_1 with
# 5 edges from M. The j cut is then full, and the 15 free vertices outside
# that layer can only be matched by long edges the other cuts cannot fit.
UNREACHABLE_TAGS = ("bii''",)


def _enumerate_all(d: int) -> List[Matching]:
    out: List[Matching] = []
    seed = Matching.from_edges(d, match=range(1 << d))
    generate_matchings(seed, out.append, GenerationConfig(translate=True, partial=True))
    logger.info("Enumerated %d matchings of K(Q_%d) up to symmetry", len(out), d)
    return out


def build_tasks(cfg: SuiteConfig) -> List[Task]:
    name, count = cfg.name, cfg.per_dimension
    specs: List[Tuple[str, int, Optional[Matching]]] = []

    if name == "exhaustive_d_le_4":
        for d in cfg.dimensions:
            specs += [("exhaustive", d, m) for m in _enumerate_all(d)]
    elif name == "lemma_bank":
        specs += [("maximal_qd_exhaustive", d, None) for d in (2, 3, 4)]
        specs.append(("fixed_values", 5, None))
        for d in cfg.dimensions:
            checks = _BANK_CHECKS.get(d, _BANK_DEFAULT)
            specs += [(checks[k % len(checks)], d, None) for k in range(count)]
    elif name == "length_bounds":
        specs.append(("length_exact", 3, None))
        for d in cfg.dimensions:
            specs += [("long_qd" if k % 2 == 0 else "long_kqd", d, None) for k in range(count)]
    elif name == "hamlace_d5":
        for d in cfg.dimensions:
            specs += [("hamlace_neg" if k % 10 == 9 else "hamlace_pos", d, None)
                      for k in range(count)]
    elif name == "case_coverage":
        for d in cfg.dimensions:
            specs += [(_COVERAGE_CHECKS[k % len(_COVERAGE_CHECKS)], d, None)
                      for k in range(count)]
    else:
        check = {
            "necessity_d45": "necessity",
            "d4_counterexample_hunt": "hunt",
            "forest_pairs_d5": "forest_pairs",
            "fink_d4_9": "fink",
        }.get(name)
        for d in cfg.dimensions:
            if name == "sampled_thm8_d5":
                check = "avoid_oracle" if d <= 5 else "avoid_construct"
            specs += [(check, d, None)] * count

    return [
        Task(suite=name, index=k, check=c, d=d, seed=cfg.seed,
             node_budget=cfg.node_budget, matching=m)
        for k, (c, d, m) in enumerate(specs)
    ]


def _map(tasks: List[Task], jobs: int) -> List[Outcome]:
    if jobs <= 1 or len(tasks) <= 1:
        return [_run_task(t) for t in tasks]
    chunk = max(1, len(tasks) // (jobs * 8))
    with Pool(processes=min(jobs, len(tasks))) as pool:
        return pool.map(_run_task, tasks, chunksize=chunk)


# -----------------------------
# Aggregation
# -----------------------------
def _failure_document(out: Outcome) -> FailureDocument:
    return FailureDocument(
        index=out.index,
        status=out.status,
        message=out.message,
        matching=MatchingDocument(**out.matching) if out.matching else None,
        trace=TraceDocument(steps=out.trace["steps"]) if out.trace else None,
    )


def _details(df: pd.DataFrame) -> Dict[str, Any]:
    details: Dict[str, Any] = {}
    for (check, d), group in df.groupby(["check", "d"], sort=True):
        values = group["value"].dropna()
        details[f"{check}@d{int(d)}"] = {
            "count": int(len(group)),
            "passed": int((group["status"] == PASS).sum()),
            "min_value": int(values.min()) if len(values) else None,
            "max_value": int(values.max()) if len(values) else None,
        }
    return details


def _merge_tags(outcomes: List[Outcome]) -> Dict[str, int]:
    tags: Dict[str, int] = {}
    for out in outcomes:
        for k, v in out.tags.items():
            tags[k] = tags.get(k, 0) + v
    return dict(sorted(tags.items()))


def _write_fixture(cfg: SuiteConfig, doc: Dict[str, Any]) -> Path:
    path = cfg.fixture_dir / HUNT_FIXTURE
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(MatchingDocument(**doc)) + "\n")
    logger.info("Stored d=4 counterexample at %s", path)
    return path


def aggregate(cfg: SuiteConfig, outcomes: List[Outcome]) -> HarnessReport:
    outcomes = sorted(outcomes, key=lambda o: o.index)
    report = HarnessReport(suite=cfg.name, seed=cfg.seed, total=len(outcomes))
    if not outcomes:
        return report
    df = pd.DataFrame(
        [{"index": o.index, "check": o.check, "d": o.d, "status": o.status,
          "value": o.value, "seconds": o.seconds} for o in outcomes]
    )
    counts = df["status"].value_counts()
    report.passed = int(counts.get(PASS, 0))
    report.failed = int(counts.get(FAIL, 0))
    report.budget_exhausted = int(counts.get(BUDGET, 0))
    report.tags = _merge_tags(outcomes)
    report.details = _details(df)
    report.timings = {
        f"{check}@d{int(d)}": float(sec)
        for (check, d), sec in df.groupby(["check", "d"])["seconds"].median().items()
    }
    report.failures = [_failure_document(o) for o in outcomes if o.status != PASS]

    for o in outcomes:
        if o.status != PASS:
            logger.warning("Instance %d (%s, d=%d) %s: %s; matching %s",
                           o.index, o.check, o.d, o.status, o.message, o.matching)

    if cfg.name == "d4_counterexample_hunt":
        witnesses = [o for o in outcomes if o.witness]
        report.details["witnesses"] = len(witnesses)
        if witnesses:
            report.details["witness"] = witnesses[0].witness
            if cfg.write_fixtures:
                _write_fixture(cfg, witnesses[0].witness)
        else:
            report.failed += 1
            report.failures.append(
                FailureDocument(index=-1, status=FAIL, message="no d=4 counterexample found")
            )

    if cfg.name == "case_coverage":
        missing = [
            t for t in SUBCASE_TAGS if t not in UNREACHABLE_TAGS and not report.tags.get(t)
        ]
        report.details["missing_tags"] = missing
        report.details["unreachable_tags"] = list(UNREACHABLE_TAGS)
        if missing:
            report.failed += 1
            report.failures.append(
                FailureDocument(index=-1, status=FAIL, message=f"case tags never fired: {missing}")
            )
    return report


def run_suite(cfg: SuiteConfig) -> HarnessReport:
    """Run one suite end to end and return its report."""
    logger.info("Suite %s starting (seed %d, jobs %d)", cfg.name, cfg.seed, cfg.jobs)
    start = time.perf_counter()
    tasks = build_tasks(cfg)
    outcomes = _map(tasks, cfg.jobs)
    report = aggregate(cfg, outcomes)
    report.wall_seconds = time.perf_counter() - start

    for o in outcomes:
        record_harness_instance(cfg.name, o.status)
    record_suite_duration(cfg.name, report.wall_seconds)
    write_metrics_textfile(cfg.metrics_file)
    logger.info(
        "Suite %s finished: %d passed, %d failed, %d budget in %.1fs",
        cfg.name, report.passed, report.failed, report.budget_exhausted, report.wall_seconds,
    )
    return report
