"""Wall-clock measurement, experiment sweeps, crossover detection and scans.

Measurement protocol: every configuration runs the cut pipeline
(preprocess, simulate subcircuits, merge) and the uncut baseline strictly
single-threaded and sequentially, phase-timed with a monotonic clock, mean
over R repetitions (default 10) with per-phase standard deviations kept.
State memory is dropped and garbage-collected between repetitions. The total
cut time is defined as the sum of the three phase means, and the relative
overhead is delta = (t_cut - t_orig) / t_orig (negative means cutting won).

When a budget is set, runs abort cooperatively at the deadline and the
timeout is recorded as data. Grid points may only be run in parallel when
explicitly requested, and such rows are marked as contended.
"""
from __future__ import annotations

import gc
import json
import math
import os
import platform
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from io import StringIO
from typing import Iterable, Sequence

import numpy as np

from .circuits import BenchmarkSpec, Circuit, build_benchmark
from .costmodel import threshold_line
from .cutting import decompose, plan_cut, plan_cut_sizes
from .engine import DEFAULT_MAX_QUBITS, simulate
from .errors import BudgetExceededError, CapacityError, ValidationError
from .merging import merge, merge_input_from
from .svmfit import BoundaryFit, fit_weighted_line

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "q", "n", "c_total", "D", "G",
    "t_pre", "t_sub", "t_merge", "t_cut", "t_orig",
    "delta", "reps", "status", "schema_version",
)

# Desk-scale sweep grids; full-size grids are an explicit caller choice.
DEFAULT_GRIDS = {
    2: (tuple(range(2, 21, 2)), tuple(range(1, 11))),
    3: (tuple(range(3, 19, 3)), tuple(range(2, 13, 2))),
}

MACHINE_TAG_ENV = "CUTBENCH_MACHINE_TAG"


def machine_tag(override: str | None = None) -> str:
    if override:
        return override
    return os.environ.get(MACHINE_TAG_ENV) or platform.node() or "unknown"


@dataclass
class TimingBreakdown:
    """Measured phase timings for one configuration (seconds, means over reps)."""

    q: int
    n: int
    c_total: int
    depth: int
    gate_count: int
    t_pre: float
    t_sub: float
    t_merge: float
    t_cut: float
    t_orig: float
    delta: float
    reps: int
    status: str
    blocks: int = 0
    pad_exponent: int | None = None
    t_pre_std: float = math.nan
    t_sub_std: float = math.nan
    t_merge_std: float = math.nan
    t_orig_std: float = math.nan
    samples: dict = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return not self.status.startswith("timeout")


_WARMED = False


def warm_up() -> None:
    """Compile and touch every hot kernel once so timers never see JIT cost."""
    global _WARMED
    if _WARMED:
        return
    for n_seg, q in ((2, 2), (3, 3), (4, 4)):
        circ = build_benchmark(BenchmarkSpec(q=q, n=n_seg, blocks=1))
        plan = plan_cut(circ, n_seg)
        subs = decompose(circ, plan)
        states = [[simulate(c) for c in fam.circuits] for fam in subs.segments]
        merge(merge_input_from(subs, states))
        simulate(circ)
    from .merging import _iadd  # blocked-accumulation kernel

    buf = np.zeros(4, dtype=np.complex128)
    _iadd(buf, buf)
    _WARMED = True


def _mean_std(values: Sequence[float], skip: int) -> tuple[float, float]:
    vals = values[skip:] if len(values) > skip else values
    if not vals:
        return math.nan, math.nan
    mean = sum(vals) / len(vals)
    if len(vals) < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
    return mean, math.sqrt(var)


def _cut_once(circuit: Circuit, n: int, *, max_qubits: int, deadline: float | None):
    """One timed pass of the cut pipeline. Returns phase times and the state."""
    t0 = time.perf_counter()
    plan = plan_cut(circuit, n)
    subs = decompose(circuit, plan)
    t_pre = time.perf_counter() - t0

    if deadline is not None and time.monotonic() > deadline:
        raise BudgetExceededError("cut pipeline exceeded its budget during preprocessing")

    t0 = time.perf_counter()
    states = [
        [simulate(c, max_qubits=max_qubits, deadline=deadline) for c in fam.circuits]
        for fam in subs.segments
    ]
    t_sub = time.perf_counter() - t0

    t0 = time.perf_counter()
    merged = merge(merge_input_from(subs, states), max_qubits=max_qubits, deadline=deadline)
    t_merge = time.perf_counter() - t0
    return t_pre, t_sub, t_merge, merged


def _orig_once(circuit: Circuit, *, max_qubits: int, deadline: float | None):
    t0 = time.perf_counter()
    state = simulate(circuit, max_qubits=max_qubits, deadline=deadline)
    return time.perf_counter() - t0, state


def measure(
    spec: BenchmarkSpec,
    repetitions: int = 10,
    *,
    budget: float | None = None,
    max_qubits: int = DEFAULT_MAX_QUBITS,
    discard_warmup: bool = False,
    pipelines: tuple[str, ...] = ("cut", "orig"),
) -> TimingBreakdown:
    """Measure one configuration: phase-timed cut pipeline plus uncut baseline."""
    if repetitions < 1:
        raise ValidationError(f"repetitions must be >= 1, got {repetitions}")
    unknown = set(pipelines) - {"cut", "orig"}
    if unknown:
        raise ValidationError(f"unknown pipelines: {sorted(unknown)}")
    warm_up()
    circuit = build_benchmark(spec)

    samples: dict[str, list[float]] = {"pre": [], "sub": [], "merge": [], "orig": []}
    cut_timeout = False
    orig_timeout = False
    for _ in range(repetitions):
        if "cut" in pipelines and not cut_timeout:
            deadline = time.monotonic() + budget if budget is not None else None
            try:
                t_pre, t_sub, t_merge, merged = _cut_once(
                    circuit, spec.n, max_qubits=max_qubits, deadline=deadline
                )
                samples["pre"].append(t_pre)
                samples["sub"].append(t_sub)
                samples["merge"].append(t_merge)
                del merged
            except BudgetExceededError:
                cut_timeout = True
            gc.collect()
        if "orig" in pipelines and not orig_timeout:
            deadline = time.monotonic() + budget if budget is not None else None
            try:
                t_orig, state = _orig_once(circuit, max_qubits=max_qubits, deadline=deadline)
                samples["orig"].append(t_orig)
                del state
            except BudgetExceededError:
                orig_timeout = True
            gc.collect()

    skip = 1 if discard_warmup else 0
    t_pre, pre_std = _mean_std(samples["pre"], skip)
    t_sub, sub_std = _mean_std(samples["sub"], skip)
    t_merge, merge_std = _mean_std(samples["merge"], skip)
    t_orig, orig_std = _mean_std(samples["orig"], skip)
    if "cut" in pipelines and cut_timeout:
        t_pre = t_sub = t_merge = math.nan
    if "orig" in pipelines and orig_timeout:
        t_orig = math.nan
    if "cut" not in pipelines:
        t_pre = t_sub = t_merge = math.nan
    if "orig" not in pipelines:
        t_orig = math.nan

    t_cut = t_pre + t_sub + t_merge  # phase-sum identity, by definition
    delta = (t_cut - t_orig) / t_orig if math.isfinite(t_cut) and math.isfinite(t_orig) else math.nan

    timed_out = []
    if cut_timeout:
        timed_out.append("cut")
    if orig_timeout:
        timed_out.append("orig")
    status = "timeout-" + "+".join(timed_out) if timed_out else "ok"

    return TimingBreakdown(
        q=spec.q,
        n=spec.n,
        c_total=spec.c_total,
        depth=circuit.depth,
        gate_count=circuit.gate_count,
        t_pre=t_pre,
        t_sub=t_sub,
        t_merge=t_merge,
        t_cut=t_cut,
        t_orig=t_orig,
        delta=delta,
        reps=repetitions,
        status=status,
        blocks=spec.blocks,
        pad_exponent=spec.depth_pad_exponent,
        t_pre_std=pre_std,
        t_sub_std=sub_std,
        t_merge_std=merge_std,
        t_orig_std=orig_std,
        samples=samples,
    )


@dataclass
class SweepResult:
    """Timing breakdowns over a (q, c_total) grid plus run metadata."""

    points: list[TimingBreakdown]
    metadata: dict

    def __post_init__(self):
        keys = [(p.q, p.c_total) for p in self.points]
        if len(set(keys)) != len(keys):
            raise ValidationError("sweep grid points must be unique")


def _blocks_for(c_total: int, n: int) -> int:
    if c_total < n - 1 or c_total % (n - 1) != 0:
        raise ValidationError(
            f"c_total={c_total} must be a positive multiple of n-1={n - 1}"
        )
    return c_total // (n - 1)


def sweep_heatmap(
    q_values: Iterable[int] | None = None,
    c_values: Iterable[int] | None = None,
    n: int = 2,
    repetitions: int = 10,
    *,
    pad_exponent: int | None = None,
    budget: float | None = None,
    parallel_points: int = 1,
    max_qubits: int = DEFAULT_MAX_QUBITS,
    tag: str | None = None,
) -> SweepResult:
    """Measure the relative overhead on a (q, c_total) grid."""
    if q_values is None or c_values is None:
        if n not in DEFAULT_GRIDS:
            raise ValidationError(f"no default grid for n={n}; pass q and c values")
        default_q, default_c = DEFAULT_GRIDS[n]
        q_values = q_values if q_values is not None else default_q
        c_values = c_values if c_values is not None else default_c
    q_values = [int(q) for q in q_values]
    c_values = [int(c) for c in c_values]
    specs = []
    for q in q_values:
        for c in c_values:
            specs.append(
                BenchmarkSpec(q=q, n=n, blocks=_blocks_for(c, n), depth_pad_exponent=pad_exponent)
            )
    warm_up()

    def run(spec: BenchmarkSpec) -> TimingBreakdown:
        return measure(
            spec, repetitions, budget=budget, max_qubits=max_qubits
        )

    if parallel_points > 1:
        with ThreadPoolExecutor(max_workers=parallel_points) as pool:
            points = list(pool.map(run, specs))
        for p in points:
            p.status = p.status + "+contended" if p.status != "ok" else "contended"
    else:
        points = [run(spec) for spec in specs]

    metadata = {
        "schema_version": SCHEMA_VERSION,
        "n": n,
        "repetitions": repetitions,
        "pad_exponent": pad_exponent,
        "budget_seconds": budget,
        "parallel_points": parallel_points,
        "machine_tag": machine_tag(tag),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    return SweepResult(points=points, metadata=metadata)


def fit_boundary(sweep: SweepResult | Sequence[TimingBreakdown]) -> BoundaryFit:
    """Fit the linear speedup boundary to a sweep, weighting by |delta| and
    starting from the analytic threshold line."""
    if isinstance(sweep, SweepResult):
        points_list = sweep.points
        n = sweep.metadata.get("n", 2)
    else:
        points_list = list(sweep)
        n = points_list[0].n if points_list else 2
    usable = [p for p in points_list if math.isfinite(p.delta)]
    coords = np.array([[p.q, p.c_total] for p in usable], dtype=float).reshape(-1, 2)
    deltas = np.array([p.delta for p in usable], dtype=float)
    return fit_weighted_line(coords, deltas, threshold_line(n))


@dataclass(frozen=True)
class Crossovers:
    """Smallest q where merging overtakes preprocessing / subcircuit simulation."""

    q_pre_cross: int | None
    q_sub_cross: int | None


def detect_crossovers(breakdowns: Sequence[TimingBreakdown]) -> Crossovers:
    """Scan a fixed-(n, c_total) series ordered by q for merge-time crossovers."""
    rows = sorted((b for b in breakdowns if b.ok), key=lambda b: b.q)
    configs = {(b.n, b.c_total) for b in rows}
    if len(configs) > 1:
        raise ValidationError(f"crossover series mixes configurations: {sorted(configs)}")
    q_pre = next((b.q for b in rows if b.t_merge > b.t_pre), None)
    q_sub = next((b.q for b in rows if b.t_merge > b.t_sub), None)
    return Crossovers(q_pre, q_sub)


def breakdown_series(
    q_values: Iterable[int],
    n: int = 2,
    c_total: int = 6,
    repetitions: int = 10,
    *,
    pad_exponent: int | None = None,
    budget: float | None = None,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> list[TimingBreakdown]:
    """Phase-timing series at fixed (n, c_total) over increasing q."""
    blocks = _blocks_for(c_total, n)
    return [
        measure(
            BenchmarkSpec(q=int(q), n=n, blocks=blocks, depth_pad_exponent=pad_exponent),
            repetitions,
            budget=budget,
            max_qubits=max_qubits,
        )
        for q in q_values
    ]


@dataclass
class FeasibilityScan:
    """Largest q per pipeline finishing inside the budget, plus every attempt."""

    pad_exponent: int | None
    budget_seconds: float
    q_max_orig: int | None
    q_max_cut: int | None
    rows: list[TimingBreakdown]


def scan_feasible(
    pad_exponents: Sequence[int | None],
    budget_seconds: float,
    n: int = 2,
    c_total: int = 6,
    *,
    repetitions: int = 1,
    q_start: int | None = None,
    q_stop: int | None = None,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> list[FeasibilityScan]:
    """Increase q (step n) until each pipeline exceeds the per-run budget.

    Every reported q was actually executed; a pipeline's q_max is the largest
    q whose every repetition finished inside the budget. The scan stops once
    both pipelines have timed out or the memory guard is reached.
    """
    if budget_seconds <= 0:
        raise ValidationError(f"budget must be positive, got {budget_seconds}")
    blocks = _blocks_for(c_total, n)
    warm_up()
    stop = min(q_stop or max_qubits, max_qubits)
    results = []
    for p in pad_exponents:
        rows: list[TimingBreakdown] = []
        q_max_orig: int | None = None
        q_max_cut: int | None = None
        orig_alive = True
        cut_alive = True
        q = q_start if q_start is not None else max(2, n)
        while (orig_alive or cut_alive) and q <= stop:
            pipelines = tuple(
                name
                for name, alive in (("cut", cut_alive), ("orig", orig_alive))
                if alive
            )
            spec = BenchmarkSpec(q=q, n=n, blocks=blocks, depth_pad_exponent=p)
            row = measure(
                spec,
                repetitions,
                budget=budget_seconds,
                max_qubits=max_qubits,
                pipelines=pipelines,
            )
            rows.append(row)
            if cut_alive:
                if "cut" in row.status:
                    cut_alive = False
                else:
                    q_max_cut = q
            if orig_alive:
                if "orig" in row.status:
                    orig_alive = False
                else:
                    q_max_orig = q
            q += n
        results.append(
            FeasibilityScan(
                pad_exponent=p,
                budget_seconds=budget_seconds,
                q_max_orig=q_max_orig,
                q_max_cut=q_max_cut,
                rows=rows,
            )
        )
    return results


@dataclass
class SplitPoint:
    cut: int
    split: int  # qubits in the low segment
    t_cut: float
    t_orig: float
    ratio: float


@dataclass
class SplitSweepResult:
    q: int
    points: list[SplitPoint]
    best_split: dict[int, int]  # cut count -> split minimizing t_cut / t_orig


def split_sweep(
    q: int,
    cut_range: Iterable[int],
    n: int = 2,
    repetitions: int = 10,
    *,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> SplitSweepResult:
    """Sweep the bipartition point 1..q-1 and report t_cut/t_orig per cut count.

    The staircase crosses any contiguous bipartition boundary once per block,
    so c_total stays equal to the block count for every split.
    """
    if n != 2:
        raise ValidationError(f"split sweep is defined for n=2, got n={n}")
    if q % 2 != 0:
        raise ValidationError(f"q must be even, got {q}")
    warm_up()
    points: list[SplitPoint] = []
    best: dict[int, int] = {}
    for c in cut_range:
        c = int(c)
        spec = BenchmarkSpec(q=q, n=2, blocks=c)
        circuit = build_benchmark(spec)
        orig_samples = []
        for _ in range(repetitions):
            t, state = _orig_once(circuit, max_qubits=max_qubits, deadline=None)
            orig_samples.append(t)
            del state
            gc.collect()
        t_orig, _ = _mean_std(orig_samples, 0)
        for split in range(1, q):
            try:
                cut_samples = []
                for _ in range(repetitions):
                    t0 = time.perf_counter()
                    plan = plan_cut_sizes(circuit, (split, q - split))
                    subs = decompose(circuit, plan)
                    states = [
                        [simulate(sc, max_qubits=max_qubits) for sc in fam.circuits]
                        for fam in subs.segments
                    ]
                    merged = merge(merge_input_from(subs, states), max_qubits=max_qubits)
                    cut_samples.append(time.perf_counter() - t0)
                    del plan, subs, states, merged
                    gc.collect()
            except CapacityError:
                continue
            t_cut, _ = _mean_std(cut_samples, 0)
            points.append(SplitPoint(c, split, t_cut, t_orig, t_cut / t_orig))
        per_c = [pt for pt in points if pt.cut == c]
        if per_c:
            best[c] = min(per_c, key=lambda pt: pt.ratio).split
    return SplitSweepResult(q=q, points=points, best_split=best)


@dataclass
class DepthSweepResult:
    fits: list[tuple[int, BoundaryFit]]
    sweeps: list[SweepResult]
    slope_differences: dict[tuple[int, int], float]


def depth_sweep(
    pad_exponents: Sequence[int],
    q_values: Iterable[int] | None = None,
    c_values: Iterable[int] | None = None,
    n: int = 2,
    repetitions: int = 10,
    *,
    budget: float | None = None,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> DepthSweepResult:
    """Fit the speedup boundary per pad exponent and compare slopes."""
    q_values = list(q_values) if q_values is not None else None
    c_values = list(c_values) if c_values is not None else None
    fits = []
    sweeps = []
    for p in pad_exponents:
        sweep = sweep_heatmap(
            q_values,
            c_values,
            n=n,
            repetitions=repetitions,
            pad_exponent=int(p),
            budget=budget,
            max_qubits=max_qubits,
        )
        sweeps.append(sweep)
        fits.append((int(p), fit_boundary(sweep)))
    diffs = {}
    for i, (p1, f1) in enumerate(fits):
        for p2, f2 in fits[i + 1:]:
            diffs[(p1, p2)] = abs(f1.slope - f2.slope)
    return DepthSweepResult(fits=fits, sweeps=sweeps, slope_differences=diffs)


# ---------------------------------------------------------------------------
# Output formats
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, float):
        return "nan" if math.isnan(value) else format(value, ".9g")
    return str(value)


def format_csv(breakdowns: Sequence[TimingBreakdown]) -> str:
    out = StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    for b in breakdowns:
        row = (
            b.q, b.n, b.c_total, b.depth, b.gate_count,
            b.t_pre, b.t_sub, b.t_merge, b.t_cut, b.t_orig,
            b.delta, b.reps, b.status, SCHEMA_VERSION,
        )
        out.write(",".join(_fmt(v) for v in row) + "\n")
    return out.getvalue()


def boundary_fit_report(fit: BoundaryFit, *, tag: str | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "boundary-fit",
        "machine_tag": machine_tag(tag),
        "slope": fit.slope,
        "intercept": fit.intercept,
        "weighted_accuracy": fit.weighted_accuracy,
        "margin_violations": fit.margin_violations,
        "iterations": fit.iterations,
        "points": [
            {"q": float(p[0]), "c_total": float(p[1]), "label": int(l), "weight": float(w)}
            for p, l, w in zip(fit.points, fit.labels, fit.weights)
        ],
    }


def crossover_report(cross: Crossovers, breakdowns: Sequence[TimingBreakdown],
                     *, tag: str | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "crossovers",
        "machine_tag": machine_tag(tag),
        "q_pre_cross": cross.q_pre_cross,
        "q_sub_cross": cross.q_sub_cross,
        "series": [
            {
                "q": b.q, "c_total": b.c_total,
                "t_pre": b.t_pre, "t_sub": b.t_sub, "t_merge": b.t_merge,
                "status": b.status,
            }
            for b in breakdowns
        ],
    }


def feasibility_report(scans: Sequence[FeasibilityScan], *, tag: str | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "feasibility-scan",
        "machine_tag": machine_tag(tag),
        "scans": [
            {
                "pad_exponent": s.pad_exponent,
                "budget_seconds": s.budget_seconds,
                "q_max_orig": s.q_max_orig,
                "q_max_cut": s.q_max_cut,
                "executed": [
                    {
                        "q": r.q,
                        "status": r.status,
                        "t_cut": r.t_cut,
                        "t_orig": r.t_orig,
                    }
                    for r in s.rows
                ],
            }
            for s in scans
        ],
    }


def split_report(result: SplitSweepResult, *, tag: str | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "split-sweep",
        "machine_tag": machine_tag(tag),
        "q": result.q,
        "best_split": {str(c): s for c, s in result.best_split.items()},
        "points": [
            {
                "c_total": p.cut, "split": p.split,
                "t_cut": p.t_cut, "t_orig": p.t_orig, "ratio": p.ratio,
            }
            for p in result.points
        ],
    }


def depth_sweep_report(result: DepthSweepResult, *, tag: str | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "depth-sweep",
        "machine_tag": machine_tag(tag),
        "fits": [
            {"pad_exponent": p, "slope": f.slope, "intercept": f.intercept}
            for p, f in result.fits
        ],
        "slope_differences": [
            {"pad_exponents": list(k), "difference": v}
            for k, v in result.slope_differences.items()
        ],
    }


def write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        print(text, end="" if text.endswith("\n") else "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)


def write_json(path: str | None, payload: dict) -> None:
    write_text(path, json.dumps(payload, indent=2) + "\n")
