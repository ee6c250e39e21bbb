"""Command-line surface for simulation, cutting, thresholds and experiments.

Exit codes: 0 success, 2 validation error, 3 capacity (memory guard),
4 degenerate boundary fit, 5 timeout treated as failure (only with --strict).
Range arguments accept either a single integer or start:stop:step with an
inclusive stop (step defaults to 1).
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import harness
from .circuits import BenchmarkSpec, build_benchmark
from .costmodel import CostParams, regime_ratios, threshold_uniform
from .cutting import count_subcircuits, decompose, plan_cut
from .engine import DEFAULT_MAX_QUBITS, dump_amplitudes, simulate
from .errors import (
    BudgetExceededError,
    CapacityError,
    DegenerateFitError,
    ValidationError,
)
from .merging import merge, merge_input_from, merge_streaming

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAPACITY = 3
EXIT_DEGENERATE_FIT = 4
EXIT_TIMEOUT_STRICT = 5


def parse_range(text: str) -> list[int]:
    """'8' -> [8]; '2:8' -> [2..8]; '2:8:2' -> [2,4,6,8] (stop inclusive)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 2:
            start, stop = int(parts[0]), int(parts[1])
            step = 1
        elif len(parts) == 3:
            start, stop, step = (int(v) for v in parts)
        else:
            raise ValueError(text)
    except ValueError as exc:
        raise ValidationError(f"bad range {text!r}: expected N or start:stop[:step]") from exc
    if step <= 0:
        raise ValidationError(f"bad range {text!r}: step must be positive")
    return list(range(start, stop + 1, step))


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise ValidationError(f"bad list {text!r}: expected comma-separated integers") from exc


def _spec_from(args) -> BenchmarkSpec:
    return BenchmarkSpec(
        q=args.q, n=args.n, blocks=args.blocks, depth_pad_exponent=args.p
    )


def cmd_simulate(args) -> int:
    spec = _spec_from(args)
    circuit = build_benchmark(spec)
    harness.warm_up()
    t0 = time.perf_counter()
    state = simulate(circuit, max_qubits=args.guard)
    elapsed = time.perf_counter() - t0
    print(
        f"q={circuit.num_qubits} D={circuit.depth} G={circuit.gate_count} "
        f"t_orig={elapsed:.6f}s"
    )
    if args.dump_state:
        dump_amplitudes(state, args.dump_state)
        print(f"state written to {args.dump_state} ({state.amps.size} amplitudes)")
    return EXIT_OK


def cmd_cutrun(args) -> int:
    spec = _spec_from(args)
    circuit = build_benchmark(spec)
    harness.warm_up()

    t0 = time.perf_counter()
    plan = plan_cut(circuit, spec.n)
    subs = decompose(circuit, plan)
    t_pre = time.perf_counter() - t0

    t0 = time.perf_counter()
    states = [
        [simulate(c, max_qubits=args.guard) for c in fam.circuits]
        for fam in subs.segments
    ]
    t_sub = time.perf_counter() - t0

    t0 = time.perf_counter()
    if args.streaming:
        circuits = [fam.circuits for fam in subs.segments]

        def provider(seg: int, idx: int):
            return simulate(circuits[seg][idx], max_qubits=args.guard)

        merged = merge_streaming(
            provider, subs.coeffs, subs.merge_table, circuit.num_qubits,
            max_qubits=args.guard,
        )
    else:
        merged = merge(merge_input_from(subs, states), max_qubits=args.guard)
    t_merge = time.perf_counter() - t0

    t0 = time.perf_counter()
    reference = simulate(circuit, max_qubits=args.guard)
    t_orig = time.perf_counter() - t0

    t_cut = t_pre + t_sub + t_merge
    delta = (t_cut - t_orig) / t_orig
    print(
        f"q={circuit.num_qubits} n={spec.n} c_total={plan.c_total} "
        f"N_sub={count_subcircuits(plan)} D={circuit.depth} G={circuit.gate_count}"
    )
    print(
        f"t_pre={t_pre:.6f}s t_sub={t_sub:.6f}s t_merge={t_merge:.6f}s "
        f"t_cut={t_cut:.6f}s t_orig={t_orig:.6f}s delta={delta:+.4f}"
    )
    if args.verify:
        err = float(abs(merged.amps - reference.amps).max())
        print(f"reconstruction_linf_error={err:.3e}")
    return EXIT_OK


def cmd_preprocess(args) -> int:
    spec = _spec_from(args)
    circuit = build_benchmark(spec)
    plan = plan_cut(circuit, spec.n)
    subs = decompose(circuit, plan)
    harness.write_text(args.out, subs.to_json() + "\n")
    return EXIT_OK


def cmd_threshold(args) -> int:
    report = threshold_uniform(args.q, args.n, args.c)
    regime = None
    if args.c % (args.n - 1) == 0 and args.c >= args.n - 1:
        # Regime ratios need a depth; use the benchmark circuit this c maps to
        # and the uniform segment-depth assumption D_seg = D/n.
        spec = BenchmarkSpec(q=args.q, n=args.n, blocks=args.c // (args.n - 1))
        depth = build_benchmark(spec).depth
        params = CostParams(
            q=args.q, n=args.n, c=args.c // (args.n - 1),
            depth=depth, seg_depth=depth / args.n,
        )
        regime = regime_ratios(params).regime
    payload = {
        "schema_version": harness.SCHEMA_VERSION,
        "q": args.q,
        "n": args.n,
        "c_total": args.c,
        "c_total_max": report.c_total_max,
        "slope": report.slope,
        "delta": report.delta,
        "satisfied": report.satisfied,
        "regime": regime,
    }
    harness.write_json(args.out, payload)
    return EXIT_OK


def _strict_exit(points) -> int:
    timed_out = any(p.status.startswith("timeout") for p in points)
    return EXIT_TIMEOUT_STRICT if timed_out else EXIT_OK


def cmd_sweep(args) -> int:
    sweep = harness.sweep_heatmap(
        parse_range(args.q) if args.q else None,
        parse_range(args.c) if args.c else None,
        n=args.n,
        repetitions=args.reps,
        pad_exponent=args.p,
        budget=args.budget,
        parallel_points=args.parallel_points,
        max_qubits=args.guard,
        tag=args.machine_tag,
    )
    if args.format == "json":
        payload = {
            "schema_version": harness.SCHEMA_VERSION,
            "kind": "sweep",
            "metadata": sweep.metadata,
            "points": json.loads(_points_json(sweep.points)),
        }
        harness.write_json(args.out, payload)
    else:
        harness.write_text(args.out, harness.format_csv(sweep.points))
    if args.fit:
        fit = harness.fit_boundary(sweep)
        harness.write_json(args.fit, harness.boundary_fit_report(fit, tag=args.machine_tag))
    if args.strict:
        return _strict_exit(sweep.points)
    return EXIT_OK


def _points_json(points) -> str:
    rows = []
    for b in points:
        rows.append(
            {
                "q": b.q, "n": b.n, "c_total": b.c_total,
                "D": b.depth, "G": b.gate_count,
                "t_pre": b.t_pre, "t_sub": b.t_sub, "t_merge": b.t_merge,
                "t_cut": b.t_cut, "t_orig": b.t_orig, "delta": b.delta,
                "reps": b.reps, "status": b.status,
            }
        )
    return json.dumps(rows)


def cmd_breakdown(args) -> int:
    rows = harness.breakdown_series(
        parse_range(args.q),
        n=args.n,
        c_total=args.c,
        repetitions=args.reps,
        pad_exponent=args.p,
        budget=args.budget,
        max_qubits=args.guard,
    )
    harness.write_text(args.out, harness.format_csv(rows))
    cross = harness.detect_crossovers(rows)
    harness.write_json(
        args.report, harness.crossover_report(cross, rows, tag=args.machine_tag)
    )
    if args.strict:
        return _strict_exit(rows)
    return EXIT_OK


def cmd_feasible(args) -> int:
    scans = harness.scan_feasible(
        parse_int_list(args.p_list),
        args.budget,
        n=args.n,
        c_total=args.c,
        repetitions=args.reps,
        q_start=args.q_start,
        q_stop=args.q_stop,
        max_qubits=args.guard,
    )
    harness.write_json(args.out, harness.feasibility_report(scans, tag=args.machine_tag))
    # timeouts are the scan's stopping rule, never a failure here
    return EXIT_OK


def cmd_split(args) -> int:
    result = harness.split_sweep(
        args.q,
        parse_range(args.c),
        repetitions=args.reps,
        max_qubits=args.guard,
    )
    harness.write_json(args.out, harness.split_report(result, tag=args.machine_tag))
    return EXIT_OK


def cmd_depthsweep(args) -> int:
    result = harness.depth_sweep(
        parse_int_list(args.p_list),
        parse_range(args.q) if args.q else None,
        parse_range(args.c) if args.c else None,
        n=args.n,
        repetitions=args.reps,
        budget=args.budget,
        max_qubits=args.guard,
    )
    harness.write_json(args.out, harness.depth_sweep_report(result, tag=args.machine_tag))
    return EXIT_OK


def _add_common(p, *, blocks=False, pad=False, reps_default=10):
    p.add_argument("--guard", type=int, default=DEFAULT_MAX_QUBITS,
                   help="memory guard in qubits (default %(default)s)")
    p.add_argument("--machine-tag", default=None,
                   help="tag recorded in reports (default: env or hostname)")
    if blocks:
        p.add_argument("--q", type=int, required=True, help="qubit count")
        p.add_argument("--n", type=int, default=2, help="segment count (default 2)")
        p.add_argument("--blocks", type=int, default=1,
                       help="staircase block count (default 1)")
    if pad:
        p.add_argument("--p", type=int, default=None,
                       help="depth pad exponent (adds 2*10^p single-qubit gates)")
    p.add_argument("--reps", type=int, default=reps_default,
                   help="repetitions per configuration (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cutbench",
        description="State-vector simulation with gate cutting, thresholds and benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the uncut simulation")
    _add_common(p, blocks=True, pad=True)
    p.add_argument("--dump-state", default=None, help="write amplitudes to this file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("cutrun", help="full cut pipeline with timing breakdown")
    _add_common(p, blocks=True, pad=True)
    p.add_argument("--verify", action="store_true",
                   help="also run the uncut reference and print the L-inf error")
    p.add_argument("--streaming", action="store_true",
                   help="re-simulate segment states during merging (low memory)")
    p.set_defaults(func=cmd_cutrun)

    p = sub.add_parser("preprocess", help="emit the decomposed subcircuit set as JSON")
    _add_common(p, blocks=True, pad=True)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("threshold", help="analytic speedup threshold for (q, n, c)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--c", type=int, required=True, help="total cut count")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("sweep", help="measure delta over a (q, c_total) grid")
    p.add_argument("--q", default=None, help="q range, e.g. 2:20:2")
    p.add_argument("--c", default=None, help="c_total range, e.g. 1:10")
    p.add_argument("--n", type=int, default=2)
    _add_common(p, pad=True)
    p.add_argument("--budget", type=float, default=None, help="per-run budget seconds")
    p.add_argument("--parallel-points", type=int, default=1,
                   help="run grid points in parallel (marks rows contended)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--fit", default=None, const="-", nargs="?",
                   help="also fit the boundary; optional JSON path")
    p.add_argument("--strict", action="store_true",
                   help="exit 5 if any grid point timed out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("breakdown", help="phase timings over q at fixed (n, c)")
    p.add_argument("--q", required=True, help="q range, e.g. 12:22:2")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--c", type=int, default=6, help="total cut count (default 6)")
    _add_common(p, pad=True)
    p.add_argument("--budget", type=float, default=None)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--report", default=None, help="crossover JSON path (default stdout)")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_breakdown)

    p = sub.add_parser("feasible", help="largest q per pipeline within a budget")
    p.add_argument("--budget", type=float, required=True, help="per-run budget seconds")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--c", type=int, default=6)
    p.add_argument("--p-list", default="0", help="comma-separated pad exponents")
    p.add_argument("--q-start", type=int, default=None)
    p.add_argument("--q-stop", type=int, default=None)
    _add_common(p, reps_default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("split", help="bipartition split sweep at fixed q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--c", default="1:3", help="cut range (default 1:3)")
    _add_common(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("depthsweep", help="boundary fits per depth pad exponent")
    p.add_argument("--q", default=None, help="q range")
    p.add_argument("--c", default=None, help="c_total range")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--p-list", default="0,2", help="comma-separated pad exponents")
    _add_common(p)
    p.add_argument("--budget", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_depthsweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except DegenerateFitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE_FIT
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT_STRICT


if __name__ == "__main__":
    sys.exit(main())
