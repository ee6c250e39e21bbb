"""cutbench: state-vector simulation with gate cutting and full-state
reconstruction, an analytic cut-threshold advisor, and a wall-clock
benchmark harness."""

from .circuits import (
    BenchmarkSpec,
    Circuit,
    Gate,
    GateKind,
    build_benchmark,
    build_depth_padded,
    build_staircase,
    compute_depth,
)
from .costmodel import (
    CostParams,
    RegimeRatios,
    ThresholdReport,
    n_sub_uniform,
    predict_costs,
    regime_ratios,
    threshold_line,
    threshold_nonuniform,
    threshold_uniform,
)
from .cutting import (
    BoundaryGate,
    CutPlan,
    SubcircuitSet,
    count_subcircuits,
    decompose,
    plan_cut,
    plan_cut_sizes,
)
from .engine import (
    DEFAULT_MAX_QUBITS,
    StateVec,
    apply_gate,
    dump_amplitudes,
    simulate,
    tensor,
)
from .errors import (
    BudgetExceededError,
    CapacityError,
    CutbenchError,
    DegenerateFitError,
    UnsupportedTopologyError,
    ValidationError,
)
from .harness import (
    BoundaryFit,
    Crossovers,
    FeasibilityScan,
    SweepResult,
    TimingBreakdown,
    breakdown_series,
    detect_crossovers,
    fit_boundary,
    measure,
    scan_feasible,
    split_sweep,
    sweep_heatmap,
)
from .merging import MergeInput, merge, merge_input_from, merge_streaming
from .svmfit import fit_weighted_line

__version__ = "0.1.0"

__all__ = [
    "BenchmarkSpec",
    "BoundaryFit",
    "BoundaryGate",
    "BudgetExceededError",
    "CapacityError",
    "Circuit",
    "CostParams",
    "Crossovers",
    "CutPlan",
    "CutbenchError",
    "DEFAULT_MAX_QUBITS",
    "DegenerateFitError",
    "FeasibilityScan",
    "Gate",
    "GateKind",
    "MergeInput",
    "RegimeRatios",
    "StateVec",
    "SubcircuitSet",
    "SweepResult",
    "ThresholdReport",
    "TimingBreakdown",
    "UnsupportedTopologyError",
    "ValidationError",
    "apply_gate",
    "breakdown_series",
    "build_benchmark",
    "build_depth_padded",
    "build_staircase",
    "compute_depth",
    "count_subcircuits",
    "decompose",
    "detect_crossovers",
    "dump_amplitudes",
    "fit_boundary",
    "fit_weighted_line",
    "measure",
    "merge",
    "merge_input_from",
    "merge_streaming",
    "n_sub_uniform",
    "plan_cut",
    "plan_cut_sizes",
    "predict_costs",
    "regime_ratios",
    "scan_feasible",
    "simulate",
    "split_sweep",
    "sweep_heatmap",
    "tensor",
    "threshold_line",
    "threshold_nonuniform",
    "threshold_uniform",
]
