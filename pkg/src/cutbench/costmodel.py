"""Closed-form cost scalings, regime ratios, and cut-count thresholds.

The advisor side of the package: given (q, n, c) it answers whether total
subcircuit simulation beats the uncut run before any wall clock is spent.
Phase cost scalings (arbitrary units, k = Schmidt rank of the cut gates):

    preprocessing  N_sub * D
    subcircuits    N_sub * 2^(q/n) * D_seg
    merging        k^c_max * 2^q

Under equal partitioning with uniform gate distribution the depth cancels in
the subcircuit-vs-original comparison, leaving a linear threshold
c_total < slope * q + delta with slope 1/2 at n=2 and (n-1)^2/(2n) for
n >= 3 (delta = (n-1) * log2(n/(n-2)) / 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

SCHMIDT_RANK_CZ = 2

# Classification cutoffs around the ratio-1 regime boundary; inclusive so a
# ratio exactly n at n=2 lands on the subcircuit-dominant side.
SUB_DOMINANT_RATIO = 2.0
MERGE_DOMINANT_RATIO = 0.5


@dataclass(frozen=True)
class CostParams:
    """Uniform-cut configuration: c cuts on each of the n-1 boundaries."""

    q: int
    n: int
    c: int
    depth: float
    seg_depth: float
    k: int = SCHMIDT_RANK_CZ

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError(f"n must be >= 2, got {self.n}")
        if self.n > self.q:
            raise ValidationError(f"n must be <= q: n={self.n}, q={self.q}")
        if self.c < 0:
            raise ValidationError(f"c must be >= 0, got {self.c}")
        if self.depth <= 0:
            raise ValidationError(f"depth must be positive, got {self.depth}")
        lo = self.depth / self.n
        if not (lo - 1e-9 <= self.seg_depth <= self.depth + 1e-9):
            raise ValidationError(
                f"seg_depth must satisfy depth/n <= seg_depth <= depth: "
                f"{lo} <= {self.seg_depth} <= {self.depth} fails"
            )
        if self.k < 2:
            raise ValidationError(f"Schmidt rank k must be >= 2, got {self.k}")

    @property
    def c_total(self) -> int:
        return self.c * (self.n - 1)

    @property
    def c_max(self) -> int:
        # edge segments touch one boundary, interior segments two
        return self.c if self.n == 2 else 2 * self.c


def n_sub_uniform(n: int, c: int, k: int = SCHMIDT_RANK_CZ) -> int:
    """Subcircuit count for uniform cuts: 2 edge segments with c adjacent
    cuts, n-2 interior segments with 2c."""
    if n < 2:
        raise ValidationError(f"n must be >= 2, got {n}")
    return 2 * k**c + (n - 2) * k ** (2 * c)


@dataclass(frozen=True)
class ThresholdReport:
    """Linear speedup threshold c_total < slope*q + delta, plus optional
    evaluation of a concrete c_total."""

    q: int
    n: int
    slope: float
    delta: float
    c_total_max: float
    c_total: int | None = None
    satisfied: bool | None = None
    regime: str | None = None


def threshold_line(n: int) -> tuple[float, float]:
    """(slope, delta) of the depth-free threshold line c_total < slope*q + delta."""
    if n < 2:
        raise ValidationError(f"n must be >= 2, got {n}")
    if n == 2:
        return 0.5, 0.0
    return (n - 1) ** 2 / (2 * n), (n - 1) * math.log2(n / (n - 2)) / 2


def threshold_uniform(q: int, n: int, c_total: int | None = None) -> ThresholdReport:
    """Depth-free threshold under equal partitioning (k = 2).

    The comparison is strict: cutting is predicted to pay off when
    c_total < c_total_max. Depth does not appear; it cancels.
    """
    slope, delta = threshold_line(n)
    if q % n != 0:
        raise ValidationError(f"q must be divisible by n: q={q}, n={n}")
    c_total_max = slope * q + delta
    satisfied = None if c_total is None else bool(c_total < c_total_max)
    return ThresholdReport(
        q=q, n=n, slope=slope, delta=delta, c_total_max=c_total_max,
        c_total=c_total, satisfied=satisfied,
    )


def threshold_nonuniform(params: CostParams, n_sub: int) -> bool:
    """Exact subcircuit-vs-original condition for a measured/assumed segment
    depth: (N_sub / 2^(q(1-1/n))) * (D_seg / D) < 1."""
    ratio = (n_sub / 2.0 ** (params.q * (1 - 1 / params.n))) * (
        params.seg_depth / params.depth
    )
    return bool(ratio < 1.0)


@dataclass(frozen=True)
class RegimeRatios:
    """Pairwise phase-cost ratios and the implied dominant phase."""

    r_pre_sub: float
    r_pre_merge: float
    r_sub_merge: float
    regime: str


def regime_ratios(params: CostParams) -> RegimeRatios:
    """Phase ratios from the cost scalings, uniform cuts assumed."""
    n_sub = n_sub_uniform(params.n, params.c, params.k)
    k_cmax = float(params.k) ** params.c_max
    r_pre_sub = params.depth / (2.0 ** (params.q / params.n) * params.seg_depth)
    r_pre_merge = (n_sub / k_cmax) * (params.depth / 2.0**params.q)
    r_sub_merge = (n_sub / k_cmax) * (
        params.seg_depth / 2.0 ** (params.q * (1 - 1 / params.n))
    )
    if r_sub_merge >= SUB_DOMINANT_RATIO:
        regime = "sub_dominant"
    elif r_sub_merge <= MERGE_DOMINANT_RATIO:
        regime = "merge_dominant"
    else:
        regime = "comparable"
    return RegimeRatios(r_pre_sub, r_pre_merge, r_sub_merge, regime)


def predict_costs(params: CostParams, n_sub: int) -> tuple[float, float, float]:
    """(preprocessing, subcircuit, merging) scalings in arbitrary units,
    for plotting against measured timings."""
    pre = float(n_sub) * params.depth
    sub = float(n_sub) * 2.0 ** (params.q / params.n) * params.seg_depth
    merge = float(params.k) ** params.c_max * 2.0**params.q
    return (pre, sub, merge)
