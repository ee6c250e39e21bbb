"""Full-state reconstruction from subcircuit states.

The reconstructed vector is sum over all 2^c_total term combinations m of
coeff[m] times the tensor product of the per-segment states selected by the
merge table, with segment 0 on the low-index qubits. Every term costs O(2^q);
memory stays at one accumulator plus scratch of the same size.

Accumulation is single-threaded and deterministic. At c_total >= 12 the terms
are summed in fixed-size blocks that are then added into the accumulator,
bounding round-off growth so reconstruction stays inside the end-to-end
tolerance at large term counts.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

from .engine import DEFAULT_MAX_QUBITS, StateVec, check_capacity
from .errors import BudgetExceededError, ValidationError

BLOCK_ACCUMULATION_THRESHOLD = 12  # c_total at which block summation kicks in
_BLOCK_TERMS = 2048


@dataclass
class MergeInput:
    """Per-segment state lists plus coefficients and the merge index table."""

    segment_states: list[list[StateVec]]
    coeffs: np.ndarray
    merge_table: np.ndarray
    num_qubits: int

    def __post_init__(self):
        n = len(self.segment_states)
        if n < 2:
            raise ValidationError(f"merging needs at least 2 segments, got {n}")
        if self.merge_table.ndim != 2 or self.merge_table.shape[0] != n:
            raise ValidationError(
                f"merge table must have one row per segment ({n}), got shape "
                f"{self.merge_table.shape}"
            )
        m_count = self.merge_table.shape[1]
        if len(self.coeffs) != m_count:
            raise ValidationError(
                f"coefficient count {len(self.coeffs)} != table width {m_count}"
            )
        total = 0
        for seg, states in enumerate(self.segment_states):
            if not states:
                raise ValidationError(f"segment {seg} has no states")
            sizes = {sv.num_qubits for sv in states}
            if len(sizes) != 1:
                raise ValidationError(f"segment {seg} mixes qubit counts {sizes}")
            count = len(states)
            if count & (count - 1):
                raise ValidationError(
                    f"segment {seg} must hold a power-of-two state count, got {count}"
                )
            if int(self.merge_table[seg].max(initial=0)) >= count:
                raise ValidationError(
                    f"merge table references state {int(self.merge_table[seg].max())} "
                    f"but segment {seg} holds {count}"
                )
            total += states[0].num_qubits
        if total != self.num_qubits:
            raise ValidationError(
                f"segment qubit counts sum to {total}, expected {self.num_qubits}"
            )


def merge_input_from(subcircuits, states: list[list[StateVec]]) -> MergeInput:
    """Bundle simulated subcircuit states with the tables of a SubcircuitSet."""
    return MergeInput(
        segment_states=states,
        coeffs=subcircuits.coeffs,
        merge_table=subcircuits.merge_table,
        num_qubits=sum(subcircuits.plan.segment_sizes),
    )


@njit(cache=True, nogil=True)
def _axpy_outer(acc, hi, lo, alpha):
    # acc += alpha * (hi tensor lo), with lo on the low-index bits
    width = lo.shape[0]
    for i in range(hi.shape[0]):
        scale = alpha * hi[i]
        base = i * width
        for j in range(width):
            acc[base + j] += scale * lo[j]


@njit(cache=True, nogil=True)
def _outer_into(out, hi, lo):
    width = lo.shape[0]
    for i in range(hi.shape[0]):
        scale = hi[i]
        base = i * width
        for j in range(width):
            out[base + j] = scale * lo[j]


@njit(cache=True, nogil=True)
def _iadd(acc, vec):
    for i in range(acc.shape[0]):
        acc[i] += vec[i]


class _Accumulator:
    """Plain or blocked accumulation over term index m, fixed order."""

    def __init__(self, dim: int, m_count: int):
        self.total = np.zeros(dim, dtype=np.complex128)
        self.blocked = m_count >= (1 << BLOCK_ACCUMULATION_THRESHOLD)
        self.target = np.zeros(dim, dtype=np.complex128) if self.blocked else self.total
        self._pending = 0

    def term_done(self):
        if not self.blocked:
            return
        self._pending += 1
        if self._pending == _BLOCK_TERMS:
            self.flush()

    def flush(self):
        if self.blocked and self._pending:
            _iadd(self.total, self.target)
            self.target[:] = 0
            self._pending = 0

    def result(self) -> np.ndarray:
        self.flush()
        return self.total


def _accumulate_term(acc_target, vecs, coeff, scratch_a, scratch_b):
    """Add coeff * (vecs[-1] tensor ... tensor vecs[0]) into acc_target.

    vecs is ordered low segment first. Folds run from the highest segment
    down; the final fold against segment 0 is fused with the accumulate.
    """
    cur = vecs[-1]
    buf_next = scratch_a
    for idx in range(len(vecs) - 2, 0, -1):
        width = cur.shape[0] * vecs[idx].shape[0]
        _outer_into(buf_next[:width], cur, vecs[idx])
        cur = buf_next[:width]
        buf_next = scratch_b if buf_next is scratch_a else scratch_a
    _axpy_outer(acc_target, cur, vecs[0], coeff)


def merge(
    minput: MergeInput,
    *,
    max_qubits: int = DEFAULT_MAX_QUBITS,
    deadline: float | None = None,
) -> StateVec:
    """Reconstruct the full 2^q state from retained subcircuit states."""
    q = minput.num_qubits
    check_capacity(q, max_qubits)
    dim = 1 << q
    n = len(minput.segment_states)
    m_count = minput.merge_table.shape[1]

    seg_amps = [[sv.amps for sv in states] for states in minput.segment_states]
    rows = [row.tolist() for row in minput.merge_table]
    coeffs = minput.coeffs

    acc = _Accumulator(dim, m_count)
    low_size = minput.segment_states[0][0].num_qubits
    scratch_a = np.empty(dim >> low_size, dtype=np.complex128) if n >= 3 else None
    scratch_b = np.empty(dim >> low_size, dtype=np.complex128) if n >= 4 else None

    for m in range(m_count):
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceededError(
                f"merge exceeded its deadline after {m}/{m_count} terms"
            )
        vecs = [seg_amps[i][rows[i][m]] for i in range(n)]
        _accumulate_term(acc.target, vecs, coeffs[m], scratch_a, scratch_b)
        acc.term_done()
    return StateVec(q, acc.result())


def merge_streaming(
    provider: Callable[[int, int], StateVec],
    coeffs: np.ndarray,
    merge_table: np.ndarray,
    num_qubits: int,
    *,
    max_qubits: int = DEFAULT_MAX_QUBITS,
    deadline: float | None = None,
) -> StateVec:
    """Same result as merge(), but segment states are (re)produced on demand.

    Peak memory is one full vector plus one segment state at a time, at the
    cost of re-running the provider for every term combination.
    """
    check_capacity(num_qubits, max_qubits)
    dim = 1 << num_qubits
    n = merge_table.shape[0]
    if n < 2:
        raise ValidationError(f"merging needs at least 2 segments, got {n}")
    m_count = merge_table.shape[1]
    if len(coeffs) != m_count:
        raise ValidationError(
            f"coefficient count {len(coeffs)} != table width {m_count}"
        )

    rows = [row.tolist() for row in merge_table]
    acc = _Accumulator(dim, m_count)
    scratch_a = scratch_b = None

    seen_qubits = None
    for m in range(m_count):
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceededError(
                f"merge exceeded its deadline after {m}/{m_count} terms"
            )
        states = [provider(i, rows[i][m]) for i in range(n)]
        total = sum(sv.num_qubits for sv in states)
        if seen_qubits is None:
            seen_qubits = total
            if total != num_qubits:
                raise ValidationError(
                    f"provider states span {total} qubits, expected {num_qubits}"
                )
            if n >= 3:
                scratch_a = np.empty(dim >> states[0].num_qubits, dtype=np.complex128)
            if n >= 4:
                scratch_b = np.empty(dim >> states[0].num_qubits, dtype=np.complex128)
        vecs = [sv.amps for sv in states]
        _accumulate_term(acc.target, vecs, coeffs[m], scratch_a, scratch_b)
        acc.term_done()
    return StateVec(num_qubits, acc.result())
