"""Dense state-vector simulation.

Amplitudes are complex128, qubit j maps to bit j of the amplitude index
(qubit 0 = least-significant bit). Gates are applied strictly one at a time,
in circuit order, with no fusion; per-gate cost is O(2^q). The hot loops are
numba-compiled and single-threaded so timing runs are deterministic and
uncontended.

A qubit-count guard bounds every allocation of a full vector; exceeding it
raises CapacityError instead of attempting the allocation.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from numba import njit

from .circuits import Circuit, Gate
from .errors import BudgetExceededError, CapacityError, ValidationError

# 2^30 amplitudes = 16 GiB of complex doubles; default guard stays below that.
DEFAULT_MAX_QUBITS = 30

_SQRT_HALF = np.float64(0.7071067811865475244)
_T_PHASE = np.complex128(_SQRT_HALF + 1j * _SQRT_HALF)


@dataclass
class StateVec:
    """Dense amplitude vector of length 2^num_qubits."""

    num_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        if self.amps.shape != (1 << self.num_qubits,):
            raise ValidationError(
                f"state vector for {self.num_qubits} qubit(s) must have length "
                f"{1 << self.num_qubits}, got {self.amps.shape}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    @classmethod
    def zero_state(cls, num_qubits: int) -> "StateVec":
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(num_qubits, amps)


def check_capacity(num_qubits: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> None:
    if num_qubits > max_qubits:
        raise CapacityError(
            f"{num_qubits} qubits exceeds the memory guard of {max_qubits} qubits "
            f"(2^{num_qubits} amplitudes)"
        )


@njit(cache=True, nogil=True)
def _k_h(amps, j):
    step = 1 << j
    for base in range(0, amps.shape[0], step << 1):
        for i in range(base, base + step):
            u = amps[i]
            v = amps[i + step]
            amps[i] = (u + v) * _SQRT_HALF
            amps[i + step] = (u - v) * _SQRT_HALF


@njit(cache=True, nogil=True)
def _k_x(amps, j):
    step = 1 << j
    for base in range(0, amps.shape[0], step << 1):
        for i in range(base, base + step):
            u = amps[i]
            amps[i] = amps[i + step]
            amps[i + step] = u


@njit(cache=True, nogil=True)
def _k_phase(amps, j, phase):
    # diag(1, phase) on qubit j
    step = 1 << j
    for base in range(0, amps.shape[0], step << 1):
        for i in range(base + step, base + (step << 1)):
            amps[i] = amps[i] * phase


@njit(cache=True, nogil=True)
def _k_cx(amps, c, tq):
    sc = 1 << c
    st = 1 << tq
    if c > tq:
        s_hi, s_lo = sc, st
        off_hi, off_lo = s_hi, 0  # control bit set, target bit clear
    else:
        s_hi, s_lo = st, sc
        off_hi, off_lo = 0, s_lo
    for b0 in range(0, amps.shape[0], s_hi << 1):
        for b1 in range(b0 + off_hi, b0 + off_hi + s_hi, s_lo << 1):
            for i in range(b1 + off_lo, b1 + off_lo + s_lo):
                u = amps[i]
                amps[i] = amps[i + st]
                amps[i + st] = u


@njit(cache=True, nogil=True)
def _k_cz(amps, a, b):
    sa = 1 << a
    sb = 1 << b
    s_hi = sa if sa > sb else sb
    s_lo = sb if sa > sb else sa
    for b0 in range(0, amps.shape[0], s_hi << 1):
        for b1 in range(b0 + s_hi, b0 + (s_hi << 1), s_lo << 1):
            for i in range(b1 + s_lo, b1 + (s_lo << 1)):
                amps[i] = -amps[i]


@njit(cache=True, nogil=True)
def _run_gates(amps, kinds, qa, qb, start, stop):
    for g in range(start, stop):
        k = kinds[g]
        if k == 0:
            _k_h(amps, qa[g])
        elif k == 1:
            _k_x(amps, qa[g])
        elif k == 2:
            _k_phase(amps, qa[g], _T_PHASE)
        elif k == 3:
            _k_phase(amps, qa[g], np.complex128(1j))
        elif k == 4:
            _k_phase(amps, qa[g], np.complex128(-1j))
        elif k == 5:
            _k_cx(amps, qa[g], qb[g])
        else:
            _k_cz(amps, qa[g], qb[g])


def _run_circuit(amps: np.ndarray, circuit: Circuit, deadline: float | None) -> None:
    g_count = circuit.gate_count
    if deadline is None:
        _run_gates(amps, circuit.kinds, circuit.qa, circuit.qb, 0, g_count)
        return
    # Deadline checks between chunks; chunk size shrinks with vector size so
    # the overshoot stays around one gate's worth of work on large vectors.
    chunk = max(1, (1 << 22) // amps.shape[0])
    for start in range(0, g_count, chunk):
        if time.monotonic() > deadline:
            raise BudgetExceededError(
                f"simulation exceeded its deadline after {start}/{g_count} gates"
            )
        _run_gates(amps, circuit.kinds, circuit.qa, circuit.qb, start, min(start + chunk, g_count))


def simulate(
    circuit: Circuit,
    *,
    max_qubits: int = DEFAULT_MAX_QUBITS,
    deadline: float | None = None,
) -> StateVec:
    """Apply every gate in order to |0...0> and return the final state."""
    check_capacity(circuit.num_qubits, max_qubits)
    state = StateVec.zero_state(circuit.num_qubits)
    _run_circuit(state.amps, circuit, deadline)
    return state


def apply_gate(state: StateVec, gate: Gate) -> StateVec:
    """Apply one gate in place and return the same state."""
    for q in gate.qubits:
        if q >= state.num_qubits:
            raise ValidationError(
                f"gate {gate.kind.value}{gate.qubits} out of range for "
                f"{state.num_qubits} qubit(s)"
            )
    tiny = Circuit(state.num_qubits, (gate,))
    _run_gates(state.amps, tiny.kinds, tiny.qa, tiny.qb, 0, 1)
    return state


def tensor(a: StateVec, b: StateVec, *, max_qubits: int = DEFAULT_MAX_QUBITS) -> StateVec:
    """Product state with `a` on the low-index qubits and `b` on the high ones."""
    total = a.num_qubits + b.num_qubits
    check_capacity(total, max_qubits)
    out = np.multiply.outer(b.amps, a.amps).ravel()
    return StateVec(total, out)


def dump_amplitudes(state: StateVec, path) -> None:
    """Binary dump: little-endian float64 (re, im) pairs in index order."""
    data = np.ascontiguousarray(state.amps, dtype="<c16")
    with open(path, "wb") as fh:
        fh.write(data.tobytes())


def load_amplitudes(path, num_qubits: int) -> StateVec:
    with open(path, "rb") as fh:
        amps = np.frombuffer(fh.read(), dtype="<c16").astype(np.complex128)
    return StateVec(num_qubits, amps)
