"""Shared test helpers: a brute-force matrix oracle for small circuits.

The oracle builds full 2^q x 2^q unitaries with numpy.kron and multiplies
them out, independent of the package's gate kernels, so engine results can
be checked against straight linear algebra.
"""
import numpy as np
import pytest

from cutbench.circuits import Circuit, GateKind

H_MAT = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
X_MAT = np.array([[0, 1], [1, 0]], dtype=complex)
T_MAT = np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex)
S_MAT = np.diag([1, 1j]).astype(complex)
SDG_MAT = np.diag([1, -1j]).astype(complex)
CX_MAT = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)  # 2-qubit index is (target_bit << 1) | control_bit; flips target when control=1
CZ_MAT = np.diag([1, 1, 1, -1]).astype(complex)

SINGLE = {
    GateKind.H: H_MAT,
    GateKind.X: X_MAT,
    GateKind.T: T_MAT,
    GateKind.S: S_MAT,
    GateKind.Sdg: SDG_MAT,
}


def single_qubit_unitary(mat: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    """Embed a 1-qubit matrix at `qubit` (little-endian bit order)."""
    op = np.eye(1, dtype=complex)
    for j in range(num_qubits):
        op = np.kron(mat if j == qubit else np.eye(2, dtype=complex), op)
    return op


def two_qubit_unitary(mat4: np.ndarray, control: int, target: int, num_qubits: int) -> np.ndarray:
    """Embed a 2-qubit matrix; mat4 indexes (target_bit, control_bit) with the
    control on the low bit."""
    dim = 1 << num_qubits
    op = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        cb = (idx >> control) & 1
        tb = (idx >> target) & 1
        col = (tb << 1) | cb
        for row in range(4):
            rc, rt = row & 1, (row >> 1) & 1
            out = idx & ~((1 << control) | (1 << target))
            out |= (rc << control) | (rt << target)
            op[out, idx] += mat4[row, col]
    return op


def gate_unitary(gate, num_qubits: int) -> np.ndarray:
    if gate.kind in SINGLE:
        return single_qubit_unitary(SINGLE[gate.kind], gate.qubits[0], num_qubits)
    mat = CX_MAT if gate.kind is GateKind.CX else CZ_MAT
    return two_qubit_unitary(mat, gate.qubits[0], gate.qubits[1], num_qubits)


def oracle_simulate(circuit: Circuit) -> np.ndarray:
    """Matrix-product simulation of |0...0> through the circuit."""
    state = np.zeros(1 << circuit.num_qubits, dtype=complex)
    state[0] = 1.0
    for g in circuit.gates:
        state = gate_unitary(g, circuit.num_qubits) @ state
    return state


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
