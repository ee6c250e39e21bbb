"""Circuit representation and generators for the benchmark circuit family.

The gate set is fixed: H, X, T, S, Sdg (single-qubit) and CX, CZ (two-qubit,
first qubit is the control). Qubit 0 maps to the least-significant bit of an
amplitude index everywhere in this package.

The benchmark family is a staircase of CX gates dressed with T gates: one
initial H layer, then per block, for i = 0..q-2:
T(i), T(i+1), CX(i, i+1), T(i), T(i+1). Appending blocks raises both the
depth and the number of entangling gates that cross any contiguous
partition boundary (one crossing per boundary per block). A depth-padded
variant prepends/appends 10^p alternating T,X gates on the edge qubits so
the circuit can be made deeper without touching the boundary structure.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ValidationError

# Gate-table codes used by the simulation kernels; order is load-bearing
# (engine dispatch switches on these values).
KIND_H = 0
KIND_X = 1
KIND_T = 2
KIND_S = 3
KIND_SDG = 4
KIND_CX = 5
KIND_CZ = 6


class GateKind(Enum):
    """Supported gate kinds; values are the wire-format strings."""

    H = "H"
    X = "X"
    T = "T"
    S = "S"
    Sdg = "Sdg"
    CX = "CX"
    CZ = "CZ"

    @property
    def arity(self) -> int:
        return 2 if self in (GateKind.CX, GateKind.CZ) else 1

    @property
    def code(self) -> int:
        return _KIND_CODE[self]


_KIND_CODE = {
    GateKind.H: KIND_H,
    GateKind.X: KIND_X,
    GateKind.T: KIND_T,
    GateKind.S: KIND_S,
    GateKind.Sdg: KIND_SDG,
    GateKind.CX: KIND_CX,
    GateKind.CZ: KIND_CZ,
}


@dataclass(frozen=True)
class Gate:
    """One gate application: kind plus ordered qubit indices.

    For CX/CZ the first qubit is the control (CZ is symmetric but the order
    is preserved for reproducibility).
    """

    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if len(self.qubits) != self.kind.arity:
            raise ValidationError(
                f"{self.kind.value} takes {self.kind.arity} qubit(s), got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValidationError(f"{self.kind.value} qubits must be distinct: {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValidationError(f"qubit indices must be non-negative: {self.qubits}")


def h(q: int) -> Gate:
    return Gate(GateKind.H, (q,))


def x(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def t(q: int) -> Gate:
    return Gate(GateKind.T, (q,))


def s(q: int) -> Gate:
    return Gate(GateKind.S, (q,))


def sdg(q: int) -> Gate:
    return Gate(GateKind.Sdg, (q,))


def cx(control: int, target: int) -> Gate:
    return Gate(GateKind.CX, (control, target))


def cz(a: int, b: int) -> Gate:
    return Gate(GateKind.CZ, (a, b))


class Circuit:
    """Ordered gate list over a fixed qubit count.

    Instances are treated as immutable. A packed gate table (kind codes and
    qubit index arrays) is kept alongside the gate tuple so the simulation
    kernels never walk Python objects; internal callers that assemble
    circuits from pre-encoded pieces pass the table in directly.
    """

    __slots__ = ("num_qubits", "gates", "kinds", "qa", "qb", "_depth")

    def __init__(self, num_qubits: int, gates, *, _table=None):
        if num_qubits < 0:
            raise ValidationError(f"num_qubits must be non-negative, got {num_qubits}")
        self.num_qubits = int(num_qubits)
        self.gates: tuple[Gate, ...] = tuple(gates)
        self._depth = None
        if _table is not None:
            self.kinds, self.qa, self.qb = _table
        else:
            self.kinds, self.qa, self.qb = _encode_and_check(self.num_qubits, self.gates)

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    @property
    def depth(self) -> int:
        if self._depth is None:
            self._depth = compute_depth(self)
        return self._depth

    def __len__(self) -> int:
        return len(self.gates)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Circuit)
            and self.num_qubits == other.num_qubits
            and self.gates == other.gates
        )

    def __repr__(self) -> str:
        return f"Circuit(num_qubits={self.num_qubits}, gates={self.gate_count})"

    def to_json_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "gates": [{"kind": g.kind.value, "qubits": list(g.qubits)} for g in self.gates],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict) -> "Circuit":
        try:
            gates = [Gate(GateKind(g["kind"]), tuple(g["qubits"])) for g in data["gates"]]
            return cls(int(data["num_qubits"]), gates)
        except (KeyError, ValueError, TypeError) as exc:
            raise ValidationError(f"malformed circuit JSON: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_json_dict(json.loads(text))


def _encode_and_check(num_qubits: int, gates: tuple[Gate, ...]):
    """Pack gates into (kinds, qa, qb) arrays, validating indices on the way."""
    g_count = len(gates)
    kinds = np.empty(g_count, dtype=np.uint8)
    qa = np.empty(g_count, dtype=np.int64)
    qb = np.empty(g_count, dtype=np.int64)
    for i, g in enumerate(gates):
        qs = g.qubits
        if qs[-1] >= num_qubits or qs[0] >= num_qubits:
            raise ValidationError(
                f"gate {g.kind.value}{qs} exceeds circuit qubit count {num_qubits}"
            )
        kinds[i] = g.kind.code
        qa[i] = qs[0]
        qb[i] = qs[1] if len(qs) == 2 else -1
    return kinds, qa, qb


def compute_depth(circuit: Circuit) -> int:
    """Layer count under per-qubit frontier scheduling (deterministic)."""
    frontier = [0] * circuit.num_qubits
    depth = 0
    for g in circuit.gates:
        layer = 1 + max(frontier[q] for q in g.qubits)
        for q in g.qubits:
            frontier[q] = layer
        if layer > depth:
            depth = layer
    return depth


# Cap on materialized pad gates: 2*10^p gates are built as Python objects.
MAX_PAD_EXPONENT = 7


@dataclass(frozen=True)
class BenchmarkSpec:
    """Parameters of one benchmark circuit: qubits, segments, staircase blocks.

    `blocks` staircase copies give exactly `blocks` boundary crossings per
    boundary of the equal n-way partition, so c_total = blocks * (n - 1).
    `depth_pad_exponent` selects the depth-padded variant.
    """

    q: int
    n: int
    blocks: int
    depth_pad_exponent: int | None = None

    def __post_init__(self):
        if self.q < 2:
            raise ValidationError(f"q must be >= 2, got {self.q}")
        if self.n < 2:
            raise ValidationError(f"n must be >= 2, got {self.n}")
        if self.q % self.n != 0:
            raise ValidationError(f"q must be divisible by n: q={self.q}, n={self.n}")
        if self.blocks < 1:
            raise ValidationError(f"blocks must be >= 1, got {self.blocks}")
        p = self.depth_pad_exponent
        if p is not None:
            if p < 0:
                raise ValidationError(f"depth_pad_exponent must be >= 0, got {p}")
            if p > MAX_PAD_EXPONENT:
                raise ValidationError(
                    f"depth_pad_exponent {p} would materialize 2*10^{p} gates "
                    f"(limit is {MAX_PAD_EXPONENT})"
                )

    @property
    def c_total(self) -> int:
        return self.blocks * (self.n - 1)


def build_staircase(spec: BenchmarkSpec) -> Circuit:
    """One H layer, then `blocks` staircase copies (H layer only on the first)."""
    if spec.depth_pad_exponent is not None:
        raise ValidationError("staircase generator: depth_pad_exponent must be absent")
    gates = [h(i) for i in range(spec.q)]
    for _ in range(spec.blocks):
        for i in range(spec.q - 1):
            gates += [t(i), t(i + 1), cx(i, i + 1), t(i), t(i + 1)]
    return Circuit(spec.q, gates)


def build_depth_padded(spec: BenchmarkSpec) -> Circuit:
    """Staircase with 10^p alternating T,X gates on qubit 0 (after its H) and
    appended on qubit q-1. Adds exactly 2*10^p gates; boundary CX structure
    is untouched."""
    p = spec.depth_pad_exponent
    if p is None:
        raise ValidationError("depth-padded generator: depth_pad_exponent is required")
    base = BenchmarkSpec(spec.q, spec.n, spec.blocks)
    stair = build_staircase(base)
    pad_len = 10**p
    head = [t(0) if i % 2 == 0 else x(0) for i in range(pad_len)]
    tail = [t(spec.q - 1) if i % 2 == 0 else x(spec.q - 1) for i in range(pad_len)]
    gates = [stair.gates[0], *head, *stair.gates[1:], *tail]
    return Circuit(spec.q, gates)


def build_benchmark(spec: BenchmarkSpec) -> Circuit:
    """Dispatch on presence of the pad exponent."""
    if spec.depth_pad_exponent is None:
        return build_staircase(spec)
    return build_depth_padded(spec)
