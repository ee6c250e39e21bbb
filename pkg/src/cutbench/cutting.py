"""Partition planning and subcircuit generation for gate cutting.

Two-qubit gates crossing a contiguous partition boundary are expanded via
the rank-2 decomposition CZ = 1/(1+i) (S (x) S + i S~ (x) S~), where S~ is
the S adjoint. A boundary CX is handled as (I (x) H) CZ (I (x) H): its
control side receives S or S~ and its target side the conjugated sequence
H,S,H or H,S~,H. Term choice 0 pairs with coefficient 1/(1+i), term choice 1
with i/(1+i).

Cut j is the j-th boundary gate in circuit order and owns bit j (bit 0 =
least significant) of the global combination index m. Segment subcircuit
indices are the restriction of m's bits to the cuts adjacent to that
segment, materialized in a merge table of shape (n, 2^c_total).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .circuits import (
    KIND_SDG,
    Circuit,
    Gate,
    GateKind,
    h,
    s,
    sdg,
)
from .errors import UnsupportedTopologyError, ValidationError

COEFF_TERM0 = 0.5 - 0.5j  # 1/(1+i)
COEFF_TERM1 = 0.5 + 0.5j  # i/(1+i)


class BoundaryGate(NamedTuple):
    """One cut: gate position in the circuit and the segments it connects."""

    position: int
    boundary: int  # boundary between segments `boundary` and `boundary + 1`
    control_segment: int
    target_segment: int


@dataclass(frozen=True)
class CutPlan:
    """Contiguous partition of the qubit line plus the identified cuts."""

    n: int
    segment_sizes: tuple[int, ...]
    segment_of: tuple[int, ...]
    boundary_gates: tuple[BoundaryGate, ...]
    c_per_boundary: tuple[int, ...]
    c_i: tuple[int, ...]
    c_total: int
    c_max: int

    @property
    def first_qubit(self) -> tuple[int, ...]:
        firsts = []
        acc = 0
        for size in self.segment_sizes:
            firsts.append(acc)
            acc += size
        return tuple(firsts)


def plan_cut(circuit: Circuit, n: int) -> CutPlan:
    """Equal contiguous partition into n segments of q/n qubits each."""
    if n < 2:
        raise ValidationError(f"segment count must be >= 2, got {n}")
    if circuit.num_qubits % n != 0:
        raise ValidationError(
            f"q must be divisible by n: q={circuit.num_qubits}, n={n}"
        )
    size = circuit.num_qubits // n
    return plan_cut_sizes(circuit, (size,) * n)


def plan_cut_sizes(circuit: Circuit, sizes) -> CutPlan:
    """Contiguous partition with explicit segment sizes (used by split sweeps)."""
    sizes = tuple(int(v) for v in sizes)
    n = len(sizes)
    if n < 2:
        raise ValidationError(f"segment count must be >= 2, got {n}")
    if any(v < 1 for v in sizes):
        raise ValidationError(f"segment sizes must be >= 1, got {sizes}")
    if sum(sizes) != circuit.num_qubits:
        raise ValidationError(
            f"segment sizes {sizes} must sum to q={circuit.num_qubits}"
        )

    segment_of = []
    for seg, size in enumerate(sizes):
        segment_of += [seg] * size
    segment_of = tuple(segment_of)

    boundary_gates = []
    counts = [0] * (n - 1)
    for pos, g in enumerate(circuit.gates):
        if g.kind.arity != 2:
            continue
        sa = segment_of[g.qubits[0]]
        sb = segment_of[g.qubits[1]]
        if sa == sb:
            continue
        if abs(sa - sb) != 1:
            raise UnsupportedTopologyError(
                f"gate {g.kind.value}{g.qubits} at position {pos} spans "
                f"non-adjacent segments {sa} and {sb}"
            )
        boundary = min(sa, sb)
        boundary_gates.append(BoundaryGate(pos, boundary, sa, sb))
        counts[boundary] += 1

    c_i = []
    for seg in range(n):
        adj = 0
        if seg > 0:
            adj += counts[seg - 1]
        if seg < n - 1:
            adj += counts[seg]
        c_i.append(adj)

    return CutPlan(
        n=n,
        segment_sizes=sizes,
        segment_of=segment_of,
        boundary_gates=tuple(boundary_gates),
        c_per_boundary=tuple(counts),
        c_i=tuple(c_i),
        c_total=sum(counts),
        c_max=max(c_i),
    )


def count_subcircuits(plan: CutPlan) -> int:
    """Total subcircuits over all segments: sum of 2^c_i."""
    return sum(1 << ci for ci in plan.c_i)


@dataclass
class SegmentFamily:
    """All decomposed subcircuits of one segment, on local qubits 0..size-1."""

    segment: int
    first_qubit: int
    num_qubits: int
    circuits: list[Circuit]


@dataclass
class SubcircuitSet:
    """Per-segment subcircuit families plus the merge table and coefficients."""

    plan: CutPlan
    segments: list[SegmentFamily]
    merge_table: np.ndarray  # shape (n, 2^c_total), int64
    coeffs: np.ndarray  # shape (2^c_total,), complex128

    @property
    def num_subcircuits(self) -> int:
        return sum(len(fam.circuits) for fam in self.segments)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "n": self.plan.n,
            "c_total": self.plan.c_total,
            "segment_sizes": list(self.plan.segment_sizes),
            "segments": [
                {
                    "segment": fam.segment,
                    "first_qubit": fam.first_qubit,
                    "num_qubits": fam.num_qubits,
                    "subcircuits": [c.to_json_dict() for c in fam.circuits],
                }
                for fam in self.segments
            ],
            "merge_table": self.merge_table.tolist(),
            "coeffs": [[float(a.real), float(a.imag)] for a in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def _segment_family(circuit: Circuit, plan: CutPlan, seg: int) -> SegmentFamily:
    first = plan.first_qubit[seg]
    size = plan.segment_sizes[seg]
    cut_index_of_pos = {bg.position: k for k, bg in enumerate(plan.boundary_gates)}

    # Walk the circuit once: collect segment-local gate fragments separated by
    # the cuts adjacent to this segment, recording which side each cut sits on.
    frags: list[list[Gate]] = [[]]
    cut_sides: list[tuple[int, bool, int, GateKind]] = []  # (cut, is_target_side, local qubit, kind)
    for pos, g in enumerate(circuit.gates):
        k = cut_index_of_pos.get(pos)
        if k is not None:
            bg = plan.boundary_gates[k]
            if bg.control_segment == seg:
                cut_sides.append((k, False, g.qubits[0] - first, g.kind))
                frags.append([])
            elif bg.target_segment == seg:
                cut_sides.append((k, True, g.qubits[1] - first, g.kind))
                frags.append([])
            continue
        if plan.segment_of[g.qubits[0]] == seg:
            local = tuple(q - first for q in g.qubits)
            frags[-1].append(Gate(g.kind, local))

    c_i = len(cut_sides)
    assert c_i == plan.c_i[seg]

    # Insertion variants per cut: term 0 uses S (or H,S,H on a CX target
    # side), term 1 swaps the S for its adjoint. Only that one kind byte
    # differs, so subcircuit gate tables are template copies with patches.
    ins0: list[list[Gate]] = []
    ins1: list[list[Gate]] = []
    template: list[Gate] = list(frags[0])
    patch_offsets: list[int] = []
    for j, (_, is_target, lq, kind) in enumerate(cut_sides):
        if kind is GateKind.CX and is_target:
            ins0.append([h(lq), s(lq), h(lq)])
            ins1.append([h(lq), sdg(lq), h(lq)])
            template += ins0[-1]
            patch_offsets.append(len(template) - 2)
        else:
            ins0.append([s(lq)])
            ins1.append([sdg(lq)])
            template += ins0[-1]
            patch_offsets.append(len(template) - 1)
        template += frags[j + 1]

    base = Circuit(size, template)
    circuits: list[Circuit] = [base]
    for b in range(1, 1 << c_i):
        gates: list[Gate] = list(frags[0])
        kinds = base.kinds.copy()
        for j in range(c_i):
            gates += ins1[j] if (b >> j) & 1 else ins0[j]
            gates += frags[j + 1]
            if (b >> j) & 1:
                kinds[patch_offsets[j]] = KIND_SDG
        circuits.append(Circuit(size, gates, _table=(kinds, base.qa, base.qb)))
    return SegmentFamily(seg, first, size, circuits)


def _merge_table(plan: CutPlan) -> np.ndarray:
    m_count = 1 << plan.c_total
    ms = np.arange(m_count, dtype=np.int64)
    table = np.zeros((plan.n, m_count), dtype=np.int64)
    adjacent: list[list[int]] = [[] for _ in range(plan.n)]
    for j, bg in enumerate(plan.boundary_gates):
        adjacent[bg.boundary].append(j)
        adjacent[bg.boundary + 1].append(j)
    for seg in range(plan.n):
        row = table[seg]
        for local_bit, j in enumerate(adjacent[seg]):
            row |= ((ms >> j) & 1) << local_bit
    return table


def _coefficients(c_total: int) -> np.ndarray:
    m_count = 1 << c_total
    ms = np.arange(m_count, dtype=np.int64)
    ones = np.zeros(m_count, dtype=np.int64)
    for j in range(c_total):
        ones += (ms >> j) & 1
    return (COEFF_TERM0 ** (c_total - ones)) * (COEFF_TERM1**ones)


def decompose(circuit: Circuit, plan: CutPlan) -> SubcircuitSet:
    """Generate all 2^c_i subcircuits per segment plus merge table and coefficients."""
    segments = [_segment_family(circuit, plan, seg) for seg in range(plan.n)]
    return SubcircuitSet(
        plan=plan,
        segments=segments,
        merge_table=_merge_table(plan),
        coeffs=_coefficients(plan.c_total),
    )
