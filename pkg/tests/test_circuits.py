"""Circuit IR and benchmark generator tests.

Boundary-crossing counts are checked by direct scans of the gate list,
independent of the cut planner.
"""
import json

import pytest

from cutbench.circuits import (
    BenchmarkSpec,
    Circuit,
    Gate,
    GateKind,
    build_benchmark,
    build_depth_padded,
    build_staircase,
    compute_depth,
    cx,
    h,
    t,
)
from cutbench.errors import ValidationError


def crossing_gates(circuit, n):
    """Direct scan: two-qubit gates whose endpoints fall in different
    equal-partition segments."""
    size = circuit.num_qubits // n
    out = []
    for pos, g in enumerate(circuit.gates):
        if g.kind.arity == 2 and g.qubits[0] // size != g.qubits[1] // size:
            out.append((pos, g))
    return out


class TestGate:
    def test_arity_enforced(self):
        with pytest.raises(ValidationError):
            Gate(GateKind.H, (0, 1))
        with pytest.raises(ValidationError):
            Gate(GateKind.CX, (0,))

    def test_distinct_qubits(self):
        with pytest.raises(ValidationError):
            Gate(GateKind.CX, (1, 1))

    def test_negative_index(self):
        with pytest.raises(ValidationError):
            Gate(GateKind.T, (-1,))


class TestCircuit:
    def test_gate_index_bound(self):
        with pytest.raises(ValidationError):
            Circuit(2, [h(2)])

    def test_gate_count_and_depth_relation(self):
        c = build_staircase(BenchmarkSpec(q=6, n=2, blocks=2))
        assert c.depth <= c.gate_count

    def test_json_round_trip(self):
        c = build_staircase(BenchmarkSpec(q=4, n=2, blocks=1))
        again = Circuit.from_json(c.to_json())
        assert again == c

    def test_json_kind_strings(self):
        c = Circuit(2, [h(0), t(1), cx(0, 1)])
        kinds = [g["kind"] for g in c.to_json_dict()["gates"]]
        assert kinds == ["H", "T", "CX"]
        all_kinds = {k.value for k in GateKind}
        assert all_kinds == {"H", "X", "T", "S", "Sdg", "CX", "CZ"}

    def test_malformed_json_rejected(self):
        with pytest.raises(ValidationError):
            Circuit.from_json(json.dumps({"num_qubits": 2, "gates": [{"kind": "RX", "qubits": [0]}]}))


class TestComputeDepth:
    def test_empty(self):
        assert compute_depth(Circuit(3, [])) == 0

    def test_parallel_gates(self):
        assert compute_depth(Circuit(2, [h(0), h(1)])) == 1

    def test_hand_scheduled_chain(self):
        # H(0) layer 1, CX layer 2, H(1) layer 3
        assert compute_depth(Circuit(2, [h(0), cx(0, 1), h(1)])) == 3


class TestStaircase:
    def test_six_qubit_one_block(self):
        c = build_staircase(BenchmarkSpec(q=6, n=2, blocks=1))
        assert sum(g.kind is GateKind.H for g in c.gates) == 6
        assert sum(g.kind is GateKind.CX for g in c.gates) == 5
        crossings = crossing_gates(c, 2)
        assert len(crossings) == 1
        assert crossings[0][1] == cx(2, 3)

    def test_smallest_staircase_gate_list(self):
        c = build_staircase(BenchmarkSpec(q=2, n=2, blocks=1))
        assert list(c.gates) == [h(0), h(1), t(0), t(1), cx(0, 1), t(0), t(1)]
        assert len(crossing_gates(c, 2)) == 1
        # frontier scheduling: H | T,T | CX | T,T
        assert c.depth == 4

    def test_three_way_two_blocks_crossings(self):
        c = build_staircase(BenchmarkSpec(q=6, n=3, blocks=2))
        crossings = crossing_gates(c, 3)
        per_boundary = {0: 0, 1: 0}
        for _, g in crossings:
            per_boundary[g.qubits[0] // 2] += 1
        assert per_boundary == {0: 2, 1: 2}
        assert len(crossings) == 4

    @pytest.mark.parametrize("q,blocks", [(2, 1), (4, 3), (8, 2), (10, 5)])
    def test_bipartition_crossings_equal_blocks(self, q, blocks):
        c = build_staircase(BenchmarkSpec(q=q, n=2, blocks=blocks))
        assert len(crossing_gates(c, 2)) == blocks

    def test_deterministic(self):
        a = build_staircase(BenchmarkSpec(q=8, n=2, blocks=3))
        b = build_staircase(BenchmarkSpec(q=8, n=2, blocks=3))
        assert a == b
        assert a.to_json() == b.to_json()

    def test_blocks_after_first_omit_h_layer(self):
        one = build_staircase(BenchmarkSpec(q=4, n=2, blocks=1))
        two = build_staircase(BenchmarkSpec(q=4, n=2, blocks=2))
        h_count = sum(g.kind is GateKind.H for g in two.gates)
        assert h_count == 4
        assert two.gate_count == one.gate_count + 3 * 5

    def test_validation(self):
        with pytest.raises(ValidationError):
            BenchmarkSpec(q=1, n=2, blocks=1)
        with pytest.raises(ValidationError):
            BenchmarkSpec(q=6, n=4, blocks=1)
        with pytest.raises(ValidationError):
            BenchmarkSpec(q=4, n=2, blocks=0)
        with pytest.raises(ValidationError):
            build_staircase(BenchmarkSpec(q=4, n=2, blocks=1, depth_pad_exponent=1))


class TestDepthPadded:
    def test_p0_adds_two_gates(self):
        base = build_staircase(BenchmarkSpec(q=6, n=2, blocks=1))
        padded = build_depth_padded(BenchmarkSpec(q=6, n=2, blocks=1, depth_pad_exponent=0))
        assert padded.gate_count == base.gate_count + 2

    def test_p2_adds_two_hundred(self):
        base = build_staircase(BenchmarkSpec(q=6, n=2, blocks=1))
        padded = build_depth_padded(BenchmarkSpec(q=6, n=2, blocks=1, depth_pad_exponent=2))
        assert padded.gate_count == base.gate_count + 200

    @pytest.mark.parametrize("q,n,blocks,p", [(6, 2, 1, 0), (6, 2, 1, 2), (6, 3, 2, 1), (8, 2, 3, 3)])
    def test_boundary_structure_unchanged(self, q, n, blocks, p):
        base = build_staircase(BenchmarkSpec(q=q, n=n, blocks=blocks))
        padded = build_depth_padded(BenchmarkSpec(q=q, n=n, blocks=blocks, depth_pad_exponent=p))
        base_cross = [g for _, g in crossing_gates(base, n)]
        pad_cross = [g for _, g in crossing_gates(padded, n)]
        assert base_cross == pad_cross

    def test_pad_gates_alternate_t_x(self):
        padded = build_depth_padded(BenchmarkSpec(q=4, n=2, blocks=1, depth_pad_exponent=1))
        on_edge = [g for g in padded.gates if g.qubits == (3,) and g.kind in (GateKind.T, GateKind.X)]
        # suffix pad: 10 alternating gates starting with T
        tail = on_edge[-10:]
        assert [g.kind for g in tail] == [GateKind.T, GateKind.X] * 5

    def test_pad_exponent_overflow_guard(self):
        with pytest.raises(ValidationError):
            BenchmarkSpec(q=4, n=2, blocks=1, depth_pad_exponent=12)

    def test_requires_exponent(self):
        with pytest.raises(ValidationError):
            build_depth_padded(BenchmarkSpec(q=4, n=2, blocks=1))

    def test_dispatch(self):
        plain = build_benchmark(BenchmarkSpec(q=4, n=2, blocks=1))
        padded = build_benchmark(BenchmarkSpec(q=4, n=2, blocks=1, depth_pad_exponent=0))
        assert padded.gate_count == plain.gate_count + 2
