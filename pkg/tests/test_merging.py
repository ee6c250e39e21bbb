"""Reconstruction tests: merged states must equal the uncut simulation."""
import numpy as np
import pytest

from cutbench.circuits import BenchmarkSpec, Circuit, build_staircase, cx, cz, h, t
from cutbench.cutting import decompose, plan_cut
from cutbench.engine import StateVec, simulate, tensor
from cutbench.errors import CapacityError, ValidationError
from cutbench.merging import MergeInput, merge, merge_input_from, merge_streaming


def run_pipeline(circ, n):
    plan = plan_cut(circ, n)
    subs = decompose(circ, plan)
    states = [[simulate(c) for c in fam.circuits] for fam in subs.segments]
    return subs, states


class TestMerge:
    def test_two_qubit_cz_cut(self):
        circ = Circuit(2, [h(0), h(1), cz(0, 1)])
        subs, states = run_pipeline(circ, 2)
        merged = merge(merge_input_from(subs, states))
        assert np.allclose(merged.amps, np.array([1, 1, 1, -1]) / 2, atol=1e-12)
        assert np.allclose(merged.amps, simulate(circ).amps, atol=1e-12)

    def test_no_cuts_is_tensor_product(self):
        circ = Circuit(4, [h(0), cx(0, 1), t(1), cx(2, 3)])
        subs, states = run_pipeline(circ, 2)
        merged = merge(merge_input_from(subs, states))
        expected = tensor(states[0][0], states[1][0])
        assert np.allclose(merged.amps, expected.amps, atol=1e-14)
        assert abs(merged.norm() - 1.0) < 1e-12

    def test_staircase_q8_two_blocks(self):
        circ = build_staircase(BenchmarkSpec(q=8, n=2, blocks=2))
        subs, states = run_pipeline(circ, 2)
        merged = merge(merge_input_from(subs, states))
        ref = simulate(circ)
        assert float(np.abs(merged.amps - ref.amps).max()) < 1e-10

    @pytest.mark.parametrize("q,n,blocks", [(6, 3, 2), (8, 4, 2), (12, 3, 1), (8, 2, 4)])
    def test_multiway_reconstruction(self, q, n, blocks):
        circ = build_staircase(BenchmarkSpec(q=q, n=n, blocks=blocks))
        subs, states = run_pipeline(circ, n)
        merged = merge(merge_input_from(subs, states))
        ref = simulate(circ)
        assert float(np.abs(merged.amps - ref.amps).max()) < 1e-10
        assert abs(merged.norm() - 1.0) < 1e-10

    def test_blocked_accumulation_path(self):
        # c_total = 13 crosses the block-summation threshold
        circ = build_staircase(BenchmarkSpec(q=4, n=2, blocks=13))
        subs, states = run_pipeline(circ, 2)
        merged = merge(merge_input_from(subs, states))
        ref = simulate(circ)
        assert float(np.abs(merged.amps - ref.amps).max()) < 1e-10
        # summation order still immaterial at this term count
        perm = np.random.default_rng(11).permutation(len(subs.coeffs))
        shuffled = MergeInput(states, subs.coeffs[perm], subs.merge_table[:, perm], 4)
        again = merge(shuffled)
        assert float(np.abs(merged.amps - again.amps).max()) < 1e-12

    def test_permutation_soundness(self):
        circ = build_staircase(BenchmarkSpec(q=6, n=2, blocks=3))
        subs, states = run_pipeline(circ, 2)
        base = merge(merge_input_from(subs, states))
        perm = np.random.default_rng(7).permutation(len(subs.coeffs))
        shuffled = MergeInput(
            segment_states=states,
            coeffs=subs.coeffs[perm],
            merge_table=subs.merge_table[:, perm],
            num_qubits=6,
        )
        again = merge(shuffled)
        assert float(np.abs(base.amps - again.amps).max()) < 1e-12

    def test_capacity_error(self):
        circ = Circuit(4, [h(0)])
        subs, states = run_pipeline(circ, 2)
        with pytest.raises(CapacityError):
            merge(merge_input_from(subs, states), max_qubits=3)

    def test_dimension_mismatch(self):
        circ = Circuit(4, [h(0)])
        subs, states = run_pipeline(circ, 2)
        with pytest.raises(ValidationError):
            MergeInput(states, subs.coeffs, subs.merge_table, num_qubits=5)

    def test_state_count_mismatch(self):
        circ = build_staircase(BenchmarkSpec(q=4, n=2, blocks=1))
        subs, states = run_pipeline(circ, 2)
        with pytest.raises(ValidationError):
            MergeInput([states[0][:1], states[1]], subs.coeffs, subs.merge_table, 4)


class TestMergeStreaming:
    def _provider(self, subs):
        fams = [fam.circuits for fam in subs.segments]

        def provider(seg, idx):
            return simulate(fams[seg][idx])

        return provider

    def test_matches_merge_on_cz_example(self):
        circ = Circuit(2, [h(0), h(1), cz(0, 1)])
        subs, states = run_pipeline(circ, 2)
        a = merge(merge_input_from(subs, states))
        b = merge_streaming(self._provider(subs), subs.coeffs, subs.merge_table, 2)
        assert np.array_equal(a.amps, b.amps)

    def test_no_cut_case(self):
        circ = Circuit(4, [h(0), cx(2, 3)])
        subs, states = run_pipeline(circ, 2)
        out = merge_streaming(self._provider(subs), subs.coeffs, subs.merge_table, 4)
        expected = tensor(states[0][0], states[1][0])
        assert np.allclose(out.amps, expected.amps, atol=1e-14)

    def test_q8_self_consistency(self):
        circ = build_staircase(BenchmarkSpec(q=8, n=2, blocks=2))
        subs, states = run_pipeline(circ, 2)
        a = merge(merge_input_from(subs, states))
        b = merge_streaming(self._provider(subs), subs.coeffs, subs.merge_table, 8)
        assert float(np.abs(a.amps - b.amps).max()) < 1e-12

    def test_three_way(self):
        circ = build_staircase(BenchmarkSpec(q=6, n=3, blocks=2))
        subs, states = run_pipeline(circ, 3)
        a = merge(merge_input_from(subs, states))
        b = merge_streaming(self._provider(subs), subs.coeffs, subs.merge_table, 6)
        assert float(np.abs(a.amps - b.amps).max()) < 1e-12

    def test_wrong_total_qubits(self):
        circ = Circuit(4, [h(0)])
        subs, _ = run_pipeline(circ, 2)
        with pytest.raises(ValidationError):
            merge_streaming(self._provider(subs), subs.coeffs, subs.merge_table, 5)


class TestMergeInputValidation:
    def test_needs_two_segments(self):
        sv = StateVec(1, np.array([1, 0], dtype=complex))
        with pytest.raises(ValidationError):
            MergeInput([[sv]], np.ones(1, dtype=complex), np.zeros((1, 1), dtype=np.int64), 1)

    def test_power_of_two_state_count(self):
        sv = StateVec(1, np.array([1, 0], dtype=complex))
        with pytest.raises(ValidationError):
            MergeInput(
                [[sv, sv, sv], [sv]],
                np.ones(1, dtype=complex),
                np.zeros((2, 1), dtype=np.int64),
                2,
            )

    def test_table_reference_out_of_range(self):
        sv = StateVec(1, np.array([1, 0], dtype=complex))
        table = np.array([[1], [0]], dtype=np.int64)
        with pytest.raises(ValidationError):
            MergeInput([[sv], [sv]], np.ones(1, dtype=complex), table, 2)
