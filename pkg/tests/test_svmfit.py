"""Boundary-fit tests on synthetic, fully-controlled data."""
import numpy as np
import pytest

from cutbench.errors import DegenerateFitError, ValidationError
from cutbench.svmfit import fit_weighted_line


def synthetic_grid(slope, intercept, *, q_lo=2, q_hi=20, c_hi=10, eps=0.0):
    """Deltas proportional to the signed distance from c = slope*q + intercept."""
    points, deltas = [], []
    jitter = 1
    for q in range(q_lo, q_hi + 1, 2):
        for c in range(1, c_hi + 1):
            gap = c - (slope * q + intercept)
            if abs(gap) < 1e-9:
                continue
            points.append((q, c))
            deltas.append(gap * 0.3 + eps * jitter)
            jitter = -jitter
    return np.array(points, dtype=float), np.array(deltas)


class TestRecovery:
    def test_recovers_half_slope(self):
        points, deltas = synthetic_grid(0.5, 0.0)
        fit = fit_weighted_line(points, deltas, (0.5, 0.0))
        assert fit.slope == pytest.approx(0.5, abs=0.05)
        assert abs(fit.intercept) < 1.0

    def test_recovers_off_init_line(self):
        # data boundary deliberately away from the init line
        points, deltas = synthetic_grid(0.8, -3.0)
        fit = fit_weighted_line(points, deltas, (0.5, 0.0))
        assert fit.slope == pytest.approx(0.8, abs=0.08)
        assert fit.intercept == pytest.approx(-3.0, abs=0.8)

    def test_small_noise_tolerated(self):
        points, deltas = synthetic_grid(0.5, 0.0, eps=0.02)
        fit = fit_weighted_line(points, deltas, (0.5, 0.0))
        assert fit.slope == pytest.approx(0.5, abs=0.05)


class TestSymmetry:
    def test_equal_weights_symmetric_clusters(self):
        # two horizontal bands; separating line should pass midway (c = 5)
        pts = [(q, 3) for q in range(2, 12, 2)] + [(q, 7) for q in range(2, 12, 2)]
        deltas = [-1.0] * 5 + [1.0] * 5
        fit = fit_weighted_line(np.array(pts, float), np.array(deltas), (0.0, 5.0))
        mid = fit.slope * 7 + fit.intercept
        assert mid == pytest.approx(5.0, abs=0.5)
        assert abs(fit.slope) < 0.05


class TestDiagnostics:
    def test_self_consistent_classification(self):
        points, deltas = synthetic_grid(0.5, 0.0)
        fit = fit_weighted_line(points, deltas, (0.5, 0.0))
        predicted = fit.predict(fit.points)
        acc = float(fit.weights[predicted == fit.labels].sum())
        assert acc == pytest.approx(fit.weighted_accuracy, abs=1e-12)
        decision = fit.decision_values(fit.points)
        assert int(np.count_nonzero(fit.labels * decision < 1.0)) == fit.margin_violations

    def test_weights_normalized_and_clipped(self):
        points, deltas = synthetic_grid(0.5, 0.0)
        deltas[0] = 1e6  # outlier should be clipped away
        fit = fit_weighted_line(points, deltas, (0.5, 0.0))
        assert fit.weights.sum() == pytest.approx(1.0)
        assert fit.weights.max() < 0.5

    def test_deterministic(self):
        points, deltas = synthetic_grid(0.5, 0.0)
        a = fit_weighted_line(points, deltas, (0.5, 0.0))
        b = fit_weighted_line(points, deltas, (0.5, 0.0))
        assert a.slope == b.slope and a.intercept == b.intercept
        assert np.array_equal(a.w, b.w) and a.b == b.b


class TestDegenerate:
    def test_one_class_rejected(self):
        points = np.array([(2, 1), (4, 2), (6, 1)], dtype=float)
        with pytest.raises(DegenerateFitError):
            fit_weighted_line(points, np.array([0.5, 0.2, 0.9]), (0.5, 0.0))

    def test_empty_rejected(self):
        with pytest.raises(DegenerateFitError):
            fit_weighted_line(
                np.empty((0, 2)), np.empty(0), (0.5, 0.0)
            )

    def test_nan_deltas_dropped(self):
        points, deltas = synthetic_grid(0.5, 0.0)
        deltas = deltas.copy()
        deltas[::7] = np.nan
        fit = fit_weighted_line(points, deltas, (0.5, 0.0))
        assert fit.slope == pytest.approx(0.5, abs=0.06)

    def test_bad_shape(self):
        with pytest.raises(ValidationError):
            fit_weighted_line(np.zeros((3, 3)), np.zeros(3), (0.5, 0.0))
