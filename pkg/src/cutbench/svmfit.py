"""Weighted linear SVM for locating the measured speedup boundary.

Deterministic by construction: batch subgradient descent with a fixed
iteration count, fixed L2 regularization, features standardized to zero
mean / unit variance, sample weights clipped at their 99th percentile, and
the weight vector initialized on a caller-supplied line (the analytic
threshold). No randomness anywhere.

Labels: +1 for slowdown points (relative overhead > 0), -1 for speedup.
The fitted decision boundary is reported as c_total = slope * q + intercept.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFitError, ValidationError

ITERATIONS = 10_000
L2_REGULARIZATION = 1e-3
LEARNING_RATE = 0.5
WEIGHT_CLIP_PERCENTILE = 99.0


@dataclass
class BoundaryFit:
    """Fitted line c_total = slope * q + intercept plus training diagnostics."""

    slope: float
    intercept: float
    w: np.ndarray
    b: float
    feature_mean: np.ndarray
    feature_std: np.ndarray
    points: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    weighted_accuracy: float = 0.0
    margin_violations: int = 0
    iterations: int = ITERATIONS

    def decision_values(self, points: np.ndarray) -> np.ndarray:
        z = (np.asarray(points, dtype=float) - self.feature_mean) / self.feature_std
        return z @ self.w + self.b

    def predict(self, points: np.ndarray) -> np.ndarray:
        """+1 above the boundary (slowdown side), -1 below."""
        return np.where(self.decision_values(points) >= 0, 1, -1)


def fit_weighted_line(
    points: np.ndarray,
    deltas: np.ndarray,
    init_line: tuple[float, float],
    *,
    iterations: int = ITERATIONS,
    reg: float = L2_REGULARIZATION,
    lr: float = LEARNING_RATE,
) -> BoundaryFit:
    """Fit a linear boundary in the (q, c_total) plane separating the sign of
    the measured relative overhead, weighting samples by its magnitude.

    init_line is (slope, intercept) of the starting boundary.
    """
    points = np.asarray(points, dtype=float)
    deltas = np.asarray(deltas, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValidationError(f"points must have shape (m, 2), got {points.shape}")
    if len(deltas) != len(points):
        raise ValidationError("points and deltas must have equal length")
    finite = np.isfinite(deltas)
    points, deltas = points[finite], deltas[finite]
    if len(points) == 0:
        raise DegenerateFitError("no finite data points to fit")

    labels = np.where(deltas > 0, 1.0, -1.0)
    if np.all(labels > 0) or np.all(labels < 0):
        raise DegenerateFitError(
            "boundary fit needs both speedup and slowdown points; got one class"
        )

    weights = np.abs(deltas)
    cap = np.percentile(weights, WEIGHT_CLIP_PERCENTILE, method="lower")
    weights = np.minimum(weights, cap)
    if weights.sum() <= 0:
        weights = np.ones_like(weights)
    weights = weights / weights.sum()

    mean = points.mean(axis=0)
    std = points.std(axis=0)
    std[std == 0] = 1.0
    z = (points - mean) / std

    slope0, delta0 = init_line
    w = np.array([-slope0 * std[0], std[1]], dtype=float)
    b = float(mean[1] - slope0 * mean[0] - delta0)
    scale = np.linalg.norm(w)
    w /= scale
    b /= scale

    wy = weights * labels
    for it in range(iterations):
        margins = labels * (z @ w + b)
        viol = margins < 1.0
        grad_w = reg * w - z[viol].T @ wy[viol]
        grad_b = -wy[viol].sum()
        step = lr / (1.0 + 4.0 * it / iterations)
        w = w - step * grad_w
        b = b - step * grad_b

    if abs(w[1]) < 1e-12:
        raise DegenerateFitError("fitted boundary has no c_total component")

    # w0*(q-mq)/sq + w1*(c-mc)/sc + b = 0 solved for c
    slope = -w[0] * std[1] / (std[0] * w[1])
    intercept = mean[1] + std[1] * (w[0] * mean[0] / std[0] - b) / w[1]

    decision = z @ w + b
    predicted = np.where(decision >= 0, 1.0, -1.0)
    accuracy = float(weights[predicted == labels].sum())
    violations = int(np.count_nonzero(labels * decision < 1.0))

    return BoundaryFit(
        slope=float(slope),
        intercept=float(intercept),
        w=w,
        b=float(b),
        feature_mean=mean,
        feature_std=std,
        points=points,
        labels=labels,
        weights=weights,
        weighted_accuracy=accuracy,
        margin_violations=violations,
        iterations=iterations,
    )
