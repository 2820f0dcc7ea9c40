"""End-to-end drivers: the spiral region-map benchmark and the alpha sweep."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .datasets import SpiralSpec, generate_spiral, svm_to_binary
from .empirical import DEFAULT_MIN_COUNT, EmpiricalDistribution, split_by_label
from .metrics import SelectiveReport, evaluate
from .svm import KernelParams, SmoSettings, SvmModel, decision_grid, grid_centers, train
from .testing import (
    EXPERIMENT_CONFIGS,
    CalibratedTester,
    Decision,
    TestConfig,
    calibrate,
    decide_batch,
)

DEFAULT_GAMMA = 8.0
DEFAULT_C = 10.0
DEFAULT_RESOLUTION = 100
DEFAULT_SEED = 7


@dataclass
class SpiralRun:
    points: np.ndarray
    labels: np.ndarray  # +1 for C1, -1 for C2
    model: SvmModel
    train_scores: np.ndarray
    dist1: EmpiricalDistribution
    dist2: EmpiricalDistribution
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    grid: np.ndarray  # decision values at cell centres
    testers: dict[str, CalibratedTester] = field(default_factory=dict)
    codes: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def baseline_codes(self) -> np.ndarray:
        """Plain SVM map: class 1 where g >= 0, else class 2."""
        return np.where(self.grid >= 0, Decision.CLASS1.code, Decision.CLASS2.code).astype(np.int8)

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.grid.shape[0]
        return grid_centers(*self.x_range, n), grid_centers(*self.y_range, n)


def run_spiral(
    spec: SpiralSpec = SpiralSpec(seed=DEFAULT_SEED),
    kernel: KernelParams = KernelParams(DEFAULT_GAMMA),
    settings: SmoSettings = SmoSettings(c=DEFAULT_C, seed=DEFAULT_SEED),
    configs: Mapping[str, TestConfig] = EXPERIMENT_CONFIGS,
    resolution: int = DEFAULT_RESOLUTION,
    extent: float | None = None,
    min_count: int = DEFAULT_MIN_COUNT,
) -> SpiralRun:
    """Generate spirals, train the SVM, calibrate each config, and map the plane.

    The map covers ``[-extent, extent]^2``; by default 1.5 times the spiral's
    outer radius.
    """
    points, labels = generate_spiral(spec)
    model = train(points, labels, kernel, settings)
    scores = model.decision_values(points)
    dist1, dist2 = split_by_label(scores, svm_to_binary(labels), min_count=min_count)
    half = 1.5 * spec.radius_scale if extent is None else float(extent)
    rng = (-half, half)
    grid = decision_grid(model, rng, rng, resolution)
    run = SpiralRun(points, labels, model, scores, dist1, dist2, rng, rng, grid)
    for name, cfg in configs.items():
        tester = calibrate(dist1, dist2, cfg)
        run.testers[name] = tester
        run.codes[name] = tester.decide_codes(grid)
    return run


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    tester: CalibratedTester
    report: SelectiveReport


def alpha_sweep(
    train_scores: Sequence[float],
    train_labels: Sequence[int],
    test_scores: Sequence[float],
    test_labels: Sequence[int],
    alphas: Sequence[float] = (0.01, 0.025, 0.05),
    positive_class: int = 1,
    min_count: int = DEFAULT_MIN_COUNT,
) -> list[SweepRow]:
    """Calibrate at each common significance level and score the test set."""
    dist1, dist2 = split_by_label(train_scores, train_labels, min_count=min_count)
    rows = []
    for alpha in alphas:
        tester = calibrate(dist1, dist2, TestConfig.symmetric(alpha))
        decisions = decide_batch(test_scores, tester)
        rows.append(SweepRow(alpha, tester, evaluate(decisions, list(test_labels), positive_class)))
    return rows


def sign_rule_accuracy(scores: Sequence[float], labels: Sequence[int], threshold: float = 0.0) -> float:
    """Accuracy of the non-selective rule: label 1 when score > threshold."""
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    return float(np.mean((s > threshold).astype(int) == y))
