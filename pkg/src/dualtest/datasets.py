"""Deterministic synthetic data: the two-arm spiral and a two-class score mixture.

Randomness comes from :class:`SeededStream`, a PCG64 stream from numpy whose
uniform doubles are reproducible across platforms.  Normal variates are
produced here from those uniforms by the Box-Muller transform rather than by
numpy's ziggurat sampler, so the full pipeline from seed to sample is pinned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class SeededStream:
    """Uniform and normal variates from a seeded PCG64 generator."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def uniform_open_closed(self, n: int) -> np.ndarray:
        """``n`` doubles in ``(0, 1]``."""
        return 1.0 - self._gen.random(n)

    def normal(self, n: int) -> np.ndarray:
        """``n`` standard normal draws via Box-Muller."""
        m = (n + 1) // 2
        u1 = self.uniform_open_closed(m)
        u2 = self._gen.random(m)
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * math.pi * u2
        z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
        return z[:n]

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)


@dataclass(frozen=True)
class SpiralSpec:
    n_per_class: int = 200
    turns: float = 1.75
    noise_sigma: float = 0.05
    radius_scale: float = 1.0
    seed: int = 7

    def __post_init__(self):
        if self.n_per_class < 1:
            raise ValueError("n_per_class must be at least 1")
        if not self.turns > 0:
            raise ValueError("turns must be positive")
        if not self.noise_sigma >= 0:
            raise ValueError("noise_sigma must be nonnegative")
        if not self.radius_scale > 0:
            raise ValueError("radius_scale must be positive")


def spiral_arm(u: np.ndarray, spec: SpiralSpec, offset: float = 0.0) -> np.ndarray:
    """Noiseless arm points for curve parameters ``u`` in ``(0, 1]``."""
    theta = 2.0 * math.pi * spec.turns * np.asarray(u, dtype=np.float64)
    radius = spec.radius_scale * theta / (2.0 * math.pi * spec.turns)
    return np.column_stack([radius * np.cos(theta + offset), radius * np.sin(theta + offset)])


def generate_spiral(spec: SpiralSpec = SpiralSpec()) -> tuple[np.ndarray, np.ndarray]:
    """Two interleaved Archimedean arms, the second rotated by pi.

    Returns ``(points, labels)`` with the first ``n_per_class`` rows on the
    C1 arm (label +1) and the rest on the C2 arm (label -1).
    """
    stream = SeededStream(spec.seed)
    n = spec.n_per_class
    u1 = stream.uniform_open_closed(n)
    u2 = stream.uniform_open_closed(n)
    noise = stream.normal(4 * n).reshape(2 * n, 2) * spec.noise_sigma
    points = np.vstack([spiral_arm(u1, spec), spiral_arm(u2, spec, offset=math.pi)]) + noise
    labels = np.concatenate([np.ones(n, dtype=np.int64), -np.ones(n, dtype=np.int64)])
    return points, labels


def svm_to_binary(labels) -> np.ndarray:
    """Map SVM labels (+1 for C1, -1 for C2) to class tags (0 for C1, 1 for C2)."""
    return np.where(np.asarray(labels) > 0, 0, 1).astype(np.int64)


def binary_to_svm(labels) -> np.ndarray:
    return np.where(np.asarray(labels) == 0, 1, -1).astype(np.int64)


@dataclass(frozen=True)
class ScoreMixtureSpec:
    """Gaussian scores per class with an optional shifted outlier fraction."""

    mean1: float = -3.0
    mean2: float = 3.0
    sigma1: float = 1.0
    sigma2: float = 1.0
    n1: int = 10_000
    n2: int = 10_000
    outlier_fraction: float = 0.0
    outlier_shift: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (self.sigma1 > 0 and self.sigma2 > 0):
            raise ValueError("sigmas must be positive")
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("n1 and n2 must be positive")
        if not (0.0 <= self.outlier_fraction < 1.0):
            raise ValueError("outlier_fraction must lie in [0, 1)")


def generate_scores(spec: ScoreMixtureSpec = ScoreMixtureSpec()) -> tuple[np.ndarray, np.ndarray]:
    """Scores and 0/1 labels, class 0 first.

    A randomly chosen ``round(outlier_fraction * n)`` of each class is moved
    by ``outlier_shift`` outward, i.e. away from the other class's mean (the
    class with the lower mean moves down).
    """
    stream = SeededStream(spec.seed)
    s1 = spec.mean1 + spec.sigma1 * stream.normal(spec.n1)
    s2 = spec.mean2 + spec.sigma2 * stream.normal(spec.n2)
    down_first = spec.mean1 <= spec.mean2
    for scores, direction in ((s1, -1.0 if down_first else 1.0), (s2, 1.0 if down_first else -1.0)):
        k = int(round(spec.outlier_fraction * scores.size))
        if k:
            idx = stream.permutation(scores.size)[:k]
            scores[idx] += direction * spec.outlier_shift
    labels = np.concatenate([np.zeros(spec.n1, dtype=np.int64), np.ones(spec.n2, dtype=np.int64)])
    return np.concatenate([s1, s2]), labels
