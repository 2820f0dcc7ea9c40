"""Per-class empirical distributions of a scalar test statistic.

The empirical distribution puts mass ``1/N`` on each training value.  All
thresholds used by the tests in :mod:`dualtest.testing` are order statistics
of these samples; nothing is interpolated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyOrTooSmall, LengthMismatch, NonFiniteValue, POutOfRange, ZeroBins

DEFAULT_MIN_COUNT = 20

# half-width used to widen a zero-width histogram range
DEGENERATE_HALF_WIDTH = 0.5


@dataclass(frozen=True)
class FeatureSample:
    """One labelled test-statistic value; label 0 is class C1, label 1 is C2."""

    value: float
    label: int

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise NonFiniteValue(f"feature value must be finite, got {self.value!r}")
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")


class EmpiricalDistribution:
    """Sorted, immutable sample of one class's feature values.

    Build instances with :meth:`from_samples`.
    """

    __slots__ = ("_values",)

    def __init__(self, sorted_values: np.ndarray):
        values = np.array(sorted_values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise EmptyOrTooSmall("distribution needs at least one value")
        if np.any(np.diff(values) < 0):
            raise ValueError("sorted_values must be nondecreasing")
        values.setflags(write=False)
        self._values = values

    @classmethod
    def from_samples(
        cls, values: Iterable[float], min_count: int = DEFAULT_MIN_COUNT
    ) -> "EmpiricalDistribution":
        """Sort ``values`` into a distribution; duplicates are kept.

        Raises
        ------
        EmptyOrTooSmall
            If fewer than ``min_count`` values are given.
        NonFiniteValue
            If any value is NaN or infinite.
        """
        if min_count < 1:
            raise ValueError("min_count must be a positive integer")
        if not isinstance(values, np.ndarray):
            values = list(values)
        arr = np.asarray(values, dtype=np.float64).ravel()
        if arr.size < min_count:
            raise EmptyOrTooSmall(
                f"need at least {min_count} samples, got {arr.size}"
            )
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            i = int(bad[0])
            raise NonFiniteValue(f"non-finite value {arr[i]!r} at index {i}", index=i)
        return cls(np.sort(arr, kind="stable"))

    @property
    def sorted_values(self) -> np.ndarray:
        return self._values

    @property
    def count(self) -> int:
        return int(self._values.size)

    @property
    def min(self) -> float:
        return float(self._values[0])

    @property
    def max(self) -> float:
        return float(self._values[-1])

    def __len__(self) -> int:
        return self.count

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmpiricalDistribution):
            return NotImplemented
        return np.array_equal(self._values, other._values)

    def __hash__(self):
        return hash(self._values.tobytes())

    def __repr__(self) -> str:
        return f"EmpiricalDistribution(count={self.count}, min={self.min!r}, max={self.max!r})"

    def quantile(self, p: float) -> float:
        return quantile(self, p)

    def ecdf(self, t: float) -> float:
        return ecdf(self, t)

    def histogram(self, bins: int) -> list[tuple[float, float, int]]:
        return histogram(self, bins)


def from_samples(values: Iterable[float], min_count: int = DEFAULT_MIN_COUNT) -> EmpiricalDistribution:
    return EmpiricalDistribution.from_samples(values, min_count=min_count)


def order_index(n: int, p: float) -> int:
    """1-based rank ``k`` of the lower ``p``-quantile among ``n`` samples.

    ``k`` is the smallest integer with ``k / n >= p``, i.e. ``ceil(p * n)``,
    evaluated so that it agrees with the floating-point ECDF (``0.07 * 100``
    rounds to ``7.000000000000001`` but must give rank 7).
    """
    if not (0.0 < p <= 1.0):
        raise POutOfRange(f"p must lie in (0, 1], got {p!r}")
    k = min(max(math.ceil(p * n), 1), n)
    while k > 1 and (k - 1) / n >= p:
        k -= 1
    while k < n and k / n < p:
        k += 1
    return k


def quantile(dist: EmpiricalDistribution, p: float) -> float:
    """Lower empirical quantile: the ``ceil(p*N)``-th smallest sample.

    Equivalently the smallest sample value ``t`` with ``ecdf(t) >= p``.
    """
    k = order_index(dist.count, p)
    return float(dist.sorted_values[k - 1])


def ecdf(dist: EmpiricalDistribution, t: float) -> float:
    """Fraction of samples ``<= t``."""
    if not math.isfinite(t):
        raise NonFiniteValue(f"t must be finite, got {t!r}")
    k = int(np.searchsorted(dist.sorted_values, t, side="right"))
    return k / dist.count


def histogram(dist: EmpiricalDistribution, bins: int) -> list[tuple[float, float, int]]:
    """Equal-width bins over ``[min, max]`` as ``(lower, upper, count)`` triples.

    Bins are half-open except the last, which includes ``max``.  A zero-width
    range is widened to ``[v - 0.5, v + 0.5]``.
    """
    if not isinstance(bins, (int, np.integer)) or bins < 1:
        raise ZeroBins(f"bins must be a positive integer, got {bins!r}")
    lo, hi = dist.min, dist.max
    if lo == hi:
        lo, hi = lo - DEGENERATE_HALF_WIDTH, hi + DEGENERATE_HALF_WIDTH
    counts, edges = np.histogram(dist.sorted_values, bins=int(bins), range=(lo, hi))
    return [
        (float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(int(bins))
    ]


def split_by_label(
    values: Sequence[float], labels: Sequence[int], min_count: int = DEFAULT_MIN_COUNT
) -> tuple[EmpiricalDistribution, EmpiricalDistribution]:
    """Build the (C1, C2) distributions from labelled values (0 -> C1, 1 -> C2)."""
    v = np.asarray(values, dtype=np.float64)
    y = np.asarray(labels)
    if v.shape != y.shape:
        raise LengthMismatch(f"{v.size} values but {y.size} labels")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0 or 1")
    return (
        EmpiricalDistribution.from_samples(v[y == 0], min_count=min_count),
        EmpiricalDistribution.from_samples(v[y == 1], min_count=min_count),
    )
