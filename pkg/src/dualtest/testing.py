"""Two one-sample tests on a scalar statistic and the four-way decision rule.

Test 1 asks whether ``t`` is drawn from class C1's feature distribution, test 2
whether it is drawn from C2's.  Each test accepts inside a closed interval
between two empirical quantiles of its class.  Combining the outcomes:

=========  =========  ====================
in C1 box  in C2 box  decision
=========  =========  ====================
yes        no         ``CLASS1``
no         yes        ``CLASS2``
yes        yes        ``UNCERTAIN_OVERLAP``  (type I uncertainty)
no         no         ``UNCERTAIN_OUTLIER``  (type II uncertainty)
=========  =========  ====================
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .empirical import EmpiricalDistribution, quantile
from .errors import NonFiniteValue


class Decision(enum.Enum):
    CLASS1 = "class1"
    CLASS2 = "class2"
    UNCERTAIN_OVERLAP = "uncertain_overlap"
    UNCERTAIN_OUTLIER = "uncertain_outlier"

    @classmethod
    def from_membership(cls, in1: bool, in2: bool) -> "Decision":
        if in1:
            return cls.UNCERTAIN_OVERLAP if in2 else cls.CLASS1
        return cls.CLASS2 if in2 else cls.UNCERTAIN_OUTLIER

    @property
    def code(self) -> int:
        return _CODES[self]

    @classmethod
    def from_code(cls, code: int) -> "Decision":
        return _BY_CODE[int(code)]

    @property
    def is_uncertain(self) -> bool:
        return self in (Decision.UNCERTAIN_OVERLAP, Decision.UNCERTAIN_OUTLIER)

    @property
    def predicted_label(self) -> int | None:
        """0 for class 1, 1 for class 2, ``None`` when abstaining."""
        return {Decision.CLASS1: 0, Decision.CLASS2: 1}.get(self)

    def merged_name(self) -> str:
        return "uncertain" if self.is_uncertain else self.value


# integer codes for vectorised paths; bit 0 = in region1, bit 1 = in region2
_CODES = {
    Decision.UNCERTAIN_OUTLIER: 0,
    Decision.CLASS1: 1,
    Decision.CLASS2: 2,
    Decision.UNCERTAIN_OVERLAP: 3,
}
_BY_CODE = {v: k for k, v in _CODES.items()}


@dataclass(frozen=True)
class AcceptanceRegion:
    """Closed interval ``[lower, upper]`` where the null hypothesis stands."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise NonFiniteValue(f"region bounds must be finite: [{self.lower}, {self.upper}]")
        if self.lower > self.upper:
            raise ValueError(f"region lower {self.lower} exceeds upper {self.upper}")

    def __contains__(self, t: float) -> bool:
        return self.lower <= t <= self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class TestConfig:
    """Quantile points bounding each class's acceptance region.

    ``TestConfig.symmetric(alpha)`` gives the common-significance form with
    points ``(alpha, 1 - alpha)`` for both classes.
    """

    __test__ = False  # not a pytest class

    class1_lower_p: float
    class1_upper_p: float
    class2_lower_p: float
    class2_upper_p: float

    def __post_init__(self):
        for name in ("class1_lower_p", "class1_upper_p", "class2_lower_p", "class2_upper_p"):
            p = getattr(self, name)
            if not (0.0 < p < 1.0):
                raise ValueError(f"{name} must lie in (0, 1), got {p!r}")
        if not self.class1_lower_p < self.class1_upper_p:
            raise ValueError("class1_lower_p must be below class1_upper_p")
        if not self.class2_lower_p < self.class2_upper_p:
            raise ValueError("class2_lower_p must be below class2_upper_p")

    @classmethod
    def symmetric(cls, alpha: float) -> "TestConfig":
        if not (0.0 < alpha < 0.5):
            raise ValueError(f"alpha must lie in (0, 0.5), got {alpha!r}")
        return cls(alpha, 1.0 - alpha, alpha, 1.0 - alpha)


# The three quantile settings of the spiral benchmark.
EXPERIMENT_CONFIGS: dict[str, TestConfig] = {
    "i": TestConfig(0.025, 0.975, 0.025, 0.975),
    "ii": TestConfig(0.05, 0.975, 0.025, 0.95),
    "iii": TestConfig(0.05, 0.99, 0.01, 0.95),
}

DEFAULT_ALPHAS = (0.01, 0.025, 0.05)


@dataclass(frozen=True)
class CalibratedTester:
    region1: AcceptanceRegion
    region2: AcceptanceRegion
    config: TestConfig

    def decide(self, t: float) -> Decision:
        return decide(t, self)

    def decide_batch(self, ts: Sequence[float]) -> list[Decision]:
        return decide_batch(ts, self)

    def decide_codes(self, ts) -> np.ndarray:
        return decide_codes(ts, self)

    @property
    def overlap(self) -> AcceptanceRegion | None:
        """Intersection of the two regions (the type I band), if nonempty."""
        lo = max(self.region1.lower, self.region2.lower)
        hi = min(self.region1.upper, self.region2.upper)
        return AcceptanceRegion(lo, hi) if lo <= hi else None


def calibrate(
    dist1: EmpiricalDistribution, dist2: EmpiricalDistribution, config: TestConfig
) -> CalibratedTester:
    """Acceptance regions from order-statistic quantiles of each class."""
    region1 = AcceptanceRegion(
        quantile(dist1, config.class1_lower_p), quantile(dist1, config.class1_upper_p)
    )
    region2 = AcceptanceRegion(
        quantile(dist2, config.class2_lower_p), quantile(dist2, config.class2_upper_p)
    )
    return CalibratedTester(region1, region2, config)


def decide(t: float, tester: CalibratedTester) -> Decision:
    if not math.isfinite(t):
        raise NonFiniteValue(f"test statistic must be finite, got {t!r}")
    return Decision.from_membership(t in tester.region1, t in tester.region2)


def decide_codes(ts, tester: CalibratedTester) -> np.ndarray:
    """Vectorised :func:`decide` returning integer codes (see ``Decision.code``).

    Works for arrays of any shape.
    """
    arr = np.asarray(ts, dtype=np.float64)
    bad = np.flatnonzero(~np.isfinite(arr.ravel()))
    if bad.size:
        i = int(bad[0])
        raise NonFiniteValue(f"non-finite test statistic at index {i}", index=i)
    r1, r2 = tester.region1, tester.region2
    in1 = (arr >= r1.lower) & (arr <= r1.upper)
    in2 = (arr >= r2.lower) & (arr <= r2.upper)
    return in1.astype(np.int8) | (in2.astype(np.int8) << 1)


def decide_batch(ts: Sequence[float], tester: CalibratedTester) -> list[Decision]:
    """Elementwise :func:`decide`, order preserved."""
    return [_BY_CODE[c] for c in decide_codes(ts, tester).ravel().tolist()]


def rejection_rates(
    dist: EmpiricalDistribution, region: AcceptanceRegion
) -> tuple[float, float]:
    """Fractions of ``dist``'s own samples below and above ``region``."""
    v = dist.sorted_values
    below = int(np.searchsorted(v, region.lower, side="left"))
    above = v.size - int(np.searchsorted(v, region.upper, side="right"))
    return below / v.size, above / v.size
