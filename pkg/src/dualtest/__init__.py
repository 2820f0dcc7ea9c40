"""Binary classification with abstention from two quantile-based hypothesis tests.

A scalar classifier output ``t = g(x)`` is tested against the empirical
distribution of each class's training values.  Accepting exactly one class
assigns it; accepting both or neither abstains.
"""

from .empirical import EmpiricalDistribution, FeatureSample, ecdf, from_samples, histogram, quantile
from .metrics import SelectiveReport, evaluate
from .testing import (
    EXPERIMENT_CONFIGS,
    AcceptanceRegion,
    CalibratedTester,
    Decision,
    TestConfig,
    calibrate,
    decide,
    decide_batch,
)

__all__ = [
    "AcceptanceRegion",
    "CalibratedTester",
    "Decision",
    "EXPERIMENT_CONFIGS",
    "EmpiricalDistribution",
    "FeatureSample",
    "SelectiveReport",
    "TestConfig",
    "calibrate",
    "decide",
    "decide_batch",
    "ecdf",
    "evaluate",
    "from_samples",
    "histogram",
    "quantile",
]

__version__ = "0.1.0"
