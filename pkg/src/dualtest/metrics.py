"""Coverage and confusion-matrix metrics over the non-abstained decisions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import LengthMismatch
from .testing import Decision


def _ratio(num: int, den: int) -> float | None:
    # None marks an undefined 0/0 ratio
    return num / den if den else None


@dataclass(frozen=True)
class SelectiveReport:
    total: int
    abstained_overlap: int
    abstained_outlier: int
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def abstained(self) -> int:
        return self.abstained_overlap + self.abstained_outlier

    @property
    def decided(self) -> int:
        return self.total - self.abstained

    @property
    def coverage(self) -> float:
        return 1.0 - self.abstained / self.total

    @property
    def accuracy(self) -> float | None:
        return _ratio(self.tp + self.tn, self.decided)

    @property
    def recall(self) -> float | None:
        return _ratio(self.tp, self.tp + self.fn)

    @property
    def precision(self) -> float | None:
        return _ratio(self.tp, self.tp + self.fp)

    @property
    def specificity(self) -> float | None:
        return _ratio(self.tn, self.tn + self.fp)

    @property
    def f1(self) -> float | None:
        p, r = self.precision, self.recall
        if p is None or r is None or p + r == 0:
            return None
        return 2 * p * r / (p + r)

    def as_row(self) -> dict[str, float | None]:
        return {
            "coverage": self.coverage,
            "accuracy": self.accuracy,
            "recall": self.recall,
            "precision": self.precision,
            "specificity": self.specificity,
            "f1": self.f1,
        }


def evaluate(decisions: Sequence[Decision], truths: Sequence[int], positive_class: int = 1) -> SelectiveReport:
    """Score decisions against 0/1 truths; abstentions only affect coverage.

    ``positive_class`` picks which label counts as positive for recall,
    precision, specificity and F1.
    """
    if len(decisions) != len(truths):
        raise LengthMismatch(f"{len(decisions)} decisions but {len(truths)} truths")
    if not decisions:
        raise LengthMismatch("need at least one decision")
    if positive_class not in (0, 1):
        raise ValueError("positive_class must be 0 or 1")
    overlap = outlier = tp = fp = tn = fn = 0
    for d, y in zip(decisions, truths):
        y = int(y)
        if y not in (0, 1):
            raise ValueError(f"truth labels must be 0 or 1, got {y}")
        if d is Decision.UNCERTAIN_OVERLAP:
            overlap += 1
            continue
        if d is Decision.UNCERTAIN_OUTLIER:
            outlier += 1
            continue
        pred_pos = d.predicted_label == positive_class
        true_pos = y == positive_class
        if pred_pos:
            if true_pos:
                tp += 1
            else:
                fp += 1
        elif true_pos:
            fn += 1
        else:
            tn += 1
    return SelectiveReport(len(decisions), overlap, outlier, tp, fp, tn, fn)
