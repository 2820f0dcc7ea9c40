"""Logistic stand-in for a neural feature extractor.

The model's pre-sigmoid output ``g(x) = w.x + b`` is the test statistic;
``sigmoid(g(x))`` is the predicted probability of label 1.  Training
minimises the class-reweighted cross-entropy

    L = -sum_n w_n [y_n log p_n + (1 - y_n) log(1 - p_n)]

with ``w_n = N2/N`` for label 0 and ``N1/N`` for label 1, so the rarer class
carries the larger per-sample weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, LengthMismatch, NonFiniteValue, SingleClassInput

PROB_EPS = 1e-12


@dataclass(frozen=True)
class WeightedBceSpec:
    n1: int  # label-0 count
    n2: int  # label-1 count

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError(f"both class counts must be positive, got ({self.n1}, {self.n2})")

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @classmethod
    def from_labels(cls, labels) -> "WeightedBceSpec":
        y = np.asarray(labels).ravel()
        if not np.all((y == 0) | (y == 1)):
            raise ValueError("labels must be 0 or 1")
        n2 = int(np.count_nonzero(y))
        n1 = int(y.size - n2)
        if n1 == 0 or n2 == 0:
            raise SingleClassInput("labels contain a single class")
        return cls(n1, n2)


def sample_weight(label: int, spec: WeightedBceSpec) -> float:
    if label == 0:
        return spec.n2 / spec.n
    if label == 1:
        return spec.n1 / spec.n
    raise ValueError(f"label must be 0 or 1, got {label!r}")


def sample_weights(labels, spec: WeightedBceSpec) -> np.ndarray:
    y = np.asarray(labels).ravel()
    return np.where(y == 0, spec.n2 / spec.n, spec.n1 / spec.n)


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    # split by sign so exp never overflows
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out if out.ndim else float(out)


def weighted_bce_loss(predictions, labels, spec: WeightedBceSpec) -> float:
    """Reweighted cross-entropy; probabilities are clamped to ``[eps, 1 - eps]``."""
    p = np.asarray(predictions, dtype=np.float64).ravel()
    y = np.asarray(labels, dtype=np.float64).ravel()
    if p.size != y.size:
        raise LengthMismatch(f"{p.size} predictions but {y.size} labels")
    p = np.clip(p, PROB_EPS, 1.0 - PROB_EPS)
    w = sample_weights(y, spec)
    return float(-np.sum(w * (y * np.log(p) + (1.0 - y) * np.log1p(-p))))


@dataclass(frozen=True, eq=False)
class LogisticModel:
    weights: np.ndarray
    bias: float = 0.0

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64).ravel()
        if not (np.all(np.isfinite(w)) and np.isfinite(self.bias)):
            raise NonFiniteValue("model parameters must be finite")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", float(self.bias))

    @classmethod
    def zeros(cls, dim: int) -> "LogisticModel":
        return cls(np.zeros(dim), 0.0)

    def logit(self, x) -> float:
        return logit(self, x)

    def logits(self, features) -> np.ndarray:
        x = _features(features, self.weights.size)
        return x @ self.weights + self.bias

    def predict_proba(self, features) -> np.ndarray:
        return sigmoid(self.logits(features))


def _features(features, dim: int | None = None) -> np.ndarray:
    x = np.asarray(features, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None] if dim == 1 or dim is None else x[None, :]
    if x.ndim != 2:
        raise DimensionMismatch("features must be a 2-D array")
    if dim is not None and x.shape[1] != dim:
        raise DimensionMismatch(f"expected {dim} features, got {x.shape[1]}")
    return x


def logit(model: LogisticModel, x) -> float:
    """Pre-sigmoid value ``w.x + b`` for one feature vector."""
    v = np.asarray(x, dtype=np.float64).ravel()
    if v.size != model.weights.size:
        raise DimensionMismatch(f"expected {model.weights.size} features, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteValue("feature vector must be finite")
    return float(v @ model.weights + model.bias)


def loss_and_gradient(model: LogisticModel, features, labels, spec: WeightedBceSpec):
    """Weighted loss and its gradient with respect to ``(weights, bias)``.

    With unclamped probabilities the gradient is ``X.T @ (w * (p - y))``.
    """
    x = _features(features, model.weights.size)
    y = np.asarray(labels, dtype=np.float64).ravel()
    p = sigmoid(x @ model.weights + model.bias)
    w = sample_weights(y, spec)
    resid = w * (p - y)
    return weighted_bce_loss(p, y, spec), x.T @ resid, float(resid.sum())


def train_logistic(features, labels, spec: WeightedBceSpec | None = None, lr: float = 1e-3,
                   epochs: int = 1000, seed: int = 0) -> tuple[LogisticModel, list[float]]:
    """Full-batch gradient descent from a zero initialisation.

    ``seed`` is accepted for interface symmetry with the other trainers; the
    procedure itself draws no random numbers.  Returns the model and the loss
    recorded before each epoch plus the final loss.
    """
    x = _features(features)
    y = np.asarray(labels).ravel()
    if x.shape[0] != y.size:
        raise DimensionMismatch(f"{x.shape[0]} rows but {y.size} labels")
    if spec is None:
        spec = WeightedBceSpec.from_labels(y)
    elif np.all(y == y[0]):
        raise SingleClassInput("labels contain a single class")
    if lr <= 0:
        raise ValueError("lr must be positive")
    if epochs < 0:
        raise ValueError("epochs must be nonnegative")

    model = LogisticModel.zeros(x.shape[1])
    history = []
    for _ in range(epochs):
        loss, gw, gb = loss_and_gradient(model, x, y, spec)
        history.append(loss)
        model = LogisticModel(model.weights - lr * gw, model.bias - lr * gb)
    history.append(loss_and_gradient(model, x, y, spec)[0])
    return model, history
