"""Soft-margin RBF-kernel SVM trained with sequential minimal optimization.

The trained model's discriminant

    g(x) = sum_l (alpha_l * y_l) * exp(-gamma * ||x - x_l||^2) + b

is the test statistic for the spiral benchmark.  Training solves the dual

    max_alpha  sum_i alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
    s.t.       0 <= alpha_i <= C,  sum_i alpha_i y_i = 0

by repeatedly optimizing the maximally KKT-violating pair, stopping when the
violation gap falls to ``tolerance``.  At that point every training point
meets its KKT condition to within ``tolerance``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadRange, DimensionMismatch, NonFiniteValue, SingleClassInput

SUPPORT_THRESHOLD = 1e-8
_TAU = 1e-12  # floor for the pair curvature (duplicate points give zero)
_GRID_CHUNK = 4096


@dataclass(frozen=True)
class KernelParams:
    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"gamma must be positive and finite, got {self.gamma!r}")


@dataclass(frozen=True)
class SmoSettings:
    c: float = 10.0
    tolerance: float = 1e-3
    max_passes: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError(f"c must be positive, got {self.c!r}")
        if not (math.isfinite(self.tolerance) and self.tolerance > 0):
            raise ValueError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.max_passes < 1:
            raise ValueError("max_passes must be at least 1")


@dataclass(frozen=True, eq=False)
class SvmModel:
    """A trained (or hand-built) kernel machine.

    ``duals`` holds the signed products ``alpha_l * y_l``.  ``support_indices``
    maps each support vector back to its row in the training set (empty for
    hand-built models).  ``objective_trace`` is filled only when training was
    asked to record it.
    """

    support_vectors: np.ndarray
    duals: np.ndarray
    bias: float
    kernel: KernelParams
    c: float = math.inf
    converged: bool = True
    iterations: int = 0
    support_indices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    objective_trace: tuple[float, ...] = ()

    def __post_init__(self):
        sv = np.atleast_2d(np.asarray(self.support_vectors, dtype=np.float64))
        duals = np.asarray(self.duals, dtype=np.float64).ravel()
        if sv.shape[0] != duals.size or duals.size < 1:
            raise DimensionMismatch(
                f"{sv.shape[0]} support vectors but {duals.size} dual coefficients"
            )
        object.__setattr__(self, "support_vectors", sv)
        object.__setattr__(self, "duals", duals)
        object.__setattr__(self, "bias", float(self.bias))

    @property
    def n_support(self) -> int:
        return int(self.duals.size)

    @property
    def dim(self) -> int:
        return int(self.support_vectors.shape[1])

    def decision_function(self, x) -> float:
        return decision_function(self, x)

    def decision_values(self, points) -> np.ndarray:
        return decision_values(self, points)

    def predict(self, points) -> np.ndarray:
        """Plain SVM labels: +1 where g >= 0, else -1."""
        return np.where(decision_values(self, points) >= 0, 1, -1)


def rbf_kernel_matrix(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    """``exp(-gamma * ||a_i - b_j||^2)`` with distances formed from differences."""
    diff = a[:, None, :] - b[None, :, :]
    return np.exp(-gamma * np.einsum("ijk,ijk->ij", diff, diff))


def _as_points(points, name: str = "points") -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be a 2-D array of shape (n, d)")
    if not np.all(np.isfinite(arr)):
        i = int(np.flatnonzero(~np.all(np.isfinite(arr), axis=1))[0])
        raise NonFiniteValue(f"non-finite coordinate in {name} row {i}", index=i)
    return arr


def dual_objective(alpha: np.ndarray, labels: np.ndarray, kmat: np.ndarray) -> float:
    ay = alpha * labels
    return float(alpha.sum() - 0.5 * ay @ kmat @ ay)


def train(points, labels, kernel: KernelParams, settings: SmoSettings | None = None,
          *, record_objective: bool = False) -> SvmModel:
    """Fit an RBF SVM by SMO.

    Parameters
    ----------
    points : array_like, shape (n, d)
    labels : array_like of +1/-1, shape (n,)
    kernel : KernelParams
    settings : SmoSettings, optional
        Box constraint, stopping tolerance, iteration cap and seed.  The seed
        fixes the order in which candidates are scanned, which only matters
        for breaking exact ties in the pair selection.
    record_objective : bool
        Store the dual objective after every pair update in
        ``model.objective_trace``.

    Returns
    -------
    SvmModel
        ``converged`` is False when ``max_passes * n`` pair updates ran out
        before the violation gap reached the tolerance.
    """
    settings = settings or SmoSettings()
    x = _as_points(points)
    y = np.asarray(labels, dtype=np.float64).ravel()
    n = x.shape[0]
    if y.size != n:
        raise DimensionMismatch(f"{n} points but {y.size} labels")
    if n < 2:
        raise SingleClassInput("need at least two training points")
    if not np.all((y == 1) | (y == -1)):
        raise ValueError("labels must be +1 or -1")
    if np.all(y == y[0]):
        raise SingleClassInput("training labels contain a single class")

    c, tol = settings.c, settings.tolerance
    order = np.random.default_rng(settings.seed).permutation(n)
    xs, ys = x[order], y[order]
    kmat = rbf_kernel_matrix(xs, xs, kernel.gamma)
    diag = np.diag(kmat).copy()

    alpha = np.zeros(n)
    f0 = np.zeros(n)  # sum_j alpha_j y_j K_ij
    trace: list[float] = []
    objective = 0.0
    max_iter = settings.max_passes * n
    iterations = 0
    converged = False

    while True:
        r = ys - f0
        up = ((ys > 0) & (alpha < c)) | ((ys < 0) & (alpha > 0))
        low = ((ys > 0) & (alpha > 0)) | ((ys < 0) & (alpha < c))
        i = int(np.argmax(np.where(up, r, -np.inf)))
        j = int(np.argmin(np.where(low, r, np.inf)))
        gap = r[i] - r[j]
        if gap <= tol:
            converged = True
            break
        if iterations >= max_iter:
            break

        yi, yj = ys[i], ys[j]
        ai, aj = alpha[i], alpha[j]
        if yi != yj:
            lo, hi = max(0.0, aj - ai), min(c, c + aj - ai)
        else:
            lo, hi = max(0.0, ai + aj - c), min(c, ai + aj)
        eta = max(diag[i] + diag[j] - 2.0 * kmat[i, j], _TAU)
        aj_new = min(max(aj + yj * (r[j] - r[i]) / eta, lo), hi)
        ai_new = ai + yi * yj * (aj - aj_new)
        # snap to the box so bound membership is exact
        ai_new = min(max(ai_new, 0.0), c)
        if ai_new < 1e-12 * c:
            ai_new = 0.0
        elif ai_new > c * (1 - 1e-12):
            ai_new = c
        alpha[i], alpha[j] = ai_new, aj_new
        di, dj = (ai_new - ai) * yi, (aj_new - aj) * yj
        f0 += di * kmat[:, i] + dj * kmat[:, j]
        iterations += 1
        if record_objective:
            objective = float(alpha.sum() - 0.5 * np.dot(alpha * ys, f0))
            trace.append(objective)

    r = ys - f0
    free = (alpha > 0) & (alpha < c)
    if np.any(free):
        bias = float(np.mean(r[free]))
    else:
        up = ((ys > 0) & (alpha < c)) | ((ys < 0) & (alpha > 0))
        low = ((ys > 0) & (alpha > 0)) | ((ys < 0) & (alpha < c))
        bias = 0.5 * (float(np.max(r[up], initial=-np.inf)) + float(np.min(r[low], initial=np.inf)))
        if not math.isfinite(bias):
            bias = float(np.max(r[up])) if np.any(up) else float(np.min(r[low]))

    keep = alpha > SUPPORT_THRESHOLD
    original_index = order[keep]
    sort = np.argsort(original_index, kind="stable")
    return SvmModel(
        support_vectors=xs[keep][sort],
        duals=(alpha * ys)[keep][sort],
        bias=bias,
        kernel=kernel,
        c=c,
        converged=converged,
        iterations=iterations,
        support_indices=original_index[sort].astype(np.int64),
        objective_trace=tuple(trace),
    )


def decision_values(model: SvmModel, points) -> np.ndarray:
    """Vectorised discriminant over an ``(n, d)`` array of points."""
    x = _as_points(points)
    if x.shape[1] != model.dim:
        raise DimensionMismatch(f"expected {model.dim}-D points, got {x.shape[1]}-D")
    out = np.empty(x.shape[0])
    for start in range(0, x.shape[0], _GRID_CHUNK):
        block = x[start:start + _GRID_CHUNK]
        kmat = rbf_kernel_matrix(block, model.support_vectors, model.kernel.gamma)
        out[start:start + _GRID_CHUNK] = kmat @ model.duals + model.bias
    return out


def decision_function(model: SvmModel, x) -> float:
    """``g(x)`` for a single point."""
    arr = np.asarray(x, dtype=np.float64).ravel()
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValue(f"query point must be finite, got {arr!r}")
    return float(decision_values(model, arr[None, :])[0])


def grid_centers(lo: float, hi: float, resolution: int) -> np.ndarray:
    step = (hi - lo) / resolution
    return lo + (np.arange(resolution) + 0.5) * step


def _check_range(rng, name):
    lo, hi = (float(v) for v in rng)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise BadRange(f"{name} must satisfy lo < hi, got {rng!r}")
    return lo, hi


def decision_grid(model: SvmModel, x_range, y_range, resolution: int) -> np.ndarray:
    """``g`` at the centres of a ``resolution x resolution`` grid of cells.

    Row ``i`` holds the cells with the ``i``-th smallest y-coordinate; column
    ``j`` the ``j``-th smallest x-coordinate.
    """
    x_lo, x_hi = _check_range(x_range, "x_range")
    y_lo, y_hi = _check_range(y_range, "y_range")
    if resolution < 2:
        raise BadRange(f"resolution must be at least 2, got {resolution}")
    if model.dim != 2:
        raise DimensionMismatch("decision_grid needs a model over 2-D points")
    xc = grid_centers(x_lo, x_hi, resolution)
    yc = grid_centers(y_lo, y_hi, resolution)
    gx, gy = np.meshgrid(xc, yc)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    return decision_values(model, pts).reshape(resolution, resolution)


def kkt_residuals(model: SvmModel, points, labels) -> np.ndarray:
    """Per-point KKT violation of a trained model on its training set.

    Zero means the point's condition holds exactly; the value is how far
    ``y * g`` sits on the wrong side of 1 given the point's multiplier.
    """
    x = _as_points(points)
    y = np.asarray(labels, dtype=np.float64).ravel()
    alpha = np.zeros(x.shape[0])
    alpha[model.support_indices] = np.abs(model.duals)
    margin = y * decision_values(model, x)
    at_zero = alpha <= SUPPORT_THRESHOLD
    at_c = alpha >= model.c * (1 - 1e-12)
    free = ~at_zero & ~at_c
    res = np.zeros_like(margin)
    res[at_zero] = np.maximum(0.0, 1.0 - margin[at_zero])
    res[free] = np.abs(margin[free] - 1.0)
    res[at_c] = np.maximum(0.0, margin[at_c] - 1.0)
    return res
