"""General regression neural network (Gaussian-weighted kernel average)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .radial import TrainingSet

DEFAULT_SIGMA = 2.0


@dataclass(frozen=True, eq=False)
class GrnnModel:
    """Stored training pairs plus the Gaussian spread ``sigma`` (pixels)."""

    samples: TrainingSet
    sigma: float

    def predict(self, queries):
        return grnn_predict_many(self, queries)


def grnn_train(ts, sigma=DEFAULT_SIGMA):
    """One-pass training: the model simply memorises ``ts``."""
    if ts is None or len(ts) == 0:
        raise ParameterError("GRNN needs at least one training sample")
    sigma = float(sigma)
    if not (sigma > 0 and math.isfinite(sigma)):
        raise ParameterError(f"sigma must be positive and finite, got {sigma}")
    return GrnnModel(ts, sigma)


def grnn_predict_many(model, queries):
    """Predict at each ``(row, col)`` in ``queries`` (shape ``(m, 2)``).

    Weights are ``exp(-(D_i^2 - min_j D_j^2) / (2 sigma^2))``; the shift
    cancels in the ratio and guarantees the nearest sample has weight 1, so
    the denominator can never underflow.
    """
    q = np.asarray(queries, dtype=np.float64).reshape(-1, 2)
    p = model.samples.coords.astype(np.float64)
    v = model.samples.values
    out = np.empty(len(q))
    # bound the (queries x samples) distance matrix to ~32 MB
    step = max(1, 4_000_000 // max(len(p), 1))
    for s in range(0, len(q), step):
        qs = q[s : s + step]
        d2 = (qs[:, None, 0] - p[None, :, 0]) ** 2 + (qs[:, None, 1] - p[None, :, 1]) ** 2
        d2 -= d2.min(axis=1, keepdims=True)
        w = np.exp(-d2 / (2.0 * model.sigma * model.sigma))
        out[s : s + step] = (w @ v) / w.sum(axis=1)
    # rounding can push the ratio a hair outside the hull of the targets
    return np.clip(out, v.min(), v.max())


def grnn_predict(model, q):
    """Predicted intensity at one coordinate ``q = (row, col)``."""
    return float(grnn_predict_many(model, [q])[0])
