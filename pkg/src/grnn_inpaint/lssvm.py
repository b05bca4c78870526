"""Least-squares SVM regression and the four LS-SVM inpainting modes.

Training solves the dual KKT system

    [ 0   1^T           ] [b]     [0]
    [ 1   Omega + I/gamma ] [alpha] = [y]

with ``Omega[i, j] = K(x_i, x_j)``; prediction is ``sum_i alpha_i K(q, x_i) + b``.

Modes:

* RD  -- one 1-D model per image row, trained on that row's known pixels.
* CD  -- the same along columns.
* RC  -- average of the RD and CD predictions.
* 2-kernel -- a single model on ``(row, col)`` inputs with an additive kernel
  ``exp(-dr^2/s_r^2) + exp(-dc^2/s_c^2)`` (or a plain 2-D RBF).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg
from scipy import ndimage

from .errors import ParameterError, TrainingError, UnfillableError
from .image import GrayImage, check_same_shape, to_pixels

DEFAULT_GAMMA = 100.0
DEFAULT_BANDWIDTH = 5.0
DEFAULT_CAP = 4000
PIVOT_TOL = 1e-12

KERNEL_KINDS = ("rbf1d", "rbf2d", "additive2d")
MODES = ("rd", "cd", "rc", "two_kernel")


@dataclass(frozen=True)
class Kernel:
    """Kernel kind plus bandwidth(s).

    ``bandwidth`` is a scalar for the RBF kinds; for ``additive2d`` it may be
    a ``(row_bandwidth, col_bandwidth)`` pair or a scalar used for both.
    """

    kind: str = "rbf1d"
    bandwidth: float | tuple = DEFAULT_BANDWIDTH

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ParameterError(f"kernel kind must be one of {KERNEL_KINDS}, got {self.kind!r}")
        bw = self.bandwidth
        if self.kind == "additive2d":
            bw = tuple(float(b) for b in np.broadcast_to(np.asarray(bw, dtype=float), (2,)))
        else:
            if np.ndim(bw) != 0:
                raise ParameterError(f"{self.kind} takes a scalar bandwidth")
            bw = float(bw)
        for b in np.atleast_1d(bw):
            if not (b > 0 and math.isfinite(b)):
                raise ParameterError(f"kernel bandwidth must be positive and finite, got {b}")
        object.__setattr__(self, "bandwidth", bw)

    @property
    def dim(self):
        return 1 if self.kind == "rbf1d" else 2


def _check_dims(k, X, what):
    if X.shape[1] != k.dim:
        raise ParameterError(f"{what}: {k.kind} kernel expects {k.dim}-D inputs, got {X.shape[1]}-D")


def gram(k, X, Y):
    """Kernel matrix ``K[i, j] = k(X[i], Y[j])``."""
    X = np.asarray(X, dtype=np.float64).reshape(len(X), -1)
    Y = np.asarray(Y, dtype=np.float64).reshape(len(Y), -1)
    _check_dims(k, X, "gram")
    _check_dims(k, Y, "gram")
    if k.kind == "additive2d":
        sr, sc = k.bandwidth
        dr = X[:, None, 0] - Y[None, :, 0]
        dc = X[:, None, 1] - Y[None, :, 1]
        return np.exp(-(dr * dr) / (sr * sr)) + np.exp(-(dc * dc) / (sc * sc))
    d2 = np.zeros((len(X), len(Y)))
    for a in range(k.dim):
        diff = X[:, None, a] - Y[None, :, a]
        d2 += diff * diff
    return np.exp(-d2 / (k.bandwidth * k.bandwidth))


def kernel_eval(k, u, v):
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    v = np.atleast_1d(np.asarray(v, dtype=np.float64))
    if u.shape != v.shape:
        raise ParameterError(f"kernel_eval: dimension mismatch {u.shape} vs {v.shape}")
    return float(gram(k, u[None, :], v[None, :])[0, 0])


@dataclass(frozen=True, eq=False)
class LssvmModel:
    inputs: np.ndarray
    targets: np.ndarray
    alphas: np.ndarray
    bias: float
    kernel: Kernel
    gamma: float

    def predict(self, queries):
        return lssvm_predict_many(self, queries)

    def kkt_residual(self):
        """``max |Omega a + a/gamma + b - y|`` over the training points."""
        omega = gram(self.kernel, self.inputs, self.inputs)
        r = omega @ self.alphas + self.alphas / self.gamma + self.bias - self.targets
        return float(np.max(np.abs(r)))


def _merge_duplicates(X, y):
    uniq, inverse = np.unique(X, axis=0, return_inverse=True)
    if len(uniq) == len(X):
        return X, y
    inverse = inverse.reshape(-1)
    sums = np.bincount(inverse, weights=y, minlength=len(uniq))
    counts = np.bincount(inverse, minlength=len(uniq))
    return uniq, sums / counts


def lssvm_train(inputs, targets, kernel, gamma=DEFAULT_GAMMA):
    """Fit an LS-SVM by solving its KKT system densely (LU, partial pivoting).

    Duplicate inputs are merged (targets averaged) first.  Targets are
    centred before the solve; the mean goes into the bias, which makes a
    constant target vector produce ``alpha = 0`` exactly.
    """
    X = np.asarray(inputs, dtype=np.float64)
    X = X.reshape(len(X), -1) if X.ndim != 1 else X[:, None]
    y = np.asarray(targets, dtype=np.float64).reshape(-1)
    if len(X) == 0 or len(X) != len(y):
        raise ParameterError(f"need matching non-empty inputs/targets, got {len(X)} and {len(y)}")
    gamma = float(gamma)
    if not (gamma > 0 and math.isfinite(gamma)):
        raise ParameterError(f"gamma must be positive and finite, got {gamma}")
    _check_dims(kernel, X, "lssvm_train")
    X, y = _merge_duplicates(X, y)
    n = len(X)

    mean = float(np.mean(y))
    yc = y - mean
    if not np.any(yc):
        return LssvmModel(X, y, np.zeros(n), mean, kernel, gamma)

    A = np.empty((n + 1, n + 1))
    A[0, 0] = 0.0
    A[0, 1:] = 1.0
    A[1:, 0] = 1.0
    A[1:, 1:] = gram(kernel, X, X)
    A[1:, 1:][np.diag_indices(n)] += 1.0 / gamma
    rhs = np.concatenate([[0.0], yc])

    lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    scale = np.max(np.abs(A))
    if np.min(np.abs(np.diag(lu))) < PIVOT_TOL * scale:
        raise TrainingError(
            "LS-SVM system is numerically singular; increase gamma or remove duplicate inputs"
        )
    sol = scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)
    for _ in range(2):
        sol += scipy.linalg.lu_solve((lu, piv), rhs - A @ sol, check_finite=False)
    return LssvmModel(X, y, sol[1:], mean + float(sol[0]), kernel, gamma)


def lssvm_predict_many(model, queries):
    Q = np.asarray(queries, dtype=np.float64)
    if Q.ndim == 1 and model.kernel.dim == 1:
        Q = Q[:, None]
    if Q.ndim != 2 or Q.shape[1] != model.inputs.shape[1]:
        raise ParameterError(
            f"queries have shape {Q.shape}, model expects (m, {model.inputs.shape[1]})"
        )
    if not np.any(model.alphas):
        return np.full(len(Q), model.bias)
    out = np.empty(len(Q))
    step = max(1, 4_000_000 // len(model.inputs))
    for s in range(0, len(Q), step):
        out[s : s + step] = gram(model.kernel, Q[s : s + step], model.inputs) @ model.alphas
    return out + model.bias


def lssvm_predict(model, q):
    q = np.atleast_1d(np.asarray(q, dtype=np.float64))
    if q.shape != (model.inputs.shape[1],):
        raise ParameterError(
            f"query has dimension {q.shape[0]}, model expects {model.inputs.shape[1]}"
        )
    return float(lssvm_predict_many(model, q[None, :])[0])


# --- inpainting modes --------------------------------------------------------


class FillResult(NamedTuple):
    """Output of an LS-SVM inpainting mode.

    ``values`` holds the pre-rounding predictions at filled pixels and NaN
    everywhere else; ``fallback`` lists damaged ``(row, col)`` pixels no model
    could reach, which are left unchanged in ``image``.
    """

    image: GrayImage
    fallback: np.ndarray
    values: np.ndarray


def _default_kernel(kernel, dim):
    if kernel is None:
        return Kernel("rbf1d" if dim == 1 else "additive2d", DEFAULT_BANDWIDTH)
    return kernel


def _assemble(img, known, values):
    """Round predictions into ``img`` wherever ``values`` is finite."""
    filled = ~np.isnan(values)
    px = np.array(img.pixels, dtype=np.int64)
    px[filled] = to_pixels(values[filled], img.bit_depth)
    fallback = np.argwhere(~known & ~filled)
    return FillResult(GrayImage(px, img.bit_depth), fallback, values)


def _fill_line(pixels, known, kernel, gamma):
    """Predict the damaged entries of one 1-D line; NaN where impossible."""
    out = np.full(len(pixels), np.nan)
    miss = ~known
    if not miss.any() or not known.any():
        return out
    pos = np.arange(len(pixels), dtype=np.float64)
    model = lssvm_train(pos[known], pixels[known], kernel, gamma)
    out[miss] = lssvm_predict_many(model, pos[miss])
    return out


def _line_values(pixels, known, kernel, gamma, threads=1):
    """Row-wise predictions for a whole grid (rows processed independently)."""
    pixels = np.asarray(pixels, dtype=np.float64)
    jobs = range(pixels.shape[0])

    def work(i):
        return _fill_line(pixels[i], known[i], kernel, gamma)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(work, jobs))
    else:
        rows = [work(i) for i in jobs]
    return np.vstack(rows)


def _check_1d_kernel(kernel):
    kernel = _default_kernel(kernel, 1)
    if kernel.kind != "rbf1d":
        raise ParameterError(f"row/column modes need an rbf1d kernel, got {kernel.kind}")
    return kernel


def rd_values(img, mask, kernel=None, gamma=DEFAULT_GAMMA, threads=1):
    check_same_shape("rd_inpaint", img, mask)
    return _line_values(img.pixels, mask.known, _check_1d_kernel(kernel), gamma, threads)


def cd_values(img, mask, kernel=None, gamma=DEFAULT_GAMMA, threads=1):
    check_same_shape("cd_inpaint", img, mask)
    return _line_values(img.pixels.T, mask.known.T, _check_1d_kernel(kernel), gamma, threads).T


def rd_inpaint(img, mask, kernel=None, gamma=DEFAULT_GAMMA, threads=1):
    """Fill damage row by row with one 1-D LS-SVM per row.

    Rows without any known pixel are left untouched and listed in
    ``FillResult.fallback``.
    """
    return _assemble(img, mask.known, rd_values(img, mask, kernel, gamma, threads))


def cd_inpaint(img, mask, kernel=None, gamma=DEFAULT_GAMMA, threads=1):
    """Column-direction counterpart of :func:`rd_inpaint`."""
    return _assemble(img, mask.known, cd_values(img, mask, kernel, gamma, threads))


def rc_inpaint(img, mask, kernel=None, gamma=DEFAULT_GAMMA, threads=1):
    """Average of the row and column predictions, rounded once.

    Where only one direction produced a value it is used alone.
    """
    rd = rd_values(img, mask, kernel, gamma, threads)
    cd = cd_values(img, mask, kernel, gamma, threads)
    both = ~np.isnan(rd) & ~np.isnan(cd)
    values = np.where(np.isnan(rd), cd, rd)
    values[both] = (rd[both] + cd[both]) / 2.0
    return _assemble(img, mask.known, values)


def nearest_known(known, cap):
    """Up to ``cap`` known coordinates, closest to the damage first.

    Distance is Chebyshev distance to the nearest damaged pixel; ties are
    broken row-major, so the selection is deterministic.
    """
    coords = np.argwhere(known)
    if len(coords) <= cap:
        return coords
    dist = ndimage.distance_transform_cdt(known, metric="chessboard")
    d = dist[coords[:, 0], coords[:, 1]]
    # argwhere is row-major already, so a stable sort on distance keeps ties ordered
    order = np.argsort(d, kind="stable")
    return coords[np.sort(order[:cap])]


def two_kernel_inpaint(img, mask, kernel=None, gamma=DEFAULT_GAMMA, cap=DEFAULT_CAP):
    """One LS-SVM over 2-D ``(row, col)`` inputs for the whole image.

    When more than ``cap`` pixels are known, training keeps the ``cap``
    known pixels nearest to the damage.
    """
    check_same_shape("two_kernel_inpaint", img, mask)
    kernel = _default_kernel(kernel, 2)
    if kernel.dim != 2:
        raise ParameterError(f"2-kernel mode needs a 2-D kernel, got {kernel.kind}")
    if cap < 1:
        raise ParameterError(f"training cap must be positive, got {cap}")
    known = mask.known
    values = np.full(img.shape, np.nan)
    miss = np.argwhere(~known)
    if len(miss) == 0:
        return _assemble(img, known, values)
    if not known.any():
        raise UnfillableError("2-kernel LS-SVM: image has no known pixels to train on")
    train = nearest_known(known, cap)
    model = lssvm_train(train, img.pixels[train[:, 0], train[:, 1]], kernel, gamma)
    values[miss[:, 0], miss[:, 1]] = lssvm_predict_many(model, miss)
    return _assemble(img, known, values)
