"""Mean squared error and peak signal-to-noise ratio."""

import math

import numpy as np

from .errors import ParameterError
from .image import check_same_shape


def _check_pair(original, test):
    check_same_shape("metric", original, test)
    if original.bit_depth != test.bit_depth:
        raise ParameterError(
            f"bit depth mismatch: {original.bit_depth} vs {test.bit_depth}"
        )


def mse(original, test):
    """Mean squared error over all M x N pixels (not just the damaged ones)."""
    _check_pair(original, test)
    diff = original.pixels.astype(np.int64) - test.pixels.astype(np.int64)
    # integer sum is exact; a single division keeps the result correctly rounded
    total = int(np.sum(diff * diff))
    return total / diff.size


def psnr_from_mse(err, bit_depth=8):
    if err < 0:
        raise ParameterError(f"MSE must be non-negative, got {err}")
    if err == 0:
        return math.inf
    peak = float((1 << bit_depth) - 1)
    return 10.0 * math.log10(peak * peak / err)


def psnr(original, test):
    """PSNR in dB, ``10 log10((2^n - 1)^2 / MSE)``; ``inf`` for identical images."""
    return psnr_from_mse(mse(original, test), original.bit_depth)
