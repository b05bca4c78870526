"""Training-band selection around damaged pixels.

An R-by-R average filter spreads the influence of a damaged pixel over every
pixel within Chebyshev distance ``R // 2``.  Blurring the image and its
masked copy and keeping the nonzero part of their difference therefore picks
out exactly the known pixels in that neighbourhood.  The band is computed
from the damage indicator directly, which gives the same set without
depending on what intensities the damaged pixels happen to hold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyTrainingSetError, ParameterError
from .image import check_same_shape, window_sum


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """Known pixels feeding a regressor: ``coords[i] = (row, col)`` -> ``values[i]``."""

    coords: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=np.int64).reshape(-1, 2)
        values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if len(coords) != len(values):
            raise ParameterError("coords and values must have the same length")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    @classmethod
    def from_pairs(cls, pairs):
        pairs = list(pairs)
        return cls([p for p, _ in pairs], [v for _, v in pairs])


def band_radius(R):
    """Chebyshev half-width ``R // 2`` reached by an R-by-R average filter."""
    if isinstance(R, bool) or int(R) != R:
        raise ParameterError(f"radius must be an integer, got {R!r}")
    R = int(R)
    if R < 3 or R % 2 == 0:
        raise ParameterError(f"radius R must be odd and >= 3, got {R}")
    return R // 2


def max_radius(shape):
    """Largest odd R whose half-width still fits inside the image."""
    return 2 * min(shape) - 1


def check_radius(R, shape):
    half = band_radius(R)
    if half >= min(shape):
        raise ParameterError(
            f"radius R={R} too large for a {shape[1]}x{shape[0]} image "
            f"(R // 2 must be < {min(shape)})"
        )
    return half


def _as_focus_coords(focus, shape):
    f = np.asarray(focus)
    if f.dtype == bool:
        if f.shape != tuple(shape):
            raise ParameterError(f"focus grid shape {f.shape} does not match {tuple(shape)}")
        return np.argwhere(f)
    return f.astype(np.int64).reshape(-1, 2)


def _band_window(known, focus_coords, half):
    """Band of a focus set, evaluated only on its padded bounding box.

    Returns the band coordinates in row-major order.
    """
    H, W = known.shape
    r0 = max(int(focus_coords[:, 0].min()) - half, 0)
    r1 = min(int(focus_coords[:, 0].max()) + half + 1, H)
    c0 = max(int(focus_coords[:, 1].min()) - half, 0)
    c1 = min(int(focus_coords[:, 1].max()) + half + 1, W)
    indicator = np.zeros((r1 - r0, c1 - c0), dtype=np.int64)
    indicator[focus_coords[:, 0] - r0, focus_coords[:, 1] - c0] = 1
    hit = (window_sum(indicator, half) > 0) & known[r0:r1, c0:c1]
    rows, cols = np.nonzero(hit)
    return np.column_stack([rows + r0, cols + c0])


def band_coords(mask, R, focus=None):
    """Row-major ``(n, 2)`` array of band coordinates (see ``compute_band``)."""
    known = mask.known if hasattr(mask, "known") else np.asarray(mask, dtype=bool)
    half = check_radius(R, known.shape)
    if focus is None:
        focus_coords = np.argwhere(~known)
    else:
        focus_coords = _as_focus_coords(focus, known.shape)
    if len(focus_coords) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    return _band_window(known, focus_coords, half)


def compute_band(mask, R, focus=None):
    """Known pixels within Chebyshev distance ``R // 2`` of the damage.

    Parameters
    ----------
    mask : DamageMask
    R : int
        Odd filter size, ``R >= 3`` and ``R // 2 < min(height, width)``.
    focus : array_like, optional
        Damaged coordinates (``(n, 2)`` array or boolean grid) to measure the
        distance from instead of the whole damaged set.

    Returns
    -------
    numpy.ndarray of bool, shape (height, width)
        True on band pixels.  Band and damage never overlap.
    """
    out = np.zeros(mask.shape, dtype=bool)
    coords = band_coords(mask, R, focus)
    out[coords[:, 0], coords[:, 1]] = True
    return out


def select_training(img, mask, R, focus=None):
    """Pair every band coordinate with its intensity, in row-major order."""
    check_same_shape("select_training", img, mask)
    coords = band_coords(mask, R, focus)
    if len(coords) == 0:
        raise EmptyTrainingSetError(f"no known pixels within the R={R} band of the damage")
    return TrainingSet(coords, img.pixels[coords[:, 0], coords[:, 1]])
