"""Grayscale image and damage-mask containers plus the average filter."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ShapeMismatchError


def _frozen(a):
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Integer intensity grid of shape ``(height, width)``.

    ``pixels[row, col]`` holds values in ``[0, 2**bit_depth - 1]``; the array
    is copied on construction and made read-only.
    """

    pixels: np.ndarray
    bit_depth: int = 8

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ParameterError(f"pixels must be a non-empty 2-D grid, got shape {px.shape}")
        if not 1 <= int(self.bit_depth) <= 16:
            raise ParameterError(f"bit_depth must be in [1, 16], got {self.bit_depth}")
        if px.dtype.kind == "f":
            if not np.all(np.isfinite(px)) or np.any(px != np.round(px)):
                raise ParameterError("pixels must be integers")
        elif px.dtype.kind not in "iub":
            raise ParameterError(f"unsupported pixel dtype {px.dtype}")
        px = px.astype(np.int64)
        maxval = (1 << int(self.bit_depth)) - 1
        if px.size and (px.min() < 0 or px.max() > maxval):
            raise ParameterError(
                f"pixel values must lie in [0, {maxval}] for bit_depth {self.bit_depth}"
            )
        object.__setattr__(self, "pixels", _frozen(px.astype(np.int32)))
        object.__setattr__(self, "bit_depth", int(self.bit_depth))

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def shape(self):
        return self.pixels.shape

    @property
    def maxval(self):
        return (1 << self.bit_depth) - 1

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.bit_depth == other.bit_depth and np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height}, bit_depth={self.bit_depth})"


@dataclass(frozen=True, eq=False)
class DamageMask:
    """Per-pixel flags; ``known[row, col]`` is True for intact pixels."""

    known: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.known)
        if k.ndim != 2 or k.shape[0] < 1 or k.shape[1] < 1:
            raise ParameterError(f"mask must be a non-empty 2-D grid, got shape {k.shape}")
        object.__setattr__(self, "known", _frozen(k.astype(bool)))

    @classmethod
    def all_known(cls, height, width):
        return cls(np.ones((height, width), dtype=bool))

    @property
    def damaged(self):
        return ~self.known

    @property
    def height(self):
        return self.known.shape[0]

    @property
    def width(self):
        return self.known.shape[1]

    @property
    def shape(self):
        return self.known.shape

    @property
    def n_damaged(self):
        return int(self.known.size - np.count_nonzero(self.known))

    def __eq__(self, other):
        if not isinstance(other, DamageMask):
            return NotImplemented
        return np.array_equal(self.known, other.known)

    def __repr__(self):
        return f"DamageMask({self.width}x{self.height}, damaged={self.n_damaged})"


def check_same_shape(what, a, b):
    if tuple(a.shape) != tuple(b.shape):
        raise ShapeMismatchError(what, a.shape, b.shape)


def mask_from_image(img):
    """Black (0) pixels mark damage; everything else is known."""
    return DamageMask(img.pixels != 0)


def apply_mask(img, mask):
    """Zero the damaged pixels of ``img``."""
    check_same_shape("apply_mask", img, mask)
    return GrayImage(np.where(mask.known, img.pixels, 0), img.bit_depth)


def to_pixels(values, bit_depth):
    """Clamp reals to ``[0, 2**n - 1]`` and round half away from zero."""
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, float((1 << bit_depth) - 1))
    # values are non-negative after the clip, so floor(v + 0.5) rounds half away from zero
    return np.floor(v + 0.5).astype(np.int64)


def _check_window(R, shape):
    if isinstance(R, bool) or int(R) != R:
        raise ParameterError(f"window size must be an integer, got {R!r}")
    R = int(R)
    if R < 3 or R % 2 == 0:
        raise ParameterError(f"window size R must be odd and >= 3, got {R}")
    limit = 2 * min(shape) - 1
    if R > limit:
        raise ParameterError(f"window size R={R} exceeds 2*min(width, height)-1 = {limit}")
    return R


def window_sum(a, half):
    """Sum of ``a`` over the ``(2*half+1)`` square window, clipped to the grid.

    Uses a summed-area table, so the cost is independent of ``half``.
    Integer input stays integer, which keeps zero sums exactly zero.
    """
    a = np.asarray(a)
    H, W = a.shape
    acc = np.int64 if a.dtype.kind in "biu" else np.float64
    sat = np.zeros((H + 1, W + 1), dtype=acc)
    sat[1:, 1:] = a.astype(acc).cumsum(axis=0).cumsum(axis=1)
    r = np.arange(H)
    c = np.arange(W)
    r0 = np.clip(r - half, 0, H)[:, None]
    r1 = np.clip(r + half + 1, 0, H)[:, None]
    c0 = np.clip(c - half, 0, W)[None, :]
    c1 = np.clip(c + half + 1, 0, W)[None, :]
    return sat[r1, c1] - sat[r0, c1] - sat[r1, c0] + sat[r0, c0]


def window_count(shape, half):
    """Number of in-bounds cells in each clipped window."""
    H, W = shape
    r = np.arange(H)
    c = np.arange(W)
    nr = np.minimum(r + half + 1, H) - np.maximum(r - half, 0)
    nc = np.minimum(c + half + 1, W) - np.maximum(c - half, 0)
    return np.outer(nr, nc)


def box_filter(grid, R):
    """R-by-R average filter with valid-window normalization at the borders.

    Each output cell is the mean over the in-bounds part of the window
    centred on it, so constants are preserved right up to the edges.

    Parameters
    ----------
    grid : array_like, shape (H, W)
        Real values; a ``GrayImage`` is accepted and read as its pixels.
    R : int
        Odd window side, ``3 <= R <= 2*min(H, W) - 1``.
    """
    if isinstance(grid, GrayImage):
        grid = grid.pixels
    g = np.asarray(grid, dtype=np.float64)
    if g.ndim != 2:
        raise ParameterError(f"grid must be 2-D, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ParameterError("grid values must be finite")
    R = _check_window(R, g.shape)
    half = R // 2
    return window_sum(g, half) / window_count(g.shape, half)
