"""Small synthetic grayscale images used as stand-ins for photographs."""

import numpy as np

from .image import GrayImage


def constant(width=64, height=64, value=128):
    return GrayImage(np.full((height, width), value), 8)


def ramp(width=64, height=64, slope=1.0):
    """Horizontal ramp ``I(r, c) = slope * c`` clipped to 255."""
    cols = np.minimum(np.round(slope * np.arange(width)), 255)
    return GrayImage(np.tile(cols, (height, 1)).astype(np.int64), 8)


def gaussian_blobs(width=64, height=64, n_blobs=4, seed=0):
    """Smooth sum of isotropic Gaussian bumps on a mid-gray background."""
    rng = np.random.default_rng(seed)
    rows, cols = np.mgrid[0:height, 0:width].astype(np.float64)
    field = np.full((height, width), 60.0)
    for _ in range(n_blobs):
        r0 = rng.uniform(0, height)
        c0 = rng.uniform(0, width)
        s = rng.uniform(0.1, 0.3) * min(width, height)
        amp = rng.uniform(60, 150)
        field += amp * np.exp(-((rows - r0) ** 2 + (cols - c0) ** 2) / (2 * s * s))
    return GrayImage(np.clip(np.round(field), 0, 255).astype(np.int64), 8)


def radial_gradient(width=64, height=64):
    rows, cols = np.mgrid[0:height, 0:width].astype(np.float64)
    d = np.hypot(rows - (height - 1) / 2, cols - (width - 1) / 2)
    return GrayImage(np.round(255 * (1 - d / d.max())).astype(np.int64), 8)


def corpus(width=64, height=64):
    """The bundled test images, keyed by name."""
    return {
        "ramp": ramp(width, height),
        "blobs": gaussian_blobs(width, height),
        "radial": radial_gradient(width, height),
    }
