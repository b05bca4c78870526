"""Region-wise inpainting driver.

GRNN path: damaged pixels are grouped into 8-connected regions, processed
smallest first.  Each region gets its own GRNN trained on the known pixels
inside its radial band, and every damaged coordinate of the region is fed to
that model.  With ``progressive`` on, filled pixels count as known for the
regions that follow.

LS-SVM path: the whole image goes through the chosen mode; pixels that mode
cannot reach (e.g. fully damaged rows in RD) are finished by a 2-kernel pass.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from . import lssvm
from .errors import ParameterError, UnfillableError
from .grnn import DEFAULT_SIGMA, grnn_train
from .image import DamageMask, GrayImage, check_same_shape, to_pixels
from .radial import TrainingSet, band_coords, check_radius, max_radius

METHODS = ("grnn", "rd", "cd", "rc", "lssvm2k")
DEFAULT_RADIUS = 5


@dataclass(frozen=True, eq=False)
class DamageRegion:
    """One 8-connected damaged component; ``coords`` are row-major."""

    coords: np.ndarray

    @property
    def size(self):
        return len(self.coords)


@dataclass(frozen=True)
class RegressorConfig:
    method: str = "grnn"
    radius: int = DEFAULT_RADIUS
    sigma: float = DEFAULT_SIGMA
    gamma: float = lssvm.DEFAULT_GAMMA
    bandwidth: float = lssvm.DEFAULT_BANDWIDTH
    kernel2d: str = "additive"
    progressive: bool = True
    cap: int = lssvm.DEFAULT_CAP
    threads: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.kernel2d not in ("additive", "rbf"):
            raise ParameterError(f"kernel2d must be 'additive' or 'rbf', got {self.kernel2d!r}")
        check_odd = int(self.radius)
        if check_odd != self.radius or check_odd < 3 or check_odd % 2 == 0:
            raise ParameterError(f"radius must be odd and >= 3, got {self.radius}")
        for name in ("sigma", "gamma", "bandwidth"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)}")
        if self.cap < 1 or self.threads < 1:
            raise ParameterError("cap and threads must be >= 1")

    def kernel_1d(self):
        return lssvm.Kernel("rbf1d", self.bandwidth)

    def kernel_2d(self):
        kind = "additive2d" if self.kernel2d == "additive" else "rbf2d"
        return lssvm.Kernel(kind, self.bandwidth)


@dataclass
class RegionStats:
    size: int
    band_size: int
    radius: int


@dataclass
class InpaintReport:
    output: GrayImage
    method: str
    regions: list = field(default_factory=list)
    fallback: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))
    wall_ms: int = 0
    n_regions: int = 0

    @property
    def band_sizes(self):
        return [r.band_size for r in self.regions]


def find_regions(mask):
    """8-connected damaged components, smallest first.

    Ties on size go to the region whose row-major first pixel comes first.
    """
    damaged = ~mask.known
    labels, n = ndimage.label(damaged, structure=np.ones((3, 3), dtype=bool))
    if n == 0:
        return []
    coords = np.argwhere(damaged)
    labs = labels[coords[:, 0], coords[:, 1]]
    order = np.argsort(labs, kind="stable")
    counts = np.bincount(labs, minlength=n + 1)[1:]
    groups = np.split(coords[order], np.cumsum(counts)[:-1])
    regions = [DamageRegion(g) for g in groups]
    regions.sort(key=lambda r: (r.size, int(r.coords[0, 0]), int(r.coords[0, 1])))
    return regions


def _inpaint_grnn(img, mask, cfg, regions):
    px = np.array(img.pixels, dtype=np.int64)
    known = np.array(mask.known)
    limit = max_radius(img.shape)
    stats = []
    for region in regions:
        state = known if cfg.progressive else mask.known
        R = cfg.radius
        coords = band_coords(state, R, region.coords)
        # grow the band until it reaches some known pixel
        while len(coords) == 0 and R + 2 <= limit:
            R += 2
            coords = band_coords(state, R, region.coords)
        if len(coords) == 0:
            raise UnfillableError("no known pixels left to train on")
        model = grnn_train(TrainingSet(coords, px[coords[:, 0], coords[:, 1]]), cfg.sigma)
        pred = model.predict(region.coords)
        px[region.coords[:, 0], region.coords[:, 1]] = to_pixels(pred, img.bit_depth)
        if cfg.progressive:
            known[region.coords[:, 0], region.coords[:, 1]] = True
        stats.append(RegionStats(region.size, len(coords), R))
    return GrayImage(px, img.bit_depth), stats


def _inpaint_lssvm(img, mask, cfg):
    k1 = cfg.kernel_1d()
    if cfg.method == "rd":
        res = lssvm.rd_inpaint(img, mask, k1, cfg.gamma, cfg.threads)
    elif cfg.method == "cd":
        res = lssvm.cd_inpaint(img, mask, k1, cfg.gamma, cfg.threads)
    elif cfg.method == "rc":
        res = lssvm.rc_inpaint(img, mask, k1, cfg.gamma, cfg.threads)
    else:
        res = lssvm.two_kernel_inpaint(img, mask, cfg.kernel_2d(), cfg.gamma, cfg.cap)
    if len(res.fallback) == 0:
        return res.image, res.fallback
    still = np.zeros(img.shape, dtype=bool)
    still[res.fallback[:, 0], res.fallback[:, 1]] = True
    return lssvm.two_kernel_inpaint(
        res.image, DamageMask(~still), cfg.kernel_2d(), cfg.gamma, cfg.cap
    ).image, res.fallback


def inpaint(img, mask, cfg=None):
    """Fill the damaged pixels of ``img``.

    Known pixels are copied through bit-for-bit; filled values are clamped
    to the image range and rounded half away from zero.

    Parameters
    ----------
    img : GrayImage
        Damaged image; values under damaged pixels are never read.
    mask : DamageMask
    cfg : RegressorConfig, optional
        Defaults to GRNN with sigma 2 and radius 5, progressive.

    Returns
    -------
    InpaintReport
    """
    cfg = cfg or RegressorConfig()
    check_same_shape("inpaint", img, mask)
    t0 = time.perf_counter()
    regions = find_regions(mask)
    if not regions:
        return InpaintReport(img, cfg.method, wall_ms=int((time.perf_counter() - t0) * 1000))
    if not mask.known.any():
        raise UnfillableError("every pixel is damaged; nothing to learn from")
    if cfg.method == "grnn":
        check_radius(cfg.radius, img.shape)
        out, stats = _inpaint_grnn(img, mask, cfg, regions)
        fallback = np.zeros((0, 2), dtype=np.int64)
    else:
        (out, fallback), stats = _inpaint_lssvm(img, mask, cfg), []
    # known pixels must come through untouched whatever the regressor did
    assert np.array_equal(out.pixels[mask.known], img.pixels[mask.known])
    return InpaintReport(
        out,
        cfg.method,
        regions=stats,
        fallback=fallback,
        wall_ms=int((time.perf_counter() - t0) * 1000),
        n_regions=len(regions),
    )
