"""Damage-mask generation, radius sweeps and result emission (CSV, SVG)."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from xml.sax.saxutils import escape

import numpy as np

from .engine import RegressorConfig, inpaint
from .errors import InpaintError, MaskGenerationError, ParameterError
from .image import DamageMask, apply_mask
from .metrics import mse as _mse
from .metrics import psnr_from_mse

DEFAULT_RADII = (3, 5, 7, 9, 11, 13)
MASK_KINDS = ("blocks", "scatter", "lines")
_KIND_ALIASES = {
    "blocks": "blocks",
    "selective_blocks": "blocks",
    "selectiveblocks": "blocks",
    "sb": "blocks",
    "scatter": "scatter",
    "random_scatter": "scatter",
    "randomscatter": "scatter",
    "lines": "lines",
}
# record label for each engine method, in output order
METHOD_LABELS = {"grnn": "GRNN", "rd": "RD", "cd": "CD", "rc": "RC", "lssvm2k": "LSSVM-2K"}
# comparison-table column order
TABLE_METHODS = ("RD", "CD", "RC", "LSSVM-2K", "GRNN")
CSV_HEADER = ("image", "mask", "method", "radius", "psnr_db", "mse", "wall_ms")
BAR_COLORS = ("blue", "orange", "gray", "yellow")
MAX_DAMAGE_FRACTION = 0.5
RETRY_BUDGET = 1000


# --- masks -------------------------------------------------------------------


@dataclass(frozen=True)
class MaskSpec:
    """Seeded damage-mask recipe.

    ``kind`` selects which size fields matter: ``blocks`` uses ``count``,
    ``block_w`` and ``block_h``; ``scatter`` uses ``fraction``; ``lines``
    uses ``count`` and ``thickness``.
    """

    kind: str = "scatter"
    seed: int = 0
    count: int = 1
    block_w: int = 8
    block_h: int = 8
    fraction: float = 0.05
    thickness: int = 2
    name: str = ""

    def __post_init__(self):
        kind = _KIND_ALIASES.get(str(self.kind).lower())
        if kind is None:
            raise ParameterError(f"mask kind must be one of {MASK_KINDS}, got {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if not 0 <= int(self.seed) < 2**64:
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if kind == "scatter":
            if not 0 < self.fraction <= MAX_DAMAGE_FRACTION:
                raise ParameterError(
                    f"scatter fraction must be in (0, {MAX_DAMAGE_FRACTION}], got {self.fraction}"
                )
        else:
            fields = ("count", "block_w", "block_h") if kind == "blocks" else ("count", "thickness")
            for f in fields:
                if int(getattr(self, f)) < 1:
                    raise ParameterError(f"{f} must be a positive integer, got {getattr(self, f)}")

    @property
    def label(self):
        return self.name or f"{self.kind}-{self.seed}"


_INT_KEYS = ("seed", "count", "block_w", "block_h", "thickness")


def parse_mask_spec(text):
    """Parse ``key=value`` pairs separated by newlines or commas.

    Blank lines and ``#`` comments are ignored.
    """
    fields = {}
    for raw in text.replace(",", "\n").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"mask spec: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        try:
            if key in _INT_KEYS:
                fields[key] = int(value)
            elif key == "fraction":
                fields[key] = float(value)
            elif key in ("kind", "name"):
                fields[key] = value
            else:
                raise ParameterError(f"mask spec: unknown key {key!r}")
        except ValueError:
            raise ParameterError(f"mask spec: bad value for {key}: {value!r}") from None
    return MaskSpec(**fields)


def format_mask_spec(spec):
    keys = {
        "blocks": ("count", "block_w", "block_h"),
        "scatter": ("fraction",),
        "lines": ("count", "thickness"),
    }[spec.kind]
    lines = [f"kind={spec.kind}", f"seed={spec.seed}"]
    lines += [f"{k}={getattr(spec, k)}" for k in keys]
    if spec.name:
        lines.append(f"name={spec.name}")
    return "\n".join(lines) + "\n"


def _blocks(spec, width, height, rng):
    if spec.block_w > width or spec.block_h > height:
        raise MaskGenerationError(
            f"block {spec.block_w}x{spec.block_h} does not fit in {width}x{height}"
        )
    if spec.count * spec.block_w * spec.block_h > MAX_DAMAGE_FRACTION * width * height:
        raise MaskGenerationError("blocks would damage more than half of the image")
    damaged = np.zeros((height, width), dtype=bool)
    for i in range(spec.count):
        for _ in range(RETRY_BUDGET):
            r = int(rng.integers(0, height - spec.block_h + 1))
            c = int(rng.integers(0, width - spec.block_w + 1))
            window = damaged[r : r + spec.block_h, c : c + spec.block_w]
            if not window.any():
                window[...] = True
                break
        else:
            raise MaskGenerationError(
                f"could not place block {i + 1} of {spec.count} without overlap "
                f"after {RETRY_BUDGET} attempts"
            )
    return damaged


def _scatter(spec, width, height, rng):
    n = width * height
    k = math.floor(spec.fraction * n)
    damaged = np.zeros(n, dtype=bool)
    damaged[rng.choice(n, size=k, replace=False)] = True
    return damaged.reshape(height, width)


def _lines(spec, width, height, rng):
    if spec.thickness > width and spec.thickness > height:
        raise MaskGenerationError(f"line thickness {spec.thickness} exceeds both dimensions")
    for _ in range(RETRY_BUDGET):
        damaged = np.zeros((height, width), dtype=bool)
        for _ in range(spec.count):
            horizontal = bool(rng.integers(2))
            if horizontal and spec.thickness > height:
                horizontal = False
            elif not horizontal and spec.thickness > width:
                horizontal = True
            if horizontal:
                r = int(rng.integers(0, height - spec.thickness + 1))
                damaged[r : r + spec.thickness, :] = True
            else:
                c = int(rng.integers(0, width - spec.thickness + 1))
                damaged[:, c : c + spec.thickness] = True
        if damaged.sum() <= MAX_DAMAGE_FRACTION * damaged.size:
            return damaged
    raise MaskGenerationError(
        f"could not draw {spec.count} lines within the 50% damage limit "
        f"after {RETRY_BUDGET} attempts"
    )


def generate_mask(spec, width, height):
    """Build the damage mask described by ``spec``.

    The result depends only on ``(spec, width, height)``; the seed drives a
    PCG64 generator.  At most half of the pixels are ever damaged.
    """
    if width < 1 or height < 1:
        raise ParameterError(f"mask dimensions must be positive, got {width}x{height}")
    rng = np.random.default_rng(int(spec.seed))
    damaged = {"blocks": _blocks, "scatter": _scatter, "lines": _lines}[spec.kind](
        spec, width, height, rng
    )
    return DamageMask(~damaged)


# --- sweeps ------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    image_id: str
    mask_id: str
    method: str
    radius: int
    psnr_db: float
    mse: float
    wall_ms: int | None


class SweepError(InpaintError):
    def __init__(self, method, radius, cause):
        self.method = method
        self.radius = radius
        self.cause = cause
        super().__init__(f"sweep cell (method={method}, radius={radius}) failed: {cause}")


def sweep_cells(methods, radii=DEFAULT_RADII):
    """Ordered ``(method, radius)`` cells: GRNN per radius, LS-SVM modes once."""
    radii = sorted(set(int(r) for r in radii))
    for r in radii:
        if r < 3 or r % 2 == 0:
            raise ParameterError(f"sweep radii must be odd and >= 3, got {r}")
    wanted = []
    for m in methods:
        m = m.lower().replace("-", "").replace("_", "")
        if m not in METHOD_LABELS:
            raise ParameterError(f"unknown method {m!r}; choose from {tuple(METHOD_LABELS)}")
        if m not in wanted:
            wanted.append(m)
    cells = []
    for m in METHOD_LABELS:
        if m not in wanted:
            continue
        if m == "grnn":
            cells += [(m, r) for r in radii]
        else:
            cells.append((m, 0))
    return cells


def radius_sweep(
    img,
    mask,
    methods=("grnn",),
    radii=DEFAULT_RADII,
    base=None,
    image_id="image",
    mask_id="mask",
    threads=1,
):
    """Inpaint ``img`` under ``mask`` once per (method, radius) cell.

    Damaged pixels are zeroed before inpainting and every result is scored
    against the untouched ``img``.  Cells are independent and may run on a
    thread pool; the returned order is fixed regardless.

    Parameters
    ----------
    methods : iterable of str
        Any of ``grnn, rd, cd, rc, lssvm2k``.
    radii : iterable of odd int
        Band radii for GRNN; LS-SVM modes ignore them and report radius 0.
    base : RegressorConfig, optional
        Hyperparameters shared by every cell.
    """
    base = base or RegressorConfig()
    cells = sweep_cells(methods, radii)
    damaged = apply_mask(img, mask)

    def run(cell):
        method, radius = cell
        cfg = replace(base, method=method, radius=radius if radius else base.radius, threads=1)
        t0 = time.perf_counter()
        try:
            out = inpaint(damaged, mask, cfg).output
        except InpaintError as exc:
            raise SweepError(METHOD_LABELS[method], radius, exc) from exc
        wall = int(round((time.perf_counter() - t0) * 1000))
        err = _mse(img, out)
        return SweepRecord(
            image_id, mask_id, METHOD_LABELS[method], radius,
            psnr_from_mse(err, img.bit_depth), err, wall,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, cells))
    return [run(c) for c in cells]


# --- emission ----------------------------------------------------------------


def _fmt_psnr(v):
    return "inf" if math.isinf(v) else f"{v:.4f}"


def emit_csv(records, timing=True):
    """Serialise sweep records; PSNR to 4 decimals, ``inf`` when exact.

    With ``timing=False`` the ``wall_ms`` column is left empty so that the
    bytes depend only on the inputs.
    """
    records = list(records)
    if not records:
        raise ParameterError("emit_csv needs at least one record")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        wall = "" if not timing or r.wall_ms is None else str(int(r.wall_ms))
        w.writerow([r.image_id, r.mask_id, r.method, r.radius, _fmt_psnr(r.psnr_db), repr(float(r.mse)), wall])
    return buf.getvalue().encode("utf-8")


def parse_csv(data):
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ParameterError("not a sweep CSV: header mismatch")
    out = []
    for row in rows[1:]:
        image, mask, method, radius, psnr, err, wall = row
        out.append(
            SweepRecord(
                image, mask, method, int(radius),
                math.inf if psnr == "inf" else float(psnr),
                float(err), int(wall) if wall else None,
            )
        )
    return out


def emit_table(records):
    """Pivot records into one row per (image, mask), one column per method.

    GRNN contributes its best PSNR over the swept radii; the winning radius
    goes into ``GRNN_radius``.
    """
    records = list(records)
    if not records:
        raise ParameterError("emit_table needs at least one record")
    labels = [m for m in TABLE_METHODS if any(r.method == m for r in records)]
    keys = list(dict.fromkeys((r.image_id, r.mask_id) for r in records))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["image", "mask"] + labels
    if "GRNN" in labels:
        header.append("GRNN_radius")
    w.writerow(header)
    for image_id, mask_id in keys:
        cell = [r for r in records if (r.image_id, r.mask_id) == (image_id, mask_id)]
        row = [image_id, mask_id]
        best_radius = ""
        for label in labels:
            hits = [r for r in cell if r.method == label]
            if not hits:
                row.append("")
                continue
            # max PSNR; the smaller radius wins ties
            best = max(hits, key=lambda r: (r.psnr_db, -r.radius))
            row.append(_fmt_psnr(best.psnr_db))
            if label == "GRNN":
                best_radius = str(best.radius)
        if "GRNN" in labels:
            row.append(best_radius)
        w.writerow(row)
    return buf.getvalue().encode("utf-8")


def _f(x):
    return f"{x:.3f}"


def emit_bar_svg(records, group_by="mask", width=640, height=400):
    """Grouped bar chart of GRNN PSNR: one group per radius, one bar per mask.

    Bars are colored blue, orange, gray, yellow in mask order; heights are
    linear in dB from 0 to the next multiple of 10 above the largest finite
    PSNR.  Infinite PSNR is drawn at full height and labelled ``inf``.
    """
    records = list(records)
    if group_by != "mask":
        raise ParameterError("only group_by='mask' is supported")
    if not records:
        raise ParameterError("emit_bar_svg needs at least one record")
    images = {r.image_id for r in records}
    if len(images) != 1:
        raise ParameterError(f"records mix image ids {sorted(images)}")
    if any(r.method != "GRNN" for r in records):
        raise ParameterError("bar chart takes GRNN records only")
    image_id = records[0].image_id
    masks = list(dict.fromkeys(r.mask_id for r in records))
    radii = sorted({r.radius for r in records})
    finite = [r.psnr_db for r in records if math.isfinite(r.psnr_db)]
    top = max(10.0, 10.0 * math.ceil(max(finite, default=10.0) / 10.0))
    if finite and max(finite) >= top:
        top += 10.0

    left, right, top_m, bottom = 60.0, 130.0, 40.0, 50.0
    pw = width - left - right
    ph = height - top_m - bottom
    y0 = top_m + ph
    group_w = pw / len(radii)
    bar_w = group_w * 0.8 / len(masks)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>PSNR vs radius: {escape(image_id)}</title>',
        f'<text x="{_f(left + pw / 2)}" y="20" text-anchor="middle" font-size="14">'
        f"GRNN PSNR by radius ({escape(image_id)})</text>",
        f'<g id="y-axis" data-min="0" data-max="{_f(top)}">',
        f'<line x1="{_f(left)}" y1="{_f(top_m)}" x2="{_f(left)}" y2="{_f(y0)}" stroke="black"/>',
    ]
    for tick in np.arange(0.0, top + 1e-9, 10.0):
        ty = y0 - tick / top * ph
        out.append(
            f'<line x1="{_f(left - 4)}" y1="{_f(ty)}" x2="{_f(left)}" y2="{_f(ty)}" stroke="black"/>'
            f'<text x="{_f(left - 6)}" y="{_f(ty + 4)}" text-anchor="end" font-size="10">{tick:.0f}</text>'
        )
    out.append(
        f'<text x="15" y="{_f(top_m + ph / 2)}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {_f(top_m + ph / 2)})">PSNR (dB)</text>'
    )
    out.append("</g>")
    out.append(
        f'<g id="x-axis"><line x1="{_f(left)}" y1="{_f(y0)}" x2="{_f(left + pw)}" y2="{_f(y0)}" stroke="black"/>'
    )
    for gi, radius in enumerate(radii):
        cx = left + (gi + 0.5) * group_w
        out.append(
            f'<text x="{_f(cx)}" y="{_f(y0 + 16)}" text-anchor="middle" font-size="10">{radius}</text>'
        )
    out.append(
        f'<text x="{_f(left + pw / 2)}" y="{_f(height - 10)}" text-anchor="middle" font-size="12">'
        "Radius R</text></g>"
    )
    out.append('<g id="bars">')
    lookup = {(r.mask_id, r.radius): r for r in records}
    for gi, radius in enumerate(radii):
        gx = left + gi * group_w + group_w * 0.1
        for mi, mask_id in enumerate(masks):
            rec = lookup.get((mask_id, radius))
            if rec is None:
                continue
            value = min(rec.psnr_db, top)
            h = value / top * ph
            x = gx + mi * bar_w
            label = _fmt_psnr(rec.psnr_db)
            out.append(
                f'<rect x="{_f(x)}" y="{_f(y0 - h)}" width="{_f(bar_w)}" height="{_f(h)}" '
                f'fill="{BAR_COLORS[mi % len(BAR_COLORS)]}" data-mask="{escape(mask_id)}" '
                f'data-radius="{radius}" data-psnr="{label}"><title>{escape(mask_id)} R={radius}: '
                f"{label} dB</title></rect>"
            )
            if math.isinf(rec.psnr_db):
                out.append(
                    f'<text x="{_f(x + bar_w / 2)}" y="{_f(y0 - h - 3)}" text-anchor="middle" '
                    f'font-size="9">inf</text>'
                )
    out.append("</g>")
    out.append('<g id="legend">')
    for mi, mask_id in enumerate(masks):
        ly = top_m + 10 + 18 * mi
        lx = left + pw + 15
        out.append(
            f'<rect x="{_f(lx)}" y="{_f(ly - 9)}" width="12" height="12" '
            f'fill="{BAR_COLORS[mi % len(BAR_COLORS)]}"/>'
            f'<text x="{_f(lx + 18)}" y="{_f(ly + 1)}" font-size="11">{escape(mask_id)}</text>'
        )
    out.append("</g>")
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")
