"""Command-line front end: ``inpaint``, ``evaluate``, ``sweep``, ``mask-gen``.

Exit codes: 0 ok, 1 runtime failure, 2 usage error.  Failures print exactly
one ``error=<kind> reason=<text>`` line on stderr.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time

import numpy as np

from . import experiment
from .codec import read_image, save_image, write_bytes_atomic
from .engine import METHODS, RegressorConfig, inpaint
from .errors import InpaintError, ParameterError
from .grnn import DEFAULT_SIGMA
from .image import GrayImage, mask_from_image
from .lssvm import DEFAULT_BANDWIDTH, DEFAULT_CAP, DEFAULT_GAMMA
from .metrics import mse, psnr_from_mse

PROG = "grnn-inpaint"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_hyper(p, with_radius=True):
    if with_radius:
        p.add_argument("--radius", type=int, default=5, help="odd band size R for GRNN")
    p.add_argument("--sigma", type=float, default=DEFAULT_SIGMA, help="GRNN spread in pixels")
    p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA, help="LS-SVM regularization")
    p.add_argument("--bandwidth", type=float, default=DEFAULT_BANDWIDTH, help="LS-SVM kernel bandwidth")
    p.add_argument(
        "--kernel2d", choices=("additive", "rbf"), default="additive",
        help="kernel for the LS-SVM 2-kernel mode",
    )
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max training pixels for the 2-kernel mode")
    p.add_argument("--no-progressive", action="store_true", help="do not reuse filled pixels as training data")
    p.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")


def build_parser():
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog=PROG, description=__doc__.splitlines()[0], formatter_class=fmt)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inpaint", help="fill damaged pixels of an image", formatter_class=fmt)
    p.add_argument("--image", required=True, help="damaged image (PGM or PNG)")
    p.add_argument("--mask", required=True, help="mask image, black = damaged")
    p.add_argument("--method", choices=METHODS, default="grnn", help="regressor")
    p.add_argument("--out", required=True, help="output path (.png or .pgm)")
    _add_hyper(p)

    p = sub.add_parser("evaluate", help="PSNR and MSE between two images", formatter_class=fmt)
    p.add_argument("--original", required=True, help="reference image")
    p.add_argument("--test", required=True, help="image to score")

    p = sub.add_parser("sweep", help="PSNR over band radii and methods", formatter_class=fmt)
    p.add_argument("--image", required=True, help="pristine image (PGM or PNG)")
    p.add_argument(
        "--mask-spec", required=True, action="append",
        help="mask spec file or inline key=value list; repeat for several masks",
    )
    p.add_argument("--methods", default="grnn", help="comma list of grnn,rd,cd,rc,lssvm2k")
    p.add_argument("--radii", default="3,5,7,9,11,13", help="comma list of odd radii")
    p.add_argument("--csv", required=True, help="output CSV of sweep records")
    p.add_argument("--svg", help="optional grouped bar chart of GRNN records")
    p.add_argument("--table", help="optional per-mask method comparison CSV")
    p.add_argument("--image-id", help="image label in the output (default: file stem)")
    p.add_argument("--timing", action="store_true", help="fill the wall_ms column (makes output run-dependent)")
    _add_hyper(p, with_radius=False)

    p = sub.add_parser("mask-gen", help="write a seeded damage mask as PGM", formatter_class=fmt)
    p.add_argument("--spec", required=True, help="mask spec file or inline key=value list")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--out", required=True, help="output PGM path")
    return parser


def _read(path):
    if not os.path.isfile(path):
        raise UsageError(f"file not found: {path}")
    return read_image(path)


def _spec(arg):
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return experiment.parse_mask_spec(fh.read())
    if "=" not in arg:
        raise UsageError(f"mask spec file not found: {arg}")
    return experiment.parse_mask_spec(arg)


def _config(args, method="grnn"):
    return RegressorConfig(
        method=method,
        radius=getattr(args, "radius", 5),
        sigma=args.sigma,
        gamma=args.gamma,
        bandwidth=args.bandwidth,
        kernel2d=args.kernel2d,
        progressive=not args.no_progressive,
        cap=args.cap,
        threads=args.threads,
    )


def cmd_inpaint(args):
    if args.radius < 3 or args.radius % 2 == 0:
        raise UsageError(f"--radius must be an odd integer >= 3 (odd-radius rule), got {args.radius}")
    cfg = _config(args, args.method)
    img = _read(args.image)
    mask = mask_from_image(_read(args.mask))
    t0 = time.perf_counter()
    report = inpaint(img, mask, cfg)
    wall = int(round((time.perf_counter() - t0) * 1000))
    fmt = "png" if args.out.lower().endswith(".png") else "pgm"
    write_bytes_atomic(args.out, save_image(report.output, fmt))
    bands = report.band_sizes
    line = f"regions={report.n_regions}"
    if bands:
        line += f" band_min={min(bands)} band_max={max(bands)} band_total={sum(bands)}"
    print(f"{line} wall_ms={wall}")
    return 0


def cmd_evaluate(args):
    a = _read(args.original)
    b = _read(args.test)
    err = mse(a, b)
    value = psnr_from_mse(err, a.bit_depth)
    shown = "inf" if math.isinf(value) else f"{value:.4f}"
    print(f"psnr_db={shown} mse={err:.4f}")
    return 0


def _csv_list(text, cast, what):
    try:
        items = [cast(s.strip()) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"--{what}: could not parse {text!r}") from None
    if not items:
        raise UsageError(f"--{what}: empty list")
    return items


def cmd_sweep(args):
    methods = _csv_list(args.methods, str, "methods")
    radii = _csv_list(args.radii, int, "radii")
    for r in radii:
        if r < 3 or r % 2 == 0:
            raise UsageError(f"--radii must be odd integers >= 3 (odd-radius rule), got {r}")
    specs = [_spec(s) for s in args.mask_spec]
    base = _config(args)
    img = _read(args.image)
    if args.svg and "grnn" not in [m.lower() for m in methods]:
        raise UsageError("--svg plots GRNN records; include grnn in --methods")
    image_id = args.image_id or os.path.splitext(os.path.basename(args.image))[0]
    records = []
    for i, spec in enumerate(specs):
        mask = experiment.generate_mask(spec, img.width, img.height)
        mask_id = spec.name or (f"M{i + 1}" if len(specs) > 1 else spec.label)
        records += experiment.radius_sweep(
            img, mask, methods, radii, base, image_id, mask_id, threads=args.threads
        )
    outputs = [(args.csv, experiment.emit_csv(records, timing=args.timing))]
    if args.svg:
        grnn = [r for r in records if r.method == "GRNN"]
        outputs.append((args.svg, experiment.emit_bar_svg(grnn)))
    if args.table:
        outputs.append((args.table, experiment.emit_table(records)))
    for path, payload in outputs:
        write_bytes_atomic(path, payload)
    print(f"records={len(records)} csv={args.csv}")
    return 0


def cmd_maskgen(args):
    spec = _spec(args.spec)
    if args.width < 1 or args.height < 1:
        raise UsageError(f"--width/--height must be positive, got {args.width}x{args.height}")
    mask = experiment.generate_mask(spec, args.width, args.height)
    img = GrayImage(np.where(mask.known, 255, 0), 8)
    write_bytes_atomic(args.out, save_image(img, "pgm"))
    print(f"damaged={mask.n_damaged} out={args.out}")
    return 0


COMMANDS = {
    "inpaint": cmd_inpaint,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "mask-gen": cmd_maskgen,
}


def _fail(kind, message, code):
    reason = " ".join(str(message).split())
    print(f"error={kind} reason={reason}", file=sys.stderr)
    return code


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail("usage", exc, 2)
    except ParameterError as exc:
        return _fail("usage", exc, 2)
    except InpaintError as exc:
        return _fail(type(exc).__name__, exc, 1)
    except OSError as exc:
        return _fail("io", exc, 1)


if __name__ == "__main__":
    sys.exit(main())
