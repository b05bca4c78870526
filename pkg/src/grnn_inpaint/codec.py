"""PGM (P2/P5) and 8-bit grayscale PNG reading and writing."""

from __future__ import annotations

import os
import struct
import tempfile
import zlib

import numpy as np

from .errors import DecodeError, ParameterError
from .image import GrayImage

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def load_image(data):
    """Decode PGM or PNG bytes into a ``GrayImage``."""
    data = bytes(data)
    if data.startswith(PNG_SIGNATURE):
        return _decode_png(data)
    if data[:2] in (b"P2", b"P5"):
        return _decode_pgm(data)
    raise DecodeError("magic: not a PGM (P2/P5) or PNG file")


def save_image(img, format="pgm"):
    """Encode ``img`` as ``"pgm"`` (binary P5) or ``"png"`` bytes."""
    fmt = format.lower()
    if fmt in ("pgm", "p5", "pgm-p5"):
        return _encode_pgm(img)
    if fmt == "png":
        return _encode_png(img)
    raise ParameterError(f"unknown image format {format!r}")


def read_image(path):
    with open(path, "rb") as fh:
        return load_image(fh.read())


def write_bytes_atomic(path, payload):
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_image(img, path, format=None):
    """Save ``img`` to ``path``; the format follows the extension unless given."""
    if format is None:
        format = "png" if os.fspath(path).lower().endswith(".png") else "pgm"
    write_bytes_atomic(path, save_image(img, format))


# --- PGM -------------------------------------------------------------------


def _pgm_tokens(data, count, pos):
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos] in b" \t\r\n\x0b\x0c":
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < n and data[pos] not in b" \t\r\n\x0b\x0c#":
            pos += 1
        if start == pos:
            raise DecodeError("header: truncated before all fields were read")
        tokens.append(data[start:pos])
    return tokens, pos


def _header_int(token, field):
    try:
        value = int(token)
    except ValueError:
        raise DecodeError(f"{field}: expected an integer, got {token[:20]!r}") from None
    return value


def _decode_pgm(data):
    magic = data[:2]
    (w, h, mv), pos = _pgm_tokens(data, 3, 2)
    width = _header_int(w, "width")
    height = _header_int(h, "height")
    maxval = _header_int(mv, "maxval")
    if width < 1:
        raise DecodeError(f"width: must be positive, got {width}")
    if height < 1:
        raise DecodeError(f"height: must be positive, got {height}")
    if not 1 <= maxval <= 65535:
        raise DecodeError(f"maxval: must be in [1, 65535], got {maxval}")
    n = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates maxval from the raster
        if pos >= len(data):
            raise DecodeError("payload: truncated, no raster data")
        pos += 1
        dtype = ">u1" if maxval < 256 else ">u2"
        nbytes = n * np.dtype(dtype).itemsize
        raw = data[pos : pos + nbytes]
        if len(raw) < nbytes:
            raise DecodeError(f"payload: truncated, expected {nbytes} bytes, got {len(raw)}")
        px = np.frombuffer(raw, dtype=dtype).astype(np.int64)
    else:
        body = data[pos:].split()
        if len(body) < n:
            raise DecodeError(f"payload: truncated, expected {n} samples, got {len(body)}")
        try:
            px = np.array([int(t) for t in body[:n]], dtype=np.int64)
        except ValueError:
            raise DecodeError("payload: non-integer sample in P2 raster") from None
    if px.size and px.max() > maxval:
        raise DecodeError(f"payload: sample {int(px.max())} exceeds maxval {maxval}")
    return GrayImage(px.reshape(height, width), bit_depth=maxval.bit_length())


def _encode_pgm(img):
    header = f"P5\n{img.width} {img.height}\n{img.maxval}\n".encode("ascii")
    dtype = ">u1" if img.maxval < 256 else ">u2"
    return header + img.pixels.astype(dtype).tobytes()


# --- PNG -------------------------------------------------------------------


def _chunk(kind, payload):
    body = kind + payload
    return struct.pack(">I", len(payload)) + body + struct.pack(">I", zlib.crc32(body) & 0xFFFFFFFF)


def _encode_png(img):
    if img.bit_depth > 8:
        raise ParameterError(f"PNG output supports 8-bit images only, got bit_depth {img.bit_depth}")
    ihdr = struct.pack(">IIBBBBB", img.width, img.height, 8, 0, 0, 0, 0)
    rows = img.pixels.astype(np.uint8)
    # filter type 0 (None) on every scanline
    raw = np.hstack([np.zeros((img.height, 1), dtype=np.uint8), rows]).tobytes()
    return (
        PNG_SIGNATURE
        + _chunk(b"IHDR", ihdr)
        + _chunk(b"IDAT", zlib.compress(raw, 9))
        + _chunk(b"IEND", b"")
    )


def _paeth(a, b, c):
    p = a + b - c
    pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
    if pa <= pb and pa <= pc:
        return a
    return b if pb <= pc else c


def _unfilter(raw, width, height):
    stride = width
    out = np.zeros((height, width), dtype=np.uint8)
    prev = bytearray(stride)
    pos = 0
    for y in range(height):
        ftype = raw[pos]
        line = bytearray(raw[pos + 1 : pos + 1 + stride])
        pos += 1 + stride
        if ftype == 0:
            pass
        elif ftype == 1:
            for i in range(1, stride):
                line[i] = (line[i] + line[i - 1]) & 0xFF
        elif ftype == 2:
            for i in range(stride):
                line[i] = (line[i] + prev[i]) & 0xFF
        elif ftype == 3:
            for i in range(stride):
                left = line[i - 1] if i else 0
                line[i] = (line[i] + ((left + prev[i]) >> 1)) & 0xFF
        elif ftype == 4:
            for i in range(stride):
                left = line[i - 1] if i else 0
                upleft = prev[i - 1] if i else 0
                line[i] = (line[i] + _paeth(left, prev[i], upleft)) & 0xFF
        else:
            raise DecodeError(f"filter: unknown scanline filter type {ftype} on row {y}")
        out[y] = np.frombuffer(bytes(line), dtype=np.uint8)
        prev = line
    return out


def _decode_png(data):
    pos = len(PNG_SIGNATURE)
    header = None
    idat = []
    while True:
        if pos + 8 > len(data):
            raise DecodeError("chunk: truncated before IEND")
        (length,) = struct.unpack(">I", data[pos : pos + 4])
        kind = data[pos + 4 : pos + 8]
        payload = data[pos + 8 : pos + 8 + length]
        crc_bytes = data[pos + 8 + length : pos + 12 + length]
        if len(payload) < length or len(crc_bytes) < 4:
            raise DecodeError(f"chunk: {kind.decode('latin-1')} truncated")
        if struct.unpack(">I", crc_bytes)[0] != zlib.crc32(kind + payload) & 0xFFFFFFFF:
            raise DecodeError(f"crc: checksum mismatch in {kind.decode('latin-1')} chunk")
        pos += 12 + length
        if kind == b"IHDR":
            if length != 13:
                raise DecodeError("IHDR: wrong length")
            header = struct.unpack(">IIBBBBB", payload)
        elif kind == b"IDAT":
            idat.append(payload)
        elif kind == b"IEND":
            break
    if header is None:
        raise DecodeError("IHDR: missing")
    width, height, depth, color_type, compression, filt, interlace = header
    if color_type != 0:
        raise DecodeError(f"color_type: only grayscale (0) is supported, got {color_type}")
    if depth != 8:
        raise DecodeError(f"bit_depth: only 8-bit PNG is supported, got {depth}")
    if compression != 0 or filt != 0:
        raise DecodeError("compression: unknown compression or filter method")
    if interlace != 0:
        raise DecodeError("interlace: interlaced PNG is not supported")
    if width < 1 or height < 1:
        raise DecodeError("IHDR: zero width or height")
    try:
        raw = zlib.decompress(b"".join(idat))
    except zlib.error as exc:
        raise DecodeError(f"IDAT: corrupt zlib stream ({exc})") from None
    if len(raw) < height * (width + 1):
        raise DecodeError("IDAT: truncated image data")
    return GrayImage(_unfilter(raw, width, height), bit_depth=8)
