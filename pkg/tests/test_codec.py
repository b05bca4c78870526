import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from PIL import Image

from grnn_inpaint import DecodeError, GrayImage, load_image, save_image
from grnn_inpaint.codec import write_image, read_image
from oracles import write_pgm_ascii, write_pgm_binary


def test_p2_literal():
    im = load_image(b"P2 2 2 255 \n 0 10 20 30")
    assert (im.width, im.height, im.bit_depth) == (2, 2, 8)
    assert im.pixels.ravel().tolist() == [0, 10, 20, 30]


def test_p5_matches_p2():
    p2 = load_image(write_pgm_ascii(2, 2, 255, [0, 10, 20, 30]))
    p5 = load_image(write_pgm_binary(2, 2, 255, [0, 10, 20, 30]))
    assert p2 == p5


def test_p5_smallest_image_bytes():
    assert save_image(GrayImage(np.array([[7]]))) == b"P5\n1 1\n255\n\x07"


def test_pgm_comments_and_sixteen_bit():
    data = b"P2\n# a comment\n3 1\n# another\n1000\n0 500 1000\n"
    im = load_image(data)
    assert im.bit_depth == 10
    assert im.pixels.ravel().tolist() == [0, 500, 1000]
    again = load_image(save_image(im))
    assert again.pixels.tolist() == im.pixels.tolist()
    wide = load_image(write_pgm_binary(2, 1, 65535, [1, 65535]))
    assert wide.bit_depth == 16 and wide.pixels.ravel().tolist() == [1, 65535]


@given(arrays(np.int64, (16, 16), elements=st.integers(0, 255)))
def test_pgm_round_trip(px):
    im = GrayImage(px)
    assert load_image(save_image(im, "pgm")) == im


@given(arrays(np.int64, (16, 16), elements=st.integers(0, 255)))
def test_png_round_trip(px):
    im = GrayImage(px)
    assert load_image(save_image(im, "png")) == im


def test_png_decodes_with_pillow():
    im = GrayImage(np.array([[0, 10], [20, 30]]))
    ref = Image.open(io.BytesIO(save_image(im, "png")))
    assert ref.mode == "L"
    assert np.asarray(ref).ravel().tolist() == [0, 10, 20, 30]


@pytest.mark.parametrize("optimize", [False, True])
def test_reads_pillow_png_with_filters(optimize):
    rng = np.random.default_rng(3)
    px = np.cumsum(rng.integers(0, 3, size=(20, 23)), axis=1).clip(0, 255).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(px, "L").save(buf, format="PNG", optimize=optimize)
    assert load_image(buf.getvalue()).pixels.tolist() == px.tolist()


def test_reads_every_png_filter_type():
    # one scanline per filter type, encoded by hand against the PNG definition
    import struct
    import zlib

    rows = np.array([[5, 9, 200, 3]] * 5, dtype=np.int64) + np.arange(5)[:, None]
    raw = bytearray()
    prev = np.zeros(4, dtype=np.int64)
    for ftype, row in enumerate(rows):
        left = np.concatenate([[0], row[:-1]])
        upleft = np.concatenate([[0], prev[:-1]])
        if ftype == 0:
            pred = np.zeros(4, dtype=np.int64)
        elif ftype == 1:
            pred = left
        elif ftype == 2:
            pred = prev
        elif ftype == 3:
            pred = (left + prev) // 2
        else:
            pred = []
            for a, b, c in zip(left, prev, upleft):
                p = a + b - c
                pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
                pred.append(a if pa <= pb and pa <= pc else (b if pb <= pc else c))
            pred = np.array(pred)
        raw.append(ftype)
        raw.extend(((row - pred) % 256).astype(np.uint8).tobytes())
        prev = row

    def chunk(kind, payload):
        return struct.pack(">I", len(payload)) + kind + payload + struct.pack(">I", zlib.crc32(kind + payload))

    data = (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", struct.pack(">IIBBBBB", 4, 5, 8, 0, 0, 0, 0))
        + chunk(b"IDAT", zlib.compress(bytes(raw)))
        + chunk(b"IEND", b"")
    )
    assert load_image(data).pixels.tolist() == rows.tolist()


@pytest.mark.parametrize(
    "data, field",
    [
        (b"P5\n2 2\n255\n\x00\x01", "payload"),
        (b"P2\n2 x\n255\n0 0 0 0", "height"),
        (b"P2\n2 2\n70000\n0 0 0 0", "maxval"),
        (b"P2\n2 2\n", "header"),
        (b"P2\n1 1\n10\n11", "payload"),
        (b"GIF89a", "magic"),
    ],
)
def test_pgm_errors_name_field(data, field):
    with pytest.raises(DecodeError, match=field):
        load_image(data)


def test_png_color_rejected():
    buf = io.BytesIO()
    Image.new("RGB", (2, 2)).save(buf, format="PNG")
    with pytest.raises(DecodeError, match="color_type"):
        load_image(buf.getvalue())


def test_png_truncated():
    data = save_image(GrayImage(np.zeros((4, 4), int)), "png")
    with pytest.raises(DecodeError):
        load_image(data[:-20])


def test_write_image_by_extension(tmp_path):
    im = GrayImage(np.arange(12).reshape(3, 4))
    write_image(im, tmp_path / "a.png")
    write_image(im, tmp_path / "a.pgm")
    assert (tmp_path / "a.png").read_bytes().startswith(b"\x89PNG")
    assert read_image(tmp_path / "a.pgm") == im == read_image(tmp_path / "a.png")
    assert sorted(p.name for p in tmp_path.iterdir()) == ["a.pgm", "a.png"]
