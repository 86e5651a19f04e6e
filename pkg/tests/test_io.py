import io

import numpy as np
import pytest
from PIL import Image

from ndqwt import ParseError, UnsupportedFormat, build_plan_1d, build_plan_2d, forward_1d, forward_2d
from ndqwt.io import (read_image, read_matrix_csv, read_signal, sniff_format, write_dump_1d,
                      write_dump_2d, write_matrix_csv, write_values)


def test_read_signal_separators(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text("1.5\n2, 3\n\n-4e-1 5\n")
    np.testing.assert_array_equal(read_signal(path), [1.5, 2, 3, -0.4, 5])


def test_parse_error_reports_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1\n2\nthree\n")
    with pytest.raises(ParseError) as err:
        read_signal(path)
    assert err.value.line == 3 and "bad.txt:3" in str(err.value)
    path.write_text("1\nnan\n")
    with pytest.raises(ParseError):
        read_signal(path)


def test_matrix_csv(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1,2,3\n4,5,6\n")
    np.testing.assert_array_equal(read_matrix_csv(path), [[1, 2, 3], [4, 5, 6]])
    path.write_text("1,2,3\n4,5\n")
    with pytest.raises(ParseError) as err:
        read_matrix_csv(path)
    assert err.value.line == 2


@pytest.mark.parametrize("plain", [False, True])
def test_pgm_matches_csv(tmp_path, plain):
    pixels = np.random.default_rng(0).integers(0, 256, size=(12, 20), dtype=np.uint8)
    pgm = tmp_path / "img.pgm"
    if plain:
        rows = "\n".join(" ".join(str(v) for v in r) for r in pixels)
        pgm.write_text(f"P2\n20 12\n255\n{rows}\n")
    else:
        Image.fromarray(pixels).save(pgm)
    csv_path = tmp_path / "img.csv"
    with open(csv_path, "w") as fh:
        write_matrix_csv(pixels, fh)
    assert sniff_format(pgm) == "pgm" and sniff_format(csv_path) == "csv"
    np.testing.assert_array_equal(read_image(pgm), pixels.astype(float))
    np.testing.assert_array_equal(read_image(csv_path), read_image(pgm))


def test_unsupported_images(tmp_path):
    png = tmp_path / "x.png"
    Image.fromarray(np.zeros((4, 4), dtype=np.uint8)).save(png)
    with pytest.raises(UnsupportedFormat):
        read_image(png, "pgm")
    ppm = tmp_path / "x.ppm"
    Image.fromarray(np.zeros((4, 4, 3), dtype=np.uint8)).save(ppm)
    with pytest.raises(UnsupportedFormat):
        read_image(ppm, "pgm")
    with pytest.raises(UnsupportedFormat):
        read_image(ppm, "tiff")


def test_dump_1d_layout():
    d = forward_1d(build_plan_1d(300, 5), np.random.default_rng(1).normal(size=300))
    buf = io.StringIO()
    write_dump_1d(d, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "level,position,re,im_i,im_j,im_k"
    assert len(lines) == 1 + 1800
    level, pos, *vals = lines[1 + 2 * 300 + 4].split(",")
    assert (level, pos) == ("2", "4")
    assert [float(v) for v in vals] == d.details[1, 4].tolist()


def test_dump_2d_layout():
    B = forward_2d(build_plan_2d(16, 24, 2, 3), np.zeros((16, 24)))
    buf = io.StringIO()
    write_dump_2d(B, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "row_level,col_level,row,col,re,im_i,im_j,im_k"
    assert len(lines) == 1 + 12 * 16 * 24
    assert all(line.endswith("0,0,0,0") for line in lines[1:])


def test_values_use_17_digits():
    buf = io.StringIO()
    write_values([0.1, 1 / 3], buf)
    assert buf.getvalue() == "0.10000000000000001\n0.33333333333333331\n"
