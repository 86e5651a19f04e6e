"""Reading signals and images, writing coefficient dumps and matrices.

Signals are plain text with one or more reals per line separated by commas
or whitespace. Images are 8-bit PGM (P2 or P5, read with Pillow) or a CSV
matrix. All numbers written out use 17 significant digits.
"""
from __future__ import annotations

import contextlib
import csv
import re
import sys
from pathlib import Path
from typing import TextIO

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ParseError, UnsupportedFormat
from .spectra import format_float
from .transform1d import Decomposition1D
from .transform2d import Decomposition2D

_SEPARATORS = re.compile(r"[,\s]+")
PGM_MAGICS = (b"P2", b"P5")

DUMP_1D_HEADER = ["level", "position", "re", "im_i", "im_j", "im_k"]
DUMP_2D_HEADER = ["row_level", "col_level", "row", "col", "re", "im_i", "im_j", "im_k"]


def _parse_row(text: str, path, lineno: int) -> list[float]:
    out = []
    for token in _SEPARATORS.split(text.strip()):
        if not token:
            continue
        try:
            value = float(token)
        except ValueError:
            raise ParseError(path, lineno, f"not a number: {token!r}") from None
        if not np.isfinite(value):
            raise ParseError(path, lineno, f"non-finite value {token!r}")
        out.append(value)
    return out


def read_signal(path) -> np.ndarray:
    """All reals in the file, in reading order; blank lines are skipped."""
    values: list[float] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            values.extend(_parse_row(line, path, lineno))
    return np.array(values, dtype=float)


def read_matrix_csv(path) -> np.ndarray:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            row = _parse_row(line, path, lineno)
            if not row:
                continue
            if rows and len(row) != len(rows[0]):
                raise ParseError(path, lineno, f"expected {len(rows[0])} columns, got {len(row)}")
            rows.append(row)
    if not rows:
        raise ParseError(path, 0, "no data")
    return np.array(rows, dtype=float)


def read_pgm(path) -> np.ndarray:
    try:
        with Image.open(path) as img:
            if img.format != "PPM" or img.mode != "L":
                raise UnsupportedFormat(f"{path}: only 8-bit greyscale PGM is supported "
                                        f"(got {img.format} {img.mode})")
            return np.asarray(img, dtype=float)
    except UnidentifiedImageError:
        raise UnsupportedFormat(f"{path}: not a readable PGM image") from None


def sniff_format(path) -> str:
    with open(path, "rb") as fh:
        head = fh.read(2)
    return "pgm" if head in PGM_MAGICS else "csv"


def read_image(path, fmt: str = "auto") -> np.ndarray:
    """Pixel values as reals, no rescaling (PGM grey levels stay in 0..255)."""
    if fmt == "auto":
        fmt = sniff_format(path)
    if fmt == "pgm":
        return read_pgm(path)
    if fmt == "csv":
        return read_matrix_csv(path)
    raise UnsupportedFormat(f"unknown image format {fmt!r}")


def write_values(values, out: TextIO) -> None:
    for v in np.asarray(values, dtype=float).ravel():
        out.write(format_float(v) + "\n")


def write_matrix_csv(matrix, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    for row in np.asarray(matrix, dtype=float):
        writer.writerow([format_float(v) for v in row])


def write_dump_1d(d: Decomposition1D, out: TextIO) -> None:
    """One row per coefficient; level 0 is the coarse band, then 1..p coarsest first."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(DUMP_1D_HEADER)
    for level in range(d.p + 1):
        for pos, q in enumerate(d.subband(level)):
            writer.writerow([level, pos] + [format_float(v) for v in q])


def write_dump_2d(B: Decomposition2D, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(DUMP_2D_HEADER)
    b1, b2, m, n, _ = B.coeffs.shape
    for j1 in range(b1):
        for j2 in range(b2):
            block = B.coeffs[j1, j2]
            for r in range(m):
                for c in range(n):
                    writer.writerow([j1, j2, r, c] + [format_float(v) for v in block[r, c]])


def output_stream(path):
    """Open ``path`` for text writing, or stdout for ``None`` / ``-``."""
    if path in (None, "-"):
        return contextlib.nullcontext(sys.stdout)
    return open(Path(path), "w", encoding="utf-8", newline="")
