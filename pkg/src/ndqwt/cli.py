"""``ndqwt`` command-line entry point."""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import io as qio
from .errors import NDQWTError
from .fbm import FbmSpec, generate_fbm_1d, generate_fbm_2d
from .filters import verify_design_equations
from .spectra import (FeatureRow, end_match, features_1d, features_2d, fit_slope, format_float,
                      level_energies_1d, level_energies_2d, parse_level_range, write_features_csv)
from .transform1d import build_plan_1d, default_levels, forward_1d
from .transform2d import build_plan_2d, forward_2d


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _parse_shape(text: str) -> tuple[int, int]:
    try:
        m, n = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"shape must look like MxN, got {text!r}") from None
    return m, n


def _run_ordered(func, items, jobs: int):
    """Map ``func`` over ``items``, results in input order."""
    if jobs <= 1 or len(items) <= 1:
        return [func(*it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, *zip(*items)))


def _segment_features(segment, p, levels, ident, match_ends):
    plan = build_plan_1d(segment.shape[0], p)
    return features_1d(segment, plan, levels, ident, match_ends)


def _image_features(path, fmt, p1, p2, s, levels, match_ends):
    A = qio.read_image(path, fmt)
    plan = build_plan_2d(*A.shape, p1, p2)
    return features_2d(A, plan, s, levels, Path(path).name, match_ends)


def _write_rows(rows: list[FeatureRow], p: int, output) -> None:
    with qio.output_stream(output) as out:
        write_features_csv(rows, out, p)


def cmd_features1d(args) -> int:
    seg = args.segment
    p = args.levels or default_levels(seg)
    if seg < 2 ** (p + 1):
        _warn(f"segment length {seg} is shorter than 2^(p+1) = {2 ** (p + 1)}")
    items = []
    for path in args.inputs:
        y = qio.read_signal(path)
        for k in range(y.shape[0] // seg):
            items.append((y[k * seg:(k + 1) * seg], p, args.slope_levels,
                          f"{Path(path).name}:{k}", not args.no_end_match))
    if not items:
        _warn(f"no complete segment of length {seg} in the input; wrote the header only")
    rows = _run_ordered(_segment_features, items, args.jobs)
    _write_rows(rows, p, args.output)
    return 0


def cmd_features2d(args) -> int:
    items = [(path, args.format, args.levels, args.levels2, args.shift, args.slope_levels,
              args.end_match) for path in args.inputs]
    rows = _run_ordered(_image_features, items, args.jobs)
    for row in rows:
        if row.degenerate:
            _warn(f"{row.id}: degenerate spectrum at levels {list(row.degenerate)}")
    _write_rows(rows, rows[0].p, args.output)
    return 0


def _load(args):
    """Input as a 1-D signal or a 2-D image, following ``--dim`` or the file shape."""
    fmt = args.format
    if fmt == "auto":
        fmt = qio.sniff_format(args.input)
    if fmt == "pgm":
        if args.dim == 1:
            raise NDQWTError("a PGM image cannot be read as a 1-D signal")
        return qio.read_pgm(args.input)
    if args.dim == 1:
        return qio.read_signal(args.input)
    data = qio.read_matrix_csv(args.input)
    if args.dim is None and min(data.shape) == 1:
        return data.ravel()
    return data


def cmd_transform(args) -> int:
    data = _load(args)
    with qio.output_stream(args.output) as out:
        if data.ndim == 1:
            qio.write_dump_1d(forward_1d(build_plan_1d(data.size, args.levels), data), out)
        else:
            plan = build_plan_2d(*data.shape, args.levels, args.levels2)
            qio.write_dump_2d(forward_2d(plan, data), out)
    return 0


def cmd_spectra(args) -> int:
    data = _load(args)
    if data.ndim == 1:
        signal = data if args.no_end_match else end_match(data)
        points = level_energies_1d(forward_1d(build_plan_1d(data.size, args.levels), signal))
        dimension = 1
    else:
        image = end_match(data) if args.end_match else data
        plan = build_plan_2d(*data.shape, args.levels, args.levels2)
        points = level_energies_2d(forward_2d(plan, image), args.shift)
        dimension = 2
    fit = fit_slope(points, args.slope_levels, dimension=dimension)
    with qio.output_stream(args.output) as out:
        out.write("level,log_energy\n")
        for pt in points:
            out.write(f"{pt.level},{format_float(pt.log_energy)}\n")
        out.write(f"# slope={format_float(fit.slope)},intercept={format_float(fit.intercept)},"
                  f"hurst={format_float(fit.hurst)},levels={fit.levels_used[0]}:"
                  f"{fit.levels_used[1]}\n")
    return 0


def cmd_verify_filters(args) -> int:
    report = verify_design_equations()
    with qio.output_stream(args.output) as out:
        for line in report.lines():
            out.write(line + "\n")
        status = "PASS" if report.passed() else "FAIL"
        out.write(f"shipped assignment worst residual {report.worst():.3e}: {status}\n")
    return 0 if report.passed() else 1


def cmd_simulate_fbm(args) -> int:
    with qio.output_stream(args.output) as out:
        if args.dim == 1:
            qio.write_values(generate_fbm_1d(FbmSpec(args.hurst, args.length, args.seed)), out)
        else:
            field = generate_fbm_2d(FbmSpec(args.hurst, args.shape, args.seed))
            qio.write_matrix_csv(field, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ndqwt",
                                     description="Non-decimated quaternion wavelet toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, levels2=False, shift=False, fmt=False):
        p.add_argument("--levels", type=int, help="detail levels (rows for 2-D)")
        if levels2:
            p.add_argument("--levels2", type=int, help="detail levels along columns")
        if shift:
            p.add_argument("--shift", type=int, default=0, help="diagonal shift s (default 0)")
        if fmt:
            p.add_argument("--format", choices=("csv", "pgm", "auto"), default="auto")
        p.add_argument("--output", "-o", help="output file (default stdout)")

    def slope(p):
        p.add_argument("--slope-levels", type=parse_level_range, metavar="A:B",
                       help="inclusive level range of the regression (default all)")

    def matching(p):
        p.add_argument("--no-end-match", action="store_true",
                       help="1-D: skip removing the line through the end points")
        p.add_argument("--end-match", action="store_true",
                       help="2-D: remove the end-point lines along rows and columns")

    def jobs(p):
        p.add_argument("--jobs", type=int, default=1, help="worker processes (output order fixed)")

    p = sub.add_parser("features1d", help="feature rows for 1-D signal segments")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--segment", type=int, default=1024)
    common(p)
    slope(p)
    jobs(p)
    p.add_argument("--no-end-match", action="store_true",
                   help="skip removing the line through each segment's end points")
    p.set_defaults(func=cmd_features1d)

    p = sub.add_parser("features2d", help="one feature row per image")
    p.add_argument("inputs", nargs="+")
    common(p, levels2=True, shift=True, fmt=True)
    slope(p)
    jobs(p)
    p.add_argument("--end-match", action="store_true",
                   help="remove the end-point lines along rows and columns first")
    p.set_defaults(func=cmd_features2d)

    p = sub.add_parser("transform", help="dump all coefficients")
    p.add_argument("input")
    p.add_argument("--dim", type=int, choices=(1, 2))
    common(p, levels2=True, fmt=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("spectra", help="level / log-energy table with the fitted line")
    p.add_argument("input")
    p.add_argument("--dim", type=int, choices=(1, 2))
    common(p, levels2=True, shift=True, fmt=True)
    slope(p)
    matching(p)
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("verify-filters", help="design-equation residuals of the filter bank")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_verify_filters)

    p = sub.add_parser("simulate-fbm", help="write a seeded fBm path or field")
    p.add_argument("--dim", type=int, choices=(1, 2), default=1)
    p.add_argument("--hurst", type=float, required=True)
    p.add_argument("--length", type=int, default=4096, help="1-D path length")
    p.add_argument("--shape", type=_parse_shape, default=(128, 128), help="2-D field MxN")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_simulate_fbm)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NDQWTError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
