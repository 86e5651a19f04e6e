import subprocess
import sys

import numpy as np
import pytest
from PIL import Image

from ndqwt.cli import main
from ndqwt.io import write_matrix_csv


def run(*args):
    return main([str(a) for a in args])


def fbm_file(tmp_path, hurst=0.5, length=4096, seed=0, name="sig.txt"):
    path = tmp_path / name
    assert run("simulate-fbm", "--hurst", hurst, "--length", length, "--seed", seed,
               "--output", path) == 0
    return path


def test_features1d_segments(tmp_path):
    out = tmp_path / "f.csv"
    assert run("features1d", fbm_file(tmp_path), "--output", out) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 5
    assert lines[0].startswith("id,slope,hurst,phi_1,") and lines[0].endswith("psi_9")
    assert [l.split(",")[0] for l in lines[1:]] == [f"sig.txt:{k}" for k in range(4)]


def test_features1d_short_input_warns(tmp_path, capsys):
    out = tmp_path / "f.csv"
    assert run("features1d", fbm_file(tmp_path, length=1000), "--output", out) == 0
    assert out.read_text().count("\n") == 1
    assert "no complete segment" in capsys.readouterr().err


def test_features1d_parallel_matches_serial(tmp_path):
    sig = fbm_file(tmp_path, length=8192)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("features1d", sig, "--segment", 1024, "--output", a) == 0
    assert run("features1d", sig, "--segment", 1024, "--jobs", 3, "--output", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_features2d_pgm_and_csv(tmp_path):
    pixels = np.random.default_rng(0).integers(0, 256, size=(128, 512), dtype=np.uint8)
    pgm, csv_path = tmp_path / "img.pgm", tmp_path / "img.csv"
    Image.fromarray(pixels).save(pgm)
    with open(csv_path, "w") as fh:
        write_matrix_csv(pixels, fh)
    outs = []
    for path in (pgm, csv_path):
        out = tmp_path / f"{path.suffix[1:]}.out"
        assert run("features2d", path, "--levels", 4, "--levels2", 4, "--output", out) == 0
        outs.append(out.read_text().splitlines())
    assert len(outs[0]) == 2 and outs[0][0].endswith("psi_4")
    assert outs[0][1].split(",")[1:] == outs[1][1].split(",")[1:]


def test_features2d_constant_image(tmp_path, capsys):
    path = tmp_path / "flat.csv"
    with open(path, "w") as fh:
        write_matrix_csv(np.full((16, 16), 3.0), fh)
    out = tmp_path / "f.csv"
    assert run("features2d", path, "--output", out) == 0
    assert "degenerate" in capsys.readouterr().err
    assert out.read_text().splitlines()[1].split(",")[1] == "nan"


def test_transform_row_counts(tmp_path):
    sig = tmp_path / "s.txt"
    sig.write_text("\n".join(str(v) for v in np.random.default_rng(1).normal(size=300)))
    out = tmp_path / "d.csv"
    assert run("transform", sig, "--levels", 5, "--output", out) == 0
    assert out.read_text().count("\n") == 1 + 1800
    img = tmp_path / "z.csv"
    with open(img, "w") as fh:
        write_matrix_csv(np.zeros((16, 24)), fh)
    assert run("transform", img, "--levels", 2, "--levels2", 3, "--output", out) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 4608
    assert all(l.endswith(",0,0,0,0") for l in lines[1:])


def test_verify_filters(capsys):
    assert run("verify-filters") == 0
    text = capsys.readouterr().out
    for d in range(5):
        assert f"moment d={d}" in text
    for m in range(1, 5):
        assert f"orth H,H m={m}" in text
    assert "PASS" in text


def _footer(path):
    last = path.read_text().splitlines()[-1]
    assert last.startswith("# ")
    return dict(kv.split("=") for kv in last[2:].split(","))


def test_spectra_fbm_slope(tmp_path):
    slopes = []
    for seed in range(5):
        out = tmp_path / f"sp{seed}.csv"
        assert run("spectra", fbm_file(tmp_path, 0.7, seed=seed), "--output", out) == 0
        assert out.read_text().startswith("level,log_energy\n1,")
        slopes.append(float(_footer(out)["slope"]))
    assert np.mean(slopes) == pytest.approx(-2.4, abs=0.25)


def test_spectra_level_range_and_2d(tmp_path):
    sig = fbm_file(tmp_path, 0.5)
    out = tmp_path / "sp.csv"
    assert run("spectra", sig, "--slope-levels", "3:8", "--output", out) == 0
    assert _footer(out)["levels"] == "3:8"
    field = tmp_path / "f.csv"
    assert run("simulate-fbm", "--dim", 2, "--hurst", 0.5, "--shape", "64x64", "--output", field) == 0
    assert run("spectra", field, "--output", out) == 0
    assert out.read_text().count("\n") == 1 + 5 + 1


def test_spectra_constant_input_fails(tmp_path, capsys):
    sig = tmp_path / "c.txt"
    sig.write_text("2\n" * 64)
    assert run("spectra", sig, "--no-end-match") == 1
    assert "detail level 1" in capsys.readouterr().err


def test_errors_exit_nonzero(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1\n2\nx\n")
    assert run("features1d", bad) == 1
    assert "bad.txt:3" in capsys.readouterr().err
    assert run("features1d", tmp_path / "missing.txt") == 1
    assert run("simulate-fbm", "--hurst", 1.5) == 1


def test_simulate_is_deterministic(tmp_path):
    a = fbm_file(tmp_path, 0.3, 512, seed=4, name="a.txt")
    b = fbm_file(tmp_path, 0.3, 512, seed=4, name="b.txt")
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 512


def test_console_script_runs():
    res = subprocess.run([sys.executable, "-m", "ndqwt.cli", "verify-filters"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "PASS" in res.stdout
