"""Grid sweeps and the command-line interface: determinism across thread
counts, status handling, exit codes, and config-file merging."""

import json
import math
import os
import subprocess
import sys

import pytest

from sirtimes import (
    CSV_HEADER,
    GridSpec,
    ModelParams,
    rows_to_csv,
    run_grid,
)
from sirtimes.cli import main
from sirtimes.errors import DomainError

P23 = ("--beta", "2", "--gamma", "3")


def test_gridspec_validation():
    with pytest.raises(DomainError):
        GridSpec(2.0, 1.0, 5, 0.0, 1.0, 5)
    with pytest.raises(DomainError):
        GridSpec(0.0, 1.0, 1, 0.0, 1.0, 5)
    with pytest.raises(DomainError):
        GridSpec(0.0, 1.0, 5, 0.0, 1.0, 5, spacing="cubic")
    with pytest.raises(DomainError):
        GridSpec(0.0, 1.0, 5, 0.5, 1.0, 5, spacing="log")


def test_gridspec_axes():
    spec = GridSpec(0.0, 6.0, 4, 1.0, 5.0, 3)
    assert list(spec.xs()) == [0.0, 2.0, 4.0, 6.0]
    assert list(spec.ys()) == [1.0, 3.0, 5.0]
    logspec = GridSpec(1.0, 100.0, 3, 1.0, 4.0, 3, spacing="log")
    assert list(logspec.xs()) == pytest.approx([1.0, 10.0, 100.0])


def test_grid_row_major_order(p23):
    spec = GridSpec(1.0, 3.0, 3, 2.0, 3.0, 2)
    res = run_grid(p23, spec, "u", "integral")
    coords = [(r.x, r.y) for r in res.rows]
    assert coords == [
        (1.0, 2.0), (2.0, 2.0), (3.0, 2.0),
        (1.0, 3.0), (2.0, 3.0), (3.0, 3.0),
    ]


def test_grid_deterministic_across_threads(p23):
    spec = GridSpec(0.1, 6.0, 13, 1.01, 5.0, 9)
    base = rows_to_csv(run_grid(p23, spec, "u", "integral", threads=1).rows)
    again = rows_to_csv(run_grid(p23, spec, "u", "integral", threads=1).rows)
    threaded = rows_to_csv(run_grid(p23, spec, "u", "integral", threads=3).rows)
    assert base == again == threaded


def test_grid_methods_agree(p23):
    spec = GridSpec(2.0, 5.0, 4, 1.5, 4.0, 4)
    by_int = run_grid(p23, spec, "v", "integral")
    by_ode = run_grid(p23, spec, "v", "ode")
    for a, b in zip(by_int.rows, by_ode.rows):
        assert a.value == pytest.approx(b.value, rel=1e-6, abs=1e-9)


def test_grid_boundary_tags(p23):
    spec = GridSpec(0.0, 1.5, 2, 0.5, 1.0, 2)
    res = run_grid(p23, spec, "u", "integral")
    assert not res.failed
    for r in res.rows:
        assert r.value == 0.0
        assert r.method == "BoundaryZero"


def test_grid_exact_x0_tag(p23):
    spec = GridSpec(0.0, 2.0, 2, 2.0, 3.0, 2)
    res = run_grid(p23, spec, "u", "integral")
    methods = {(r.x, r.method) for r in res.rows}
    assert (0.0, "ExactX0") in methods
    assert (2.0, "Integral") in methods
    x0 = [r for r in res.rows if r.x == 0.0 and r.y == 2.0][0]
    assert x0.value == pytest.approx(math.log(2.0) / 3.0, rel=1e-12)


def test_grid_never_reached_rows(p23):
    spec = GridSpec(2.0, 3.0, 2, 0.0, 1.0, 2)
    res = run_grid(p23, spec, "v", "integral")
    assert res.failed
    bad = [r for r in res.rows if r.status == "never_reached"]
    assert len(bad) == 2
    assert all(r.y == 0.0 and r.value is None for r in bad)


def test_grid_csv_round_trip(p23):
    spec = GridSpec(2.0, 5.0, 3, 1.5, 4.0, 2)
    res = run_grid(p23, spec, "u", "integral")
    text = rows_to_csv(res.rows)
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + len(res.rows)
    for line, row in zip(lines[1:], res.rows):
        cells = line.split(",")
        assert float(cells[0]) == row.x
        assert float(cells[2]) == row.value  # 17 digits round-trip exactly
        assert cells[3] == row.method
        assert cells[8] == "ok"


def test_cli_compute_both_routes(capsys):
    code = main(["compute", *P23, "--x", "4", "--y", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "OdeEvent" in out and "Integral" in out
    assert "relative discrepancy" in out


def test_cli_compute_exact_x0(capsys):
    y = repr(math.e**3)
    code = main(["compute", *P23, "--x", "0", "--y", y, "--time", "u", "--method", "ode"])
    out = capsys.readouterr().out
    assert code == 0
    assert "OdeEvent" in out


def test_cli_missing_params(capsys):
    assert main(["compute", "--x", "4", "--y", "2"]) == 2


def test_cli_bad_range(capsys):
    code = main(["grid", *P23, "--x", "1:2", "--y", "1:5:3", "--time", "u"])
    assert code == 2


def test_cli_never_reached(capsys):
    code = main(["compute", *P23, "--x", "5", "--y", "0", "--time", "v",
                 "--method", "integral"])
    assert code == 4


def test_cli_grid_row_failures(tmp_path, capsys):
    out = tmp_path / "v.csv"
    code = main(["grid", *P23, "--x", "2:3:2", "--y", "0:1:2", "--time", "v",
                 "--out", str(out)])
    assert code == 5
    err = capsys.readouterr().err
    assert "failed" in err
    assert "never_reached" in out.read_text()


def test_cli_grid_csv_to_file(tmp_path):
    out = tmp_path / "u.csv"
    code = main(["grid", *P23, "--x", "1:5:3", "--y", "2:4:2", "--time", "u",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 6


def test_cli_grid_json(tmp_path):
    out = tmp_path / "u.json"
    code = main(["grid", *P23, "--x", "1:5:3", "--y", "2:4:2", "--time", "u",
                 "--format", "json", "--out", str(out)])
    assert code == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 6
    assert {"x", "y", "value", "method", "status"} <= set(rows[0])


def test_cli_grid_stdout(capsys):
    code = main(["grid", *P23, "--x", "2:4:2", "--y", "2:3:2", "--time", "u"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith(CSV_HEADER)


def test_cli_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# parameter block\nbeta = 2\ngamma = 3\n")
    y = repr(math.e**3)
    code = main(["compute", "--config", str(cfg), "--gamma", "4", "--x", "0",
                 "--y", y, "--time", "u", "--method", "integral"])
    out = capsys.readouterr().out
    assert code == 0
    # CLI gamma=4 overrides the file: u(0, e^3) = 3/4
    assert "0.75" in out


def test_cli_config_json(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text('{"beta": 2, "gamma": 3}\n')
    code = main(["compute", "--config", str(cfg), "--x", "4", "--y", "2"])
    assert code == 0


def test_cli_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text('{"beta": 2, "gamma": 3, "zeta": 1}\n')
    code = main(["compute", "--config", str(cfg), "--x", "4", "--y", "2"])
    assert code == 2


def test_cli_config_bad_json(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text("{broken\n")
    code = main(["compute", "--config", str(cfg), "--x", "4", "--y", "2"])
    assert code == 2


def test_cli_bounds_text(capsys):
    code = main(["bounds", *P23, "--x", "5", "--y", "1", "--time", "v"])
    out = capsys.readouterr().out
    assert code == 0
    assert "lower" in out and "crude_upper" in out


def test_cli_bounds_csv(tmp_path):
    out = tmp_path / "b.csv"
    code = main(["bounds", *P23, "--x", "5", "--y", "1", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "time,lower,upper,crude_upper,subcritical_upper"
    assert len(lines) == 3


def test_cli_asymptotics_ray(capsys):
    code = main(["asymptotics", *P23, "--time", "u", "--ray", "x=0",
                 "--r", "10,100"])
    out = capsys.readouterr().out
    assert code == 0
    # along x = 0 the leading-order formula is exact
    assert "1.000000000000" in out


def test_fallback_path_matches_jit_bitwise(tmp_path, p23):
    # the pure-Python kernels must produce byte-identical output to the
    # compiled ones; a subprocess is needed because the flag is read at import
    spec = GridSpec(0.5, 5.0, 7, 0.5, 4.0, 5)
    here = rows_to_csv(run_grid(p23, spec, "u", "integral", threads=1).rows)
    env = dict(os.environ, SIRTIMES_NO_JIT="1")
    probe = subprocess.run(
        [sys.executable, "-c", "import sirtimes; print(sirtimes.JIT_ENABLED)"],
        env=env, capture_output=True, text=True, timeout=120,
    )
    assert probe.stdout.strip() == "False"
    cp = subprocess.run(
        [sys.executable, "-m", "sirtimes.cli", "grid", *P23,
         "--x", "0.5:5:7", "--y", "0.5:4:5", "--time", "u",
         "--method", "integral", "--threads", "1"],
        env=env, capture_output=True, text=True, timeout=300,
    )
    assert cp.returncode == 0, cp.stderr
    assert cp.stdout == here


def test_cli_verify_quick(capsys):
    code = main(["verify", *P23, "--quick"])
    out = capsys.readouterr().out
    assert code == 0
    assert "checks passed" in out
    assert "FAIL" not in out
