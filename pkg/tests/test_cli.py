"""Command line interface: reports, exit codes, determinism."""

from __future__ import annotations

import subprocess
import sys

import pytest

from pgraph.builders import make_decorated, make_hexagonal, make_kagome, make_lattice, make_triangular
from pgraph.cli import run
from pgraph.graphs import parse_graph, serialize_graph, structurally_equal


@pytest.fixture
def kagome_file(tmp_path):
    path = tmp_path / "kagome.pg"
    path.write_text(serialize_graph(make_kagome()), encoding="utf-8")
    return str(path)


@pytest.fixture
def hex_file(tmp_path):
    path = tmp_path / "hex.pg"
    path.write_text(serialize_graph(make_hexagonal()), encoding="utf-8")
    return str(path)


def test_validate_command(kagome_file, capsys):
    assert run(["validate", kagome_file]) == 0
    out = capsys.readouterr().out
    assert "connected=true" in out
    assert "betti=4" in out
    assert "flux_surjective=true" in out
    assert "degree_max=4" in out


def test_invariant_command(kagome_file, capsys):
    assert run(["invariant", kagome_file]) == 0
    out = capsys.readouterr().out
    assert "beta=4" in out
    assert "I=3" in out
    assert "tree_edges=0,1" in out
    assert "edge 3 + value 0 1" in out
    assert "edge 4 + value 1 -1" in out
    assert "edge 5 + value -1 0" in out


def test_bands_command_csv(kagome_file, capsys):
    assert run(["bands", kagome_file, "--grid", "8"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == "theta_1,theta_2,lambda_1,lambda_2,lambda_3"
    assert len(lines) == 1 + 8 * 8
    values = [float(x) for x in lines[1].split(",")]
    assert len(values) == 5


def test_spectrum_command(kagome_file, capsys):
    assert run(["spectrum", kagome_file, "--grid", "16"]) == 0
    out = capsys.readouterr().out
    assert "bound_4I=12 ok=true" in out
    assert "measure=" in out
    lines = out.strip().splitlines()
    # one line per band, then the measure and the bound chain
    assert len(lines) == 5
    assert lines[2].endswith("true")  # flat third band


def test_localize_command(kagome_file, capsys):
    assert run(["localize", kagome_file, "--grid", "16"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == "n mu interval_lo interval_hi band_lo band_hi contained"
    assert all(line.endswith(" true") for line in lines[1:4])
    assert "bound_4I=12" in lines[4]


def test_dirichlet_command(kagome_file, capsys):
    assert run(["dirichlet", kagome_file, "--grid", "16"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("cover=0,1")
    assert all(line.endswith(" true") for line in out.strip().splitlines()[2:])


def test_effmass_command(hex_file, capsys):
    assert run(["effmass", hex_file]) == 0
    out = capsys.readouterr().out
    assert "M=[[" in out
    assert "ok=true" in out
    assert "omega_bounds_ok=true" in out


def test_construct_command(kagome_file, capsys):
    assert run(["construct", kagome_file]) == 0
    out = capsys.readouterr().out
    assert structurally_equal(parse_graph(out), make_kagome())


def test_make_targets(capsys, tmp_path):
    for argv, builder in [
        (["make", "lattice", "2"], make_lattice(2)),
        (["make", "triangular"], make_triangular()),
        (["make", "hexagonal"], make_hexagonal()),
        (["make", "kagome"], make_kagome()),
    ]:
        assert run(argv) == 0
        out = capsys.readouterr().out
        assert parse_graph(out) == builder


def test_make_decorated(tmp_path, capsys):
    g1 = tmp_path / "triangle.pg"
    g1.write_text(
        "dim 1\nvertices 3\nedge 0 1 0\nedge 1 2 0\nedge 2 0 0\n", encoding="utf-8"
    )
    assert run(["make", "decorated", "2", str(g1), "0"]) == 0
    out = capsys.readouterr().out
    assert parse_graph(out) == make_decorated(2, parse_graph(g1.read_text()), 0)


def test_out_flag_writes_file(kagome_file, tmp_path, capsys):
    target = tmp_path / "report.txt"
    assert run(["invariant", kagome_file, "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert run(["invariant", kagome_file]) == 0
    assert target.read_text(encoding="utf-8") == capsys.readouterr().out


def test_output_is_deterministic(kagome_file, capsys):
    assert run(["spectrum", kagome_file, "--grid", "16"]) == 0
    first = capsys.readouterr().out
    assert run(["spectrum", kagome_file, "--grid", "16"]) == 0
    assert capsys.readouterr().out == first


def test_missing_file_is_domain_error(capsys):
    assert run(["validate", "/nonexistent/graph.pg"]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error: cannot read")


def test_bad_graph_file_is_domain_error(tmp_path, capsys):
    path = tmp_path / "bad.pg"
    path.write_text("dim 2\nvertices 1\nedge 0 0 1\n", encoding="utf-8")
    assert run(["validate", str(path)]) == 1
    assert "line 3" in capsys.readouterr().err


def test_odd_grid_is_usage_error(kagome_file, capsys):
    assert run(["spectrum", kagome_file, "--grid", "63"]) == 2
    assert run(["bands", kagome_file, "--grid", "0"]) == 2
    capsys.readouterr()


def test_cap_exhaustion_is_domain_error(kagome_file, capsys):
    assert run(["invariant", kagome_file, "--cap", "5"]) == 1
    assert "cap exceeded" in capsys.readouterr().err


def test_make_usage_errors(capsys, tmp_path):
    assert run(["make", "lattice"]) == 2
    assert run(["make", "lattice", "x"]) == 2
    assert run(["make", "dodecahedral"]) == 2
    assert run(["make", "decorated", "2"]) == 2
    errs = capsys.readouterr().err
    assert "usage error" in errs


def test_unknown_command_is_usage_error(capsys):
    assert run(["frobnicate"]) == 2
    capsys.readouterr()


def test_console_entry_point(kagome_file):
    proc = subprocess.run(
        [sys.executable, "-m", "pgraph.cli", "validate", kagome_file],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "connected=true" in proc.stdout
