from __future__ import annotations

import json
import subprocess
import sys

import pytest

from teichlevi.cli import EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC, EXIT_PASS, main


def run(tmp_path, *argv, name="out"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, json.loads((out / "report.json").read_text()), out


def write_json(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture
def g2_curve(tmp_path):
    return write_json(tmp_path, "g2.json", {"branch_points": ["-5/2+1/2i", "-1", "0", "1", "2+1/4i", "3-i"]})


def test_curve_info(tmp_path, g2_curve):
    code, rep, _ = run(tmp_path, "curve-info", "--curve", g2_curve, "--precision", "1e-10")
    assert code == EXIT_PASS
    assert rep["genus"] == 2 and rep["quadratic_dimension"] == 3
    assert rep["periods"]["symmetry_residual"] < 1e-9
    assert rep["config"]["precision"] == 1e-10 and rep["exit_code"] == 0


def test_duplicate_points_exit_2(tmp_path):
    bad = write_json(tmp_path, "bad.json", {"branch_points": ["0", "0", "1", "2", "3", "4"]})
    code, rep, _ = run(tmp_path, "curve-info", "--curve", bad)
    assert code == EXIT_INPUT and rep["error"] == "DuplicateBranchPoint"


def test_missing_file_exit_2(tmp_path):
    code, rep, _ = run(tmp_path, "curve-info", "--curve", str(tmp_path / "nope.json"))
    assert code == EXIT_INPUT


def test_non_simple_cuts_exit_2(tmp_path):
    bad = write_json(tmp_path, "bad.json", {"branch_points": ["0", "1", "-1", "2", "-2", "3"]})
    code, rep, _ = run(tmp_path, "curve-info", "--curve", bad)
    assert code == EXIT_INPUT and rep["error"] == "InvalidCutConfiguration"


def test_quadrature_failure_exit_3(tmp_path, g2_curve):
    code, rep, _ = run(tmp_path, "curve-info", "--curve", g2_curve, "--precision", "1e-30")
    assert code == EXIT_NUMERIC and rep["error"] == "QuadratureNonConvergent"


def test_kernel_from_character(tmp_path, g2_curve):
    code, rep, _ = run(tmp_path, "kernel", "--curve", g2_curve, "--seed", "3")
    assert code == EXIT_PASS and rep["tag"] == "Prop1.3"
    assert rep["annihilator"]["dimension"] == 1 and rep["energy"] > 0


def test_kernel_g6_exact_phi(tmp_path):
    pts = [str(k) for k in range(-7, 7)]
    curve = write_json(tmp_path, "g6.json", {"branch_points": pts})
    code, rep, _ = run(tmp_path, "kernel", "--curve", curve, "--phi", "1,2i,-3,1/2,0,1")
    assert code == EXIT_PASS and rep["annihilator"]["dimension"] == 9


def test_kernel_zero_character(tmp_path, g2_curve):
    code, rep, _ = run(tmp_path, "kernel", "--curve", g2_curve, "--zero-character")
    assert code == EXIT_PASS and rep["degenerate"] and rep["annihilator"]["dimension"] == 3


def test_kernel_bad_phi(tmp_path, g2_curve):
    code, _, _ = run(tmp_path, "kernel", "--curve", g2_curve, "--phi", "1,2,3")
    assert code == EXIT_INPUT


def test_kernel_character_genus_mismatch(tmp_path, g2_curve):
    chi = write_json(tmp_path, "chi.json", {"a": [1, 2, 3], "b": [0, 0, 0]})
    code, _, _ = run(tmp_path, "kernel", "--curve", g2_curve, "--character", chi)
    assert code == EXIT_INPUT


@pytest.mark.parametrize(
    "n, genus, check",
    [
        (3, 4, lambda r: r["stability"]["status"] == "stable" and r["kernel"]["dimension"] == 5),
        (2, 4, lambda r: r["stability"]["status"] == "not_stable" and "discrepancy" in r),
        (4, 5, lambda r: r["stability"]["status"] == "stable" and r["kernel"]["dimension"] >= 2),
    ],
)
def test_higgs(tmp_path, n, genus, check):
    code, rep, _ = run(tmp_path, "higgs", "--genus", str(genus), "--n", str(n), "--seed", "7")
    assert code == EXIT_PASS and check(rep) and rep["nilpotent"]
    assert rep["tag"].startswith("S7.2-")


def test_higgs_small_genus_warning(tmp_path):
    code, rep, _ = run(tmp_path, "higgs", "--genus", "3", "--n", "3")
    assert code == EXIT_PASS and rep["warnings"]


def test_higgs_explicit_point(tmp_path):
    code, rep, _ = run(tmp_path, "higgs", "--genus", "4", "--n", "3", "--x0", "7/3+2i", "--sheet", "-1")
    assert code == EXIT_PASS and rep["bundle"]["p"] == {"x": "7/3+2i", "sheet": -1}


def test_spectral(tmp_path):
    code, rep, _ = run(tmp_path, "spectral", "--genus", "2", "--samples", "40", "--max-rank", "3")
    assert code == EXIT_PASS and rep["zero_point_rejected"] and rep["smooth"] >= 38
    assert rep["hitchin_base_dimensions"] == {"1": 2, "2": 5, "3": 10}


def test_levi(tmp_path, g2_curve):
    code, rep, out = run(tmp_path, "levi", "--curve", g2_curve, "--seed", "1", "--convergence")
    assert code == EXIT_PASS and rep["checks"] and all(rep["checks"].values())
    assert rep["levi"]["near_zero_count"] == 1
    assert rep["convergence"]["relative_change"] < 0.05
    assert (out / "eigenvalues.csv").read_text().startswith("index,eigenvalue,relative")
    assert (out / "spectrum.svg").read_text().lstrip().startswith("<?xml")


def test_levi_zero_character(tmp_path, g2_curve):
    code, rep, _ = run(tmp_path, "levi", "--curve", g2_curve, "--zero-character")
    assert code == EXIT_PASS and rep["degenerate"]


def test_levi_step_collision(tmp_path, g2_curve):
    code, rep, _ = run(tmp_path, "levi", "--curve", g2_curve, "--step", "0.05")
    assert code == EXIT_NUMERIC and rep["error"] == "StencilCollision"


@pytest.mark.parametrize("what", ["kernel", "rr", "higgs-odd"])
def test_sweeps(tmp_path, what):
    genera = ["4", "5"] if what == "higgs-odd" else ["2", "3"]
    code, rep, _ = run(tmp_path, "sweep", "--what", what, "--genera", *genera, "--count", "4")
    assert code == EXIT_PASS and all(r["matches"] == r["count"] for r in rep["rows"])


@pytest.mark.parametrize("argv", [["kernel", "--genus", "3"], ["levi", "--seed", "4"], ["sweep", "--what", "rr"]])
def test_reports_are_deterministic(tmp_path, argv):
    main([*argv, "--out", str(tmp_path / "a")])
    first = (tmp_path / "a" / "report.json").read_bytes()
    main([*argv, "--out", str(tmp_path / "a")])
    assert (tmp_path / "a" / "report.json").read_bytes() == first
    if argv[0] == "levi":
        svg = (tmp_path / "a" / "spectrum.svg").read_bytes()
        main([*argv, "--out", str(tmp_path / "a")])
        assert (tmp_path / "a" / "spectrum.svg").read_bytes() == svg


def test_console_entry_point(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "teichlevi.cli", "curve-info", "--genus", "2", "--out", str(tmp_path / "o")],
        capture_output=True,
        text=True,
    )
    assert res.returncode == EXIT_PASS and "PASS" in res.stdout


def test_failure_exit_code_is_distinct():
    assert len({EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC}) == 4
