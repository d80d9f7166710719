import json

import pytest
from typer.testing import CliRunner

from krein.cli import app


runner = CliRunner()


def _invoke(*args: str):
    return runner.invoke(app, list(args))


def _report(*args: str) -> dict:
    result = _invoke(*args)
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


def test_verify_algebra():
    report = _report("--nmax=4", "verify-algebra", "--no-symbols")
    assert report["command"] == "verify-algebra"
    assert report["config"]["nmax"] == 4
    assert report["checks"]
    assert all(check["passed"] for check in report["checks"])


def test_verify_algebra_without_guard_fails():
    result = _invoke("--nmax=2", "--no-guard", "verify-algebra", "--no-symbols")
    assert result.exit_code == 1


def test_invalid_configuration_is_a_usage_error():
    assert _invoke("--nmax=-1", "verify-algebra").exit_code == 2


def test_unknown_config_key(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text("levels = 3\n")
    assert _invoke("--config", str(path), "spectrum").exit_code == 2


def test_config_file(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text("nmax = 4\n")
    report = _report("--config", str(path), "spectrum")
    assert report["config"]["nmax"] == 4
    assert [row[0] for row in report["table"]] == [0, 1, 2]


def test_spectrum():
    report = _report("--nmax=5", "spectrum")
    assert report["columns"][:3] == ["level", "expected", "multiplicity"]
    assert [row[1:3] for row in report["table"]] == [[8, 1], [12, 4], [16, 10], [20, 20]]


def test_inner_table():
    report = _report("--nodes=24", "inner-table", "--levels", "1")
    assert report["summary"] == {"levels": 1, "size": 5}
    assert len(report["table"]) == 25
    diagonal = {row[0]: row[2] for row in report["table"] if row[0] == row[1]}
    assert diagonal == {"0000": 1.0, "1000": -1.0, "0100": 1.0, "0010": 1.0, "0001": 1.0}


def test_inner_table_without_quadrature():
    report = _report("inner-table", "--levels", "2", "--no-quadrature")
    assert report["columns"] == ["m", "n", "algebraic"]
    assert len(report["checks"]) == 1


def test_overlap():
    report = _report("overlap", "--fock-nmax", "16", "--count", "2")
    assert report["summary"]["seed"] == 0
    assert len(report["summary"]["labels"]) == 2
    assert len(report["table"]) == 3


def test_overlap_is_deterministic():
    args = ("--seed=5", "overlap", "--fock-nmax", "6", "--count", "2", "--overlap-tol", "1")
    first, second = _invoke(*args), _invoke(*args)
    assert first.exit_code == 0, first.output
    assert first.stdout == second.stdout


def test_evolve():
    report = _report("evolve")
    assert report["summary"]["x1(tau)"] == "1.5*p1 + x1"
    assert report["summary"]["klein_gordon_eigenvalue"] == pytest.approx(-1.0)
    assert {check["tag"] for check in report["checks"]} >= {"heisenberg-flow", "mass-shell"}


@pytest.mark.parametrize("mass", ["0", "-1.5"])
def test_evolve_rejects_non_positive_mass(mass: str):
    result = _invoke("evolve", f"--mass={mass}")
    assert result.exit_code == 2
    assert "mass" in result.output


def test_divergence_rho():
    report = _report("divergence", "rho")
    by_cut = {row[0]: row for row in report["table"]}
    assert by_cut[0.9][2] == pytest.approx(6.2090, abs=1e-4)


def test_csv_format():
    result = _invoke("--format=csv", "--nmax=4", "spectrum")
    assert result.exit_code == 0, result.output
    assert result.stdout.splitlines()[0] == "level,expected,multiplicity,max_deviation,max_imag"


def test_out_directory(tmp_path):
    result = _invoke(f"--out={tmp_path}", "divergence", "rho")
    assert result.exit_code == 0, result.output
    assert result.stdout == ""
    report = json.loads((tmp_path / "divergence-rho.json").read_text())
    assert report["command"] == "divergence-rho"


def test_contract_classical():
    report = _report("contract", "classical")
    assert report["summary"]["rates"]["star"] == pytest.approx(-1.0, rel=0.02)


def test_contract_separation_timelike_flags():
    report = _report("contract", "separation", "--timelike")
    assert report["summary"]["flags"]
    assert report["summary"]["timelike"] is True


@pytest.mark.slow
def test_contract_galilean():
    report = _report("contract", "galilean")
    assert report["summary"]["t_rates"]["t_divergence"] == pytest.approx(0.045, rel=1e-2)


@pytest.mark.slow
def test_divergence_unitary():
    report = _report("divergence", "unitary", "--nodes", "120")
    assert report["summary"]["divergent"]
