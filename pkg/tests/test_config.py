from pydantic import ValidationError
import pytest

from krein.config import RunConfig
from krein.report import OutputFormat


def test_defaults():
    config = RunConfig()
    assert config.nmax == 8
    assert config.tol == 1e-10
    assert config.format is OutputFormat.JSON
    assert config.rho_cuts == [0.0, 0.5, 0.9, 0.99, 0.999]


def test_load_toml_with_overrides(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('nmax = 4\nformat = "csv"\nc_values = [1.0, 10.0]\n')

    config = RunConfig.load(path, nmax=None, seed=7)
    assert config.nmax == 4
    assert config.seed == 7
    assert config.format is OutputFormat.CSV
    assert config.c_values == [1.0, 10.0]

    assert RunConfig.load(path, nmax=2).nmax == 2


def test_environment_is_ignored(monkeypatch):
    monkeypatch.setenv("NMAX", "3")
    assert RunConfig.load().nmax == 8


def test_unknown_key(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text("nmax = 4\nlevels = 3\n")
    with pytest.raises(ValidationError):
        RunConfig.load(path)


@pytest.mark.parametrize(
    "overrides",
    [{"nmax": -1}, {"nodes": 0}, {"tol": 0.0}, {"rho_cuts": [0.5, 1.0]}, {"mass": -2.0}],
)
def test_rejects_out_of_range(overrides):
    with pytest.raises(ValidationError):
        RunConfig.load(**overrides)


def test_echo_is_json_ready(tmp_path):
    echoed = RunConfig(out=tmp_path).echo()
    assert echoed["out"] == str(tmp_path)
    assert echoed["format"] == "json"


def test_updated_validates_overrides():
    config = RunConfig.load(nmax=4)
    assert config.updated(mass=3.0, tau=None).mass == 3.0
    assert config.updated(mass=3.0).nmax == 4
    assert config.updated(tau=None).tau == config.tau
    with pytest.raises(ValidationError):
        config.updated(mass=0.0)
