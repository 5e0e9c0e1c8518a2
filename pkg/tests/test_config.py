import pytest

from pullin.config import default_config, default_config_text, load_config, merge
from pullin.exceptions import ConfigError


def _write(tmp_path, text):
    path = tmp_path / "run.toml"
    path.write_text(text, encoding="utf-8")
    return path


def test_defaults():
    config = load_config()

    assert config.grid.plate.n == 24
    assert config.grid.m == 24
    assert config.parameters.lam == 1.0
    assert config.time.dt == 1e-4
    assert config.time.t_end == 2.0
    assert config.time.dissipation == "exponential"
    assert config.time.force == "variational"
    assert config.admissibility.rho == 0.01
    assert config.delta_stop == 0.05
    assert config.threads == 1


def test_default_text_is_the_shipped_file():
    text = default_config_text()

    assert "[parameters]" in text
    assert "lambda = 1.0" in text


def test_user_file_overrides_defaults(tmp_path):
    path = _write(tmp_path, "[domain]\nn = 8\n\n[parameters]\nlambda = 3.5\n")
    config = load_config(path)

    assert config.grid.plate.n == 8
    assert config.grid.m == 24
    assert config.parameters.lam == 3.5
    assert config.parameters.sigma == 0.3


def test_merge_does_not_touch_defaults():
    defaults = default_config()
    merge(defaults, {"time": {"t_end": 0.5}})

    assert defaults["time"]["t_end"] == 2.0


@pytest.mark.parametrize(
    "text, match",
    [
        ("[solver]\ntol = 1e-10\n", "Unknown section"),
        ("[time]\nsteps = 10\n", "Unknown key"),
        ("time = 1\n", "must be a table"),
        ("[time\n", "Cannot parse"),
    ],
)
def test_bad_files_raise_config_error(tmp_path, text, match):
    with pytest.raises(ConfigError, match=match):
        load_config(_write(tmp_path, text))


def test_missing_file_raises_config_error(tmp_path):
    with pytest.raises(ConfigError, match="Cannot read"):
        load_config(tmp_path / "missing.toml")


@pytest.mark.parametrize(
    "text, match",
    [
        ("[parameters]\nsigma = 1.5\n", "sigma"),
        ("[time]\ndissipation = \"midpoint\"\n", "dissipation"),
        ("[time]\nforce = \"nodal\"\n", "force"),
        ("[admissibility]\ndelta_stop = 1.0\n", "delta_stop"),
        ("[output]\nthreads = 0\n", "threads"),
    ],
)
def test_out_of_range_values(tmp_path, text, match):
    with pytest.raises(ValueError, match=match):
        load_config(_write(tmp_path, text))
