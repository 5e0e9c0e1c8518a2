"""Run configuration read from TOML files.

User files are merged over the defaults shipped in ``pullin/data/defaults.toml``.
Unknown sections and keys are rejected; value ranges are checked by the
objects built from them.
"""

import copy

from astropy.utils.data import get_pkg_data_filename

from pullin.evolution.admissibility import AdmissibleSetSpec
from pullin.evolution.stepper import TimeSettings
from pullin.exceptions import ConfigError
from pullin.grid import CylinderGrid
from pullin.parameters import Parameters

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib


def defaults_filename():
    return get_pkg_data_filename("data/defaults.toml")


def default_config_text():
    with open(defaults_filename(), encoding="utf-8") as fh:
        return fh.read()


def default_config():
    with open(defaults_filename(), "rb") as fh:
        return tomllib.load(fh)


def merge(defaults, user):
    """Overrides ``defaults`` section by section, rejecting unknown names."""
    merged = copy.deepcopy(defaults)
    for section, values in user.items():
        if section not in defaults:
            raise ConfigError(
                f"Unknown section [{section}], expected one of {sorted(defaults)}"
            )
        if not isinstance(values, dict):
            raise ConfigError(f"[{section}] must be a table")
        for key, value in values.items():
            if key not in defaults[section]:
                raise ConfigError(
                    f"Unknown key {key!r} in [{section}], expected one of "
                    f"{sorted(defaults[section])}"
                )
            merged[section][key] = value
    return merged


class RunConfig:
    """Domain objects built from a configuration mapping.

    Raises
    ------
    ValueError
        If a value is out of range, with the offending name in the message.

    """

    def __init__(self, data):
        self.data = data
        domain = data["domain"]
        params = data["parameters"]
        time = data["time"]
        adm = data["admissibility"]
        output = data["output"]

        self.parameters = Parameters(
            eps=params["eps"],
            beta=params["beta"],
            tau=params["tau"],
            sigma=params["sigma"],
            lam=params["lambda"],
        )
        self.grid = CylinderGrid.from_sizes(domain["n"], domain["m"])
        self.time = TimeSettings(
            dt=time["dt"],
            t_end=time["t_end"],
            sample_every=time["sample_every"],
            fixed_point_iterations=time["fixed_point_iterations"],
            dissipation=time["dissipation"],
            force=time["force"],
        )
        self.admissibility = AdmissibleSetSpec(q=adm["q"], rho=adm["rho"])
        self.delta_stop = float(adm["delta_stop"])
        if not 0 < self.delta_stop < 1:
            raise ValueError(
                f"delta_stop must be in range (0, 1), got {self.delta_stop}"
            )
        self.output_dir = str(output["dir"])
        self.seed = int(output["seed"])
        self.threads = int(output["threads"])
        if self.threads < 1:
            raise ValueError(f"threads must be positive, got {self.threads}")

    def __repr__(self):
        return (
            f"RunConfig({self.parameters!r}, {self.grid!r}, {self.time!r}, "
            f"{self.admissibility!r}, delta_stop={self.delta_stop})"
        )


def load_config(path=None):
    """Reads ``path`` over the defaults, or the defaults alone.

    Raises
    ------
    ~pullin.exceptions.ConfigError
        If the file cannot be parsed or names unknown sections or keys.

    """
    data = default_config()
    if path is not None:
        try:
            with open(path, "rb") as fh:
                user = tomllib.load(fh)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"Cannot parse {path}: {e}") from e
        except OSError as e:
            raise ConfigError(f"Cannot read {path}: {e}") from e
        data = merge(data, user)
    return RunConfig(data)
