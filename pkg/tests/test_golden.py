"""Regression runs compared against ``golden/pull_in.json``.

The recorded values are ranges: the model has no closed form for either
quantity, so the file pins down the order of magnitude of the touchdown time
and the location of the threshold bracket.
"""

import json
from pathlib import Path

import pytest

from pullin.evolution.admissibility import AdmissibleSetSpec
from pullin.evolution.enums import TerminalStatus
from pullin.evolution.stepper import TimeSettings, simulate, touchdown_time
from pullin.grid import CylinderGrid, PlateField
from pullin.parameters import Parameters
from pullin.sweep import SimulationClassifier, estimate_lambda_star, stability_report

GOLDEN = json.loads(
    (Path(__file__).parent / "golden" / "pull_in.json").read_text(encoding="utf-8")
)


def _parameters(case, **changes):
    values = dict(case["parameters"])
    if "lambda" in values:
        values["lam"] = values.pop("lambda")
    values.update(changes)
    return Parameters(**values)


def _setup(case):
    res = case["resolution"]
    grid = CylinderGrid.from_sizes(res["n"], res["m"])
    settings = TimeSettings(dt=res["dt"], t_end=res["t_end"])
    return grid, settings, res["delta_stop"]


def test_golden_file_is_consistent():
    touchdown, threshold = GOLDEN["touchdown"], GOLDEN["threshold"]
    lo, hi = threshold["bracket"]

    assert GOLDEN["schema"] == "pullin-golden/1"
    assert touchdown["t_star"]["min"] < touchdown["t_star"]["max"]
    assert lo < threshold["lambda_star"]["min"] < threshold["lambda_star"]["max"] < hi
    # the touchdown run lies above the threshold range
    assert touchdown["parameters"]["lambda"] > threshold["lambda_star"]["max"]


@pytest.mark.slow
def test_large_voltage_touchdown_time():
    case = GOLDEN["touchdown"]
    grid, settings, delta_stop = _setup(case)
    trace = simulate(
        PlateField.zeros(grid.plate),
        _parameters(case),
        settings=settings,
        delta_stop=delta_stop,
        grid=grid,
    )
    t_star = touchdown_time(trace)

    assert trace.status is TerminalStatus.TOUCHDOWN
    assert case["t_star"]["min"] <= t_star <= case["t_star"]["max"]


@pytest.mark.slow
def test_threshold_bracket_and_refinement():
    case = GOLDEN["threshold"]
    grid, settings, delta_stop = _setup(case)
    classifier = SimulationClassifier(
        PlateField.zeros(grid.plate),
        _parameters(case),
        settings,
        AdmissibleSetSpec(),
        delta_stop,
        grid,
    )
    bracket = tuple(case["bracket"])
    result = estimate_lambda_star(classifier, bracket, case["tol"])
    lo, hi = result.bracket

    assert bracket[0] <= lo < hi <= bracket[1]
    assert hi - lo <= case["tol"]
    assert case["lambda_star"]["min"] <= result.midpoint <= case["lambda_star"]["max"]

    report = stability_report(classifier, bracket, case["tol"], base=result)
    assert report.stable(rtol=case["max_refined_shift"])
