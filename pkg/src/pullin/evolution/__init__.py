from pullin.evolution.admissibility import AdmissibleSetSpec, admissible_check
from pullin.evolution.enums import TerminalStatus
from pullin.evolution.stepper import (
    TimeSettings,
    l2_balance_check,
    simulate,
    touchdown_time,
)
from pullin.evolution.trace import Sample, SimulationTrace

__all__ = [
    "AdmissibleSetSpec",
    "Sample",
    "SimulationTrace",
    "TerminalStatus",
    "TimeSettings",
    "admissible_check",
    "l2_balance_check",
    "simulate",
    "touchdown_time",
]
