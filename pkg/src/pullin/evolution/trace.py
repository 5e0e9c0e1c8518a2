from collections import namedtuple

import numpy as np

from pullin.evolution.enums import TerminalStatus


class Sample(
    namedtuple(
        "_Sample",
        [
            "t",
            "min_u",
            "max_u",
            "norm_proxy",
            "l2_norm",
            "energy",
            "G_l1",
            "mech_work",
            "force_work",
        ],
    )
):
    """Summary of the state at one recorded time.

    ``energy`` is ``None`` for a final state that could not be evaluated.
    ``mech_work`` and ``force_work`` are the running integrals of ``2 E_m``
    and ``lambda ||G||_L1`` since the start.

    """

    pass


class SimulationTrace:
    """Record of one simulation run.

    Parameters
    ----------
    delta_stop : float
        Touchdown threshold, the run stops once ``min u <= -1 + delta_stop``.
    dt : float
        Time step.

    """

    def __init__(self, delta_stop, dt, parameters=None, resolution=None):
        self._samples = []
        self.delta_stop = delta_stop
        self.dt = dt
        self.parameters = parameters
        self.resolution = resolution or {}
        self.status = None
        self.reason = None
        self.steps = 0
        self.first_step_drift = None
        self.final_state = None
        self.bound_violations = []

    def append(self, sample):
        if self._samples and not sample.t > self._samples[-1].t:
            raise ValueError(
                f"Sample times must increase, got {sample.t} "
                f"after {self._samples[-1].t}"
            )
        self._samples.append(sample)

    def finish(self, status, reason=None):
        if status is TerminalStatus.TOUCHDOWN and not (
            self._samples[-1].min_u <= -1 + self.delta_stop
        ):
            raise ValueError("Touchdown requires the last sample below the threshold")
        self.status = status
        self.reason = reason

    @property
    def samples(self):
        return list(self._samples)

    @property
    def times(self):
        return np.array([s.t for s in self._samples])

    @property
    def min_u(self):
        return np.array([s.min_u for s in self._samples])

    @property
    def energies(self):
        return [s.energy for s in self._samples if s.energy is not None]

    @property
    def final_time(self):
        return self._samples[-1].t if self._samples else 0.0

    @property
    def terminated_early(self):
        return self.status is not TerminalStatus.REACHED_HORIZON

    def __len__(self):
        return len(self._samples)

    def __repr__(self):
        status = self.status.label if self.status else "running"
        return (
            f"SimulationTrace({len(self)} samples, t={self.final_time:.6g}, {status})"
        )
