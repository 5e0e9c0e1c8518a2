from collections import namedtuple

import numpy as np

from pullin.grid import w2q_norm


class AdmissibleSetSpec:
    """Admissible deformations: ``W²_q`` norm at most ``1 / rho`` and ``v >= -1 + rho``.

    Parameters
    ----------
    q : float
        Integrability index, ``q >= 3`` (``numpy.inf`` allowed).
    rho : float
        Gap and norm parameter, ``0 < rho < 1``.

    """

    def __init__(self, q=3, rho=0.01):
        if not q >= 3:
            raise ValueError(f"q must be at least 3, got {q}")
        if not 0 < rho < 1:
            raise ValueError(f"rho must be in range (0, 1), got {rho}")
        self._q = q
        self._rho = float(rho)

    @property
    def q(self):
        return self._q

    @property
    def rho(self):
        return self._rho

    @property
    def norm_limit(self):
        return 1.0 / self._rho

    @property
    def gap_limit(self):
        return -1.0 + self._rho

    def __repr__(self):
        return f"AdmissibleSetSpec(q={self._q}, rho={self._rho})"


class AdmissibilityReport(
    namedtuple(
        "_AdmissibilityReport",
        ["norm", "min_value", "norm_margin", "gap_margin"],
    )
):
    """Distances of a deformation to the two constraints, positive inside."""

    @property
    def member(self):
        return self.norm_margin >= 0 and self.gap_margin >= 0


def admissible_check(v, spec):
    """Evaluates both membership conditions of ``v`` in the closed admissible set."""
    norm = w2q_norm(v, spec.q)
    min_value = v.min()
    return AdmissibilityReport(
        norm=norm,
        min_value=min_value,
        norm_margin=spec.norm_limit - norm,
        gap_margin=min_value - spec.gap_limit,
    )


class Event:
    """Base class for terminal conditions of a simulation.

    Calling an event returns a value that becomes non-positive when it fires.

    """

    reason = None

    def __init__(self):
        self._last_t = None

    @property
    def last_t(self):
        return self._last_t

    def __call__(self, t, u):
        raise NotImplementedError


class TouchdownEvent(Event):
    """Fires when the gap closes to ``delta_stop``, ``min u <= -1 + delta_stop``."""

    reason = "touchdown"

    def __init__(self, delta_stop):
        super().__init__()
        if not 0 < delta_stop < 1:
            raise ValueError(f"delta_stop must be in range (0, 1), got {delta_stop}")
        self._delta_stop = delta_stop

    @property
    def delta_stop(self):
        return self._delta_stop

    def __call__(self, t, u):
        self._last_t = t
        return u.min() - (-1.0 + self._delta_stop)


class NormBlowupEvent(Event):
    """Fires when the ``W²_q`` proxy norm exceeds ``1 / rho``."""

    reason = "norm blow-up"

    def __init__(self, spec):
        super().__init__()
        self._spec = spec

    def __call__(self, t, u):
        self._last_t = t
        norm = w2q_norm(u, self._spec.q)
        if not np.isfinite(norm):
            return -np.inf
        return self._spec.norm_limit - norm
