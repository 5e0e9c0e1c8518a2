"""Estimation of the pull-in threshold by bisection in the voltage parameter.

A run is classified *global* when it reaches the horizon ``t_end`` and
*touchdown* otherwise (a norm blow-up counts with touchdown, both end the
solution). Finite-horizon classification only approximates the global
statement, so horizon sensitivity is reported rather than assumed away.
"""

from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
import logging

import numpy as np

from pullin._math.interpolate import multilinear_interp
from pullin.evolution.enums import TerminalStatus
from pullin.evolution.stepper import simulate, touchdown_time
from pullin.exceptions import InvalidBracketError, NonMonotoneClassificationError
from pullin.grid import CylinderGrid, PlateField

logger = logging.getLogger(__name__)


class SweepPoint(namedtuple("_SweepPoint", ["lam", "status", "time"])):
    """Classification of one run: ``time`` is the touchdown time or the horizon."""

    @property
    def is_global(self):
        return self.status is TerminalStatus.REACHED_HORIZON

    def to_dict(self):
        return {
            "lambda": self.lam,
            "classification": "global" if self.is_global else "touchdown",
            "status": self.status.label,
            "time": self.time,
        }


class SimulationClassifier:
    """Classifies a voltage parameter by running a full simulation.

    Parameters
    ----------
    u0 : ~pullin.grid.PlateField
        Initial deformation.
    p_base : ~pullin.parameters.Parameters
        Model constants, ``lam`` is replaced for each run.
    settings : ~pullin.evolution.stepper.TimeSettings
        Time discretization.
    spec : ~pullin.evolution.admissibility.AdmissibleSetSpec
        Admissible set.
    delta_stop : float
        Touchdown threshold.
    grid : ~pullin.grid.CylinderGrid, optional
        Cylinder grid.

    """

    def __init__(self, u0, p_base, settings, spec, delta_stop=0.05, grid=None):
        self.u0 = u0
        self.p_base = p_base
        self.settings = settings
        self.spec = spec
        self.delta_stop = delta_stop
        self.grid = grid or CylinderGrid(u0.grid, u0.grid.n)

    @property
    def resolution(self):
        return {
            "n": self.grid.plate.n,
            "m": self.grid.m,
            "dt": self.settings.resolve_dt(self.p_base),
            "t_end": self.settings.t_end,
            "delta_stop": self.delta_stop,
        }

    def __call__(self, lam):
        trace = simulate(
            self.u0,
            self.p_base.replace(lam=lam),
            spec=self.spec,
            settings=self.settings,
            delta_stop=self.delta_stop,
            grid=self.grid,
        )
        if trace.status is TerminalStatus.TOUCHDOWN:
            time = touchdown_time(trace)
        else:
            time = trace.final_time
        return SweepPoint(float(lam), trace.status, time)

    def with_horizon(self, t_end):
        return SimulationClassifier(
            self.u0,
            self.p_base,
            self.settings.replace(t_end=t_end),
            self.spec,
            self.delta_stop,
            self.grid,
        )

    def refined(self):
        """Classifier with doubled ``n`` and ``m`` and halved time step."""
        grid = CylinderGrid.from_sizes(2 * self.grid.plate.n, 2 * self.grid.m)
        u0 = _resample(self.u0, grid.plate)
        dt = self.settings.resolve_dt(self.p_base) / 2
        return SimulationClassifier(
            u0,
            self.p_base,
            self.settings.replace(dt=dt),
            self.spec,
            self.delta_stop,
            grid,
        )


def _resample(v, plate):
    x1, x2 = plate.mesh
    points = np.stack([x1, x2], axis=-1)
    values = multilinear_interp(
        v.full, (v.grid.nodes, v.grid.nodes), points, extrapolate=True
    )
    if v.is_hinged:
        return PlateField.from_interior(plate, values[1:-1, 1:-1])
    return PlateField(plate, values)


class SweepResult:
    """Outcome of :func:`estimate_lambda_star`.

    Parameters
    ----------
    bracket : tuple
        ``(lam_lo, lam_hi)``, global at ``lam_lo`` and touchdown at ``lam_hi``.
    history : list of SweepPoint
        Every classified run, in visiting order.
    resolution : dict
        Grid sizes, time step, horizon and touchdown threshold.
    tol : float
        Requested bracket width.

    """

    def __init__(self, bracket, history, resolution, tol):
        lo, hi = bracket
        if not lo < hi:
            raise ValueError(f"Invalid bracket ({lo}, {hi})")
        self.bracket = (float(lo), float(hi))
        self.history = list(history)
        self.resolution = dict(resolution)
        self.tol = tol

    @property
    def width(self):
        return self.bracket[1] - self.bracket[0]

    @property
    def midpoint(self):
        return 0.5 * (self.bracket[0] + self.bracket[1])

    @property
    def converged(self):
        return self.width <= self.tol

    @property
    def touchdown_times_monotone(self):
        """Whether touchdown times do not increase with ``lam``."""
        points = sorted(
            (pt for pt in self.history if not pt.is_global and pt.time is not None),
            key=lambda pt: pt.lam,
        )
        return all(a.time >= b.time for a, b in zip(points, points[1:]))

    def to_dict(self):
        return {
            "schema": "pullin-sweep/1",
            "bracket": list(self.bracket),
            "history": [pt.to_dict() for pt in self.history],
            "resolution": self.resolution,
            "converged": self.converged,
            "tolerance": self.tol,
            "touchdown_times_monotone": self.touchdown_times_monotone,
        }

    def __repr__(self):
        return (
            f"SweepResult(bracket=({self.bracket[0]:.6g}, {self.bracket[1]:.6g}), "
            f"runs={len(self.history)})"
        )


def check_monotone(history):
    """Raises if a global run sits above a touchdown run in ``lam``."""
    points = sorted(history, key=lambda pt: pt.lam)
    first_touchdown = None
    for pt in points:
        if not pt.is_global and first_touchdown is None:
            first_touchdown = pt
        elif pt.is_global and first_touchdown is not None:
            raise NonMonotoneClassificationError(
                (first_touchdown.lam, first_touchdown.status.label),
                (pt.lam, pt.status.label),
            )


def estimate_lambda_star(classify, bracket0, tol, resolution=None):
    """Bisects the voltage parameter between a global and a touchdown run.

    Parameters
    ----------
    classify : callable
        ``lam -> SweepPoint``, typically a :class:`SimulationClassifier`.
    bracket0 : tuple
        Initial ``(lam_a, lam_b)``, expected global at ``lam_a`` and touchdown
        at ``lam_b``; both ends are run first.
    tol : float
        Requested bracket width.
    resolution : dict, optional
        Metadata stored with the result, ``classify.resolution`` by default.

    Returns
    -------
    SweepResult

    Raises
    ------
    ~pullin.exceptions.InvalidBracketError
        If the ends are not ordered or not classified global and touchdown.
    ~pullin.exceptions.NonMonotoneClassificationError
        If the visited runs are not monotone in ``lam``.

    """
    lo, hi = (float(x) for x in bracket0)
    if not 0 <= lo < hi:
        raise InvalidBracketError(f"Expected 0 <= lo < hi, got ({lo}, {hi})")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if resolution is None:
        resolution = getattr(classify, "resolution", {})

    lower, upper = classify(lo), classify(hi)
    history = [lower, upper]
    if not lower.is_global:
        raise InvalidBracketError(
            f"Lower end lambda = {lo} does not reach the horizon ({lower.status.label})"
        )
    if upper.is_global:
        raise InvalidBracketError(
            f"Both ends reach the horizon, no touchdown at lambda = {hi}"
        )

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        point = classify(mid)
        history.append(point)
        logger.info(
            "lambda = %.6g: %s (t = %.6g)",
            mid,
            "global" if point.is_global else "touchdown",
            point.time,
        )
        if point.is_global:
            lo = mid
        else:
            hi = mid
        check_monotone(history)

    result = SweepResult((lo, hi), history, resolution, tol)
    if not result.touchdown_times_monotone:
        logger.warning("Touchdown times do not decrease monotonically in lambda")
    return result


def prescan(classify, lambdas, threads=1):
    """Classifies every ``lam`` in ``lambdas`` concurrently.

    Runs share no mutable state, so they are dispatched to a thread pool of
    ``threads`` workers. The result is sorted by ``lam``.

    """
    if threads < 1:
        raise ValueError(f"threads must be positive, got {threads}")
    with ThreadPoolExecutor(max_workers=threads) as executor:
        points = list(executor.map(classify, lambdas))
    return sorted(points, key=lambda pt: pt.lam)


def bracket_from_prescan(points):
    """Tightest ``(global, touchdown)`` pair of neighbours in a prescan."""
    check_monotone(points)
    for a, b in zip(points, points[1:]):
        if a.is_global and not b.is_global:
            return (a.lam, b.lam)
    raise InvalidBracketError("Prescan contains no transition from global to touchdown")


class StabilityReport(namedtuple("_StabilityReport", ["base", "refined", "shift"])):
    """Relative midpoint shift of the threshold bracket under refinement."""

    def stable(self, rtol=0.2):
        return self.shift <= rtol


def stability_report(classifier, bracket0, tol, base=None):
    """Reruns the bisection with doubled ``n``, ``m`` and halved time step.

    ``base`` is the result of the bisection at the base resolution on the same
    bracket, computed here when not given.

    """
    if base is None:
        base = estimate_lambda_star(classifier, bracket0, tol)
    refined = estimate_lambda_star(classifier.refined(), bracket0, tol)
    shift = abs(refined.midpoint - base.midpoint) / base.midpoint
    logger.info(
        "Threshold midpoint %.6g at base resolution, %.6g refined (shift %.1f%%)",
        base.midpoint,
        refined.midpoint,
        100 * shift,
    )
    return StabilityReport(base, refined, shift)


def horizon_sensitivity(classifier, result, horizons):
    """Classifies both bracket ends again at every horizon in ``horizons``.

    Returns
    -------
    list of dict
        One entry per horizon with both classifications and whether the
        bracket still separates a global from a touchdown run.

    """
    report = []
    for t_end in horizons:
        classify = classifier.with_horizon(t_end)
        lower, upper = classify(result.bracket[0]), classify(result.bracket[1])
        report.append(
            {
                "t_end": t_end,
                "lower": lower.to_dict(),
                "upper": upper.to_dict(),
                "flipped": not (lower.is_global and not upper.is_global),
            }
        )
    return report
