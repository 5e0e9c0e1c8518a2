"""Time stepping of the coupled plate and potential problem.

Each step solves the transformed potential for the current deformation,
evaluates the force density ``g`` and advances the plate with the exact
semigroup, ``g`` frozen over the step. Optionally the endpoint force is
re-evaluated and averaged a few times, a fixed-point iteration of the mild
formulation on one step.
"""

import logging
import math

import numpy as np

from pullin.core.spectral import plate_symbol
from pullin.energy import EnergyBreakdown, electrostatic_energy, mechanical_energy
from pullin.evolution.admissibility import (
    AdmissibleSetSpec,
    NormBlowupEvent,
    TouchdownEvent,
)
from pullin.evolution.bounds import check_bounds
from pullin.evolution.enums import TerminalStatus
from pullin.evolution.trace import Sample, SimulationTrace
from pullin.exceptions import SolverDivergenceError
from pullin.grid import lq_norm, w2q_norm
from pullin.plate import duhamel_dissipation, duhamel_step
from pullin.potential import (
    G_METHODS,
    FactorizationCache,
    G_l1_norm,
    compute_g,
    default_cylinder,
    solve_transformed_potential,
)

logger = logging.getLogger(__name__)

DISSIPATION_RULES = ("exponential", "difference")
FIXED_POINT_TOL = 1e-10
MAX_FIXED_POINT_ITERATIONS = 3


class TimeSettings:
    """Time discretization of a run.

    Parameters
    ----------
    dt : float, optional
        Time step; ``min(1e-4, 0.1 / mu_11)`` when omitted.
    t_end : float
        Horizon.
    sample_every : int
        Steps between recorded samples.
    fixed_point_iterations : int
        Endpoint re-evaluations of ``g`` per step, 0 to 3.
    dissipation : str
        ``"exponential"`` integrates ``||d_t u||²`` exactly over each step,
        ``"difference"`` uses the squared difference quotient.
    force : str
        Evaluation of ``g``, see :func:`~pullin.potential.compute_g`. With
        ``"variational"`` the force is the exact gradient of the discrete
        electrostatic energy, so the energy equality holds up to the first
        order error of freezing ``g`` over a step.

    """

    def __init__(
        self,
        dt=None,
        t_end=2.0,
        sample_every=10,
        fixed_point_iterations=0,
        dissipation="exponential",
        force="variational",
    ):
        if dt is not None and not dt > 0:
            raise ValueError(f"dt must be positive, got {dt}")
        if not t_end > 0:
            raise ValueError(f"t_end must be positive, got {t_end}")
        if int(sample_every) != sample_every or sample_every < 1:
            raise ValueError(
                f"sample_every must be a positive integer, got {sample_every}"
            )
        if not 0 <= fixed_point_iterations <= MAX_FIXED_POINT_ITERATIONS:
            raise ValueError(
                "fixed_point_iterations must be in range "
                f"[0, {MAX_FIXED_POINT_ITERATIONS}], got {fixed_point_iterations}"
            )
        if dissipation not in DISSIPATION_RULES:
            raise ValueError(
                f"dissipation must be one of {DISSIPATION_RULES}, got {dissipation!r}"
            )
        if force not in G_METHODS:
            raise ValueError(f"force must be one of {G_METHODS}, got {force!r}")
        self.dt = dt
        self.t_end = float(t_end)
        self.sample_every = int(sample_every)
        self.fixed_point_iterations = int(fixed_point_iterations)
        self.dissipation = dissipation
        self.force = force

    def resolve_dt(self, p):
        if self.dt is not None:
            return float(self.dt)
        mu11 = plate_symbol(1, p.beta, p.tau)[0, 0]
        return min(1e-4, 0.1 / mu11)

    def replace(self, **changes):
        values = dict(
            dt=self.dt,
            t_end=self.t_end,
            sample_every=self.sample_every,
            fixed_point_iterations=self.fixed_point_iterations,
            dissipation=self.dissipation,
            force=self.force,
        )
        values.update({k: v for k, v in changes.items() if v is not None})
        return TimeSettings(**values)

    def __repr__(self):
        return (
            f"TimeSettings(dt={self.dt}, t_end={self.t_end}, "
            f"sample_every={self.sample_every}, "
            f"fixed_point_iterations={self.fixed_point_iterations}, "
            f"dissipation={self.dissipation!r}, force={self.force!r})"
        )


def _solve(u, p, grid, t, x0=None, *, force="variational", cache=None):
    try:
        phi = solve_transformed_potential(u, p, grid, x0=x0, cache=cache)
    except SolverDivergenceError as e:
        raise e.at_time(t) from e
    return phi, compute_g(u, p, phi=phi, method=force)


def _step(
    u, g, dt, p, grid, t, iterations, *, force="variational", cache=None
):
    """One exponential step, with optional endpoint averaging of ``g``."""
    u_new = duhamel_step(u, g, dt, p)
    g_used = g
    for it in range(iterations):
        if not u_new.min() > -1:
            break
        _, g_end = _solve(u_new, p, grid, t + dt, force=force, cache=cache)
        g_used = 0.5 * (g + g_end)
        u_next = duhamel_step(u, g_used, dt, p)
        increment = np.abs(u_next.full - u_new.full).max()
        u_new = u_next
        if increment < FIXED_POINT_TOL:
            logger.debug("Fixed point converged after %d iterations", it + 1)
            break
    return u_new, g_used


def _step_dissipation(u, u_new, g_used, dt, p, rule):
    if rule == "exponential":
        return duhamel_dissipation(u, g_used, dt, p)
    return lq_norm(u_new - u, 2) ** 2 / dt


def simulate(
    u0,
    p,
    dt=None,
    t_end=None,
    spec=None,
    *,
    settings=None,
    delta_stop=0.05,
    grid=None,
):
    """Evolves the plate from ``u0`` until the horizon, touchdown or norm blow-up.

    Parameters
    ----------
    u0 : ~pullin.grid.PlateField
        Initial deformation, hinged and with ``min u0 > -1``.
    p : ~pullin.parameters.Parameters
        Model constants.
    dt : float, optional
        Time step, overrides ``settings.dt``.
    t_end : float, optional
        Horizon, overrides ``settings.t_end``.
    spec : ~pullin.evolution.admissibility.AdmissibleSetSpec, optional
        Admissible set tracked along the run.
    settings : TimeSettings, optional
        Remaining time discretization settings.
    delta_stop : float
        Touchdown threshold, at least ``spec.rho``.
    grid : ~pullin.grid.CylinderGrid, optional
        Cylinder grid for the potential, ``m = n`` by default.

    Returns
    -------
    ~pullin.evolution.trace.SimulationTrace

    Raises
    ------
    ~pullin.exceptions.NonAdmissibleError
        If ``min u0 <= -1``.
    ~pullin.exceptions.SolverDivergenceError
        If a potential solve fails, stamped with the simulation time.

    """
    settings = (settings or TimeSettings()).replace(dt=dt, t_end=t_end)
    spec = spec or AdmissibleSetSpec()
    grid = default_cylinder(u0, grid)
    if not u0.is_hinged:
        raise ValueError("Initial deformation must vanish on the boundary")
    if spec.rho > delta_stop:
        raise ValueError(
            f"rho = {spec.rho} exceeds delta_stop = {delta_stop}, the gap "
            "condition would fail before touchdown is detected"
        )

    step_dt = settings.resolve_dt(p)
    horizon = settings.t_end
    n_steps = math.ceil(horizon / step_dt - 1e-9)
    touchdown = TouchdownEvent(delta_stop)
    blowup = NormBlowupEvent(spec)

    trace = SimulationTrace(
        delta_stop,
        step_dt,
        parameters=p,
        resolution={"n": grid.plate.n, "m": grid.m, "dt": step_dt, "t_end": horizon},
    )

    u = u0
    cache = FactorizationCache()
    force = settings.force
    phi, g = _solve(u, p, grid, 0.0, force=force, cache=cache)
    e_mech = mechanical_energy(u, p)
    e0 = EnergyBreakdown(e_mech, electrostatic_energy(u, phi, p), p.lam)
    G_l1 = G_l1_norm(g)
    dissipation = mech_work = force_work = 0.0

    def record(t, u, energy, G_l1):
        trace.append(
            Sample(
                t=t,
                min_u=u.min(),
                max_u=u.max(),
                norm_proxy=w2q_norm(u, spec.q),
                l2_norm=lq_norm(u, 2),
                energy=energy,
                G_l1=G_l1,
                mech_work=mech_work,
                force_work=force_work,
            )
        )
        if energy is not None:
            report = check_bounds(u, g, energy, p, e0.e_total)
            failed = report.violations(atol=1e-3 * max(1.0, abs(e0.e_total)))
            if failed:
                logger.warning("A-priori bounds violated at t = %g: %s", t, failed)
                trace.bound_violations.append((t, failed))

    record(0.0, u, e0, G_l1)
    status, reason = TerminalStatus.REACHED_HORIZON, None

    for k in range(n_steps):
        t = k * step_dt
        t_new = min((k + 1) * step_dt, horizon)
        h = t_new - t

        u_new, g_used = _step(
            u,
            g,
            h,
            p,
            grid,
            t,
            settings.fixed_point_iterations,
            force=force,
            cache=cache,
        )
        dissipation += _step_dissipation(
            u, u_new, g_used, h, p, settings.dissipation
        )
        trace.steps = k + 1

        event = None
        if touchdown(t_new, u_new) <= 0:
            event = touchdown
        elif blowup(t_new, u_new) <= 0:
            event = blowup

        energy = None
        e_mech_new = mechanical_energy(u_new, p)
        if event is None or u_new.min() > -1:
            try:
                phi, g = _solve(
                    u_new, p, grid, t_new, x0=phi, force=force, cache=cache
                )
            except SolverDivergenceError:
                if event is None:
                    raise
                phi = g = None
        else:
            phi = g = None

        if g is not None:
            G_new = G_l1_norm(g)
            mech_work += h * (e_mech + e_mech_new)
            force_work += 0.5 * h * p.lam * (G_l1 + G_new)
            G_l1 = G_new
            energy = EnergyBreakdown(
                e_mech_new,
                electrostatic_energy(u_new, phi, p),
                p.lam,
                dissipation=dissipation,
                time=t_new,
            )
        else:
            G_l1 = mech_work = force_work = np.nan
        e_mech = e_mech_new
        u = u_new

        if k == 0 and energy is not None:
            trace.first_step_drift = abs(energy.balance - e0.e_total) / max(
                1.0, abs(e0.e_total)
            )

        if event is not None:
            if event is touchdown:
                status = TerminalStatus.TOUCHDOWN
            else:
                status = TerminalStatus.ADMISSIBILITY_BREACH
            reason = event.reason
            record(t_new, u, energy, G_l1)
            break
        if (k + 1) % settings.sample_every == 0 or k + 1 == n_steps:
            logger.debug("t = %g, min u = %g", t_new, u.min())
            record(t_new, u, energy, G_l1)

    trace.final_state = u
    trace.finish(status, reason)
    logger.info(
        "Run with lambda = %g finished at t = %g: %s",
        p.lam,
        trace.final_time,
        status.label,
    )
    return trace


def touchdown_time(trace):
    """First time the gap reaches the touchdown threshold, ``None`` if never.

    Linear interpolation between the two samples bracketing the crossing.

    """
    threshold = -1.0 + trace.delta_stop
    times = trace.times
    min_u = trace.min_u
    below = np.flatnonzero(min_u <= threshold)
    if below.size == 0:
        return None
    i = below[0]
    if i == 0:
        return float(times[0])
    t0, t1 = times[i - 1], times[i]
    m0, m1 = min_u[i - 1], min_u[i]
    return float(t0 + (threshold - m0) * (t1 - t0) / (m1 - m0))


class L2BalanceReport:
    """Integrated L2 balance between consecutive samples.

    ``lhs[i]`` is ``(||u||² (t_{i+1}) - ||u||² (t_i)) / 2 + int 2 E_m`` and
    ``rhs[i]`` is ``lambda int ||G||_L1`` over the same interval.

    """

    def __init__(self, times, lhs, rhs, rtol):
        self.times = times
        self.lhs = lhs
        self.rhs = rhs
        self.rtol = rtol

    @property
    def violations(self):
        scale = np.maximum(np.abs(self.lhs), np.abs(self.rhs))
        return np.flatnonzero(self.lhs > self.rhs + self.rtol * scale + 1e-14)

    @property
    def holds(self):
        return self.violations.size == 0


def l2_balance_check(trace, rtol=1e-2):
    """Checks ``d/dt ||u||² / 2 + 2 E_m <= lambda ||G||_L1`` in integrated form."""
    samples = [
        s for s in trace.samples if s.energy is not None and np.isfinite(s.mech_work)
    ]
    t = np.array([s.t for s in samples])
    l2 = np.array([s.l2_norm for s in samples])
    mech = np.array([s.mech_work for s in samples])
    force = np.array([s.force_work for s in samples])
    lhs = 0.5 * np.diff(l2**2) + np.diff(mech)
    rhs = np.diff(force)
    return L2BalanceReport(t[1:], lhs, rhs, rtol)
