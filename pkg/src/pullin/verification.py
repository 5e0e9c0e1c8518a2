"""Built-in correctness checks.

Every check compares a discrete result against an exact identity of the
model: closed forms for uniform gaps, a manufactured potential, the shape
derivative of the electrostatic energy, the energy equality, spectral
positivity, the boundary identity of the square, exact linear decay and the
a-priori bounds. ``quick`` mode skips the refinement studies.
"""

from collections import namedtuple
import logging
from pathlib import Path

import numpy as np

from pullin.energy import (
    electrostatic_energy,
    electrostatic_energy_surface,
    energy_equality_monitor,
    shape_derivative_check,
)
from pullin.evolution.enums import TerminalStatus
from pullin.evolution.stepper import (
    l2_balance_check,
    simulate,
    touchdown_time,
)
from pullin.grid import CylinderGrid, PlateField, PlateGrid, sine_mode, w2q_norm
from pullin.io import write_plate_field, write_potential
from pullin.plate import (
    boundary_identity_check,
    single_mode_boundary_residual,
    spectrum_check,
)
from pullin.potential import (
    compute_G,
    compute_g,
    solve_transformed_potential,
    top_trace_derivative,
)

logger = logging.getLogger(__name__)

ENERGY_DRIFT_MIN_RATIO = 1.7


class CheckResult(
    namedtuple("_CheckResult", ["name", "passed", "value", "limit", "detail"])
):
    """Outcome of one check: ``value`` is compared against ``limit``."""

    def __str__(self):
        mark = "PASS" if self.passed else "FAIL"
        return (
            f"[{mark}] {self.name}: {self.value:.3e} "
            f"(limit {self.limit:.3e}) {self.detail}"
        )


def _result(name, value, limit, detail="", passed=None):
    if passed is None:
        passed = bool(value <= limit)
    result = CheckResult(name, bool(passed), float(value), float(limit), detail)
    if result.passed:
        logger.info("%s", result)
    else:
        logger.warning("%s", result)
    return result


def _flux(x1, x2, eta, a, eps):
    """Fluxes and lower order part of the transformed operator applied to
    ``eta + eta (1 - eta) S`` for ``v = a S``, ``S = sin(pi x1) sin(pi x2)``."""
    eps2 = eps**2
    pi = np.pi
    S = np.sin(pi * x1) * np.sin(pi * x2)
    S1 = pi * np.cos(pi * x1) * np.sin(pi * x2)
    S2 = pi * np.sin(pi * x1) * np.cos(pi * x2)
    gap = 1 + a * S
    V1 = a * S1 / gap
    V2 = a * S2 / gap
    VV = V1**2 + V2**2
    w1 = eta * (1 - eta) * S1
    w2 = eta * (1 - eta) * S2
    we = 1 + (1 - 2 * eta) * S
    F1 = eps2 * (w1 - eta * V1 * we)
    F2 = eps2 * (w2 - eta * V2 * we)
    F3 = -eps2 * eta * (V1 * w1 + V2 * w2) + (1 / gap**2 + eps2 * eta**2 * VV) * we
    lower = eps2 * (V1 * w1 + V2 * w2 - eta * VV * we)
    return F1, F2, F3, lower


def _derivative(f, delta=1e-3):
    """Fourth-order central difference of a scalar function of one shift."""
    return (-f(2 * delta) + 8 * f(delta) - 8 * f(-delta) + f(-2 * delta)) / (
        12 * delta
    )


def manufactured_problem(grid, p, amplitude=0.1):
    """Deformation, exact potential and forcing of a manufactured solution.

    The exact potential is ``eta + eta (1 - eta) sin(pi x1) sin(pi x2)`` for
    ``v = amplitude sin(pi x1) sin(pi x2)``; the forcing is minus the
    continuous operator applied to it, with the divergence of the fluxes
    taken by fourth-order differences of their closed forms.

    Returns
    -------
    v : ~pullin.grid.PlateField
    exact : numpy.ndarray
        Exact potential at every node of ``grid``.
    source : numpy.ndarray
        Forcing at every node of ``grid``.

    """
    x1, x2 = (c[..., None] for c in grid.plate.mesh)
    eta = grid.eta
    a, eps = amplitude, p.eps

    def flux(i, d1=0.0, d2=0.0, de=0.0):
        return _flux(x1 + d1, x2 + d2, eta + de, a, eps)[i]

    div = (
        _derivative(lambda d: flux(0, d1=d))
        + _derivative(lambda d: flux(1, d2=d))
        + _derivative(lambda d: flux(2, de=d))
    )
    source = -(div + flux(3))
    S = np.sin(np.pi * x1) * np.sin(np.pi * x2)
    exact = eta + eta * (1 - eta) * S
    v = sine_mode(grid.plate, 1, 1, amplitude)
    return v, np.broadcast_to(exact, grid.shape), np.broadcast_to(source, grid.shape)


def manufactured_error(n, p, amplitude=0.1):
    grid = CylinderGrid.from_sizes(n, n)
    v, exact, source = manufactured_problem(grid, p, amplitude)
    phi = solve_transformed_potential(v, p, grid, source=source)
    return float(np.abs(phi.values - exact).max())


def check_constant_gap(p, grid):
    results = []
    for c in (-0.5, 0.0, 1.0):
        v = PlateField.constant(grid.plate, c)
        phi = solve_transformed_potential(v, p, grid)
        results.append(
            _result(
                f"constant gap c={c}: phi = eta",
                np.abs(phi.values - grid.lifting()).max(),
                1e-10,
                f"residual {phi.residual:.1e}",
            )
        )
        g = compute_g(v, p, phi=phi)
        results.append(
            _result(
                f"constant gap c={c}: g",
                np.abs(g.full - 1 / (1 + c) ** 2).max(),
                1e-6,
            )
        )
        results.append(
            _result(
                f"constant gap c={c}: E_e",
                abs(electrostatic_energy(v, phi, p) - 1 / (1 + c)),
                1e-6,
            )
        )
    return results


def check_manufactured(p, quick):
    if quick:
        error = manufactured_error(16, p)
        return [_result("manufactured potential n=16", error, 1e-2)]
    coarse, fine = manufactured_error(16, p), manufactured_error(32, p)
    ratio = coarse / fine
    return [
        _result(
            "manufactured potential order",
            abs(ratio - 4.0),
            0.8,
            f"error ratio {ratio:.3f} ({coarse:.2e} -> {fine:.2e})",
        )
    ]


def _sine_path(grid):
    def path(t):
        return sine_mode(grid, 1, 1, 0.1 * (1 + t))

    def dpath(t):
        return sine_mode(grid, 1, 1, 0.1)

    return path, dpath


def check_shape_derivative(p, quick):
    grid = CylinderGrid.from_sizes(24, 24)
    plate = grid.plate

    def constant(t):
        return PlateField.constant(plate, -0.2 + 0.1 * t)

    def dconstant(t):
        return PlateField.constant(plate, 0.1)

    results = [
        _result(
            "shape derivative, constant gap",
            shape_derivative_check(constant, dconstant, p, 0.0, 1e-3, grid),
            1e-6,
        )
    ]
    path, dpath = _sine_path(plate)
    error = shape_derivative_check(path, dpath, p, 0.0, 1e-3, grid)
    results.append(_result("shape derivative, sine mode", error, 1e-2))
    variational = shape_derivative_check(
        path, dpath, p, 0.0, 1e-3, grid, force="variational"
    )
    results.append(
        _result("shape derivative, sine mode, variational force", variational, 1e-5)
    )
    if not quick:
        coarse_grid = CylinderGrid.from_sizes(16, 16)
        cpath, cdpath = _sine_path(coarse_grid.plate)
        coarse = shape_derivative_check(cpath, cdpath, p, 0.0, 1e-3, coarse_grid)
        results.append(
            _result(
                "shape derivative decreases under refinement",
                error,
                coarse,
                f"n=16: {coarse:.2e}, n=24: {error:.2e}",
            )
        )
    return results


def check_potential_forms(p, grid):
    v = sine_mode(grid.plate, 1, 1, 0.1)
    phi = solve_transformed_potential(v, p, grid)
    transformed = electrostatic_energy(v, phi, p)
    physical = electrostatic_energy(v, phi, p, method="physical")
    surface = electrostatic_energy_surface(v, phi, p)
    g = compute_g(v, p, phi=phi)
    G = compute_G(v, p, phi=phi, physical=True)
    h2 = grid.plate.h**2
    return [
        _result("E_e physical form", abs(physical - transformed), 10 * h2),
        _result("E_e surface form", abs(surface - transformed), 10 * h2),
        _result(
            "G physical form",
            np.abs(G.values - g.values).max() / np.abs(g.values).max(),
            10 * h2,
        ),
        _result(
            "top trace finite",
            0.0,
            0.0,
            passed=np.all(np.isfinite(top_trace_derivative(phi).full)),
        ),
    ]


def check_spectrum(p, seed=0):
    report = spectrum_check(p, 24, n_fields=100, seed=seed)
    return [
        _result(
            "minimum eigenvalue",
            abs(report.min_eigenvalue - report.expected_min) / report.expected_min,
            1e-12,
            f"{report.min_eigenvalue:.6f}",
        ),
        _result(
            "coercivity on 100 random fields",
            report.coercivity - report.worst_ratio,
            0.0,
            f"worst ratio {report.worst_ratio:.4f}",
        ),
    ]


def _random_sine_field(grid, rng, modes=2):
    c = np.zeros((grid.n, grid.n))
    c[:modes, :modes] = rng.standard_normal((modes, modes))
    field = PlateField.zeros(grid)
    for k in range(modes):
        for l in range(modes):
            field = field + sine_mode(grid, k + 1, l + 1, c[k, l])
    return field


def boundary_identity_constant(n, n_fields=20, seed=0):
    """Largest ``|r(w)| / (h² ||w||²_W2)`` over random fields in the low sine span."""
    grid = PlateGrid(n)
    rng = np.random.default_rng(seed)
    ratios = []
    for _ in range(n_fields):
        w = _random_sine_field(grid, rng)
        r = boundary_identity_check(w)
        ratios.append(abs(r) / (grid.h**2 * w2q_norm(w, 2) ** 2))
    return max(ratios)


def check_boundary_identity(quick):
    grid = PlateGrid(24)
    worst = 0.0
    for k in (1, 2, 3):
        for l in (1, 2, 3):
            w = sine_mode(grid, k, l)
            residual = boundary_identity_check(w)
            expected = single_mode_boundary_residual(grid, k, l)
            worst = max(worst, abs(residual - expected) / abs(expected))
    results = [
        _result("boundary identity, single modes against closed form", worst, 1e-8)
    ]
    if not quick:
        c16, c32 = boundary_identity_constant(16), boundary_identity_constant(32)
        results.append(
            _result(
                "boundary identity constant stable",
                abs(c32 / c16 - 1),
                0.25,
                f"C(16) = {c16:.3e}, C(32) = {c32:.3e}",
            )
        )
    return results


def check_linear_decay(p, grid):
    p0 = p.replace(lam=0.0)
    u0 = sine_mode(grid.plate, 1, 1, 0.1)
    trace = simulate(u0, p0, dt=1e-4, t_end=0.01, grid=grid)
    mu11 = 4 * p.beta * np.pi**4 + 2 * p.tau * np.pi**2
    exact = sine_mode(grid.plate, 1, 1, 0.1 * np.exp(-mu11 * 0.01))
    drift = energy_equality_monitor(trace)
    return trace, [
        _result(
            "linear decay",
            np.abs(trace.final_state.full - exact.full).max(),
            1e-8,
        ),
        _result("energy drift, linear decay", drift.max(), 1e-6),
    ]


def check_energy_equality(p, grid, quick):
    p1 = p.replace(lam=1.0)
    u0 = PlateField.zeros(grid.plate)
    t_end = 0.01 if quick else 0.05
    trace = simulate(u0, p1, dt=1e-4, t_end=t_end, grid=grid)
    drift = energy_equality_monitor(trace).max()
    results = [_result(f"energy drift, lambda=1, t={t_end}", drift, 1e-3)]
    traces = [trace]
    if not quick:
        half = simulate(u0, p1, dt=5e-5, t_end=t_end, grid=grid)
        drift_half = energy_equality_monitor(half).max()
        ratio = drift / drift_half if drift_half > 0 else np.inf
        results.append(
            _result(
                "energy drift under halved dt",
                ratio,
                ENERGY_DRIFT_MIN_RATIO,
                f"ratio {ratio:.3f}, about 2 at first order "
                f"({drift:.2e} -> {drift_half:.2e})",
                passed=ratio >= ENERGY_DRIFT_MIN_RATIO,
            )
        )
        traces.append(half)
    l2 = l2_balance_check(trace)
    results.append(_result("L2 balance", l2.violations.size, 0))
    return traces, results


def check_bounds(traces):
    violations = sum(len(t.bound_violations) for t in traces)
    return [_result("a-priori bounds along trajectories", violations, 0)]


def check_dichotomy(p, grid, traces, quick):
    results = []
    if not quick:
        demo = simulate(
            PlateField.zeros(grid.plate),
            p.replace(lam=50.0),
            dt=1e-4,
            t_end=0.5,
            grid=grid,
        )
        traces = traces + [demo]
        t_star = touchdown_time(demo)
        results.append(
            _result(
                "large lambda run touches down",
                0.0,
                0.0,
                f"t* = {t_star}",
                passed=demo.status is TerminalStatus.TOUCHDOWN and t_star is not None,
            )
        )
    ambiguous = [
        t
        for t in traces
        if t.terminated_early and t.reason not in ("touchdown", "norm blow-up")
    ]
    results.append(_result("single terminal cause", len(ambiguous), 0))
    return results


def dump_fields(p, grid, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    v = sine_mode(grid.plate, 1, 1, 0.1)
    phi = solve_transformed_potential(v, p, grid)
    write_potential(phi, out_dir / "phi.csv")
    write_plate_field(compute_g(v, p, phi=phi), out_dir / "g.csv")


def run_checks(p, grid, quick=False, dump_dir=None, seed=0):
    """Runs the whole suite and returns the list of :class:`CheckResult`."""
    results = []
    results += check_constant_gap(p, grid)
    results += check_manufactured(p, quick)
    results += check_shape_derivative(p, quick)
    results += check_potential_forms(p, grid)
    results += check_spectrum(p, seed)
    results += check_boundary_identity(quick)
    decay, decay_results = check_linear_decay(p, grid)
    results += decay_results
    traces, energy_results = check_energy_equality(p, grid, quick)
    results += energy_results
    results += check_bounds([decay] + traces)
    results += check_dichotomy(p, grid, [decay] + traces, quick)
    if dump_dir is not None:
        dump_fields(p, grid, dump_dir)
    failed = [r for r in results if not r.passed]
    logger.info("%d checks, %d failed", len(results), len(failed))
    return results


__all__ = [
    "CheckResult",
    "boundary_identity_constant",
    "manufactured_error",
    "manufactured_problem",
    "run_checks",
]
