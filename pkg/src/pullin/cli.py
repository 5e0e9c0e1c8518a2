"""Command line interface, ``pullin {simulate,sweep,spectrum,verify}``.

Exit codes: 0 on success, 1 when a check, a run or a sweep fails (including an
inadmissible state or a bracket that does not separate the two outcomes) and
2 on usage or configuration errors.
"""

import argparse
import logging
from pathlib import Path
import sys

import numpy as np

from pullin import __version__
from pullin.config import default_config_text, load_config
from pullin.evolution.stepper import simulate
from pullin.exceptions import (
    ConfigError,
    InvalidBracketError,
    NonAdmissibleError,
    NonMonotoneClassificationError,
    SolverDivergenceError,
)
from pullin.grid import PlateField, sine_mode
from pullin.io import (
    write_json,
    write_spectrum,
    write_summary,
    write_sweep,
    write_trace,
)
from pullin.plate import OperatorSpectrum, spectrum_check
from pullin.sweep import (
    SimulationClassifier,
    bracket_from_prescan,
    estimate_lambda_star,
    horizon_sensitivity,
    prescan,
    stability_report,
)
from pullin.verification import run_checks

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _common(parser):
    parser.add_argument("--config", metavar="PATH", help="TOML file over the defaults")
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--seed", type=int, metavar="N", help="random seed")
    parser.add_argument("--threads", type=int, metavar="N", help="worker threads")
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="INFO with -v, DEBUG with -vv",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pullin",
        description="Evolution and pull-in threshold of an electrostatically "
        "actuated hinged plate.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p_sim = sub.add_parser("simulate", help="run one evolution")
    _common(p_sim)
    p_sim.add_argument(
        "--print-defaults",
        action="store_true",
        help="print the default configuration and exit",
    )
    p_sim.add_argument("--u0", choices=("zero", "mode"), default="zero")
    p_sim.add_argument(
        "--amplitude",
        type=float,
        default=0.1,
        help="amplitude of the (1, 1) sine mode for --u0 mode",
    )

    p_sweep = sub.add_parser("sweep", help="bisect the pull-in threshold")
    _common(p_sweep)
    p_sweep.add_argument(
        "--bracket", nargs=2, type=float, default=(0.1, 50.0), metavar=("LO", "HI")
    )
    p_sweep.add_argument("--tol", type=float, default=0.5)
    p_sweep.add_argument(
        "--horizons",
        nargs="+",
        type=float,
        metavar="T",
        help="reclassify the bracket ends at these horizons",
    )
    p_sweep.add_argument(
        "--prescan",
        type=int,
        metavar="K",
        help="classify K equispaced values first to narrow the bracket",
    )
    p_sweep.add_argument(
        "--stability",
        action="store_true",
        help="repeat the bisection at doubled resolution",
    )

    p_spec = sub.add_parser("spectrum", help="eigenvalues of the plate operator")
    _common(p_spec)
    p_spec.add_argument("--modes", type=int, default=8, metavar="K")

    p_verify = sub.add_parser("verify", help="run the built-in checks")
    _common(p_verify)
    p_verify.add_argument(
        "--quick", action="store_true", help="skip the refinement studies"
    )
    p_verify.add_argument(
        "--dump", action="store_true", help="write phi.csv and g.csv"
    )
    return parser


def _configure_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s"
    )


def _setup(args):
    config = load_config(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if args.threads is not None:
        if args.threads < 1:
            raise ValueError(f"threads must be positive, got {args.threads}")
        config.threads = args.threads
    out = Path(args.out if args.out is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return config, out


def _initial_state(config, kind, amplitude):
    plate = config.grid.plate
    if kind == "mode":
        return sine_mode(plate, 1, 1, amplitude)
    return PlateField.zeros(plate)


def cmd_simulate(args, config, out):
    u0 = _initial_state(config, args.u0, args.amplitude)
    trace = simulate(
        u0,
        config.parameters,
        spec=config.admissibility,
        settings=config.time,
        delta_stop=config.delta_stop,
        grid=config.grid,
    )
    write_trace(trace, out / "trace.csv")
    write_summary(trace, out / "summary.json")
    print(f"{trace.status.label} at t = {trace.final_time:.6g}")
    return EXIT_OK


def cmd_sweep(args, config, out):
    classifier = SimulationClassifier(
        PlateField.zeros(config.grid.plate),
        config.parameters,
        config.time,
        config.admissibility,
        config.delta_stop,
        config.grid,
    )
    bracket = tuple(args.bracket)
    if not 0 <= bracket[0] < bracket[1]:
        raise ValueError(f"--bracket expects 0 <= LO < HI, got {bracket}")
    extra = {}
    if args.prescan:
        lambdas = np.linspace(bracket[0], bracket[1], args.prescan)
        points = prescan(classifier, lambdas, threads=config.threads)
        extra["prescan"] = [pt.to_dict() for pt in points]
        bracket = bracket_from_prescan(points)

    result = estimate_lambda_star(classifier, bracket, args.tol)
    if args.horizons:
        report = horizon_sensitivity(classifier, result, args.horizons)
        extra["horizon_sensitivity"] = report
        if any(entry["flipped"] for entry in report):
            logger.warning("Bracket classification changes with the horizon")
    if args.stability:
        stability = stability_report(classifier, bracket, args.tol, base=result)
        extra["stability"] = {
            "refined_bracket": list(stability.refined.bracket),
            "shift": stability.shift,
            "stable": stability.stable(),
        }
    write_sweep(result, out / "sweep.json", extra)
    print(f"lambda* in ({result.bracket[0]:.6g}, {result.bracket[1]:.6g})")
    return EXIT_OK


def cmd_spectrum(args, config, out):
    spectrum = OperatorSpectrum(config.parameters, args.modes)
    write_spectrum(spectrum, out / "spectrum.csv")
    report = spectrum_check(config.parameters, args.modes, seed=config.seed)
    print(repr(report))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_verify(args, config, out):
    results = run_checks(
        config.parameters,
        config.grid,
        quick=args.quick,
        dump_dir=out if args.dump else None,
        seed=config.seed,
    )
    for result in results:
        print(result)
    failed = [r for r in results if not r.passed]
    write_json(
        {
            "schema": "pullin-verify/1",
            "quick": args.quick,
            "checks": [r._asdict() for r in results],
            "passed": not failed,
        },
        out / "verify.json",
    )
    return EXIT_FAILED if failed else EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help and --version exit with 0
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    if args.command == "simulate" and args.print_defaults:
        print(default_config_text(), end="")
        return EXIT_OK

    _configure_logging(args.verbose)
    try:
        config, out = _setup(args)
        return COMMANDS[args.command](args, config, out)
    except (InvalidBracketError, NonAdmissibleError) as e:
        # raised by the computation, not by the command line
        logger.error("%s", e)
        return EXIT_FAILED
    except (ConfigError, ValueError) as e:
        print(f"pullin {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverDivergenceError, NonMonotoneClassificationError) as e:
        logger.error("%s", e)
        return EXIT_FAILED
