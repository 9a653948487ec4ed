# src/mcpoly/cli.py
"""
Command-line interface for the mcpoly package.

Handles argument parsing, logging setup and dispatch to the command
implementations in mcpoly.workflows.commands.
"""

import argparse
import dataclasses
import json
import logging
import sys
from importlib import metadata
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence

from mcpoly.config import MCPolyConfig, RunConfig, load_default_config
from mcpoly.errors import InvariantViolationError, MCPolyError
from mcpoly.workflows import commands

# Setup logger for this module - configuration will be done in main()
logger = logging.getLogger(__name__)
# Get the root logger instance to configure its level in main()
# Ensures configuration affects handlers potentially added by pytest (caplog)
root_logger = logging.getLogger()

COMMANDS: Dict[str, Callable[[RunConfig], object]] = {
    "solve": commands.cmd_solve_chain,
    "aifv-solve": commands.cmd_aifv,
    "aifv-encode": commands.cmd_encode,
    "aifv-decode": commands.cmd_decode,
    "oracle": commands.cmd_oracle,
    "envelope-dump": commands.cmd_envelope_dump,
    "gen": commands.cmd_gen,
}


def _get_version() -> str:
    """Retrieves the package version using importlib.metadata."""
    try:
        return metadata.version("mcpoly-py")
    except metadata.PackageNotFoundError:
        # Fallback for development checkouts where the package isn't installed
        return "0.0.0-dev"


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-o", "--output", type=Path, default=None, metavar="FILE",
        help="Output file; stdout when omitted.",
    )


def _add_solver_options(parser: argparse.ArgumentParser, default_cfg: MCPolyConfig) -> None:
    solver = default_cfg.solver
    parser.add_argument(
        "--method", choices=["brute", "iterate", "ellipsoid"], default=solver.method,
        help="Solver to run.",
    )
    parser.add_argument(
        "--box", type=str, default=None, metavar="L1,R1;L2,R2;...",
        help="Search box over x for the ellipsoid method (default: unit box).",
    )
    parser.add_argument("--eps", type=float, default=solver.eps, help="Ellipsoid stopping gap.")
    parser.add_argument(
        "--budget", type=int, default=solver.budget,
        help="Ellipsoid oracle-call budget (default: 10*m^2*(phi+64)).",
    )
    parser.add_argument(
        "--iteration-cap", type=int, default=solver.iteration_cap,
        help="Safety cap on the number of fixed-point iterations.",
    )
    parser.add_argument(
        "--brute-force-budget", type=int, default=solver.brute_force_budget,
        help="Largest number of chains brute force may evaluate.",
    )
    parser.add_argument(
        "--cores", type=int, default=solver.cores,
        help="Worker processes for brute force (capped by MCPOLY_THREADS).",
    )
    parser.add_argument(
        "--trace", type=Path, default=None, metavar="FILE",
        help="Write the solver trace to this file (CSV table for a .csv name, JSON otherwise).",
    )


def _build_parser(default_cfg: MCPolyConfig) -> argparse.ArgumentParser:
    """
    Builds the argument parser for the mcpoly CLI.

    Args:
        default_cfg: The default configuration object.

    Returns:
        A configured argparse.ArgumentParser instance.
    """
    parser = argparse.ArgumentParser(
        description="Minimum-cost Markov chains via the Markov Chain Polytope, "
                    "and optimal binary AIFV-m codes.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        prog="mcpoly-run",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {_get_version()}",
        help="Show program's version number and exit.",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=default_cfg.output.verbosity_level,
        help="Increase output verbosity. The level starts at the config default "
             f"({default_cfg.output.verbosity_level}); 0 is WARNING, 1 INFO, 2 or more DEBUG.",
    )
    parser.add_argument(
        "-q", "--quiet", action="store_true",
        help="Only report warnings and errors.",
    )
    parser.add_argument(
        "--json-errors",
        action="store_true",
        default=default_cfg.output.json_errors,
        help="Report errors as one JSON object on stderr.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    # --- solve ---
    p = sub.add_parser("solve", help="Find a minimum-cost chain of a JSON instance.",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("-i", "--input", type=Path, required=True, metavar="FILE", help="Instance JSON file.")
    p.add_argument("--x0", type=str, default=None, metavar="X1,X2,...",
                   help="Start point of the iterative method (default: origin).")
    _add_solver_options(p, default_cfg)
    _add_output(p)

    # --- aifv ---
    aifv = sub.add_parser("aifv", help="Binary AIFV-m codes.")
    aifv_sub = aifv.add_subparsers(dest="aifv_command", required=True, metavar="ACTION")

    p = aifv_sub.add_parser("solve", help="Build an optimal AIFV-m code for a source.",
                            formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("-i", "--probs", dest="input", type=Path, required=True, metavar="FILE",
                   help="Source file: one p/q per line, or a JSON source.")
    p.add_argument("--m", type=int, default=default_cfg.aifv.m, help="Number of code trees.")
    p.add_argument("--height-cap", type=int, default=default_cfg.aifv.height_cap,
                   help="Maximal tree depth (default: n + m).")
    p.add_argument("--full-height", action="store_true",
                   help="Use the (n-1)(m+1)+1 height bound instead of n + m.")
    p.add_argument("--max-trees", type=int, default=default_cfg.aifv.max_trees,
                   help="Enumeration budget per tree type.")
    p.add_argument("--strict", action="store_true", help="Treat normalization warnings as errors.")
    p.add_argument("--code-out", type=Path, default=None, metavar="FILE",
                   help="Also write the code file here.")
    _add_solver_options(p, default_cfg)
    _add_output(p)

    for action, what in (("encode", "symbols to bits"), ("decode", "bits to symbols")):
        p = aifv_sub.add_parser(action, help=f"Translate {what} with a code file.",
                                formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        p.add_argument("--code", type=Path, required=True, metavar="FILE", help="Code JSON file.")
        p.add_argument("-i", "--input", type=Path, default=None, metavar="FILE",
                       help="Input stream; stdin when omitted.")
        p.add_argument("--strict", action="store_true", help="Treat normalization warnings as errors.")
        if action == "decode":
            p.add_argument("--length", type=int, default=None,
                           help="Number of symbols, needed when the message ends in empty codewords.")
        _add_output(p)

    # --- oracle ---
    p = sub.add_parser("oracle", help="Evaluate the envelope and the separation oracle at a point.",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("-i", "--input", type=Path, required=True, metavar="FILE", help="Instance JSON file.")
    p.add_argument("--x", type=str, default=None, metavar="X1,X2,...", help="Point x (default: origin).")
    p.add_argument("--y", type=str, default=None, help="Height y to classify.")
    p.add_argument("--box", type=str, default=None, metavar="L1,R1;L2,R2;...", help="Box over x.")
    _add_output(p)

    # --- envelope-dump ---
    p = sub.add_parser("envelope-dump", help="Tabulate g_0, g_1 and h of an m = 2 instance.",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("-i", "--input", type=Path, required=True, metavar="FILE", help="Instance JSON file.")
    p.add_argument("--x-min", type=float, default=0.0)
    p.add_argument("--x-max", type=float, default=1.0)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--digits", type=int, default=default_cfg.output.float_digits,
                   help="Significant digits of the CSV floats.")
    p.add_argument("--plot", type=Path, default=None, metavar="FILE",
                   help="Also draw the envelope (needs matplotlib).")
    _add_output(p)

    # --- gen ---
    gen = default_cfg.generator
    p = sub.add_parser("gen", help="Write a seeded random instance.",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--kind", choices=["chain", "transient", "source"], default="chain")
    p.add_argument("--seed", type=int, default=gen.seed)
    p.add_argument("--m", type=int, default=gen.m)
    p.add_argument("--states", type=int, default=gen.states_per_family, help="States per family.")
    p.add_argument("--max-denominator", type=int, default=gen.max_denominator)
    p.add_argument("--symbols", type=int, default=gen.symbols, help="Source size for --kind source.")
    p.add_argument("--bits", type=int, default=gen.bits, help="Probabilities are multiples of 2^-bits.")
    _add_output(p)

    return parser


def _run_config(args: argparse.Namespace, default_cfg: MCPolyConfig) -> RunConfig:
    """Merges parsed arguments over the default configuration."""
    command = args.command if args.command != "aifv" else f"aifv-{args.aifv_command}"
    solver = dataclasses.replace(
        default_cfg.solver,
        **{
            name: getattr(args, name)
            for name in ("method", "eps", "budget", "iteration_cap", "brute_force_budget", "cores")
            if hasattr(args, name)
        },
    )
    aifv = dataclasses.replace(
        default_cfg.aifv,
        m=getattr(args, "m", default_cfg.aifv.m) if command == "aifv-solve" else default_cfg.aifv.m,
        height_cap=getattr(args, "height_cap", default_cfg.aifv.height_cap),
        full_height=getattr(args, "full_height", default_cfg.aifv.full_height),
        max_trees=getattr(args, "max_trees", default_cfg.aifv.max_trees),
        strict=getattr(args, "strict", default_cfg.aifv.strict),
    )
    generator = default_cfg.generator
    if command == "gen":
        generator = dataclasses.replace(
            generator,
            seed=args.seed,
            m=args.m,
            states_per_family=args.states,
            max_denominator=args.max_denominator,
            symbols=args.symbols,
            bits=args.bits,
        )
    output = dataclasses.replace(
        default_cfg.output,
        json_errors=args.json_errors,
        float_digits=getattr(args, "digits", default_cfg.output.float_digits),
    )
    base = MCPolyConfig(solver=solver, aifv=aifv, generator=generator, output=output)
    x = getattr(args, "x0", None) if command == "solve" else getattr(args, "x", None)
    return RunConfig(
        command=command,
        base=base,
        input=getattr(args, "input", None),
        output=args.output,
        trace=getattr(args, "trace", None),
        code=getattr(args, "code", None),
        code_out=getattr(args, "code_out", None),
        box=getattr(args, "box", None),
        x=x,
        y=getattr(args, "y", None),
        x_range=(
            getattr(args, "x_min", 0.0),
            getattr(args, "x_max", 1.0),
            getattr(args, "step", 0.05),
        ),
        plot=getattr(args, "plot", None),
        length=getattr(args, "length", None),
        kind=getattr(args, "kind", "chain"),
    ).validate()


def _report_error(e: BaseException, exit_code: int, json_errors: bool) -> None:
    if json_errors:
        payload = {"error": type(e).__name__, "message": str(e), "exit_code": exit_code}
        sys.stderr.write(json.dumps(payload) + "\n")
    else:
        logger.error(f"{type(e).__name__}: {e}")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parses arguments, sets up logging and runs one command.

    Args:
        argv: Optional sequence of command-line arguments. If None, uses sys.argv[1:].

    Returns:
        The process exit code: 0 on success, otherwise the exit code of the
        error raised (2 parse, 3 validation, 4 budget, 5 internal invariant,
        1 anything else).
    """
    # Basic logging setup in case of early errors; refined below.
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")

    if argv is None:
        argv = sys.argv[1:]

    try:
        default_cfg = load_default_config()
    except Exception as e:
        logger.error(f"Failed to load default configuration: {e}", exc_info=True)
        return 1

    parser = _build_parser(default_cfg)
    try:
        args = parser.parse_args(args=argv)
    except SystemExit as e:
        # argparse exits on --help, --version and usage errors
        return e.code if isinstance(e.code, int) else 1

    # --- Configure Logging based on verbosity ---
    # No flag -> config default (1, INFO); -v -> DEBUG; --quiet -> WARNING
    log_level = logging.WARNING
    if not args.quiet:
        if args.verbose == 1:
            log_level = logging.INFO
        elif args.verbose >= 2:
            log_level = logging.DEBUG
    root_logger.setLevel(log_level)

    log_formatter = logging.Formatter(
        "%(asctime)s [%(levelname)-8s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    if not root_logger.hasHandlers():
        root_logger.addHandler(logging.StreamHandler(sys.stderr))
    for handler in root_logger.handlers:
        handler.setFormatter(log_formatter)

    logger.info(f"Starting mcpoly v{_get_version()}")
    logger.debug(f"Raw command line arguments: {argv}")
    logger.debug(f"Parsed arguments: {args}")
    logger.debug(f"Effective logging level: {logging.getLevelName(log_level)}")

    try:
        cfg = _run_config(args, default_cfg)
        COMMANDS[cfg.command](cfg)
    except MCPolyError as e:
        _report_error(e, e.exit_code, args.json_errors)
        return e.exit_code
    except (FileNotFoundError, OSError) as e:
        _report_error(e, 1, args.json_errors)
        return 1
    except Exception as e:
        if args.json_errors:
            _report_error(e, InvariantViolationError.exit_code, True)
        else:
            logger.error(f"Unexpected error: {e}", exc_info=True)
        return InvariantViolationError.exit_code

    logger.info(f"mcpoly {cfg.command} finished.")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Main entry point for the mcpoly command-line interface."""
    sys.exit(run(argv))


if __name__ == "__main__":
    # Allows direct execution for development
    main()
