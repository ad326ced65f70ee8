"""
cavity-lab: command-line front end.

    cavity-lab validate   --config setup.yaml
    cavity-lab trajectory --config setup.yaml --v 0.18 --ell 0
    cavity-lab map        --config setup.yaml --kind entropy --grid 200x200
    cavity-lab lines      --config setup.yaml --target max-entanglement --n 0-4
    cavity-lab crosscheck --config setup.yaml --curve out/max-entanglement_n0.csv --tol 0.05

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure,
3 verification failure.
"""

import argparse
import sys
from typing import List, Optional

from components.crosscheck_command import render_crosscheck
from components.lines_command import render_lines
from components.map_command import MAP_KINDS, render_map
from components.trajectory_command import render_trajectory
from components.validate_command import render_validate
from utils.core.errors import (
    ConfigurationError,
    DomainError,
    QuadratureError,
    StiffnessError,
    VerificationError,
)
from utils.core.log import configure_logging, get_logger
from utils.core.params import PropagationMethod

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFICATION = 3


class CliArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="YAML run configuration")
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    common.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--log-json", action="store_true", help="emit JSON log lines on stderr")

    parser = CliArgumentParser(prog="cavity-lab", description="Two-atom cavity transit simulator")
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", parents=[common], help="derived scales and adiabaticity check")
    validate.add_argument("--margin", type=float, help="required ratio for each dispersive condition")

    trajectory = commands.add_parser("trajectory", parents=[common], help="integrate the five-state model")
    trajectory.add_argument("--v", type=float, help="velocity in m/s (overrides config)")
    trajectory.add_argument("--ell", type=float, help="inter-atomic distance in µm (overrides config)")
    trajectory.add_argument("--initial", choices=["a1", "1a"], default="a1",
                            help="a1 = |a,1̄;0⟩, 1a = |1,ā;0⟩")
    trajectory.add_argument("--method", choices=[m.value for m in PropagationMethod])
    trajectory.add_argument("--samples", type=int)

    sweep = commands.add_parser("map", parents=[common], help="entropy, angle or fidelity grid")
    sweep.add_argument("--kind", choices=MAP_KINDS, default="entropy")
    sweep.add_argument("--grid", default="200x200", help="NVxNELL grid size")
    sweep.add_argument("--v-range", help="v/K range a:b")
    sweep.add_argument("--ell-range", default="0:3", help="ell/w range a:b")
    sweep.add_argument("--units", choices=["reduced", "absolute"], default="reduced")

    lines = commands.add_parser("lines", parents=[common], help="condition curves θ(υ, ℓ) = θ*")
    lines.add_argument("--target", choices=["max-entanglement", "i-swap", "cz-cnot"], default="max-entanglement")
    lines.add_argument("--n", default="0", help="branch list, e.g. 0,1,2 or 0-4")
    lines.add_argument("--ell-range", default="0:3", help="ell/w range a:b")
    lines.add_argument("--samples", type=int, default=61)
    lines.add_argument("--units", choices=["reduced", "absolute"], default="reduced")

    crosscheck = commands.add_parser("crosscheck", parents=[common], help="verify a curve with the full model")
    crosscheck.add_argument("--curve", required=True, help="curve CSV written by 'lines'")
    crosscheck.add_argument("--tol", type=float, help="angle tolerance in rad")
    crosscheck.add_argument("--points", type=int, help="check only this many evenly spaced points")

    return parser


COMMANDS = {
    "validate": render_validate,
    "trajectory": render_trajectory,
    "map": render_map,
    "lines": render_lines,
    "crosscheck": render_crosscheck,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, json=args.log_json)

    try:
        return COMMANDS[args.command](args)
    except (ConfigurationError, DomainError) as e:
        logger.error("invalid_input", command=args.command, error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (StiffnessError, QuadratureError) as e:
        logger.error("numerical_failure", command=args.command, error=str(e))
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except VerificationError as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
