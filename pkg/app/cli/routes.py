"""
Argument parsing and command dispatch.

Flags override the defaults held in config.settings; the merged values are
validated by the pydantic models before any handler runs.
"""
import argparse
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from pydantic import ValidationError

from app.cli import commands
from app.core.errors import ConfigurationError, SlidingAucError
from app.models.schemas import GenParams, RunConfig
import config

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so usage errors map to exit code 1."""

    def error(self, message: str) -> None:
        raise ConfigurationError(f"{self.prog}: {message}")


def _add_stream_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", "-i", type=Path, default=None, help="Input CSV (default: standard input)")
    parser.add_argument("--output", "-o", type=Path, default=None, help="Output CSV (default: standard output)")
    parser.add_argument("--window", "-k", type=int, default=None, help="Sliding window capacity")
    parser.add_argument("--epsilon", "-e", default=None, help="Relative error budget (decimal, >= 0)")
    parser.add_argument("--emit-every", type=int, default=None, help="Emit one row every N events")
    parser.add_argument("--flip", action="store_true", default=None,
                        help="Estimate via flipped labels (tighter error for high AUC)")
    parser.add_argument("--verify-every", type=int, default=None,
                        help="Run the full invariant check every N events (0 = never)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sliding-auc", description=f"{config.settings.app_name} {config.settings.app_version}")
    subparsers = parser.add_subparsers(dest="mode", required=True)

    run = subparsers.add_parser("run", help="Stream approximate AUC estimates")
    _add_stream_arguments(run)

    validate = subparsers.add_parser("validate", help="Compare estimates against the exact AUC")
    _add_stream_arguments(validate)

    bench = subparsers.add_parser("bench", help="Time the estimator against exact recomputation")
    _add_stream_arguments(bench)
    bench.add_argument("--baseline-events", type=int, default=None,
                       help="Timed events for the recompute baseline (0 = all)")

    sweep = subparsers.add_parser("sweep", help="Error and cost across several epsilons")
    _add_stream_arguments(sweep)
    sweep.add_argument("--epsilons", dest="sweep_epsilons", default=None,
                       help="Comma-separated epsilons")

    gen = subparsers.add_parser("gen", help="Generate a synthetic labeled score stream")
    gen.add_argument("--output", "-o", type=Path, default=None, help="Output CSV (default: standard output)")
    gen.add_argument("--events", "-n", type=int, default=None, help="Number of events")
    gen.add_argument("--positive-rate", type=float, default=None, help="Probability of a positive label")
    gen.add_argument("--separation", type=float, default=None, help="Distance between class means")
    gen.add_argument("--seed", type=int, default=None, help="Random seed")
    return parser


def _given(args: argparse.Namespace, *names: str) -> Dict[str, Any]:
    return {name: getattr(args, name) for name in names if getattr(args, name, None) is not None}


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge flags over settings into a validated RunConfig."""
    settings = config.settings
    values: Dict[str, Any] = {
        "mode": args.mode,
        "window": settings.window,
        "epsilon": settings.epsilon,
        "emit_every": settings.emit_every,
        "flip": settings.flip,
        "verify_every": settings.verify_every,
        "baseline_events": settings.bench_baseline_events,
        "sweep_epsilons": settings.sweep_epsilons,
    }
    values.update(_given(args, "input", "output", "window", "epsilon", "emit_every", "flip",
                         "verify_every", "baseline_events", "sweep_epsilons"))
    return RunConfig(**values)


def gen_params_from_args(args: argparse.Namespace) -> GenParams:
    settings = config.settings
    values: Dict[str, Any] = {
        "events": settings.gen_events,
        "positive_rate": settings.gen_positive_rate,
        "separation": settings.gen_separation,
        "seed": settings.gen_seed,
    }
    values.update(_given(args, "events", "positive_rate", "separation", "seed"))
    return GenParams(**values)


def _gen(args: argparse.Namespace) -> int:
    return commands.gen_synthetic(gen_params_from_args(args), args.output)


def _with_run_config(handler: Callable[[RunConfig], int]) -> Callable[[argparse.Namespace], int]:
    return lambda args: handler(run_config_from_args(args))


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "run": _with_run_config(commands.run_stream),
    "validate": _with_run_config(commands.validate_mode),
    "bench": _with_run_config(commands.bench_mode),
    "sweep": _with_run_config(commands.sweep_mode),
    "gen": _gen,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run the selected command and map failures to exit codes.

    Returns:
        0 success, 1 I/O or configuration error, 2 malformed data,
        3 guarantee breach
    """
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.mode](args)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        return 1
    except SlidingAucError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return 1
