"""
Command-line entry point.
"""
import argparse
import logging
import sys
from typing import List, Optional

from .commands import COMMANDS, build_context
from .config import config
from .exceptions import AppError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=config.APP_NAME,
        description="Superhedging prices and arbitrage checks under multiple priors.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {config.APP_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    helps = {
        "support": "print the quasi-sure supports and polar atoms",
        "price": "superhedging price of a claim in a one-period model",
        "check": "classify a one-period model or a scenario tree (NA / AIP_only / IP)",
        "hedge": "backward superhedging on a scenario tree",
    }
    for name, text in helps.items():
        sub = subparsers.add_parser(name, help=text)
        sub.add_argument("model", help="model JSON file, or - for standard input")
        if name in ("price", "hedge"):
            sub.add_argument("--payoff", help="call:K[@i], put:K[@i] or linear:c1,c2,...")
        sub.add_argument("--tolerance", type=float, default=None, help="LP tolerance (default 1e-9)")
        sub.add_argument("--normalize", action="store_true", help="normalize prior weights")
        sub.add_argument("--oracle", action="store_true", help="cross-check with brute-force oracles")
        sub.add_argument("--parallel", action="store_true", help="run per-node tree steps concurrently")
        sub.add_argument("--log-level", default=config.LOG_LEVEL, help="logging level (stderr)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one command and return its exit code.

    Exit codes: 0 success / NA, 2 parse error, 3 instantaneous profit,
    4 AIP only, 5 internal invariant breach.
    """
    args = build_parser().parse_args(argv)

    # Configure logging
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format=config.LOG_FORMAT,
        stream=sys.stderr,
    )

    try:
        context = build_context(args)
        model = context.loader.read(args.model)
        return COMMANDS[args.command](model, context)
    except AppError as exc:
        logger.error(f"{exc.__class__.__name__} [{exc.error_code}]: {exc.message}")
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:
        logger.exception(f"Unexpected error: {exc}")
        print(f"error: {config.ERROR_GENERIC}", file=sys.stderr)
        return config.EXIT_INTERNAL_ERROR
