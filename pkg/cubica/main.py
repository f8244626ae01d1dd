import argparse
import logging
import sys
from typing import List, Optional

from cubica.commands import EXIT_INPUT, EXIT_OK, evaluate, fold, subdivide, verify
from cubica.config import settings
from cubica.errors import CubicaError, ParseError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubica",
        description="Exact cubical machinery for higher connections, curvature and Stokes",
    )
    parser.add_argument("--log-level", default=None, help=f"Logging level (default {settings.LOG_LEVEL})")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Register all command modules
    verify.register(subparsers)
    evaluate.register(subparsers)
    fold.register(subparsers)
    subdivide.register(subparsers)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, dispatch to the selected command and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse has already printed the usage or the help text
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT
    logging.basicConfig(level=(args.log_level or settings.LOG_LEVEL).upper())

    try:
        return args.handler(args)
    except ParseError as e:
        logger.error(f"Cannot read {e.path} at {e.location}: {e.message}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except CubicaError as e:
        logger.error(f"Invalid input for {args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
