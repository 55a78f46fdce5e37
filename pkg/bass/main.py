"""
Bayesian Adaptive Smoothing Splines - command-line entry point
"""
import argparse
import logging
import sys
from typing import List, Optional

from bass.cli import fit, matrices, simulate
from bass.cli.common import front_end_config
from bass.errors import EXIT_USAGE, UsageError

logger = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that raises UsageError instead of exiting with status 2"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="bass",
        description="Bayesian adaptive smoothing splines on sparse GMRF priors",
    )
    subparsers = parser.add_subparsers(dest="command", parser_class=ArgumentParser)
    subparsers.required = True
    fit.register(subparsers)
    simulate.register(subparsers)
    matrices.register(subparsers)
    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, configure logging and run a subcommand; returns the exit code"""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE

    cli = front_end_config(args)
    configure_logging(cli.log_level)
    logger.debug(f"Running {cli.subcommand.value} with config {cli.config_path}")
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
