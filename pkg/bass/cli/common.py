"""
Helpers shared by the subcommand modules
"""
import argparse
import logging
from pathlib import Path
from typing import Any, Dict, Type, TypeVar

from pydantic import BaseModel

from bass.errors import exit_code_for
from bass.loaders.config_loader import ConfigLoader
from bass.models.cli import CliConfig

logger = logging.getLogger(__name__)

OptionsT = TypeVar("OptionsT", bound=BaseModel)

# argparse destinations that are not subcommand options
_FRONT_END_KEYS = {"command", "handler", "config", "verbose", "quiet"}


def add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="YAML or JSON file with option values")
    parser.add_argument("--verbose", action="store_true", help="Log progress (INFO)")
    parser.add_argument("--quiet", action="store_true", help="Log errors only")


def front_end_config(args: argparse.Namespace) -> CliConfig:
    return CliConfig.from_flags(args.command, getattr(args, "config", None),
                                getattr(args, "verbose", False), getattr(args, "quiet", False))


def merge_options(args: argparse.Namespace, options_cls: Type[OptionsT]) -> OptionsT:
    """
    Validate option values: flags > config file > model defaults

    Raises:
        UsageError: unreadable config file
        ValidationError: unknown keys or invalid values
    """
    cli = front_end_config(args)
    values: Dict[str, Any] = ConfigLoader(cli.config_path).load(cli.subcommand.value)
    for key, value in vars(args).items():
        if key in _FRONT_END_KEYS or value is None:
            continue
        values[key] = value
    return options_cls.model_validate(values)


def report_failure(exc: Exception) -> int:
    """Log a failed command and return its exit code; unexpected exceptions propagate"""
    code = exit_code_for(exc)
    logger.error(str(exc))
    return code
