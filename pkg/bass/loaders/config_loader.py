"""
Loader for YAML/JSON option files used by the command-line subcommands
"""
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from bass.errors import UsageError


class ConfigLoader:
    """Reads option files: top-level keys plus one optional section per subcommand"""

    SECTIONS = ("fit", "simulate", "matrices")

    def __init__(self, config_path: Optional[Path] = None):
        """
        Initialize the loader

        Args:
            config_path: YAML or JSON file; no file means no configured values
        """
        self.config_path = config_path

    @staticmethod
    def normalize_key(key: str) -> str:
        return str(key).strip().replace("-", "_")

    def _read(self) -> Dict[str, Any]:
        if self.config_path is None:
            return {}
        if not self.config_path.exists():
            raise UsageError(f"config file not found: {self.config_path}")

        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                config = yaml.safe_load(f)
        except UnicodeDecodeError as e:
            raise UsageError(f"{self.config_path} is not valid UTF-8: {e.reason}") from e
        except yaml.YAMLError as e:
            raise UsageError(f"cannot parse {self.config_path}: {e}") from e

        if config is None:
            return {}
        if not isinstance(config, dict):
            raise UsageError(f"{self.config_path} must hold a mapping of option names")
        return config

    def load(self, subcommand: str) -> Dict[str, Any]:
        """
        Option values for one subcommand

        Args:
            subcommand: fit, simulate or matrices

        Returns:
            Mapping of option name to value; the subcommand's section wins
            over top-level keys and other sections are ignored
        """
        config = self._read()
        values = {}
        for key, value in config.items():
            if key not in self.SECTIONS:
                values[self.normalize_key(key)] = value

        section = config.get(subcommand) or {}
        if not isinstance(section, dict):
            raise UsageError(f"section '{subcommand}' in {self.config_path} must be a mapping")
        for key, value in section.items():
            values[self.normalize_key(key)] = value
        return values
