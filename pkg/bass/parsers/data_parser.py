"""
Parsers for observation CSV files and one-column knot / lambda files
"""
import csv
import math
from pathlib import Path
from typing import List

import numpy as np

from bass.errors import InputError, ParseError
from bass.models.chain import Observations


class DataParser:
    """Reads the plain-text inputs of the command-line subcommands"""

    @staticmethod
    def parse_number(text: str, line: int, column: str) -> float:
        """
        Parse one decimal number

        Args:
            text: Field text
            line: 1-based line number, for messages
            column: Column name, for messages

        Returns:
            The finite value
        """
        try:
            value = float(text.strip())
        except ValueError:
            raise ParseError(f"{column} is not a number: '{text.strip()}'", line=line)
        if not math.isfinite(value):
            raise ParseError(f"{column} must be finite, got '{text.strip()}'", line=line)
        return value

    @staticmethod
    def _read_lines(path: Path) -> List[str]:
        try:
            raw = Path(path).read_bytes()
        except OSError as e:
            raise InputError(f"cannot read {path}: {e}") from e
        try:
            return raw.decode("utf-8").splitlines()
        except UnicodeDecodeError as e:
            raise ParseError(f"not valid UTF-8: {e.reason}", line=raw.count(b"\n", 0, e.start) + 1) from e

    @classmethod
    def parse_observations(cls, path: Path) -> Observations:
        """
        Parse a CSV file with header `t,y` and one observation per row

        Repeated t values are kept; blank lines are skipped.
        """
        lines = cls._read_lines(path)
        if not lines:
            raise ParseError("empty file, expected header t,y", line=1)

        rows = csv.reader(lines)
        header = [field.strip().lower() for field in next(rows)]
        if header != ["t", "y"]:
            raise ParseError(f"expected header t,y, got {','.join(header)}", line=1)

        t, y = [], []
        for number, fields in enumerate(rows, start=2):
            if not fields or all(not field.strip() for field in fields):
                continue
            if len(fields) != 2:
                raise ParseError(f"expected 2 fields, got {len(fields)}", line=number)
            t.append(cls.parse_number(fields[0], number, "t"))
            y.append(cls.parse_number(fields[1], number, "y"))

        return Observations(t=t, y=y)

    @classmethod
    def parse_column(cls, path: Path, name: str) -> np.ndarray:
        """Parse one number per line; blank lines and lines starting with # are skipped"""
        values = []
        for number, text in enumerate(cls._read_lines(path), start=1):
            stripped = text.strip()
            if not stripped or stripped.startswith("#"):
                continue
            values.append(cls.parse_number(stripped, number, name))
        if not values:
            raise ParseError(f"no {name} values in {path}")
        return np.array(values)

    @classmethod
    def parse_grid_file(cls, path: Path) -> np.ndarray:
        return cls.parse_column(path, "t")

    @classmethod
    def parse_lambda_file(cls, path: Path) -> np.ndarray:
        return cls.parse_column(path, "lambda")
