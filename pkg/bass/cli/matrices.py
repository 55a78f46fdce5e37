"""
`matrices`: dump one finite-element matrix as dense CSV
"""
import argparse
import logging
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from bass.cli.common import add_common_flags, merge_options, report_failure
from bass.engines.fem_engine import FemAssembler
from bass.errors import BassError, EXIT_OK
from bass.models.cli import MatricesOptions, MatrixKind
from bass.models.grid import Grid
from bass.parsers.data_parser import DataParser
from bass.repositories.result_repository import ResultRepository

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("matrices", help="Dump a matrix as dense CSV")
    parser.add_argument("--which", help="h, b, btilde, q, q1, q2 or r")
    parser.add_argument("--grid", type=Path, help="File with one knot location per line")
    parser.add_argument("--lambda", dest="lambda_path", type=Path, help="File with one lambda per knot")
    parser.add_argument("--kappa", type=float, help="Range parameter of R")
    parser.add_argument("--output", type=Path, help="Destination CSV (default: standard output)")
    add_common_flags(parser)
    parser.set_defaults(handler=cmd_matrices)


def build_dense(options: MatricesOptions, grid: Grid) -> np.ndarray:
    which = options.which
    if which == MatrixKind.H:
        return FemAssembler.build_H(grid).to_dense()
    if which == MatrixKind.B:
        return FemAssembler.build_B(grid).to_dense()
    if which == MatrixKind.BTILDE:
        return FemAssembler.build_Btilde(grid).to_dense()
    if which == MatrixKind.Q:
        return FemAssembler.build_Q_global(grid).to_dense()
    if which == MatrixKind.R:
        kappa = options.kappa if options.kappa is not None else 2.0 / grid.span
        return FemAssembler.build_R(grid, kappa).to_dense()

    lam = DataParser.parse_lambda_file(options.lambda_path)
    if which == MatrixKind.Q1:
        return FemAssembler.build_Q_sde1(grid, lam).to_dense()
    return FemAssembler.build_Q_sde2(grid, lam).to_dense()


def cmd_matrices(args: argparse.Namespace) -> int:
    """Write the requested matrix to --output or standard output; returns the exit code"""
    try:
        options = merge_options(args, MatricesOptions)
        grid = FemAssembler.build_grid(DataParser.parse_grid_file(options.grid))
        matrix = build_dense(options, grid)
        ResultRepository.write_matrix(matrix, options.output)
        logger.info(f"Wrote {options.which.value} ({grid.size} x {grid.size})")
        return EXIT_OK
    except (BassError, ValidationError) as exc:
        return report_failure(exc)
