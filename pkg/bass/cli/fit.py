"""
`fit`: fit a smoothing spline model to a CSV file of observations
"""
import argparse
import logging
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from bass.cli.common import add_common_flags, merge_options, report_failure
from bass.engines.mcmc_engine import ChainRunner
from bass.errors import BassError, EXIT_OK
from bass.models.cli import FitOptions
from bass.parsers.data_parser import DataParser
from bass.repositories.result_repository import ResultRepository

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("fit", help="Fit a model to t,y data")
    parser.add_argument("--input", type=Path, help="CSV file with header t,y")
    parser.add_argument("--output", type=Path, help="Output directory")
    parser.add_argument("--model", help="oss, bass1 or bass2")
    parser.add_argument("--errors", help="gaussian or cauchy")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--iterations", type=int)
    parser.add_argument("--burnin", type=int)
    parser.add_argument("--thin", type=int)
    parser.add_argument("--knots", help="auto, or the size of a regular knot grid")
    parser.add_argument("--subknots", type=int, help="Size of the nu basis")
    parser.add_argument("--kappa", type=float, help="Range parameter of the nu prior")
    parser.add_argument("--eval-points", dest="eval_points", type=int,
                        help="Summarize on a regular grid of N points instead of the knots")
    add_common_flags(parser)
    parser.set_defaults(handler=cmd_fit)


def cmd_fit(args: argparse.Namespace) -> int:
    """Run one fit and write summary.json and curve.csv; returns the exit code"""
    try:
        options = merge_options(args, FitOptions)
        spec = options.to_model_spec()
        data = DataParser.parse_observations(options.input)
        logger.info(f"Read {data.n_obs} observations from {options.input}")

        eval_points = None
        if options.eval_points is not None:
            eval_points = np.linspace(data.t.min(), data.t.max(), options.eval_points)

        design, draws, summary = ChainRunner.fit(spec, data, eval_points)

        settings = {
            "model": options.model.value,
            "errors": options.errors.value,
            "seed": options.seed,
            "iterations": options.iterations,
            "burnin": options.burnin,
            "thinning": options.thin,
            "knots": design.n_knots,
            "subknots": design.n_subknots,
            "kappa": design.kappa,
            "mode_failures": draws.mode_failures,
        }
        paths = ResultRepository(options.output).write_fit(summary, settings)
        logger.info(f"Wrote {', '.join(str(path) for path in paths)}")
        return EXIT_OK
    except (BassError, ValidationError) as exc:
        return report_failure(exc)
