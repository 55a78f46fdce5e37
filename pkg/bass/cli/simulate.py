"""
`simulate`: run the replicated simulation benchmark
"""
import argparse
import logging
import os
from pathlib import Path

from pydantic import ValidationError

from bass.cli.common import add_common_flags, merge_options, report_failure
from bass.engines.benchmark_engine import BenchmarkEngine
from bass.errors import BassError, EXIT_OK
from bass.models.benchmark import ExampleSpec
from bass.models.cli import SimulateOptions
from bass.repositories.result_repository import ResultRepository

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("simulate", help="Run the simulation benchmark")
    parser.add_argument("--example", help="Example ids, comma separated (1, 2, 3)")
    parser.add_argument("--reps", type=int, help="Replications per example")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--methods", help="Comma separated: bass1, bass2, oss")
    parser.add_argument("--iterations", type=int)
    parser.add_argument("--burnin", type=int)
    parser.add_argument("--jobs", type=int, help="Worker processes (default: all CPUs)")
    parser.add_argument("--timings", action="store_true", default=None, help="Record wall_seconds")
    parser.add_argument("--output", type=Path, help="Output directory")
    add_common_flags(parser)
    parser.set_defaults(handler=cmd_simulate)


def cmd_simulate(args: argparse.Namespace) -> int:
    """Run the benchmark and write benchmark.csv and benchmark.json; returns the exit code"""
    try:
        options = merge_options(args, SimulateOptions)
        examples = [ExampleSpec.for_id(example_id, reps=options.reps, seed=options.seed)
                    for example_id in options.example]
        jobs = options.jobs or os.cpu_count() or 1

        report = BenchmarkEngine.run_benchmark(
            examples,
            options.methods,
            iterations=options.iterations,
            burnin=options.burnin,
            jobs=jobs,
            timings=options.timings,
        )
        paths = ResultRepository(options.output).write_benchmark(report)
        logger.info(f"Wrote {', '.join(str(path) for path in paths)}")
        return EXIT_OK
    except (BassError, ValidationError) as exc:
        return report_failure(exc)
