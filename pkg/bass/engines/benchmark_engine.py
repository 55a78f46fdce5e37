"""
Simulation benchmark: true curves, replicated datasets, paired fits and MSE summaries
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from scipy.interpolate import BSpline

from bass.engines.mcmc_engine import ChainRunner
from bass.engines.random_streams import RandomStreams
from bass.errors import BassError, DomainError, InputError
from bass.models.benchmark import (
    BenchmarkReport,
    BenchmarkRow,
    ExampleSpec,
    Method,
    ReplicationOutcome,
    ReplicationTask,
)
from bass.models.chain import ModelSpec, Observations

logger = logging.getLogger(__name__)


EXAMPLE1_KNOTS = (0.2, 0.6, 0.7)
EXAMPLE1_COEFFS = (20.0, 4.0, 6.0, 11.0, 6.0)
EXAMPLE3_EPS = 0.125


@lru_cache(maxsize=1)
def _natural_spline_projection() -> np.ndarray:
    """
    Columns combining the cubic B-splines into a natural-spline basis

    Follows the usual construction without intercept: drop the first
    B-spline, then project onto the null space of the second-derivative
    constraints at both boundaries.
    """
    knots = np.concatenate([[0.0] * 4, EXAMPLE1_KNOTS, [1.0] * 4])
    size = knots.size - 4
    basis = BSpline(knots, np.eye(size), 3)
    constraints = basis.derivative(2)(np.array([0.0, 1.0]))[:, 1:]
    q, _ = np.linalg.qr(constraints.T, mode="complete")
    return q[:, 2:]


def _example1(t: np.ndarray) -> np.ndarray:
    knots = np.concatenate([[0.0] * 4, EXAMPLE1_KNOTS, [1.0] * 4])
    bsplines = BSpline(knots, np.eye(knots.size - 4), 3)(t)[:, 1:]
    basis = bsplines @ _natural_spline_projection()
    return EXAMPLE1_COEFFS[0] + basis @ np.array(EXAMPLE1_COEFFS[1:])


def _example2(t: np.ndarray) -> np.ndarray:
    return np.sin(t) + 2.0 * np.exp(-30.0 * t ** 2)


def _example3(t: np.ndarray) -> np.ndarray:
    eps = EXAMPLE3_EPS
    return np.sqrt(t * (1.0 - t)) * np.sin(2.0 * np.pi * (1.0 + eps) / (t + eps))


_TRUE_FUNCTIONS = {1: _example1, 2: _example2, 3: _example3}


def run_replication(task: ReplicationTask) -> ReplicationOutcome:
    """Generate one dataset and fit one method to it; module level so worker processes can run it"""
    example = task.example
    data = BenchmarkEngine.gen_dataset(example, task.rep, RandomStreams.dataset(example.seed, example.id, task.rep))
    spec = BenchmarkEngine.model_spec(task)

    start = time.perf_counter()
    try:
        _, _, summary = ChainRunner.fit(spec, data)
    except BassError as exc:
        return ReplicationOutcome(example_id=example.id, method=task.method, rep=task.rep,
                                  error=str(exc), seconds=time.perf_counter() - start)

    fhat = np.array(summary.mean)
    ftrue = BenchmarkEngine.true_function(example.id, np.array(summary.t))
    return ReplicationOutcome(
        example_id=example.id,
        method=task.method,
        rep=task.rep,
        mse=BenchmarkEngine.mse(fhat, ftrue),
        seconds=time.perf_counter() - start,
    )


class BenchmarkEngine:
    """Replicated simulation study comparing the global and adaptive models"""

    @staticmethod
    def true_function(example_id: int, t: Union[float, Sequence[float], np.ndarray]) -> Union[float, np.ndarray]:
        """
        Evaluate the true curve of an example

        Args:
            example_id: 1, 2 or 3
            t: Point or points inside the example's domain

        Returns:
            float for a scalar t, array otherwise
        """
        if example_id not in _TRUE_FUNCTIONS:
            raise InputError(f"unknown example {example_id}")
        spec = ExampleSpec.for_id(example_id)
        points = np.asarray(t, dtype=float)
        values = np.atleast_1d(points)
        span = spec.upper - spec.lower
        if np.any(values < spec.lower - 1e-12 * span) or np.any(values > spec.upper + 1e-12 * span):
            raise DomainError(f"t outside [{spec.lower}, {spec.upper}] for example {example_id}")

        result = _TRUE_FUNCTIONS[example_id](np.clip(values, spec.lower, spec.upper))
        if points.ndim == 0:
            return float(result[0])
        return result

    @staticmethod
    def gen_dataset(spec: ExampleSpec, rep_index: int, rng: np.random.Generator) -> Observations:
        """Regular design grid with Gaussian noise added to the true curve"""
        t = np.linspace(spec.lower, spec.upper, spec.n_points)
        f = BenchmarkEngine.true_function(spec.id, t)
        y = f + spec.noise_sd * rng.standard_normal(t.size)
        return Observations(t=t, y=y)

    @staticmethod
    def gen_heteroskedastic(n: int, rng: np.random.Generator) -> Observations:
        """
        Smooth curve on [0, 1] with noise sd rising linearly from 0.1 to 1

        Quiet on the left and noisy on the right, like accelerometer traces after impact.
        """
        t = np.linspace(0.0, 1.0, n)
        sd = 0.1 + 0.9 * t
        y = np.sin(2.0 * np.pi * t) + sd * rng.standard_normal(n)
        return Observations(t=t, y=y)

    @staticmethod
    def mse(fhat: Sequence[float], ftrue: Sequence[float]) -> float:
        fhat = np.asarray(fhat, dtype=float)
        ftrue = np.asarray(ftrue, dtype=float)
        if fhat.shape != ftrue.shape:
            raise InputError(f"length mismatch: {fhat.shape} vs {ftrue.shape}")
        return float(np.mean((fhat - ftrue) ** 2))

    @staticmethod
    def model_spec(task: ReplicationTask) -> ModelSpec:
        """Chain settings of one fit; the seed depends on example, replication and method"""
        method_index = list(Method).index(task.method)
        return ModelSpec(
            variant=task.method.variant,
            subknots=task.example.subknots_v2 if task.method == Method.BASS_V2 else None,
            iterations=task.iterations,
            burnin=task.burnin,
            seed=RandomStreams.fit_seed(task.example.seed, task.example.id, task.rep, method_index),
        )

    @staticmethod
    def summarize_outcomes(example_id: int, method: Method, outcomes: List[ReplicationOutcome],
                           timings: bool) -> BenchmarkRow:
        outcomes = sorted(outcomes, key=lambda outcome: outcome.rep)
        errors = np.array([outcome.mse for outcome in outcomes if outcome.mse is not None])
        failures = sum(1 for outcome in outcomes if outcome.mse is None)

        row = dict(example=example_id, method=method, reps=int(errors.size), failures=failures)
        if errors.size:
            q1, median, q3 = np.quantile(errors, [0.25, 0.5, 0.75])
            row.update(median_mse=float(median), q1_mse=float(q1), q3_mse=float(q3))
        if timings:
            row["wall_seconds"] = float(sum(outcome.seconds for outcome in outcomes))
        return BenchmarkRow(**row)

    @staticmethod
    def run_benchmark(examples: Sequence[ExampleSpec], methods: Sequence[Method],
                      reps: Optional[int] = None, seed: Optional[int] = None,
                      iterations: int = 5000, burnin: int = 1000, jobs: int = 1,
                      timings: bool = False) -> BenchmarkReport:
        """
        Fit every method to every replication of every example

        Args:
            examples: Example settings
            methods: Methods to compare; all share each replication's dataset
            reps: Replication count overriding the examples' own
            seed: Master seed overriding the examples' own
            iterations: Sweeps per chain
            burnin: Burn-in sweeps per chain
            jobs: Worker processes; 1 runs in this process
            timings: Record total fit time per (example, method)

        Returns:
            BenchmarkReport with one row per (example, method); identical for any jobs value
        """
        overrides = {}
        if reps is not None:
            overrides["reps"] = reps
        if seed is not None:
            overrides["seed"] = seed
        examples = [ExampleSpec(**{**example.model_dump(), **overrides}) for example in examples]
        ordered = [method for method in Method if method in methods]

        tasks = [
            ReplicationTask(example=example, method=method, rep=rep, iterations=iterations, burnin=burnin)
            for example in examples
            for method in ordered
            for rep in range(example.reps)
        ]
        logger.info(f"Running {len(tasks)} fits ({len(examples)} examples x {len(ordered)} methods) "
                    f"with {jobs} worker(s)")

        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                outcomes = list(pool.map(run_replication, tasks, chunksize=1))
        else:
            outcomes = [run_replication(task) for task in tasks]

        grouped: Dict[tuple, List[ReplicationOutcome]] = {}
        for outcome in outcomes:
            if outcome.error is not None:
                logger.warning(f"Example {outcome.example_id}, {outcome.method.value}, "
                               f"replication {outcome.rep} excluded: {outcome.error}")
            grouped.setdefault((outcome.example_id, outcome.method), []).append(outcome)

        rows = [
            BenchmarkEngine.summarize_outcomes(example.id, method, grouped.get((example.id, method), []), timings)
            for example in examples
            for method in ordered
        ]
        for row in rows:
            logger.info(f"Example {row.example} {row.method.value}: median MSE {row.median_mse} "
                        f"({row.failures} failures)")

        return BenchmarkReport(
            seed=examples[0].seed if examples else 0,
            iterations=iterations,
            burnin=burnin,
            rows=rows,
        )
