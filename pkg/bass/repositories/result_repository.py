"""
Repository writing fit, benchmark and matrix results as CSV and JSON files
"""
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

import numpy as np

from bass.models.benchmark import BenchmarkReport
from bass.models.chain import FitSummary


CURVE_HEADER = ["t", "mean", "lo95", "hi95", "lambda_mean"]
BENCHMARK_HEADER = ["example", "method", "reps", "median_mse", "q1_mse", "q3_mse", "failures", "wall_seconds"]


def format_number(value: Optional[float]) -> str:
    """Shortest decimal text that reads back to the same double; empty for None"""
    if value is None:
        return ""
    return repr(float(value))


def _csv_writer(f: TextIO):
    return csv.writer(f, lineterminator="\n")


class ResultRepository:
    """Manages result files inside one output directory"""

    SUMMARY_FILE = "summary.json"
    CURVE_FILE = "curve.csv"
    BENCHMARK_CSV = "benchmark.csv"
    BENCHMARK_JSON = "benchmark.json"

    def __init__(self, storage_dir: Path):
        """
        Initialize repository

        Args:
            storage_dir: Directory to store result files, created if missing
        """
        self.storage_dir = storage_dir
        self.storage_dir.mkdir(parents=True, exist_ok=True)

    def _get_file_path(self, name: str) -> Path:
        return self.storage_dir / name

    def _write_json(self, name: str, payload: Dict[str, Any]) -> Path:
        file_path = self._get_file_path(name)
        with open(file_path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(payload, f, indent=2)
            f.write("\n")
        return file_path

    def write_fit(self, summary: FitSummary, settings: Dict[str, Any]) -> List[Path]:
        """
        Save the JSON summary and the curve CSV of one fit

        Args:
            summary: Posterior summary of the fit
            settings: Fit settings echoed into the JSON (model, seed, iterations, ...)

        Returns:
            Paths of the written files
        """
        payload = dict(settings)
        payload.update({
            "acceptance_gamma": summary.acceptance_gamma,
            "tau": summary.tau.model_dump(),
            "delta": summary.delta.model_dump(),
            "eta": summary.eta.model_dump() if summary.eta is not None else None,
            "smoothing_ratio": summary.smoothing_ratio.model_dump(),
            "samples": summary.samples,
        })
        json_path = self._write_json(self.SUMMARY_FILE, payload)

        curve_path = self._get_file_path(self.CURVE_FILE)
        with open(curve_path, "w", encoding="utf-8", newline="") as f:
            writer = _csv_writer(f)
            writer.writerow(CURVE_HEADER)
            for row in zip(summary.t, summary.mean, summary.lo95, summary.hi95, summary.lambda_mean):
                writer.writerow([format_number(value) for value in row])

        return [json_path, curve_path]

    def read_curve(self) -> Dict[str, List[float]]:
        """Load the curve CSV back into columns"""
        with open(self._get_file_path(self.CURVE_FILE), "r", encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            columns: Dict[str, List[float]] = {name: [] for name in CURVE_HEADER}
            for record in reader:
                for name in CURVE_HEADER:
                    columns[name].append(float(record[name]))
        return columns

    def read_summary(self) -> Dict[str, Any]:
        with open(self._get_file_path(self.SUMMARY_FILE), "r", encoding="utf-8") as f:
            return json.load(f)

    def write_benchmark(self, report: BenchmarkReport) -> List[Path]:
        """Save the benchmark report as CSV (one row per example and method) and JSON"""
        csv_path = self._get_file_path(self.BENCHMARK_CSV)
        with open(csv_path, "w", encoding="utf-8", newline="") as f:
            writer = _csv_writer(f)
            writer.writerow(BENCHMARK_HEADER)
            for row in report.rows:
                writer.writerow([
                    row.example,
                    row.method.value,
                    row.reps,
                    format_number(row.median_mse),
                    format_number(row.q1_mse),
                    format_number(row.q3_mse),
                    row.failures,
                    format_number(row.wall_seconds),
                ])

        json_path = self._write_json(self.BENCHMARK_JSON, report.model_dump(mode="json"))
        return [csv_path, json_path]

    def read_benchmark(self) -> BenchmarkReport:
        with open(self._get_file_path(self.BENCHMARK_JSON), "r", encoding="utf-8") as f:
            return BenchmarkReport(**json.load(f))

    @staticmethod
    def format_matrix(matrix: np.ndarray) -> str:
        """Dense row-major CSV text of a matrix"""
        buffer = io.StringIO()
        writer = _csv_writer(buffer)
        for row in np.atleast_2d(matrix):
            writer.writerow([format_number(value) for value in row])
        return buffer.getvalue()

    @staticmethod
    def write_matrix(matrix: np.ndarray, file_path: Optional[Path] = None) -> Optional[Path]:
        """
        Dump a dense matrix as CSV

        Args:
            matrix: Dense 2-D array
            file_path: Destination file; standard output when None

        Returns:
            The written path, or None for standard output
        """
        text = ResultRepository.format_matrix(matrix)
        if file_path is None:
            sys.stdout.write(text)
            return None
        file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        return file_path
