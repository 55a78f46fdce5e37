"""
Tests for the CSV / JSON result files
"""
import numpy as np

from bass.models.benchmark import BenchmarkReport, BenchmarkRow, Method
from bass.models.chain import FitSummary, Interval
from bass.repositories.result_repository import BENCHMARK_HEADER, CURVE_HEADER, ResultRepository, format_number


def make_summary() -> FitSummary:
    interval = Interval(mean=1.0, lo95=0.5, hi95=1.5)
    return FitSummary(
        t=[0.0, 0.1, 1 / 3],
        mean=[1.0, np.float64(2.0) / 3.0, -0.25],
        lo95=[0.5, 0.1, -1.0],
        hi95=[1.5, 1.0, 0.5],
        lambda_mean=[1.0, 1.1, 0.9],
        tau=interval,
        delta=interval,
        eta=None,
        smoothing_ratio=interval,
        acceptance_gamma=None,
        samples=500,
    )


def make_report(wall_seconds=None) -> BenchmarkReport:
    return BenchmarkReport(seed=1, iterations=5000, burnin=1000, rows=[
        BenchmarkRow(example=2, method=Method.BASS_V1, reps=50, median_mse=0.03, q1_mse=0.02,
                     q3_mse=0.04, wall_seconds=wall_seconds),
        BenchmarkRow(example=2, method=Method.OSS, reps=0, failures=50),
    ])


class TestFormatNumber:
    def test_shortest_round_trip(self):
        for value in [0.1, 1 / 3, 1e-300, -2.5e17, np.float64(0.7)]:
            text = format_number(value)
            assert float(text) == value
        assert format_number(np.float64(0.1)) == "0.1"

    def test_none_is_empty(self):
        assert format_number(None) == ""


class TestWriteFit:
    def test_files_and_round_trip(self, tmp_path):
        repository = ResultRepository(tmp_path / "out")
        summary = make_summary()
        paths = repository.write_fit(summary, {"model": "bass1", "seed": 7, "iterations": 600, "burnin": 100})
        assert [path.name for path in paths] == ["summary.json", "curve.csv"]

        curve = repository.read_curve()
        assert curve["t"] == summary.t
        assert curve["mean"] == summary.mean

        text = (tmp_path / "out" / "curve.csv").read_bytes().decode("utf-8")
        assert text.splitlines()[0] == ",".join(CURVE_HEADER)
        assert "\r" not in text

    def test_summary_keys(self, tmp_path):
        repository = ResultRepository(tmp_path)
        repository.write_fit(make_summary(), {"model": "oss", "seed": 0, "iterations": 600, "burnin": 100})
        payload = repository.read_summary()
        for key in ["model", "seed", "iterations", "burnin", "acceptance_gamma", "tau", "delta", "eta"]:
            assert key in payload
        assert payload["tau"] == {"mean": 1.0, "lo95": 0.5, "hi95": 1.5}
        assert payload["eta"] is None
        assert payload["samples"] == 500


class TestWriteBenchmark:
    def test_csv_rows(self, tmp_path):
        repository = ResultRepository(tmp_path)
        repository.write_benchmark(make_report())
        lines = (tmp_path / "benchmark.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == ",".join(BENCHMARK_HEADER)
        assert lines[1] == "2,BASS-v1,50,0.03,0.02,0.04,0,"
        assert lines[2] == "2,OSS,0,,,,50,"

    def test_json_round_trip(self, tmp_path):
        repository = ResultRepository(tmp_path)
        report = make_report(wall_seconds=12.5)
        repository.write_benchmark(report)
        assert repository.read_benchmark() == report

    def test_byte_identical(self, tmp_path):
        ResultRepository(tmp_path / "a").write_benchmark(make_report())
        ResultRepository(tmp_path / "b").write_benchmark(make_report())
        for name in ["benchmark.csv", "benchmark.json"]:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


class TestWriteMatrix:
    def test_format(self):
        text = ResultRepository.format_matrix(np.array([[1.0, -4.0], [0.25, 0.0]]))
        assert text == "1.0,-4.0\n0.25,0.0\n"

    def test_stdout(self, capsys):
        assert ResultRepository.write_matrix(np.eye(2)) is None
        assert capsys.readouterr().out == "1.0,0.0\n0.0,1.0\n"

    def test_file(self, tmp_path):
        path = ResultRepository.write_matrix(np.eye(2), tmp_path / "m" / "eye.csv")
        assert path.read_text(encoding="utf-8") == "1.0,0.0\n0.0,1.0\n"
