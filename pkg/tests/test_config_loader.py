"""
Tests for option files
"""
import pytest

from bass.errors import UsageError
from bass.loaders.config_loader import ConfigLoader


def write(tmp_path, text, name="bass.yaml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestConfigLoader:
    def test_no_file(self):
        assert ConfigLoader().load("fit") == {}

    def test_section_overrides_top_level(self, tmp_path):
        path = write(tmp_path, "seed: 1\niterations: 500\nfit:\n  seed: 2\nsimulate:\n  reps: 3\n")
        assert ConfigLoader(path).load("fit") == {"seed": 2, "iterations": 500}
        assert ConfigLoader(path).load("simulate") == {"seed": 1, "iterations": 500, "reps": 3}

    def test_dashes_become_underscores(self, tmp_path):
        path = write(tmp_path, "fit:\n  eval-points: 50\n")
        assert ConfigLoader(path).load("fit") == {"eval_points": 50}

    def test_json_file(self, tmp_path):
        path = write(tmp_path, '{"fit": {"model": "oss"}, "seed": 4}', "bass.json")
        assert ConfigLoader(path).load("fit") == {"seed": 4, "model": "oss"}

    def test_empty_file(self, tmp_path):
        assert ConfigLoader(write(tmp_path, "")).load("matrices") == {}

    def test_missing_file(self, tmp_path):
        with pytest.raises(UsageError):
            ConfigLoader(tmp_path / "missing.yaml").load("fit")

    def test_not_a_mapping(self, tmp_path):
        with pytest.raises(UsageError):
            ConfigLoader(write(tmp_path, "- 1\n- 2\n")).load("fit")

    def test_bad_section(self, tmp_path):
        with pytest.raises(UsageError):
            ConfigLoader(write(tmp_path, "fit: 3\n")).load("fit")

    def test_unparseable(self, tmp_path):
        with pytest.raises(UsageError):
            ConfigLoader(write(tmp_path, "fit: [1, 2\n")).load("fit")

    def test_invalid_utf8(self, tmp_path):
        path = tmp_path / "bass.yaml"
        path.write_bytes(b"fit:\n  model: \xff\xfe\n")
        with pytest.raises(UsageError):
            ConfigLoader(path).load("fit")
