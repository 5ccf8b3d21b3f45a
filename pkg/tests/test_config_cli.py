#!/usr/bin/env python3
"""
Configuration loading, validation and end-to-end CLI runs
"""

import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

import pytest

from gibbs_explorer.cli.cli_runner import EXIT_OK, EXIT_VALIDATION, run_cli
from gibbs_explorer.core.config_manager import ConfigManager
from gibbs_explorer.core.engine import format_duration
from gibbs_explorer.core.errors import ConfigValidationError

POISSON_RUN = """\
command: sample
model:
  variant: poisson
  theta: 5.0
mc:
  samples: 20
  seed: 77
logging:
  log_to_file: false
"""

BAD_STRAUSS = """\
command: sample
model:
  variant: strauss
  theta: 2.0
  c: 1.5
  R: 0.1
logging:
  log_to_file: false
"""


def _write(directory: Path, text: str, name: str = "run.yaml") -> Path:
    path = directory / name
    path.write_text(text, encoding="utf-8")
    return path


def test_strauss_c_above_one_reports_its_line():
    with tempfile.TemporaryDirectory() as tmp:
        path = _write(Path(tmp), BAD_STRAUSS)
        with pytest.raises(ConfigValidationError) as info:
            ConfigManager().load_config(str(path))
        assert info.value.key == "model.c"
        assert info.value.line == 5
        assert str(info.value).startswith("line 5: model.c:")


def test_invalid_config_exits_with_validation_code():
    with tempfile.TemporaryDirectory() as tmp:
        path = _write(Path(tmp), BAD_STRAUSS)
        assert run_cli(str(path), output_dir=str(Path(tmp) / "out")) == EXIT_VALIDATION


def test_unknown_section_is_rejected():
    with pytest.raises(ConfigValidationError) as info:
        ConfigManager().load_mapping({"sampler": {"samples": 10}})
    assert info.value.key == "sampler"


def test_boundary_point_inside_window_is_rejected():
    with pytest.raises(ConfigValidationError) as info:
        ConfigManager().load_mapping({"boundary": [[0.5, 0.5]]})
    assert info.value.key == "boundary.0"


def test_boundary_point_outside_window_is_accepted():
    config = ConfigManager().load_mapping({"boundary": [[1.0, 0.5], [-0.2, 0.3, 0.7]]})
    assert config["boundary"][1] == [-0.2, 0.3, 0.7]


def test_user_model_replaces_default_model():
    config = ConfigManager().load_mapping({"model": {"variant": "hard_sphere", "theta": 3.0, "R": 0.2}})
    assert config["model"] == {"variant": "hard_sphere", "theta": 3.0, "R": 0.2}


def test_foreign_model_parameter_is_rejected():
    with pytest.raises(ConfigValidationError):
        ConfigManager().load_mapping({"model": {"variant": "poisson", "theta": 1.0, "R": 0.1}})


def test_config_hash_ignores_thread_count():
    manager = ConfigManager()
    manager.load_mapping({"mc": {"seed": 5}})
    before = manager.config_hash()
    manager.apply_overrides(threads=8)
    assert manager.config_hash() == before
    manager.apply_overrides(seed=6)
    assert manager.config_hash() != before


def test_thread_override_is_validated():
    manager = ConfigManager()
    manager.load_mapping({})
    with pytest.raises(ConfigValidationError):
        manager.apply_overrides(threads=0)


def test_environment_overrides_are_typed(monkeypatch):
    monkeypatch.setenv("GIBBS_EXPLORER_SEED", "9")
    monkeypatch.setenv("GIBBS_EXPLORER_LOG_TO_FILE", "true")
    monkeypatch.setenv("GIBBS_EXPLORER_LOG_LEVEL", "DEBUG")
    with tempfile.TemporaryDirectory() as tmp:
        config = ConfigManager().load_config(str(_write(Path(tmp), POISSON_RUN)))
    assert config["mc"]["seed"] == 9
    assert config["logging"]["log_to_file"] is True
    assert config["logging"]["level"] == "DEBUG"


def test_sample_run_writes_outputs():
    with tempfile.TemporaryDirectory() as tmp:
        path = _write(Path(tmp), POISSON_RUN)
        out = Path(tmp) / "out"
        assert run_cli(str(path), output_dir=str(out)) == EXIT_OK
        lines = (out / "samples.jsonl").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 20
        assert (out / "summary.md").exists()
        manifest = json.loads((out / "run_manifest.json").read_text(encoding="utf-8"))
        assert manifest["seed"] == 77


def test_outputs_do_not_depend_on_threads():
    with tempfile.TemporaryDirectory() as tmp:
        path = _write(Path(tmp), POISSON_RUN)
        serial, threaded = Path(tmp) / "t1", Path(tmp) / "t4"
        assert run_cli(str(path), output_dir=str(serial), threads=1) == EXIT_OK
        assert run_cli(str(path), output_dir=str(threaded), threads=4) == EXIT_OK
        for name in ("samples.jsonl", "summary.md"):
            assert (serial / name).read_bytes() == (threaded / name).read_bytes()


def test_format_duration():
    assert format_duration(0.25) == "250ms"
    assert format_duration(12.34) == "12.3s"
    assert format_duration(125.0) == "2m 5.0s"


def main():
    """Run the config and CLI tests without pytest"""
    tests = [(name, fn) for name, fn in globals().items()
             if name.startswith("test_") and callable(fn) and fn.__code__.co_argcount == 0]
    passed = 0
    for name, fn in tests:
        try:
            fn()
            passed += 1
            print(f"PASS: {name}")
        except Exception as e:
            print(f"FAIL: {name} - {e}")
    print(f"\nTEST RESULTS: {passed}/{len(tests)} PASSED")
    return 0 if passed == len(tests) else 1


if __name__ == "__main__":
    sys.exit(main())
