import json

import pytest
from pydantic import ValidationError

from quartic_iso.config import BoundsConfig, RunConfig, load_bounds_config, resolve_workers


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in ("SEARCH_LIMIT", "PRIME_BOUND", "INDEX_CAP", "TERMS", "X_BOUND", "TRIAL_BOUND", "RHO_ITERATIONS", "WORKERS"):
        monkeypatch.delenv(f"QUARTIC_ISO_{key}", raising=False)


def test_packaged_defaults():
    config = load_bounds_config()
    assert config == BoundsConfig()


def test_missing_keys_fall_back_to_defaults(tmp_path):
    path = tmp_path / "bounds.json"
    path.write_text(json.dumps({"prime_bound": 5000, "workers": 2}), encoding="utf-8")
    config = load_bounds_config(path)
    assert config.prime_bound == 5000
    assert config.workers == 2
    assert config.search_limit == 1000
    assert config.index_cap == 10**4


def test_missing_file_uses_defaults(tmp_path):
    assert load_bounds_config(tmp_path / "absent.json") == BoundsConfig()


def test_broken_file_uses_defaults(tmp_path):
    path = tmp_path / "bounds.json"
    path.write_text("{not json", encoding="utf-8")
    assert load_bounds_config(path) == BoundsConfig()


def test_environment_overrides(tmp_path, monkeypatch):
    monkeypatch.setenv("QUARTIC_ISO_PRIME_BOUND", "777")
    monkeypatch.setenv("QUARTIC_ISO_TERMS", "many")
    monkeypatch.setenv("QUARTIC_ISO_WORKERS", "auto")
    config = load_bounds_config(tmp_path / "absent.json")
    assert config.prime_bound == 777
    assert config.terms == 25
    assert config.workers is None


def test_resolve_workers():
    assert resolve_workers(3) == 3
    assert resolve_workers(None) >= 1
    assert resolve_workers(0) >= 1


def test_run_config_validation():
    config = RunConfig(command="iso", values=(2, 22))
    assert config.workers == 1
    assert config.search_limit == 1000
    with pytest.raises(ValidationError):
        RunConfig(command="search", search_limit=1)
    with pytest.raises(ValidationError):
        RunConfig(command="factor")
    with pytest.raises(ValidationError):
        RunConfig(command="iso", colour="red")
    with pytest.raises(ValidationError):
        config.workers = 4
