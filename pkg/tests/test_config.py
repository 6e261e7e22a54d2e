"""Tests for config module."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from pautkit.config import (
    CONFIG_VERSION,
    ToolkitConfig,
    default_config_path,
    load_config,
    save_config,
)
from pautkit.constants import DEFAULT_LIMIT


def test_save_and_load_roundtrip(tmp_path: Path) -> None:
    config = ToolkitConfig(jobs=3, limit=6, validate=True, pretty=True, graph_format="json")
    config_path = tmp_path / "config.json"
    assert save_config(config, path=config_path) == config_path

    loaded = load_config(path=config_path)
    assert loaded == config


def test_load_missing_file_gives_defaults(tmp_path: Path) -> None:
    assert load_config(path=tmp_path / "nonexistent.json") == ToolkitConfig()


def test_load_version_mismatch(tmp_path: Path) -> None:
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({"version": 999}))
    with pytest.raises(ValueError, match="Config version mismatch"):
        load_config(path=config_path)


def test_partial_file_fills_defaults(tmp_path: Path) -> None:
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({"version": CONFIG_VERSION, "jobs": 5}))
    loaded = load_config(path=config_path)
    assert loaded.jobs == 5
    assert loaded.limit == DEFAULT_LIMIT
    assert loaded.graph_format == "graph6"


def test_save_creates_valid_json(tmp_path: Path) -> None:
    config_path = tmp_path / "config.json"
    save_config(ToolkitConfig(graph_format="edgelist"), path=config_path)

    raw = json.loads(config_path.read_text())
    assert raw["version"] == CONFIG_VERSION
    assert raw["graph_format"] == "edgelist"
    assert raw["validate"] is False


def test_defaults() -> None:
    config = ToolkitConfig()
    assert config.version == CONFIG_VERSION
    assert config.jobs == 1
    assert config.limit == DEFAULT_LIMIT == 8
    assert config.validate is False
    assert config.pretty is False
    assert config.graph_format == "graph6"


@pytest.mark.parametrize(
    "kwargs, message",
    [
        ({"jobs": 0}, "jobs must be at least 1"),
        ({"limit": 0}, "limit must be at least 1"),
        ({"graph_format": "dot"}, "Unknown graph format"),
    ],
)
def test_invalid_values(kwargs: dict, message: str) -> None:
    with pytest.raises(ValueError, match=message):
        ToolkitConfig(**kwargs)


def test_invalid_value_in_file(tmp_path: Path) -> None:
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({"version": CONFIG_VERSION, "jobs": 0}))
    with pytest.raises(ValueError, match="jobs"):
        load_config(path=config_path)


def test_default_path_uses_patched_location(isolated_config: Path) -> None:
    assert default_config_path() == isolated_config
    assert load_config() == ToolkitConfig()


def test_env_override(
    isolated_config: Path, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
) -> None:
    other = tmp_path / "elsewhere.json"
    monkeypatch.setenv("PAUTKIT_CONFIG", str(other))
    assert default_config_path() == other
    save_config(ToolkitConfig(jobs=4))
    assert other.exists()
    assert not isolated_config.exists()
    assert load_config().jobs == 4


def test_sample_config_fixture(sample_config: Path) -> None:
    loaded = load_config()
    assert loaded.jobs == 2
    assert loaded.limit == 6
    assert loaded.graph_format == "edgelist"
