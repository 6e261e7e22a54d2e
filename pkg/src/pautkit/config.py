"""Configuration dataclass and JSON serialization."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from pautkit.constants import DEFAULT_LIMIT, GRAPH_FORMATS

CONFIG_PATH = Path.home() / ".pautkit.json"
CONFIG_VERSION = 1
CONFIG_ENV = "PAUTKIT_CONFIG"


@dataclass
class ToolkitConfig:
    """Defaults for command-line options; flags and PAUTKIT_* variables win."""

    version: int = CONFIG_VERSION
    jobs: int = 1
    limit: int = DEFAULT_LIMIT  # soft cap on vertex count
    validate: bool = False  # run oracle cross-checks after each computation
    pretty: bool = False
    graph_format: str = "graph6"

    def __post_init__(self) -> None:
        if self.jobs < 1:
            raise ValueError(f"jobs must be at least 1, got {self.jobs}")
        if self.limit < 1:
            raise ValueError(f"limit must be at least 1, got {self.limit}")
        if self.graph_format not in GRAPH_FORMATS:
            raise ValueError(
                f"Unknown graph format {self.graph_format!r}. "
                f"Choose one of: {', '.join(GRAPH_FORMATS)}"
            )


def default_config_path() -> Path:
    """Return $PAUTKIT_CONFIG if set, else ~/.pautkit.json."""
    override = os.environ.get(CONFIG_ENV)
    if override:
        return Path(os.path.expandvars(os.path.expanduser(override)))
    return CONFIG_PATH


def load_config(path: Optional[Path] = None) -> ToolkitConfig:
    """Load config from JSON file. A missing file yields the defaults."""
    p = path or default_config_path()
    if not p.exists():
        return ToolkitConfig()

    raw = json.loads(p.read_text())

    if raw.get("version", 0) != CONFIG_VERSION:
        raise ValueError(
            f"Config version mismatch in {p}. Expected {CONFIG_VERSION}, "
            f"got {raw.get('version')}. Re-run 'pautkit config --save'."
        )

    return ToolkitConfig(
        version=raw["version"],
        jobs=int(raw.get("jobs", 1)),
        limit=int(raw.get("limit", DEFAULT_LIMIT)),
        validate=bool(raw.get("validate", False)),
        pretty=bool(raw.get("pretty", False)),
        graph_format=raw.get("graph_format", "graph6"),
    )


def save_config(config: ToolkitConfig, path: Optional[Path] = None) -> Path:
    """Save config to JSON file and return the path written."""
    p = path or default_config_path()
    raw = {
        "version": config.version,
        "jobs": config.jobs,
        "limit": config.limit,
        "validate": config.validate,
        "pretty": config.pretty,
        "graph_format": config.graph_format,
    }
    p.write_text(json.dumps(raw, indent=2) + "\n")
    return p
