"""Shared test fixtures."""

from __future__ import annotations

from pathlib import Path
from typing import Iterator
from unittest.mock import patch

import pytest

from pautkit.config import ToolkitConfig, save_config
from pautkit.graph6 import format_graph6
from pautkit.graphs import Graph, graph_classes
from pautkit.paut import InverseSubmonoid, enumerate_paut
from pautkit.pperm import all_partial_perms, identity


@pytest.fixture
def gamma0() -> Graph:
    """Edges {1,2}, {2,3} and an isolated vertex 4 (0-based: 01, 12)."""
    return Graph.from_edges(4, [(0, 1), (1, 2)])


@pytest.fixture
def gamma0_paut(gamma0: Graph) -> InverseSubmonoid:
    return enumerate_paut(gamma0)


@pytest.fixture
def low_rank_monoid() -> InverseSubmonoid:
    """Every partial permutation of rank <= 2 on 3 points, plus the identity."""
    low = [f for f in all_partial_perms(3) if f.rank <= 2]
    return InverseSubmonoid(3, tuple(low) + (identity(3),))


@pytest.fixture
def corpus20(tmp_path: Path) -> Path:
    """First 20 isomorphism classes on 5 vertices, one graph6 line each."""
    path = tmp_path / "corpus20.g6"
    lines = [format_graph6(g) for g in graph_classes(5)[:20]]
    path.write_bytes(b"\n".join(lines) + b"\n")
    return path


@pytest.fixture
def isolated_config(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Iterator[Path]:
    """Point the config at an empty temp location and clear PAUTKIT_* variables."""
    for var in (
        "PAUTKIT_CONFIG",
        "PAUTKIT_JOBS",
        "PAUTKIT_LIMIT",
        "PAUTKIT_VALIDATE",
        "PAUTKIT_PRETTY",
        "PAUTKIT_FORMAT",
    ):
        monkeypatch.delenv(var, raising=False)
    config_path = tmp_path / "pautkit.json"
    with patch("pautkit.config.CONFIG_PATH", config_path):
        yield config_path


@pytest.fixture
def sample_config(isolated_config: Path) -> Path:
    """A saved config with two jobs and edge-list output."""
    save_config(ToolkitConfig(jobs=2, limit=6, graph_format="edgelist"), path=isolated_config)
    return isolated_config
