"""CLI integration tests using CliRunner."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterator

import numpy as np
import pytest
from click.testing import CliRunner
from pytest_mock import MockerFixture

from pautkit.abstract import MulTable, table_from_submonoid
from pautkit.cli import main
from pautkit.config import load_config
from pautkit.dumps import dump_json, monoid_to_json, table_to_json
from pautkit.graphs import Graph
from pautkit.paut import InverseSubmonoid, enumerate_paut
from pautkit.pperm import all_partial_perms


@pytest.fixture(autouse=True)
def _isolated(isolated_config: Path) -> Iterator[Path]:
    yield isolated_config


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def _write(tmp_path: Path, name: str, payload: Any) -> str:
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else dump_json(payload))
    return str(path)


def _table_json(rows: list) -> dict:
    return table_to_json(MulTable(m=len(rows), table=np.array(rows), identity=0))


def _partial_identities(n: int) -> InverseSubmonoid:
    return InverseSubmonoid(n, tuple(f for f in all_partial_perms(n) if f.is_idempotent()))


def test_version(runner: CliRunner) -> None:
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
    assert "0.1.0" in result.output


class TestEnumerate:
    def test_graph6_on_stdin(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["enumerate"], input="Cg\n")
        assert result.exit_code == 0, result.output
        out = json.loads(result.stdout)
        assert out["n"] == 4
        assert out["rank_counts"] == [1, 16, 40, 16, 2]
        assert len(out["elements"]) == 75
        assert "[ENUM] 75 partial automorphisms" in result.stderr

    def test_edgelist_file_and_jobs(self, runner: CliRunner, tmp_path: Path) -> None:
        src = _write(tmp_path, "g.txt", "4 1\n1 1 2\n1 2 3\n")
        serial = runner.invoke(main, ["enumerate", src, "--format", "edgelist"])
        parallel = runner.invoke(main, ["enumerate", src, "--format", "edgelist", "-j", "3"])
        assert serial.exit_code == parallel.exit_code == 0
        assert serial.stdout == parallel.stdout

    def test_pretty_prints_one_map_per_line(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["enumerate", "--pretty"], input="Cg\n")
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert len(lines) == 75
        assert lines[0] == "()"

    def test_digraph_edgelist(self, runner: CliRunner, tmp_path: Path) -> None:
        src = _write(tmp_path, "d.txt", "2 1\n1 1 2\n")
        result = runner.invoke(main, ["enumerate", src, "--format", "edgelist", "--digraph"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["rank_counts"] == [1, 4, 1]

    def test_format_from_config(self, runner: CliRunner, sample_config: Path) -> None:
        result = runner.invoke(main, ["enumerate"], input="3 1\n1 1 2\n")
        assert result.exit_code == 0
        assert json.loads(result.stdout)["rank_counts"] == [1, 9, 10, 2]

    def test_bad_graph6(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["enumerate"], input="A`\n")
        assert result.exit_code == 2
        assert "Error:" in result.stderr

    def test_missing_file(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(main, ["enumerate", str(tmp_path / "absent.g6")])
        assert result.exit_code == 2
        assert "Error:" in result.stderr

    def test_limit_flag(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["enumerate", "--limit", "3"], input="Cg\n")
        assert result.exit_code == 2
        assert "--limit 4" in result.stderr

    def test_limit_env(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["enumerate"], input="Cg\n", env={"PAUTKIT_LIMIT": "3"})
        assert result.exit_code == 2


class TestGreen:
    def test_graph_labels(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["green"], input="Cg\n")
        assert result.exit_code == 0, result.output
        out = json.loads(result.stdout)
        assert len(out["dclasses"]) == 8
        assert out["dclasses"][2]["label"] == "A_"
        assert "[GREEN] 8 D-classes" in result.stderr

    def test_pretty(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["green", "--pretty"], input="Cg\n")
        assert result.exit_code == 0
        assert "D2  height 2  2x2  |H| = 2" in result.stdout

    def test_from_monoid(
        self, runner: CliRunner, tmp_path: Path, gamma0_paut: InverseSubmonoid
    ) -> None:
        src = _write(tmp_path, "m.json", monoid_to_json(gamma0_paut))
        result = runner.invoke(main, ["green", src, "--from", "monoid"])
        assert result.exit_code == 0
        assert len(json.loads(result.stdout)["dclasses"]) == 8

    def test_from_table(self, runner: CliRunner, tmp_path: Path) -> None:
        t = table_from_submonoid(enumerate_paut(Graph.from_edges(2, [(0, 1)])))
        src = _write(tmp_path, "t.json", table_to_json(t))
        result = runner.invoke(main, ["green", src, "--from", "table"])
        assert result.exit_code == 0
        assert [d["height"] for d in json.loads(result.stdout)["dclasses"]] == [0, 1, 2]


class TestCheckAndBuild:
    def test_check_passes(
        self, runner: CliRunner, tmp_path: Path, gamma0_paut: InverseSubmonoid
    ) -> None:
        src = _write(tmp_path, "m.json", monoid_to_json(gamma0_paut))
        result = runner.invoke(main, ["check", src])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["passed"] is True

    def test_check_reports_witness(
        self, runner: CliRunner, tmp_path: Path, low_rank_monoid: InverseSubmonoid
    ) -> None:
        src = _write(tmp_path, "m.json", monoid_to_json(low_rank_monoid))
        result = runner.invoke(main, ["check", src])
        assert result.exit_code == 1
        out = json.loads(result.stdout)
        assert out["conditions"]["condition_U"]["witness"] == "(2 1)|(3)"

    def test_check_digraph(self, runner: CliRunner, tmp_path: Path) -> None:
        src = _write(tmp_path, "m.json", monoid_to_json(_partial_identities(2)))
        assert runner.invoke(main, ["check", src]).exit_code == 1
        assert runner.invoke(main, ["check", src, "--digraph"]).exit_code == 0

    def test_build_graph(
        self, runner: CliRunner, tmp_path: Path, gamma0_paut: InverseSubmonoid
    ) -> None:
        src = _write(tmp_path, "m.json", monoid_to_json(gamma0_paut))
        result = runner.invoke(main, ["build", src, "--validate"])
        assert result.exit_code == 0
        assert result.stdout == "Cg\n"
        edgelist = runner.invoke(main, ["build", src, "--format", "edgelist"])
        assert edgelist.stdout == "4 1\n1 1 2\n1 2 3\n"

    def test_build_refused(
        self, runner: CliRunner, tmp_path: Path, low_rank_monoid: InverseSubmonoid
    ) -> None:
        src = _write(tmp_path, "m.json", monoid_to_json(low_rank_monoid))
        result = runner.invoke(main, ["build", src])
        assert result.exit_code == 1
        assert json.loads(result.stdout)["passed"] is False

    def test_build_digraph(self, runner: CliRunner, tmp_path: Path) -> None:
        src = _write(tmp_path, "m.json", monoid_to_json(_partial_identities(2)))
        result = runner.invoke(main, ["build", src, "--digraph", "--format", "json"])
        assert result.exit_code == 0
        assert "colors" in json.loads(result.stdout)

    def test_malformed_dump(self, runner: CliRunner, tmp_path: Path) -> None:
        src = _write(tmp_path, "m.json", {"n": 2})
        result = runner.invoke(main, ["check", src])
        assert result.exit_code == 2
        assert "missing key 'elements'" in result.stderr


class TestTables:
    def test_realize_k2(self, runner: CliRunner, tmp_path: Path) -> None:
        t = table_from_submonoid(enumerate_paut(Graph.from_edges(2, [(0, 1)])))
        src = _write(tmp_path, "t.json", table_to_json(t))
        result = runner.invoke(main, ["realize", src])
        assert result.exit_code == 0
        assert result.stdout == "A_\n"
        as_json = runner.invoke(main, ["realize", src, "--format", "json"])
        out = json.loads(as_json.stdout)
        assert out["theorem"] == "graph"
        assert out["construction"] == {"n": 2, "edges": [[1, 2]]}

    def test_realize_none(self, runner: CliRunner, tmp_path: Path) -> None:
        t2 = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 2, 2, 2], [3, 3, 3, 3]]
        src = _write(tmp_path, "t.json", _table_json(t2))
        result = runner.invoke(main, ["realize", src])
        assert result.exit_code == 1
        assert json.loads(result.stdout)["theorem"] == "none"

    def test_munn(self, runner: CliRunner, tmp_path: Path) -> None:
        src = _write(tmp_path, "t.json", _table_json([[0, 1, 2], [1, 0, 2], [2, 2, 2]]))
        result = runner.invoke(main, ["munn", src])
        assert result.exit_code == 0
        out = json.loads(result.stdout)
        assert out["atoms"] == [0]
        assert out["fundamental"] is False
        assert out["fundamental_witness"] == [0, 1]
        assert [a["action"] for a in out["actions"]] == ["(1)", "(1)", "()"]

    def test_munn_rejects_non_inverse(self, runner: CliRunner, tmp_path: Path) -> None:
        src = _write(tmp_path, "t.json", _table_json([[1, 0], [0, 0]]))
        result = runner.invoke(main, ["munn", src])
        assert result.exit_code == 2
        assert "associativity" in result.stderr


class TestPautIso:
    @pytest.mark.parametrize(
        "first, second, code",
        [("Bw", "B?", 0), ("Bw", "Bg", 1), ("Bg", "BO", 0)],
    )
    def test_pairs(
        self, runner: CliRunner, tmp_path: Path, first: str, second: str, code: int
    ) -> None:
        a = _write(tmp_path, "a.g6", first + "\n")
        b = _write(tmp_path, "b.g6", second + "\n")
        result = runner.invoke(main, ["pautiso", a, b, "--validate"])
        assert result.exit_code == code
        assert json.loads(result.stdout) == {"isomorphic": code == 0}


class TestDecks:
    def test_deck(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["deck"], input="Bg\n")
        assert result.exit_code == 0
        out = json.loads(result.stdout)
        assert out["n"] == 3
        assert [c["vertex"] for c in out["cards"]] == [1, 2, 3]
        assert sorted(c["graph6"] for c in out["cards"]) == ["A?", "A_", "A_"]

    def test_deck_against(self, runner: CliRunner, tmp_path: Path) -> None:
        other = _write(tmp_path, "other.g6", "BO\n")
        result = runner.invoke(main, ["deck", "--against", other], input="Bg\n")
        assert result.exit_code == 1
        assert json.loads(result.stdout)["equal"] is False
        result = runner.invoke(
            main, ["deck", "--against", other, "--mode", "iso-or-complement"], input="Bg\n"
        )
        assert result.exit_code == 0
        assert json.loads(result.stdout)["equal"] is True

    def test_pautdeck(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["pautdeck", "--validate"], input="Cg\n")
        assert result.exit_code == 0, result.output
        entries = json.loads(result.stdout)["entries"]
        assert [e["vertex"] for e in entries] == [1, 2, 3, 4]
        assert entries[3]["size"] == 22
        assert entries[3]["height"] == 3

    def test_deckcex_generate(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["deckcex", "--generate", "4"])
        assert result.exit_code == 0
        records = [json.loads(line) for line in result.stdout.splitlines()]
        assert len(records) >= 2
        assert all(p < r["seq"] for r in records for p in r["witness"])

    def test_source_and_generate_conflict(self, runner: CliRunner, corpus20: Path) -> None:
        result = runner.invoke(main, ["deckcex", str(corpus20), "--generate", "4"])
        assert result.exit_code == 2

    def test_pseudosim_file(self, runner: CliRunner, corpus20: Path) -> None:
        result = runner.invoke(main, ["pseudosim", str(corpus20), "-j", "2"])
        assert result.exit_code == 0
        for line in result.stdout.splitlines():
            assert set(json.loads(line)) == {"seq", "graph6", "witness"}
        assert "[SEARCH] pseudosim over 20 graph(s) with 2 job(s)" in result.stderr


class TestSelftestAndConfig:
    def test_selftest(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["selftest", "--max-n", "2"])
        assert result.exit_code == 0
        out = json.loads(result.stdout)
        assert out["ok"] is True
        assert len(out["suites"]) == 6

    def test_selftest_out_of_range(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["selftest", "--max-n", "9"])
        assert result.exit_code == 2
        assert "Error:" in result.stderr

    def test_config_show_defaults(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["config"])
        assert result.exit_code == 0
        out = json.loads(result.stdout)
        assert out["jobs"] == 1
        assert out["graph_format"] == "graph6"

    def test_config_reads_file(self, runner: CliRunner, sample_config: Path) -> None:
        out = json.loads(runner.invoke(main, ["config"]).stdout)
        assert out["jobs"] == 2
        assert out["graph_format"] == "edgelist"

    def test_config_save(self, runner: CliRunner, isolated_config: Path) -> None:
        result = runner.invoke(main, ["config", "--save", "-j", "3", "--validate"])
        assert result.exit_code == 0
        assert "Saved config to" in result.stderr
        loaded = load_config(isolated_config)
        assert loaded.jobs == 3
        assert loaded.validate is True


@pytest.mark.parametrize(
    "args, stdin",
    [
        (["enumerate"], "Cg\n"),
        (["green"], "Cg\n"),
        (["pautdeck"], "Cg\n"),
        (["deckcex", "--generate", "4"], None),
        (["selftest", "--max-n", "2"], None),
    ],
)
def test_stdout_independent_of_jobs(runner: CliRunner, args: list, stdin: str) -> None:
    outputs = {runner.invoke(main, args + ["-j", jobs], input=stdin).stdout for jobs in "18"}
    assert len(outputs) == 1


def test_search_failure_exits_2(runner: CliRunner, mocker: MockerFixture) -> None:
    mocker.patch("pautkit.recon.search_corpus", side_effect=RuntimeError("worker died"))
    result = runner.invoke(main, ["deckcex", "--generate", "3"])
    assert result.exit_code == 2
    assert "Error: worker died" in result.stderr


class TestTextRendering:
    def test_build_pretty_is_edgelist(
        self, runner: CliRunner, tmp_path: Path, gamma0_paut: InverseSubmonoid
    ) -> None:
        src = _write(tmp_path, "m.json", monoid_to_json(gamma0_paut))
        result = runner.invoke(main, ["build", src, "--pretty"])
        assert result.exit_code == 0
        assert result.stdout == "4 1\n1 1 2\n1 2 3\n"

    def test_realize_pretty_is_edgelist(self, runner: CliRunner, tmp_path: Path) -> None:
        t = table_from_submonoid(enumerate_paut(Graph.from_edges(2, [(0, 1)])))
        src = _write(tmp_path, "t.json", table_to_json(t))
        result = runner.invoke(main, ["realize", src, "--pretty", "--format", "json"])
        assert result.exit_code == 0
        assert result.stdout == "2 1\n1 1 2\n"

    def test_realize_pretty_failure_lists_conditions(
        self, runner: CliRunner, tmp_path: Path
    ) -> None:
        t2 = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 2, 2, 2], [3, 3, 3, 3]]
        src = _write(tmp_path, "t.json", _table_json(t2))
        result = runner.invoke(main, ["realize", src, "--pretty"])
        assert result.exit_code == 1
        assert result.stdout.startswith("inverse: FAIL")

    def test_pautiso_pretty(self, runner: CliRunner, tmp_path: Path) -> None:
        a = _write(tmp_path, "a.g6", "Bg\n")
        b = _write(tmp_path, "b.g6", "BO\n")
        result = runner.invoke(main, ["pautiso", a, b, "--pretty"])
        assert result.exit_code == 0
        assert result.stdout == "isomorphic\n"

    def test_deck_pretty_with_validation(self, runner: CliRunner, tmp_path: Path) -> None:
        other = _write(tmp_path, "other.g6", "BO\n")
        args = ["deck", "--against", other, "--mode", "iso-or-complement", "--validate", "--pretty"]
        result = runner.invoke(main, args, input="Bg\n")
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert [line.split(":")[0] for line in lines[:3]] == ["1", "2", "3"]
        assert lines[3] == "equal (iso-or-complement)"

    def test_pautdeck_pretty(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["pautdeck", "--pretty"], input="Cg\n")
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert len(lines) == 4
        assert lines[3].startswith("4: ")
        assert lines[3].endswith("size 22 height 3")

    def test_pseudosim_pretty_with_validation(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["pseudosim", "--validate", "--pretty"], input="G?LRKo\n")
        assert result.exit_code == 0, result.output
        assert result.stdout.startswith("0\tG?LRKo\t")
        assert "{5,6}" in result.stdout

    def test_deckcex_pretty_with_validation(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["deckcex", "--generate", "4", "--validate", "--pretty"])
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert len(lines) >= 2
        assert all("#" in line.split("\t")[2] for line in lines)

    def test_selftest_pretty(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["selftest", "--max-n", "2", "--pretty"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert len(lines) == 6
        assert all(": ok (" in line for line in lines)


class TestLimits:
    def test_deck_limit(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["deck", "--limit", "2"], input="Bg\n")
        assert result.exit_code == 2
        assert "--limit 3" in result.stderr

    def test_pseudosim_limit(self, runner: CliRunner) -> None:
        result = runner.invoke(main, ["pseudosim", "--limit", "7"], input="G?LRKo\n")
        assert result.exit_code == 2
        assert "--limit 8" in result.stderr

    def test_munn_limit(
        self, runner: CliRunner, tmp_path: Path, gamma0_paut: InverseSubmonoid
    ) -> None:
        src = _write(tmp_path, "t.json", table_to_json(table_from_submonoid(gamma0_paut)))
        result = runner.invoke(main, ["munn", src, "--limit", "3"])
        assert result.exit_code == 2
        assert "4 atoms exceeds the limit of 3" in result.stderr

    def test_munn_validate(self, runner: CliRunner, tmp_path: Path) -> None:
        src = _write(tmp_path, "t.json", _table_json([[0, 1, 2], [1, 0, 2], [2, 2, 2]]))
        assert runner.invoke(main, ["munn", src, "--validate"]).exit_code == 0


def test_munn_trivial_monoid(runner: CliRunner, tmp_path: Path) -> None:
    src = _write(tmp_path, "t.json", _table_json([[0]]))
    result = runner.invoke(main, ["munn", src])
    assert result.exit_code == 0, result.output
    out = json.loads(result.stdout)
    assert out["atoms"] == []
    assert [a["action"] for a in out["actions"]] == ["()"]
    assert out["fundamental"] is True
