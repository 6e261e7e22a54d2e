"""CLI entry point using click.

stdout carries JSON (or the --pretty text rendering); summaries go to
stderr. Exit 0 on success, 1 when valid input yields a negative verdict,
2 on input or usage errors.
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import click

from pautkit.constants import GRAPH_FORMATS

_ERRORS = (FileNotFoundError, ValueError, RuntimeError)


jobs_option = click.option(
    "--jobs", "-j", type=int, default=None, envvar="PAUTKIT_JOBS",
    help="Worker threads (default from config, else 1).",
)
limit_option = click.option(
    "--limit", type=int, default=None, envvar="PAUTKIT_LIMIT",
    help="Soft cap on vertex count.",
)
validate_option = click.option(
    "--validate", is_flag=True, envvar="PAUTKIT_VALIDATE",
    help="Run oracle cross-checks after each computation.",
)
pretty_option = click.option(
    "--pretty", is_flag=True, envvar="PAUTKIT_PRETTY",
    help="Print the text rendering instead of JSON.",
)


def common_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    """--jobs, --limit, --validate and --pretty, each with a PAUTKIT_* override.

    Every command that reads a graph, monoid or table takes all four.
    """
    for option in (pretty_option, validate_option, limit_option, jobs_option):
        fn = option(fn)
    return fn


def format_option(fn: Callable[..., Any]) -> Callable[..., Any]:
    return click.option(
        "--format", "fmt", type=click.Choice(list(GRAPH_FORMATS)), default=None,
        envvar="PAUTKIT_FORMAT", help="Graph format (default from config, else graph6).",
    )(fn)


def _settings(
    jobs: Optional[int] = None,
    limit: Optional[int] = None,
    validate: bool = False,
    pretty: bool = False,
    fmt: Optional[str] = None,
) -> Any:
    """Merge flags over the config file; flags and PAUTKIT_* variables win."""
    from pautkit.config import ToolkitConfig, load_config

    config = load_config()
    return ToolkitConfig(
        version=config.version,
        jobs=jobs if jobs is not None else config.jobs,
        limit=limit if limit is not None else config.limit,
        validate=validate or config.validate,
        pretty=pretty or config.pretty,
        graph_format=fmt or config.graph_format,
    )


def _read_text(source: str) -> str:
    if source == "-":
        return click.get_text_stream("stdin").read()
    return Path(source).read_text()


def _load_structure(source: str, fmt: str, digraph: bool = False) -> Any:
    from pautkit.dumps import load_json, structure_from_json
    from pautkit.graph6 import parse_edgelist, read_graph6_lines
    from pautkit.graphs import ColoredDigraph, Graph

    text = _read_text(source)
    if fmt == "graph6":
        if digraph:
            raise ValueError("graph6 holds undirected graphs only; use --format edgelist or json")
        for _, _, g in read_graph6_lines(text.splitlines()):
            return g
        raise ValueError(f"No graph6 line in {source}")
    if fmt == "edgelist":
        return parse_edgelist(text, directed=digraph)
    g = structure_from_json(load_json(text))
    if digraph and isinstance(g, Graph):
        g = ColoredDigraph.from_graph(g)
    return g


def _load_graph(source: str, fmt: str) -> Any:
    from pautkit.graphs import Graph

    g = _load_structure(source, fmt)
    if not isinstance(g, Graph):
        raise ValueError(f"{source} holds a colored digraph; this command needs a graph")
    return g


def _emit_structure(g: Any, fmt: str, pretty: bool = False) -> None:
    """graph6, JSON or edge-list text; --pretty always gives the edge list."""
    from pautkit.dumps import dump_json, structure_to_json
    from pautkit.graph6 import format_edgelist, format_graph6
    from pautkit.graphs import Graph

    if pretty:
        click.echo(format_edgelist(g), nl=False)
    elif fmt == "graph6" and isinstance(g, Graph):
        click.echo(format_graph6(g).decode())
    elif fmt == "json":
        click.echo(dump_json(structure_to_json(g)))
    else:
        click.echo(format_edgelist(g), nl=False)


def _echo_report(out: Dict[str, Any], pretty: bool) -> None:
    from pautkit.dumps import dump_json

    if not pretty:
        click.echo(dump_json(out))
        return
    for name, v in out["conditions"].items():
        status = "pass" if v["passed"] else "FAIL"
        witness = f"  witness {v['witness']}" if v["witness"] is not None else ""
        click.echo(f"{name}: {status}{witness}")


def _fail(exc: BaseException) -> None:
    click.echo(f"Error: {exc}", err=True)
    sys.exit(2)


@click.group()
@click.version_option(package_name="pautkit")
def main() -> None:
    """pautkit: partial automorphism monoids of finite graphs."""


@main.command(name="enumerate")
@click.argument("source", default="-")
@format_option
@click.option("--digraph", is_flag=True, help="Read an edge-colored digraph.")
@common_options
def enumerate_cmd(
    source: str,
    fmt: Optional[str],
    digraph: bool,
    jobs: Optional[int],
    limit: Optional[int],
    validate: bool,
    pretty: bool,
) -> None:
    """Enumerate PAut of a graph and print the monoid dump."""
    from pautkit.dumps import dump_json, monoid_to_json
    from pautkit.paut import enumerate_paut
    from pautkit.pperm import format_cpn
    from pautkit.render import show_rank_counts

    try:
        cfg = _settings(jobs, limit, validate, pretty, fmt)
        g = _load_structure(source, cfg.graph_format, digraph)
        s = enumerate_paut(g, limit=cfg.limit, jobs=cfg.jobs, verbose=True, validate=cfg.validate)
    except _ERRORS as exc:
        _fail(exc)
        return

    show_rank_counts(s)
    if cfg.pretty:
        for f in s:
            click.echo(format_cpn(f))
    else:
        out = monoid_to_json(s)
        out["rank_counts"] = s.rank_counts()
        click.echo(dump_json(out))


@main.command()
@click.argument("source", default="-")
@click.option(
    "--from", "kind", type=click.Choice(["graph", "monoid", "table"]), default="graph",
    help="What SOURCE holds.",
)
@format_option
@click.option("--digraph", is_flag=True, help="Read an edge-colored digraph.")
@common_options
def green(
    source: str,
    kind: str,
    fmt: Optional[str],
    digraph: bool,
    jobs: Optional[int],
    limit: Optional[int],
    validate: bool,
    pretty: bool,
) -> None:
    """Green's relations as eggbox JSON, or text grids with --pretty."""
    from pautkit.abstract import green_abs
    from pautkit.dumps import (
        dump_json,
        eggbox_to_json,
        load_json,
        monoid_from_json,
        table_from_json,
    )
    from pautkit.graph6 import format_graph6
    from pautkit.graphs import Graph
    from pautkit.green import dclass_subgraph_correspondence, green_structure, render_eggbox
    from pautkit.paut import enumerate_paut

    try:
        cfg = _settings(jobs, limit, validate, pretty, fmt)
        labels = None
        if kind == "table":
            t = table_from_json(load_json(_read_text(source)))
            st = green_abs(t)
            names = [t.name(a) for a in range(t.m)]
            text = render_eggbox(None, st, names)
            out = eggbox_to_json(st, concrete=False)
        else:
            if kind == "graph":
                g = _load_structure(source, cfg.graph_format, digraph)
                s = enumerate_paut(g, limit=cfg.limit, jobs=cfg.jobs, validate=cfg.validate)
            else:
                s = monoid_from_json(load_json(_read_text(source)), validate=cfg.validate)
            st = green_structure(s, validate=cfg.validate)
            if kind == "graph" and isinstance(g, Graph):
                labels = {
                    cid: format_graph6(h).decode()
                    for cid, h in dclass_subgraph_correspondence(g, s, st).items()
                }
            text = render_eggbox(s, st)
            out = eggbox_to_json(st, concrete=True, labels=labels)
    except _ERRORS as exc:
        _fail(exc)
        return

    click.echo(f"[GREEN] {len(st.dclasses)} D-classes", err=True)
    if cfg.pretty:
        click.echo(text, nl=False)
    else:
        click.echo(dump_json(out))


@main.command()
@click.argument("source", default="-")
@click.option("--digraph", is_flag=True, help="Check the edge-colored digraph conditions.")
@common_options
def check(
    source: str,
    digraph: bool,
    jobs: Optional[int],
    limit: Optional[int],
    validate: bool,
    pretty: bool,
) -> None:
    """Check a monoid dump against the graph (or digraph) conditions. Exit 1 if any fail."""
    from pautkit.characterize import check_digraph_conditions, check_graph_conditions
    from pautkit.dumps import load_json, monoid_from_json, report_to_json
    from pautkit.render import show_report

    try:
        cfg = _settings(jobs, limit, validate, pretty)
        s = monoid_from_json(load_json(_read_text(source)), validate=cfg.validate)
        if digraph:
            report = check_digraph_conditions(s, cfg.limit)
        else:
            report = check_graph_conditions(s, cfg.limit)
    except _ERRORS as exc:
        _fail(exc)
        return

    show_report(report)
    _echo_report(report_to_json(report), cfg.pretty)
    if not report.passed:
        sys.exit(1)


@main.command()
@click.argument("source", default="-")
@format_option
@click.option("--digraph", is_flag=True, help="Build an edge-colored digraph.")
@common_options
def build(
    source: str,
    fmt: Optional[str],
    digraph: bool,
    jobs: Optional[int],
    limit: Optional[int],
    validate: bool,
    pretty: bool,
) -> None:
    """Build the graph whose PAut is the monoid dump. Exit 1 with a report if impossible."""
    from pautkit.characterize import ConditionsNotMet, build_colored_digraph, build_graph
    from pautkit.dumps import load_json, monoid_from_json, report_to_json
    from pautkit.render import show_report

    try:
        cfg = _settings(jobs, limit, validate, pretty, fmt)
        s = monoid_from_json(load_json(_read_text(source)), validate=cfg.validate)
        if digraph:
            g = build_colored_digraph(s, cfg.limit, cfg.validate)
        else:
            g = build_graph(s, cfg.limit, cfg.validate)
    except ConditionsNotMet as exc:
        click.echo(f"[BUILD] {exc}", err=True)
        show_report(exc.report)
        _echo_report(report_to_json(exc.report), cfg.pretty)
        sys.exit(1)
    except _ERRORS as exc:
        _fail(exc)
        return

    click.echo(f"[BUILD] {g.n} vertices", err=True)
    _emit_structure(g, cfg.graph_format, cfg.pretty)


@main.command()
@click.argument("source", default="-")
@format_option
@common_options
def realize(
    source: str,
    fmt: Optional[str],
    jobs: Optional[int],
    limit: Optional[int],
    validate: bool,
    pretty: bool,
) -> None:
    """Realize a multiplication table as PAut of a graph or colored digraph."""
    from pautkit.characterize import realize_abstract
    from pautkit.dumps import dump_json, load_json, report_to_json, table_from_json
    from pautkit.render import show_report

    try:
        cfg = _settings(jobs, limit, validate, pretty, fmt)
        t = table_from_json(load_json(_read_text(source)))
        result = realize_abstract(t, cfg.limit, cfg.validate, verbose=True)
    except _ERRORS as exc:
        _fail(exc)
        return

    show_report(result.report, title=f"Realization: {result.theorem}")
    if result.structure is None:
        _echo_report(report_to_json(result.report, result), cfg.pretty)
        sys.exit(1)
    if cfg.graph_format == "json" and not cfg.pretty:
        click.echo(dump_json(report_to_json(result.report, result)))
    else:
        _emit_structure(result.structure, cfg.graph_format, cfg.pretty)


@main.command()
@click.argument("source", default="-")
@common_options
def munn(
    source: str,
    jobs: Optional[int],
    limit: Optional[int],
    validate: bool,
    pretty: bool,
) -> None:
    """Restricted Munn representation: each element's action on the atoms.

    --limit caps the number of atoms; --validate checks the action is a homomorphism.
    """
    from itertools import product

    from pautkit.abstract import (
        fundamental_witness,
        idempotent_lattice,
        restricted_munn,
    )
    from pautkit.abstract import validate as check_table
    from pautkit.dumps import dump_json, load_json, table_from_json
    from pautkit.paut import LimitExceeded, OracleMismatch
    from pautkit.pperm import compose, format_cpn

    try:
        cfg = _settings(jobs, limit, validate, pretty)
        t = table_from_json(load_json(_read_text(source)))
        vr = check_table(t, jobs=cfg.jobs)
        if not vr.ok:
            raise ValueError(f"Not an inverse monoid: {vr.axiom} fails at {list(vr.witness)}")
        atoms = idempotent_lattice(t).atoms
        if len(atoms) > cfg.limit:
            raise LimitExceeded(
                f"{len(atoms)} atoms exceeds the limit of {cfg.limit}; "
                f"raise it with --limit {len(atoms)}"
            )
        images = restricted_munn(t)
        if cfg.validate and images:
            for a, b in product(range(t.m), repeat=2):
                if images[int(t.table[a, b])] != compose(images[a], images[b]):
                    raise OracleMismatch(f"Munn action is not multiplicative at ({a}, {b})")
        pair = fundamental_witness(t)
    except _ERRORS as exc:
        _fail(exc)
        return

    # The trivial monoid acts on no atoms
    actions = [format_cpn(f) for f in images] or ["()"] * t.m
    if cfg.pretty:
        for a, action in enumerate(actions):
            click.echo(f"{t.name(a)}: {action}")
        return
    click.echo(
        dump_json(
            {
                "atoms": [int(a) for a in atoms],
                "actions": [
                    {"element": a, "name": t.name(a), "action": action}
                    for a, action in enumerate(actions)
                ],
                "fundamental": pair is None,
                "fundamental_witness": list(pair) if pair is not None else None,
            }
        )
    )


@main.command()
@click.argument("first")
@click.argument("second")
@format_option
@common_options
def pautiso(
    first: str,
    second: str,
    fmt: Optional[str],
    jobs: Optional[int],
    limit: Optional[int],
    validate: bool,
    pretty: bool,
) -> None:
    """Decide whether PAut(FIRST) and PAut(SECOND) are isomorphic. Exit 1 if not."""
    from pautkit.abstract import find_table_isomorphism, table_from_submonoid
    from pautkit.characterize import paut_isomorphic
    from pautkit.dumps import dump_json
    from pautkit.paut import OracleMismatch, enumerate_paut

    try:
        cfg = _settings(jobs, limit, validate, pretty, fmt)
        g1 = _load_graph(first, cfg.graph_format)
        g2 = _load_graph(second, cfg.graph_format)
        answer = paut_isomorphic(g1, g2)
        if cfg.validate and g1.n == g2.n and g1.n <= 3:
            tables = [table_from_submonoid(enumerate_paut(g, limit=cfg.limit)) for g in (g1, g2)]
            oracle = tables[0].m == tables[1].m and find_table_isomorphism(*tables) is not None
            if oracle != answer:
                raise OracleMismatch("Graph-level answer disagrees with table isomorphism")
    except _ERRORS as exc:
        _fail(exc)
        return

    if cfg.pretty:
        click.echo("isomorphic" if answer else "not isomorphic")
    else:
        click.echo(dump_json({"isomorphic": answer}))
    if not answer:
        sys.exit(1)


@main.command()
@click.argument("source", default="-")
@click.option("--against", default=None, help="Compare with the deck of this graph.")
@click.option(
    "--mode", type=click.Choice(["iso", "iso-or-complement"]), default="iso",
    help="Card equivalence used with --against.",
)
@format_option
@common_options
def deck(
    source: str,
    against: Optional[str],
    mode: str,
    fmt: Optional[str],
    jobs: Optional[int],
    limit: Optional[int],
    validate: bool,
    pretty: bool,
) -> None:
    """Vertex-deleted subgraphs of a graph; with --against, compare two decks."""
    from pautkit.dumps import dump_json
    from pautkit.graph6 import format_graph6
    from pautkit.paut import OracleMismatch, check_limit
    from pautkit.recon import deck as build_deck
    from pautkit.recon import deck_equal, deck_equal_by_matching
    from pautkit.render import show_deck

    try:
        cfg = _settings(jobs, limit, validate, pretty, fmt)
        g = _load_graph(source, cfg.graph_format)
        d = build_deck(g, cfg.limit)
        equal = None
        if against is not None:
            other = _load_graph(against, cfg.graph_format)
            if other.n:
                check_limit(other, cfg.limit)
            equal = deck_equal(g, other, mode)
            if cfg.validate and deck_equal_by_matching(g, other, mode) != equal:
                raise OracleMismatch("Card keys disagree with direct card matching")
    except _ERRORS as exc:
        _fail(exc)
        return

    codes = [format_graph6(e.card).decode() for e in d.entries]
    show_deck(d, codes)
    if cfg.pretty:
        for e, c in zip(d.entries, codes):
            click.echo(f"{e.vertex + 1}: {c}")
        if equal is not None:
            click.echo(f"{'equal' if equal else 'different'} ({mode})")
        if equal is False:
            sys.exit(1)
        return
    cards = [{"vertex": e.vertex + 1, "graph6": c} for e, c in zip(d.entries, codes)]
    out: Dict[str, Any] = {"n": d.n, "cards": cards}
    if equal is not None:
        out["equal"] = equal
        out["mode"] = mode
    click.echo(dump_json(out))
    if equal is False:
        sys.exit(1)


@main.command()
@click.argument("source", default="-")
@format_option
@common_options
def pautdeck(
    source: str,
    fmt: Optional[str],
    jobs: Optional[int],
    limit: Optional[int],
    validate: bool,
    pretty: bool,
) -> None:
    """Deck of PAut: the members of PAut avoiding each vertex."""
    from pautkit.dumps import dump_json, monoid_to_json
    from pautkit.graph6 import format_graph6
    from pautkit.green import green_structure
    from pautkit.paut import enumerate_paut
    from pautkit.recon import paut_deck

    try:
        cfg = _settings(jobs, limit, validate, pretty, fmt)
        g = _load_graph(source, cfg.graph_format)
        s = enumerate_paut(g, limit=cfg.limit, jobs=cfg.jobs, verbose=True)
        pd = paut_deck(g, s, cfg.limit, cfg.validate)
        entries = []
        for e in pd.entries:
            st = green_structure(e.monoid)
            entries.append(
                {
                    "vertex": e.vertex + 1,
                    "card": format_graph6(e.card).decode(),
                    "size": len(e.monoid),
                    "height": max(st.heights) if st.heights else 0,
                    "monoid": monoid_to_json(e.monoid),
                }
            )
    except _ERRORS as exc:
        _fail(exc)
        return

    if cfg.pretty:
        for entry in entries:
            click.echo(
                f"{entry['vertex']}: {entry['card']} size {entry['size']} height {entry['height']}"
            )
        return
    click.echo(dump_json({"n": pd.n, "entries": entries}))


def _corpus(source: Optional[str], generate: Optional[int]) -> Any:
    from pautkit.recon import generated_corpus

    if generate is not None:
        if source is not None:
            raise click.UsageError("Give either SOURCE or --generate, not both")
        return list(generated_corpus(generate))
    return _read_text(source or "-").splitlines()


def _witness_text(item: Any) -> str:
    if isinstance(item, list):
        return "{" + ",".join(str(v) for v in item) + "}"
    return f"#{item}"


def _run_search(
    source: Optional[str],
    generate: Optional[int],
    predicate: str,
    k: int,
    jobs: Optional[int],
    limit: Optional[int],
    validate: bool,
    pretty: bool,
) -> None:
    from pautkit.dumps import dump_json
    from pautkit.recon import search_corpus

    try:
        cfg = _settings(jobs, limit, validate, pretty)
        records = search_corpus(
            _corpus(source, generate),
            predicate,
            cfg.jobs,
            k,
            verbose=True,
            limit=cfg.limit,
            validate=cfg.validate,
        )
    except _ERRORS as exc:
        _fail(exc)
        return
    for record in records:
        if cfg.pretty:
            witness = " ".join(_witness_text(item) for item in record["witness"])
            click.echo(f"{record['seq']}\t{record['graph6']}\t{witness}")
        else:
            click.echo(dump_json(record))


@main.command()
@click.argument("source", required=False)
@click.option("--generate", type=int, default=None, help="Search every graph class on N vertices.")
@click.option("-k", "k", type=int, default=2, show_default=True, help="Size of vertex sets.")
@common_options
def pseudosim(
    source: Optional[str],
    generate: Optional[int],
    k: int,
    jobs: Optional[int],
    limit: Optional[int],
    validate: bool,
    pretty: bool,
) -> None:
    """Report graphs with pseudo-similar vertices as JSON lines."""
    predicate = "pseudosim" if k == 2 else "mutual"
    _run_search(source, generate, predicate, k, jobs, limit, validate, pretty)


@main.command()
@click.argument("source", required=False)
@click.option("--generate", type=int, default=None, help="Search every graph class on N vertices.")
@common_options
def deckcex(
    source: Optional[str],
    generate: Optional[int],
    jobs: Optional[int],
    limit: Optional[int],
    validate: bool,
    pretty: bool,
) -> None:
    """Report graphs whose PAut deck matches an earlier graph with a different PAut."""
    _run_search(source, generate, "deckcex", 2, jobs, limit, validate, pretty)


@main.command()
@click.option("--max-n", type=int, default=4, show_default=True, help="Largest vertex count.")
@click.option("--suite", multiple=True, help="Run only this suite. Can be repeated.")
@jobs_option
@pretty_option
def selftest(max_n: int, suite: tuple, jobs: Optional[int], pretty: bool) -> None:
    """Exhaustive small-case oracle suites. Exit 1 on any failure.

    Reads no input, so --limit and --validate do not apply.
    """
    from pautkit.dumps import dump_json
    from pautkit.render import show_selftest
    from pautkit.selftest import run_selftest

    try:
        cfg = _settings(jobs, pretty=pretty)
        results = run_selftest(max_n, tuple(suite), cfg.jobs, verbose=True)
    except _ERRORS as exc:
        _fail(exc)
        return

    show_selftest(results)
    ok = all(r.ok for r in results)
    if cfg.pretty:
        for r in results:
            click.echo(f"{r.name}: {'ok' if r.ok else 'FAIL'} ({r.checked} checked)")
            for failure in r.failures:
                click.echo(f"  {failure}")
    else:
        click.echo(dump_json({"ok": ok, "suites": [r.to_json() for r in results]}))
    if not ok:
        sys.exit(1)


@main.command(name="config")
@click.option("--save", is_flag=True, help="Write the merged settings to the config file.")
@format_option
@common_options
def config_cmd(
    save: bool,
    fmt: Optional[str],
    jobs: Optional[int],
    limit: Optional[int],
    validate: bool,
    pretty: bool,
) -> None:
    """Show the effective settings; --save stores them."""
    from dataclasses import asdict

    from pautkit.config import save_config
    from pautkit.dumps import dump_json

    try:
        cfg = _settings(jobs, limit, validate, pretty, fmt)
        if save:
            path = save_config(cfg)
            click.echo(f"Saved config to {path}", err=True)
    except (OSError, ValueError) as exc:
        _fail(exc)
        return

    click.echo(dump_json(asdict(cfg)))
