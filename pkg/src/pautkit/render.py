"""Human-readable summaries on stderr."""

from __future__ import annotations

from typing import TYPE_CHECKING, List, Sequence

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from pautkit.constants import CONDITION_DESCRIPTIONS
from pautkit.pperm import format_cpn

if TYPE_CHECKING:
    from pautkit.characterize import ConditionReport
    from pautkit.paut import InverseSubmonoid
    from pautkit.recon import Deck
    from pautkit.selftest import SuiteResult

console = Console(stderr=True)


def show_rank_counts(s: "InverseSubmonoid", title: str = "PAut by rank") -> None:
    table = Table(title=title, border_style="blue")
    table.add_column("Rank", justify="right", style="bold")
    table.add_column("Elements", justify="right")
    table.add_column("Idempotents", justify="right")
    counts = s.rank_counts()
    idem = [0] * (s.n + 1)
    for f in s.idempotents():
        idem[f.rank] += 1
    for r, count in enumerate(counts):
        table.add_row(str(r), str(count), str(idem[r]))
    table.add_row("total", f"[bold]{len(s)}[/bold]", str(sum(idem)))
    console.print(table)


def _witness_text(witness: object) -> str:
    if witness is None:
        return "-"
    if isinstance(witness, (list, tuple)):
        return ", ".join(_witness_text(w) for w in witness)
    if hasattr(witness, "img"):
        return format_cpn(witness)  # type: ignore[arg-type]
    return str(witness)


def show_report(report: "ConditionReport", title: str = "Conditions") -> None:
    table = Table(title=title, border_style="blue")
    table.add_column("Condition", style="bold")
    table.add_column("Meaning")
    table.add_column("Result")
    table.add_column("Witness")
    for v in report.verdicts:
        status = "[green]pass[/green]" if v.passed else "[red]FAIL[/red]"
        meaning = CONDITION_DESCRIPTIONS.get(v.name, "")
        table.add_row(v.name, meaning, status, escape(_witness_text(v.witness)))
    console.print(table)


def show_deck(deck: "Deck", card_codes: Sequence[str]) -> None:
    table = Table(title="Deck", border_style="blue")
    table.add_column("Deleted", justify="right", style="bold")
    table.add_column("Card (graph6)")
    table.add_column("Edges", justify="right")
    for entry, code in zip(deck.entries, card_codes):
        table.add_row(str(entry.vertex + 1), escape(code), str(len(entry.card.edges)))
    console.print(table)


def show_selftest(results: List["SuiteResult"]) -> None:
    table = Table(title="pautkit selftest", border_style="blue")
    table.add_column("Suite", style="bold")
    table.add_column("Checked", justify="right")
    table.add_column("Failures", justify="right")
    table.add_column("Status")
    table.add_column("First failure")
    for r in results:
        status = "[green]ok[/green]" if r.ok else "[red]FAIL[/red]"
        first = r.failures[0] if r.failures else ""
        table.add_row(r.name, str(r.checked), str(len(r.failures)), status, escape(first))
    console.print(table)
