"""Exhaustive small-case cross-checks behind ``pautkit selftest``."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

from pautkit.characterize import build_graph, check_condition_U, check_condition_U_definitional
from pautkit.graph6 import format_graph6, parse_graph6
from pautkit.graphs import (
    Graph,
    all_colored_digraphs,
    all_graphs,
    canonical_key,
    complement,
    induced,
)
from pautkit.green import green_structure
from pautkit.paut import (
    InverseSubmonoid,
    enumerate_paut,
    enumerate_paut_oracle,
    is_partial_automorphism,
    rank2_membership_reduction,
)
from pautkit.pool import ordered_map
from pautkit.pperm import all_partial_perms, format_cpn, identity, points_of

MAX_SELFTEST_N = 4


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> Dict[str, object]:
        return {"name": self.name, "checked": self.checked, "failures": self.failures}


def _graphs(max_n: int, low: int = 1) -> List[Graph]:
    return [g for n in range(low, max_n + 1) for g in all_graphs(n)]


def _code(g: Graph) -> str:
    return format_graph6(g).decode()


def suite_enumeration(max_n: int) -> SuiteResult:
    """Backtracking enumeration against the filter over all of I_X."""
    result = SuiteResult("enumeration")
    structures = list(_graphs(max_n)) + [
        d for n in range(1, min(max_n, 2) + 1) for d in all_colored_digraphs(n, 2)
    ]
    for g in structures:
        result.checked += 1
        if enumerate_paut(g).elements != enumerate_paut_oracle(g).elements:
            result.failures.append(f"enumeration differs on n={g.n} matrix {g.matrix}")
    return result


def suite_rank2_reduction(max_n: int) -> SuiteResult:
    result = SuiteResult("rank2_reduction")
    for g in _graphs(max_n):
        for f in all_partial_perms(g.n):
            result.checked += 1
            if is_partial_automorphism(g, f) != rank2_membership_reduction(g, f):
                result.failures.append(f"{_code(g)}: {format_cpn(f)}")
    return result


def suite_condition_u(max_n: int) -> SuiteResult:
    """Fast condition-U check against the compatible-subset definition."""
    result = SuiteResult("condition_U")
    small = min(max_n, 3)
    monoids = [enumerate_paut(g) for g in _graphs(small)]
    for n in range(1, small + 1):
        monoids.extend(InverseSubmonoid.generate(n, [f]) for f in all_partial_perms(n))
        low = [f for f in all_partial_perms(n) if f.rank <= 2] + [identity(n)]
        monoids.append(InverseSubmonoid(n, tuple(low)))
    for s in monoids:
        result.checked += 1
        if check_condition_U(s).passed != check_condition_U_definitional(s).passed:
            result.failures.append(f"condition U disagrees on a monoid of size {len(s)} on {s.n}")
    return result


def suite_complement(max_n: int) -> SuiteResult:
    result = SuiteResult("complement")
    for g in _graphs(max_n):
        result.checked += 1
        if enumerate_paut(g).elements != enumerate_paut(complement(g)).elements:
            result.failures.append(_code(g))
    return result


def suite_green(max_n: int) -> SuiteResult:
    """One idempotent per R- and L-class, and D-classes match induced subgraph classes."""
    result = SuiteResult("green")
    for g in _graphs(max_n):
        result.checked += 1
        s = enumerate_paut(g)
        st = green_structure(s)
        for cid, d in enumerate(st.dclasses):
            rows, cols = d.shape
            if rows != cols or len(d.idempotent_cells) != rows:
                result.failures.append(f"{_code(g)}: D-class {cid} is {rows}x{cols}")
        induced_classes = {
            canonical_key(induced(g, points_of(mask))) for mask in range(1 << g.n)
        }
        if len(induced_classes) != len(st.dclasses):
            result.failures.append(
                f"{_code(g)}: {len(st.dclasses)} D-classes, "
                f"{len(induced_classes)} induced subgraph classes"
            )
    return result


def suite_roundtrip(max_n: int) -> SuiteResult:
    """build_graph(PAut(g)) gives back g or its complement; graph6 survives a round trip."""
    result = SuiteResult("roundtrip")
    for g in _graphs(max_n, low=2):
        result.checked += 1
        built = build_graph(enumerate_paut(g))
        if built != g and built != complement(g):
            result.failures.append(f"{_code(g)} rebuilt as {_code(built)}")
        if parse_graph6(format_graph6(g)) != g:
            result.failures.append(f"{_code(g)} does not survive graph6")
    return result


SUITES: Tuple[Tuple[str, Callable[[int], SuiteResult]], ...] = (
    ("enumeration", suite_enumeration),
    ("rank2_reduction", suite_rank2_reduction),
    ("condition_U", suite_condition_u),
    ("complement", suite_complement),
    ("green", suite_green),
    ("roundtrip", suite_roundtrip),
)


def run_selftest(
    max_n: int = MAX_SELFTEST_N,
    only: Tuple[str, ...] = (),
    jobs: int = 1,
    verbose: bool = False,
) -> List[SuiteResult]:
    """Run the named suites (all by default) and return results in suite order."""
    if not 1 <= max_n <= MAX_SELFTEST_N:
        raise ValueError(f"Self-test size must be in 1..{MAX_SELFTEST_N}, got {max_n}")
    names = [name for name, _ in SUITES]
    for name in only:
        if name not in names:
            raise ValueError(f"Unknown suite {name!r}. Choose one of: {', '.join(names)}")
    chosen = [fn for name, fn in SUITES if not only or name in only]
    results = ordered_map(lambda fn: fn(max_n), chosen, jobs)
    if verbose:
        for r in results:
            tag = "[PASS]" if r.ok else "[FAIL]"
            _err(f"{tag} {r.name}: {r.checked} checked, {len(r.failures)} failure(s)")
    return results


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)
