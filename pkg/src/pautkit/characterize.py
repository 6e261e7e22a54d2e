"""Decide whether a monoid is (isomorphic to) the PAut of a graph or digraph, and build it.

Concrete checks take an InverseSubmonoid; realize_abstract starts from a
multiplication table, embeds it through the restricted Munn representation
and hands the image to the concrete checks.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, Iterator, List, Optional, Set, Tuple

from pautkit import abstract
from pautkit.abstract import MulTable
from pautkit.constants import (
    BOOLEAN,
    CONDITION_U,
    DEFAULT_LIMIT,
    FULL,
    FUNDAMENTAL,
    HEIGHT2_DCLASSES,
    HEIGHT2_HCLASSES,
    INVERSE,
    RANK2_DCLASSES,
    RANK2_HCLASSES,
    UNDEFINED,
    ZERO_MINIMAL_JOINS,
)
from pautkit.graphs import (
    ColoredDigraph,
    Graph,
    Structure,
    complement,
    is_isomorphic,
)
from pautkit.green import GreenStructure, green_structure
from pautkit.paut import InverseSubmonoid, LimitExceeded, OracleMismatch, enumerate_paut
from pautkit.pperm import (
    PartialPerm,
    identity_mask,
    join_all,
    points_of,
    witness_key,
)


_BLOCKING = (INVERSE, BOOLEAN, FUNDAMENTAL, ZERO_MINIMAL_JOINS)


class ConditionsNotMet(ValueError):
    """A construction was refused; ``report`` says which conditions failed."""

    def __init__(self, message: str, report: "ConditionReport") -> None:
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    witness: Any = None
    detail: str = ""


@dataclass
class ConditionReport:
    """Verdicts in check order."""

    verdicts: List[Verdict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def failed(self) -> List[Verdict]:
        return [v for v in self.verdicts if not v.passed]

    def get(self, name: str) -> Optional[Verdict]:
        for v in self.verdicts:
            if v.name == name:
                return v
        return None

    def add(self, verdict: Verdict) -> None:
        self.verdicts.append(verdict)

    def extend(self, other: "ConditionReport") -> None:
        self.verdicts.extend(other.verdicts)


@dataclass
class Realization:
    """Outcome of realize_abstract: which theorem applied and the structure built."""

    theorem: str  # "graph", "digraph" or "none"
    report: ConditionReport
    structure: Optional[Structure] = None
    embedding: List[PartialPerm] = field(default_factory=list)


# --- conditions on concrete monoids ---------------------------------------


def _check_limit(s: InverseSubmonoid, limit: int) -> None:
    if s.n > limit:
        raise LimitExceeded(
            f"{s.n} points exceeds the limit of {limit}; raise it with --limit {s.n}"
        )


def check_full(s: InverseSubmonoid) -> Verdict:
    """Every partial identity is a member; the witness is the first one missing."""
    masks = sorted(range(1 << s.n), key=lambda mask: (bin(mask).count("1"), mask))
    for mask in masks:
        e = identity_mask(s.n, mask)
        if e not in s:
            return Verdict(FULL, False, e, f"partial identity on {_label(mask)} is missing")
    return Verdict(FULL, True)


def _label(mask: int) -> str:
    return "{" + ",".join(str(x + 1) for x in points_of(mask)) + "}"


def _candidates_by_rank(s: InverseSubmonoid) -> Iterator[Tuple[int, List[Tuple[int, ...]]]]:
    """Rank r >= 3 maps all of whose rank-2 restrictions lie in s.

    Level r is grown from level r - 1 by adding a pair above the largest
    domain point, then kept only if every rank r - 1 restriction is on level
    r - 1.
    """
    n = s.n
    level: Set[Tuple[int, ...]] = {f.img for f in s if f.rank == 2}
    for r in range(3, n + 1):
        grown: Set[Tuple[int, ...]] = set()
        for img in level:
            top = max(x for x, y in enumerate(img) if y != UNDEFINED)
            used = {y for y in img if y != UNDEFINED}
            for x in range(top + 1, n):
                for y in range(n):
                    if y in used:
                        continue
                    cand = list(img)
                    cand[x] = y
                    if _restrictions_present(cand, x, level):
                        grown.add(tuple(cand))
        level = grown
        if not level:
            return
        yield r, sorted(level)


def _restrictions_present(img: List[int], added: int, level: Set[Tuple[int, ...]]) -> bool:
    for z, y in enumerate(img):
        if y == UNDEFINED or z == added:
            continue
        img[z] = UNDEFINED
        present = tuple(img) in level
        img[z] = y
        if not present:
            return False
    return True


def check_condition_U(s: InverseSubmonoid, limit: int = DEFAULT_LIMIT) -> Verdict:
    """Every map of rank >= 3 whose rank-2 restrictions are members is a member.

    Ranks are scanned upwards and the scan stops at the first rank with a
    violation; the witness is least in (rank, domain, moved points, images).
    """
    _check_limit(s, limit)
    for r, level in _candidates_by_rank(s):
        maps = [PartialPerm._trusted(s.n, img) for img in level]
        missing = [f for f in maps if f not in s]
        if missing:
            w = min(missing, key=witness_key)
            return Verdict(
                CONDITION_U,
                False,
                w,
                f"{w} has all rank-2 restrictions in the monoid but is not a member",
            )
    return Verdict(CONDITION_U, True)


def check_condition_U_definitional(s: InverseSubmonoid) -> Verdict:
    """Condition U from its definition: joins of compatible sets of rank-1 members.

    Rank-1 members are the vertices of a graph where two are adjacent when
    their join exists and is a member. Every clique of size >= 3 must have
    its join in the monoid.
    """
    singles = s.of_rank(1)
    adjacent: Dict[int, Set[int]] = {i: set() for i in range(len(singles))}
    for i, j in combinations(range(len(singles)), 2):
        joined = join_all([singles[i], singles[j]])
        if joined is not None and joined.rank == 2 and joined in s:
            adjacent[i].add(j)
            adjacent[j].add(i)

    failures: List[PartialPerm] = []

    def grow(clique: List[int], pool: List[int]) -> None:
        if len(clique) >= 3:
            joined = join_all([singles[i] for i in clique])
            if joined is not None and joined not in s:
                failures.append(joined)
        for pos, v in enumerate(pool):
            grow(clique + [v], [w for w in pool[pos + 1 :] if w in adjacent[v]])

    grow([], list(range(len(singles))))
    if failures:
        w = min(failures, key=witness_key)
        return Verdict(CONDITION_U, False, w, f"join {w} of a compatible rank-1 set is missing")
    return Verdict(CONDITION_U, True)


def _rank2_classes(structure: GreenStructure) -> List[int]:
    return [
        cid
        for cid, d in enumerate(structure.dclasses)
        if d.lkeys and bin(d.lkeys[0]).count("1") == 2
    ]


def check_graph_conditions(
    s: InverseSubmonoid,
    limit: int = DEFAULT_LIMIT,
    structure: Optional[GreenStructure] = None,
) -> ConditionReport:
    """The four conditions for s to be PAut of a graph."""
    report = ConditionReport()
    report.add(check_full(s))
    report.add(check_condition_U(s, limit))

    if s.n < 2:
        note = "trivial case, theorem hypothesis not met"
        report.add(Verdict(RANK2_DCLASSES, True, None, note))
        report.add(Verdict(RANK2_HCLASSES, True, None, note))
        return report

    st = structure or green_structure(s)
    rank2 = _rank2_classes(st)
    reps = [identity_mask(s.n, st.dclasses[cid].lkeys[0]) for cid in rank2]
    if 1 <= len(rank2) <= 2:
        report.add(Verdict(RANK2_DCLASSES, True, None, f"{len(rank2)} rank-2 D-class(es)"))
    else:
        report.add(
            Verdict(RANK2_DCLASSES, False, reps, f"{len(rank2)} rank-2 D-classes, expected 1 or 2")
        )

    trivial = [
        identity_mask(s.n, st.dclasses[cid].lkeys[0])
        for cid in rank2
        if st.dclasses[cid].hclass_size < 2
    ]
    if trivial:
        w = trivial[0]
        report.add(Verdict(RANK2_HCLASSES, False, w, f"H-class of {w} has one element"))
    else:
        report.add(Verdict(RANK2_HCLASSES, True))
    return report


def check_digraph_conditions(s: InverseSubmonoid, limit: int = DEFAULT_LIMIT) -> ConditionReport:
    """The two conditions for s to be PAut of an edge-colored digraph."""
    report = ConditionReport()
    report.add(check_full(s))
    report.add(check_condition_U(s, limit))
    return report


def _refuse(kind: str, report: ConditionReport) -> ConditionsNotMet:
    names = ", ".join(v.name for v in report.failed())
    return ConditionsNotMet(f"Cannot build a {kind}: failed {names}", report)


def _check_roundtrip(g: Structure, s: InverseSubmonoid, limit: int) -> None:
    rebuilt = enumerate_paut(g, limit=limit)
    if rebuilt.elements != s.elements:
        raise OracleMismatch("PAut of the constructed structure differs from the input monoid")


def build_graph(
    s: InverseSubmonoid,
    limit: int = DEFAULT_LIMIT,
    validate: bool = False,
    report: Optional[ConditionReport] = None,
) -> Graph:
    """Graph whose PAut is s. D_e is the rank-2 class holding the smallest rank-2 idempotent."""
    st = green_structure(s)
    rep = report or check_graph_conditions(s, limit, st)
    if not rep.passed:
        raise _refuse("graph", rep)
    if s.n < 2:
        return Graph.from_edges(s.n, [])

    rank2 = _rank2_classes(st)
    edge_class = min(rank2, key=lambda cid: st.dclasses[cid].lkeys[0])
    edges = [tuple(points_of(key)) for key in st.dclasses[edge_class].lkeys]
    g = Graph.from_edges(s.n, edges)  # type: ignore[arg-type]
    if validate:
        _check_roundtrip(g, s, limit)
    return g


def build_colored_digraph(
    s: InverseSubmonoid,
    limit: int = DEFAULT_LIMIT,
    validate: bool = False,
    report: Optional[ConditionReport] = None,
) -> ColoredDigraph:
    """Edge-colored digraph whose PAut is s.

    One loop color per rank-1 D-class, then one color per rank-2 D-class:
    with representative {v1 < v2}, the arc (u1, u2) gets the color when the
    map v1 -> u1, v2 -> u2 is a member.
    """
    rep = report or check_digraph_conditions(s, limit)
    if not rep.passed:
        raise _refuse("colored digraph", rep)
    st = green_structure(s)
    colors: List[List[Tuple[int, int]]] = []
    for d in st.dclasses:
        if d.lkeys and bin(d.lkeys[0]).count("1") == 1:
            colors.append([(points_of(key)[0], points_of(key)[0]) for key in d.lkeys])
    for d in st.dclasses:
        if not d.lkeys or bin(d.lkeys[0]).count("1") != 2:
            continue
        rep_key = d.lkeys[0]
        v1, v2 = points_of(rep_key)
        arcs = [(f.img[v1], f.img[v2]) for f in s if f.dom == rep_key]
        colors.append(sorted(arcs))
    g = ColoredDigraph.from_colors(s.n, colors)
    if validate:
        _check_roundtrip(g, s, limit)
    return g


# --- abstract tables ------------------------------------------------------


def zero_minimal_join_condition(t: MulTable) -> Verdict:
    """Every compatible set of 0-minimal elements with pairwise joins has a join."""
    lat = abstract.idempotent_lattice(t)
    if lat.zero is None:
        return Verdict(ZERO_MINIMAL_JOINS, False, None, "no zero element")
    atoms = set(lat.atoms)
    T = t.table
    inv = [abstract.inverse_of(t, a) for a in range(t.m)]
    minimal = [a for a in range(t.m) if int(T[inv[a], a]) in atoms]

    adjacent: Dict[int, Set[int]] = {a: set() for a in minimal}
    for a, b in combinations(minimal, 2):
        if abstract.compatible_abs(t, a, b) and abstract.join_abs(t, a, b) is not None:
            adjacent[a].add(b)
            adjacent[b].add(a)

    found: List[Tuple[int, ...]] = []

    def grow(clique: List[int], pool: List[int]) -> None:
        if found:
            return
        if len(clique) >= 3 and abstract.join_set_abs(t, clique) is None:
            found.append(tuple(clique))
            return
        for pos, v in enumerate(pool):
            grow(clique + [v], [w for w in pool[pos + 1 :] if w in adjacent[v]])

    grow([], minimal)
    if found:
        clique = found[0]
        return Verdict(ZERO_MINIMAL_JOINS, False, clique, f"elements {list(clique)} have no join")
    return Verdict(ZERO_MINIMAL_JOINS, True)


def check_abstract_conditions(t: MulTable) -> ConditionReport:
    """Table-level conditions: inverse, Boolean, fundamental, 0-minimal joins, height 2."""
    report = ConditionReport()
    vr = abstract.validate(t)
    if not vr.ok:
        report.add(Verdict(INVERSE, False, vr.witness, vr.detail))
        return report
    report.add(Verdict(INVERSE, True))

    report.add(Verdict(BOOLEAN, abstract.is_boolean(t)))
    pair = abstract.fundamental_witness(t)
    if pair is None:
        report.add(Verdict(FUNDAMENTAL, True))
    else:
        report.add(
            Verdict(FUNDAMENTAL, False, pair, f"not fundamental: delta_{pair[0]} = delta_{pair[1]}")
        )
    report.add(zero_minimal_join_condition(t))

    st = abstract.green_abs(t)
    h2 = [cid for cid, h in enumerate(st.heights) if h == 2]
    if t.m > 1 and len(abstract.idempotent_lattice(t).atoms) >= 2:
        if 1 <= len(h2) <= 2:
            report.add(Verdict(HEIGHT2_DCLASSES, True, None, f"{len(h2)} height-2 D-class(es)"))
        else:
            report.add(Verdict(HEIGHT2_DCLASSES, False, [st.dclasses[c].elements[0] for c in h2]))
        trivial = [st.dclasses[c].elements[0] for c in h2 if st.dclasses[c].hclass_size < 2]
        report.add(
            Verdict(HEIGHT2_HCLASSES, not trivial, trivial[0] if trivial else None)
        )
    return report


def realize_abstract(
    t: MulTable,
    limit: int = DEFAULT_LIMIT,
    validate: bool = False,
    verbose: bool = False,
) -> Realization:
    """Find a graph, else an edge-colored digraph, whose PAut is isomorphic to t."""
    report = check_abstract_conditions(t)
    blocking = [v.name for v in report.failed() if v.name in _BLOCKING]
    if blocking:
        if verbose:
            _err(f"[CHECK] not realizable: {', '.join(blocking)}")
        return Realization("none", report)
    if t.m == 1:
        # PAut of the graph with no vertices is the trivial monoid
        return Realization("graph", report, Graph(0, ()))

    images = abstract.restricted_munn(t)
    n = images[0].n
    if n > limit:
        raise LimitExceeded(f"{n} atoms exceeds the limit of {limit}; raise it with --limit {n}")
    s = InverseSubmonoid(n, tuple(images))
    if len(s) != t.m:
        raise OracleMismatch("Restricted Munn representation is not injective")

    st = green_structure(s)
    concrete = check_graph_conditions(s, limit, st)
    report.extend(concrete)
    if concrete.passed:
        theorem = "graph"
        g: Structure = build_graph(s, limit, validate, concrete)
    elif all(concrete.get(name).passed for name in (FULL, CONDITION_U)):  # type: ignore[union-attr]
        theorem = "digraph"
        g = build_colored_digraph(s, limit, validate, check_digraph_conditions(s, limit))
    else:
        return Realization("none", report, embedding=images)

    if verbose:
        _err(f"[BUILD] realized by the {theorem} construction on {n} vertices")
    return Realization(theorem, report, g, images)


def paut_isomorphic(g1: Graph, g2: Graph) -> bool:
    """PAut(g1) and PAut(g2) are isomorphic iff g1 is isomorphic to g2 or to its complement."""
    return is_isomorphic(g1, g2) is not None or is_isomorphic(g1, complement(g2)) is not None


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)
