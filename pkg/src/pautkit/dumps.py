"""JSON codecs for monoid dumps, tables, eggboxes, reports and structures.

Points on the wire are 1-based; element indices are 0-based.
"""

from __future__ import annotations

import json
from typing import IO, Any, Dict, List, Mapping, Optional, Sequence, Union

from pautkit.abstract import MulTable
from pautkit.characterize import ConditionReport, Realization
from pautkit.constants import UNDEFINED
from pautkit.graphs import ColoredDigraph, Graph, Structure
from pautkit.green import GreenStructure
from pautkit.paut import InverseSubmonoid
from pautkit.pperm import PartialPerm, format_cpn, points_of


class DumpFormatError(ValueError):
    """JSON document does not have the expected shape."""

    pass


def load_json(source: Union[str, IO[str]]) -> Any:
    """Parse JSON text or a text stream, reporting failures as DumpFormatError."""
    text = source if isinstance(source, str) else source.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DumpFormatError(f"Invalid JSON: {exc}") from exc


def dump_json(obj: Any) -> str:
    """Stable rendering used for everything written to stdout."""
    return json.dumps(obj, sort_keys=True)


def _require(raw: Any, key: str, kind: type, where: str) -> Any:
    if not isinstance(raw, Mapping):
        raise DumpFormatError(f"{where}: expected a JSON object")
    if key not in raw:
        raise DumpFormatError(f"{where}: missing key {key!r}")
    value = raw[key]
    # bool is an int subclass; reject it where a count is expected
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise DumpFormatError(f"{where}: {key!r} must be {kind.__name__}")
    return value


def _points(values: Any, n: int, where: str) -> List[int]:
    if not isinstance(values, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in values
    ):
        raise DumpFormatError(f"{where}: expected a list of integers")
    for v in values:
        if not 1 <= v <= n:
            raise DumpFormatError(f"{where}: point {v} is outside 1..{n}")
    return [v - 1 for v in values]


# --- monoid dump ----------------------------------------------------------


def element_to_json(f: PartialPerm) -> Dict[str, List[int]]:
    dom = f.domain()
    return {"dom": [x + 1 for x in dom], "img": [f.img[x] + 1 for x in dom]}


def monoid_to_json(s: InverseSubmonoid) -> Dict[str, Any]:
    return {"n": s.n, "elements": [element_to_json(f) for f in s]}


def monoid_from_json(raw: Any, validate: bool = False) -> InverseSubmonoid:
    """Read a monoid dump. Unknown keys are ignored."""
    n = _require(raw, "n", int, "monoid")
    if n < 1:
        raise DumpFormatError(f"monoid: n must be positive, got {n}")
    elements = _require(raw, "elements", list, "monoid")
    perms = []
    for i, entry in enumerate(elements):
        where = f"element {i}"
        dom = _points(_require(entry, "dom", list, where), n, where)
        img = _points(_require(entry, "img", list, where), n, where)
        if len(dom) != len(img):
            raise DumpFormatError(f"{where}: dom and img differ in length")
        full = [UNDEFINED] * n
        for x, y in zip(dom, img):
            if full[x] != UNDEFINED:
                raise DumpFormatError(f"{where}: point {x + 1} listed twice in dom")
            full[x] = y
        try:
            perms.append(PartialPerm(n, tuple(full)))
        except ValueError as exc:
            raise DumpFormatError(f"{where}: {exc}") from exc
    return InverseSubmonoid(n, tuple(perms), validate=validate)


# --- multiplication tables ------------------------------------------------


def table_to_json(t: MulTable) -> Dict[str, Any]:
    out: Dict[str, Any] = {"m": t.m, "identity": t.identity, "table": t.table.tolist()}
    if t.names is not None:
        out["names"] = list(t.names)
    return out


def table_from_json(raw: Any) -> MulTable:
    m = _require(raw, "m", int, "table")
    identity = _require(raw, "identity", int, "table")
    rows = _require(raw, "table", list, "table")
    if len(rows) != m or not all(isinstance(r, list) and len(r) == m for r in rows):
        raise DumpFormatError(f"table: expected {m} rows of {m} entries")
    if not all(isinstance(x, int) and not isinstance(x, bool) for r in rows for x in r):
        raise DumpFormatError("table: entries must be integers")
    names = raw.get("names")
    if names is not None and not (
        isinstance(names, list) and all(isinstance(x, str) for x in names)
    ):
        raise DumpFormatError("table: 'names' must be a list of strings")
    try:
        return MulTable(m, rows, identity, tuple(names) if names is not None else None)
    except ValueError as exc:
        raise DumpFormatError(f"table: {exc}") from exc


# --- eggboxes -------------------------------------------------------------


def _key_points(key: int) -> List[int]:
    return [x + 1 for x in points_of(key)]


def eggbox_to_json(
    structure: GreenStructure,
    concrete: bool = True,
    labels: Optional[Mapping[int, str]] = None,
) -> Dict[str, Any]:
    """Eggboxes plus the strict D-order as [lower, upper] class id pairs.

    Concrete keys are written as 1-based point lists; table keys are the
    idempotent element indices.
    """
    dclasses = []
    for cid, d in enumerate(structure.dclasses):
        entry: Dict[str, Any] = {
            "height": structure.heights[cid],
            "rkeys": [_key_points(k) if concrete else k for k in d.rkeys],
            "lkeys": [_key_points(k) if concrete else k for k in d.lkeys],
            "cells": [[list(cell) for cell in row] for row in d.cells],
        }
        if labels is not None and cid in labels:
            entry["label"] = labels[cid]
        dclasses.append(entry)
    return {"dclasses": dclasses, "order": sorted([i, j] for i, j in structure.poset)}


# --- condition reports ----------------------------------------------------


def _witness_json(witness: Any) -> Any:
    if witness is None:
        return None
    if isinstance(witness, PartialPerm):
        return format_cpn(witness)
    if isinstance(witness, (list, tuple)):
        return [_witness_json(w) for w in witness]
    return witness


def report_to_json(
    report: ConditionReport,
    realization: Optional[Realization] = None,
) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "conditions": {
            v.name: {"passed": v.passed, "witness": _witness_json(v.witness), "detail": v.detail}
            for v in report.verdicts
        },
        "passed": report.passed,
    }
    if realization is not None:
        out["theorem"] = realization.theorem
        if realization.structure is not None:
            out["construction"] = structure_to_json(realization.structure)
    return out


# --- structures -----------------------------------------------------------


def structure_to_json(g: Structure) -> Dict[str, Any]:
    if isinstance(g, Graph):
        return {"n": g.n, "edges": [[u + 1, v + 1] for u, v in g.edges]}
    return {
        "n": g.n,
        "colors": [[[u + 1, v + 1] for u, v in sorted(arcs)] for arcs in g.colors],
    }


def structure_from_json(raw: Any) -> Structure:
    n = _require(raw, "n", int, "structure")
    if n < 0:
        raise DumpFormatError(f"structure: n must be non-negative, got {n}")

    def pairs(values: Any, where: str) -> List[Sequence[int]]:
        if not isinstance(values, list):
            raise DumpFormatError(f"{where}: expected a list of pairs")
        out = []
        for item in values:
            pair = _points(item, n, where)
            if len(pair) != 2:
                raise DumpFormatError(f"{where}: expected pairs, got {item}")
            out.append(pair)
        return out

    try:
        if "colors" in raw:
            colors = raw["colors"]
            if not isinstance(colors, list):
                raise DumpFormatError("structure: 'colors' must be a list")
            return ColoredDigraph.from_colors(
                n, [[tuple(p) for p in pairs(c, f"color {i + 1}")] for i, c in enumerate(colors)]
            )
        edges = _require(raw, "edges", list, "structure")
        return Graph.from_edges(n, [tuple(p) for p in pairs(edges, "edges")])  # type: ignore[misc]
    except DumpFormatError:
        raise
    except ValueError as exc:
        raise DumpFormatError(f"structure: {exc}") from exc
