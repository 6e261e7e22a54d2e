"""Green's relations, eggbox diagrams and the D-class order.

For inverse submonoids of a symmetric inverse monoid, L is equality of
domains and R is equality of ranges. A D-class is stored as an eggbox:
rows are R-classes keyed by range, columns are L-classes keyed by domain,
and each cell lists the element indices of one H-class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

from pautkit.graphs import Structure, canonical_form, canonical_key, induced
from pautkit.paut import InverseSubmonoid, OracleMismatch
from pautkit.pperm import PartialPerm, compose, format_cpn, points_of

RELATIONS = ("L", "R", "H", "D")


class NotAMember(ValueError):
    """Element is not in the monoid being queried."""

    pass


@dataclass(frozen=True)
class DClass:
    """One eggbox. Keys are range/domain bitsets for concrete monoids and
    idempotent indices for multiplication tables."""

    rkeys: Tuple[int, ...]
    lkeys: Tuple[int, ...]
    cells: Tuple[Tuple[Tuple[int, ...], ...], ...]
    idempotent_cells: Tuple[Tuple[int, int], ...]

    @property
    def elements(self) -> List[int]:
        return sorted(i for row in self.cells for cell in row for i in cell)

    @property
    def hclass_size(self) -> int:
        return len(self.cells[0][0]) if self.cells else 0

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rkeys), len(self.lkeys)


@dataclass(frozen=True)
class GreenStructure:
    """D-classes with their strict order and heights."""

    dclasses: Tuple[DClass, ...]
    class_of: Tuple[int, ...]  # element index -> D-class id
    poset: FrozenSet[Tuple[int, int]]  # (i, j) means D_i < D_j
    heights: Tuple[int, ...]

    def below(self, i: int, j: int) -> bool:
        """D_i <= D_j."""
        return i == j or (i, j) in self.poset

    def minimum(self) -> Optional[int]:
        lows = [i for i in range(len(self.dclasses)) if not any(p[1] == i for p in self.poset)]
        return lows[0] if len(lows) == 1 else None

    def top(self) -> List[int]:
        return [i for i in range(len(self.dclasses)) if not any(p[0] == i for p in self.poset)]


def assemble(
    groups: Sequence[Sequence[int]],
    rkey: Sequence[int],
    lkey: Sequence[int],
    leq: Callable[[int, int], bool],
    size: int,
) -> GreenStructure:
    """Build eggboxes from D-class member lists and per-element keys.

    ``leq(i, j)`` decides D_i <= D_j for class ids i != j.
    """
    dclasses: List[DClass] = []
    class_of = [-1] * size
    for cid, members in enumerate(groups):
        rkeys = tuple(sorted({rkey[i] for i in members}))
        lkeys = tuple(sorted({lkey[i] for i in members}))
        rpos = {k: r for r, k in enumerate(rkeys)}
        lpos = {k: c for c, k in enumerate(lkeys)}
        grid: List[List[List[int]]] = [[[] for _ in lkeys] for _ in rkeys]
        for i in sorted(members):
            grid[rpos[rkey[i]]][lpos[lkey[i]]].append(i)
            class_of[i] = cid
        idem = tuple((rpos[key], lpos[key]) for key in rkeys if key in lpos)
        dclasses.append(
            DClass(
                rkeys=rkeys,
                lkeys=lkeys,
                cells=tuple(tuple(tuple(cell) for cell in row) for row in grid),
                idempotent_cells=idem,
            )
        )

    k = len(dclasses)
    poset = frozenset((i, j) for i in range(k) for j in range(k) if i != j and leq(i, j))

    heights: Dict[int, int] = {}

    def height_of(c: int) -> int:
        if c not in heights:
            lower = [i for i in range(k) if (i, c) in poset]
            heights[c] = 1 + max(height_of(i) for i in lower) if lower else 0
        return heights[c]

    return GreenStructure(
        dclasses=tuple(dclasses),
        class_of=tuple(class_of),
        poset=poset,
        heights=tuple(height_of(c) for c in range(k)),
    )


class UnionFind:
    def __init__(self) -> None:
        self.parent: Dict[int, int] = {}

    def find(self, x: int) -> int:
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def green_structure(s: InverseSubmonoid, validate: bool = False) -> GreenStructure:
    """Green structure of a concrete inverse submonoid.

    D-classes come from connecting dom f with ran f for every element.
    D_a <= D_b when some domain key of D_a is a subset of some domain key of
    D_b. Classes are listed by rank, then by smallest key.
    """
    uf = UnionFind()
    for f in s:
        uf.union(f.dom, f.ran)

    by_root: Dict[int, List[int]] = {}
    for i, f in enumerate(s):
        by_root.setdefault(uf.find(f.dom), []).append(i)
    groups = sorted(by_root.values(), key=lambda g: (s[g[0]].rank, min(s[i].dom for i in g)))

    keys = [sorted({s[i].dom for i in g}) for g in groups]

    def leq(i: int, j: int) -> bool:
        return any(w & ~kk == 0 for w in keys[i] for kk in keys[j])

    structure = assemble(
        groups, [f.ran for f in s], [f.dom for f in s], leq, len(s)
    )
    if validate:
        _validate_structure(s, structure)
    return structure


def _in_ideal(s: InverseSubmonoid, a: PartialPerm, b: PartialPerm) -> bool:
    """a = x b y for some x, y in S."""
    right = {compose(b, y) for y in s}
    return any(compose(x, t) == a for x in s for t in right)


def _validate_structure(s: InverseSubmonoid, structure: GreenStructure) -> None:
    reps = [s[d.elements[0]] for d in structure.dclasses]
    k = len(reps)
    for i in range(k):
        for j in range(k):
            if i != j and structure.below(i, j) != _in_ideal(s, reps[i], reps[j]):
                raise OracleMismatch(f"D-order between classes {i} and {j} fails a = x b y check")
    if s.is_full():
        for i, f in enumerate(s):
            if structure.heights[structure.class_of[i]] != f.rank:
                raise OracleMismatch(f"Height of {f} differs from its rank")


def related(s: InverseSubmonoid, rel: str, f: PartialPerm, g: PartialPerm) -> bool:
    """Green's relation ``rel`` in {L, R, H, D} between members f and g."""
    if rel not in RELATIONS:
        raise ValueError(f"Unknown relation {rel!r}. Choose one of: {', '.join(RELATIONS)}")
    for x in (f, g):
        if x not in s:
            raise NotAMember(f"{x} is not a member of the monoid")
    if rel == "L":
        return f.dom == g.dom
    if rel == "R":
        return f.ran == g.ran
    if rel == "H":
        return f.dom == g.dom and f.ran == g.ran
    return any(p.dom == f.dom and p.ran == g.ran for p in s)


def height(
    s: InverseSubmonoid,
    f: PartialPerm,
    structure: Optional[GreenStructure] = None,
    validate: bool = False,
) -> int:
    """Height of the D-class of f. Equals rank f when s is full."""
    if f not in s:
        raise NotAMember(f"{f} is not a member of the monoid")
    st = structure or green_structure(s)
    h = st.heights[st.class_of[s.index(f)]]
    if validate and s.is_full() and h != f.rank:
        raise OracleMismatch(f"Height {h} of {f} differs from its rank {f.rank}")
    return h


def dclass_subgraph_correspondence(
    g: Structure,
    s: InverseSubmonoid,
    structure: Optional[GreenStructure] = None,
) -> Dict[int, Structure]:
    """Label each D-class by the canonical subgraph induced on its idempotent domains."""
    st = structure or green_structure(s)
    labels: Dict[int, Structure] = {}
    for cid, d in enumerate(st.dclasses):
        forms = {canonical_key(induced(g, points_of(key))) for key in d.lkeys}
        if len(forms) != 1:
            raise OracleMismatch(f"D-class {cid} mixes non-isomorphic induced subgraphs")
        labels[cid] = canonical_form(induced(g, points_of(d.lkeys[0])))
    return labels


def _set_label(key: int) -> str:
    return "{" + ",".join(str(x + 1) for x in points_of(key)) + "}"


def render_eggbox(
    s: Optional[InverseSubmonoid],
    structure: GreenStructure,
    names: Optional[Sequence[str]] = None,
) -> str:
    """Plain-text eggboxes, one grid per D-class, lowest height first.

    Concrete monoids label rows by range and columns by domain. For tables
    pass ``s=None`` and element ``names``; keys are then idempotent names.
    """
    if s is not None:
        label = [format_cpn(f) for f in s]

        def key_label(key: int) -> str:
            return _set_label(key)

    else:
        if names is None:
            raise ValueError("Element names are required when no monoid is given")
        label = list(names)

        def key_label(key: int) -> str:
            return label[key]

    blocks = []
    order = sorted(range(len(structure.dclasses)), key=lambda c: (structure.heights[c], c))
    for cid in order:
        d = structure.dclasses[cid]
        rows, cols = d.shape
        head = f"D{cid}  height {structure.heights[cid]}  {rows}x{cols}  |H| = {d.hclass_size}"
        grid = [[""] + [key_label(k) for k in d.lkeys]]
        for key, row in zip(d.rkeys, d.cells):
            grid.append([key_label(key)] + [" ".join(label[i] for i in cell) for cell in row])
        widths = [max(len(line[c]) for line in grid) for c in range(cols + 1)]
        lines = [head]
        for r, line in enumerate(grid):
            lines.append(" | ".join(text.ljust(w) for text, w in zip(line, widths)).rstrip())
            if r == 0:
                lines.append("-+-".join("-" * w for w in widths))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
