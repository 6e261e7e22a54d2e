"""Graphs, edge-colored digraphs, isomorphism and canonical forms.

Every structure exposes ``matrix``: an n x n tuple of tuples where entry
(u, v) is 0 for no edge and c + 1 for an edge of color c. A Graph has a
single color, stored symmetrically and without loops, so a Graph and its
one-color digraph have the same matrix. Isomorphism, canonical forms and
partial automorphisms are all computed on that matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

Matrix = Tuple[Tuple[int, ...], ...]
Edge = Tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with adjacency rows stored as bitsets."""

    n: int
    adj: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"Vertex count must be non-negative, got {self.n}")
        if len(self.adj) != self.n:
            raise ValueError(f"Expected {self.n} adjacency rows, got {len(self.adj)}")
        for u, row in enumerate(self.adj):
            if row >> self.n:
                raise ValueError(f"Vertex {u} has a neighbour outside 0..{self.n - 1}")
            if row >> u & 1:
                raise ValueError(f"Loop at vertex {u}")
            for v in range(self.n):
                if (row >> v & 1) != (self.adj[v] >> u & 1):
                    raise ValueError(f"Edge {{{u},{v}}} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"Loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"Edge ({u},{v}) has an endpoint outside 0..{n - 1}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @property
    def edges(self) -> List[Edge]:
        """Edges (u, v) with u < v, sorted."""
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.adj[u] >> v & 1]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    @property
    def num_colors(self) -> int:
        return 1

    @cached_property
    def matrix(self) -> Matrix:
        return tuple(
            tuple(1 if row >> v & 1 else 0 for v in range(self.n)) for row in self.adj
        )


@dataclass(frozen=True)
class ColoredDigraph:
    """Directed graph with pairwise disjoint edge sets, one per color. Loops allowed."""

    n: int
    colors: Tuple[FrozenSet[Edge], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"Vertex count must be non-negative, got {self.n}")
        seen: Dict[Edge, int] = {}
        for c, edges in enumerate(self.colors):
            for u, v in edges:
                if not (0 <= u < self.n and 0 <= v < self.n):
                    raise ValueError(f"Edge ({u},{v}) of color {c} is outside 0..{self.n - 1}")
                if (u, v) in seen:
                    raise ValueError(f"Edge ({u},{v}) has colors {seen[(u, v)]} and {c}")
                seen[(u, v)] = c

    @classmethod
    def from_colors(cls, n: int, colors: Iterable[Iterable[Edge]]) -> "ColoredDigraph":
        return cls(n, tuple(frozenset((int(u), int(v)) for u, v in es) for es in colors))

    @classmethod
    def from_graph(cls, g: Graph) -> "ColoredDigraph":
        arcs = [(u, v) for u, v in g.edges] + [(v, u) for u, v in g.edges]
        return cls(g.n, (frozenset(arcs),))

    @classmethod
    def from_matrix(cls, mat: Sequence[Sequence[int]], num_colors: int) -> "ColoredDigraph":
        colors: List[List[Edge]] = [[] for _ in range(num_colors)]
        for u, row in enumerate(mat):
            for v, c in enumerate(row):
                if c:
                    colors[c - 1].append((u, v))
        return cls.from_colors(len(mat), colors)

    @property
    def num_colors(self) -> int:
        return len(self.colors)

    @cached_property
    def matrix(self) -> Matrix:
        mat = [[0] * self.n for _ in range(self.n)]
        for c, edges in enumerate(self.colors):
            for u, v in edges:
                mat[u][v] = c + 1
        return tuple(tuple(row) for row in mat)


Structure = Union[Graph, ColoredDigraph]


def _rebuild(like: Structure, mat: Sequence[Sequence[int]]) -> Structure:
    """A structure of the same type as ``like`` with the given matrix."""
    if isinstance(like, Graph):
        rows = []
        for row in mat:
            bits = 0
            for v, c in enumerate(row):
                if c:
                    bits |= 1 << v
            rows.append(bits)
        return Graph(len(mat), tuple(rows))
    return ColoredDigraph.from_matrix(mat, like.num_colors)


def induced(g: Structure, vertices: Iterable[int]) -> Structure:
    """Subgraph induced on ``vertices``, relabeled 0..k-1 in ascending order."""
    keep = sorted(set(vertices))
    for v in keep:
        if not 0 <= v < g.n:
            raise ValueError(f"Vertex {v} is outside 0..{g.n - 1}")
    mat = g.matrix
    return _rebuild(g, [[mat[u][v] for v in keep] for u in keep])


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full & ~row & ~(1 << u) for u, row in enumerate(g.adj)))


def relabel_structure(g: Structure, sigma: Sequence[int]) -> Structure:
    """Move vertex v to sigma[v]."""
    n = g.n
    mat = g.matrix
    out = [[0] * n for _ in range(n)]
    for u in range(n):
        for v in range(n):
            out[sigma[u]][sigma[v]] = mat[u][v]
    return _rebuild(g, out)


# --- colour refinement ----------------------------------------------------


def _refine(mats: Sequence[Matrix]) -> List[List[int]]:
    """Joint colour refinement; colours are comparable across all inputs.

    Initial colour is the loop colour; each round a vertex's colour becomes
    its old colour plus the multiset of (neighbour colour, out-entry,
    in-entry). Signatures are ranked in sorted order, so the result only
    depends on the structures up to isomorphism.
    """
    colours = [[m[v][v] for v in range(len(m))] for m in mats]
    count = len({c for cs in colours for c in cs})
    while True:
        sigs = []
        for m, cs in zip(mats, colours):
            n = len(m)
            sigs.append(
                [
                    (
                        cs[v],
                        tuple(sorted((cs[w], m[v][w], m[w][v]) for w in range(n) if w != v)),
                    )
                    for v in range(n)
                ]
            )
        ranks = {s: i for i, s in enumerate(sorted({s for ss in sigs for s in ss}))}
        colours = [[ranks[s] for s in ss] for ss in sigs]
        new_count = len(ranks)
        if new_count == count:
            return colours
        count = new_count


def cells(g: Structure) -> List[int]:
    """Stable refined colour of each vertex."""
    return _refine([g.matrix])[0]


# --- isomorphism ----------------------------------------------------------


def is_isomorphic(
    g1: Structure,
    g2: Structure,
    fixed: Optional[Dict[int, int]] = None,
) -> Optional[Tuple[int, ...]]:
    """Lexicographically least colour-preserving bijection g1 -> g2, or None.

    ``fixed`` pins some vertices of g1 to vertices of g2 in advance.
    """
    if g1.n != g2.n:
        return None
    n = g1.n
    m1, m2 = g1.matrix, g2.matrix
    c1, c2 = _refine([m1, m2])
    if sorted(c1) != sorted(c2):
        return None
    pinned = dict(fixed or {})
    for v, w in pinned.items():
        if c1[v] != c2[w]:
            return None

    sigma = [-1] * n
    used = [False] * n

    def extend(v: int) -> bool:
        if v == n:
            return True
        targets = [pinned[v]] if v in pinned else range(n)
        for w in targets:
            if used[w] or c1[v] != c2[w] or m1[v][v] != m2[w][w]:
                continue
            if any(m1[u][v] != m2[sigma[u]][w] or m1[v][u] != m2[w][sigma[u]] for u in range(v)):
                continue
            sigma[v] = w
            used[w] = True
            if extend(v + 1):
                return True
            used[w] = False
        sigma[v] = -1
        return False

    if extend(0):
        return tuple(sigma)
    return None


def orbits(g: Structure) -> List[Tuple[int, ...]]:
    """Vertex orbits of the automorphism group, sorted by smallest vertex."""
    colour = cells(g)
    orbit_of = [-1] * g.n
    result: List[List[int]] = []
    for v in range(g.n):
        if orbit_of[v] != -1:
            continue
        orbit_of[v] = len(result)
        members = [v]
        for w in range(v + 1, g.n):
            if orbit_of[w] == -1 and colour[w] == colour[v]:
                if is_isomorphic(g, g, fixed={v: w}) is not None:
                    orbit_of[w] = orbit_of[v]
                    members.append(w)
        result.append(members)
    return [tuple(o) for o in result]


def _twins(mat: Matrix, u: int, w: int) -> bool:
    """True when swapping u and w is an automorphism."""
    if mat[u][u] != mat[w][w] or mat[u][w] != mat[w][u]:
        return False
    return all(
        mat[u][x] == mat[w][x] and mat[x][u] == mat[x][w]
        for x in range(len(mat))
        if x != u and x != w
    )


def _canonical_order(g: Structure) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Vertex order minimizing the adjacency code, and that code.

    Positions are filled cell by cell in refined-colour order. The code lists,
    for each position i, the loop entry followed by the out/in entries
    towards every earlier position. Branches whose code prefix exceeds the
    best known code are cut, and of two twins only one is tried.
    """
    n = g.n
    mat = g.matrix
    colour = cells(g)
    slots = sorted(colour)
    best: List[Optional[Tuple[int, ...]]] = [None]
    best_order: List[Tuple[int, ...]] = [()]
    order: List[int] = []
    placed = [False] * n

    def block(i: int, v: int) -> List[int]:
        out = [mat[v][v]]
        for j in range(i):
            u = order[j]
            out.append(mat[v][u])
            out.append(mat[u][v])
        return out

    def search(i: int, code: List[int]) -> None:
        if i == n:
            if best[0] is None or tuple(code) < best[0]:
                best[0] = tuple(code)
                best_order[0] = tuple(order)
            return
        tried: List[int] = []
        for v in range(n):
            if placed[v] or colour[v] != slots[i]:
                continue
            if any(_twins(mat, u, v) for u in tried):
                continue
            tried.append(v)
            ext = code + block(i, v)
            if best[0] is not None and ext > list(best[0][: len(ext)]):
                continue
            placed[v] = True
            order.append(v)
            search(i + 1, ext)
            order.pop()
            placed[v] = False

    search(0, [])
    return best_order[0], best[0] or ()


def canonical_form(g: Structure) -> Structure:
    """Relabeled copy of g, identical for all isomorphic inputs."""
    order, _ = _canonical_order(g)
    sigma = [0] * g.n
    for pos, v in enumerate(order):
        sigma[v] = pos
    return relabel_structure(g, sigma)


def canonical_key(g: Structure) -> Tuple[str, int, int, Tuple[int, ...]]:
    """Hashable isomorphism invariant; equal keys mean isomorphic structures."""
    _, code = _canonical_order(g)
    kind = "graph" if isinstance(g, Graph) else "digraph"
    return (kind, g.n, g.num_colors, code)


# --- generators -----------------------------------------------------------


def all_graphs(n: int) -> Iterator[Graph]:
    """Every labeled graph on n vertices, by edge mask over pairs in lex order."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


def graph_classes(n: int) -> List[Graph]:
    """One canonical representative per isomorphism class, sorted by key.

    Classes on n vertices are grown from classes on n - 1 vertices by adding
    a vertex with every possible neighbourhood.
    """
    if n < 0:
        raise ValueError(f"Vertex count must be non-negative, got {n}")
    level: Dict[Tuple, Graph] = {canonical_key(Graph(0, ())): Graph(0, ())}
    for k in range(n):
        grown: Dict[Tuple, Graph] = {}
        for g in level.values():
            for nbrs in range(1 << k):
                rows = list(g.adj) + [nbrs]
                for u in range(k):
                    if nbrs >> u & 1:
                        rows[u] |= 1 << k
                h = Graph(k + 1, tuple(rows))
                key = canonical_key(h)
                if key not in grown:
                    grown[key] = canonical_form(h)
        level = grown
    return [level[key] for key in sorted(level)]


def all_colored_digraphs(n: int, num_colors: int) -> Iterator[ColoredDigraph]:
    """Every labeled digraph on n vertices with entries 0..num_colors per ordered pair."""
    slots = [(u, v) for u in range(n) for v in range(n)]
    base = num_colors + 1
    for code in range(base ** len(slots)):
        mat = [[0] * n for _ in range(n)]
        rest = code
        for u, v in slots:
            rest, digit = divmod(rest, base)
            mat[u][v] = digit
        yield ColoredDigraph.from_matrix(mat, num_colors)
