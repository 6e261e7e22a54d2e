"""Finite inverse monoids given by multiplication tables.

``table[a, b]`` is the product a.b. Tables built from concrete monoids use
``table[i, j] = S[i] after S[j]`` so products read like composition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from pautkit.green import GreenStructure, UnionFind, assemble
from pautkit.paut import InverseSubmonoid
from pautkit.pool import ordered_map
from pautkit.pperm import PartialPerm, compose, format_cpn, identity

# Cap on a * b * c cells materialized per associativity chunk
_CHUNK_CELLS = 4_000_000


class NotInverseMonoid(ValueError):
    """Table failed validation where an inverse monoid is required."""

    pass


class NoZeroElement(ValueError):
    """Monoid has no zero, so atoms are undefined."""

    pass


@dataclass(frozen=True)
class TableReport:
    """Outcome of validate(); ``axiom`` names the first violated axiom."""

    ok: bool
    axiom: Optional[str] = None
    witness: Tuple[int, ...] = ()
    detail: str = ""


@dataclass(eq=False)
class MulTable:
    """A finite monoid: m elements, product table and identity index."""

    m: int
    table: np.ndarray
    identity: int
    names: Optional[Tuple[str, ...]] = None
    _cache: Dict[str, object] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        self.table = np.asarray(self.table, dtype=np.int64)
        if self.m < 1:
            raise ValueError(f"A monoid needs at least one element, got m={self.m}")
        if self.table.shape != (self.m, self.m):
            raise ValueError(f"Table shape {self.table.shape} does not match m={self.m}")
        if self.table.min() < 0 or self.table.max() >= self.m:
            raise ValueError(f"Table entries must lie in 0..{self.m - 1}")
        if not 0 <= self.identity < self.m:
            raise ValueError(f"Identity index {self.identity} is outside 0..{self.m - 1}")
        if self.names is not None and len(self.names) != self.m:
            raise ValueError(f"Expected {self.m} names, got {len(self.names)}")

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def name(self, a: int) -> str:
        return self.names[a] if self.names is not None else str(a)


# --- validation -----------------------------------------------------------


def _assoc_chunk(t: np.ndarray, start: int, stop: int) -> Optional[Tuple[int, int, int]]:
    rows = np.arange(start, stop)
    left = t[t[rows, :], :]  # (a.b).c
    right = t[rows][:, t]  # a.(b.c)
    bad = np.argwhere(left != right)
    if bad.size == 0:
        return None
    a, b, c = bad[0]
    return int(rows[a]), int(b), int(c)


def validate(t: MulTable, jobs: int = 1) -> TableReport:
    """Check associativity, two-sided identity and unique inverses, in that order.

    Witnesses are lexicographically least.
    """
    cached = t._cache.get("report")
    if cached is not None:
        return cached  # type: ignore[return-value]

    m = t.m
    T = t.table
    step = max(1, _CHUNK_CELLS // (m * m))
    spans = [(i, min(i + step, m)) for i in range(0, m, step)]
    for found in ordered_map(lambda sp: _assoc_chunk(T, sp[0], sp[1]), spans, jobs):
        if found is not None:
            a, b, c = found
            return _remember(
                t,
                TableReport(
                    False, "associativity", found, f"({a}.{b}).{c} != {a}.({b}.{c})"
                ),
            )

    e = t.identity
    idx = np.arange(m)
    for side, line in (("left", T[e, :]), ("right", T[:, e])):
        bad = np.flatnonzero(line != idx)
        if bad.size:
            x = int(bad[0])
            return _remember(
                t, TableReport(False, "identity", (x,), f"{e} is not a {side} identity at {x}")
            )

    inverse = np.empty(m, dtype=np.int64)
    for s in range(m):
        # x with s.x.s = s and x.s.x = x
        sx = T[s, :]
        xs = T[:, s]
        ok = (T[sx, s] == s) & (T[xs, idx] == idx)
        cands = np.flatnonzero(ok)
        if cands.size == 0:
            return _remember(t, TableReport(False, "inverse", (s,), f"{s} has no inverse"))
        if cands.size > 1:
            x1, x2 = int(cands[0]), int(cands[1])
            return _remember(
                t,
                TableReport(
                    False, "unique_inverse", (s, x1, x2), f"{s} has inverses {x1} and {x2}"
                ),
            )
        inverse[s] = cands[0]

    t._cache["inverse"] = inverse
    return _remember(t, TableReport(True))


def _remember(t: MulTable, report: TableReport) -> TableReport:
    t._cache["report"] = report
    return report


def _require_inverse(t: MulTable) -> np.ndarray:
    report = validate(t)
    if not report.ok:
        raise NotInverseMonoid(f"Not an inverse monoid: {report.detail}")
    return t._cache["inverse"]  # type: ignore[return-value]


def inverse_of(t: MulTable, a: int) -> int:
    return int(_require_inverse(t)[a])


def idempotents(t: MulTable) -> np.ndarray:
    idx = np.arange(t.m)
    return np.flatnonzero(t.table[idx, idx] == idx)


# --- natural order and joins ----------------------------------------------


def _leq_matrix(t: MulTable) -> np.ndarray:
    """L[a, b] is True when a <= b in the natural order."""
    cached = t._cache.get("leq")
    if cached is None:
        E = idempotents(t)
        below = np.zeros((t.m, t.m), dtype=bool)
        # a <= b iff a = b.e for some idempotent e
        below[t.table[:, E], np.arange(t.m)[:, None]] = True
        t._cache["leq"] = below
        cached = below
    return cached  # type: ignore[return-value]


def natural_leq(t: MulTable, a: int, b: int) -> bool:
    _require_inverse(t)
    return bool(_leq_matrix(t)[a, b])


def compatible_abs(t: MulTable, a: int, b: int) -> bool:
    inv = _require_inverse(t)
    T = t.table
    return bool(_is_idem(T, T[a, inv[b]]) and _is_idem(T, T[inv[a], b]))


def _is_idem(T: np.ndarray, x: int) -> bool:
    return T[x, x] == x


def join_set_abs(t: MulTable, elements: Sequence[int]) -> Optional[int]:
    """Least upper bound of ``elements`` under the natural order, if any."""
    _require_inverse(t)
    L = _leq_matrix(t)
    if len(elements) == 0:
        upper = np.ones(t.m, dtype=bool)
    else:
        upper = L[list(elements), :].all(axis=0)
    bounds = np.flatnonzero(upper)
    for u in bounds:
        if L[u, bounds].all():
            return int(u)
    return None


def join_abs(t: MulTable, a: int, b: int) -> Optional[int]:
    return join_set_abs(t, [a, b])


# --- idempotent lattice ---------------------------------------------------


@dataclass(frozen=True)
class IdempotentLattice:
    """E(S) with its meet table; meets[i][j] is the product of idempotents i and j."""

    idempotents: Tuple[int, ...]
    meets: Tuple[Tuple[int, ...], ...]
    zero: Optional[int]
    atoms: Tuple[int, ...]

    def leq(self, e: int, f: int) -> bool:
        i, j = self.idempotents.index(e), self.idempotents.index(f)
        return self.meets[i][j] == e


def zero_of(t: MulTable) -> Optional[int]:
    T = t.table
    for z in range(t.m):
        if (T[z, :] == z).all() and (T[:, z] == z).all():
            return z
    return None


def idempotent_lattice(t: MulTable) -> IdempotentLattice:
    _require_inverse(t)
    E = [int(e) for e in idempotents(t)]
    z = zero_of(t)
    atoms: List[int] = []
    if z is not None:
        T = t.table
        for e in E:
            if e == z:
                continue
            below = [f for f in E if T[f, e] == f]
            if len(below) == 2:
                atoms.append(e)
    meets = tuple(tuple(int(t.table[e, f]) for f in E) for e in E)
    return IdempotentLattice(idempotents=tuple(E), meets=meets, zero=z, atoms=tuple(atoms))


def _atom_masks(t: MulTable, lat: IdempotentLattice) -> Dict[int, int]:
    T = t.table
    return {
        e: sum(1 << i for i, a in enumerate(lat.atoms) if T[a, e] == a) for e in lat.idempotents
    }


def is_boolean(t: MulTable) -> bool:
    """E(S) is a powerset lattice: e -> {atoms below e} is a meet-preserving bijection."""
    lat = idempotent_lattice(t)
    if lat.zero is None:
        return False
    if len(lat.idempotents) != 1 << len(lat.atoms):
        return False
    masks = _atom_masks(t, lat)
    if len(set(masks.values())) != len(masks):
        return False
    T = t.table
    return all(
        masks[int(T[e, f])] == masks[e] & masks[f] for e in lat.idempotents for f in lat.idempotents
    )


# --- Munn representation --------------------------------------------------


def munn(t: MulTable, s: int) -> Dict[int, int]:
    """delta_s: [s^-1 s] -> [s s^-1], e -> s e s^-1."""
    inv = _require_inverse(t)
    T = t.table
    d = int(T[inv[s], s])
    return {
        int(e): int(T[T[s, e], inv[s]]) for e in idempotents(t) if T[e, d] == e
    }


def restricted_munn(t: MulTable) -> List[PartialPerm]:
    """alpha(s) for every element: the Munn action on atoms, atom i as point i.

    Only the trivial monoid has no atoms; its representation is the empty list.
    """
    lat = idempotent_lattice(t)
    if lat.zero is None:
        raise NoZeroElement("Monoid has no zero element; atoms are undefined")
    if not lat.atoms:
        return []
    inv = _require_inverse(t)
    T = t.table
    pos = {a: i for i, a in enumerate(lat.atoms)}
    k = len(lat.atoms)
    out = []
    for s in range(t.m):
        d = T[inv[s], s]
        img = [-1] * k
        for a, i in pos.items():
            if T[a, d] == a:
                img[i] = pos[int(T[T[s, a], inv[s]])]
        out.append(PartialPerm(k, tuple(img)))
    return out


def fundamental_witness(t: MulTable) -> Optional[Tuple[int, int]]:
    """Least pair s < t with delta_s == delta_t, or None when faithful."""
    first: Dict[Tuple, int] = {}
    best: Optional[Tuple[int, int]] = None
    for s in range(t.m):
        key = tuple(sorted(munn(t, s).items()))
        if key in first:
            pair = (first[key], s)
            if best is None or pair < best:
                best = pair
        else:
            first[key] = s
    return best


def is_fundamental(t: MulTable) -> bool:
    return fundamental_witness(t) is None


# --- Green's relations from the table -------------------------------------


def green_abs(t: MulTable) -> GreenStructure:
    """L, R, D and the D-order from principal ideals of the table.

    Rows and columns are keyed by the idempotent of each R- and L-class.
    """
    inv = _require_inverse(t)
    T = t.table
    m = t.m
    right_ideal = [frozenset(T[a, :].tolist()) for a in range(m)]
    left_ideal = [frozenset(T[:, a].tolist()) for a in range(m)]

    uf = UnionFind()
    first_r: Dict[frozenset, int] = {}
    first_l: Dict[frozenset, int] = {}
    for a in range(m):
        uf.union(a, first_r.setdefault(right_ideal[a], a))
        uf.union(a, first_l.setdefault(left_ideal[a], a))

    rkey = [int(T[a, inv[a]]) for a in range(m)]
    lkey = [int(T[inv[a], a]) for a in range(m)]

    by_root: Dict[int, List[int]] = {}
    for a in range(m):
        by_root.setdefault(uf.find(a), []).append(a)
    groups = list(by_root.values())

    ideals = []
    for g in groups:
        b = g[0]
        ideals.append(set(np.unique(T[T[:, b], :]).tolist()))

    depth: Dict[int, int] = {}

    def leq(i: int, j: int) -> bool:
        return groups[i][0] in ideals[j]

    # Order classes by height, then smallest element
    k = len(groups)
    below = {i: [j for j in range(k) if j != i and leq(j, i)] for i in range(k)}

    def height_of(i: int) -> int:
        if i not in depth:
            depth[i] = 1 + max(height_of(j) for j in below[i]) if below[i] else 0
        return depth[i]

    order = sorted(range(k), key=lambda i: (height_of(i), min(groups[i])))
    groups = [groups[i] for i in order]
    ideals = [ideals[i] for i in order]
    return assemble(groups, rkey, lkey, leq, m)


# --- conversions ----------------------------------------------------------


def table_from_submonoid(s: InverseSubmonoid) -> MulTable:
    """Encode s in canonical element order; table[i, j] = s[i] after s[j]."""
    m = len(s)
    T = np.empty((m, m), dtype=np.int64)
    for i, f in enumerate(s):
        for j, g in enumerate(s):
            h = compose(f, g)
            if h not in s:
                raise ValueError(f"Not closed: {format_cpn(f)} after {format_cpn(g)} is missing")
            T[i, j] = s.index(h)
    return MulTable(
        m=m,
        table=T,
        identity=s.index(identity(s.n)),
        names=tuple(format_cpn(f) for f in s),
    )


def relabel_table(t: MulTable, perm: Sequence[int]) -> MulTable:
    """Rename element a to perm[a]."""
    p = np.asarray(perm, dtype=np.int64)
    if sorted(p.tolist()) != list(range(t.m)):
        raise ValueError("perm must be a permutation of 0..m-1")
    back = np.argsort(p)
    T = p[t.table[back][:, back]]
    names = None
    if t.names is not None:
        names = tuple(t.names[int(b)] for b in back)
    return MulTable(m=t.m, table=T, identity=int(p[t.identity]), names=names)


# --- isomorphism ----------------------------------------------------------


def _element_invariants(t: MulTable) -> List[Tuple[int, ...]]:
    T = t.table
    out = []
    for a in range(t.m):
        seen: Dict[int, int] = {}
        x = a
        steps = 0
        while x not in seen:
            seen[x] = steps
            x = int(T[x, a])
            steps += 1
        index, period = seen[x], steps - seen[x]
        out.append(
            (
                int(T[a, a] == a),
                index,
                period,
                int((T[:, a] == a).sum()),
                int((T[a, :] == a).sum()),
                len(set(T[a, :].tolist())),
                len(set(T[:, a].tolist())),
            )
        )
    return out


def find_table_isomorphism(t1: MulTable, t2: MulTable) -> Optional[Tuple[int, ...]]:
    """A bijection phi with phi(a.b) = phi(a).phi(b), or None.

    Backtracking over invariant-compatible images; every new assignment is
    propagated through products of already assigned elements.
    """
    if t1.m != t2.m:
        return None
    m = t1.m
    A, B = t1.table, t2.table
    inv1, inv2 = _element_invariants(t1), _element_invariants(t2)
    if sorted(inv1) != sorted(inv2):
        return None

    def propagate(phi: List[int], back: List[int], start: List[int]) -> bool:
        queue = list(start)
        while queue:
            a = queue.pop()
            done = [x for x in range(m) if phi[x] != -1]
            for b in done:
                for x, y in ((a, b), (b, a)):
                    c = int(A[x, y])
                    d = int(B[phi[x], phi[y]])
                    if phi[c] == -1:
                        if back[d] != -1 or inv1[c] != inv2[d]:
                            return False
                        phi[c] = d
                        back[d] = c
                        queue.append(c)
                    elif phi[c] != d:
                        return False
        return True

    def search(phi: List[int], back: List[int]) -> Optional[Tuple[int, ...]]:
        free = [a for a in range(m) if phi[a] == -1]
        if not free:
            return tuple(phi)
        a = free[0]
        for d in range(m):
            if back[d] != -1 or inv1[a] != inv2[d]:
                continue
            p2, b2 = list(phi), list(back)
            p2[a], b2[d] = d, a
            if propagate(p2, b2, [a]):
                found = search(p2, b2)
                if found is not None:
                    return found
        return None

    phi = [-1] * m
    back = [-1] * m
    phi[t1.identity] = t2.identity
    back[t2.identity] = t1.identity
    if inv1[t1.identity] != inv2[t2.identity] or not propagate(phi, back, [t1.identity]):
        return None
    return search(phi, back)
