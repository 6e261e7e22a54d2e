"""Partial automorphism monoids: membership, enumeration and submonoid handling."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple

from pautkit.constants import BYTES_PER_ELEMENT, DEFAULT_LIMIT, UNDEFINED
from pautkit.graphs import Matrix, Structure
from pautkit.pool import ordered_map
from pautkit.pperm import (
    GroundSet,
    GroundSetMismatch,
    PartialPerm,
    all_partial_perms,
    canonical_key,
    compose,
    count_partial_perms,
    identity,
    identity_mask,
    invert,
    restrict_mask,
)


class LimitExceeded(RuntimeError):
    """Vertex count is above the soft limit."""

    pass


class NotClosed(ValueError):
    """Element set is not an inverse submonoid."""

    pass


class OracleMismatch(RuntimeError):
    """A validation cross-check disagreed with the fast computation."""

    pass


@dataclass(frozen=True)
class InverseSubmonoid:
    """Canonically ordered set of partial permutations on one ground set.

    Closure under compose and invert is only verified when ``validate`` is set.
    """

    n: int
    elements: Tuple[PartialPerm, ...]
    validate: bool = field(default=False, compare=False, repr=False)
    _index: Dict[PartialPerm, int] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        GroundSet(self.n)
        for f in self.elements:
            if f.n != self.n:
                raise GroundSetMismatch(f"Element on {f.n} points in a monoid on {self.n} points")
        ordered = tuple(sorted(set(self.elements), key=canonical_key))
        object.__setattr__(self, "elements", ordered)
        object.__setattr__(self, "_index", {f: i for i, f in enumerate(ordered)})
        if self.validate:
            problem = self.closure_problem()
            if problem is not None:
                raise NotClosed(problem)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[PartialPerm]:
        return iter(self.elements)

    def __contains__(self, f: object) -> bool:
        return f in self._index

    def __getitem__(self, i: int) -> PartialPerm:
        return self.elements[i]

    def index(self, f: PartialPerm) -> int:
        return self._index[f]

    def idempotents(self) -> List[PartialPerm]:
        return [f for f in self.elements if f.is_idempotent()]

    def of_rank(self, r: int) -> List[PartialPerm]:
        return [f for f in self.elements if f.rank == r]

    def rank_counts(self) -> List[int]:
        counts = [0] * (self.n + 1)
        for f in self.elements:
            counts[f.rank] += 1
        return counts

    def is_full(self) -> bool:
        """Contains the partial identity on every subset."""
        return sum(1 for f in self.elements if f.is_idempotent()) == 1 << self.n

    def closure_problem(self) -> Optional[str]:
        """Describe the first closure failure, or None for an inverse submonoid."""
        if identity(self.n) not in self._index:
            return "identity is missing"
        for f in self.elements:
            if invert(f) not in self._index:
                return f"inverse of {f} is missing"
        for f in self.elements:
            for g in self.elements:
                h = compose(f, g)
                if h not in self._index:
                    return f"product {f} after {g} = {h} is missing"
        return None

    @classmethod
    def generate(cls, n: int, seeds: Iterable[PartialPerm]) -> "InverseSubmonoid":
        """Full inverse submonoid generated by seeds and all partial identities."""
        gens: Set[PartialPerm] = {identity_mask(n, mask) for mask in range(1 << n)}
        for s in seeds:
            gens.add(s)
            gens.add(invert(s))
        elements = set(gens)
        frontier = list(gens)
        gen_list = sorted(gens, key=canonical_key)
        while frontier:
            x = frontier.pop()
            for g in gen_list:
                y = compose(x, g)
                if y not in elements:
                    elements.add(y)
                    frontier.append(y)
        return cls(n, tuple(elements))


def _check_ground(g: Structure, f: PartialPerm) -> None:
    if f.n != g.n:
        raise GroundSetMismatch(f"Map on {f.n} points applied to a structure on {g.n} vertices")


def _preserves(mat: Matrix, f: PartialPerm, sources: List[int]) -> bool:
    img = f.img
    return all(mat[u][v] == mat[img[u]][img[v]] for u in sources for v in sources)


def is_partial_automorphism(g: Structure, f: PartialPerm) -> bool:
    """f is an isomorphism between the subgraphs induced on dom f and ran f."""
    _check_ground(g, f)
    return _preserves(g.matrix, f, f.domain())


def rank2_membership_reduction(g: Structure, f: PartialPerm) -> bool:
    """Membership decided from the 2-element restrictions of f alone."""
    _check_ground(g, f)
    dom = f.domain()
    if len(dom) < 2:
        return is_partial_automorphism(g, f)
    return all(
        is_partial_automorphism(g, restrict_mask(f, (1 << a) | (1 << b)))
        for a, b in combinations(dom, 2)
    )


def _extend(
    mat: Matrix,
    n: int,
    img: List[int],
    used: int,
    x: int,
    total: bool,
    out: List[PartialPerm],
) -> None:
    """Extend img on points x..n-1, keeping every colored adjacency."""
    if x == n:
        out.append(PartialPerm._trusted(n, tuple(img)))
        return
    if not total:
        _extend(mat, n, img, used, x + 1, total, out)
    row = mat[x]
    for y in range(n):
        if used >> y & 1 or mat[y][y] != row[x]:
            continue
        ok = True
        for u in range(x):
            fu = img[u]
            if fu != UNDEFINED and (mat[u][x] != mat[fu][y] or row[u] != mat[y][fu]):
                ok = False
                break
        if not ok:
            continue
        img[x] = y
        _extend(mat, n, img, used | (1 << y), x + 1, total, out)
        img[x] = UNDEFINED


def _enumerate_from(mat: Matrix, n: int, p: int, q: int) -> List[PartialPerm]:
    """All members whose smallest domain point is p, mapped to q."""
    out: List[PartialPerm] = []
    if mat[p][p] != mat[q][q]:
        return out
    img = [UNDEFINED] * n
    img[p] = q
    _extend(mat, n, img, 1 << q, p + 1, False, out)
    return out


def check_limit(g: Structure, limit: int) -> None:
    """Refuse structures above the soft vertex cap."""
    GroundSet(g.n)
    if g.n > limit:
        raise LimitExceeded(
            f"{g.n} vertices exceeds the limit of {limit}; raise it with --limit {g.n}"
        )


def enumerate_paut(
    g: Structure,
    limit: int = DEFAULT_LIMIT,
    jobs: int = 1,
    verbose: bool = False,
    validate: bool = False,
) -> InverseSubmonoid:
    """All partial automorphisms of g, by depth-first extension.

    Work is split by the first mapped pair (p, q); the merged result is in
    canonical order whatever the number of workers.
    """
    check_limit(g, limit)
    n = g.n
    mat = g.matrix
    if verbose:
        bound = count_partial_perms(n)
        mib = bound * BYTES_PER_ELEMENT / (1 << 20)
        _err(f"[ENUM] {n} vertices: at most {bound} elements, ~{mib:.1f} MiB")

    tasks = [(p, q) for p in range(n) for q in range(n)]
    chunks = ordered_map(lambda pq: _enumerate_from(mat, n, pq[0], pq[1]), tasks, jobs)
    elements = [PartialPerm._trusted(n, (UNDEFINED,) * n)]
    for chunk in chunks:
        elements.extend(chunk)

    result = InverseSubmonoid(n, tuple(elements))
    if verbose:
        _err(f"[ENUM] {len(result)} partial automorphisms")
    if validate and n <= 4:
        oracle = enumerate_paut_oracle(g)
        if oracle.elements != result.elements:
            raise OracleMismatch("Backtracking enumeration disagrees with the filter oracle")
    return result


def enumerate_paut_oracle(g: Structure) -> InverseSubmonoid:
    """Filter all of I_X through is_partial_automorphism."""
    n = g.n
    return InverseSubmonoid(
        n, tuple(f for f in all_partial_perms(n) if is_partial_automorphism(g, f))
    )


def aut_group(g: Structure, limit: int = DEFAULT_LIMIT) -> List[PartialPerm]:
    """Automorphisms of g as rank-n partial permutations, canonical order."""
    check_limit(g, limit)
    out: List[PartialPerm] = []
    _extend(g.matrix, g.n, [UNDEFINED] * g.n, 0, 0, True, out)
    return sorted(out, key=canonical_key)


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)
