"""Partial permutations of a finite ground set.

A partial permutation is stored as a tuple ``img`` of length n where
``img[x]`` is the image of x, or UNDEFINED when x is outside the domain.
Domain and range are kept alongside as bitsets. Points are 0-based inside
the package; cycle-path notation is read and written 1-based.

Composition follows the usual right-to-left convention: ``compose(g, f)``
applies f first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb, factorial
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from pautkit.constants import MAX_POINTS, UNDEFINED


class GroundSetMismatch(ValueError):
    """Operands live on ground sets of different sizes."""

    pass


class CpnSyntaxError(ValueError):
    """Text is not valid cycle-path notation for the given ground set."""

    pass


@dataclass(frozen=True)
class GroundSet:
    """The point set 0..n-1."""

    n: int

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_POINTS:
            raise ValueError(f"Ground set size must be in 1..{MAX_POINTS}, got {self.n}")


@dataclass(frozen=True)
class PartialPerm:
    """An injective partial map on 0..n-1."""

    n: int
    img: Tuple[int, ...]
    dom: int = field(init=False, repr=False, compare=False)
    ran: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        GroundSet(self.n)
        if len(self.img) != self.n:
            raise ValueError(f"Image tuple has length {len(self.img)}, expected {self.n}")
        dom = 0
        ran = 0
        for x, y in enumerate(self.img):
            if y == UNDEFINED:
                continue
            if not 0 <= y < self.n:
                raise ValueError(f"Image {y} of point {x} is outside 0..{self.n - 1}")
            if ran >> y & 1:
                raise ValueError(f"Point {y} is the image of two points")
            dom |= 1 << x
            ran |= 1 << y
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "ran", ran)

    @classmethod
    def _trusted(cls, n: int, img: Tuple[int, ...]) -> "PartialPerm":
        """Build without validation; img must already be injective."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "img", img)
        dom = 0
        ran = 0
        for x, y in enumerate(img):
            if y != UNDEFINED:
                dom |= 1 << x
                ran |= 1 << y
        object.__setattr__(obj, "dom", dom)
        object.__setattr__(obj, "ran", ran)
        return obj

    @property
    def ground(self) -> GroundSet:
        return GroundSet(self.n)

    @property
    def rank(self) -> int:
        return bin(self.dom).count("1")

    def __call__(self, x: int) -> int:
        return self.img[x]

    def pairs(self) -> List[Tuple[int, int]]:
        """(source, target) pairs in ascending source order."""
        return [(x, y) for x, y in enumerate(self.img) if y != UNDEFINED]

    def domain(self) -> List[int]:
        return points_of(self.dom)

    def range(self) -> List[int]:
        return points_of(self.ran)

    def is_idempotent(self) -> bool:
        return all(y == UNDEFINED or y == x for x, y in enumerate(self.img))

    def __str__(self) -> str:
        return format_cpn(self)


def points_of(mask: int) -> List[int]:
    """Ascending list of the points set in a bitset."""
    out = []
    x = 0
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return out


def mask_of(points: Iterable[int]) -> int:
    mask = 0
    for x in points:
        mask |= 1 << x
    return mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


# --- constructors ---------------------------------------------------------


def from_pairs(n: int, pairs: Iterable[Tuple[int, int]]) -> PartialPerm:
    """Build from (source, target) pairs, 0-based."""
    img = [UNDEFINED] * n
    for x, y in pairs:
        if not 0 <= x < n:
            raise ValueError(f"Source {x} is outside 0..{n - 1}")
        if img[x] != UNDEFINED and img[x] != y:
            raise ValueError(f"Point {x} is mapped twice")
        img[x] = y
    return PartialPerm(n, tuple(img))


def identity(n: int, points: Optional[Iterable[int]] = None) -> PartialPerm:
    """The partial identity on ``points`` (all of 0..n-1 when omitted)."""
    if points is None:
        return PartialPerm(n, tuple(range(n)))
    keep = mask_of(points)
    return PartialPerm(n, tuple(x if keep >> x & 1 else UNDEFINED for x in range(n)))


def identity_mask(n: int, mask: int) -> PartialPerm:
    return PartialPerm._trusted(n, tuple(x if mask >> x & 1 else UNDEFINED for x in range(n)))


def empty(n: int) -> PartialPerm:
    return PartialPerm(n, (UNDEFINED,) * n)


def all_partial_perms(n: int) -> Iterator[PartialPerm]:
    """Every partial permutation on n points, in canonical order."""
    GroundSet(n)
    for k in range(n + 1):
        domains = sorted(mask_of(c) for c in combinations(range(n), k))
        for dom in domains:
            sources = points_of(dom)
            for images in permutations(range(n), k):
                img = [UNDEFINED] * n
                for x, y in zip(sources, images):
                    img[x] = y
                yield PartialPerm._trusted(n, tuple(img))


def count_partial_perms(n: int) -> int:
    """Size of the symmetric inverse monoid on n points."""
    return sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))


# --- ordering -------------------------------------------------------------


def canonical_key(f: PartialPerm) -> Tuple[int, int, Tuple[int, ...]]:
    """Sort key: (rank, dom bitset, images in ascending source order)."""
    return (f.rank, f.dom, tuple(y for y in f.img if y != UNDEFINED))


def moved(f: PartialPerm) -> int:
    """Bitset of domain points not fixed by f."""
    mask = 0
    for x, y in enumerate(f.img):
        if y != UNDEFINED and y != x:
            mask |= 1 << x
    return mask


def witness_key(f: PartialPerm) -> Tuple[int, int, int, Tuple[int, ...]]:
    """Order used to pick the reported witness among failing elements."""
    return (f.rank, f.dom, moved(f), tuple(y for y in f.img if y != UNDEFINED))


# --- algebra --------------------------------------------------------------


def _same_ground(f: PartialPerm, g: PartialPerm) -> None:
    if f.n != g.n:
        raise GroundSetMismatch(f"Ground sets differ: {f.n} points vs {g.n} points")


def compose(g: PartialPerm, f: PartialPerm) -> PartialPerm:
    """g after f, defined on f^-1(ran f & dom g)."""
    _same_ground(g, f)
    gi = g.img
    return PartialPerm._trusted(
        f.n, tuple(UNDEFINED if y == UNDEFINED else gi[y] for y in f.img)
    )


def invert(f: PartialPerm) -> PartialPerm:
    img = [UNDEFINED] * f.n
    for x, y in enumerate(f.img):
        if y != UNDEFINED:
            img[y] = x
    return PartialPerm._trusted(f.n, tuple(img))


def restrict_mask(f: PartialPerm, mask: int) -> PartialPerm:
    return PartialPerm._trusted(
        f.n, tuple(y if mask >> x & 1 else UNDEFINED for x, y in enumerate(f.img))
    )


def restrict(f: PartialPerm, points: Iterable[int]) -> PartialPerm:
    """f restricted to dom f & points."""
    return restrict_mask(f, mask_of(points))


def leq(f: PartialPerm, g: PartialPerm) -> bool:
    """Natural partial order; for partial permutations this is restriction."""
    _same_ground(f, g)
    return f.dom & ~g.dom == 0 and restrict_mask(g, f.dom) == f


def compatible(f: PartialPerm, g: PartialPerm) -> bool:
    """True when f g^-1 and f^-1 g are both partial identities."""
    _same_ground(f, g)
    return compose(f, invert(g)).is_idempotent() and compose(invert(f), g).is_idempotent()


def join(f: PartialPerm, g: PartialPerm) -> Optional[PartialPerm]:
    """Union of f and g when compatible, else None."""
    if not compatible(f, g):
        return None
    img = tuple(a if a != UNDEFINED else b for a, b in zip(f.img, g.img))
    return PartialPerm._trusted(f.n, img)


def join_all(fs: Iterable[PartialPerm], n: Optional[int] = None) -> Optional[PartialPerm]:
    """Join of a set of pairwise compatible maps, else None.

    The join of no maps is the empty map, which needs ``n``.
    """
    acc: Optional[PartialPerm] = None
    for f in fs:
        if acc is None:
            acc = f
            continue
        acc = join(acc, f)
        if acc is None:
            return None
    if acc is None:
        if n is None:
            raise ValueError("join_all of an empty collection needs the ground set size")
        return empty(n)
    return acc


def relabel(f: PartialPerm, mapping: Sequence[int], n_new: int) -> PartialPerm:
    """Transport f along an injective point relabelling old -> mapping[old]."""
    img = [UNDEFINED] * n_new
    for x, y in f.pairs():
        img[mapping[x]] = mapping[y]
    return PartialPerm(n_new, tuple(img))


# --- cycle-path decomposition ---------------------------------------------


@dataclass(frozen=True)
class CyclePathDecomposition:
    """Cycles and paths of a partial permutation, in written order.

    A written sequence (x_k ... x_1) or [x_k ... x_1) maps x_i to x_{i+1};
    for cycles x_k returns to x_1, for paths x_k is outside the domain.
    Points are 0-based.
    """

    cycles: Tuple[Tuple[int, ...], ...]
    paths: Tuple[Tuple[int, ...], ...]

    def members(self) -> List[Tuple[str, Tuple[int, ...]]]:
        """All members tagged "cycle" or "path", sorted by smallest point."""
        tagged = [("cycle", c) for c in self.cycles] + [("path", p) for p in self.paths]
        return sorted(tagged, key=lambda m: min(m[1]))

    def as_maps(self, n: int) -> List[PartialPerm]:
        """Each member as a partial permutation of its own."""
        out = []
        for kind, seq in self.members():
            pairs = [(seq[i], seq[i - 1]) for i in range(1, len(seq))]
            if kind == "cycle":
                pairs.append((seq[0], seq[-1]))
            out.append(from_pairs(n, pairs))
        return out


def decompose(f: PartialPerm) -> CyclePathDecomposition:
    img = f.img
    pre = invert(f).img
    seen = 0
    cycles: List[Tuple[int, ...]] = []
    paths: List[Tuple[int, ...]] = []

    # Paths start at domain points with no preimage
    for x in range(f.n):
        if img[x] == UNDEFINED or pre[x] != UNDEFINED:
            continue
        chain = [x]
        y = img[x]
        while y != UNDEFINED:
            chain.append(y)
            y = img[y]
        for p in chain:
            seen |= 1 << p
        paths.append(tuple(reversed(chain)))

    # Whatever is left in the domain lies on cycles; start each at its smallest point
    for x in range(f.n):
        if img[x] == UNDEFINED or seen >> x & 1:
            continue
        chain = [x]
        y = img[x]
        while y != x:
            chain.append(y)
            y = img[y]
        for p in chain:
            seen |= 1 << p
        cycles.append(tuple(reversed(chain)))

    cycles.sort(key=min)
    paths.sort(key=min)
    return CyclePathDecomposition(cycles=tuple(cycles), paths=tuple(paths))


def format_cpn(f: PartialPerm) -> str:
    """Canonical cycle-path notation, 1-based, members joined by '|'."""
    members = decompose(f).members()
    if not members:
        return "()"
    terms = []
    for kind, seq in members:
        body = " ".join(str(x + 1) for x in seq)
        terms.append(f"({body})" if kind == "cycle" else f"[{body})")
    return "|".join(terms)


_TERM = re.compile(r"^(?P<open>[(\[])(?P<body>[^()\[\]]*)\)$")


def parse_cpn(text: str, n: int) -> PartialPerm:
    """Parse cycle-path notation on n points.

    Terms are joined by '|' (or '∨'). A term may overlap another as long as
    the two are compatible. A path whose first and last labels agree is read
    as a cycle.
    """
    GroundSet(n)
    stripped = text.strip()
    if not stripped:
        raise CpnSyntaxError("Empty cycle-path expression")

    pieces = [t.strip() for t in re.split(r"[|∨]", stripped)]
    maps: List[PartialPerm] = []
    for term in pieces:
        maps.append(_parse_term(term, n, text))

    result = join_all(maps, n)
    if result is None:
        raise CpnSyntaxError(f"Terms of {text!r} are not compatible")
    return result


def _parse_term(term: str, n: int, text: str) -> PartialPerm:
    match = _TERM.match(term)
    if match is None:
        raise CpnSyntaxError(f"Malformed term {term!r} in {text!r}")

    tokens = match.group("body").split()
    if not tokens:
        if match.group("open") == "(":
            return empty(n)
        raise CpnSyntaxError(f"Empty path {term!r} in {text!r}")

    labels = []
    for tok in tokens:
        if not tok.isdigit():
            raise CpnSyntaxError(f"Label {tok!r} in {text!r} is not a positive integer")
        value = int(tok)
        if not 1 <= value <= n:
            raise CpnSyntaxError(f"Label {value} in {text!r} is outside 1..{n}")
        labels.append(value - 1)

    kind = "cycle" if match.group("open") == "(" else "path"
    if kind == "path":
        if len(labels) < 2:
            raise CpnSyntaxError(f"Path {term!r} needs at least two labels")
        if labels[0] == labels[-1]:
            kind = "cycle"
            labels = labels[1:]

    if len(set(labels)) != len(labels):
        raise CpnSyntaxError(f"Repeated label in {term!r}")

    pairs = [(labels[i], labels[i - 1]) for i in range(1, len(labels))]
    if kind == "cycle":
        pairs.append((labels[0], labels[-1]))
    return from_pairs(n, pairs)
