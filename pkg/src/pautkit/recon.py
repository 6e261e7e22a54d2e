"""Decks, pseudo-similar vertices and corpus search harnesses.

Deck entries are canonical forms of vertex-deleted subgraphs. PAut deck
entries are realized inside PAut(g) as the maps that avoid the deleted
vertex. Two PAut deck entries are compared as monoids through their cards:
PAut(a) and PAut(b) are isomorphic exactly when a is isomorphic to b or to
the complement of b.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Dict, Iterable, Iterator, List, Optional, Tuple, Union

from pautkit.abstract import find_table_isomorphism, table_from_submonoid
from pautkit.characterize import paut_isomorphic
from pautkit.constants import DEFAULT_LIMIT, MAX_GENERATE, UNDEFINED
from pautkit.graph6 import format_graph6, read_graph6_lines
from pautkit.graphs import (
    Graph,
    canonical_form,
    canonical_key,
    complement,
    graph_classes,
    induced,
    is_isomorphic,
    orbits,
)
from pautkit.paut import InverseSubmonoid, OracleMismatch, check_limit, enumerate_paut
from pautkit.pool import ordered_map
from pautkit.pperm import relabel

DECK_MODES = ("iso", "iso-or-complement")
PREDICATES = ("pseudosim", "mutual", "deckcex")

Key = Tuple[Any, ...]


@dataclass(frozen=True)
class DeckEntry:
    vertex: int
    card: Graph  # canonical form of g - vertex


@dataclass(frozen=True)
class Deck:
    """One card per vertex, listed by deleted vertex."""

    n: int
    entries: Tuple[DeckEntry, ...]

    def keys(self, mode: str = "iso") -> List[Key]:
        """Sorted card keys; the multiset this deck stands for under ``mode``."""
        return sorted(card_key(e.card, mode) for e in self.entries)


@dataclass(frozen=True)
class PautDeckEntry:
    vertex: int
    card: Graph
    monoid: InverseSubmonoid  # members of PAut(g) avoiding vertex, on g's points


@dataclass(frozen=True)
class PautDeck:
    n: int
    entries: Tuple[PautDeckEntry, ...]

    def keys(self) -> List[Key]:
        """Sorted monoid-isomorphism keys of the entries."""
        return sorted(card_key(e.card, "iso-or-complement") for e in self.entries)


def _check_mode(mode: str) -> None:
    if mode not in DECK_MODES:
        raise ValueError(f"Unknown deck mode {mode!r}. Choose one of: {', '.join(DECK_MODES)}")


def card_key(card: Graph, mode: str = "iso") -> Key:
    """Isomorphism key of a card, or of its class up to complementation."""
    _check_mode(mode)
    key = canonical_key(card)
    if mode == "iso":
        return key
    return min(key, canonical_key(complement(card)))


def _others(n: int, v: int) -> List[int]:
    return [u for u in range(n) if u != v]


def deck(g: Graph, limit: Optional[int] = None) -> Deck:
    """One canonical card per vertex; ``limit`` applies the soft vertex cap."""
    if limit is not None and g.n:
        check_limit(g, limit)
    entries = tuple(
        DeckEntry(v, canonical_form(induced(g, _others(g.n, v))))  # type: ignore[arg-type]
        for v in range(g.n)
    )
    return Deck(g.n, entries)


def paut_deck(
    g: Graph,
    paut: Optional[InverseSubmonoid] = None,
    limit: int = DEFAULT_LIMIT,
    validate: bool = False,
) -> PautDeck:
    """Restrict PAut(g) to the maps that avoid each vertex in turn.

    With ``validate`` every entry is relabeled onto n - 1 points and compared
    with the PAut of the matching vertex-deleted subgraph.
    """
    s = paut if paut is not None else enumerate_paut(g, limit=limit)
    entries = []
    for v in range(g.n):
        bit = 1 << v
        members = tuple(f for f in s if not (f.dom | f.ran) & bit)
        sub = InverseSubmonoid(g.n, members)
        rest = _others(g.n, v)
        card = induced(g, rest)
        if validate and rest:
            mapping = [UNDEFINED] * g.n
            for new, old in enumerate(rest):
                mapping[old] = new
            moved = InverseSubmonoid(g.n - 1, tuple(relabel(f, mapping, g.n - 1) for f in sub))
            if moved.elements != enumerate_paut(card, limit=limit).elements:
                raise OracleMismatch(f"PAut deck entry for vertex {v + 1} differs from PAut(g - v)")
        entries.append(PautDeckEntry(v, canonical_form(card), sub))  # type: ignore[arg-type]
    return PautDeck(g.n, tuple(entries))


def deck_equal(g1: Graph, g2: Graph, mode: str = "iso") -> bool:
    """Decks agree as multisets of cards, up to isomorphism or also complementation."""
    _check_mode(mode)
    if g1.n != g2.n:
        return False
    return deck(g1).keys(mode) == deck(g2).keys(mode)


def deck_equal_by_matching(g1: Graph, g2: Graph, mode: str = "iso") -> bool:
    """deck_equal by pairing cards through is_isomorphic instead of canonical keys."""
    _check_mode(mode)
    if g1.n != g2.n:
        return False
    pending = [e.card for e in deck(g2).entries]
    for e in deck(g1).entries:
        options = [e.card] if mode == "iso" else [e.card, complement(e.card)]
        for pos, card in enumerate(pending):
            if any(is_isomorphic(c, card) is not None for c in options):
                del pending[pos]
                break
        else:
            return False
    return True


def paut_deck_equal(g1: Graph, g2: Graph) -> bool:
    """Deck(PAut(g1)) and Deck(PAut(g2)) agree as multisets of monoids up to isomorphism."""
    return deck_equal(g1, g2, "iso-or-complement")


def paut_deck_equal_by_tables(g1: Graph, g2: Graph, limit: int = DEFAULT_LIMIT) -> bool:
    """Same question answered by multiplication-table isomorphism search."""
    if g1.n != g2.n:
        return False
    if g1.n <= 1:
        return True
    tables = [
        [table_from_submonoid(enumerate_paut(e.card, limit=limit)) for e in deck(g).entries]
        for g in (g1, g2)
    ]
    pending = list(tables[1])
    for t in tables[0]:
        for pos, u in enumerate(pending):
            if t.m == u.m and find_table_isomorphism(t, u) is not None:
                del pending[pos]
                break
        else:
            return False
    return not pending


def pseudo_similar_pairs(g: Graph) -> List[Tuple[int, int]]:
    """Vertex pairs with isomorphic cards that no automorphism swaps."""
    keys = [card_key(e.card) for e in deck(g).entries]
    orbit_of: Dict[int, int] = {}
    for i, orbit in enumerate(orbits(g)):
        for v in orbit:
            orbit_of[v] = i
    return [
        (u, v)
        for u, v in combinations(range(g.n), 2)
        if keys[u] == keys[v] and orbit_of[u] != orbit_of[v]
    ]


def mutually_pseudo_similar(g: Graph, k: int) -> List[Tuple[int, ...]]:
    """All k-sets of vertices that are pairwise pseudo-similar."""
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    pairs = set(pseudo_similar_pairs(g))
    involved = sorted({v for p in pairs for v in p})
    return [
        combo
        for combo in combinations(involved, k)
        if all(p in pairs for p in combinations(combo, 2))
    ]


def class_representatives(n: int) -> List[Graph]:
    """One graph per class up to isomorphism and complementation."""
    reps = []
    for g in graph_classes(n):
        if canonical_key(g) <= canonical_key(complement(g)):
            reps.append(g)
    return reps


def find_deck_counterexamples(
    n: int,
    validate: bool = False,
    limit: int = DEFAULT_LIMIT,
) -> List[Tuple[Graph, Graph]]:
    """Pairs with equal PAut decks whose PAut monoids are not isomorphic.

    Graphs range over classes up to isomorphism and complementation, so
    every returned pair already fails paut_isomorphic. With ``validate`` and
    n <= 4, each pair is re-checked by table isomorphism of the deck entries.
    """
    if n > MAX_GENERATE:
        raise ValueError(f"Internal generation stops at {MAX_GENERATE} vertices, got {n}")
    reps = class_representatives(n)
    signatures = [deck(g).keys("iso-or-complement") for g in reps]
    found = []
    for i, j in combinations(range(len(reps)), 2):
        if signatures[i] != signatures[j]:
            continue
        g1, g2 = reps[i], reps[j]
        if paut_isomorphic(g1, g2):
            raise OracleMismatch("Two class representatives have isomorphic PAut monoids")
        if validate and n <= 4 and not paut_deck_equal_by_tables(g1, g2, limit):
            raise OracleMismatch("Deck comparison by cards disagrees with table isomorphism")
        found.append((g1, g2))
    return found


# --- corpus search --------------------------------------------------------


def generated_corpus(n: int) -> Iterator[bytes]:
    """graph6 lines for every isomorphism class on n vertices."""
    if not 0 <= n <= MAX_GENERATE:
        raise ValueError(f"--generate accepts 0..{MAX_GENERATE} vertices, got {n}")
    for g in graph_classes(n):
        yield format_graph6(g)


def _one_based(items: Iterable[Tuple[int, ...]]) -> List[List[int]]:
    return [[v + 1 for v in item] for item in items]


def _deck_signature(g: Graph) -> Tuple[Key, List[Key]]:
    cls = min(canonical_key(g), canonical_key(complement(g)))
    return cls, deck(g).keys("iso-or-complement")


def search_corpus(
    lines: Iterable[Union[bytes, str]],
    predicate: str,
    jobs: int = 1,
    k: int = 3,
    verbose: bool = False,
    limit: int = DEFAULT_LIMIT,
    validate: bool = False,
) -> List[Dict[str, Any]]:
    """Run a named predicate over a graph6 stream.

    Returns match records {seq, graph6, witness} in input order. ``pseudosim``
    reports pseudo-similar pairs, ``mutual`` reports pairwise pseudo-similar
    k-sets and ``deckcex`` reports earlier graphs with an equal PAut deck but
    a non-isomorphic PAut monoid. With ``validate`` every match is re-checked
    by direct isomorphism tests before it is reported.
    """
    if predicate not in PREDICATES:
        raise ValueError(
            f"Unknown predicate {predicate!r}. Choose one of: {', '.join(PREDICATES)}"
        )
    corpus = list(read_graph6_lines(lines))
    for _, _, g in corpus:
        if g.n:
            check_limit(g, limit)
    if verbose:
        _err(f"[SEARCH] {predicate} over {len(corpus)} graph(s) with {jobs} job(s)")

    records: List[Dict[str, Any]] = []
    if predicate == "deckcex":
        sigs = ordered_map(lambda item: _deck_signature(item[2]), corpus, jobs)
        # Sequential pass over a cache of earlier partners keeps output order fixed
        cache: Dict[Tuple[int, Tuple[Key, ...]], List[Tuple[int, Key]]] = {}
        for (seq, raw, g), (cls, sig) in zip(corpus, sigs):
            bucket = cache.setdefault((g.n, tuple(sig)), [])
            partners = [p for p, other in bucket if other != cls]
            if validate:
                for p in partners:
                    _confirm_deckcex(g, corpus[p][2])
            if partners:
                records.append({"seq": seq, "graph6": raw.decode(), "witness": partners})
            bucket.append((seq, cls))
    else:
        def check(g: Graph) -> List[Tuple[int, ...]]:
            if predicate == "pseudosim":
                found: List[Tuple[int, ...]] = list(pseudo_similar_pairs(g))
            else:
                found = list(mutually_pseudo_similar(g, k))
            if validate:
                for combo in found:
                    for u, v in combinations(combo, 2):
                        _confirm_pseudo_similar(g, u, v)
            return found

        results = ordered_map(lambda item: check(item[2]), corpus, jobs)
        for (seq, raw, _), witness in zip(corpus, results):
            if witness:
                records.append({"seq": seq, "graph6": raw.decode(), "witness": _one_based(witness)})

    if verbose:
        _err(f"[SEARCH] {len(records)} match(es)")
    return records


def _confirm_pseudo_similar(g: Graph, u: int, v: int) -> None:
    cards = [induced(g, _others(g.n, w)) for w in (u, v)]
    if is_isomorphic(cards[0], cards[1]) is None or is_isomorphic(g, g, fixed={u: v}) is not None:
        raise OracleMismatch(f"Vertices {u + 1} and {v + 1} are not pseudo-similar")


def _confirm_deckcex(g: Graph, partner: Graph) -> None:
    if not deck_equal_by_matching(g, partner, "iso-or-complement"):
        raise OracleMismatch("Reported PAut decks differ under direct card matching")
    if paut_isomorphic(g, partner):
        raise OracleMismatch("Reported pair has isomorphic PAut monoids")


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)
