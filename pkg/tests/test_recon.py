"""Tests for recon module."""

from __future__ import annotations

from pathlib import Path

import pytest

from pautkit.characterize import paut_isomorphic
from pautkit.graph6 import parse_graph6
from pautkit.graphs import (
    Graph,
    canonical_key,
    complement,
    graph_classes,
    induced,
    is_isomorphic,
    orbits,
)
from pautkit.paut import InverseSubmonoid, LimitExceeded, enumerate_paut
from pautkit.recon import (
    card_key,
    class_representatives,
    deck,
    deck_equal,
    deck_equal_by_matching,
    find_deck_counterexamples,
    generated_corpus,
    mutually_pseudo_similar,
    paut_deck,
    paut_deck_equal,
    paut_deck_equal_by_tables,
    pseudo_similar_pairs,
    search_corpus,
)

P3 = Graph.from_edges(3, [(0, 1), (1, 2)])
# Eight vertices; 5 and 6 (1-based) are pseudo-similar
PSEUDO_SIMILAR_G6 = "G?LRKo"


def _class(g: Graph) -> tuple:
    return min(canonical_key(g), canonical_key(complement(g)))


class TestDeck:
    def test_path_cards(self) -> None:
        d = deck(P3)
        assert [e.vertex for e in d.entries] == [0, 1, 2]
        assert sorted(len(e.card.edges) for e in d.entries) == [0, 1, 1]

    def test_complement_modes(self) -> None:
        other = complement(P3)
        assert not deck_equal(P3, other)
        assert deck_equal(P3, other, "iso-or-complement")
        assert paut_deck_equal(P3, other)

    def test_different_sizes(self, gamma0: Graph) -> None:
        assert not deck_equal(P3, gamma0)

    def test_unknown_mode(self) -> None:
        with pytest.raises(ValueError, match="Unknown deck mode"):
            card_key(P3, "homeo")

    def test_card_key_complement_mode(self) -> None:
        assert card_key(P3, "iso-or-complement") == card_key(complement(P3), "iso-or-complement")


class TestPautDeck:
    def test_entries_avoid_vertex(self, gamma0: Graph, gamma0_paut: InverseSubmonoid) -> None:
        pd = paut_deck(gamma0, gamma0_paut, validate=True)
        assert len(pd.entries) == 4
        for e in pd.entries:
            bit = 1 << e.vertex
            assert all(not (f.dom | f.ran) & bit for f in e.monoid)
        assert len(pd.entries[3].monoid) == len(enumerate_paut(P3)) == 22
        assert max(f.rank for f in pd.entries[3].monoid) == 3

    def test_keys_follow_cards(self, gamma0: Graph) -> None:
        pd = paut_deck(gamma0)
        assert pd.keys() == deck(gamma0).keys("iso-or-complement")

    def test_tables_agree_with_cards(self, gamma0: Graph) -> None:
        other = complement(P3)
        complete4 = Graph.from_edges(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
        assert paut_deck_equal_by_tables(P3, other)
        assert not paut_deck_equal_by_tables(gamma0, complete4)
        assert paut_deck_equal_by_tables(Graph.from_edges(1, []), Graph.from_edges(1, []))


class TestPseudoSimilar:
    def test_none_in_gamma0(self, gamma0: Graph) -> None:
        assert pseudo_similar_pairs(gamma0) == []

    def test_known_pair_on_eight_vertices(self) -> None:
        g = parse_graph6(PSEUDO_SIMILAR_G6)
        pairs = pseudo_similar_pairs(g)
        assert (4, 5) in pairs
        orbit_of = {v: i for i, orbit in enumerate(orbits(g)) for v in orbit}
        assert orbit_of[4] != orbit_of[5]
        assert deck(g).entries[4].card.n == 7
        assert is_isomorphic(deck(g).entries[4].card, deck(g).entries[5].card) is not None
        assert mutually_pseudo_similar(g, 2) == pairs

    def test_pairs_have_isomorphic_cards_and_no_automorphism(self) -> None:
        for g in graph_classes(6):
            pairs = pseudo_similar_pairs(g)
            assert mutually_pseudo_similar(g, 2) == pairs
            for u, v in pairs:
                rest_u = [x for x in range(g.n) if x != u]
                rest_v = [x for x in range(g.n) if x != v]
                assert is_isomorphic(induced(g, rest_u), induced(g, rest_v)) is not None
                assert is_isomorphic(g, g, fixed={u: v}) is None

    def test_k_must_be_at_least_two(self, gamma0: Graph) -> None:
        with pytest.raises(ValueError, match="at least 2"):
            mutually_pseudo_similar(gamma0, 1)


class TestCounterexamples:
    def test_class_representatives(self) -> None:
        assert len(class_representatives(4)) == 6

    @pytest.mark.parametrize("n, count", [(2, 0), (3, 1)])
    def test_small_counts(self, n: int, count: int) -> None:
        assert len(find_deck_counterexamples(n)) == count

    def test_four_vertices(self) -> None:
        found = find_deck_counterexamples(4, validate=True)
        assert len(found) == 2
        p4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        two_k2 = Graph.from_edges(4, [(0, 1), (2, 3)])
        pairs = [{_class(a), _class(b)} for a, b in found]
        assert {_class(p4), _class(two_k2)} in pairs
        for a, b in found:
            assert paut_deck_equal(a, b)
            assert not paut_isomorphic(a, b)

    def test_generation_cap(self) -> None:
        with pytest.raises(ValueError, match="stops at 7"):
            find_deck_counterexamples(8)


class TestSearchCorpus:
    def test_generated_corpus(self) -> None:
        assert len(list(generated_corpus(3))) == 4
        with pytest.raises(ValueError, match="--generate"):
            list(generated_corpus(8))

    def test_pseudosim_witness_is_one_based(self) -> None:
        records = search_corpus([b"A_", PSEUDO_SIMILAR_G6.encode()], "pseudosim")
        assert len(records) == 1
        assert records[0]["seq"] == 1
        assert records[0]["graph6"] == PSEUDO_SIMILAR_G6
        assert [5, 6] in records[0]["witness"]

    def test_deckcex_partners_come_first(self, capsys: pytest.CaptureFixture) -> None:
        records = search_corpus(generated_corpus(4), "deckcex", verbose=True)
        assert len(records) >= 2
        for rec in records:
            assert rec["witness"]
            assert all(p < rec["seq"] for p in rec["witness"])
        err = capsys.readouterr().err
        assert "[SEARCH] deckcex over 11 graph(s) with 1 job(s)" in err

    def test_parallel_matches_serial(self, corpus20: Path) -> None:
        lines = corpus20.read_bytes().splitlines()
        serial = search_corpus(lines, "pseudosim")
        assert search_corpus(lines, "pseudosim", jobs=3) == serial
        assert [r["seq"] for r in serial] == sorted(r["seq"] for r in serial)

    def test_mutual_witnesses_are_one_based(self) -> None:
        records = search_corpus(generated_corpus(6), "mutual", k=2)
        for rec in records:
            for combo in rec["witness"]:
                assert len(combo) == 2
                assert all(1 <= v <= 6 for v in combo)

    def test_unknown_predicate(self) -> None:
        with pytest.raises(ValueError, match="Unknown predicate"):
            search_corpus([b"A_"], "isomorphic")

class TestDeckOracle:
    def test_matching_agrees_with_keys(self) -> None:
        graphs = graph_classes(4)
        for g1 in graphs:
            for g2 in graphs:
                for mode in ("iso", "iso-or-complement"):
                    assert deck_equal_by_matching(g1, g2, mode) == deck_equal(g1, g2, mode)

    def test_deck_limit_is_opt_in(self) -> None:
        assert len(deck(P3).entries) == 3
        with pytest.raises(LimitExceeded, match="--limit 3"):
            deck(P3, limit=2)


class TestSearchValidation:
    def test_validated_search_matches_plain(self) -> None:
        lines = list(generated_corpus(4))
        assert search_corpus(lines, "deckcex", validate=True) == search_corpus(lines, "deckcex")
        pseudo = [PSEUDO_SIMILAR_G6]
        assert search_corpus(pseudo, "pseudosim", validate=True) == search_corpus(
            pseudo, "pseudosim"
        )

    def test_limit_applies_to_corpus(self) -> None:
        with pytest.raises(LimitExceeded, match="--limit 8"):
            search_corpus([PSEUDO_SIMILAR_G6], "pseudosim", limit=7)
