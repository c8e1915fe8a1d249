from fractions import Fraction

import pytest

from twoec.cover import (CanonicalCover, canonical_violations, canonicalize,
                         cost, cover_cost, credits, enumerate_guesses,
                         initial_cover, is_tf2ec)
from twoec.graph import Graph, components, is_2ec
from twoec.oracle import min_tf2ec

from conftest import gnp_2ec, random_2ec_graph


def cycle(n, offset=0):
    return [(offset + i, offset + (i + 1) % n) for i in range(n)]


class TestGuesses:
    def test_path_eight(self):
        g = Graph.from_edge_list(8, [(i, i + 1) for i in range(7)])
        guesses = list(enumerate_guesses(g))
        assert guesses == [frozenset(range(7))]

    def test_c8(self):
        g = Graph.from_edge_list(8, cycle(8))
        guesses = list(enumerate_guesses(g))
        assert len(guesses) == 8
        assert all(len(f) == 7 for f in guesses)
        assert len(set(guesses)) == 8

    def test_star(self):
        g = Graph.from_edge_list(9, [(0, i) for i in range(1, 9)])
        guesses = list(enumerate_guesses(g))
        assert len(guesses) == 8

    def test_valid_trees_no_duplicates(self, rng):
        g = gnp_2ec(rng, 10, 0.4)
        seen = set()
        for f in enumerate_guesses(g):
            assert f not in seen
            seen.add(f)
            sub = g.subgraph(f)
            assert len(f) == 7 and sub.n == 8
            assert len(components(sub)) == 1  # connected + 7 edges => tree
        assert seen


class TestInitialCover:
    def test_c8_guess(self):
        g = Graph.from_edge_list(8, cycle(8))
        f = frozenset(range(7))
        h = initial_cover(g, f)
        assert h == frozenset(range(8))

    def test_matches_forced_oracle(self, rng):
        for _ in range(10):
            g = random_2ec_graph(rng, rng.randint(8, 11))
            f = next(iter(enumerate_guesses(g)))
            h = initial_cover(g, f)
            assert f <= h
            assert is_tf2ec(g, h)
            assert len(h) == len(min_tf2ec(g, forced=f))

    def test_guess_lands_in_big_component(self, rng):
        g = random_2ec_graph(rng, 12)
        f = next(iter(enumerate_guesses(g)))
        h = initial_cover(g, f)
        sub = g.spanning(h)
        f_vertices = set(g.subgraph(f).vertices)
        for comp in components(sub):
            if f_vertices & set(comp):
                assert f_vertices <= set(comp)
                assert len(comp) >= 8


class TestCredits:
    def test_five_cycle(self):
        s = Graph.from_edge_list(5, cycle(5))
        led = credits(s)
        assert led.total == Fraction(5, 4)

    def test_nine_edge_component(self):
        s = Graph.from_edge_list(8, cycle(8) + [(0, 4)])
        assert credits(s).total == Fraction(2)

    def test_complex_two_blocks_one_bridge(self):
        pairs = cycle(6) + cycle(6, offset=6) + [(0, 6)]
        s = Graph.from_edge_list(12, pairs)
        led = credits(s)
        assert led.component_credits == {0: Fraction(1)}
        assert sorted(led.block_credits.values()) == [Fraction(1), Fraction(1)]
        assert list(led.bridge_credits.values()) == [Fraction(1, 4)]
        assert led.total == Fraction(13, 4)

    def test_cost_examples(self):
        two_squares = Graph.from_edge_list(8, cycle(4) + cycle(4, offset=4))
        assert cost(two_squares) == Fraction(10)
        eight = Graph.from_edge_list(8, cycle(8))
        assert cost(eight) == Fraction(10)
        mixed = Graph.from_edge_list(14, cycle(6) + cycle(8, offset=6))
        assert cost(mixed) == Fraction(35, 2)
        assert cost(mixed) <= Fraction(5, 4) * 14


class TestCanonicalize:
    def test_already_canonical_unchanged(self):
        g = Graph.from_edge_list(8, cycle(8) + [(0, 3)])
        h = frozenset(range(8))
        cc = canonicalize(g, h)
        assert cc.edges == h
        assert cc.classification == {0: "large"}

    def test_chord_dropped(self):
        g = Graph.from_edge_list(8, cycle(8) + [(0, 3)])
        cc = canonicalize(g, frozenset(range(9)))
        assert cc.edges == frozenset(range(8))

    def test_bowtie_merged_into_big_component(self):
        # bowtie component 0..4 next to a C8 component, with cross edges
        pairs = ([(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]
                 + cycle(8, offset=5)
                 + [(1, 5), (2, 6), (4, 7)])
        g = Graph.from_edge_list(13, pairs)
        h = frozenset(range(6)) | frozenset(range(6, 14))
        assert is_tf2ec(g, h)
        cc = canonicalize(g, h)
        assert len(cc.edges) <= len(h)
        sub = g.spanning(cc.edges)
        assert len(components(sub)) == 1
        assert not canonical_violations(g, cc.edges)
        assert cost(sub) <= Fraction(5, 4) * len(cc.edges)

    def test_cost_bound_on_random_covers(self, rng):
        for _ in range(8):
            g = random_2ec_graph(rng, rng.randint(9, 13))
            f = next(iter(enumerate_guesses(g)))
            h = initial_cover(g, f)
            cc = canonicalize(g, h)
            assert len(cc.edges) <= len(h)
            assert not canonical_violations(g, cc.edges)
            assert cover_cost(g, cc.edges) <= Fraction(5, 4) * len(cc.edges)

    def test_rejects_non_cover(self):
        g = Graph.from_edge_list(4, cycle(4))
        with pytest.raises(ValueError):
            canonicalize(g, frozenset([0, 1]))
