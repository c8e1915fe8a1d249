import random
from fractions import Fraction

import pytest

from twoec.cover import canonicalize, cover_cost, initial_cover
from twoec.bridge_cover import cover_all
from twoec.errors import InternalContradiction
from twoec.gluing import (GlueContext, _anchored_cycle, _blocks_of,
                          build_context, glue_all, glue_c4_local_c5,
                          glue_step, hamiltonian_pairs, local_3_matching,
                          shortcut_c4_local_c5, shortcut_edge)
from twoec.graph import Edge, Graph, components, is_2ec

from conftest import random_2ec_graph


def ring(vs, first_id):
    return [Edge(first_id + k, vs[k], vs[(k + 1) % len(vs)])
            for k in range(len(vs))]


def mk(n, edges):
    return Graph(range(n), edges)


def cover_ids(edges):
    return frozenset(e.id for e in edges)


class TestBlocks:
    def test_path_gives_two_edge_blocks(self):
        g = mk(3, [Edge(0, 0, 1), Edge(1, 1, 2)])
        assert _blocks_of(g) == [frozenset({0, 1}), frozenset({1, 2})]

    def test_butterfly(self):
        g = mk(5, [Edge(0, 0, 1), Edge(1, 1, 2), Edge(2, 2, 0),
                   Edge(3, 2, 3), Edge(4, 3, 4), Edge(5, 4, 2)])
        assert set(_blocks_of(g)) == {frozenset({0, 1, 2}),
                                      frozenset({2, 3, 4})}

    def test_doubled_bridge_is_still_one_block(self):
        g = mk(2, [Edge(0, 0, 1), Edge(1, 0, 1)])
        assert _blocks_of(g) == [frozenset({0, 1})]


class TestHamiltonianPairs:
    def test_square_with_three_external_vertices(self):
        edges = ring([0, 1, 2, 3], 0)
        edges += [Edge(4, 0, 4), Edge(5, 1, 4), Edge(6, 2, 4)]
        g = mk(5, edges)
        assert hamiltonian_pairs(g, [0, 1, 2, 3]) == [(0, 1), (1, 2)]


class TestMatchingAndCycles:
    def _two_rings(self):
        edges = ring(list(range(8)), 0) + ring(list(range(8, 12)), 8)
        cross = [Edge(12, 8, 0), Edge(13, 9, 2), Edge(14, 10, 4)]
        g = mk(12, edges + cross)
        s = cover_ids(edges)
        return g, s

    def test_local_3_matching_disjoint_cross_edges(self):
        g, s = self._two_rings()
        ctx = build_context(g, s)
        got = local_3_matching(ctx, ctx.block, {8})
        assert len(got) >= 3
        ends = [(e.u, e.v) for e in got]
        flat = [v for uv in ends for v in uv]
        assert len(set(flat)) == len(flat)

    def test_anchored_cycle_respects_gates(self):
        g, s = self._two_rings()
        ctx = build_context(g, s)
        got = _anchored_cycle(ctx, 8, 0, gate1=({8}, {9}))
        assert got is not None
        ids, (a1, a2), _ = got
        assert sorted((a1, a2)) == [8, 9]
        assert set(ids) <= {12, 13, 14}

    def test_anchored_cycle_infeasible_gate(self):
        g, s = self._two_rings()
        ctx = build_context(g, s)
        assert _anchored_cycle(ctx, 8, 0, gate1=({11}, {11})) is None


class TestShortcutEdge:
    def test_five_cycle_with_crossing_chords(self):
        edges = ring([0, 1, 2, 3, 4], 0)
        edges += [Edge(5, 0, 5), Edge(6, 5, 2), Edge(7, 1, 6), Edge(8, 6, 3)]
        g = mk(7, edges)
        eid = shortcut_edge(g, range(5))
        assert eid is not None
        assert is_2ec(g.without_edges([eid]))

    def test_no_removable_edge_on_bare_cycle(self):
        g = mk(4, ring([0, 1, 2, 3], 0))
        assert shortcut_edge(g, range(4)) is None


class TestAdjacentMerge:
    def test_square_next_to_anchor(self):
        edges = ring(list(range(8)), 0) + ring(list(range(8, 12)), 8)
        cross = [Edge(12, 8, 0), Edge(13, 9, 2), Edge(14, 10, 4)]
        g = mk(12, edges + cross)
        s = cover_ids(edges)
        new_s, move = glue_step(g, s)
        assert move.rule == "adjacent_merge"
        assert move.cost_delta == 0
        assert len(components(g.spanning(new_s))) == 1
        assert is_2ec(g.spanning(new_s))
        # one square edge is traded for the Hamiltonian path
        assert len(new_s) == len(s) + 1

    def test_short_cycle_merge_direct(self):
        edges = ring(list(range(8)), 0) + ring(list(range(8, 13)), 8) \
            + ring(list(range(13, 19)), 13)
        cross = [Edge(19, 8, 0), Edge(20, 9, 13), Edge(21, 14, 1),
                 Edge(22, 10, 15)]
        g = mk(19, edges + cross)
        s = cover_ids(edges)
        ctx = build_context(g, s)
        assert ctx.anchor == 0
        got = shortcut_c4_local_c5(ctx, 8, 0, ctx.block)
        assert got is not None
        ids, u1, v1, path = got
        assert {u1, v1} == {8, 9}
        assert set(path) == set(range(8, 13))
        _, move = glue_c4_local_c5(ctx, 8)
        assert move.rule == "short_cycle_merge"
        assert move.cost_delta >= 0


class TestDoubleEdge:
    def test_two_large_components(self):
        edges = ring(list(range(8)), 0) + ring(list(range(8, 17)), 8)
        cross = [Edge(17, 8, 0), Edge(18, 11, 3), Edge(19, 14, 6)]
        g = mk(17, edges + cross)
        s = cover_ids(edges)
        new_s, move = glue_step(g, s)
        assert move.rule == "double_edge_merge"
        assert move.cost_delta == 0
        assert new_s == s | {17, 18}
        assert len(components(g.spanning(new_s))) == 1


class TestDegenerateSixCycle:
    def base(self, extra):
        edges = ring(list(range(8)), 0) + ring(list(range(8, 14)), 8) \
            + ring(list(range(14, 19)), 14)
        cross = [Edge(19, 8, 0), Edge(20, 10, 2), Edge(21, 12, 4),
                 Edge(22, 9, 14)]
        nid = 23
        for u, v in extra:
            cross.append(Edge(nid, u, v))
            nid += 1
        g = mk(19, edges + cross)
        return g, cover_ids(edges)

    def test_opposite_escape_pair(self):
        # second cross edge sits opposite the first on the 6-cycle
        g, s = self.base([(11, 15)])
        new_s, move = glue_step(g, s)
        assert move.rule == "degenerate_rewire"
        assert move.cost_delta > 0
        assert move.removed == {8, 10}
        assert move.added == {19, 20, 22, 23}
        assert len(components(g.spanning(new_s))) == 1
        assert is_2ec(g.spanning(new_s))

    def test_matched_pair_into_pendant_cycle(self):
        # both escape edges leave the same 6-cycle vertex
        g, s = self.base([(9, 16), (12, 17)])
        new_s, move = glue_step(g, s)
        assert move.rule == "degenerate_rewire"
        assert move.cost_delta >= 0
        assert len(components(g.spanning(new_s))) == 1
        assert is_2ec(g.spanning(new_s))

    def test_two_pendant_five_cycles(self):
        edges = ring(list(range(8)), 0) + ring(list(range(8, 14)), 8) \
            + ring(list(range(14, 19)), 14) + ring(list(range(19, 24)), 19)
        cross = [Edge(24, 8, 0), Edge(25, 10, 2), Edge(26, 12, 4),
                 Edge(27, 9, 14), Edge(28, 11, 19),
                 Edge(29, 15, 8), Edge(30, 20, 10)]
        g = mk(24, edges + cross)
        s = cover_ids(edges)
        new_s, move = glue_step(g, s)
        assert move.rule == "pendant_pair_rewire"
        assert move.cost_delta == 0
        # the three short cycles merge; the anchor stays separate this move
        assert len(components(g.spanning(new_s))) == 2
        assert 0 not in move.merged_components
        final, moves = glue_all(g, s)
        assert len(components(g.spanning(final))) == 1
        assert cover_cost(g, final) <= cover_cost(g, s)


class TestNonLocalFiveCycle:
    def gadget(self):
        edges = ring(list(range(8)), 0) + ring(list(range(8, 13)), 8) \
            + ring(list(range(13, 19)), 13) + ring(list(range(19, 24)), 19)
        cross = [Edge(24, 8, 0), Edge(25, 10, 16), Edge(26, 11, 17),
                 Edge(27, 14, 1), Edge(28, 9, 19), Edge(29, 12, 20),
                 Edge(30, 11, 21)]
        g = mk(24, edges + cross)
        return g, cover_ids(edges)

    def test_three_component_block_with_second_block(self):
        g, s = self.gadget()
        new_s, move = glue_step(g, s)
        assert move.rule == "pendant_5cycle_merge"
        assert move.cost_delta >= 0
        assert len(components(g.spanning(new_s))) == 1
        assert is_2ec(g.spanning(new_s))
        # exactly one edge of the 5-cycle got traded away
        assert len(move.removed) == 1
        assert move.removed < frozenset(range(8, 13))


class TestFallbackUnion:
    def test_three_large_components(self):
        edges = ring(list(range(8)), 0) + ring(list(range(8, 16)), 8) \
            + ring(list(range(16, 24)), 16)
        cross = [Edge(24, 0, 8), Edge(25, 9, 16), Edge(26, 17, 1)]
        g = mk(24, edges + cross)
        s = cover_ids(edges)
        new_s, move = glue_step(g, s)
        assert move.rule == "cycle_merge"
        assert move.added == {24, 25, 26}
        assert move.removed == frozenset()
        assert move.cost_delta == 1
        assert len(components(g.spanning(new_s))) == 1


class TestGlueAll:
    def test_single_component_is_identity(self):
        edges = ring(list(range(8)), 0)
        g = mk(8, edges)
        s = cover_ids(edges)
        final, moves = glue_all(g, s)
        assert final == s
        assert moves == []

    def test_component_count_strictly_decreases(self):
        edges = ring(list(range(8)), 0) + ring(list(range(8, 16)), 8) \
            + ring(list(range(16, 24)), 16)
        cross = [Edge(24, 0, 8), Edge(25, 9, 16), Edge(26, 17, 1),
                 Edge(27, 2, 10)]
        g = mk(24, edges + cross)
        s = cover_ids(edges)
        final, moves = glue_all(g, s)
        assert len(moves) <= 2
        assert is_2ec(g.spanning(final))
        assert Fraction(len(final)) == cover_cost(g, final) - 2

    def test_end_to_end_random(self, rng):
        for trial in range(6):
            g = random_2ec_graph(rng, rng.randint(9, 13))
            f = frozenset()
            h = initial_cover(g, f)
            cov = canonicalize(g, h)
            cov = cover_all(g, cov)
            final, moves = glue_all(g, cov.edges)
            sub = g.spanning(final)
            assert sub.n == g.n
            assert is_2ec(sub)
            assert cover_cost(g, final) <= cover_cost(g, cov.edges)
            assert Fraction(len(final)) == cover_cost(g, final) - 2

    def test_deterministic(self, rng):
        g = random_2ec_graph(rng, 12)
        h = canonicalize(g, initial_cover(g, frozenset()))
        h = cover_all(g, h)
        a, am = glue_all(g, h.edges)
        b, bm = glue_all(g, h.edges)
        assert a == b
        assert [m.rule for m in am] == [m.rule for m in bm]
