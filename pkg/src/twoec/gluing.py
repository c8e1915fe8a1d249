"""Merge the 2EC components of a bridgeless cover into one spanning subgraph.

Works on the component graph: each component of the cover is contracted to
a single node named by its smallest vertex.  Every merge routes a cycle
through a 2-vertex-connected block of that contraction, pays for the new
edges with component credits, and sometimes claws an edge back by replacing
a short cycle component with a Hamiltonian path or by deleting a now
redundant cycle edge.  Cost never increases and the component count drops
with every move.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import InternalContradiction
from .cover import cover_cost, canonical_violations
from .graph import (ComponentGraph, Edge, FlowNet, Graph, component_graph,
                    components, find_cross_matching, hamiltonian_path, is_2ec,
                    path_avoiding)


@dataclass(frozen=True)
class GlueMove:
    added: FrozenSet[int]
    removed: FrozenSet[int]
    merged_components: Tuple[int, ...]
    cost_delta: Fraction
    rule: str


@dataclass
class GlueContext:
    g: Graph
    s: FrozenSet[int]
    ghat: ComponentGraph
    edge: Dict[int, Edge]                  # original edge id -> Edge of g
    comp_edges: Dict[int, FrozenSet[int]]  # component rep -> cover edge ids
    blocks: List[FrozenSet[int]]           # 2VC blocks of the contraction
    anchor: int                            # rep of the chosen large component
    block: FrozenSet[int]                  # block containing the anchor
    local: Dict[int, bool]                 # rep -> lies in exactly one block

    def comp_vertices(self, rep: int) -> FrozenSet[int]:
        return self.ghat.node_vertices[rep]

    def comp_size(self, rep: int) -> int:
        return len(self.comp_edges[rep])


def _dump(g: Graph, s: Iterable[int]) -> Dict[str, object]:
    return {"n": g.n,
            "edges": [(e.id, e.u, e.v)
                      for e in sorted(g.edges(), key=lambda e: e.id)],
            "cover": sorted(s)}


def _blocks_of(h: Graph) -> List[FrozenSet[int]]:
    """Biconnected blocks of h as vertex sets (bridges give 2-node blocks)."""
    adj: Dict[int, List[int]] = {v: sorted(set(h.neighbors(v)))
                                 for v in h.vertices}
    disc: Dict[int, int] = {}
    low: Dict[int, int] = {}
    out: List[FrozenSet[int]] = []
    counter = 0
    for root in sorted(h.vertices):
        if root in disc:
            continue
        estack: List[Tuple[int, int]] = []
        stack: List[Tuple[int, Optional[int], int]] = [(root, None, 0)]
        while stack:
            v, parent, idx = stack.pop()
            if idx == 0:
                disc[v] = low[v] = counter
                counter += 1
            advanced = False
            while idx < len(adj[v]):
                w = adj[v][idx]
                idx += 1
                if w not in disc:
                    estack.append((v, w))
                    stack.append((v, parent, idx))
                    stack.append((w, v, 0))
                    advanced = True
                    break
                if w != parent and disc[w] < disc[v]:
                    estack.append((v, w))
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            if parent is not None:
                low[parent] = min(low[parent], low[v])
                if low[v] >= disc[parent]:
                    verts: Set[int] = set()
                    while estack:
                        a, b = estack.pop()
                        verts.add(a)
                        verts.add(b)
                        if (a, b) == (parent, v):
                            break
                    if verts:
                        out.append(frozenset(verts))
    return sorted(out, key=lambda b: (min(b), len(b)))


def build_context(g: Graph, s: FrozenSet[int]) -> GlueContext:
    sub = g.spanning(s)
    ghat = component_graph(g, s)
    comp_edges: Dict[int, FrozenSet[int]] = {}
    for rep, verts in ghat.node_vertices.items():
        comp_edges[rep] = frozenset(e.id for e in sub.induced(verts).edges())
    blocks = _blocks_of(ghat.graph)
    large = sorted(r for r in comp_edges if len(comp_edges[r]) >= 8)
    if not large:
        raise InternalContradiction("no large component to anchor the merge",
                                    _dump(g, s))
    cand = [b for b in blocks if any(r in b for r in large)]
    if not cand:
        raise InternalContradiction("large components sit in no block",
                                    _dump(g, s))
    block = min(cand, key=min)
    anchor = min(r for r in large if r in block)
    in_blocks: Dict[int, int] = {r: 0 for r in comp_edges}
    for b in blocks:
        for r in b:
            in_blocks[r] += 1
    local = {r: in_blocks[r] <= 1 for r in comp_edges}
    edge = {e.id: e for e in g.edges()}
    return GlueContext(g, s, ghat, edge, comp_edges, blocks,
                       anchor, block, local)


# -- matching and cycle searches -------------------------------------------


def local_3_matching(ctx: GlueContext, block: FrozenSet[int],
                     side: Iterable[int]) -> List[Edge]:
    """Matching of size 3 between the vertices of `side` and the rest of
    the block, in the original graph."""
    side = set(side)
    v1: Set[int] = set()
    v2: Set[int] = set()
    for rep in block:
        tgt = v1 if rep in side else v2
        tgt.update(ctx.comp_vertices(rep))
    got = find_cross_matching(ctx.g, sorted(v1), sorted(v2), 3)
    if got is None:
        raise InternalContradiction("cross matching of size 3 missing",
                                    _dump(ctx.g, ctx.s))
    return got


def hamiltonian_pairs(g: Graph, verts: Iterable[int]) -> List[Tuple[int, int]]:
    """Pairs of externally connected cycle vertices joined by a Hamiltonian
    path inside the component."""
    vset = set(verts)
    ext = sorted(v for v in vset
                 if any(w not in vset for w in g.neighbors(v)))
    out = []
    for i, u in enumerate(ext):
        for v in ext[i + 1:]:
            if hamiltonian_path(g, vset, u, v) is not None:
                out.append((u, v))
    return out


def _anchored_cycle(ctx: GlueContext, r1: int, r2: int,
                    gate1: Optional[Tuple[Iterable[int], Iterable[int]]] = None,
                    gate2: Optional[Tuple[Iterable[int], Iterable[int]]] = None,
                    allowed: Optional[FrozenSet[int]] = None):
    """A cycle of the contraction through components r1 and r2.

    A gate, when given, is a pair of vertex sets (A, B): the cycle must
    attach to that component at one vertex of A and a different vertex of
    B.  Without a gate the two attachment vertices may coincide.  `allowed`
    restricts the intermediate components (a block, typically).

    Returns (edge ids, (r1 attachments), (r2 attachments)) or None.
    """
    net = FlowNet()
    src, snk = ("src",), ("snk",)

    def ok(rep: int) -> bool:
        return allowed is None or rep in allowed or rep in (r1, r2)

    if gate1 is not None:
        seen1 = set(gate1[0]) | set(gate1[1])
        for i in (0, 1):
            net.add_arc(src, ("g1", i), None)
        for v in sorted(seen1):
            net.add_arc(("v1i", v), ("v1o", v), None)
        for i in (0, 1):
            for v in sorted(set(gate1[i])):
                net.add_arc(("g1", i), ("v1i", v), None)

        def out1(v):
            return ("v1o", v)
        allow1 = seen1
    else:
        def out1(v):
            return src
        allow1 = set(ctx.comp_vertices(r1))

    if gate2 is not None:
        seen2 = set(gate2[0]) | set(gate2[1])
        for i in (0, 1):
            net.add_arc(("g2", i), snk, None)
        for v in sorted(seen2):
            net.add_arc(("v2i", v), ("v2o", v), None)
        for i in (0, 1):
            for v in sorted(set(gate2[i])):
                net.add_arc(("v2o", v), ("g2", i), None)

        def in2(v):
            return ("v2i", v)
        allow2 = seen2
    else:
        def in2(v):
            return snk
        allow2 = set(ctx.comp_vertices(r2))

    for rep in sorted(ctx.ghat.node_vertices):
        if rep not in (r1, r2) and ok(rep):
            net.add_arc(("ci", rep), ("co", rep), None)
    for e in sorted(ctx.g.edges(), key=lambda e: e.id):
        cu, cv = ctx.ghat.node_of(e.u), ctx.ghat.node_of(e.v)
        if cu == cv:
            continue
        for x, cx, y, cy in ((e.u, cu, e.v, cv), (e.v, cv, e.u, cu)):
            if cx == r1 and cy == r2:
                if x in allow1 and y in allow2:
                    net.add_arc(out1(x), in2(y), e)
            elif cx == r1:
                if ok(cy) and cy != r2 and x in allow1:
                    net.add_arc(out1(x), ("ci", cy), e)
            elif cy == r2:
                if ok(cx) and cx != r1 and y in allow2:
                    net.add_arc(("co", cx), in2(y), e)
            elif cx != r2 and cy != r1:
                if ok(cx) and ok(cy):
                    net.add_arc(("co", cx), ("ci", cy), e)

    if net.max_flow(src, snk, 2) < 2:
        return None
    p1, p2 = net.two_paths(src, snk)

    def ends(path):
        first, last = path[0], path[-1]
        a = first.u if ctx.ghat.node_of(first.u) == r1 else first.v
        b = last.u if ctx.ghat.node_of(last.u) == r2 else last.v
        return a, b

    (a1, b1), (a2, b2) = ends(p1), ends(p2)
    ids = [e.id for e in p1] + [e.id for e in p2]
    return ids, (a1, a2), (b1, b2)


def _cycle_comps(ctx: GlueContext, ids: Iterable[int]) -> List[int]:
    reps: Set[int] = set()
    for i in ids:
        e = ctx.edge[i]
        reps.add(ctx.ghat.node_of(e.u))
        reps.add(ctx.ghat.node_of(e.v))
    return sorted(reps)


def _attachments(ctx: GlueContext, ids: Iterable[int], rep: int) -> List[int]:
    """Vertices of component rep the cycle attaches at (with multiplicity)."""
    out = []
    for i in sorted(ids):
        e = ctx.edge[i]
        for x in (e.u, e.v):
            if ctx.ghat.node_of(x) == rep and ctx.ghat.node_of(e.other(x)) != rep:
                out.append(x)
    return sorted(out)


def _cycle_edge_between(ctx: GlueContext, ids: Iterable[int],
                        ra: int, rb: int) -> Optional[int]:
    for i in sorted(ids):
        e = ctx.edge[i]
        if {ctx.ghat.node_of(e.u), ctx.ghat.node_of(e.v)} == {ra, rb}:
            return i
    return None


def _comp_credit(ctx: GlueContext, rep: int) -> Fraction:
    m = ctx.comp_size(rep)
    return Fraction(2) if m >= 8 else Fraction(m, 4)


def _cycle_credits(ctx: GlueContext, ids: Iterable[int]) -> Fraction:
    return sum((_comp_credit(ctx, r) for r in _cycle_comps(ctx, ids)),
               Fraction(0))


def _extend_cycle(ctx: GlueContext, ids: List[int], block: FrozenSet[int],
                  target: int) -> List[int]:
    """Grow a short contraction cycle to `target` components inside a block
    by swapping one cycle edge for a detour through an unused component.
    Only well-defined while the cycle has <= 3 components (any two of its
    nodes are then cycle-adjacent); best effort, returns what it reached."""
    ids = list(ids)
    while len(_cycle_comps(ctx, ids)) < min(target, len(block)):
        nodes = set(_cycle_comps(ctx, ids))
        if len(nodes) > 3:
            break
        progressed = False
        for e in sorted(ctx.ghat.graph.edges(), key=lambda e: e.id):
            x, y = e.u, e.v
            if y in nodes and x not in nodes:
                x, y = y, x
            if x not in nodes or y in nodes or y not in block:
                continue
            path = path_avoiding(ctx.ghat.graph, [y],
                                 sorted(nodes - {x}), [x])
            if path is None:
                continue
            landing = None
            for pe in (path[-1],) if path else ():
                landing = pe.u if pe.u in nodes else pe.v
            if landing is None:
                continue
            drop = _cycle_edge_between(ctx, ids, x, landing)
            if drop is None:
                continue
            ids = [i for i in ids if i != drop]
            ids.append(e.id)
            ids.extend(pe.id for pe in path)
            progressed = True
            break
        if not progressed:
            break
    return ids


def nice_cycle(ctx: GlueContext, c1: int, c2: int,
               block: FrozenSet[int],
               anchor_vertex: Optional[int] = None):
    """Cycle of the block through c1 and c2 attaching to c1 at two distinct
    vertices, one of them anchor_vertex when possible."""
    vs1 = ctx.comp_vertices(c1)
    trials = []
    if anchor_vertex is not None:
        trials.append(({anchor_vertex}, vs1))
    trials.append((vs1, vs1))
    for gate in trials:
        got = _anchored_cycle(ctx, c1, c2, gate1=gate, allowed=block)
        if got is not None:
            ids, (a, b), _ = got
            return ids, (a, b)
    return None


def cycle_size3(ctx: GlueContext, c1: int, c2: int, block: FrozenSet[int],
                anchor_vertex: Optional[int] = None):
    """Like nice_cycle but grown to >= min(3, |block|) components."""
    got = nice_cycle(ctx, c1, c2, block, anchor_vertex)
    if got is None:
        return None
    ids, (a, b) = got
    if len(_cycle_comps(ctx, ids)) < min(3, len(block)):
        ids = _extend_cycle(ctx, ids, block, 3)
        atts = _attachments(ctx, ids, c1)
        if len(atts) != 2:
            return None
        a, b = atts
    return ids, (a, b)


def shortcut_c4_local_c5(ctx: GlueContext, c1: int, c2: int,
                         block: FrozenSet[int],
                         c2_gate: Optional[Tuple[Iterable[int],
                                                 Iterable[int]]] = None):
    """Cycle through the short-cycle component c1 and c2, attached at a
    Hamiltonian pair of c1 (so one c1 edge can be traded for a path).

    Returns (cycle ids, u1, v1, hamiltonian path vertices) or None.
    """
    vs1 = ctx.comp_vertices(c1)
    if c2_gate is None:
        vs2 = ctx.comp_vertices(c2)
        c2_gate = (vs2, vs2)
    for u, v in hamiltonian_pairs(ctx.g, vs1):
        got = _anchored_cycle(ctx, c1, c2, gate1=({u}, {v}),
                              gate2=c2_gate, allowed=block)
        if got is None:
            continue
        ids, _, _ = got
        path = hamiltonian_path(ctx.g, vs1, u, v)
        return ids, u, v, path
    return None


def shortcut_edge(f: Graph, cycle_ids: Iterable[int],
                  prefer: Sequence[int] = ()) -> Optional[int]:
    """An edge of the cycle whose removal keeps f 2EC; preferred candidates
    first, every candidate re-verified directly."""
    order: List[int] = []
    for i in list(prefer) + sorted(cycle_ids):
        if i not in order:
            order.append(i)
    for eid in order:
        if is_2ec(f.without_edges([eid])):
            return eid
    return None


def _ham_path_edges(g: Graph, path: Sequence[int]) -> Set[int]:
    out: Set[int] = set()
    for a, b in zip(path, path[1:]):
        out.add(min(e.id for e in g.edges_between(a, b)))
    return out


def _delete_from_component(ctx: GlueContext, s2: Set[int], c1: int,
                           pairs: Sequence[Tuple[int, int]]) -> int:
    """Pick a deletable edge of the (former) cycle component c1 inside the
    merged component of s2: adjacent attachment pairs first, then a
    verified scan."""
    g = ctx.g
    sub = g.spanning(s2)
    home = min(ctx.comp_vertices(c1))
    comp = next(cv for cv in components(sub) if home in cv)
    f = sub.induced(comp)
    cyc = sorted(ctx.comp_edges[c1])
    prefer: List[int] = []
    for u, v in pairs:
        for e in g.edges_between(u, v):
            if e.id in ctx.comp_edges[c1]:
                prefer.append(e.id)
    eid = shortcut_edge(f, cyc, prefer)
    if eid is None:
        raise InternalContradiction("no deletable cycle edge after merge",
                                    _dump(g, s2))
    return eid


# -- move assembly ---------------------------------------------------------


def _commit(ctx: GlueContext, new_edges: Set[int], rule: str,
            min_delta: Fraction = Fraction(0)) -> Tuple[FrozenSet[int], GlueMove]:
    g, s = ctx.g, ctx.s
    new_s = frozenset(new_edges)
    added = new_s - s
    removed = s - new_s
    if any(i not in ctx.edge for i in added):
        raise InternalContradiction("merge added unknown edges", _dump(g, s))
    old_comps = components(g.spanning(s))
    new_comps = components(g.spanning(new_s))
    if len(new_comps) >= len(old_comps):
        raise InternalContradiction(
            "merge rule %s did not reduce the component count" % rule,
            _dump(g, new_s))
    sub = g.spanning(new_s)
    for comp in new_comps:
        if not is_2ec(sub.induced(comp)):
            raise InternalContradiction(
                "merge rule %s left a non-2EC component" % rule,
                _dump(g, new_s))
    bad = canonical_violations(g, new_s)
    if bad:
        raise InternalContradiction(
            "merge rule %s broke cover shape: %r" % (rule, bad),
            _dump(g, new_s))
    delta = cover_cost(g, s) - cover_cost(g, new_s)
    if delta < min_delta:
        raise InternalContradiction(
            "merge rule %s raised the cost (delta %s)" % (rule, delta),
            _dump(g, new_s))
    vmap = {}
    for comp in new_comps:
        for v in comp:
            vmap[v] = comp[0]
    groups: Dict[int, List[int]] = {}
    for rep in ctx.comp_edges:
        groups.setdefault(vmap[rep], []).append(rep)
    merged = tuple(sorted(r for g2 in groups.values() if len(g2) > 1
                          for r in g2))
    return new_s, GlueMove(added, removed, merged, delta, rule)


# -- the individual merge rules --------------------------------------------


def glue_adjacent(ctx: GlueContext, c1: int, c2: int, u1: int, v1: int,
                  e_anchor: Edge, e_out: Edge):
    """Replace the short cycle c1 by a Hamiltonian u1,v1-path and close a
    component-level cycle through the anchor with the two given edges."""
    vs1 = ctx.comp_vertices(c1)
    path = hamiltonian_path(ctx.g, vs1, u1, v1)
    if path is None:
        return None
    fids = {e_anchor.id, e_out.id}
    if c2 != ctx.anchor:
        link = path_avoiding(ctx.ghat.graph, [c2], [ctx.anchor], [c1])
        if link is None:
            return None
        fids |= {e.id for e in link}
    new = (set(ctx.s) - ctx.comp_edges[c1]) | fids \
        | _ham_path_edges(ctx.g, path)
    return _commit(ctx, new, "adjacent_merge")


def _find_adjacent_move(ctx: GlueContext):
    for c1 in sorted(ctx.block - {ctx.anchor}):
        if ctx.comp_size(c1) > 7:
            continue
        vs = ctx.comp_vertices(c1)
        for u1 in sorted(vs):
            anchors = sorted((e for e in ctx.g.incident(u1)
                              if ctx.ghat.node_of(e.other(u1)) == ctx.anchor),
                             key=lambda e: e.id)
            if not anchors:
                continue
            for v1 in sorted(vs - {u1}):
                if hamiltonian_path(ctx.g, vs, u1, v1) is None:
                    continue
                for e_out in sorted(ctx.g.incident(v1), key=lambda e: e.id):
                    c2 = ctx.ghat.node_of(e_out.other(v1))
                    if c2 == c1:
                        continue
                    got = glue_adjacent(ctx, c1, c2, u1, v1,
                                        anchors[0], e_out)
                    if got is not None:
                        return got
    return None


def glue_c4_local_c5(ctx: GlueContext, c1: int):
    """Merge a 4-cycle, or a 5-cycle living in a single block, into the
    anchor's block, trading one of its edges for a Hamiltonian path."""
    got = shortcut_c4_local_c5(ctx, c1, ctx.anchor, ctx.block)
    if got is None:
        raise InternalContradiction(
            "short cycle component admits no pair-anchored merge cycle",
            _dump(ctx.g, ctx.s))
    ids, _u1, _v1, path = got
    new = (set(ctx.s) - ctx.comp_edges[c1]) | set(ids) \
        | _ham_path_edges(ctx.g, path)
    return _commit(ctx, new, "short_cycle_merge")


def _second_block(ctx: GlueContext, c1: int,
                  must_contain: Optional[int] = None) -> FrozenSet[int]:
    cand = [b for b in ctx.blocks
            if c1 in b and b != ctx.block
            and (must_contain is None or must_contain in b)]
    if not cand:
        raise InternalContradiction(
            "component lacks the expected second block", _dump(ctx.g, ctx.s))
    return min(cand, key=min)


def _pendant_finish(ctx: GlueContext, c1: int, fids: Set[int],
                    u1: int, v1: int, c1_gate_first: Iterable[int],
                    rule: str):
    """Shared tail of the two-block merges: pick a second block at c1,
    route a second cycle through it anchored away from u1, v1, then delete
    one edge of c1.

    c1_gate_first limits the vertex the second cycle must attach first
    (the deletable-edge argument needs it off the u1,v1 attachment pair,
    and for 6/7-cycles inside a shortest u1,v1-arc).
    """
    g = ctx.g
    bprime = _second_block(ctx, c1)
    m3 = local_3_matching(ctx, bprime, {c1})
    vs1 = ctx.comp_vertices(c1)
    first = set(c1_gate_first)
    anchored = [e for e in sorted(m3, key=lambda e: e.id)
                if (e.u if e.u in vs1 else e.v) in first]
    if anchored:
        me = anchored[0]
    else:
        spare = [e for e in sorted(m3, key=lambda e: e.id)
                 if (e.u if e.u in vs1 else e.v) not in (u1, v1)]
        if not spare:
            raise InternalContradiction(
                "second-block matching pinned to the first cycle",
                _dump(g, ctx.s))
        me = spare[0]
    w1 = me.u if me.u in vs1 else me.v
    c1p = ctx.ghat.node_of(me.other(w1))
    gate = (first | {w1}, vs1)
    if ctx.comp_size(c1p) == 4:
        got = shortcut_c4_local_c5(ctx, c1p, c1, bprime, c2_gate=gate)
        if got is None:
            raise InternalContradiction(
                "4-cycle in second block admits no merge cycle",
                _dump(g, ctx.s))
        ids, _p, _q, path = got
        s2 = (set(ctx.s) - ctx.comp_edges[c1p]) | fids | set(ids) \
            | _ham_path_edges(g, path)
        atts = [a for a in _attachments(ctx, ids, c1)]
    else:
        got = _anchored_cycle(ctx, c1, c1p, gate1=gate, allowed=bprime)
        if got is None:
            raise InternalContradiction(
                "second block admits no anchored cycle", _dump(g, ctx.s))
        ids = got[0]
        if len(_cycle_comps(ctx, ids)) < min(3, len(bprime)):
            grown = _extend_cycle(ctx, ids, bprime, 3)
            gat = _attachments(ctx, grown, c1)
            if len(gat) == 2 and gat[0] != gat[1] \
                    and (gat[0] in gate[0] or gat[1] in gate[0]):
                ids = grown
        s2 = set(ctx.s) | fids | set(ids)
        atts = _attachments(ctx, ids, c1)
    if len(atts) != 2 or atts[0] == atts[1]:
        raise InternalContradiction(
            "second cycle attaches at a single vertex", _dump(g, ctx.s))
    eid = _delete_from_component(ctx, s2, c1,
                                 [(u1, v1), (atts[0], atts[1])])
    return _commit(ctx, s2 - {eid}, rule)


def _reroute_distinct(ctx: GlueContext, fids: List[int], c1: int, u1: int):
    """The merge cycle pinches c1 at one vertex; rebuild it so it attaches
    at two distinct c1 vertices, using a fresh matching edge."""
    g = ctx.g
    vs1 = ctx.comp_vertices(c1)
    other: Set[int] = set()
    for rep in ctx.block - {c1}:
        other.update(ctx.comp_vertices(rep))
    m3 = find_cross_matching(g, sorted(vs1), sorted(other), 3, require=u1)
    if m3 is None:
        raise InternalContradiction("pin-breaking matching missing",
                                    _dump(g, ctx.s))
    nodes = set(_cycle_comps(ctx, fids))
    nbrs = sorted(r for r in nodes - {c1}
                  if _cycle_edge_between(ctx, fids, c1, r) is not None)
    for me in sorted(m3, key=lambda e: e.id):
        ui = me.u if me.u in vs1 else me.v
        if ui == u1:
            continue
        xrep = ctx.ghat.node_of(me.other(ui))
        if xrep in nbrs:
            drop = _cycle_edge_between(ctx, fids, c1, xrep)
            nids = [i for i in fids if i != drop] + [me.id]
            atts = _attachments(ctx, nids, c1)
            if len(atts) == 2 and atts[0] != atts[1]:
                return nids, atts[0], atts[1]
            continue
        if xrep in nodes or xrep not in ctx.block:
            continue
        path = path_avoiding(ctx.ghat.graph, [xrep], sorted(nodes - {c1}),
                             [c1])
        if path is None:
            continue
        last = path[-1]
        landing = last.u if last.u in nodes else last.v
        if landing in nbrs:
            drop = _cycle_edge_between(ctx, fids, c1, landing)
            nids = [i for i in fids if i != drop] + [me.id] \
                + [pe.id for pe in path]
        else:
            # walk from the landing component back to c1 along the side of
            # the old cycle that keeps the anchor on board
            keep = _arc_keeping(ctx, fids, landing, c1, ctx.anchor)
            if keep is None:
                continue
            nids = keep + [me.id] + [pe.id for pe in path]
        atts = _attachments(ctx, nids, c1)
        if len(atts) == 2 and atts[0] != atts[1] \
                and len(_cycle_comps(ctx, nids)) >= 4:
            return nids, atts[0], atts[1]
    raise InternalContradiction("could not unpin the merge cycle",
                                _dump(g, ctx.s))


def _arc_keeping(ctx: GlueContext, fids: List[int], start: int, end: int,
                 want: int) -> Optional[List[int]]:
    """Edges of one of the two cycle arcs from component start to end,
    the arc whose components include want."""
    seq = _cycle_sequence(ctx, fids)
    if seq is None or start not in seq or end not in seq:
        return None
    order = list(seq)
    i, j = order.index(start), order.index(end)
    n = len(order)
    for direction in (1, -1):
        arc_nodes = []
        k = i
        while True:
            arc_nodes.append(order[k % n])
            if order[k % n] == end:
                break
            k += direction
            if len(arc_nodes) > n:
                return None
        if want in arc_nodes:
            ids = []
            for a, b in zip(arc_nodes, arc_nodes[1:]):
                eid = _cycle_edge_between(ctx, fids, a, b)
                if eid is None:
                    return None
                ids.append(eid)
            return ids
    return None


def _cycle_sequence(ctx: GlueContext, fids: List[int]) -> Optional[List[int]]:
    adj: Dict[int, List[int]] = {}
    for i in fids:
        e = ctx.edge[i]
        a, b = ctx.ghat.node_of(e.u), ctx.ghat.node_of(e.v)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if any(len(v) != 2 for v in adj.values()):
        return None
    start = min(adj)
    seq = [start]
    prev = None
    cur = start
    while True:
        nxts = [x for x in adj[cur] if x != prev]
        nxt = nxts[0] if nxts else prev
        if nxt == start:
            break
        seq.append(nxt)
        prev, cur = cur, nxt
        if len(seq) > len(adj):
            return None
    return seq


def glue_nonlocal_c5(ctx: GlueContext, c1: int):
    """Merge a 5-cycle that spans two blocks using both of its blocks."""
    g = ctx.g
    B = ctx.block
    C = ctx.anchor
    if len(B) == 2:
        raise InternalContradiction(
            "5-cycle alone in the anchor block survived the adjacency scan",
            _dump(g, ctx.s))
    if len(B) == 3:
        c2 = next(iter(B - {c1, C}))
        if ctx.comp_size(c2) == 5:
            raise InternalContradiction(
                "two 5-cycles in a 3-component block survived the "
                "adjacency scan", _dump(g, ctx.s))
        got = cycle_size3(ctx, c1, C, B)
        if got is None:
            raise InternalContradiction(
                "no anchored cycle in a 3-component block", _dump(g, ctx.s))
        ids, (u1, v1) = got
        fl = len(ids)
        creds = _cycle_credits(ctx, ids)
        if creds >= fl + 2:
            return _commit(ctx, set(ctx.s) | set(ids), "cycle_merge")
        if u1 == v1 or creds < fl + Fraction(7, 4):
            raise InternalContradiction(
                "3-component block cycle pays too little", _dump(g, ctx.s))
        return _pendant_finish(ctx, c1, set(ids), u1, v1,
                               ctx.comp_vertices(c1) - {u1, v1},
                               "pendant_5cycle_merge")
    # four or more components in the block
    got = _anchored_cycle(ctx, c1, C, allowed=B)
    if got is None:
        raise InternalContradiction("no cycle through anchor and 5-cycle",
                                    _dump(g, ctx.s))
    ids = got[0]
    ids = _extend_cycle(ctx, ids, B, 4)
    creds = _cycle_credits(ctx, ids)
    fl = len(ids)
    if creds >= fl + 2:
        return _commit(ctx, set(ctx.s) | set(ids), "cycle_merge")
    atts = _attachments(ctx, ids, c1)
    if len(atts) == 2 and atts[0] != atts[1] \
            and creds >= fl + Fraction(7, 4):
        u1, v1 = atts
    else:
        pin = atts[0]
        ids, u1, v1 = _reroute_distinct(ctx, list(ids), c1, pin)
        creds = _cycle_credits(ctx, ids)
        if creds < len(ids) + Fraction(7, 4):
            raise InternalContradiction("rerouted cycle pays too little",
                                        _dump(g, ctx.s))
    return _pendant_finish(ctx, c1, set(ids), u1, v1,
                           ctx.comp_vertices(c1) - {u1, v1},
                           "pendant_5cycle_merge")


def _cycle_order(ctx: GlueContext, c1: int) -> List[int]:
    sub = ctx.g.spanning(ctx.comp_edges[c1])
    vs = sorted(ctx.comp_vertices(c1))
    order = [vs[0]]
    prev = None
    while len(order) < len(vs):
        cur = order[-1]
        nxt = [w for w in sub.neighbors(cur) if w != prev]
        if not nxt:
            raise InternalContradiction("component is not a simple cycle",
                                        _dump(ctx.g, ctx.s))
        order.append(min(nxt) if prev is None else nxt[0])
        prev = cur
    return order


def _shortest_arc_interior(order: List[int], u: int, v: int) -> List[int]:
    n = len(order)
    i, j = order.index(u), order.index(v)
    fwd = [order[(i + k) % n] for k in range(1, (j - i) % n)]
    bwd = [order[(i - k) % n] for k in range(1, (i - j) % n)]
    if len(fwd) + 1 < len(bwd) + 1:
        return fwd
    if len(bwd) + 1 < len(fwd) + 1:
        return bwd
    return sorted(set(fwd) | set(bwd))


def glue_c6_c7(ctx: GlueContext, c1: int):
    """Merge the lone partner of the anchor when the anchor's block has
    exactly two components and the partner has >= 6 edges."""
    g = ctx.g
    B = ctx.block
    C = ctx.anchor
    m1 = ctx.comp_size(c1)
    if m1 >= 8:
        m3 = local_3_matching(ctx, B, {C})
        e1, e2 = sorted(m3, key=lambda e: e.id)[:2]
        return _commit(ctx, set(ctx.s) | {e1.id, e2.id}, "double_edge_merge")

    m3 = local_3_matching(ctx, B, {c1})
    vs1 = ctx.comp_vertices(c1)
    trio = sorted(e.u if e.u in vs1 else e.v for e in m3)
    by_vertex = {}
    for e in m3:
        by_vertex[e.u if e.u in vs1 else e.v] = e
    order = _cycle_order(ctx, c1)
    pos = {v: i for i, v in enumerate(order)}
    for a, b in ((trio[0], trio[1]), (trio[0], trio[2]), (trio[1], trio[2])):
        if (pos[a] - pos[b]) % m1 in (1, m1 - 1):
            raise InternalContradiction(
                "cycle-adjacent matched pair survived the adjacency scan",
                _dump(g, ctx.s))

    # escape vertex: off the matched trio, with an edge leaving the block
    escape = None
    for x in sorted(vs1 - set(trio)):
        for e in sorted(g.incident(x), key=lambda e: e.id):
            xrep = ctx.ghat.node_of(e.other(x))
            if xrep in (c1, C):
                continue
            escape = (x, e, xrep)
            break
        if escape:
            break
    if escape is None:
        raise InternalContradiction(
            "6/7-cycle has no escape edge off the matched trio",
            _dump(g, ctx.s))
    x1, xe, xrep = escape
    lab = None
    for a, b in ((trio[0], trio[1]), (trio[0], trio[2]),
                 (trio[1], trio[2]), (trio[1], trio[0]),
                 (trio[2], trio[0]), (trio[2], trio[1])):
        if x1 in _shortest_arc_interior(order, a, b):
            lab = (a, b)
            break
    if lab is None:
        raise InternalContradiction(
            "escape vertex misses every shortest matched arc",
            _dump(g, ctx.s))
    u1, v1 = lab
    w1 = next(t for t in trio if t not in (u1, v1))
    fids = {by_vertex[u1].id, by_vertex[v1].id}
    interior = set(_shortest_arc_interior(order, u1, v1))

    bprime = _second_block(ctx, c1, must_contain=xrep)
    others = sorted(bprime - {c1}, key=lambda r: (ctx.comp_size(r), r))
    c2 = others[0]
    if ctx.comp_size(c2) == 4:
        got = shortcut_c4_local_c5(ctx, c2, c1, bprime,
                                   c2_gate=(interior, vs1))
        if got is None:
            raise InternalContradiction(
                "4-cycle in the second block admits no merge cycle",
                _dump(g, ctx.s))
        ids, _p, _q, path = got
        s2 = (set(ctx.s) - ctx.comp_edges[c2]) | fids | set(ids) \
            | _ham_path_edges(g, path)
        atts = _attachments(ctx, ids, c1)
        eid = _delete_from_component(ctx, s2, c1,
                                     [(u1, v1), (atts[0], atts[1])])
        return _commit(ctx, s2 - {eid}, "long_cycle_merge")

    got = _anchored_cycle(ctx, c1, c2, gate1=(interior, vs1),
                          allowed=bprime)
    if got is None:
        raise InternalContradiction(
            "second block admits no anchored cycle", _dump(g, ctx.s))
    ids, _, _ = got
    if len(_cycle_comps(ctx, ids)) < min(3, len(bprime)):
        grown = _extend_cycle(ctx, ids, bprime, 3)
        gat = _attachments(ctx, grown, c1)
        if len(gat) == 2 and gat[0] != gat[1] \
                and (gat[0] in interior or gat[1] in interior):
            ids = grown
    bound = _comp_credit(ctx, c1) + _comp_credit(ctx, c2) \
        + Fraction(len(ids), 4) - Fraction(14, 4)
    if bound >= 0:
        s2 = set(ctx.s) | fids | set(ids)
        atts = _attachments(ctx, ids, c1)
        eid = _delete_from_component(ctx, s2, c1,
                                     [(u1, v1), (atts[0], atts[1])])
        return _commit(ctx, s2 - {eid}, "long_cycle_merge")

    # degenerate: a 6-cycle hanging between the anchor and one pendant
    # 5-cycle in a 2-component second block
    if not (m1 == 6 and ctx.comp_size(c2) == 5 and len(ids) == 2
            and bprime == frozenset({c1, c2})):
        raise InternalContradiction(
            "under-paying two-block merge outside the degenerate shape",
            _dump(g, ctx.s))
    rot = order[pos[u1]:] + order[:pos[u1]]
    if rot[1] != x1:
        rot = [rot[0]] + rot[1:][::-1]
    a = [None] + rot
    if a[3] != v1 or a[5] != w1 or a[2] != x1:
        raise InternalContradiction("6-cycle labelling out of shape",
                                    _dump(g, ctx.s))
    vs2 = ctx.comp_vertices(c2)
    e_b1 = min((e for e in g.incident(x1) if e.other(x1) in vs2),
               key=lambda e: e.id)
    extra = None
    for i in (4, 6, 2):
        for e in sorted(g.incident(a[i]), key=lambda e: e.id):
            if e.other(a[i]) in vs2 and e.id != e_b1.id \
                    and (i != 2 or e.other(a[i]) != e_b1.other(x1)):
                extra = (i, e)
                break
        if extra:
            break
    csub = g.spanning(ctx.comp_edges[c2])

    def c1_edge(p, q):
        return min(e.id for e in g.edges_between(p, q)
                   if e.id in ctx.comp_edges[c1])

    if extra is not None and extra[0] in (4, 6):
        i, e2x = extra
        if i == 4:
            gone = {c1_edge(a[1], a[2]), c1_edge(a[3], a[4])}
        else:
            gone = {c1_edge(a[3], a[2]), c1_edge(a[1], a[6])}
        s2 = (set(ctx.s) - gone) | fids | {e_b1.id, e2x.id}
        return _commit(ctx, s2, "degenerate_rewire")
    if extra is not None:
        # a second edge from x1 into the 5-cycle: trade one 5-cycle edge
        # for a matched pair of cross edges, then delete a 6-cycle edge
        pick = None
        for ex in sorted((e for e in g.incident(x1) if e.other(x1) in vs2),
                         key=lambda e: e.id):
            b = ex.other(x1)
            for bp in sorted(csub.neighbors(b)):
                cands = sorted((e for e in g.edges()
                                if e.id not in ctx.comp_edges[c1]
                                and {e.u, e.v} & (vs1 - {x1})
                                and bp in (e.u, e.v)),
                               key=lambda e: e.id)
                if cands:
                    pick = (ex, b, bp, cands[0])
                    break
            if pick:
                break
        if pick is None:
            raise InternalContradiction(
                "no matched cross pair into the pendant 5-cycle",
                _dump(g, ctx.s))
        ex, b, bp, e_far = pick
        afar = e_far.u if e_far.u in vs1 else e_far.v
        bb = min(e.id for e in csub.edges_between(b, bp))
        s2 = (set(ctx.s) - {bb}) | fids | {ex.id, e_far.id}
        eid = _delete_from_component(ctx, s2, c1, [(u1, v1), (x1, afar)])
        return _commit(ctx, s2 - {eid}, "degenerate_rewire")

    # two pendant 5-cycles: rewire both onto the 6-cycle, anchor untouched
    third = None
    for i in (2, 4, 6):
        for e in sorted(g.incident(a[i]), key=lambda e: e.id):
            rep = ctx.ghat.node_of(e.other(a[i]))
            if rep not in (c1, C, c2):
                third = rep
                break
        if third:
            break
    if third is None or ctx.comp_size(third) != 5:
        raise InternalContradiction(
            "missing second pendant 5-cycle in the degenerate shape",
            _dump(g, ctx.s))
    gone: Set[int] = set()
    take: Set[int] = set()
    for rep in (c2, third):
        cs = g.spanning(ctx.comp_edges[rep])
        found = False
        for ce in sorted(cs.edges(), key=lambda e: e.id):
            h1 = sorted((e for e in g.incident(ce.u)
                         if e.other(ce.u) in vs1), key=lambda e: e.id)
            h2 = sorted((e for e in g.incident(ce.v)
                         if e.other(ce.v) in vs1), key=lambda e: e.id)
            if h1 and h2 and h1[0].id != h2[0].id:
                gone.add(ce.id)
                take.add(h1[0].id)
                take.add(h2[0].id)
                found = True
                break
        if not found:
            raise InternalContradiction(
                "pendant 5-cycle lacks an adjacent attached pair",
                _dump(g, ctx.s))
    s2 = (set(ctx.s) - gone) | take
    return _commit(ctx, s2, "pendant_pair_rewire")


# -- dispatcher ------------------------------------------------------------


def glue_step(g: Graph, s: FrozenSet[int]) -> Tuple[FrozenSet[int], GlueMove]:
    """One merge: pick the anchor block and apply the first rule that fits."""
    ctx = build_context(g, s)
    B, C = ctx.block, ctx.anchor

    got = _find_adjacent_move(ctx)
    if got is not None:
        return got
    for c1 in sorted(B - {C}):
        m1 = ctx.comp_size(c1)
        if m1 == 4 or (m1 == 5 and ctx.local[c1]):
            return glue_c4_local_c5(ctx, c1)
    for c1 in sorted(B - {C}):
        if ctx.comp_size(c1) == 5:
            return glue_nonlocal_c5(ctx, c1)
    if len(B) == 2:
        c1 = next(iter(B - {C}))
        if ctx.comp_size(c1) < 6:
            raise InternalContradiction(
                "short component in a 2-component block fell through",
                _dump(g, s))
        return glue_c6_c7(ctx, c1)
    if any(ctx.comp_size(r) < 6 for r in B):
        raise InternalContradiction(
            "short component fell through every merge rule", _dump(g, s))
    c2 = min(B - {C})
    got = _anchored_cycle(ctx, c2, C, allowed=B)
    if got is None:
        raise InternalContradiction("block admits no cycle through anchor",
                                    _dump(g, s))
    ids = got[0]
    if len(_cycle_comps(ctx, ids)) < min(3, len(B)):
        ids = _extend_cycle(ctx, ids, B, 3)
    if len(_cycle_comps(ctx, ids)) < 3:
        raise InternalContradiction("anchor cycle stuck below 3 components",
                                    _dump(g, s))
    return _commit(ctx, set(s) | set(ids), "cycle_merge")


def glue_all(g: Graph, s: FrozenSet[int]
             ) -> Tuple[FrozenSet[int], List[GlueMove]]:
    """Merge until a single spanning 2EC component remains."""
    moves: List[GlueMove] = []
    cur = frozenset(s)
    ncomp = len(components(g.spanning(cur)))
    budget = ncomp + 1
    while ncomp > 1:
        budget -= 1
        if budget <= 0:
            raise InternalContradiction("merging stalled", _dump(g, cur))
        cur, move = glue_step(g, cur)
        moves.append(move)
        nxt = len(components(g.spanning(cur)))
        if nxt >= ncomp:
            raise InternalContradiction("merge did not reduce components",
                                        _dump(g, cur))
        ncomp = nxt
    sub = g.spanning(cur)
    if sub.n != g.n or not is_2ec(sub):
        raise InternalContradiction("final subgraph is not spanning 2EC",
                                    _dump(g, cur))
    if Fraction(len(cur)) != cover_cost(g, cur) - 2:
        raise InternalContradiction("final size/cost identity broken",
                                    _dump(g, cur))
    return cur, moves
