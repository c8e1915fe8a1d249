"""Undirected multigraph with stable edge ids, plus the connectivity toolbox.

Every edge keeps its integer id through subgraph extraction and contraction,
so edge sets produced on derived graphs are directly valid on the original.
Vertices and edges are always iterated in ascending id order; "pick any"
choices elsewhere in the package resolve to the smallest id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

# Ids at or above this are reserved for dummy vertices / virtual edges
# introduced by reductions and never appear in input instances.
VIRTUAL_BASE = 1_000_000_000


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int

    def other(self, w: int) -> int:
        if w == self.u:
            return self.v
        if w == self.v:
            return self.u
        raise ValueError(f"vertex {w} not an endpoint of edge {self.id}")

    @property
    def ends(self) -> Tuple[int, int]:
        return (self.u, self.v) if self.u <= self.v else (self.v, self.u)

    def is_loop(self) -> bool:
        return self.u == self.v


class Graph:
    """Immutable undirected multigraph. Loops and parallel edges allowed."""

    __slots__ = ("_vertices", "_edges", "_adj")

    def __init__(self, vertices: Iterable[int], edges: Iterable[Edge]):
        self._vertices: Tuple[int, ...] = tuple(sorted(set(vertices)))
        self._edges: Dict[int, Edge] = {}
        vset = set(self._vertices)
        adj: Dict[int, List[Edge]] = {v: [] for v in self._vertices}
        for e in sorted(edges, key=lambda e: e.id):
            if e.id in self._edges:
                raise ValueError(f"duplicate edge id {e.id}")
            if e.u not in vset or e.v not in vset:
                raise ValueError(f"edge {e.id} has endpoint outside vertex set")
            self._edges[e.id] = e
            adj[e.u].append(e)
            if not e.is_loop():
                adj[e.v].append(e)
        self._adj = adj

    # -- basic accessors -------------------------------------------------

    @property
    def vertices(self) -> Tuple[int, ...]:
        return self._vertices

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return len(self._edges)

    def edge_ids(self) -> List[int]:
        return sorted(self._edges)

    def edges(self) -> List[Edge]:
        return [self._edges[i] for i in sorted(self._edges)]

    def edge(self, eid: int) -> Edge:
        return self._edges[eid]

    def has_edge(self, eid: int) -> bool:
        return eid in self._edges

    def incident(self, v: int) -> List[Edge]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        # loops count twice
        return len(self._adj[v]) + sum(1 for e in self._adj[v] if e.is_loop())

    def neighbors(self, v: int) -> List[int]:
        seen = set()
        out = []
        for e in self._adj[v]:
            w = e.other(v)
            if w != v and w not in seen:
                seen.add(w)
                out.append(w)
        return sorted(out)

    def edges_between(self, u: int, v: int) -> List[Edge]:
        return [e for e in self._adj[u] if e.other(u) == v and not e.is_loop()]

    def edge_set(self) -> FrozenSet[int]:
        return frozenset(self._edges)

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # -- derivation ------------------------------------------------------

    @staticmethod
    def from_edge_list(n: int, pairs: Sequence[Tuple[int, int]]) -> "Graph":
        """Build a graph on vertices 0..n-1 with edge ids in input order."""
        return Graph(range(n), [Edge(i, u, v) for i, (u, v) in enumerate(pairs)])

    def subgraph(self, edge_ids: Iterable[int],
                 vertices: Optional[Iterable[int]] = None) -> "Graph":
        """Graph with the given edges; vertices default to their endpoints."""
        es = [self._edges[i] for i in edge_ids]
        if vertices is None:
            vs: Set[int] = set()
            for e in es:
                vs.add(e.u)
                vs.add(e.v)
        else:
            vs = set(vertices)
        return Graph(vs, es)

    def spanning(self, edge_ids: Iterable[int]) -> "Graph":
        """Subgraph on the full vertex set of self."""
        return self.subgraph(edge_ids, self._vertices)

    def induced(self, vertex_set: Iterable[int]) -> "Graph":
        vs = set(vertex_set)
        es = [e for e in self.edges() if e.u in vs and e.v in vs]
        return Graph(vs, es)

    def without_edges(self, edge_ids: Iterable[int]) -> "Graph":
        drop = set(edge_ids)
        return Graph(self._vertices, [e for e in self.edges() if e.id not in drop])

    def without_vertices(self, vertex_set: Iterable[int]) -> "Graph":
        drop = set(vertex_set)
        return Graph((v for v in self._vertices if v not in drop),
                     [e for e in self.edges() if e.u not in drop and e.v not in drop])

    def with_edges(self, extra: Iterable[Edge],
                   extra_vertices: Iterable[int] = ()) -> "Graph":
        return Graph(list(self._vertices) + list(extra_vertices),
                     self.edges() + list(extra))

    def contract(self, w: Iterable[int]) -> Tuple["Graph", Dict[int, int]]:
        """Contract vertex set w into a single node (the smallest id in w).

        Loops created by the contraction are dropped; parallel edges are kept
        with their original ids. Returns (graph, vertex map old -> new).
        """
        ws = set(w)
        if not ws:
            raise ValueError("cannot contract empty set")
        rep = min(ws)
        vmap = {v: (rep if v in ws else v) for v in self._vertices}
        edges = []
        for e in self.edges():
            u2, v2 = vmap[e.u], vmap[e.v]
            if u2 == v2:
                continue
            edges.append(Edge(e.id, u2, v2))
        return Graph(sorted(set(vmap.values())), edges), vmap


# -- connectivity primitives ---------------------------------------------


def components(g: Graph) -> List[List[int]]:
    """Connected components as sorted vertex lists, ordered by smallest id."""
    seen: Set[int] = set()
    out = []
    for s in g.vertices:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            v = stack.pop()
            for e in g.incident(v):
                w = e.other(v)
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def bridges(g: Graph) -> Set[int]:
    """Edge ids whose removal disconnects their component.

    Multigraph-aware: an edge with a parallel partner is never a bridge,
    and loops are never bridges. Iterative DFS, lowpoint based.
    """
    disc: Dict[int, int] = {}
    low: Dict[int, int] = {}
    out: Set[int] = set()
    counter = 0
    for root in g.vertices:
        if root in disc:
            continue
        # stack entries: (vertex, incoming edge id, iterator index)
        disc[root] = low[root] = counter
        counter += 1
        stack: List[Tuple[int, int, int]] = [(root, -1, 0)]
        while stack:
            v, in_eid, i = stack.pop()
            inc = g.incident(v)
            advanced = False
            while i < len(inc):
                e = inc[i]
                i += 1
                if e.is_loop():
                    continue
                w = e.other(v)
                if w not in disc:
                    stack.append((v, in_eid, i))
                    disc[w] = low[w] = counter
                    counter += 1
                    stack.append((w, e.id, 0))
                    advanced = True
                    break
                if e.id != in_eid:
                    low[v] = min(low[v], disc[w])
            if not advanced and i >= len(inc):
                # v is finished; propagate lowpoint to parent
                if in_eid != -1:
                    e = g.edge(in_eid)
                    p = e.other(v)
                    if low[v] > disc[p]:
                        out.add(in_eid)
                    low[p] = min(low[p], low[v])
    return out


def is_2ec(g: Graph) -> bool:
    """Connected and bridgeless. A single vertex counts as 2EC."""
    if g.n <= 1:
        return True
    return is_connected(g) and not bridges(g)


def cut_vertices(g: Graph) -> Set[int]:
    """Articulation points, multigraph-aware (parallel edges are one child link)."""
    disc: Dict[int, int] = {}
    low: Dict[int, int] = {}
    out: Set[int] = set()
    counter = 0
    for root in g.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        root_children = 0
        stack: List[Tuple[int, int, int]] = [(root, -1, 0)]
        while stack:
            v, in_eid, i = stack.pop()
            inc = g.incident(v)
            advanced = False
            while i < len(inc):
                e = inc[i]
                i += 1
                if e.is_loop():
                    continue
                w = e.other(v)
                if w not in disc:
                    stack.append((v, in_eid, i))
                    disc[w] = low[w] = counter
                    counter += 1
                    stack.append((w, e.id, 0))
                    if v == root:
                        root_children += 1
                    advanced = True
                    break
                if e.id != in_eid:
                    low[v] = min(low[v], disc[w])
                elif len(g.edges_between(v, w)) > 1:
                    # parallel to the tree edge still gives a back link
                    low[v] = min(low[v], disc[w])
            if not advanced and i >= len(inc):
                if in_eid != -1:
                    p = g.edge(in_eid).other(v)
                    if p != root and low[v] >= disc[p]:
                        out.add(p)
                    low[p] = min(low[p], low[v])
        if root_children >= 2:
            out.add(root)
    return out


def is_2vc(g: Graph) -> bool:
    return g.n >= 3 and is_connected(g) and not cut_vertices(g)


@dataclass
class BlockDecomposition:
    """2EC blocks and bridges of a subgraph.

    blocks: list of (vertex frozenset, edge frozenset), maximal 2EC pieces
    with at least one edge. bridge_ids: the bridges. lonely: vertices on
    bridges only (in no block).
    """
    blocks: List[Tuple[FrozenSet[int], FrozenSet[int]]]
    bridge_ids: FrozenSet[int]
    lonely: FrozenSet[int]


def two_ec_blocks(g: Graph) -> BlockDecomposition:
    br = bridges(g)
    residue = g.without_edges(br)
    blocks = []
    lonely = []
    for comp in components(residue):
        sub = residue.induced(comp)
        if sub.m == 0:
            if len(comp) == 1:
                lonely.append(comp[0])
            continue
        blocks.append((frozenset(comp), sub.edge_set()))
    blocks.sort(key=lambda b: min(b[0]))
    return BlockDecomposition(blocks, frozenset(br), frozenset(lonely))


def two_vertex_cuts(g: Graph) -> List[Tuple[Tuple[int, int], str]]:
    """All 2-vertex cuts with classification 'isolating' / 'non_isolating'.

    {u,v} is a cut if g - {u,v} is disconnected; isolating means exactly two
    components, one of them a single vertex.
    """
    out = []
    vs = g.vertices
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            rest = g.without_vertices((u, v))
            if rest.n == 0:
                continue
            comps = components(rest)
            if len(comps) <= 1:
                continue
            if len(comps) == 2 and min(len(c) for c in comps) == 1:
                out.append(((u, v), "isolating"))
            else:
                out.append(((u, v), "non_isolating"))
    return out


def is_two_cut(g: Graph, u: int, v: int) -> bool:
    rest = g.without_vertices((u, v))
    return rest.n > 0 and len(components(rest)) > 1


def find_irrelevant_edge(g: Graph) -> Optional[Edge]:
    """Smallest-id edge uv such that {u,v} is a 2-vertex cut."""
    for e in g.edges():
        if e.is_loop():
            continue
        if is_two_cut(g, e.u, e.v):
            return e
    return None


@dataclass
class ComponentGraph:
    """Contraction of g where each component of the edge set s is one node.

    Nodes are named by the smallest original vertex of their component.
    Edges keep original g ids; loops dropped, parallels kept.
    """
    graph: Graph
    node_vertices: Dict[int, FrozenSet[int]]   # node -> original vertices
    vertex_node: Dict[int, int]                # original vertex -> node

    def node_of(self, v: int) -> int:
        return self.vertex_node[v]


def component_graph(g: Graph, s_edges: Iterable[int]) -> ComponentGraph:
    s = g.spanning(s_edges)
    node_vertices: Dict[int, FrozenSet[int]] = {}
    vertex_node: Dict[int, int] = {}
    for comp in components(s):
        rep = comp[0]
        node_vertices[rep] = frozenset(comp)
        for v in comp:
            vertex_node[v] = rep
    edges = []
    for e in g.edges():
        a, b = vertex_node[e.u], vertex_node[e.v]
        if a == b:
            continue
        edges.append(Edge(e.id, a, b))
    return ComponentGraph(Graph(node_vertices.keys(), edges),
                          node_vertices, vertex_node)


def hamiltonian_path(g: Graph, w: Iterable[int], u: int, v: int) -> Optional[List[int]]:
    """A Hamiltonian u,v-path in g[w], or None. Bitmask DP, |w| <= 8."""
    ws = sorted(set(w))
    k = len(ws)
    if k > 8:
        raise ValueError("hamiltonian_path capped at 8 vertices")
    if u not in ws or v not in ws:
        return None
    if k == 1:
        return [u] if u == v else None
    if u == v:
        return None
    idx = {x: i for i, x in enumerate(ws)}
    wset = set(ws)
    nbr = [0] * k
    for x in ws:
        for y in g.neighbors(x):
            if y in wset:
                nbr[idx[x]] |= 1 << idx[y]
    ui, vi = idx[u], idx[v]
    full = (1 << k) - 1
    # parent[(mask, last)] for path reconstruction
    start = 1 << ui
    reach: Dict[int, int] = {start: 1 << ui}  # mask -> bitset of possible last vertices
    parent: Dict[Tuple[int, int], int] = {}
    order = sorted(range(1, full + 1), key=lambda m: (bin(m).count("1"), m))
    for mask in order:
        if not (mask & start):
            continue
        lasts = reach.get(mask)
        if not lasts:
            continue
        for last in range(k):
            if not (lasts >> last) & 1:
                continue
            ext = nbr[last] & ~mask
            while ext:
                nxt = (ext & -ext).bit_length() - 1
                ext &= ext - 1
                nm = mask | (1 << nxt)
                prev = reach.get(nm, 0)
                if not (prev >> nxt) & 1:
                    reach[nm] = prev | (1 << nxt)
                    parent[(nm, nxt)] = last
    if not ((reach.get(full, 0) >> vi) & 1):
        return None
    path = [vi]
    mask, last = full, vi
    while mask != start:
        p = parent[(mask, last)]
        mask &= ~(1 << last)
        last = p
        path.append(last)
    path.reverse()
    return [ws[i] for i in path]


def find_cross_matching(g: Graph, v1: Iterable[int], v2: Iterable[int],
                        k: int, require: Optional[int] = None) -> Optional[List[Edge]]:
    """A matching of size >= k among g-edges between v1 and v2, or None.

    Augmenting-path bipartite matching, deterministic. If `require` is given
    (a v1 vertex), its augmentation is attempted first so it stays matched
    whenever some maximum matching covers it.
    """
    a = sorted(set(v1))
    bset = set(v2)
    cross: Dict[int, List[Edge]] = {}
    for x in a:
        cross[x] = [e for e in g.incident(x) if e.other(x) in bset and not e.is_loop()]
    match_b: Dict[int, Tuple[int, Edge]] = {}  # b vertex -> (a vertex, edge)
    match_a: Dict[int, Edge] = {}

    def augment(x: int, seen: Set[int]) -> bool:
        for e in cross[x]:
            y = e.other(x)
            if y in seen:
                continue
            seen.add(y)
            if y not in match_b or augment(match_b[y][0], seen):
                match_b[y] = (x, e)
                match_a[x] = e
                return True
        return False

    order = a
    if require is not None:
        order = [require] + [x for x in a if x != require]
    for x in order:
        augment(x, set())
    out = sorted(match_a.values(), key=lambda e: e.id)
    if len(out) >= k:
        return out[:k] if require is None else out
    return None


def path_avoiding(h: Graph, sources: Iterable[int], targets: Iterable[int],
                  avoid: Iterable[int]) -> Optional[List[Edge]]:
    """BFS path (as edge list) from a source to a target avoiding `avoid`.

    Returns the edge sequence; empty list if some source is itself a target.
    """
    av = set(avoid)
    src = [s for s in sorted(set(sources)) if s not in av]
    tgt = set(targets) - av
    if not src or not tgt:
        return None
    for s in src:
        if s in tgt:
            return []
    prev: Dict[int, Tuple[int, Edge]] = {}
    seen = set(src)
    queue = list(src)
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for e in sorted(h.incident(x), key=lambda e: e.id):
            y = e.other(x)
            if y in av or y in seen or e.is_loop():
                continue
            seen.add(y)
            prev[y] = (x, e)
            if y in tgt:
                path = []
                cur = y
                while cur not in src:
                    px, pe = prev[cur]
                    path.append(pe)
                    cur = px
                path.reverse()
                return path
            queue.append(y)
    return None


def cycle_through_two(b: Graph, x: int, y: int) -> Optional[List[Edge]]:
    """A simple cycle of b containing nodes x and y, as an edge list.

    Two internally node-disjoint x,y-paths found with a unit-capacity flow
    (node splitting). Parallel x,y edges give a 2-cycle. Returns None if no
    such cycle exists (x, y not in a common 2EC piece).
    """
    par = b.edges_between(x, y)
    if len(par) >= 2:
        return [par[0], par[1]]
    paths = _two_vertex_disjoint_paths(b, x, y)
    if paths is None:
        return None
    p1, p2 = paths
    return p1 + list(reversed(p2))


def _two_vertex_disjoint_paths(b: Graph, x: int, y: int
                               ) -> Optional[Tuple[List[Edge], List[Edge]]]:
    """Two internally node-disjoint x,y-paths, or None if fewer exist."""
    net = FlowNet()
    src, snk = ("s",), ("t",)

    def out_node(v):
        return src if v == x else (snk if v == y else ("out", v))

    def in_node(v):
        return src if v == x else (snk if v == y else ("in", v))

    for v in b.vertices:
        if v not in (x, y):
            net.add_arc(("in", v), ("out", v), None)
    for e in b.edges():
        if e.is_loop():
            continue
        net.add_arc(out_node(e.u), in_node(e.v), e)
        net.add_arc(out_node(e.v), in_node(e.u), e)
    if net.max_flow(src, snk, 2) < 2:
        return None
    p1, p2 = net.two_paths(src, snk)
    return p1, p2


class FlowNet:
    """Tiny unit-capacity flow network with edge tags for path recovery.

    Arcs are directed, capacity 1 each. Used for node-disjoint path searches
    on desk-sized component graphs; deterministic (arcs kept in insert order).
    """

    def __init__(self):
        # arc: [head, tail, cap, tag]; reverse arcs at odd indices
        self.arcs: List[List] = []
        self.out: Dict[Tuple, List[int]] = {}

    def add_arc(self, u, v, tag):
        i = len(self.arcs)
        self.arcs.append([u, v, 1, tag])
        self.arcs.append([v, u, 0, tag])
        self.out.setdefault(u, []).append(i)
        self.out.setdefault(v, []).append(i + 1)

    def max_flow(self, src, snk, limit: int) -> int:
        total = 0
        while total < limit:
            prev: Dict[Tuple, int] = {src: -1}
            queue = [src]
            qi = 0
            while qi < len(queue) and snk not in prev:
                u = queue[qi]
                qi += 1
                for ai in self.out.get(u, []):
                    arc = self.arcs[ai]
                    if arc[2] > 0 and arc[1] not in prev:
                        prev[arc[1]] = ai
                        queue.append(arc[1])
            if snk not in prev:
                break
            v = snk
            while v != src:
                ai = prev[v]
                self.arcs[ai][2] -= 1
                self.arcs[ai ^ 1][2] += 1
                v = self.arcs[ai][0]
            total += 1
        return total

    def flow_on(self, ai: int) -> int:
        # forward arcs sit at even indices with original capacity 1
        return 1 - self.arcs[ai][2] if ai % 2 == 0 else 0

    def two_paths(self, src, snk) -> Tuple[List[Edge], List[Edge]]:
        """Decompose a 2-unit flow into two tagged paths (Edge tags only)."""
        used = [False] * len(self.arcs)
        paths = []
        for _ in range(2):
            path: List[Edge] = []
            u = src
            while u != snk:
                step = None
                for ai in self.out.get(u, []):
                    if ai % 2 == 0 and not used[ai] and self.flow_on(ai) > 0:
                        step = ai
                        break
                if step is None:
                    raise AssertionError("flow decomposition failed")
                used[step] = True
                tag = self.arcs[step][3]
                if tag is not None:
                    path.append(tag)
                u = self.arcs[step][1]
            paths.append(path)
        return paths[0], paths[1]
