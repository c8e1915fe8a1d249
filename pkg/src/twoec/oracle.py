"""Exact desk-scale solvers.

Branch-and-bound over edge inclusion with degree-deficiency lower bounds.
Used inside the main algorithm (base cases, type optima, contractibility
tests) and as ground truth in the acceptance suite. Ties among equal-size
optima break to the lexicographically smallest edge-id set.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import OracleBudgetError, OracleTimeout
from .graph import Graph, bridges, components, is_2ec, is_connected, two_ec_blocks


@dataclass
class OracleBudget:
    vertex_cap: int = 16
    time_cap: Optional[float] = None  # seconds; None = unlimited
    subset_budget: int = 5_000_000    # connected-subset enumeration guard

    def deadline(self) -> Optional[float]:
        return None if self.time_cap is None else time.monotonic() + self.time_cap


DEFAULT_BUDGET = OracleBudget()


def _check_deadline(deadline: Optional[float]) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise OracleTimeout("oracle time cap exceeded")


# -- minimum 2EC spanning subgraph ----------------------------------------


def min_2ecss(g: Graph, budget: Optional[OracleBudget] = None) -> FrozenSet[int]:
    """Minimum-cardinality 2EC spanning subgraph of g, exact.

    Raises OracleBudgetError above the vertex cap, OracleTimeout past the
    time cap. g must be 2EC.
    """
    budget = budget or DEFAULT_BUDGET
    if g.n > budget.vertex_cap:
        raise OracleBudgetError(
            f"min_2ecss called with n={g.n} > cap {budget.vertex_cap}")
    if not is_2ec(g):
        raise ValueError("min_2ecss input must be 2EC")
    if g.n <= 2:
        return _lex_min_trivial(g)
    return _min_inner_2ec(g, frozenset(), g.edge_ids(), None, budget.deadline())[1]


def _lex_min_trivial(g: Graph) -> FrozenSet[int]:
    if g.n <= 1:
        return frozenset()
    # two vertices: need two parallel edges
    es = g.edge_ids()
    return frozenset(es[:2])


def min_inner_edges(g: Graph, inner: Sequence[int], cap: Optional[int],
                    deadline: Optional[float] = None
                    ) -> Optional[Tuple[int, FrozenSet[int]]]:
    """Minimize |H' ∩ inner| such that (g − inner) ∪ H' is 2EC spanning.

    Edges outside `inner` are free (always present, not counted). Returns
    (count, chosen inner edges) or None if no solution with count <= cap.
    """
    free = frozenset(g.edge_ids()) - set(inner)
    try:
        cnt, sol = _min_inner_2ec(g, free, sorted(inner), cap, deadline)
    except _NoSolution:
        return None
    return cnt, sol


class _NoSolution(Exception):
    pass


class _EdgeArrays:
    """Mutable array view of a graph for the hot search loops."""

    def __init__(self, g: Graph):
        self.vidx = {v: i for i, v in enumerate(g.vertices)}
        self.n = g.n
        es = g.edges()
        self.eids = [e.id for e in es]
        self.pos = {e.id: i for i, e in enumerate(es)}
        self.eu = [self.vidx[e.u] for e in es]
        self.ev = [self.vidx[e.v] for e in es]
        self.adj: List[List[int]] = [[] for _ in range(self.n)]
        for i in range(len(es)):
            self.adj[self.eu[i]].append(i)
            if self.ev[i] != self.eu[i]:
                self.adj[self.ev[i]].append(i)
        self.present = [True] * len(es)
        self.deg = [0] * self.n
        for i in range(len(es)):
            self.deg[self.eu[i]] += 1
            self.deg[self.ev[i]] += 1

    def remove(self, i: int) -> None:
        self.present[i] = False
        self.deg[self.eu[i]] -= 1
        self.deg[self.ev[i]] -= 1

    def restore(self, i: int) -> None:
        self.present[i] = True
        self.deg[self.eu[i]] += 1
        self.deg[self.ev[i]] += 1

    def is_2ec_now(self) -> bool:
        """Connected over all n vertices and bridgeless, on present edges."""
        n = self.n
        if n == 0:
            return True
        disc = [-1] * n
        low = [0] * n
        present = self.present
        adj = self.adj
        eu, ev = self.eu, self.ev
        counter = 0
        disc[0] = low[0] = 0
        counter = 1
        visited = 1
        stack = [(0, -1, 0)]
        while stack:
            v, in_e, it = stack.pop()
            lst = adj[v]
            advanced = False
            while it < len(lst):
                ei = lst[it]
                it += 1
                if not present[ei]:
                    continue
                w = eu[ei] ^ ev[ei] ^ v
                if w == v:
                    continue
                if disc[w] < 0:
                    stack.append((v, in_e, it))
                    disc[w] = low[w] = counter
                    counter += 1
                    visited += 1
                    stack.append((w, ei, 0))
                    advanced = True
                    break
                if ei != in_e and disc[w] < low[v]:
                    low[v] = disc[w]
            if not advanced and it >= len(lst):
                if in_e != -1:
                    p = eu[in_e] ^ ev[in_e] ^ v
                    if low[v] > disc[p]:
                        return False  # bridge
                    if low[v] < low[p]:
                        low[p] = low[v]
        return visited == n


def _max_2matching_size(g: Graph) -> int:
    """Maximum simple 2-matching via the degree-copy gadget and blossom."""
    try:
        import networkx as nx
    except ImportError:
        return 0
    H = nx.Graph()
    for v in g.vertices:
        H.add_node(("v", v, 0))
        H.add_node(("v", v, 1))
    for e in g.edges():
        if e.is_loop():
            continue
        a, b = ("e", e.id, 0), ("e", e.id, 1)
        H.add_edge(a, b)
        for i in (0, 1):
            H.add_edge(("v", e.u, i), a)
            H.add_edge(("v", e.v, i), b)
    m = nx.max_weight_matching(H, maxcardinality=True)
    return len(m) - sum(1 for e in g.edges() if not e.is_loop())


def _min_inner_2ec(g: Graph, free: FrozenSet[int], inner: List[int],
                   cap: Optional[int], deadline: Optional[float]
                   ) -> Tuple[int, FrozenSet[int]]:
    """Core search: keep a subset of `inner` so free ∪ kept is 2EC spanning,
    minimizing |kept|. Iterative deepening on the kept count, with a
    keep-first DFS per target so the first hit is the lexicographically
    smallest witness of the optimum.
    """
    all_ids = g.edge_ids()
    arr = _EdgeArrays(g)
    if not arr.is_2ec_now():
        raise _NoSolution
    asc = [arr.pos[eid] for eid in sorted(inner)]
    n_free = len(all_ids) - len(inner)
    n_steps = [0]

    def removable(i: int) -> bool:
        if arr.n >= 2 and (arr.deg[arr.eu[i]] <= 2 or arr.deg[arr.ev[i]] <= 2):
            return False
        arr.remove(i)
        ok = arr.is_2ec_now()
        arr.restore(i)
        return ok

    def greedy(seq: List[int]) -> int:
        removed: List[int] = []
        for i in seq:
            if removable(i):
                arr.remove(i)
                removed.append(i)
        for i in removed:
            arr.restore(i)
        return len(removed)

    # Upper bound from a few deterministic greedy passes (fixed-seed
    # shuffles included, so repeated runs agree).
    import random as _random
    seqs = [list(reversed(asc)), list(asc),
            sorted(asc, key=lambda i: -(arr.deg[arr.eu[i]] + arr.deg[arr.ev[i]]))]
    shuf_rng = _random.Random(0x2EC)
    for _ in range(5):
        s = list(asc)
        shuf_rng.shuffle(s)
        seqs.append(s)
    ub = len(inner) - max(greedy(seq) for seq in seqs)

    # Committed degrees: free edges plus kept edges. The bound sum tracks
    # sum_v max(2, cd[v]), a floor on twice the final committed edge count
    # (every vertex ends with degree >= 2 when the graph is spanning).
    cd = [0] * arr.n
    inner_pos = set(asc)
    for i in range(len(arr.eids)):
        if i not in inner_pos:
            cd[arr.eu[i]] += 1
            cd[arr.ev[i]] += 1
    floor2 = 2 if arr.n >= 2 else 0
    bsum = sum(max(floor2, d) for d in cd)

    # Lower bound on the optimum kept count.
    lb = max(0, (bsum + 1) // 2 - n_free)
    if n_free == 0 and g.n >= 2:
        lb = max(lb, g.n, 2 * g.n - _max_2matching_size(g))

    kept: List[int] = []
    nverts = arr.n

    def dfs(idx: int, k: int) -> bool:
        nonlocal bsum
        n_steps[0] += 1
        if n_steps[0] % 256 == 0:
            _check_deadline(deadline)
        if len(kept) > k or (bsum + 1) // 2 > n_free + k:
            return False
        if idx == len(asc):
            return len(kept) == k and arr.is_2ec_now()
        if len(kept) + (len(asc) - idx) < k:
            return False
        i = asc[idx]
        # keep branch first: first complete solution is lex-min
        kept.append(i)
        delta = 0
        for v in (arr.eu[i], arr.ev[i]):
            if cd[v] >= floor2:
                delta += 1
            cd[v] += 1
        bsum += delta
        if dfs(idx + 1, k):
            return True
        bsum -= delta
        cd[arr.eu[i]] -= 1
        cd[arr.ev[i]] -= 1
        kept.pop()
        # remove branch: the availability graph must stay 2EC
        arr.remove(i)
        ok = (nverts < 2 or (arr.deg[arr.eu[i]] >= 2 and arr.deg[arr.ev[i]] >= 2)) \
            and arr.is_2ec_now() and dfs(idx + 1, k)
        if not ok:
            arr.restore(i)
        return ok

    hi = ub if cap is None else min(ub, cap)
    for k in range(lb, hi + 1):
        if dfs(0, k):
            chosen = frozenset(arr.eids[i] for i in kept)
            for i in asc:
                if i not in kept:
                    arr.restore(i)
            return k, chosen
    raise _NoSolution


# -- minimum triangle-free 2-edge cover -----------------------------------


def min_tf2ec(g: Graph, forced: Iterable[int] = (),
              deadline: Optional[float] = None) -> FrozenSet[int]:
    """Minimum triangle-free 2-edge cover of g containing `forced`.

    Every vertex gets degree >= 2; no connected component of the result is a
    triangle. Branch and bound with unit propagation on degree deficiencies.
    Raises ValueError when no cover exists (some vertex of degree < 2).
    """
    forced = frozenset(forced)
    for v in g.vertices:
        if g.degree(v) < 2:
            raise ValueError(f"vertex {v} has degree < 2; no 2-edge cover")
    solver = _Tf2ecSolver(g, forced, deadline)
    result = solver.run()
    if result is None:
        raise ValueError("no triangle-free 2-edge cover containing forced set")
    return result


class _Tf2ecSolver:
    """DFS with unit propagation; minimizes kept edges.

    Edge states: 0 undecided, 1 kept, -1 removed. A vertex with deficiency d
    and exactly d available undecided edges forces them in; a vertex that
    cannot reach degree 2 fails the branch.
    """

    def __init__(self, g: Graph, forced: FrozenSet[int],
                 deadline: Optional[float]):
        self.g = g
        self.forced = forced
        self.deadline = deadline
        self.eids = g.edge_ids()
        self.best: Optional[List[int]] = None
        self.steps = 0

    def run(self) -> Optional[FrozenSet[int]]:
        state: Dict[int, int] = {eid: 0 for eid in self.eids}
        for eid in self.forced:
            state[eid] = 1
        if self._propagate(state) is None:
            return None
        self._dfs(state)
        return None if self.best is None else frozenset(self.best)

    # -- helpers ---------------------------------------------------------

    def _deg(self, state: Dict[int, int], v: int, want: int) -> int:
        return sum(1 for e in self.g.incident(v) if state[e.id] == want)

    def _propagate(self, state: Dict[int, int]) -> Optional[bool]:
        """Force/fail on degree constraints. None on contradiction."""
        dirty = True
        while dirty:
            dirty = False
            for v in self.g.vertices:
                kept = avail = 0
                for e in self.g.incident(v):
                    s = state[e.id]
                    if s == 1:
                        kept += 1
                    elif s == 0:
                        avail += 1
                need = 2 - kept
                if need > 0:
                    if avail < need:
                        return None
                    if avail == need:
                        for e in self.g.incident(v):
                            if state[e.id] == 0:
                                state[e.id] = 1
                        dirty = True
        return True

    def _lower_bound(self, state: Dict[int, int]) -> int:
        kept_cnt = sum(1 for s in state.values() if s == 1)
        deficiency = 0
        for v in self.g.vertices:
            kept = sum(1 for e in self.g.incident(v) if state[e.id] == 1)
            if kept < 2:
                deficiency += 2 - kept
        return kept_cnt + (deficiency + 1) // 2

    def _triangle_components(self, state: Dict[int, int]) -> List[FrozenSet[int]]:
        sub = self.g.spanning([eid for eid, s in state.items() if s == 1])
        out = []
        for comp in components(sub):
            if len(comp) == 3:
                inner = sub.induced(comp)
                if inner.m == 3 and all(inner.degree(v) == 2 for v in comp):
                    out.append(frozenset(comp))
        return out

    def _record(self, state: Dict[int, int]) -> None:
        kept = sorted(eid for eid, s in state.items() if s == 1)
        if self.best is None or len(kept) < len(self.best) or \
                (len(kept) == len(self.best) and kept < self.best):
            self.best = kept

    # -- search ----------------------------------------------------------

    def _dfs(self, state: Dict[int, int]) -> None:
        self.steps += 1
        if self.steps % 128 == 0:
            _check_deadline(self.deadline)
        best_len = None if self.best is None else len(self.best)
        if best_len is not None and self._lower_bound(state) > best_len:
            return
        # find the most constrained deficient vertex
        pick_v = None
        pick_key = None
        for v in self.g.vertices:
            kept = avail = 0
            for e in self.g.incident(v):
                s = state[e.id]
                if s == 1:
                    kept += 1
                elif s == 0:
                    avail += 1
            if kept < 2:
                key = (avail, v)
                if pick_key is None or key < pick_key:
                    pick_key = key
                    pick_v = v
        if pick_v is not None:
            cand = [e for e in self.g.incident(pick_v) if state[e.id] == 0]
            # branch: keep cand[0] / remove cand[0]
            eid = min(c.id for c in cand)
            for choice in (1, -1):
                child = dict(state)
                child[eid] = choice
                if self._propagate(child) is not None:
                    self._dfs(child)
            return
        # all degree constraints satisfied by kept edges
        tris = self._triangle_components(state)
        if not tris:
            self._record(state)
            return
        if best_len is not None and \
                self._lower_bound(state) + (len(tris) + 1) // 2 > best_len:
            return
        tri = min(tris, key=min)
        escapes = sorted({e.id for v in tri for e in self.g.incident(v)
                          if state[e.id] == 0})
        # some escape edge must be kept; partition on the first kept escape
        for i, eid in enumerate(escapes):
            child = dict(state)
            for prior in escapes[:i]:
                child[prior] = -1
            child[eid] = 1
            if self._propagate(child) is not None:
                self._dfs(child)


# -- maximum triangle-free 2-matching -------------------------------------


def max_tf2matching(g: Graph, deadline: Optional[float] = None) -> FrozenSet[int]:
    """Maximum 2-matching of g containing no triangle, exact.

    A 2-matching is an edge set with every degree <= 2; triangle-free means
    no three of its edges form a triangle. Keep-first branch and bound.
    """
    eids = g.edge_ids()
    best: List[List[int]] = [[]]
    steps = [0]

    def upper_bound(state: Dict[int, int]) -> int:
        kept = sum(1 for s in state.values() if s == 1)
        room = 0
        for v in g.vertices:
            kv = sum(1 for e in g.incident(v) if state[e.id] == 1)
            av = sum(1 for e in g.incident(v) if state[e.id] == 0)
            room += min(max(0, 2 - kv), av)
        undecided = sum(1 for s in state.values() if s == 0)
        return kept + min(undecided, room // 2)

    def ok_to_keep(state: Dict[int, int], eid: int) -> bool:
        e = g.edge(eid)
        if e.is_loop():
            return False
        for v in (e.u, e.v):
            if sum(1 for x in g.incident(v) if state[x.id] == 1) >= 2:
                return False
        # no triangle among kept edges
        ku = {x.other(e.u) for x in g.incident(e.u) if state[x.id] == 1}
        kv = {x.other(e.v) for x in g.incident(e.v) if state[x.id] == 1}
        return not (ku & kv)

    def dfs(state: Dict[int, int], idx: int) -> None:
        steps[0] += 1
        if steps[0] % 256 == 0:
            _check_deadline(deadline)
        kept = sorted(eid for eid, s in state.items() if s == 1)
        if len(kept) > len(best[0]) or \
                (len(kept) == len(best[0]) and kept < best[0]):
            best[0] = kept
        if idx == len(eids):
            return
        if upper_bound(state) < len(best[0]):
            return
        eid = eids[idx]
        if ok_to_keep(state, eid):
            child = dict(state)
            child[eid] = 1
            dfs(child, idx + 1)
        child = dict(state)
        child[eid] = -1
        dfs(child, idx + 1)

    dfs({eid: 0 for eid in eids}, 0)
    return frozenset(best[0])


def check_cover_matching_identity(g: Graph) -> bool:
    """|min tf 2-edge cover| == 2|V| - |max tf 2-matching| on g."""
    h = min_tf2ec(g)
    m = max_tf2matching(g)
    return len(h) == 2 * g.n - len(m)


# -- contractibility ------------------------------------------------------


def is_alpha_contractible(g: Graph, c: Graph, alpha: Fraction,
                          deadline: Optional[float] = None) -> bool:
    """True iff every 2EC spanning subgraph of g keeps >= |E(c)|/alpha edges
    of g[V(c)].

    Computed as: no edge set H' ⊆ E(g[V(c)]) with |H'| < |E(c)|/alpha makes
    (g − E(g[V(c)])) ∪ H' 2EC spanning. c must itself be 2EC.
    """
    if not is_2ec(c):
        return False
    w = set(c.vertices)
    inner = [e.id for e in g.edges() if e.u in w and e.v in w]
    threshold = Fraction(c.m) / alpha
    cap = math.ceil(threshold) - 1  # largest size strictly below threshold
    if cap < 0:
        return True
    return min_inner_edges(g, inner, cap, deadline) is None


def find_contractible_subgraph(g: Graph, alpha: Fraction,
                               budget: Optional[OracleBudget] = None
                               ) -> Optional[Graph]:
    """Smallest-witness alpha-contractible 2EC subgraph on <= 2/(alpha-1)
    vertices, or None.

    Enumerates connected vertex sets (ascending minimum id, then extension
    order); for each set W whose induced graph is 2EC, tests whether the
    minimum 2EC spanning subgraph C of g[W] is contractible, i.e. whether no
    H' ⊆ E(g[W]) with |H'| < |E(C)|/alpha restores 2EC of g with g[W]'s
    edges dropped. Budget-guarded; exhaustion is fatal.
    """
    budget = budget or DEFAULT_BUDGET
    kmax_frac = Fraction(2) / (alpha - 1)
    kmax = math.floor(kmax_frac)
    examined = [0]
    for w in _connected_subsets(g, kmax, budget, examined):
        if len(w) < 3:
            continue
        sub = g.induced(w)
        # cheap filters before the expensive test
        if sub.m < len(w):
            continue
        if any(sub.degree(v) < 2 for v in w):
            continue
        if not is_2ec(sub):
            continue
        c_edges = min_2ecss(sub, OracleBudget(vertex_cap=kmax))
        c = g.subgraph(c_edges, w)
        threshold = Fraction(len(c_edges)) / alpha
        cap = math.ceil(threshold) - 1
        inner = [e.id for e in sub.edges()]
        if cap < 0 or min_inner_edges(g, inner, cap) is None:
            return c
    return None


def _connected_subsets(g: Graph, kmax: int, budget: OracleBudget,
                       examined: List[int]):
    """All connected vertex sets of size <= kmax, each exactly once.

    For each anchor v (ascending), sets whose minimum vertex is v, grown by
    neighborhood extension with a forbidden set to kill duplicates.
    """
    for v in g.vertices:
        allowed = {u for u in g.vertices if u > v}

        def grow(current: Set[int], ext: List[int], banned: Set[int]):
            examined[0] += 1
            if examined[0] > budget.subset_budget:
                raise OracleBudgetError("connected-subset enumeration budget exhausted")
            yield frozenset(current)
            if len(current) == kmax:
                return
            local_ban = set(banned)
            for i, u in enumerate(ext):
                new_ext = list(ext[i + 1:])
                seen = set(new_ext) | current | local_ban | {u}
                for x in g.neighbors(u):
                    if x in allowed and x not in seen:
                        new_ext.append(x)
                        seen.add(x)
                yield from grow(current | {u}, new_ext, local_ban)
                local_ban.add(u)

        ext0 = sorted(x for x in g.neighbors(v) if x in allowed)
        yield from grow({v}, ext0, set())


# -- type classification and type optima ----------------------------------


def classify_type(h: Graph, u: int, v: int) -> Optional[str]:
    """Type of spanning subgraph h w.r.t. the 2-cut pair {u, v}.

    'A': h is 2EC (one super-node). 'B': contracting each 2EC block gives a
    path whose end super-nodes contain u and v respectively. 'C': exactly two
    components, each 2EC (possibly single vertices), one holding u, one v.
    None: anything else.
    """
    comps = components(h)
    if len(comps) == 1:
        if is_2ec(h):
            return "A"
        # candidate for B: block path with u, v at the ends
        dec = two_ec_blocks(h)
        # build the bridge tree over super-nodes
        node_of: Dict[int, int] = {}
        for bi, (vs, _es) in enumerate(dec.blocks):
            for x in vs:
                node_of[x] = bi
        next_id = len(dec.blocks)
        for x in dec.lonely:
            node_of[x] = next_id
            next_id += 1
        deg: Dict[int, int] = {i: 0 for i in range(next_id)}
        seen_pairs = set()
        for beid in dec.bridge_ids:
            e = h.edge(beid)
            a, b = node_of[e.u], node_of[e.v]
            deg[a] += 1
            deg[b] += 1
            seen_pairs.add((min(a, b), max(a, b)))
        if len(seen_pairs) != len(dec.bridge_ids):
            return None  # parallel bridges impossible anyway
        # path: all degrees <= 2, exactly two endpoints of degree 1 (or a
        # single node), u and v in the end super-nodes
        ends = [i for i, d in deg.items() if d == 1]
        if any(d > 2 for d in deg.values()) or len(ends) != 2:
            return None
        eu, ev = node_of[u], node_of[v]
        if {eu, ev} == set(ends):
            return "B"
        return None
    if len(comps) == 2:
        cu = next((c for c in comps if u in c), None)
        cv = next((c for c in comps if v in c), None)
        if cu is None or cv is None or cu is cv:
            return None
        for c in comps:
            if not is_2ec(h.induced(c)):
                return None
        return "C"
    return None


def opt_type(g1: Graph, u: int, v: int, t: str,
             g_full: Optional[Graph] = None,
             deadline: Optional[float] = None) -> Optional[FrozenSet[int]]:
    """Minimum spanning subgraph of g1 of type t w.r.t. {u, v}, or None.

    When g_full is given, defined-ness additionally requires the complement
    side G2 = g_full − (V(g1) ∖ {u,v}) to admit a compatible type: 2EC for
    t='C' (pairs with type A), type A or B overall for t='B'/'A'.
    """
    if g_full is not None:
        g2 = g_full.without_vertices(set(g1.vertices) - {u, v})
        t2 = classify_type(g2, u, v)
        if t == "C":
            if not is_2ec(g2):
                return None
        else:
            if t2 not in ("A", "B"):
                return None
    return _opt_typed(g1, u, v, t, deadline)


def _opt_typed(g1: Graph, u: int, v: int, t: str,
               deadline: Optional[float]) -> Optional[FrozenSet[int]]:
    eids = g1.edge_ids()
    best: List[Optional[List[int]]] = [None]
    steps = [0]
    # per-type degree targets for u and v
    uv_target = {"A": 2, "B": 1, "C": 0}[t]

    def lower_bound(kept: List[int]) -> int:
        sub = g1.spanning(kept)
        deficiency = 0
        for w in g1.vertices:
            target = 2 if w not in (u, v) else uv_target
            d = sub.degree(w)
            if d < target:
                deficiency += target - d
        return len(kept) + (deficiency + 1) // 2

    def dfs(idx: int, kept: List[int]) -> None:
        steps[0] += 1
        if steps[0] % 256 == 0:
            _check_deadline(deadline)
        cur_best = best[0]
        if cur_best is not None and lower_bound(kept) > len(cur_best):
            return
        avail = g1.spanning(kept + eids[idx:])
        for w in g1.vertices:
            target = 2 if w not in (u, v) else uv_target
            if avail.degree(w) < target:
                return
        if t in ("A", "B") and not is_connected(avail):
            return
        if idx == len(eids):
            if classify_type(g1.spanning(kept), u, v) == t:
                ks = sorted(kept)
                if cur_best is None or len(ks) < len(cur_best) or \
                        (len(ks) == len(cur_best) and ks < cur_best):
                    best[0] = ks
            return
        # remove-first: small solutions early
        dfs(idx + 1, kept)
        dfs(idx + 1, kept + [eids[idx]])

    dfs(0, [])
    return None if best[0] is None else frozenset(best[0])
