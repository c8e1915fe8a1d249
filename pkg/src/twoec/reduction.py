"""Recursive reduction of arbitrary 2EC instances to structured ones.

`reduce` peels off easy structure (small instances, cut vertices, parallel
edges, irrelevant edges, contractible subgraphs, non-isolating 2-vertex
cuts) until what remains is structured, then hands it to the supplied
structured-instance solver and stitches the pieces back together. The
stitched solution is always a 2EC spanning subgraph, and its size obeys the
alpha bound when the solver does.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, FrozenSet, Iterator, List, Optional, Set, Tuple

from .errors import InfeasibleError, InternalContradiction
from .graph import (VIRTUAL_BASE, Edge, Graph, components, cut_vertices,
                    find_irrelevant_edge, is_2ec, is_2vc, two_vertex_cuts)
from .oracle import (OracleBudget, find_contractible_subgraph, min_2ecss,
                     opt_type)

ALPHA_DEFAULT = Fraction(5, 4)

Solver = Callable[[Graph], FrozenSet[int]]


@dataclass(frozen=True)
class CutPartition:
    u: int
    v: int
    v1: FrozenSet[int]
    v2: FrozenSet[int]


@dataclass
class ReductionStep:
    rule: str
    n: int
    m: int
    witness: Tuple = ()
    patch: Tuple[int, ...] = ()


@dataclass
class ReductionTrace:
    steps: List[ReductionStep] = field(default_factory=list)
    dispatched: List[Graph] = field(default_factory=list)

    def record(self, rule: str, g: Graph, witness: Tuple = (),
               patch: Tuple[int, ...] = ()) -> None:
        self.steps.append(ReductionStep(rule, g.n, g.m, witness, patch))


@dataclass
class StructureReport:
    ok: bool
    reason: Optional[str] = None
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


def reduce(g: Graph, alpha: Fraction = ALPHA_DEFAULT, alg: Optional[Solver] = None,
           budget: Optional[OracleBudget] = None
           ) -> Tuple[FrozenSet[int], ReductionTrace]:
    """Solve g by reduction, dispatching structured remainders to alg.

    Returns (edge ids of a 2EC spanning subgraph of g, trace). Raises
    InfeasibleError when g is not 2EC.
    """
    if alpha < Fraction(6, 5):
        raise ValueError("alpha must be at least 6/5")
    if g.n < 3:
        raise InfeasibleError("need at least 3 vertices")
    if not is_2ec(g):
        raise InfeasibleError("input graph is not 2-edge-connected")
    trace = ReductionTrace()
    ids = itertools.count(VIRTUAL_BASE)
    budget = budget or OracleBudget()
    sol = _red(g, alpha, alg, budget, trace, ids)
    sub = g.spanning(sol)
    if not is_2ec(sub):
        raise InternalContradiction("reduction output is not 2EC spanning",
                                    counterexample=g)
    return frozenset(sol), trace


def _small_threshold(alpha: Fraction) -> Fraction:
    return max(Fraction(4) / (alpha - 1), Fraction(5))


def _red(g: Graph, alpha: Fraction, alg: Optional[Solver],
         budget: OracleBudget, trace: ReductionTrace,
         ids: Iterator[int]) -> FrozenSet[int]:
    n = g.n

    if n <= _small_threshold(alpha):
        trace.record("brute_force", g)
        cap = max(budget.vertex_cap, math.floor(_small_threshold(alpha)))
        return min_2ecss(g, OracleBudget(cap, budget.time_cap,
                                         budget.subset_budget))

    cuts1 = cut_vertices(g)
    if cuts1:
        v = min(cuts1)
        comps = components(g.without_vertices({v}))
        v1 = set(comps[0])
        v2 = set().union(*comps[1:])
        trace.record("one_cut", g, witness=(v,))
        s1 = _red(g.induced(v1 | {v}), alpha, alg, budget, trace, ids)
        s2 = _red(g.induced(v2 | {v}), alpha, alg, budget, trace, ids)
        return s1 | s2

    e = _parallel_or_loop(g)
    if e is not None:
        trace.record("parallel_loop", g, witness=(e.id,))
        return _red(g.without_edges([e.id]), alpha, alg, budget, trace, ids)

    ir = find_irrelevant_edge(g)
    if ir is not None:
        trace.record("irrelevant", g, witness=(ir.id,))
        return _red(g.without_edges([ir.id]), alpha, alg, budget, trace, ids)

    h = find_contractible_subgraph(g, alpha, budget)
    if h is not None:
        gc, _vmap = g.contract(h.vertices)
        trace.record("contract", g, witness=tuple(sorted(h.vertices)))
        rec = _red(gc, alpha, alg, budget, trace, ids)
        return frozenset(h.edge_set() | rec)

    pair = _smallest_non_isolating_cut(g)
    if pair is not None:
        cut = partition_non_isolating(g, *pair)
        return handle_two_cut(g, cut, alpha, alg, budget=budget, trace=trace,
                              ids=ids)

    if alg is None:
        raise InternalContradiction("structured instance but no solver given",
                                    counterexample=g)
    trace.record("dispatch_alg", g)
    trace.dispatched.append(g)
    sol = alg(g)
    if not is_2ec(g.spanning(sol)):
        raise InternalContradiction("structured solver output not 2EC",
                                    counterexample=g)
    return frozenset(sol)


def _parallel_or_loop(g: Graph) -> Optional[Edge]:
    """Smallest-id loop, or smallest-id edge duplicating a lower-id edge."""
    seen: Set[Tuple[int, int]] = set()
    for e in g.edges():
        if e.is_loop():
            return e
        key = (min(e.u, e.v), max(e.u, e.v))
        if key in seen:
            return e
        seen.add(key)
    return None


def _smallest_non_isolating_cut(g: Graph) -> Optional[Tuple[int, int]]:
    best = None
    for (u, v), kind in two_vertex_cuts(g):
        if kind == "non_isolating" and (best is None or (u, v) < best):
            best = (u, v)
    return best


def partition_non_isolating(g: Graph, u: int, v: int) -> CutPartition:
    """Split V - {u,v} into two edge-disjoint sides of size >= 2 each."""
    if g.n < 6:
        raise ValueError("need at least 6 vertices")
    comps = sorted(components(g.without_vertices({u, v})),
                   key=lambda c: (len(c), c[0]))
    k = len(comps)
    if k < 2 or (k == 2 and len(comps[0]) < 2):
        raise ValueError(f"{{{u},{v}}} is not a non-isolating 2-vertex cut")
    if k == 2:
        a, b = set(comps[0]), set(comps[1])
    elif k == 3:
        a, b = set(comps[0]) | set(comps[1]), set(comps[2])
    else:
        a = set(comps[0]) | set(comps[1])
        b = set().union(*comps[2:])
    if len(a) > len(b):
        a, b = b, a
    assert 2 <= len(a) <= len(b)
    return CutPartition(u, v, frozenset(a), frozenset(b))


def handle_two_cut(g: Graph, cut: CutPartition, alpha: Fraction = ALPHA_DEFAULT,
                   alg: Optional[Solver] = None,
                   budget: Optional[OracleBudget] = None,
                   trace: Optional[ReductionTrace] = None,
                   ids: Optional[Iterator[int]] = None) -> FrozenSet[int]:
    """Resolve a non-isolating 2-vertex cut by one of the three branches."""
    budget = budget or OracleBudget()
    trace = trace if trace is not None else ReductionTrace()
    ids = ids if ids is not None else itertools.count(VIRTUAL_BASE)
    u, v = cut.u, cut.v
    g1 = g.induced(cut.v1 | {u, v})
    g2 = g.induced(cut.v2 | {u, v})
    contract_thr = Fraction(2) / (alpha - 1)

    if g2.n <= _small_threshold(alpha):
        trace.record("brute_force", g, witness=(u, v))
        return _opt_via_types(g, g1, g2, u, v, budget)

    if g1.n > contract_thr:
        parts = []
        trace.record("two_cut_both_big", g, witness=(u, v))
        step = trace.steps[-1]
        for gi in (g1, g2):
            gic, _ = gi.contract({u, v})
            parts.append(_red(gic, alpha, alg, budget, trace, ids))
        s = parts[0] | parts[1]
        f = _min_patch(g, s, 2)
        step.patch = tuple(sorted(f))
        return s | f

    deadline = budget.deadline()
    opt_1b = opt_type(g1, u, v, "B", g_full=g, deadline=deadline)
    opt_1c = opt_type(g1, u, v, "C", g_full=g, deadline=deadline)

    if opt_1c is not None and (opt_1b is None or len(opt_1c) <= len(opt_1b) - 1):
        eid = next(ids)
        g2pp = g2.with_edges([Edge(eid, u, v)])
        trace.record("two_cut_type_C", g, witness=(u, v))
        step = trace.steps[-1]
        s2 = _red(g2pp, alpha, alg, budget, trace, ids) - {eid}
        s = opt_1c | s2
        f = _min_patch(g, s, 1)
        step.patch = tuple(sorted(f))
        return s | f

    if opt_1b is None:
        raise InternalContradiction("no type-B side at a non-isolating cut",
                                    counterexample=g)
    w = next(ids)
    e1, e2 = next(ids), next(ids)
    g2ppp = g2.with_edges([Edge(e1, u, w), Edge(e2, v, w)], extra_vertices=[w])
    trace.record("two_cut_type_AB", g, witness=(u, v))
    s2 = _red(g2ppp, alpha, alg, budget, trace, ids)
    if e1 not in s2 or e2 not in s2:
        raise InternalContradiction("dummy edges missing from sub-solution",
                                    counterexample=g)
    return opt_1b | (s2 - {e1, e2})


def _min_patch(g: Graph, s: FrozenSet[int], limit: int) -> FrozenSet[int]:
    """Smallest F (|F| <= limit) with s ∪ F 2EC spanning; id order ties."""
    if is_2ec(g.spanning(s)):
        return frozenset()
    rest = [i for i in g.edge_ids() if i not in s]
    for f in rest:
        if is_2ec(g.spanning(s | {f})):
            return frozenset([f])
    if limit >= 2:
        for fa, fb in itertools.combinations(rest, 2):
            if is_2ec(g.spanning(s | {fa, fb})):
                return frozenset([fa, fb])
    raise InternalContradiction("no small patch restores 2-edge-connectivity",
                                counterexample=g)


# Type combinations a solution can induce on the two sides of the cut: a
# type-C side forces a type-A complement, everything else pairs A/B freely.
_TYPE_COMBOS = (("A", "A"), ("A", "B"), ("B", "A"), ("B", "B"),
                ("A", "C"), ("C", "A"))


def _opt_via_types(g: Graph, g1: Graph, g2: Graph, u: int, v: int,
                   budget: OracleBudget) -> FrozenSet[int]:
    """Exact optimum of g decomposed across the cut {u, v}.

    Both sides stay at or below the brute-force size, so the per-side typed
    optima are affordable even when the combined graph is not.
    """
    deadline = budget.deadline()
    best: Optional[Tuple[int, List[int]]] = None
    for t1, t2 in _TYPE_COMBOS:
        r1 = opt_type(g1, u, v, t1, deadline=deadline)
        if r1 is None:
            continue
        r2 = opt_type(g2, u, v, t2, deadline=deadline)
        if r2 is None:
            continue
        cand = sorted(r1 | r2)
        key = (len(cand), cand)
        if best is None or key < best:
            best = key
    if best is None:
        raise InternalContradiction("no compatible type pair across the cut",
                                    counterexample=g)
    sol = frozenset(best[1])
    if not is_2ec(g.spanning(sol)):
        raise InternalContradiction("typed decomposition produced a non-2EC "
                                    "solution", counterexample=g)
    return sol


def is_structured(g: Graph, alpha: Fraction = ALPHA_DEFAULT,
                  budget: Optional[OracleBudget] = None) -> StructureReport:
    """Check the full structured-instance contract, cheapest tests first."""
    for e in g.edges():
        if e.is_loop():
            return StructureReport(False, "loop", e)
    p = _parallel_or_loop(g)
    if p is not None:
        return StructureReport(False, "parallel_edge", p)
    if g.n < Fraction(4) / (alpha - 1):
        return StructureReport(False, "too_small", g.n)
    if not is_2vc(g):
        return StructureReport(False, "not_2vc",
                               min(cut_vertices(g)) if cut_vertices(g) else None)
    ir = find_irrelevant_edge(g)
    if ir is not None:
        return StructureReport(False, "irrelevant_edge", ir)
    for (a, b), kind in two_vertex_cuts(g):
        if kind == "non_isolating":
            return StructureReport(False, "non_isolating_cut", (a, b))
    h = find_contractible_subgraph(g, alpha, budget)
    if h is not None:
        return StructureReport(False, "contractible_subgraph",
                               tuple(sorted(h.vertices)))
    return StructureReport(True)
