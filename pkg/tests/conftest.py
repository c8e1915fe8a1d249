import random

import pytest

from twoec.graph import Graph


def random_2ec_graph(rng, n, extra=None):
    """Random simple 2EC graph: a random Hamiltonian cycle plus chords."""
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = set()
    for i in range(n):
        a, b = perm[i], perm[(i + 1) % n]
        pairs.add((min(a, b), max(a, b)))
    if extra is None:
        extra = rng.randint(0, n)
    cand = [(a, b) for a in range(n) for b in range(a + 1, n)
            if (a, b) not in pairs]
    rng.shuffle(cand)
    for p in cand[:extra]:
        pairs.add(p)
    return Graph.from_edge_list(n, sorted(pairs))


def gnp_2ec(rng, n, p, max_tries=2000):
    """Rejection-sampled G(n,p) conditioned on being simple and 2EC."""
    from twoec.graph import is_2ec
    for _ in range(max_tries):
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)
                 if rng.random() < p]
        g = Graph.from_edge_list(n, pairs)
        if is_2ec(g):
            return g
    raise RuntimeError("could not sample a 2EC graph")


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
