"""Shared test helpers: independent brute-force oracles and random instances.

The oracles here deliberately re-derive results from first principles (direct
quantifier enumeration, literal formula evaluation) so library optimizations
are checked against something they do not share code with.
"""

from __future__ import annotations

import random
from itertools import combinations

import tomobound.identifiability
from tomobound.model import MonitoringPath, PathSet, build_graph
from tomobound.identifiability import TestingMatrix

# keep pytest from collecting the library function whose name matches test_*
tomobound.identifiability.testing_matrix.__test__ = False


def brute_force_k_identifiable(t: TestingMatrix, v: int, k: int) -> bool:
    """Literal evaluation: for all F1, F2 with |Fj| <= k and F1 and F2 differing
    on v, the ORs of member encodings must differ."""
    subsets = [()]
    for size in range(1, k + 1):
        subsets.extend(combinations(range(t.n), size))

    def sig(fs):
        out = 0
        for j in fs:
            out |= t.columns[j]
        return out

    for f1 in subsets:
        for f2 in subsets:
            if (v in f1) == (v in f2):
                continue
            if sig(f1) == sig(f2):
                return False
    return True


def brute_force_k_identifiable_set(t: TestingMatrix, k: int) -> set[int]:
    return {v for v in range(t.n) if brute_force_k_identifiable(t, v, k)}


def random_instance(rng: random.Random, max_n: int = 12, max_m: int = 4):
    """A random (graph, path set) pair: random walks over a random connected graph."""
    n = rng.randint(2, max_n)
    m = rng.randint(1, max_m)
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for a, b in zip(order, order[1:]):  # random spanning tree keeps it connected
        edges.add((min(a, b), max(a, b)))
    extra = rng.randint(0, n)
    for _ in range(extra):
        a, b = rng.sample(range(n), 2)
        edges.add((min(a, b), max(a, b)))
    g = build_graph(sorted(edges), node_count=n)
    adj = g.adjacency()
    paths = []
    for _ in range(m):
        start = rng.randrange(n)
        seq = [start]
        seen = {start}
        length = rng.randint(1, max(1, n // 2))
        while len(seq) < length:
            steps = [w for w in adj[seq[-1]] if w not in seen]
            if not steps:
                break
            nxt = rng.choice(steps)
            seq.append(nxt)
            seen.add(nxt)
        paths.append(MonitoringPath(tuple(seq)))
    return g, PathSet(tuple(paths))


def random_connected_graph(rng: random.Random, max_n: int = 40):
    n = rng.randint(2, max_n)
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for a, b in zip(order, order[1:]):
        edges.add((min(a, b), max(a, b)))
    for _ in range(rng.randint(0, 2 * n)):
        a, b = rng.sample(range(n), 2)
        edges.add((min(a, b), max(a, b)))
    return build_graph(sorted(edges), node_count=n)
