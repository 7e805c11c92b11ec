"""Random and exhaustive instance generators for tests and sweeps."""

from __future__ import annotations

import heapq
import itertools
import random
from fractions import Fraction

from .errors import BadInputError
from .instance import TreeInstance
from .pruning import PathLink, build_minimal_instance


def prufer_decode(seq, n: int):
    """Edges of the labelled tree on 0..n-1 with Prüfer sequence seq."""
    if n < 2:
        raise BadInputError("need at least two vertices")
    if len(seq) != n - 2:
        raise BadInputError("sequence length must be n - 2")
    degree = [1] * n
    for v in seq:
        if not 0 <= v < n:
            raise BadInputError(f"sequence entry {v} out of range")
        degree[v] += 1
    # degree[v] == 1 + remaining occurrences of v, so a popped vertex
    # never reappears in the suffix and is never pushed back
    heap = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(heap)
    edges = []
    for v in seq:
        leaf = heapq.heappop(heap)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(heap, v)
    a = heapq.heappop(heap)
    b = heapq.heappop(heap)
    edges.append((a, b))
    return edges


def enumerate_trees(n: int):
    """Yield the edge lists of all n**(n-2) labelled trees on 0..n-1."""
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield prufer_decode(seq, n)


def random_tree(n: int, rng: random.Random):
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    seq = [rng.randrange(n) for _ in range(n - 2)]
    return prufer_decode(seq, n)


def random_path_edges(n: int, rng: random.Random):
    order = list(range(n))
    rng.shuffle(order)
    return [(order[i], order[i + 1]) for i in range(n - 1)]


def gen_random(kind: str, n: int, link_count: int, cost_spread: float,
               seed: int, feasible: bool = True, request_count: int = 0):
    """Random instance with log-uniform raw costs quantized to 1/4096.

    With ``feasible`` every tree edge gets a parallel unit-cost link, so
    any request stream can be served.
    """
    if n < 2:
        raise BadInputError("need at least two vertices")
    rng = random.Random(seed)
    root = 0
    if kind == "tree":
        edges = random_tree(n, rng)
    elif kind == "path":
        edges = random_path_edges(n, rng)
        # root at an endpoint so path-only consumers accept the instance
        degree = {}
        for u, v in edges:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        root = min(v for v, d in degree.items() if d == 1)
    else:
        raise BadInputError(f"unknown instance kind {kind!r}")

    raw_links = []
    if feasible:
        for (u, v) in edges:
            raw_links.append((u, v, Fraction(1)))
    spread = max(1.0, cost_spread)
    for _ in range(link_count):
        u = rng.randrange(n)
        v = rng.randrange(n)
        while v == u:
            v = rng.randrange(n)
        val = spread ** rng.random()
        raw_links.append((u, v, Fraction(max(1, round(val * 4096)), 4096)))

    requests = []
    for _ in range(request_count):
        s = rng.randrange(n)
        t = rng.randrange(n)
        while t == s:
            t = rng.randrange(n)
        requests.append((s, t))

    inst = TreeInstance(n=n, edges=edges, root=root,
                        raw_links=raw_links, requests=requests)
    return inst, requests


def random_minimal_path_instance(rng: random.Random, max_edges: int = 64,
                                 max_links: int = 40, max_cls: int = 6):
    """Random feasible minimal path instance for the online batches.

    A full-span rooted link guarantees feasibility; roughly a third of
    the rest start at the root so dominance pruning has work to do.
    """
    m = rng.randint(2, max_edges)
    count = rng.randint(1, max_links - 1)
    raw = [PathLink(left=0, right=m, cost=2 ** max_cls, cls=max_cls, id=0)]
    for i in range(1, count + 1):
        left = 0 if rng.random() < 0.3 else rng.randint(0, m - 1)
        right = rng.randint(left + 1, m)
        cls = rng.randint(0, max_cls)
        raw.append(PathLink(left=left, right=right, cost=2 ** cls, cls=cls, id=i))
    minimal, record = build_minimal_instance(m, raw)
    return minimal, record, raw


def random_request_positions(rng: random.Random, edge_count: int, count: int):
    return [rng.randrange(edge_count) for _ in range(count)]
