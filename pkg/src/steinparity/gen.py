"""Seeded random balanced graphs.

Skeletons come from the pairing (configuration) model on 3n darts, so loops
and parallel edges occur.  Balancing functions are plane-valued
circulations: random vectors on co-tree edges, tree edges solved from the
leaves inward.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .dyadic import ZERO, PlaneVector
from .errors import InvalidInput
from .graph import BalancedGraph, Edge


@dataclass(frozen=True)
class GenConfig:
    vertices: int = 10
    seed: int = 0
    bound: int = 4096
    scale_exp: int = 0
    # >0: co-tree vectors are odd*u + 2^depth*w for one random primitive u,
    # which forces every multiplicity >= depth while keeping primitive cycles
    congruence_depth: int = 0

    def __post_init__(self):
        if self.vertices < 2 or self.vertices % 2:
            raise InvalidInput(f"vertex count must be even and >= 2, got {self.vertices}")
        if self.bound < 1:
            raise InvalidInput("bound must be >= 1")
        if self.scale_exp < 0 or self.congruence_depth < 0:
            raise InvalidInput("exponents must be >= 0")


def random_cubic(config: GenConfig, rng: random.Random | None = None):
    """Random perfect matching of 3n darts -> list of (tail, head) vertex indices."""
    if config.vertices % 2:
        raise InvalidInput("a cubic graph needs an even number of vertices")
    rng = rng or random.Random(config.seed)
    darts = list(range(3 * config.vertices))
    rng.shuffle(darts)
    return [(darts[i] // 3, darts[i + 1] // 3) for i in range(0, len(darts), 2)]


def _spanning_forest(n, skeleton):
    """BFS forest; returns (order, parent_edge) with parent_edge[root] = None."""
    adj = [[] for _ in range(n)]
    for k, (a, b) in enumerate(skeleton):
        if a != b:
            adj[a].append((k, b))
            adj[b].append((k, a))
    parent_edge = [None] * n
    seen = [False] * n
    order = []
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            order.append(v)
            for k, w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    parent_edge[w] = k
                    queue.append(w)
    return order, parent_edge


def _draw(rng, config, direction):
    K = config.bound
    if config.congruence_depth == 0:
        return PlaneVector(rng.randint(-K, K), rng.randint(-K, K))
    step = 1 << config.congruence_depth
    a = rng.randint(-K, K)
    w = PlaneVector(rng.randint(-K, K), rng.randint(-K, K))
    return direction * a + w * step


def _random_primitive(rng, K):
    while True:
        u = PlaneVector(rng.randint(-K, K), rng.randint(-K, K))
        if u.x % 2 or u.y % 2:
            return u


def random_balancing(skeleton, config: GenConfig, rng: random.Random | None = None) -> BalancedGraph:
    rng = rng or random.Random(config.seed)
    n = config.vertices
    order, parent_edge = _spanning_forest(n, skeleton)
    tree = {k for k in parent_edge if k is not None}
    direction = _random_primitive(rng, config.bound) if config.congruence_depth else None
    vec = [None] * len(skeleton)
    for k in range(len(skeleton)):
        if k not in tree:
            vec[k] = _draw(rng, config, direction)

    incident = [[] for _ in range(n)]
    for k, (a, b) in enumerate(skeleton):
        incident[a].append(k)
        incident[b].append(k)
    # leaves first: every other edge at v is known when v's parent edge is solved
    for v in reversed(order):
        pk = parent_edge[v]
        if pk is None:
            continue
        total = ZERO
        for k in incident[v]:
            if k == pk:
                continue
            a, b = skeleton[k]
            if a == b:
                continue  # a loop contributes b + (-b)
            total = total + (vec[k] if b == v else -vec[k])
        a, b = skeleton[pk]
        # dart into v must cancel the rest
        vec[pk] = -total if b == v else total

    scale = 1 << config.scale_exp
    edges = [
        Edge(f"e{k}", f"v{a}", f"v{b}", vec[k] * scale if scale != 1 else vec[k])
        for k, (a, b) in enumerate(skeleton)
    ]
    return BalancedGraph([f"v{i}" for i in range(n)], edges)


def generate(config: GenConfig) -> BalancedGraph:
    rng = random.Random(config.seed)
    return random_balancing(random_cubic(config, rng), config, rng)
