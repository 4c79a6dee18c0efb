"""Deterministic random instance generators for test corpora."""

from __future__ import annotations

import random
from fractions import Fraction

from .metric import FiniteMetricSpace, four_point_check, validate_metric

KINDS = ("random-tree-metric", "random-ultrametric", "perturbed-non-hyperbolic")


def _labels(n):
    return [f"p{i}" for i in range(n)]


def random_tree_metric(size: int, rng: random.Random, leaves_only: bool = False) -> FiniteMetricSpace:
    """Distances between ``size`` sampled nodes of a random weighted tree."""
    total = size + rng.randint(0, size)
    parent = [None] + [rng.randrange(k) for k in range(1, total)]
    length = [None] + [Fraction(rng.randint(1, 12), rng.choice((1, 2, 3, 4))) for _ in range(1, total)]
    depth = [Fraction(0)] * total
    anc = [[0]]
    for v in range(1, total):
        depth[v] = depth[parent[v]] + length[v]
        anc.append(anc[parent[v]] + [v])
    if leaves_only:
        kids = set(p for p in parent if p is not None)
        pool = [v for v in range(total) if v not in kids]
        while len(pool) < size:
            pool.append(rng.choice([v for v in range(total) if v not in pool]))
    else:
        pool = list(range(total))
    chosen = sorted(rng.sample(pool, size))

    def dist(u, v):
        common = [a for a, b in zip(anc[u], anc[v]) if a == b][-1]
        return depth[u] + depth[v] - 2 * depth[common]

    matrix = [[dist(u, v) for v in chosen] for u in chosen]
    return validate_metric(_labels(size), 0, matrix)


def random_ultrametric(size: int, rng: random.Random) -> FiniteMetricSpace:
    """Ultrametric from random hierarchical merges at increasing heights."""
    clusters = [[i] for i in range(size)]
    matrix = [[Fraction(0)] * size for _ in range(size)]
    height = Fraction(0)
    while len(clusters) > 1:
        height += Fraction(rng.randint(1, 6), rng.choice((1, 2)))
        k = 3 if len(clusters) >= 3 and rng.random() < 0.25 else 2
        picked = sorted(rng.sample(range(len(clusters)), k), reverse=True)
        parts = [clusters.pop(i) for i in picked]
        for a in range(len(parts)):
            for b in range(a + 1, len(parts)):
                for x in parts[a]:
                    for y in parts[b]:
                        matrix[x][y] = matrix[y][x] = height
        clusters.append(sorted(sum(parts, [])))
    return validate_metric(_labels(size), 0, matrix)


def cycle_metric(size: int, rng: random.Random) -> FiniteMetricSpace:
    """Shortest-path metric of a weighted cycle that fails the four-point condition."""
    if size < 4:
        raise ValueError("cycle metrics need at least four points")
    for _ in range(1000):
        w = [Fraction(rng.randint(4, 8), rng.choice((1, 2))) for _ in range(size)]
        perimeter = sum(w)
        pos = [sum(w[:i], Fraction(0)) for i in range(size)]
        matrix = [[min(abs(pos[i] - pos[j]), perimeter - abs(pos[i] - pos[j]))
                   for j in range(size)] for i in range(size)]
        M = validate_metric(_labels(size), 0, matrix)
        if four_point_check(M) is not None:
            return M
    raise RuntimeError("could not sample a non-hyperbolic cycle")


def gen_instance(kind: str, size: int, seed: int = 0) -> FiniteMetricSpace:
    rng = random.Random(f"{kind}:{size}:{seed}")
    if kind == "random-tree-metric":
        return random_tree_metric(size, rng)
    if kind == "random-ultrametric":
        return random_ultrametric(size, rng)
    if kind == "perturbed-non-hyperbolic":
        return cycle_metric(size, rng)
    raise ValueError(f"unknown instance kind {kind!r}; choose from {', '.join(KINDS)}")
