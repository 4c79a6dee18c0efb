"""Exact min-cost transport by successive shortest augmenting paths.

Supplies and demands are positive Fractions; arcs from every supply atom to
every demand atom have unbounded capacity. Dijkstra runs on reduced costs,
so potentials stay feasible throughout and double as the dual solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

_INF = None  # unreached marker


@dataclass
class TransportSolution:
    cost: Fraction
    plan: list[tuple[int, int, Fraction]]   # (supply atom, demand atom, mass)
    supply_potential: list[Fraction]        # phi_i
    demand_potential: list[Fraction]        # psi_j, with phi_i - psi_j <= c(i, j)


def solve_transport(
    supply: Sequence[Fraction],
    demand: Sequence[Fraction],
    cost: Callable[[int, int], Fraction],
) -> TransportSolution:
    P, Q = len(supply), len(demand)
    if sum(supply) != sum(demand):
        raise ValueError("supply and demand totals differ")
    C = [[Fraction(cost(i, j)) for j in range(Q)] for i in range(P)]
    left = [Fraction(s) for s in supply]
    need = [Fraction(t) for t in demand]
    flow = [[Fraction(0)] * Q for _ in range(P)]
    # node ids: supply atoms 0..P-1, demand atoms P..P+Q-1
    pot = [Fraction(0)] * (P + Q)

    while any(need):
        dist: list = [_INF] * (P + Q)
        prev: list = [None] * (P + Q)
        done = [False] * (P + Q)
        for i in range(P):
            if left[i] > 0:
                dist[i] = Fraction(0)
        while True:
            u = None
            for v in range(P + Q):
                if not done[v] and dist[v] is not None and (u is None or dist[v] < dist[u]):
                    u = v
            if u is None:
                break
            done[u] = True
            if u < P:
                for j in range(Q):
                    v = P + j
                    nd = dist[u] + C[u][j] + pot[u] - pot[v]
                    if dist[v] is None or nd < dist[v]:
                        dist[v], prev[v] = nd, u
            else:
                j = u - P
                for i in range(P):
                    if flow[i][j] > 0:
                        nd = dist[u] - C[i][j] + pot[u] - pot[i]
                        if dist[i] is None or nd < dist[i]:
                            dist[i], prev[i] = nd, u

        target = None
        for j in range(Q):
            if need[j] > 0 and dist[P + j] is not None:
                if target is None or dist[P + j] < dist[target]:
                    target = P + j
        if target is None:
            raise RuntimeError("transport infeasible")
        D = dist[target]
        for v in range(P + Q):
            pot[v] += D if dist[v] is None else min(dist[v], D)

        path = [target]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        path.reverse()
        src = path[0]
        amount = min(left[src], need[target - P])
        for a, b in zip(path, path[1:]):
            if a >= P:  # backward step along existing flow
                amount = min(amount, flow[b][a - P])
        for a, b in zip(path, path[1:]):
            if a < P:
                flow[a][b - P] += amount
            else:
                flow[b][a - P] -= amount
        left[src] -= amount
        need[target - P] -= amount

    plan = [(i, j, flow[i][j]) for i in range(P) for j in range(Q) if flow[i][j] > 0]
    total = sum((m * C[i][j] for i, j, m in plan), Fraction(0))
    return TransportSolution(
        total, plan, [-pot[i] for i in range(P)], [-pot[P + j] for j in range(Q)]
    )
