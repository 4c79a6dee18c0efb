"""Banach-Mazur lower bounds between F(M) and l1^n for well-separated finite trees.

For each ordered pair (i, j) the function ``z -> d(x_j, proj_[x_i, x_j](z))``
has Lipschitz constant 1, attained only at the pair itself. Pairwise midpoints
of these functions are strictly inside the dual ball, and a family of 2n + 1
unit vectors whose pairwise midpoints have norm at most ``1 - eps`` cannot sit
in l_inf^n with distortion below ``1 / (1 - eps)`` (l_inf^n's open ball is cut
out by 2n half-spaces, and each half-space can hold at most one of them).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .errors import SeparationZero, TooFewPoints
from .freespace import LipFunction, lip_norm
from .metric import FiniteMetricSpace, diam, sep
from .tree import RealizedTree, project, realize, tree_distance

EXHAUSTIVE_LIMIT = 30


def _require_separated(M: FiniteMetricSpace) -> Fraction:
    if M.n < 3:
        raise TooFewPoints("the bound needs at least three points")
    s = sep(M)
    if s == 0:
        raise SeparationZero("sep(M) = 0: some point lies on a segment between two others")
    return s


def bm_lower_formula(M: FiniteMetricSpace) -> Fraction:
    """``(1 - sep(M) / (4 diam(M)))^-1``, a strict lower bound."""
    s = _require_separated(M)
    return 1 / (1 - s / (4 * diam(M)))


def peaking_family(T: RealizedTree) -> dict[tuple[int, int], LipFunction]:
    """All ``f_ij``, rebased to vanish at the base point, keyed by ordered pair."""
    M = T.space
    _require_separated(M)
    fam = {}
    for i, j in permutations(M.points(), 2):
        vals = []
        for z in M.points():
            p, _ = project(T, i, j, z)
            vals.append(tree_distance(T, j, p))
        fam[(i, j)] = LipFunction(tuple(vals)).rebased(M.base)
    return fam


def midpoint_norm(M: FiniteMetricSpace, f: LipFunction, g: LipFunction) -> Fraction:
    return lip_norm(M, (f + g) * Fraction(1, 2))


@dataclass
class BmCertificate:
    formula_bound: Fraction
    certified_bound: Fraction
    epsilon: Fraction
    selected: list[tuple[int, int]]          # 2n + 1 defining pairs
    worst_pair: tuple[tuple[int, int], tuple[int, int]]
    worst_norm: Fraction
    method: str                              # "exhaustive" or "greedy"
    floor_epsilon: Fraction                  # 1 - max midpoint norm over the whole family


def _first_clique(adj: list[int], k: int) -> list[int] | None:
    """Lexicographically smallest k-clique in a bitmask graph, or None."""
    n = len(adj)

    def grow(chosen, cand):
        if len(chosen) == k:
            return chosen
        while cand:
            if len(chosen) + bin(cand).count("1") < k:
                return None
            v = (cand & -cand).bit_length() - 1
            cand &= ~(1 << v)
            found = grow(chosen + [v], cand & adj[v])
            if found:
                return found
        return None

    return grow([], (1 << n) - 1)


def bm_lower_certified(T: RealizedTree) -> BmCertificate:
    M = T.space
    _require_separated(M)
    n = M.n - 1
    k = 2 * n + 1
    fam = peaking_family(T)
    keys = list(fam)
    N = len(keys)
    mid = [[Fraction(0)] * N for _ in range(N)]
    for a, b in combinations(range(N), 2):
        mid[a][b] = mid[b][a] = midpoint_norm(M, fam[keys[a]], fam[keys[b]])
    floor = max(mid[a][b] for a, b in combinations(range(N), 2))

    if N <= EXHAUSTIVE_LIMIT:
        method = "exhaustive"
        levels = sorted({mid[a][b] for a, b in combinations(range(N), 2)})
        lo, hi = 0, len(levels) - 1
        best = None
        while lo <= hi:
            m = (lo + hi) // 2
            t = levels[m]
            adj = [sum(1 << b for b in range(N) if b != a and mid[a][b] <= t) for a in range(N)]
            clique = _first_clique(adj, k)
            if clique is not None:
                best, hi = clique, m - 1
            else:
                lo = m + 1
        chosen = best
    else:
        method = "greedy"
        chosen = list(range(N))
        while len(chosen) > k:
            worst = max(chosen, key=lambda a: (max(mid[a][b] for b in chosen if b != a), a))
            chosen.remove(worst)

    pair = max(combinations(chosen, 2), key=lambda ab: (mid[ab[0]][ab[1]], -ab[0], -ab[1]))
    worst = mid[pair[0]][pair[1]]
    eps = 1 - worst
    return BmCertificate(
        formula_bound=bm_lower_formula(M),
        certified_bound=1 / worst,
        epsilon=eps,
        selected=[keys[a] for a in chosen],
        worst_pair=(keys[pair[0]], keys[pair[1]]),
        worst_norm=worst,
        method=method,
        floor_epsilon=1 - floor,
    )


def bm_bounds(M: FiniteMetricSpace) -> BmCertificate:
    return bm_lower_certified(realize(M))
