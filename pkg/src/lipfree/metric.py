"""Finite pointed metric spaces with exact rational distances.

Everything here is a pure function of a validated :class:`FiniteMetricSpace`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

from .errors import (
    NegativeOrZeroOffDiagonal,
    NonzeroDiagonal,
    NotSquare,
    NotSymmetric,
    TooFewPoints,
    TriangleViolation,
    MetricError,
)
from .rational import to_fraction


@dataclass(frozen=True)
class FiniteMetricSpace:
    labels: tuple[str, ...]
    base: int
    dist: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def base_label(self) -> str:
        return self.labels[self.base]

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown point {label!r}") from None

    def points(self) -> range:
        return range(self.n)

    def rebased(self, base: int) -> "FiniteMetricSpace":
        return FiniteMetricSpace(self.labels, base, self.dist)

    def scaled(self, factor) -> "FiniteMetricSpace":
        factor = Fraction(factor)
        return FiniteMetricSpace(
            self.labels, self.base, tuple(tuple(v * factor for v in row) for row in self.dist)
        )

    def permuted(self, order: Sequence[int]) -> "FiniteMetricSpace":
        """Relabel so that new point ``k`` is old point ``order[k]``."""
        order = list(order)
        return FiniteMetricSpace(
            tuple(self.labels[i] for i in order),
            order.index(self.base),
            tuple(tuple(self.dist[i][j] for j in order) for i in order),
        )

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "base": self.base_label,
            "dist": [[str(v) for v in row] for row in self.dist],
        }


def validate_metric(labels: Sequence, base, matrix: Sequence[Sequence]) -> FiniteMetricSpace:
    """Build a :class:`FiniteMetricSpace`, raising on the first violated axiom.

    ``base`` may be a label or an index. Checks run in the order: shape,
    labels, diagonal, positivity, symmetry, triangle inequality.
    """
    labels = tuple(str(x) for x in labels)
    n = len(labels)
    if n == 0:
        raise TooFewPoints("empty space")
    if len(set(labels)) != n:
        raise MetricError("labels are not unique")
    if isinstance(base, int) and not isinstance(base, bool):
        if not 0 <= base < n:
            raise MetricError(f"base index {base} out of range")
        b = base
    else:
        if str(base) not in labels:
            raise MetricError(f"base {base!r} is not a label")
        b = labels.index(str(base))
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise NotSquare(f"distance matrix must be {n}x{n}")
    dist = [[to_fraction(v) for v in row] for row in matrix]

    for i in range(n):
        if dist[i][i] != 0:
            raise NonzeroDiagonal(i)
    for i in range(n):
        for j in range(n):
            if i != j and dist[i][j] <= 0:
                raise NegativeOrZeroOffDiagonal(i, j)
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i][j] != dist[j][i]:
                raise NotSymmetric(i, j)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if dist[i][j] > dist[i][k] + dist[k][j]:
                    raise TriangleViolation(i, j, k)
    return FiniteMetricSpace(labels, b, tuple(tuple(row) for row in dist))


def four_point_check(M: FiniteMetricSpace) -> tuple[int, int, int, int] | None:
    """Return ``None`` if M is 0-hyperbolic, else a violating quadruple.

    A returned ``(a, b, c, d)`` satisfies
    ``d(a,b) + d(c,d) > max(d(a,c) + d(b,d), d(b,c) + d(a,d))``.
    """
    d = M.dist
    for a, b, c, e in combinations(range(M.n), 4):
        sums = [
            (d[a][b] + d[c][e], (a, b, c, e)),
            (d[a][c] + d[b][e], (a, c, b, e)),
            (d[a][e] + d[b][c], (a, e, b, c)),
        ]
        top = max(s for s, _ in sums)
        winners = [q for s, q in sums if s == top]
        if len(winners) == 1:
            return winners[0]
    return None


def is_zero_hyperbolic(M: FiniteMetricSpace) -> bool:
    return four_point_check(M) is None


def ultrametric_violation(M: FiniteMetricSpace) -> tuple[int, int, int] | None:
    """First triple ``(x, y, z)`` with ``d(x,y) > max(d(x,z), d(y,z))``, or None."""
    d = M.dist
    for x, y, z in permutations(range(M.n), 3):
        if d[x][y] > max(d[x][z], d[y][z]):
            return (x, y, z)
    return None


def is_ultrametric(M: FiniteMetricSpace) -> bool:
    return ultrametric_violation(M) is None


def sep(M: FiniteMetricSpace) -> Fraction:
    """Half the smallest triangle slack ``d(x,y) + d(x,z) - d(y,z)`` over distinct triples."""
    if M.n < 3:
        raise TooFewPoints("sep needs at least three points")
    d = M.dist
    best = min(
        d[x][y] + d[x][z] - d[y][z] for x, y, z in permutations(range(M.n), 3)
    )
    return best / 2


def sep_witness(M: FiniteMetricSpace) -> tuple[int, int, int]:
    if M.n < 3:
        raise TooFewPoints("sep needs at least three points")
    d = M.dist
    return min(
        permutations(range(M.n), 3),
        key=lambda t: d[t[0]][t[1]] + d[t[0]][t[2]] - d[t[1]][t[2]],
    )


def diam(M: FiniteMetricSpace) -> Fraction:
    return max((v for row in M.dist for v in row), default=Fraction(0))


def gromov_product(M: FiniteMetricSpace, x: int, y: int, w: int) -> Fraction:
    """``(x|y)_w``: the length of the common part of the geodesics from w to x and y."""
    d = M.dist
    return (d[x][w] + d[y][w] - d[x][y]) / 2
