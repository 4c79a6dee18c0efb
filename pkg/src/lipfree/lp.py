"""Dense two-phase simplex over Fractions, with Bland's rule.

Small and slow by design; used for the vertex/extremality cross-checks where
exactness matters more than speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)


@dataclass
class LPResult:
    status: str
    x: list[Fraction] | None = None
    value: Fraction | None = None


def _pivot(rows, obj, basis, r, c):
    pr = rows[r]
    inv = 1 / pr[c]
    if inv != 1:
        rows[r] = pr = [v * inv for v in pr]
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            f = row[c]
            rows[i] = [a - f * b if b else a for a, b in zip(row, pr)]
    for o in obj:
        f = o[c]
        if f != 0:
            o[:] = [a - f * b if b else a for a, b in zip(o, pr)]
    basis[r] = c


def _run(rows, obj, basis, allowed, extra=()):
    """Minimize ``obj[0]``; ``extra`` objective rows are kept in sync."""
    objs = [obj, *extra]
    ncols = len(obj) - 1
    while True:
        enter = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if enter is None:
            return OPTIMAL
        best = None
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED
        _pivot(rows, objs, basis, best[1], enter)


def linprog(c: Sequence, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> LPResult:
    """Minimize ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    c = [Fraction(v) for v in c]
    n = len(c)
    n_ub, n_eq = len(A_ub), len(A_eq)
    m = n_ub + n_eq
    # column layout: x (n) | slacks (n_ub) | artificials
    rows = []
    needs_art = []
    for i in range(n_ub):
        row = [Fraction(v) for v in A_ub[i]] + [_ZERO] * n_ub
        row[n + i] = Fraction(1)
        rhs = Fraction(b_ub[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
            needs_art.append(True)
        else:
            needs_art.append(False)
        rows.append(row + [rhs])
    for i in range(n_eq):
        row = [Fraction(v) for v in A_eq[i]] + [_ZERO] * n_ub
        rhs = Fraction(b_eq[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        needs_art.append(True)
        rows.append(row + [rhs])

    n_art = sum(needs_art)
    total = n + n_ub + n_art
    basis = [0] * m
    k = n + n_ub
    for i, row in enumerate(rows):
        rhs = row.pop()
        row.extend([_ZERO] * n_art)
        if needs_art[i]:
            row[k] = Fraction(1)
            basis[i] = k
            k += 1
        else:
            basis[i] = n + i
        row.append(rhs)

    phase2 = c + [_ZERO] * (n_ub + n_art) + [_ZERO]
    if n_art:
        phase1 = [_ZERO] * (n + n_ub) + [Fraction(1)] * n_art + [_ZERO]
        for i, row in enumerate(rows):
            if needs_art[i]:
                phase1 = [a - b for a, b in zip(phase1, row)]
        _run(rows, phase1, basis, [True] * total, extra=(phase2,))
        if phase1[-1] != 0:
            return LPResult(INFEASIBLE)
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(rows):
            if basis[i] >= n + n_ub:
                col = next((j for j in range(n + n_ub) if rows[i][j] != 0), None)
                if col is None:
                    del rows[i]
                    del basis[i]
                    continue
                _pivot(rows, [phase2], basis, i, col)
            i += 1
    else:
        for i, row in enumerate(rows):
            f = phase2[basis[i]]
            if f != 0:
                phase2 = [a - f * b for a, b in zip(phase2, row)]

    allowed = [j < n + n_ub for j in range(total)]
    status = _run(rows, phase2, basis, allowed)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [_ZERO] * total
    for i, j in enumerate(basis):
        x[j] = rows[i][-1]
    x = x[:n]
    return LPResult(OPTIMAL, x, sum((ci * xi for ci, xi in zip(c, x)), _ZERO))


def is_feasible(A_eq, b_eq, A_ub=(), b_ub=()) -> bool:
    ncols = len(A_eq[0]) if A_eq else len(A_ub[0])
    return linprog([0] * ncols, A_ub, b_ub, A_eq, b_eq).status != INFEASIBLE
