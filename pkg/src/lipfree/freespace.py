"""Norms on the Lipschitz-free space F(M) and its dual Lip0(M).

A :class:`FreeVector` ``a`` stands for ``sum_x a_x delta_x`` with the base
point's coefficient implied, so the underlying signed measure has total mass
zero. Its norm is the optimal transport cost between the positive and
negative parts of that measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Mapping, Sequence

from . import lp
from .metric import FiniteMetricSpace
from .transport import solve_transport
from .tree import RealizedTree

_ZERO = Fraction(0)


@dataclass(frozen=True)
class FreeVector:
    coeffs: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(k): Fraction(v) for k, v in self.coeffs.items() if v != 0}
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def from_masses(cls, M: FiniteMetricSpace, masses: Sequence) -> "FreeVector":
        """Drop the base entry of a dense mass vector (its value is implied)."""
        return cls({i: Fraction(v) for i, v in enumerate(masses) if i != M.base})

    @classmethod
    def dirac(cls, M: FiniteMetricSpace, x: int) -> "FreeVector":
        return cls({} if x == M.base else {x: Fraction(1)})

    def masses(self, M: FiniteMetricSpace) -> list[Fraction]:
        out = [_ZERO] * M.n
        for k, v in self.coeffs.items():
            if k == M.base:
                raise ValueError("base point carries no free coordinate")
            out[k] = v
        out[M.base] = -sum(out, _ZERO)
        return out

    def __add__(self, other: "FreeVector") -> "FreeVector":
        keys = set(self.coeffs) | set(other.coeffs)
        return FreeVector({k: self.coeffs.get(k, _ZERO) + other.coeffs.get(k, _ZERO) for k in keys})

    def __neg__(self) -> "FreeVector":
        return FreeVector({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "FreeVector") -> "FreeVector":
        return self + (-other)

    def __mul__(self, s) -> "FreeVector":
        s = Fraction(s)
        return FreeVector({k: v * s for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.coeffs)


def molecule(M: FiniteMetricSpace, x: int, y: int) -> FreeVector:
    """``(delta_x - delta_y) / d(x, y)``."""
    if x == y:
        raise ValueError("molecule needs two distinct points")
    return (FreeVector.dirac(M, x) - FreeVector.dirac(M, y)) * (1 / M.d(x, y))


@dataclass(frozen=True)
class LipFunction:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @classmethod
    def from_values(cls, M: FiniteMetricSpace, values: Sequence) -> "LipFunction":
        f = cls(tuple(values))
        if len(f.values) != M.n:
            raise ValueError("wrong number of values")
        if f.values[M.base] != 0:
            raise ValueError("a Lip0 function must vanish at the base point")
        return f

    def rebased(self, base: int) -> "LipFunction":
        c = self.values[base]
        return LipFunction(tuple(v - c for v in self.values))

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def __add__(self, other: "LipFunction") -> "LipFunction":
        return LipFunction(tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "LipFunction") -> "LipFunction":
        return LipFunction(tuple(a - b for a, b in zip(self.values, other.values)))

    def __mul__(self, s) -> "LipFunction":
        s = Fraction(s)
        return LipFunction(tuple(v * s for v in self.values))

    __rmul__ = __mul__


def lip_norm(M: FiniteMetricSpace, f) -> Fraction:
    """Best Lipschitz constant of ``f`` (a LipFunction or a value sequence)."""
    vals = f.values if isinstance(f, LipFunction) else f
    d = M.dist
    return max(
        (abs(vals[x] - vals[y]) / d[x][y] for x, y in combinations(range(M.n), 2)),
        default=_ZERO,
    )


def lip_norm_witness(M: FiniteMetricSpace, f) -> tuple[Fraction, tuple[int, int] | None]:
    vals = f.values if isinstance(f, LipFunction) else f
    best, pair = _ZERO, None
    for x, y in combinations(range(M.n), 2):
        r = abs(vals[x] - vals[y]) / M.d(x, y)
        if r > best:
            best, pair = r, (x, y)
    return best, pair


def pairing(M: FiniteMetricSpace, a: FreeVector, f) -> Fraction:
    """``<a, f> = sum_{x != base} a_x f(x)`` (f vanishes at the base)."""
    vals = f.values if isinstance(f, LipFunction) else f
    return sum((v * (vals[k] - vals[M.base]) for k, v in a.coeffs.items()), _ZERO)


@dataclass
class FreeNormResult:
    value: Fraction
    plan: list[tuple[int, int, Fraction]]   # (from point, to point, mass)
    dual: LipFunction                       # 1-Lipschitz, pairing(a, dual) == value


def transport_norm(M: FiniteMetricSpace, a: FreeVector) -> FreeNormResult:
    """Free-space norm of ``a`` with its optimal plan and Kantorovich dual witness."""
    masses = a.masses(M)
    pos = [x for x in M.points() if masses[x] > 0]
    neg = [x for x in M.points() if masses[x] < 0]
    if not pos:
        return FreeNormResult(_ZERO, [], LipFunction((_ZERO,) * M.n))
    sol = solve_transport(
        [masses[x] for x in pos],
        [-masses[y] for y in neg],
        lambda i, j: M.d(pos[i], neg[j]),
    )
    # c-transform of the demand potentials: 1-Lipschitz on all of M
    psi = sol.demand_potential
    vals = [min(psi[j] + M.d(x, neg[j]) for j in range(len(neg))) for x in M.points()]
    dual = LipFunction(tuple(vals)).rebased(M.base)
    plan = [(pos[i], neg[j], m) for i, j, m in sol.plan]
    if pairing(M, a, dual) != sol.cost:
        raise RuntimeError("dual certificate does not match transport cost")
    return FreeNormResult(sol.cost, plan, dual)


def free_norm(M: FiniteMetricSpace, a: FreeVector) -> Fraction:
    return transport_norm(M, a).value


def free_norm_lp(M: FiniteMetricSpace, a: FreeVector) -> Fraction:
    """Same norm from the uncapacitated flow LP on the complete graph, via the simplex."""
    masses = a.masses(M)
    arcs = list(permutations(M.points(), 2))
    A_eq = [[(1 if x == v else 0) - (1 if y == v else 0) for x, y in arcs] for v in M.points()]
    res = lp.linprog([M.d(x, y) for x, y in arcs], A_eq=A_eq, b_eq=masses)
    if res.status != lp.OPTIMAL:
        raise RuntimeError(f"flow LP ended {res.status}")
    return res.value


def edge_flows(T: RealizedTree, a: FreeVector) -> list[Fraction]:
    """Net mass on the far side (from the base) of each edge, in edge order."""
    M = T.space
    masses = a.masses(M)
    root = M.base
    dist, parent = T._bfs(root)
    order = sorted(dist, key=lambda v: dist[v], reverse=True)
    below = {v: (masses[v] if not T.is_steiner(v) else _ZERO) for v in dist}
    for v in order:
        p = parent[v]
        if p is not None:
            below[p] += below[v]
    flows = []
    for u, v, _ in T.edges:
        child = v if parent.get(v) == u else u
        flows.append(below[child])
    return flows


def godard_embed(T: RealizedTree, a: FreeVector) -> list[Fraction]:
    """Edge coordinates ``length(e) * flow(e)``; their l1 norm is the free norm."""
    return [length * fl for (_, _, length), fl in zip(T.edges, edge_flows(T, a))]


def free_norm_tree(T: RealizedTree, a: FreeVector) -> Fraction:
    return sum((abs(c) for c in godard_embed(T, a)), _ZERO)


def beyond_points(T: RealizedTree) -> list[list[int]]:
    """For each edge, the points of the space on its side away from the base."""
    M = T.space
    out: list[list[int]] = [[] for _ in T.edges]
    for x in M.points():
        if x == M.base:
            continue
        for k, fl in enumerate(edge_flows(T, FreeVector.dirac(M, x))):
            if fl:
                out[k].append(x)
    return out
