"""Extreme points of the two unit balls, witness pairs, and the l1 verdict.

If every branching node of the realized tree is a point of the space, the
edge coordinates give an isometry onto l1 of dimension ``|M| - 1``. Otherwise
a Steiner branching node yields two extreme molecules at free distance at most
1, and two extreme 1-Lipschitz functions at Lipschitz distance below 2. A
linear isometry would preserve both, and in l1 distinct extreme points are
always at distance exactly 2, so no isometry exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Mapping

from . import lp
from .errors import NoMissingBranchPoint, NormExceedsOne, NotOnePointed
from .freespace import (
    FreeVector,
    LipFunction,
    beyond_points,
    free_norm,
    godard_embed,
    lip_norm,
    molecule,
)
from .metric import FiniteMetricSpace, four_point_check, is_ultrametric
from .tree import (
    RealizedTree,
    branches_at,
    missing_branch_points,
    realize,
    segment_interior_points,
)

ISOMETRIC = "IsometricToL1"
NOT_ISOMETRIC = "NotIsometric"
NOT_HYPERBOLIC = "NotZeroHyperbolic"


# ---------------------------------------------------------------- molecules

def _molecule_vector(M: FiniteMetricSpace, x: int, y: int) -> list[Fraction]:
    v = [Fraction(0)] * M.n
    d = M.d(x, y)
    v[x] += 1 / d
    v[y] -= 1 / d
    return [c for i, c in enumerate(v) if i != M.base]


def is_extreme_molecule_lp(M: FiniteMetricSpace, x: int, y: int) -> bool:
    """Vertex test: is the molecule outside the hull of all other signed molecules?

    The free unit ball is the convex hull of the signed molecules, so a
    molecule is extreme iff it is not a convex combination of the others.
    Works for any finite metric space.
    """
    target = _molecule_vector(M, x, y)
    cols = [_molecule_vector(M, u, v) for u, v in permutations(M.points(), 2) if (u, v) != (x, y)]
    if not cols:
        return True
    rows = [[col[r] for col in cols] for r in range(len(target))]
    rows.append([Fraction(1)] * len(cols))
    return not lp.is_feasible(rows, target + [Fraction(1)])


def is_extreme_molecule_segment(T: RealizedTree, x: int, y: int) -> bool:
    """Tree criterion: no point of the space strictly inside [x, y]."""
    return not segment_interior_points(T, x, y)


def is_extreme_molecule(M: FiniteMetricSpace, x: int, y: int, method: str = "auto",
                        tree: RealizedTree | None = None) -> bool:
    if x == y:
        raise ValueError("molecule needs two distinct points")
    if method == "lp":
        return is_extreme_molecule_lp(M, x, y)
    if method not in ("auto", "segment"):
        raise ValueError(f"unknown method {method!r}")
    if tree is None:
        if method == "auto" and four_point_check(M) is not None:
            return is_extreme_molecule_lp(M, x, y)
        tree = realize(M)
    return is_extreme_molecule_segment(tree, x, y)


def extreme_molecules(T: RealizedTree) -> list[tuple[int, int]]:
    """Unordered pairs whose molecule is extreme."""
    return [(x, y) for x, y in combinations(T.space.points(), 2)
            if is_extreme_molecule_segment(T, x, y)]


# ------------------------------------------------------ Lipschitz functions

def tight_pairs(M: FiniteMetricSpace, f) -> list[tuple[int, int]]:
    vals = f.values if isinstance(f, LipFunction) else f
    return [(x, y) for x, y in combinations(M.points(), 2)
            if abs(vals[x] - vals[y]) == M.d(x, y)]


def is_extreme_lip(M: FiniteMetricSpace, f) -> bool:
    """Extremality in the dual ball via connectivity of the tight graph.

    The active constraints ``f(x) - f(y) = +-d(x, y)`` together with
    ``f(base) = 0`` pin down f exactly when the tight graph is connected.
    """
    norm = lip_norm(M, f)
    if norm > 1:
        raise NormExceedsOne(f"Lipschitz norm {norm} > 1")
    if M.n == 1:
        return True
    if norm < 1:
        return False
    parent = list(M.points())

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for x, y in tight_pairs(M, f):
        parent[find(x)] = find(y)
    return len({find(i) for i in M.points()}) == 1


def is_extreme_lip_lp(M: FiniteMetricSpace, f) -> bool:
    """Perturbation test: f is extreme iff no h != 0 keeps both f + h and f - h feasible.

    Writes h = u - 1 with ``0 <= u <= 2`` on the non-base points and maximizes
    each coordinate of u in turn; the feasible set is symmetric in h, so some
    maximum exceeding 1 is equivalent to a nonzero admissible h.
    """
    vals = f.values if isinstance(f, LipFunction) else tuple(f)
    norm = lip_norm(M, vals)
    if norm > 1:
        raise NormExceedsOne(f"Lipschitz norm {norm} > 1")
    free = [i for i in M.points() if i != M.base]
    col = {p: k for k, p in enumerate(free)}
    m = len(free)
    A, b = [], []
    for x, y in combinations(M.points(), 2):
        slack = M.d(x, y) - abs(vals[x] - vals[y])
        row = [Fraction(0)] * m
        rhs = slack
        if x in col:
            row[col[x]] += 1
            rhs += 1
        if y in col:
            row[col[y]] -= 1
            rhs -= 1
        A.append(row)
        b.append(rhs)
        A.append([-v for v in row])
        b.append(2 * slack - rhs)
    for k in range(m):
        row = [Fraction(0)] * m
        row[k] = Fraction(1)
        A.append(row)
        b.append(Fraction(2))
    for k in range(m):
        c = [Fraction(0)] * m
        c[k] = Fraction(-1)
        res = lp.linprog(c, A, b)
        if res.status != lp.OPTIMAL:
            raise RuntimeError(f"perturbation LP ended with status {res.status}")
        if -res.value > 1:
            return False
    return True


def _check_domain(M: FiniteMetricSpace, A: Iterable[int]) -> list[int]:
    A = sorted(set(A))
    if M.base not in A:
        raise NotOnePointed("extension domain must contain the base point")
    return A


def extend_sup(M: FiniteMetricSpace, A: Iterable[int], f: Mapping[int, Fraction]) -> LipFunction:
    """Smallest 1-Lipschitz extension: ``x -> max_{z in A} f(z) - d(z, x)``."""
    A = _check_domain(M, A)
    return LipFunction(tuple(max(Fraction(f[z]) - M.d(z, x) for z in A) for x in M.points()))


def extend_inf(M: FiniteMetricSpace, A: Iterable[int], f: Mapping[int, Fraction]) -> LipFunction:
    """Largest 1-Lipschitz extension: ``x -> min_{z in A} f(z) + d(z, x)``."""
    A = _check_domain(M, A)
    return LipFunction(tuple(min(Fraction(f[z]) + M.d(z, x) for z in A) for x in M.points()))


# ---------------------------------------------------------------- witnesses

def _branch_representatives(T: RealizedTree, b: int) -> list[tuple[Fraction, int, list[int]]]:
    """(distance to b, closest point, branch points) per branch, nearest first."""
    M = T.space
    reps = []
    for pts in branches_at(T, b):
        p = min(pts, key=lambda w: (T.node_distance(b, w), M.labels[w]))
        reps.append((T.node_distance(b, p), p, pts))
    reps.sort(key=lambda r: (r[0], M.labels[r[1]]))
    return reps


def _require_missing(T: RealizedTree, b: int | None) -> int:
    missing = missing_branch_points(T)
    if b is None:
        if not missing:
            raise NoMissingBranchPoint("every branching node is a point of the space")
        return missing[0]
    if b not in missing:
        raise NoMissingBranchPoint(f"node {b} is not a Steiner branching node")
    return b


@dataclass
class PrimalWitness:
    branch_node: int
    x: int
    y: int
    z: int
    distance: Fraction

    def mu(self, M):
        return molecule(M, self.x, self.y)

    def nu(self, M):
        return molecule(M, self.z, self.y)


def primal_witness(T: RealizedTree, b: int | None = None) -> PrimalWitness:
    """Two extreme molecules through the missing branch node ``b``, at distance <= 1."""
    b = _require_missing(T, b)
    M = T.space
    pts = [r[1] for r in _branch_representatives(T, b)[:3]]
    # name them so that d(x,z) <= d(z,y) <= d(x,y)
    x, y, z = min(
        permutations(pts),
        key=lambda t: (not (M.d(t[0], t[2]) <= M.d(t[2], t[1]) <= M.d(t[0], t[1])),
                       [M.labels[i] for i in t]),
    )
    dist = free_norm(M, molecule(M, x, y) - molecule(M, z, y))
    return PrimalWitness(b, x, y, z, dist)


@dataclass
class DualWitness:
    branch_node: int
    anchor: int        # always the base point; kept explicit for reports
    z: int
    f: LipFunction
    g: LipFunction
    distance: Fraction
    branch: list[int] = field(default_factory=list)   # points on z's side of b


def dual_witness(T: RealizedTree, b: int | None = None) -> DualWitness:
    """Two extreme 1-Lipschitz functions differing only on one branch at ``b``.

    ``z`` is the point nearest to ``b`` among the branches that avoid the base
    point. ``f = d(base, .)`` and ``g`` agrees with f off z's branch and equals
    ``d(base, b) - d(b, z) + d(z, w)`` on it, so ``f - g`` is twice the depth
    of the projection onto [b, z] there.
    """
    b = _require_missing(T, b)
    M = T.space
    reps = [r for r in _branch_representatives(T, b) if M.base not in r[2]]
    _, z, zbranch = reps[0]
    anchor = M.base
    zset = set(zbranch)
    d0b = T.node_distance(anchor, b)
    dbz = T.node_distance(b, z)
    f = LipFunction(tuple(M.d(anchor, w) for w in M.points()))
    g = LipFunction(tuple(d0b - dbz + M.d(z, w) if w in zset else M.d(anchor, w)
                          for w in M.points()))
    return DualWitness(b, anchor, z, f, g, lip_norm(M, f - g), sorted(zbranch))


def dual_witness_by_extension(T: RealizedTree, b: int | None = None) -> LipFunction:
    """The same ``g`` obtained by chaining the sup and inf extensions.

    Distance from the anchor on the complement of z's branch, extended from
    below to that set plus z, then from above to the whole space.
    """
    w = dual_witness(T, b)
    M = T.space
    outside = [p for p in M.points() if p not in set(w.branch)]
    g2 = {p: M.d(w.anchor, p) for p in outside}
    g1 = extend_sup(M, outside, g2)
    dom = outside + [w.z]
    return extend_inf(M, dom, {p: g1[p] for p in dom})


# ------------------------------------------------------------------ verdict

@dataclass
class Certificate:
    verdict: str
    tree: RealizedTree | None = None
    quadruple: tuple[int, int, int, int] | None = None
    missing: list[int] = field(default_factory=list)
    primal: PrimalWitness | None = None
    dual: DualWitness | None = None
    ultrametric: bool = False

    def to_json(self) -> dict:
        from .report import certificate_json
        return certificate_json(self)


def ell1_verdict(M: FiniteMetricSpace) -> Certificate:
    """Decide whether F(M) is isometric to l1 of dimension ``|M| - 1``."""
    quad = four_point_check(M)
    if quad is not None:
        return Certificate(NOT_HYPERBOLIC, quadruple=quad)
    T = realize(M)
    missing = missing_branch_points(T)
    ultra = is_ultrametric(M)
    if not missing:
        if len(T.edges) != M.n - 1:
            raise RuntimeError("no missing branch point but edge count != |M| - 1")
        return Certificate(ISOMETRIC, tree=T, ultrametric=ultra)
    b = missing[0]
    return Certificate(NOT_ISOMETRIC, tree=T, missing=missing,
                       primal=primal_witness(T, b), dual=dual_witness(T, b),
                       ultrametric=ultra)


def godard_coordinates(T: RealizedTree) -> list[dict]:
    """The coordinate map as data: per edge, its length and the points beyond it."""
    M = T.space
    return [
        {"edge": [u, v], "length": length, "beyond": pts}
        for (u, v, length), pts in zip(T.edges, beyond_points(T))
    ]


def apply_coordinates(coords: list[dict], M: FiniteMetricSpace, a: FreeVector) -> list[Fraction]:
    return [c["length"] * sum((a.coeffs.get(p, Fraction(0)) for p in c["beyond"]), Fraction(0))
            for c in coords]


__all__ = [
    "Certificate", "DualWitness", "PrimalWitness", "dual_witness", "dual_witness_by_extension",
    "ell1_verdict", "extend_inf", "extend_sup", "extreme_molecules", "godard_coordinates",
    "godard_embed", "is_extreme_lip", "is_extreme_lip_lp", "is_extreme_molecule",
    "is_extreme_molecule_lp", "is_extreme_molecule_segment", "primal_witness", "tight_pairs",
]
