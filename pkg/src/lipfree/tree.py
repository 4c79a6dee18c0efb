"""Realization of a finite 0-hyperbolic space as its minimal weighted tree.

Node ids ``0 .. n-1`` are the points of the space (same index); Steiner nodes
get ids ``n, n+1, ...`` in creation order. Points are inserted in sorted-label
order, so the output is deterministic for a given space.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import count

from .errors import NotZeroHyperbolic, ParseError
from .metric import FiniteMetricSpace, four_point_check, gromov_product
from .rational import to_fraction

ORIGINAL = "original"
STEINER = "steiner"


@dataclass(frozen=True)
class TreeNode:
    id: int
    kind: str
    point: int | None = None


@dataclass(frozen=True)
class TreePoint:
    """A point of the realized tree: a node, or an interior point of an edge.

    For an edge point, ``offset`` is measured from ``edges[edge][0]``.
    """

    node: int | None = None
    edge: int | None = None
    offset: Fraction = Fraction(0)


@dataclass(frozen=True)
class RealizedTree:
    space: FiniteMetricSpace
    nodes: tuple[TreeNode, ...]
    edges: tuple[tuple[int, int, Fraction], ...]

    @cached_property
    def adjacency(self) -> dict[int, dict[int, Fraction]]:
        adj: dict[int, dict[int, Fraction]] = {node.id: {} for node in self.nodes}
        for u, v, length in self.edges:
            adj[u][v] = length
            adj[v][u] = length
        return adj

    @cached_property
    def _node_dist(self) -> dict[int, dict[int, Fraction]]:
        return {node.id: self._bfs(node.id)[0] for node in self.nodes}

    @cached_property
    def _edge_index(self) -> dict[tuple[int, int], int]:
        index = {}
        for k, (u, v, _) in enumerate(self.edges):
            index[(u, v)] = k
            index[(v, u)] = k
        return index

    def _bfs(self, root: int):
        dist = {root: Fraction(0)}
        parent = {root: None}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in sorted(self.adjacency[u]):
                if v not in dist:
                    dist[v] = dist[u] + self.adjacency[u][v]
                    parent[v] = u
                    queue.append(v)
        return dist, parent

    def degree(self, node: int) -> int:
        return len(self.adjacency[node])

    def is_steiner(self, node: int) -> bool:
        return self.nodes[node].kind == STEINER

    def node_label(self, node: int) -> str:
        rec = self.nodes[node]
        return self.space.labels[rec.point] if rec.kind == ORIGINAL else f"s{node}"

    def path(self, u: int, v: int) -> list[int]:
        """Node sequence of the unique path from ``u`` to ``v``."""
        _, parent = self._bfs(u)
        out = [v]
        while out[-1] != u:
            out.append(parent[out[-1]])
        return out[::-1]

    def node_distance(self, u: int, v: int) -> Fraction:
        return self._node_dist[u][v]

    def edge_between(self, u: int, v: int) -> int:
        return self._edge_index[(u, v)]

    def point_on_path(self, u: int, v: int, t: Fraction) -> TreePoint:
        """The point of the segment [u, v] at distance ``t`` from ``u``."""
        t = Fraction(t)
        walked = Fraction(0)
        nodes = self.path(u, v)
        if t <= 0:
            return TreePoint(node=u)
        for a, b in zip(nodes, nodes[1:]):
            length = self.adjacency[a][b]
            if t == walked + length:
                return TreePoint(node=b)
            if t < walked + length:
                k = self.edge_between(a, b)
                off = t - walked
                if self.edges[k][0] != a:
                    off = length - off
                return TreePoint(edge=k, offset=off)
            walked += length
        return TreePoint(node=v)

    def to_json(self) -> dict:
        nodes = []
        for rec in self.nodes:
            item = {"id": rec.id, "kind": rec.kind}
            if rec.kind == ORIGINAL:
                item["label"] = self.space.labels[rec.point]
            nodes.append(item)
        edges = [{"u": u, "v": v, "len": str(length)} for u, v, length in self.edges]
        return {"nodes": nodes, "edges": edges}


def _as_point(p) -> TreePoint:
    return p if isinstance(p, TreePoint) else TreePoint(node=int(p))


def _normalize(T: RealizedTree, p: TreePoint) -> TreePoint:
    if p.node is not None:
        return p
    u, v, length = T.edges[p.edge]
    if p.offset == 0:
        return TreePoint(node=u)
    if p.offset == length:
        return TreePoint(node=v)
    return p


def tree_distance(T: RealizedTree, p, q) -> Fraction:
    """Exact path length between two tree points (node ids or :class:`TreePoint`)."""
    p, q = _normalize(T, _as_point(p)), _normalize(T, _as_point(q))
    if p.node is not None and q.node is not None:
        return T.node_distance(p.node, q.node)
    if p.node is None and q.node is not None:
        p, q = q, p
    if p.node is not None:
        u, v, length = T.edges[q.edge]
        return min(q.offset + T.node_distance(u, p.node),
                   length - q.offset + T.node_distance(v, p.node))
    if p.edge == q.edge:
        return abs(p.offset - q.offset)
    u1, v1, l1 = T.edges[p.edge]
    u2, v2, l2 = T.edges[q.edge]
    return min(
        a + T.node_distance(x, y) + b
        for x, a in ((u1, p.offset), (v1, l1 - p.offset))
        for y, b in ((u2, q.offset), (v2, l2 - q.offset))
    )


class _Builder:
    def __init__(self):
        self.adj: dict[tuple, dict[tuple, Fraction]] = {}
        self._fresh = count()

    def add_edge(self, u, v, length):
        self.adj.setdefault(u, {})[v] = length
        self.adj.setdefault(v, {})[u] = length

    def remove_edge(self, u, v):
        del self.adj[u][v]
        del self.adj[v][u]

    def steiner(self):
        return ("s", next(self._fresh))

    def rename(self, old, new):
        nbrs = self.adj.pop(old)
        self.adj[new] = nbrs
        for v, length in nbrs.items():
            del self.adj[v][old]
            self.adj[v][new] = length

    def path(self, u, v):
        parent = {u: None}
        queue = deque([u])
        while queue:
            a = queue.popleft()
            if a == v:
                break
            for b in self.adj[a]:
                if b not in parent:
                    parent[b] = a
                    queue.append(b)
        out = [v]
        while out[-1] != u:
            out.append(parent[out[-1]])
        return out[::-1]

    def canonicalize(self):
        # contract zero-length edges, then splice out degree-2 Steiner nodes
        changed = True
        while changed:
            changed = False
            for u in list(self.adj):
                for v, length in list(self.adj.get(u, {}).items()):
                    if length == 0:
                        keep, drop = (u, v) if v[0] == "s" else (v, u)
                        self.remove_edge(u, v)
                        for w, lw in list(self.adj[drop].items()):
                            self.remove_edge(drop, w)
                            self.add_edge(keep, w, lw)
                        del self.adj[drop]
                        changed = True
                        break
                if changed:
                    break
        for u in list(self.adj):
            if u[0] == "s" and len(self.adj[u]) == 2:
                (a, la), (b, lb) = self.adj[u].items()
                self.remove_edge(u, a)
                self.remove_edge(u, b)
                del self.adj[u]
                self.add_edge(a, b, la + lb)


def realize(M: FiniteMetricSpace) -> RealizedTree:
    """Construct the minimal tree containing ``M``.

    Raises :class:`NotZeroHyperbolic` if the four-point condition fails.
    """
    bad = four_point_check(M)
    if bad is not None:
        raise NotZeroHyperbolic(bad)

    order = sorted(M.points(), key=lambda i: M.labels[i])
    b = _Builder()
    root = order[0]
    b.adj[("p", root)] = {}
    inserted = [root]
    for w in order[1:]:
        # attachment depth along [root, x] is the Gromov product (x|w)_root
        best, depth = root, Fraction(0)
        for x in inserted:
            a = gromov_product(M, x, w, root)
            if a > depth:
                best, depth = x, a
        nodes = b.path(("p", root), ("p", best))
        walked = Fraction(0)
        attach = nodes[0]
        for u, v in zip(nodes, nodes[1:]):
            length = b.adj[u][v]
            if depth == walked:
                attach = u
                break
            if depth < walked + length:
                s = b.steiner()
                b.remove_edge(u, v)
                b.add_edge(u, s, depth - walked)
                b.add_edge(s, v, walked + length - depth)
                attach = s
                break
            walked += length
        else:
            attach = nodes[-1]
        pendant = M.d(root, w) - depth
        if pendant > 0:
            b.add_edge(attach, ("p", w), pendant)
        elif attach[0] == "s":
            b.rename(attach, ("p", w))
        else:
            raise NotZeroHyperbolic((root, w, attach[1], w))
        inserted.append(w)
    b.canonicalize()

    n = M.n
    ids: dict[tuple, int] = {("p", i): i for i in range(n)}
    steiners = sorted(k for k in b.adj if k[0] == "s")
    for k, key in enumerate(steiners):
        ids[key] = n + k
    nodes = [TreeNode(i, ORIGINAL, i) for i in range(n)]
    nodes += [TreeNode(n + k, STEINER) for k in range(len(steiners))]
    edges = sorted(
        (min(ids[u], ids[v]), max(ids[u], ids[v]), length)
        for u in b.adj for v, length in b.adj[u].items() if ids[u] < ids[v]
    )
    T = RealizedTree(M, tuple(nodes), tuple(edges))
    for i in range(n):
        for j in range(i + 1, n):
            if T.node_distance(i, j) != M.d(i, j):
                raise NotZeroHyperbolic((i, j, i, j))
    return T


def tree_from_json(M: FiniteMetricSpace, data: dict) -> RealizedTree:
    """Rebuild a tree from its JSON export and check every type invariant."""
    try:
        raw_nodes = sorted(data["nodes"], key=lambda r: r["id"])
        nodes = []
        for rec in raw_nodes:
            if rec["kind"] == ORIGINAL:
                nodes.append(TreeNode(int(rec["id"]), ORIGINAL, M.index(rec["label"])))
            elif rec["kind"] == STEINER:
                nodes.append(TreeNode(int(rec["id"]), STEINER))
            else:
                raise ParseError(f"unknown node kind {rec['kind']!r}")
        edges = tuple(
            (int(e["u"]), int(e["v"]), to_fraction(e["len"])) for e in data["edges"]
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed tree JSON: {exc}") from None
    if [nd.id for nd in nodes] != list(range(len(nodes))):
        raise ParseError("node ids must be 0..k-1")
    if any(nd.point != nd.id for nd in nodes if nd.kind == ORIGINAL) or \
            sum(nd.kind == ORIGINAL for nd in nodes) != M.n:
        raise ParseError("original nodes must be ids 0..n-1 in point order")
    T = RealizedTree(M, tuple(nodes), edges)
    check_tree(T)
    return T


def check_tree(T: RealizedTree) -> None:
    """Raise ``ValueError`` unless T satisfies every RealizedTree invariant."""
    k = len(T.nodes)
    if len(T.edges) != k - 1:
        raise ValueError("edge count is not node count - 1")
    if any(length <= 0 for _, _, length in T.edges):
        raise ValueError("non-positive edge length")
    dist, _ = T._bfs(0)
    if len(dist) != k:
        raise ValueError("tree is disconnected")
    for nd in T.nodes:
        if nd.kind == STEINER and T.degree(nd.id) <= 2:
            raise ValueError(f"Steiner node {nd.id} has degree <= 2")
    M = T.space
    for i in range(M.n):
        for j in range(M.n):
            if T.node_distance(i, j) != M.d(i, j):
                raise ValueError(f"tree distance differs at ({i}, {j})")


def branching_points(T: RealizedTree) -> list[int]:
    return [nd.id for nd in T.nodes if T.degree(nd.id) >= 3]


def missing_branch_points(T: RealizedTree) -> list[int]:
    """Branching nodes of the tree that are not points of the space."""
    return [b for b in branching_points(T) if T.is_steiner(b)]


def segment_interior_points(T: RealizedTree, x: int, y: int) -> list[int]:
    """Points of the space strictly inside the tree path from x to y."""
    return [v for v in T.path(x, y)[1:-1] if not T.is_steiner(v)]


def project(T: RealizedTree, x: int, y: int, w) -> tuple[TreePoint, Fraction]:
    """Metric projection of ``w`` onto the segment [x, y], and ``d(w, proj)``."""
    dxy = T.node_distance(x, y)
    t = (dxy + tree_distance(T, x, w) - tree_distance(T, y, w)) / 2
    t = min(max(t, Fraction(0)), dxy)
    p = _normalize(T, T.point_on_path(x, y, t))
    return p, tree_distance(T, w, p)


def branches_at(T: RealizedTree, b: int) -> list[list[int]]:
    """Points of the space in each component of the tree minus node ``b``.

    One list per neighbour of ``b``, in increasing neighbour id.
    """
    out = []
    for start in sorted(T.adjacency[b]):
        seen = {b, start}
        queue = deque([start])
        pts = []
        while queue:
            u = queue.popleft()
            if not T.is_steiner(u):
                pts.append(T.nodes[u].point)
            for v in T.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        out.append(sorted(pts))
    return out
