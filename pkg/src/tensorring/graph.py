"""Tensors in graph-based formats.

Vertex ``v`` owns a core with one external mode of size ``n_v`` followed by
one bond mode per incident edge, ordered by ascending neighbour label.
Vertices are 0-based here; file formats and the CLI use 1-based labels.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import networkx as nx
import numpy as np

from .exceptions import (
    CapacityError,
    DegenerateComponentError,
    DomainError,
    ShapeError,
)
from .linalg import divisors
from .ring import MAX_DENSE_ELEMENTS, TRTensor, round_cores, tr_round

__all__ = [
    "TensorGraph",
    "GraphTensor",
    "CoverElement",
    "CyclePathCover",
    "graph_to_dense",
    "graph_norm",
    "cycle_path_cover",
    "extract_cycle_tensor",
    "g_truncate",
    "insert_graph_edge",
    "GraphFamily",
    "chorded_cycle_family",
    "skip_chain_family",
    "greedy_graph_select",
]


def _key(u: int, v: int) -> tuple:
    return (u, v) if u < v else (v, u)


class TensorGraph:
    """Undirected graph with mode sizes on vertices and ranks on edges."""

    def __init__(self, mode_sizes: Sequence[int], edges: dict):
        self.mode_sizes = tuple(int(n) for n in mode_sizes)
        d = len(self.mode_sizes)
        clean = {}
        for (u, v), r in edges.items():
            u, v, r = int(u), int(v), int(r)
            if u == v:
                raise ShapeError(f"self-loop at vertex {u}")
            if not (0 <= u < d and 0 <= v < d):
                raise ShapeError(f"edge ({u}, {v}) outside vertex range 0..{d - 1}")
            if r < 1:
                raise ShapeError(f"edge ({u}, {v}) has rank {r} < 1")
            k = _key(u, v)
            if k in clean:
                raise ShapeError(f"duplicate edge {k}")
            clean[k] = r
        self.edges = dict(sorted(clean.items()))

    @property
    def d(self) -> int:
        return len(self.mode_sizes)

    def neighbors(self, v: int) -> list:
        return sorted([b if a == v else a for (a, b) in self.edges if v in (a, b)])

    def rank(self, u: int, v: int) -> int:
        return self.edges[_key(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return _key(u, v) in self.edges

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def core_shape(self, v: int) -> tuple:
        return (self.mode_sizes[v],) + tuple(self.rank(v, w) for w in self.neighbors(v))

    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def with_ranks(self, updates: dict) -> "TensorGraph":
        edges = dict(self.edges)
        for (u, v), r in updates.items():
            edges[_key(u, v)] = r
        return TensorGraph(self.mode_sizes, edges)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.d))
        for (u, v), r in self.edges.items():
            g.add_edge(u, v, rank=r)
        return g

    def __eq__(self, other):
        return (
            isinstance(other, TensorGraph)
            and self.mode_sizes == other.mode_sizes
            and self.edges == other.edges
        )

    def __repr__(self):
        return f"TensorGraph(mode_sizes={self.mode_sizes}, edges={self.edges})"

    @classmethod
    def ring(cls, mode_sizes, ranks) -> "TensorGraph":
        """Cycle ``0-1-...-(d-1)-0``; ``ranks[k]`` sits on edge ``(k-1, k)``."""
        d = len(mode_sizes)
        if d < 3:
            raise ShapeError("a ring graph needs at least 3 vertices")
        edges = {(k, k + 1): ranks[k + 1] for k in range(d - 1)}
        edges[(0, d - 1)] = ranks[0]
        return cls(mode_sizes, edges)

    @classmethod
    def chain(cls, mode_sizes, ranks) -> "TensorGraph":
        d = len(mode_sizes)
        return cls(mode_sizes, {(k, k + 1): ranks[k + 1] for k in range(d - 1)})


class GraphTensor:
    """Cores attached to the vertices of a :class:`TensorGraph`."""

    def __init__(self, graph: TensorGraph, cores: Sequence[np.ndarray]):
        if len(cores) != graph.d:
            raise ShapeError(f"{len(cores)} cores for {graph.d} vertices")
        cores = [np.asarray(G, dtype=np.float64) for G in cores]
        for v, G in enumerate(cores):
            if G.shape != graph.core_shape(v):
                raise ShapeError(f"core {v} has shape {G.shape}, graph expects {graph.core_shape(v)}")
        self.graph = graph
        self.cores = cores

    @property
    def d(self) -> int:
        return self.graph.d

    @property
    def shape(self) -> tuple:
        return self.graph.mode_sizes

    @property
    def storage(self) -> int:
        return int(sum(G.size for G in self.cores))

    def full(self, max_elements: Optional[int] = None) -> np.ndarray:
        return graph_to_dense(self, max_elements)

    def norm(self) -> float:
        return graph_norm(self)

    def copy(self) -> "GraphTensor":
        return GraphTensor(self.graph, [G.copy() for G in self.cores])

    def __repr__(self):
        return f"GraphTensor(shape={self.shape}, edges={self.graph.edges})"

    @classmethod
    def from_tr(cls, T: TRTensor, drop_unit_closing: bool = False) -> "GraphTensor":
        """View a tensor ring as a cycle graph.

        With ``drop_unit_closing`` a rank-1 closing bond is removed, giving a
        chain. Two-core rings fuse their two bonds into a single edge.
        """
        cores = T.cores
        d = T.d
        n = T.shape
        if d == 1:
            G = cores[0]
            return cls(TensorGraph(n, {}), [np.einsum("aia->i", G)])
        if d == 2 or (drop_unit_closing and T.ranks[0] == 1):
            if T.ranks[0] == 1:
                g = TensorGraph.chain(n, T.ranks)
                out = [cores[0][0]]
                out += [G.transpose(1, 0, 2) for G in cores[1:-1]]
                out.append(cores[-1][:, :, 0].T)
                return cls(g, out)
            r0, r1 = T.ranks[0], T.ranks[1]
            A = cores[0].transpose(1, 0, 2).reshape(n[0], r0 * r1, order="F")
            B = cores[1].transpose(1, 2, 0).reshape(n[1], r0 * r1, order="F")
            return cls(TensorGraph(n, {(0, 1): r0 * r1}), [A, B])
        g = TensorGraph.ring(n, T.ranks)
        out = [cores[0].transpose(1, 2, 0)]
        out += [G.transpose(1, 0, 2) for G in cores[1:-1]]
        out.append(cores[-1].transpose(1, 2, 0))
        return cls(g, out)

    def to_tr(self) -> TRTensor:
        """Inverse of :meth:`from_tr` for plain rings and chains."""
        d = self.d
        g = self.graph
        ring = {_key(k, k + 1) for k in range(d - 1)}
        if g.edge_set() == frozenset(ring):
            closing = None
        elif d >= 3 and g.edge_set() == frozenset(ring | {(0, d - 1)}):
            closing = g.rank(0, d - 1)
        else:
            raise ShapeError("graph is neither the ring nor the chain over 0..d-1")
        cores = []
        for v, G in enumerate(self.cores):
            labels = ["x"] + g.neighbors(v)
            prev = v - 1 if v > 0 else (d - 1 if closing is not None else None)
            nxt = v + 1 if v < d - 1 else (0 if closing is not None else None)
            A = G
            order = [labels.index(prev) if prev is not None else None, 0,
                     labels.index(nxt) if nxt is not None else None]
            if prev is None:
                A = A[None]
                order = [0] + [i + 1 if i is not None else None for i in order[1:]]
            if nxt is None:
                A = A[..., None]
                order[2] = A.ndim - 1
            cores.append(np.transpose(A, order))
        return TRTensor(cores)


def _sublists(gt: GraphTensor, vertices: Iterable[int], prime_internal: bool):
    """einsum operands for the cores of ``vertices``.

    Labels: ``v`` for the external mode of ``v``; ``d + 2e`` for edge ``e``.
    With ``prime_internal`` edges inside the vertex set get ``d + 2e + 1``.
    """
    g = gt.graph
    d = g.d
    vset = set(vertices)
    eidx = {k: i for i, k in enumerate(g.edges)}
    ops = []
    for v in sorted(vset):
        labels = [v]
        for w in g.neighbors(v):
            lab = d + 2 * eidx[_key(v, w)]
            if prime_internal and w in vset:
                lab += 1
            labels.append(lab)
        ops += [gt.cores[v], labels]
    return ops


def graph_to_dense(gt: GraphTensor, max_elements: Optional[int] = None) -> np.ndarray:
    """Contract every bond of ``gt``."""
    limit = MAX_DENSE_ELEMENTS if max_elements is None else max_elements
    size = math.prod(gt.shape)
    if size > limit:
        raise CapacityError(f"dense result has {size} elements, budget is {limit}")
    ops = _sublists(gt, range(gt.d), False)
    return np.einsum(*ops, list(range(gt.d)), optimize="greedy")


def _norm_sq(gt: GraphTensor, vertices) -> float:
    """Squared norm of the sub-network on ``vertices``; cut bonds count as modes.

    Each core is first contracted with itself over its external mode and
    over bonds leaving the vertex set; the remaining double-layer network
    has one fused ``r*r`` index per internal edge.
    """
    g = gt.graph
    vset = set(vertices)
    eidx = {k: i for i, k in enumerate(g.edges)}
    ops = []
    for v in sorted(vset):
        G = gt.cores[v]
        nb = g.neighbors(v)
        k = len(nb)
        left = list(range(k + 1))
        right = [0] + [k + 1 + j if nb[j] in vset else 1 + j for j in range(k)]
        keep = [j for j in range(k) if nb[j] in vset]
        out = [x for j in keep for x in (1 + j, k + 1 + j)]
        M = np.einsum(G, left, G, right, out)
        M = M.reshape([g.rank(v, nb[j]) ** 2 for j in keep])
        ops += [M, [eidx[_key(v, nb[j])] for j in keep]]
    return float(np.einsum(*ops, [], optimize="greedy"))


def graph_norm(gt: GraphTensor) -> float:
    return math.sqrt(max(_norm_sq(gt, range(gt.d)), 0.0))


@dataclass(frozen=True)
class CoverElement:
    """A cycle (closed vertex walk) or a path (open walk)."""

    kind: str
    vertices: tuple

    @property
    def closed(self) -> bool:
        return self.kind == "cycle"

    @property
    def edges(self) -> list:
        vs = self.vertices
        out = [_key(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]
        if self.closed:
            out.append(_key(vs[-1], vs[0]))
        return out


@dataclass
class CyclePathCover:
    elements: list = field(default_factory=list)

    def edges(self) -> list:
        return [e for el in self.elements for e in el.edges]

    def validate(self, graph: TensorGraph) -> None:
        seen = self.edges()
        if len(seen) != len(set(seen)):
            raise ShapeError("cover elements share an edge")
        if set(seen) != set(graph.edges):
            raise ShapeError("cover does not match the edge set")
        for el in self.elements:
            if el.closed and len(el.vertices) < 3:
                raise ShapeError(f"cycle {el.vertices} is too short")
            if len(set(el.vertices)) != len(el.vertices):
                raise ShapeError(f"element {el.vertices} repeats a vertex")


def _bfs_path(adj: dict, s: int, t: int, banned: tuple) -> Optional[list]:
    prev = {s: None}
    q = deque([s])
    while q:
        x = q.popleft()
        if x == t:
            path = [t]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for y in sorted(adj[x]):
            if _key(x, y) == banned or y in prev:
                continue
            prev[y] = x
            q.append(y)
    return None


def cycle_path_cover(g: TensorGraph) -> CyclePathCover:
    """Shortest cycles first, then maximal paths through the remaining forest."""
    adj = {v: set(g.neighbors(v)) for v in range(g.d)}
    elements = []
    while True:
        best = None
        for u, v in sorted(_key(a, b) for a in adj for b in adj[a] if a < b):
            path = _bfs_path(adj, u, v, (u, v))
            if path is not None and (best is None or len(path) < len(best)):
                best = path
        if best is None:
            break
        i = best.index(min(best))
        cyc = best[i:] + best[:i]
        elements.append(CoverElement("cycle", tuple(cyc)))
        for e in elements[-1].edges:
            adj[e[0]].discard(e[1])
            adj[e[1]].discard(e[0])
    while any(adj.values()):
        leaves = [v for v in adj if len(adj[v]) == 1]
        start = min(leaves)
        walk = [start]
        while adj[walk[-1]]:
            x = walk[-1]
            y = min(adj[x])
            adj[x].discard(y)
            adj[y].discard(x)
            walk.append(y)
        elements.append(CoverElement("path", tuple(walk)))
    return CyclePathCover(elements)


@dataclass
class _Slot:
    vertex: int
    prev: Optional[int]
    nxt: Optional[int]
    others: list
    perm: list


def _layout(g: TensorGraph, el: CoverElement) -> list:
    vs = el.vertices
    L = len(vs)
    slots = []
    for j, v in enumerate(vs):
        prev = vs[j - 1] if (el.closed or j > 0) else None
        nxt = vs[(j + 1) % L] if (el.closed or j < L - 1) else None
        for w in (prev, nxt):
            if w is not None and not g.has_edge(v, w):
                raise ShapeError(f"({v}, {w}) is not an edge of the graph")
        labels = ["x"] + g.neighbors(v)
        others = [w for w in g.neighbors(v) if w not in (prev, nxt)]
        perm = ([labels.index(prev)] if prev is not None else []) + [0]
        perm += [labels.index(w) for w in others]
        perm += [labels.index(nxt)] if nxt is not None else []
        slots.append(_Slot(v, prev, nxt, others, perm))
    return slots


def _element_tr(gt: GraphTensor, el: CoverElement, slots: list) -> TRTensor:
    g = gt.graph
    cores = []
    for s in slots:
        A = np.transpose(gt.cores[s.vertex], s.perm)
        rp = g.rank(s.vertex, s.prev) if s.prev is not None else 1
        rn = g.rank(s.vertex, s.nxt) if s.nxt is not None else 1
        cores.append(A.reshape(rp, -1, rn, order="F"))
    return TRTensor(cores)


def _reinsert(gt: GraphTensor, slots: list, tr: TRTensor) -> GraphTensor:
    g = gt.graph
    cores = list(gt.cores)
    updates = {}
    for s, G in zip(slots, tr.cores):
        rp, _, rn = G.shape
        inner = (g.mode_sizes[s.vertex],) + tuple(g.rank(s.vertex, w) for w in s.others)
        shape = ((rp,) if s.prev is not None else ()) + inner + ((rn,) if s.nxt is not None else ())
        A = G.reshape(shape, order="F")
        cores[s.vertex] = np.transpose(A, np.argsort(s.perm))
        if s.prev is not None:
            updates[_key(s.vertex, s.prev)] = rp
        if s.nxt is not None:
            updates[_key(s.vertex, s.nxt)] = rn
    return GraphTensor(g.with_ranks(updates), cores)


def _is_cycle_of(g: TensorGraph, cycle: Sequence[int]) -> bool:
    cyc = list(cycle)
    if len(cyc) < 3 or len(set(cyc)) != len(cyc):
        return False
    return all(g.has_edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc)))


def extract_cycle_tensor(gt: GraphTensor, C: Sequence[int]) -> TRTensor:
    """Tensor ring over cycle ``C`` with outgoing bonds folded into the modes.

    The mode of vertex ``v`` becomes ``n_v`` times the ranks of its non-cycle
    edges, grouped column-major with the external index fastest and the
    bonds in ascending neighbour order.
    """
    if not _is_cycle_of(gt.graph, C):
        raise DomainError(f"{tuple(C)} is not a cycle of the graph")
    el = CoverElement("cycle", tuple(int(v) for v in C))
    return _element_tr(gt, el, _layout(gt.graph, el))


def _zero_like(gt: GraphTensor) -> GraphTensor:
    g = TensorGraph(gt.graph.mode_sizes, {e: 1 for e in gt.graph.edges})
    return GraphTensor(g, [np.zeros(g.core_shape(v)) for v in range(g.d)])


def g_truncate(gt: GraphTensor, eps: float, cover: Optional[CyclePathCover] = None) -> GraphTensor:
    """Round every cycle and path of a cover in turn.

    Element ``C`` of ``m`` is rounded to absolute accuracy
    ``eps ||T|| / (m prod_j ||T_Cj|| sqrt(R_C))``. The ``T_Cj`` are the
    components left after removing the vertices of ``C``, with their bonds
    into ``C`` treated as modes. ``R_C`` is the product of the ranks of
    edges that join two vertices of ``C`` without belonging to it. The
    total error is at most ``eps ||T||``.
    """
    if eps < 0:
        raise DomainError(f"eps must be non-negative, got {eps}")
    g = gt.graph
    if cover is None:
        cover = cycle_path_cover(g)
    if not cover.elements:
        return gt.copy()
    total = graph_norm(gt)
    if total == 0.0:
        return _zero_like(gt)
    m = len(cover.elements)
    out = gt
    for el in cover.elements:
        g = out.graph
        inside = set(el.vertices)
        rest = g.to_networkx().subgraph([v for v in range(g.d) if v not in inside])
        comp_norm = 1.0
        for comp in sorted(nx.connected_components(rest), key=min):
            c = math.sqrt(max(_norm_sq(out, comp), 0.0))
            if c == 0.0:
                raise DegenerateComponentError(
                    f"component {sorted(comp)} has zero norm while the tensor does not"
                )
            comp_norm *= c
        own = set(el.edges)
        internal = math.prod(
            r for (u, v), r in g.edges.items() if u in inside and v in inside and (u, v) not in own
        )
        tol = eps * total / (m * comp_norm * math.sqrt(internal))
        slots = _layout(g, el)
        tr = round_cores(_element_tr(out, el, slots), tol)
        out = _reinsert(out, slots, tr)
    return out


def _merge_into(A: np.ndarray, labels: list, a_lab, into) -> tuple:
    """Fuse axis ``a_lab`` into axis ``into``, with ``a_lab`` the slow index."""
    i = labels.index(a_lab)
    A = np.moveaxis(A, i, -1)
    labels = labels[:i] + labels[i + 1 :] + [a_lab]
    j = labels.index(into)
    A = np.moveaxis(A, j, -1)
    labels = labels[:j] + labels[j + 1 :] + [into]
    A = A.reshape(A.shape[:-2] + (A.shape[-2] * A.shape[-1],))
    return A, labels[:-2] + [into]


def _canonical(A: np.ndarray, labels: list) -> np.ndarray:
    nbrs = sorted(l for l in labels if l != "x")
    order = [labels.index("x")] + [labels.index(w) for w in nbrs]
    return np.transpose(A, order)


def _with_identity(A: np.ndarray, labels: list, rho: int, names: tuple) -> tuple:
    A = np.multiply.outer(A, np.eye(rho))
    return A, labels + list(names)


def insert_graph_edge(gt: GraphTensor, path: Sequence[int], rho: int) -> GraphTensor:
    """Add the edge ``(path[0], path[-1])`` exactly.

    The bond ``(p0, p1)`` of rank ``rho * m`` is split with the ``rho`` part
    as slow index; that part moves onto the new edge and is carried from
    ``p1`` to ``p[-1]`` along the path, multiplying each bond on the way by
    ``rho``. The bond ``(p0, p1)`` keeps rank ``m``.
    """
    g = gt.graph
    path = [int(p) for p in path]
    if len(path) < 3 or len(set(path)) != len(path):
        raise DomainError(f"path {path} must visit at least three distinct vertices")
    u, v = path[0], path[-1]
    if g.has_edge(u, v):
        raise DomainError(f"edge ({u}, {v}) already present")
    for a, b in zip(path, path[1:]):
        if not g.has_edge(a, b):
            raise DomainError(f"({a}, {b}) is not an edge of the graph")
    R = g.rank(u, path[1])
    if rho < 1 or R % rho:
        from .exceptions import DivisorError

        raise DivisorError(rho, R)
    m = R // rho
    cores = list(gt.cores)
    A_ = "A"

    def lab(x):
        return ["x"] + g.neighbors(x)

    # u: split the (u, p1) axis into (a, b); a becomes the new edge to v
    labels = lab(u)
    A = cores[u]
    i = labels.index(path[1])
    A = A.reshape(A.shape[:i] + (rho, m) + A.shape[i + 1 :])
    labels = labels[:i] + [v] + labels[i:]
    cores[u] = _canonical(A, labels)

    # p1: split its (p1, u) axis and send a on towards p2
    p1, p2 = path[1], path[2]
    labels = lab(p1)
    A = cores[p1]
    i = labels.index(u)
    A = A.reshape(A.shape[:i] + (rho, m) + A.shape[i + 1 :])
    labels = labels[:i] + [A_] + labels[i:]
    A, labels = _merge_into(A, labels, A_, p2)
    cores[p1] = _canonical(A, labels)

    for j in range(2, len(path) - 1):
        x, prev, nxt = path[j], path[j - 1], path[j + 1]
        A, labels = _with_identity(cores[x], lab(x), rho, ("Ain", "Aout"))
        A, labels = _merge_into(A, labels, "Ain", prev)
        A, labels = _merge_into(A, labels, "Aout", nxt)
        cores[x] = _canonical(A, labels)

    # v: receive a from the path and hand it to the new edge
    prev = path[-2]
    A, labels = _with_identity(cores[v], lab(v), rho, ("Ain", u))
    A, labels = _merge_into(A, labels, "Ain", prev)
    cores[v] = _canonical(A, labels)

    edges = dict(g.edges)
    edges[_key(u, v)] = rho
    edges[_key(u, path[1])] = m
    for a, b in zip(path[1:], path[2:]):
        edges[_key(a, b)] = g.rank(a, b) * rho
    return GraphTensor(TensorGraph(g.mode_sizes, edges), cores)


@dataclass
class GraphFamily:
    """A set of admissible graphs over ``d`` vertices.

    ``base`` is the edge set every member contains, ``optional`` the edges
    that may be added, and at most ``max_extra`` of them may be present.
    """

    name: str
    d: int
    base: frozenset
    optional: frozenset
    max_extra: int
    start: str = "ring"

    def contains(self, g: TensorGraph) -> bool:
        edges = g.edge_set()
        if g.d != self.d or not self.base <= edges:
            return False
        extra = edges - self.base
        return extra <= self.optional and len(extra) <= self.max_extra

    def candidates(self, g: TensorGraph) -> list:
        edges = g.edge_set()
        return sorted(
            e for e in self.optional - edges if self.contains(_graph_plus(g, e))
        )

    @classmethod
    def singleton(cls, g: TensorGraph, start: str = "ring") -> "GraphFamily":
        return cls("singleton", g.d, g.edge_set(), frozenset(), 0, start)


def _graph_plus(g: TensorGraph, e: tuple) -> TensorGraph:
    edges = dict(g.edges)
    edges[e] = 1
    return TensorGraph(g.mode_sizes, edges)


def chorded_cycle_family(d: int, max_chords: int = 1) -> GraphFamily:
    """The ring ``0..d-1`` with at most ``max_chords`` chords."""
    if d < 4:
        raise DomainError("chorded cycles need d >= 4")
    ring = frozenset(_key(k, (k + 1) % d) for k in range(d))
    chords = frozenset(
        (i, j) for i in range(d) for j in range(i + 1, d) if (i, j) not in ring
    )
    return GraphFamily("chorded-cycle", d, ring, chords, max_chords, "ring")


def skip_chain_family(d: int) -> GraphFamily:
    """The chain ``0..d-1`` plus any skip edges ``(k, k+2)`` with ``k`` even."""
    if d < 3:
        raise DomainError("skip chains need d >= 3")
    chain = frozenset((k, k + 1) for k in range(d - 1))
    skips = frozenset((k, k + 2) for k in range(0, d - 2, 2))
    return GraphFamily("skip-chain", d, chain, skips, len(skips), "chain")


def _initial(T, family: GraphFamily, eps: float) -> GraphTensor:
    from .conversions import CanonicalTensor, cp_to_tr_optimal, cp_to_tt
    from .decompose import reduced_storage_tr_svd, tr_svd

    if isinstance(T, GraphTensor):
        return T
    if family.start == "ring":
        if isinstance(T, CanonicalTensor):
            tr = cp_to_tr_optimal(T, eps)
        elif isinstance(T, TRTensor):
            tr = tr_round(T, eps)
        else:
            tr = reduced_storage_tr_svd(T, eps)
        return GraphTensor.from_tr(tr)
    if isinstance(T, CanonicalTensor):
        tr = tr_round(cp_to_tt(T), eps)
    elif isinstance(T, TRTensor):
        if T.ranks[0] != 1:
            raise DomainError("chain families need a tensor train input")
        tr = tr_round(T, eps)
    else:
        tr = tr_svd(T, eps, 1)
    return GraphTensor.from_tr(tr, drop_unit_closing=True)


def _insertion_paths(g: TensorGraph, e: tuple) -> list:
    """Simple paths between the endpoints, walked from either end."""
    G = g.to_networkx()
    i, j = e
    paths = sorted(list(p) for p in nx.all_simple_paths(G, i, j))
    return paths + [p[::-1] for p in paths]


def storage_cost(gt: GraphTensor) -> float:
    return float(gt.storage)


def greedy_graph_select(
    T,
    family: GraphFamily,
    cost: Optional[Callable] = None,
    eps: float = 1e-9,
    history: Optional[list] = None,
) -> tuple:
    """Greedy edge insertion within a graph family.

    ``T`` may be dense, a :class:`TRTensor`, a canonical tensor or an
    initial :class:`GraphTensor`. Candidate edges are visited in ascending
    order; for each one every insertion path and every divisor of the split
    bond is tried, followed by :func:`g_truncate`, and the cheapest
    representation replaces the current one if it is strictly cheaper.

    The accuracy is split evenly between the initial representation and
    each possible insertion so the final error is at most ``eps ||T||``.
    Accepted ``(edge, cost)`` pairs are appended to ``history``.
    """
    if family is None:
        raise DomainError("empty graph family")
    if eps < 0:
        raise DomainError(f"eps must be non-negative, got {eps}")
    cost = storage_cost if cost is None else cost
    step_eps = eps / (1 + family.max_extra)
    current = _initial(T, family, step_eps)
    if not family.contains(current.graph):
        raise DomainError(f"initial graph is not a member of family {family.name!r}")
    current_cost = cost(current)
    if history is not None:
        history.append((None, current_cost))
    for e in family.candidates(current.graph):
        if not family.contains(_graph_plus(current.graph, e)):
            continue
        best, best_cost = None, current_cost
        for path in _insertion_paths(current.graph, e):
            for rho in divisors(current.graph.rank(path[0], path[1])):
                cand = g_truncate(insert_graph_edge(current, path, rho), step_eps)
                c = cost(cand)
                if c < best_cost:
                    best, best_cost = cand, c
        if best is not None:
            current, current_cost = best, best_cost
            if history is not None:
                history.append((e, current_cost))
    return current.graph, current
