"""Immutable simple graph with the degree/difference vocabulary used by the solvers.

Vertices are dense integers 0..n-1.  Deleting vertices is modelled by taking
an induced subgraph, which remaps ids and returns a translation table.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

VertexSet = frozenset  # vertex sets are plain (frozen)sets of ints


class EdgeListError(ValueError):
    """Raised on malformed edge-list input; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class Graph:
    """Simple undirected graph, immutable after construction.

    Adjacency and degree views are built lazily so that cheap queries on
    millions of tiny graphs (exhaustive enumeration) stay cheap.
    """

    __slots__ = ("n", "edges", "_adj", "_masks", "_degs", "_earr", "_mat")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        seen = set()
        for e in edges:
            u, v = e
            if u == v:
                raise ValueError(f"loop edge ({u},{v}) not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        self.n = n
        self.edges = frozenset(seen)
        self._adj = None
        self._masks = None
        self._degs = None
        self._earr = None
        self._mat = None

    @classmethod
    def _from_trusted(cls, n: int, edges) -> "Graph":
        # edges must already be normalized (u < v), loop-free and unique
        g = cls.__new__(cls)
        g.n = n
        g.edges = frozenset(edges)
        g._adj = None
        g._masks = None
        g._degs = None
        g._earr = None
        g._mat = None
        return g

    @property
    def edge_array(self) -> "np.ndarray":
        """Edges as an (m, 2) int array for vectorized bulk operations."""
        if self._earr is None:
            m = len(self.edges)
            flat = np.fromiter(
                (x for e in self.edges for x in e), dtype=np.int64, count=2 * m
            )
            self._earr = flat.reshape(m, 2)
        return self._earr

    @property
    def adjacency(self) -> tuple:
        if self._adj is None:
            adj = [set() for _ in range(self.n)]
            for u, v in self.edges:
                adj[u].add(v)
                adj[v].add(u)
            self._adj = tuple(frozenset(s) for s in adj)
        return self._adj

    @property
    def adjacency_masks(self) -> list:
        """Per-vertex neighbour sets as bitmask ints (for subset enumeration)."""
        if self._masks is None:
            masks = [0] * self.n
            for u, v in self.edges:
                masks[u] |= 1 << v
                masks[v] |= 1 << u
            self._masks = masks
        return self._masks

    @property
    def degrees(self) -> tuple:
        if self._degs is None:
            if self._adj is not None:
                self._degs = tuple(len(s) for s in self._adj)
            elif len(self.edges) >= 4096:
                counts = np.bincount(self.edge_array.ravel(), minlength=self.n)
                self._degs = tuple(int(c) for c in counts)
            else:
                degs = [0] * self.n
                for u, v in self.edges:
                    degs[u] += 1
                    degs[v] += 1
                self._degs = tuple(degs)
        return self._degs

    @property
    def adjacency_matrix(self) -> "np.ndarray":
        """Dense boolean adjacency matrix (cached; treat as read-only)."""
        if self._mat is None:
            mat = np.zeros((self.n, self.n), dtype=bool)
            if self.edges:
                e = self.edge_array
                mat[e[:, 0], e[:, 1]] = True
                mat[e[:, 1], e[:, 0]] = True
            self._mat = mat
        return self._mat

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"


@dataclass(frozen=True)
class LoopFreeMultigraph:
    """Result of contracting disjoint vertex pairs; loops dropped, multiplicities kept.

    ``origin[i]`` is either an original vertex id or an original (u, v) pair.
    """

    n_nodes: int
    multiplicities: Mapping[tuple[int, int], int]
    origin: tuple

    def multiplicity(self, a: int, b: int) -> int:
        if a == b:
            raise ValueError("no loops in a loop-free multigraph")
        key = (a, b) if a < b else (b, a)
        return self.multiplicities.get(key, 0)


def _check_vertex(g: Graph, v: int) -> None:
    if not (0 <= v < g.n):
        raise ValueError(f"vertex {v} out of range for n={g.n}")


def _check_vertex_set(g: Graph, u) -> None:
    for v in u:
        _check_vertex(g, v)


def degree(g: Graph, v: int) -> int:
    _check_vertex(g, v)
    return len(g.adjacency[v])


def induced_edge_count(g: Graph, u) -> int:
    """Number of edges with both endpoints in ``u``."""
    _check_vertex_set(g, u)
    us = u if isinstance(u, (set, frozenset)) else set(u)
    if len(g.edges) >= 4096:
        mask = np.zeros(g.n, dtype=bool)
        mask[list(us)] = True
        e = g.edge_array
        return int((mask[e[:, 0]] & mask[e[:, 1]]).sum())
    degs = g.degrees
    # pick the cheaper iteration side
    if len(g.edges) <= sum(degs[v] for v in us) // 2:
        return sum(1 for a, b in g.edges if a in us and b in us)
    return sum(len(g.adjacency[v] & us) for v in us) // 2


def degree_sum(g: Graph, u) -> int:
    _check_vertex_set(g, u)
    degs = g.degrees
    return sum(degs[v] for v in u)


def cross_edge_count(g: Graph, a, b) -> int:
    """Edges with exactly one endpoint in ``a`` and one in ``b``; sets must be disjoint."""
    _check_vertex_set(g, a)
    _check_vertex_set(g, b)
    sa, sb = set(a), set(b)
    if sa & sb:
        raise ValueError("vertex sets overlap")
    if len(sa) > len(sb):
        sa, sb = sb, sa
    return sum(len(g.adjacency[v] & sb) for v in sa)


def degree_difference(g: Graph, x: int, y: int) -> int:
    if x == y:
        raise ValueError("degree difference needs two distinct vertices")
    _check_vertex(g, x)
    _check_vertex(g, y)
    degs = g.degrees
    return abs(degs[x] - degs[y])


def difference_neighbourhood(g: Graph, x: int, y: int):
    """Vertices v != x, y adjacent to exactly one of x and y."""
    if x == y:
        raise ValueError("difference neighbourhood needs two distinct vertices")
    _check_vertex(g, x)
    _check_vertex(g, y)
    diff = g.adjacency[x] ^ g.adjacency[y]
    return frozenset(diff - {x, y})


def is_clone_pair(g: Graph, u, x: int, y: int) -> bool:
    """True iff x and y agree on every vertex of ``u`` other than themselves."""
    if x == y:
        raise ValueError("clone test needs two distinct vertices")
    us = set(u)
    if x not in us or y not in us:
        raise ValueError("both vertices must belong to the set")
    _check_vertex_set(g, us)
    diff = (g.adjacency[x] ^ g.adjacency[y]) - {x, y}
    return not (diff & us)


def contract_pairs(g: Graph, pairs) -> LoopFreeMultigraph:
    """Contract each pair to a single node, dropping loops.

    Multiplicities are counted exactly and must come out at most 2; anything
    larger violates the contract of the callers and raises.
    """
    pairs = [tuple(sorted(p)) for p in pairs]
    ground = set()
    for x, y in pairs:
        if x == y:
            raise ValueError("cannot contract a vertex with itself")
        _check_vertex(g, x)
        _check_vertex(g, y)
        if x in ground or y in ground:
            raise ValueError("contraction pairs must be pairwise disjoint")
        ground.update((x, y))

    singletons = [v for v in range(g.n) if v not in ground]
    origin = tuple(singletons) + tuple(sorted(pairs))
    node_of = {}
    for i, v in enumerate(singletons):
        node_of[v] = i
    for j, (x, y) in enumerate(sorted(pairs)):
        node_of[x] = node_of[y] = len(singletons) + j

    mult: dict[tuple[int, int], int] = {}
    for u, v in g.edges:
        a, b = node_of[u], node_of[v]
        if a == b:
            continue  # loop inside a contracted pair
        key = (a, b) if a < b else (b, a)
        mult[key] = mult.get(key, 0) + 1
    bad = [k for k, m in mult.items() if m > 2]
    if bad:
        raise ValueError(f"contraction produced multiplicity > 2 between nodes {bad[0]}")
    return LoopFreeMultigraph(len(origin), mult, origin)


def multigraph_disagree(m: LoopFreeMultigraph, x: int, y: int, v: int) -> bool:
    """True iff v sees different edge multiplicities towards x and y."""
    if len({x, y, v}) != 3:
        raise ValueError("disagreement needs three distinct nodes")
    for node in (x, y, v):
        if not (0 <= node < m.n_nodes):
            raise ValueError(f"node {node} out of range")
    return m.multiplicity(v, x) != m.multiplicity(v, y)


def multigraph_difference_count(m: LoopFreeMultigraph, x: int, y: int) -> int:
    """Number of nodes on which x and y disagree in the multigraph."""
    return sum(
        1 for v in range(m.n_nodes) if v != x and v != y and multigraph_disagree(m, x, y, v)
    )


def induced_subgraph(g: Graph, keep) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on ``keep`` with dense ids; returns (graph, old->new table)."""
    _check_vertex_set(g, keep)
    order = sorted(set(keep))
    table = {v: i for i, v in enumerate(order)}
    if len(g.edges) >= 4096:
        lookup = np.full(g.n, -1, dtype=np.int64)
        lookup[order] = np.arange(len(order))
        mapped = lookup[g.edge_array]
        mapped = mapped[(mapped >= 0).all(axis=1)]
        mapped.sort(axis=1)
        edges = list(zip(mapped[:, 0].tolist(), mapped[:, 1].tolist()))
    else:
        ks = set(order)
        edges = [
            (table[u], table[v]) if table[u] < table[v] else (table[v], table[u])
            for u, v in g.edges
            if u in ks and v in ks
        ]
    return Graph._from_trusted(len(order), edges), table


def parse_edge_list(text: str) -> Graph:
    """Parse the 'n m' / 'u v' edge-list format, with line-numbered errors."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise EdgeListError(1, "missing header 'n m'")
    head = lines[0].split()
    if len(head) != 2:
        raise EdgeListError(1, "header must be 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise EdgeListError(1, "header must contain two integers") from None
    if n < 0 or m < 0:
        raise EdgeListError(1, "n and m must be non-negative")

    edges = []
    seen = set()
    count = 0
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(lineno, "edge line must be 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(lineno, "edge endpoints must be integers") from None
        if u == v:
            raise EdgeListError(lineno, f"loop edge ({u},{v})")
        if not (0 <= u < v < n):
            raise EdgeListError(lineno, f"edge ({u},{v}) violates 0 <= u < v < n")
        if (u, v) in seen:
            raise EdgeListError(lineno, f"duplicate edge ({u},{v})")
        seen.add((u, v))
        edges.append((u, v))
        count += 1
    if count != m:
        raise EdgeListError(len(lines), f"header announced {m} edges, found {count}")
    return Graph._from_trusted(n, edges)


def read_edge_list(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def to_edge_list_text(g: Graph) -> str:
    lines = [f"{g.n} {len(g.edges)}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def complete_graph(n: int) -> Graph:
    return Graph._from_trusted(n, combinations(range(n), 2))
