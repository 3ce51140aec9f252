"""Seeded instance families for experiments and tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

import numpy as np

from .graph import Graph

FAMILIES = ("gnp", "forest", "odd_cliques", "complete", "empty", "path", "cycle", "star")

ENUMERATION_LIMIT = 7


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.family == "gnp":
            p = self.params.get("p")
            if p is None or not 0.0 <= p <= 1.0:
                raise ValueError("gnp needs p in [0, 1]")
        if self.family == "odd_cliques":
            sizes = self.params.get("sizes")
            if not sizes:
                raise ValueError("odd_cliques needs a non-empty size list")
            if any(s % 2 == 0 or s < 1 for s in sizes):
                raise ValueError("odd_cliques sizes must all be odd and positive")
            if sum(sizes) != self.n:
                raise ValueError("odd_cliques sizes must sum to n")

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        """Parse compact specs like ``gnp:n=1000,p=0.5,seed=7`` or
        ``odd_cliques:sizes=3+5+7,seed=0``."""
        family, _, rest = text.partition(":")
        family = family.strip()
        kv = {}
        if rest.strip():
            for item in rest.split(","):
                key, _, value = item.partition("=")
                if not _:
                    raise ValueError(f"malformed family parameter {item!r}")
                kv[key.strip()] = value.strip()
        seed = int(kv.pop("seed", 0))
        params = {}
        if "sizes" in kv:
            params["sizes"] = tuple(int(s) for s in kv.pop("sizes").split("+"))
        if "p" in kv:
            params["p"] = float(kv.pop("p"))
        n = int(kv.pop("n", sum(params.get("sizes", (0,)))))
        if kv:
            raise ValueError(f"unknown family parameters: {sorted(kv)}")
        return cls(family, n, params, seed)

    def describe(self) -> str:
        parts = [f"n={self.n}"]
        if "p" in self.params:
            parts.append(f"p={self.params['p']}")
        if "sizes" in self.params:
            parts.append("sizes=" + "+".join(str(s) for s in self.params["sizes"]))
        parts.append(f"seed={self.seed}")
        return f"{self.family}:" + ",".join(parts)


def _prufer_tree(labels, rng) -> list:
    """Uniform random labelled tree on the given vertex labels (Prufer decode)."""
    k = len(labels)
    if k <= 1:
        return []
    if k == 2:
        return [(labels[0], labels[1])]
    seq = rng.integers(0, k, size=k - 2).tolist()
    deg = [1] * k
    for s in seq:
        deg[s] += 1
    edges = []
    import heapq

    leaves = [i for i in range(k) if deg[i] == 1]
    heapq.heapify(leaves)
    for s in seq:
        leaf = heapq.heappop(leaves)
        edges.append((labels[leaf], labels[s]))
        deg[s] -= 1
        if deg[s] == 1:
            heapq.heappush(leaves, s)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((labels[u], labels[v]))
    return edges


def generate(spec: FamilySpec) -> Graph:
    """Deterministic graph for (family, params, seed)."""
    n = spec.n
    rng = np.random.default_rng(spec.seed)
    if spec.family == "empty":
        edges = []
    elif spec.family == "complete":
        edges = list(combinations(range(n), 2))
    elif spec.family == "path":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif spec.family == "cycle":
        edges = [(i, i + 1) for i in range(n - 1)]
        if n >= 3:
            edges.append((0, n - 1))
    elif spec.family == "star":
        edges = [(0, i) for i in range(1, n)]
    elif spec.family == "gnp":
        p = spec.params["p"]
        iu, iv = np.triu_indices(n, 1)
        mask = rng.random(len(iu)) < p
        edges = list(zip(iu[mask].tolist(), iv[mask].tolist()))
    elif spec.family == "forest":
        # random-tree composition: random part sizes, a uniform tree on each part
        edges = []
        start = 0
        while start < n:
            size = int(rng.integers(1, n - start + 1))
            edges.extend(_prufer_tree(list(range(start, start + size)), rng))
            start += size
    elif spec.family == "odd_cliques":
        edges = []
        start = 0
        for size in spec.params["sizes"]:
            edges.extend(combinations(range(start, start + size), 2))
            start += size
    else:  # pragma: no cover - guarded by FamilySpec validation
        raise ValueError(spec.family)
    norm = [(u, v) if u < v else (v, u) for u, v in edges]
    return Graph._from_trusted(n, norm)


def enumerate_all_graphs(n: int) -> Iterator[Graph]:
    """All labelled graphs on n vertices in deterministic order (n <= 7)."""
    if n > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration limited to n <= {ENUMERATION_LIMIT}")
    pairs = list(combinations(range(n), 2))
    for r in range(len(pairs) + 1):
        for chosen in combinations(pairs, r):
            yield Graph._from_trusted(n, chosen)


def perturb(g: Graph, flips: int, seed: int = 0) -> Graph:
    """Toggle exactly ``flips`` distinct vertex pairs chosen uniformly by the seed."""
    total = math.comb(g.n, 2)
    if flips > total:
        raise ValueError(f"cannot flip {flips} of {total} pairs")
    rng = np.random.default_rng(seed)
    idx = rng.choice(total, size=flips, replace=False)
    pairs = list(combinations(range(g.n), 2))
    edges = set(g.edges)
    for i in idx.tolist():
        pair = pairs[i]
        if pair in edges:
            edges.remove(pair)
        else:
            edges.add(pair)
    return Graph._from_trusted(g.n, edges)
