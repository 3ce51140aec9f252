"""Ground-truth solvers at small scale: exact optimum, splittability, minimum deletion."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .graph import Graph, induced_edge_count, induced_subgraph

EXHAUSTIVE_LIMIT = 14


class SizeLimitError(ValueError):
    """Instance is too large for an exhaustive solver; use the randomized one."""


@dataclass(frozen=True)
class Splitting:
    a: frozenset
    b: frozenset
    deleted: frozenset


@dataclass(frozen=True)
class SplittableVerdict:
    splitting: Optional[Splitting]
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.splitting is not None


@dataclass(frozen=True)
class SplitResult:
    k: int
    a: frozenset
    b: frozenset
    edges_each: int
    deleted: frozenset
    method: str

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "a": sorted(self.a),
            "b": sorted(self.b),
            "edges_each": self.edges_each,
            "deleted": sorted(self.deleted),
            "method": self.method,
        }


def check_split(g: Graph, a, b) -> bool:
    """Independent validity check: disjoint, equal size, equal induced edge counts."""
    sa, sb = set(a), set(b)
    if sa & sb or len(sa) != len(sb):
        return False
    return induced_edge_count(g, sa) == induced_edge_count(g, sb)


def exact_f(g: Graph, limit: int = EXHAUSTIVE_LIMIT) -> SplitResult:
    """Largest k admitting two disjoint k-sets with equal induced edge counts.

    Enumerates k downward, bucketing k-subsets by edge count and scanning each
    bucket for a disjoint pair of subsets (bitmask disjointness).
    """
    n = g.n
    if n > limit:
        raise SizeLimitError(f"n={n} exceeds exhaustive limit {limit}; use the randomized splitter")
    masks = g.adjacency_masks
    all_vertices = frozenset(range(n))
    for k in range(n // 2, 0, -1):
        buckets: dict[int, list] = {}
        for comb in combinations(range(n), k):
            mask = 0
            count = 0
            for v in comb:
                count += (masks[v] & mask).bit_count()
                mask |= 1 << v
            for other_mask, other_comb in buckets.get(count, ()):
                if other_mask & mask == 0:
                    a = frozenset(other_comb)
                    b = frozenset(comb)
                    return SplitResult(k, a, b, count, all_vertices - a - b, "exhaustive")
            buckets.setdefault(count, []).append((mask, comb))
    return SplitResult(0, frozenset(), frozenset(), 0, all_vertices, "exhaustive")


def is_splittable_bruteforce(g: Graph, limit: int = EXHAUSTIVE_LIMIT) -> SplittableVerdict:
    """Decide splittability by enumerating half-size subsets and comparing edge counts."""
    n = g.n
    if n % 2 != 0:
        return SplittableVerdict(None, "odd order")
    if n > limit:
        raise SizeLimitError(f"n={n} exceeds exhaustive limit {limit}")
    if n == 0:
        return SplittableVerdict(Splitting(frozenset(), frozenset(), frozenset()))
    vertices = frozenset(range(n))
    # fix vertex 0 in A to halve the enumeration
    for rest in combinations(range(1, n), n // 2 - 1):
        a = frozenset((0,) + rest)
        b = vertices - a
        if induced_edge_count(g, a) == induced_edge_count(g, b):
            return SplittableVerdict(Splitting(a, b, frozenset()))
    return SplittableVerdict(None, "no equal-size equal-edge partition")


def is_splittable_dp(g: Graph) -> SplittableVerdict:
    """Decide splittability via d(A) = d(V)/2 subset dynamic programming.

    Uses e(A) = e(B) iff d(A) = d(B) on full partitions; states are
    (vertices processed, chosen count, degree sum) as per-count bitmasks with
    layer storage for witness reconstruction.
    """
    n = g.n
    if n % 2 != 0:
        return SplittableVerdict(None, "odd order")
    if n == 0:
        return SplittableVerdict(Splitting(frozenset(), frozenset(), frozenset()))
    degs = g.degrees
    total = sum(degs)
    if total % 2 != 0:  # impossible by handshake, kept for symmetry
        return SplittableVerdict(None, "odd total degree")
    half, target = n // 2, total // 2

    cur = [0] * (half + 1)
    cur[0] = 1
    layers = [list(cur)]
    for d in degs:
        for j in range(half, 0, -1):
            cur[j] |= cur[j - 1] << d
        layers.append(list(cur))
    if not (cur[half] >> target) & 1:
        return SplittableVerdict(None, "no half-size set with half the degree sum")

    a = set()
    j, s = half, target
    for i in range(n, 0, -1):
        d = degs[i - 1]
        if j > 0 and s >= d and (layers[i - 1][j - 1] >> (s - d)) & 1:
            a.add(i - 1)
            j -= 1
            s -= d
        # else vertex i-1 stays out; reachability of (j, s) in layers[i-1] is guaranteed
    b = frozenset(range(n)) - a
    return SplittableVerdict(Splitting(frozenset(a), b, frozenset()))


def min_deletion_split(g: Graph, budget: int, seed: int = 0,
                       exhaustive_cap: int = 20_000, samples: int = 2_000
                       ) -> Optional[SplitResult]:
    """Smallest deletion count within budget leaving a splittable induced subgraph.

    Deletion count parity must match n so the survivor count is even.  All
    deletion sets are enumerated when few enough; otherwise a seeded sample of
    deletion sets is tried and the result is flagged as heuristic.
    """
    if budget > g.n:
        raise ValueError("budget cannot exceed the vertex count")
    n = g.n
    rng = np.random.default_rng(seed)
    start = n % 2
    for t in range(start, budget + 1, 2):
        if n - t < 0:
            break
        n_sets = math.comb(n, t)
        heuristic = n_sets > exhaustive_cap
        if heuristic:
            candidates = (
                tuple(sorted(rng.choice(n, size=t, replace=False).tolist()))
                for _ in range(samples)
            )
        else:
            candidates = combinations(range(n), t)
        for deleted in candidates:
            keep = [v for v in range(n) if v not in set(deleted)]
            sub, table = induced_subgraph(g, keep)
            verdict = is_splittable_dp(sub)
            if verdict:
                back = {new: old for old, new in table.items()}
                a = frozenset(back[v] for v in verdict.splitting.a)
                b = frozenset(back[v] for v in verdict.splitting.b)
                edges_each = induced_edge_count(g, a)
                method = "dp-heuristic" if heuristic else "dp"
                return SplitResult(len(a), a, b, edges_each, frozenset(deleted), method)
    return None
