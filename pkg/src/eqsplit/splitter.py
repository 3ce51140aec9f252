"""Randomized splitting pipeline: case analysis, random deletion, gadget balancing.

The pipeline mirrors the constructive argument: find pairs of vertices whose
degree differences fall into prescribed windows after a random deletion round,
then balance the two halves with staged sign choices.  At desk scale the
asymptotic thresholds frequently cannot be met; every unsatisfied precondition
falls through to a deterministic direct-balancing routine so the solver still
returns a verified splitting within the deletion budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .balance import greedy_signs, group_by_value, pick_agreeing_pair
from .graph import (
    Graph,
    contract_pairs,
    degree_difference,
    difference_neighbourhood,
    induced_subgraph,
)
from .oracle import SplitResult, Splitting, check_split


class SplitError(RuntimeError):
    """All attempts exhausted; carries the per-attempt traces."""

    def __init__(self, message: str, traces=()):
        super().__init__(message)
        self.traces = list(traces)


class ParameterizationError(ValueError):
    """Constants incompatible with each other or with the instance size."""


@dataclass
class SplitParams:
    """Target slack and the derived constants of the deletion argument."""

    epsilon: float
    beta: Optional[float] = None
    C2: float = 10.0
    C3: int = 18
    c6: float = 0.02  # measured two-gadget yield constant, not derived
    seed: int = 0
    max_attempts: int = 20
    min_n: int = 8

    def __post_init__(self):
        if not 0.0 < self.epsilon < 0.5:
            raise ParameterizationError("epsilon must lie in (0, 1/2)")
        if self.beta is None:
            self.beta = self.epsilon**2 / 64.0
        if self.beta <= 0:
            raise ParameterizationError("beta must be positive")
        if self.C2 < 4:
            raise ParameterizationError("C2 must be at least 4")
        if self.C3 < 3:
            raise ParameterizationError("C3 must be at least 3")

    @property
    def c1(self) -> float:
        return self.epsilon / 2.0

    @property
    def C1(self) -> float:
        return 4.0 / self.epsilon

    @property
    def c2(self) -> float:
        return self.epsilon / 12.0

    @property
    def c3(self) -> float:
        return self.c2 / (3.0 * self.C2)

    @property
    def C4(self) -> float:
        return 4.0 * self.C3 / self.epsilon

    @property
    def c4(self) -> float:
        return self.beta / (2.0 * self.C4)

    @property
    def c5(self) -> float:
        return self.c6 / 4.0

    def deletion_probability(self, k: int) -> float:
        return min(self.epsilon, 2.0 ** (-k))


@dataclass
class CaseTrace:
    attempt: int = 0
    branch: Optional[str] = None
    counters: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"attempt": self.attempt, "branch": self.branch, "counters": self.counters}


@dataclass
class GadgetInventory:
    one_gadgets: list = field(default_factory=list)
    two_gadgets: list = field(default_factory=list)
    medium_gadgets: list = field(default_factory=list)
    large_gadgets: list = field(default_factory=list)
    leftover: list = field(default_factory=list)
    odd_closer: Optional[tuple] = None  # the single residual pair with odd difference


@dataclass
class ClumpDecomposition:
    clumps: list  # frozensets over the surviving vertex ids
    q_pairs: list
    star: Optional[int] = None
    pre_deleted: frozenset = frozenset()

    @property
    def kept(self) -> frozenset:
        out = set()
        for k in self.clumps:
            out |= k
        for x, y in self.q_pairs:
            out.add(x)
            out.add(y)
        return frozenset(out)


def _degrees_within(g: Graph, alive) -> dict:
    deg = {v: 0 for v in alive}
    for u, v in g.edges:
        if u in deg and v in deg:
            deg[u] += 1
            deg[v] += 1
    return deg


class _GammaOps:
    """Difference-neighbourhood queries as boolean masks.

    Backed by the dense adjacency matrix when the graph is big enough for the
    set-based path to hurt but small enough for n^2 booleans to be cheap.
    """

    def __init__(self, f: Graph):
        self.f = f
        dense = 4096 <= len(f.edges) and f.n <= 8192
        self.mat = f.adjacency_matrix if dense else None

    def mask(self, x: int, y: int) -> np.ndarray:
        if self.mat is not None:
            row = self.mat[x] ^ self.mat[y]
        else:
            row = np.zeros(self.f.n, dtype=bool)
            row[list(difference_neighbourhood(self.f, x, y))] = True
        row[x] = row[y] = False
        return row


def _survivor_degree_array(g: Graph, survivors) -> np.ndarray:
    """Degree within the survivor set for every vertex, as an array over 0..n-1."""
    alive = np.zeros(g.n, dtype=bool)
    alive[list(survivors)] = True
    e = g.edge_array
    if len(e):
        keep = alive[e[:, 0]] & alive[e[:, 1]]
        return np.bincount(e[keep].ravel(), minlength=g.n)
    return np.zeros(g.n, dtype=np.int64)


def find_large_pairs(g: Graph, beta: float) -> list:
    """Greedy maximal set of disjoint pairs with degree difference in [n^{1/3}, beta*n]."""
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    n = g.n
    lo, hi = n ** (1.0 / 3.0), beta * n
    if lo > hi:
        return []
    order = sorted(range(n), key=lambda v: (g.degrees[v], v))
    degs = [g.degrees[v] for v in order]
    used = [False] * n
    pairs = []
    import bisect

    for i in range(n):
        if used[i]:
            continue
        j_lo = bisect.bisect_left(degs, degs[i] + lo, i + 1)
        j_hi = bisect.bisect_right(degs, degs[i] + hi, i + 1)
        for j in range(j_lo, j_hi):
            if not used[j]:
                used[i] = used[j] = True
                pairs.append((order[i], order[j]))
                break
    return pairs


def find_clone_matching(g: Graph, u) -> list:
    """Greedy maximal disjoint clone pairs within ``u`` via twin bucketing.

    Clone pairs are exactly open or closed twins restricted to ``u``, so
    pairing within neighbourhood-signature buckets is maximal.
    """
    members = sorted(set(u))
    if len(members) >= 256 and len(g.edges) >= 4096:
        open_sig, closed_sig = _twin_buckets_dense(g, members)
    else:
        us = frozenset(members)
        open_sig = {}
        closed_sig = {}
        for v in members:
            sig = frozenset(g.adjacency[v] & us)
            open_sig.setdefault(sig, []).append(v)
            closed_sig.setdefault(frozenset(sig | {v}), []).append(v)
    pairs = []
    used = set()
    for bucket_map in (closed_sig, open_sig):
        for sig in sorted(bucket_map, key=lambda s: min(bucket_map[s])):
            free = [v for v in bucket_map[sig] if v not in used]
            for i in range(0, len(free) - 1, 2):
                pairs.append((free[i], free[i + 1]))
                used.update(free[i : i + 2])
    return pairs


def _twin_buckets_dense(g: Graph, members):
    """Signature buckets via a packed 0/1 adjacency submatrix (bytes as keys)."""
    k = len(members)
    lookup = np.full(g.n, -1, dtype=np.int64)
    lookup[members] = np.arange(k)
    mapped = lookup[g.edge_array]
    mapped = mapped[(mapped >= 0).all(axis=1)]
    mat = np.zeros((k, k), dtype=np.uint8)
    mat[mapped[:, 0], mapped[:, 1]] = 1
    mat[mapped[:, 1], mapped[:, 0]] = 1
    open_packed = np.packbits(mat, axis=1)
    np.fill_diagonal(mat, 1)
    closed_packed = np.packbits(mat, axis=1)
    open_sig: dict[bytes, list] = {}
    closed_sig: dict[bytes, list] = {}
    for i, v in enumerate(members):
        open_sig.setdefault(open_packed[i].tobytes(), []).append(v)
        closed_sig.setdefault(closed_packed[i].tobytes(), []).append(v)
    return open_sig, closed_sig


def pigeonhole_pairs(g: Graph, pairs, multigraph=None, node_of=None):
    """Bucket pairs by floor(log2 of difference-neighbourhood size).

    Differences are measured in ``g``, or in the contracted multigraph when one
    is supplied (``node_of`` maps vertex ids to multigraph nodes).  Pairs with
    zero difference neighbourhood are returned separately as clone-like.
    """
    boxes: dict[int, list] = {}
    clones = []
    for x, y in pairs:
        if multigraph is not None:
            nx, ny = node_of[x], node_of[y]
            delta = sum(
                1
                for v in range(multigraph.n_nodes)
                if v != nx and v != ny
                and multigraph.multiplicity(v, nx) != multigraph.multiplicity(v, ny)
            )
        else:
            delta = len(difference_neighbourhood(g, x, y))
        if delta == 0:
            clones.append((x, y))
        else:
            boxes.setdefault(int(math.floor(math.log2(delta))), []).append((x, y))
    return boxes, clones


def random_delete(g: Graph, p: float, atomic_pairs=(), seed: int = 0) -> frozenset:
    """Delete each unit (atomic pair or remaining singleton) independently with prob p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("deletion probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    return _random_delete_rng(range(g.n), p, atomic_pairs, rng)


def _random_delete_rng(vertices, p, atomic_pairs, rng) -> frozenset:
    pairs = [tuple(p_) for p_ in atomic_pairs]
    ground = {v for pair in pairs for v in pair}
    singles = sorted(v for v in vertices if v not in ground)
    units = [(v,) for v in singles] + [tuple(sorted(pr)) for pr in sorted(pairs)]
    draws = rng.random(len(units))
    survivors = set()
    for unit, d in zip(units, draws):
        if d >= p:
            survivors.update(unit)
    return frozenset(survivors)


def _delete_with_parity(vertices, p, atomic_pairs, rng, clumps=None, max_rounds=10_000):
    """Rejection-sample whole deletion rounds until the parity event holds.

    ``clumps=None`` conditions on an even total deletion count; otherwise on an
    even deletion count within every clump.
    """
    vs = set(vertices)
    for _ in range(max_rounds):
        survivors = _random_delete_rng(vertices, p, atomic_pairs, rng)
        deleted = vs - survivors
        if clumps is None:
            if len(deleted) % 2 == 0:
                return survivors
        else:
            if all(len(deleted & k) % 2 == 0 for k in clumps):
                return survivors
    return None


def classify_gadget(g: Graph, surviving, pair, origin: str, n_ref: int, beta: float,
                    even_small: bool = False) -> Optional[str]:
    """Kind of gadget a surviving pair forms, or None if it missed its window."""
    x, y = pair
    if x not in surviving or y not in surviving:
        return None
    delta = abs(
        len(g.adjacency[x] & surviving) - len(g.adjacency[y] & surviving)
    )
    if origin == "small":
        want = 2 if even_small else 1
        return ("two" if even_small else "one") if delta == want else None
    if origin == "medium":
        return "medium" if 1 <= delta <= n_ref ** (2.0 / 3.0) else None
    if origin == "large":
        return "large" if n_ref ** (1.0 / 9.0) <= delta <= 2.0 * beta * n_ref else None
    raise ValueError(f"unknown origin {origin!r}")


def clump_decompose(g: Graph, large_ground, beta: float) -> ClumpDecomposition:
    """Partition the non-large vertices into degree clumps and pair up the rest.

    Requires the large-pair set to be maximal: inside the complement, every
    degree gap is either below n^{1/3} or above beta*n.  Pairs the large-pair
    ground set by degree proximity, fixes odd clumps, drops tiny clumps.
    """
    n = g.n
    n13 = n ** (1.0 / 3.0)
    n12 = math.sqrt(n)
    lset = frozenset(large_ground)
    rest = sorted((v for v in range(n) if v not in lset), key=lambda v: (g.degrees[v], v))

    clumps = []
    current: list[int] = []
    for v in rest:
        if current and g.degrees[v] - g.degrees[current[-1]] >= n13:
            clumps.append(current)
            current = [v]
        else:
            current.append(v)
    if current:
        clumps.append(current)
    for a, b in zip(clumps, clumps[1:]):
        gap = g.degrees[b[0]] - g.degrees[a[-1]]
        if not gap > beta * n:
            raise ValueError(
                "clump boundaries violate the cross-clump threshold; "
                "the large-pair set was not maximal"
            )

    lsorted = sorted(lset)
    l_degs = [g.degrees[v] for v in lsorted]
    q_groups = group_by_value(l_degs, b=n12, group_size=2)
    q_pairs = [tuple(sorted((lsorted[i], lsorted[j]))) for i, j in q_groups.groups]

    deleted = set(lset) - {v for pr in q_pairs for v in pr}
    kept_clumps = []
    for clump in clumps:
        members = list(clump)
        if len(members) % 2 == 1:
            deleted.add(members.pop())  # parity fixup: drop the last (highest-degree) member
        if len(members) <= n12:
            deleted.update(members)
            continue
        kept_clumps.append(frozenset(members))
    return ClumpDecomposition(kept_clumps, q_pairs, None, frozenset(deleted))


def _halve_greedy(deg, vertices):
    """Split ``vertices`` into equal halves, greedily minimizing the degree-sum gap."""
    order = sorted(vertices, key=lambda v: (-deg[v], v))
    half = len(order) // 2
    a, b = [], []
    da = db = 0
    for v in order:
        if (da <= db and len(a) < half) or len(b) >= half:
            a.append(v)
            da += deg[v]
        else:
            b.append(v)
            db += deg[v]
    return a, b, da - db


def _apply_stage(deg, pairs, diff, a, b):
    """Assign each pair across the halves, steering the degree gap toward zero."""
    oriented = []
    values = []
    for x, y in pairs:
        if deg[x] < deg[y]:
            x, y = y, x
        oriented.append((x, y))
        values.append(deg[x] - deg[y])
    signs, _ = greedy_signs(values, -diff)
    for (x, y), s, v in zip(oriented, signs, values):
        if s > 0:
            a.append(x)
            b.append(y)
            diff += v
        else:
            a.append(y)
            b.append(x)
            diff -= v
    return diff


def construct_splitting(h: Graph, inventory: GadgetInventory, medium_pairs=(),
                        n_ref: Optional[int] = None, beta: float = 0.01
                        ) -> Optional[Splitting]:
    """Build a splitting of ``h`` from classified gadget pairs.

    Stages: greedy halving of the leftover vertices, then large, medium and
    unit-difference gadget passes; each stage must land inside its window or
    the construction reports failure.  The final zero is forced by parity.
    """
    if h.n % 2 != 0:
        raise ValueError("survivor count must be even")
    n_ref = n_ref if n_ref is not None else h.n
    deg = dict(enumerate(h.degrees))
    return _construct(deg, list(range(h.n)), inventory, medium_pairs, n_ref, beta)


def _construct(deg, vertices, inventory, medium_pairs, n_ref, beta) -> Optional[Splitting]:
    mediums = list(inventory.medium_gadgets) + [tuple(p) for p in medium_pairs]
    stage_pairs = (
        list(inventory.one_gadgets)
        + list(inventory.two_gadgets)
        + mediums
        + list(inventory.large_gadgets)
    )
    paired = {v for pr in stage_pairs for v in pr}
    if inventory.odd_closer:
        paired.update(inventory.odd_closer)
    leftover = [v for v in vertices if v not in paired]
    if len(leftover) % 2 != 0:
        return None

    a, b, diff = _halve_greedy(deg, leftover)

    if inventory.large_gadgets:
        diff = _apply_stage(deg, inventory.large_gadgets, diff, a, b)
        if abs(diff) > 2.0 * beta * n_ref:
            return None
    if mediums:
        diff = _apply_stage(deg, mediums, diff, a, b)
        if abs(diff) > n_ref ** (2.0 / 3.0) + 2:
            return None

    if inventory.one_gadgets:
        diff = _apply_stage(deg, inventory.one_gadgets, diff, a, b)
    if inventory.two_gadgets:
        closer = inventory.odd_closer
        twos = list(inventory.two_gadgets)
        reserved = twos.pop() if closer else None
        if twos:
            diff = _apply_stage(deg, twos, diff, a, b)
        if closer:
            # one two-gadget plus the odd-difference pair close an odd gap exactly
            rx, ry = reserved
            cx, cy = closer
            dv_r = abs(deg[rx] - deg[ry])
            dv_c = abs(deg[cx] - deg[cy])
            if deg[rx] < deg[ry]:
                rx, ry = ry, rx
            if deg[cx] < deg[cy]:
                cx, cy = cy, cx
            done = False
            for s1 in (1, -1):
                for s2 in (1, -1):
                    if diff + s1 * dv_r + s2 * dv_c == 0:
                        a.append(rx if s1 > 0 else ry)
                        b.append(ry if s1 > 0 else rx)
                        a.append(cx if s2 > 0 else cy)
                        b.append(cy if s2 > 0 else cx)
                        diff = 0
                        done = True
                        break
                if done:
                    break
            if not done:
                return None

    if diff != 0:
        return None
    if len(a) != len(b):
        return None
    return Splitting(frozenset(a), frozenset(b), frozenset())


def select_case(g: Graph, params: SplitParams) -> CaseTrace:
    """Run the deterministic case analysis and report the branch decision."""
    if g.n < params.min_n:
        raise ValueError(f"n={g.n} below the configured minimum {params.min_n}")
    trace, _ = _decide(g, params)
    return trace


def _decide(g: Graph, params: SplitParams):
    """Branch decision plus all intermediate sets needed to execute it."""
    n = g.n
    trace = CaseTrace()
    ctx: dict = {}
    large = find_large_pairs(g, params.beta)
    trace.counters["large_pairs"] = len(large)
    ctx["large"] = large

    if len(large) >= params.c1 * n:
        ground = {v for pr in large for v in pr}
        u = frozenset(range(n)) - frozenset(ground)
        clones = find_clone_matching(g, u)
        trace.counters["clone_pairs"] = len(clones)
        if len(clones) >= (0.5 - params.epsilon) * n:
            trace.branch = "trivial-clones"
            ctx["clones"] = clones
            return trace, ctx
        matched = {v for pr in clones for v in pr}
        v0 = sorted(u - matched)
        trace.counters["v0"] = len(v0)
        groups = group_by_value([g.degrees[v] for v in v0], b=params.C1, group_size=3)
        triples = [tuple(v0[i] for i in grp) for grp in groups.groups]
        trace.counters["triples"] = len(triples)
        pairs = [pick_agreeing_pair(g, x, y, z, range(n)) for x, y, z in triples]
        boxes, zero = pigeonhole_pairs(g, pairs)
        trace.counters["box_sizes"] = {i: len(v) for i, v in sorted(boxes.items())}
        trace.counters["zero_difference_pairs"] = len(zero)
        logn = max(math.log2(n), 1.0)
        heavy = [i for i in boxes if len(boxes[i]) >= params.c3 * n]
        if heavy:
            k = max(heavy, key=lambda i: (len(boxes[i]), -i))
            trace.branch = "Case1-largebox"
            ctx.update(small=boxes[k], medium=[], k=k)
        else:
            eligible = sorted(i for i in boxes if len(boxes[i]) >= params.c3 * n / logn)
            if not eligible:
                trace.branch = "fallback"
                return trace, ctx
            k = eligible[0]
            medium = [p for i in boxes for p in boxes[i] if i >= k + params.C2]
            trace.branch = "Case1-smallbox"
            ctx.update(small=boxes[k], medium=medium, k=k)
        trace.counters["k"] = ctx["k"]
        return trace, ctx

    return _decide_clumped(g, params, trace, ctx)


def _decide_clumped(g: Graph, params: SplitParams, trace: CaseTrace, ctx: dict):
    n = g.n
    ground = {v for pr in ctx["large"] for v in pr}
    try:
        decomp = clump_decompose(g, ground, params.beta)
    except ValueError:
        trace.branch = "fallback"
        return trace, ctx
    trace.counters["clumps"] = [len(k) for k in decomp.clumps]
    trace.counters["q_pairs"] = len(decomp.q_pairs)
    kept = decomp.kept
    if len(kept) < params.min_n or not decomp.clumps:
        trace.branch = "fallback"
        return trace, ctx

    if len(kept) == g.n:
        f, table = g, {v: v for v in range(g.n)}
    else:
        f, table = induced_subgraph(g, kept)
    back = {i: v for v, i in table.items()}
    clumps_f = [frozenset(table[v] for v in k) for k in decomp.clumps]
    q_f = [tuple(sorted((table[x], table[y]))) for x, y in decomp.q_pairs]
    ctx.update(f=f, back=back, decomp=decomp, clumps_f=clumps_f, q_f=q_f)

    q_ground = {v for pr in q_f for v in pr}
    non_q = frozenset(range(f.n)) - frozenset(q_ground)
    clones = find_clone_matching(f, non_q)
    trace.counters["clone_pairs"] = len(clones)
    if len(clones) >= (0.5 - params.epsilon) * n:
        trace.branch = "trivial-clones-clumped"
        ctx["clones"] = clones
        return trace, ctx
    matched = {v for pr in clones for v in pr}
    v0 = sorted(non_q - matched)
    trace.counters["v0"] = len(v0)

    gops = _GammaOps(f)
    clump_masks = []
    for k in clumps_f:
        m = np.zeros(f.n, dtype=bool)
        m[list(k)] = True
        clump_masks.append(m)

    group_n = int(params.C3)
    groups = group_by_value([f.degrees[v] for v in v0], b=params.C4, group_size=group_n)
    chosen = []
    rows = {}
    for grp in groups.groups:
        members = [v0[i] for i in grp]
        pair = _pair_agreeing_on_all_clumps(gops, members, clump_masks, clumps_f)
        if pair:
            chosen.append(pair[0])
            rows[pair[0]] = pair[1]
    trace.counters["candidate_pairs"] = len(chosen)
    if not chosen:
        trace.branch = "fallback"
        return trace, ctx

    star_idx, star_pairs = None, []
    for idx, cmask in enumerate(clump_masks):
        hits = [pr for pr in chosen if (rows[pr] & cmask).any()]
        if len(hits) > len(star_pairs):
            star_idx, star_pairs = idx, hits
    if star_idx is None or len(star_pairs) < max(1, 2 * params.c4 * n):
        trace.branch = "fallback"
        return trace, ctx
    ctx["star"] = star_idx
    trace.counters["star_pairs"] = len(star_pairs)

    if q_f:
        try:
            fq = contract_pairs(f, q_f)
        except ValueError:
            trace.branch = "fallback"
            return trace, ctx
        node_of = {}
        for node, org in enumerate(fq.origin):
            if isinstance(org, tuple):
                node_of[org[0]] = node_of[org[1]] = node
            else:
                node_of[org] = node
        boxes, zero = pigeonhole_pairs(f, star_pairs, multigraph=fq, node_of=node_of)
    else:
        # no contracted pairs: the contracted multigraph is the graph itself
        boxes, zero = {}, []
        for pr in star_pairs:
            delta = int(rows[pr].sum())
            if delta == 0:
                zero.append(pr)
            else:
                boxes.setdefault(int(math.floor(math.log2(delta))), []).append(pr)
    trace.counters["box_sizes"] = {i: len(v) for i, v in sorted(boxes.items())}
    logn = max(math.log2(n), 1.0)
    eligible = [i for i in boxes if len(boxes[i]) >= max(1.0, 2 * params.c4 * n / logn)]
    if not eligible:
        trace.branch = "fallback"
        return trace, ctx
    k = max(eligible, key=lambda i: (len(boxes[i]), -i))
    trace.counters["k"] = k
    small = boxes[k]
    odd = [pr for pr in small if degree_difference(f, *pr) % 2 == 1]
    even = [pr for pr in small if degree_difference(f, *pr) % 2 == 0]
    trace.counters["odd_pairs"] = len(odd)
    trace.counters["even_pairs"] = len(even)
    threshold = max(1.0, params.c4 * n / logn)
    ctx.update(k=k)
    if len(odd) >= threshold:
        trace.branch = "Case2-odd"
        ctx["small_odd"] = odd
        return trace, ctx
    if not even:
        trace.branch = "fallback"
        return trace, ctx
    # concentrated sub-case: one star-clump vertex sees many even pairs disagree
    star_mask = clump_masks[star_idx]
    per_vertex: dict[int, list] = {}
    for pr in even:
        for v in np.flatnonzero(rows[pr] & star_mask).tolist():
            per_vertex.setdefault(v, []).append(pr)
    conc_threshold = max(1.0, params.c5 * n / logn)
    best_v = None
    for v in sorted(per_vertex):
        if len(per_vertex[v]) >= conc_threshold and (
            best_v is None or len(per_vertex[v]) > len(per_vertex[best_v])
        ):
            best_v = v
    if best_v is not None:
        trace.branch = "Case2-even-concentrated"
        ctx.update(small_even=even, conc_vertex=best_v, conc_pairs=per_vertex[best_v])
    else:
        trace.branch = "Case2-even-spread"
        ctx.update(small_even=even)
    return trace, ctx


def _pair_agreeing_on_all_clumps(gops: _GammaOps, members, clump_masks, clumps):
    """First pair from ``members`` disagreeing on at most 2/3 of every clump.

    Returns the pair with its difference mask so callers can reuse it.
    """
    from itertools import combinations

    for x, y in combinations(sorted(members), 2):
        row = gops.mask(x, y)
        if all(
            3 * int((row & m).sum()) <= 2 * len(k) for m, k in zip(clump_masks, clumps)
        ):
            return (x, y), row
    return None


def estimate_gadget_probability(g: Graph, pair, kind: str, params: SplitParams,
                                trials: int = 10_000, seed: int = 0, p=None):
    """Empirical probability (with a 3-standard-error band) that a pair attains
    its gadget window under random deletion, conditioned on the even-deletion
    parity event by rejection.

    The deletion probability follows from the pair's box index unless given
    explicitly via ``p``.
    """
    if kind not in ("one", "two", "medium", "large"):
        raise ValueError(f"unknown gadget kind {kind!r}")
    if trials < 1_000:
        raise ValueError("need at least 10^3 trials")
    x, y = pair
    n = g.n
    if p is None:
        p = params.deletion_probability(params_box_index(g, pair))
    if not 0.0 <= p <= 1.0:
        raise ValueError("deletion probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)

    gx = np.zeros(n, dtype=bool)
    gy = np.zeros(n, dtype=bool)
    for v in g.adjacency[x]:
        if v != y:
            gx[v] = True
    for v in g.adjacency[y]:
        if v != x:
            gy[v] = True
    adjacent = g.has_edge(x, y)

    lo, hi = _gadget_window(kind, n, params.beta)
    hits = 0
    accepted = 0
    rounds = 0
    while accepted < trials:
        rounds += 1
        if rounds > 1_000:
            raise RuntimeError("parity event essentially never holds at this p")
        batch = max(1024, trials)
        draws = rng.random((batch, n)) < p
        even = draws.sum(axis=1) % 2 == 0
        for row in draws[even]:
            if accepted >= trials:
                break
            accepted += 1
            if row[x] or row[y]:
                continue
            surv = ~row
            dx = int(np.count_nonzero(gx & surv)) + (1 if adjacent else 0)
            dy = int(np.count_nonzero(gy & surv)) + (1 if adjacent else 0)
            delta = abs(dx - dy)
            if lo <= delta <= hi:
                hits += 1
    p_hat = hits / trials
    band = 3.0 * math.sqrt(max(p_hat * (1 - p_hat), 1.0 / trials) / trials)
    return p_hat, band


def params_box_index(g: Graph, pair) -> int:
    """Box index of a pair from its difference-neighbourhood size (0 when empty)."""
    delta = len(difference_neighbourhood(g, *pair))
    return int(math.floor(math.log2(delta))) if delta >= 1 else 0


def _gadget_window(kind: str, n: int, beta: float):
    if kind == "one":
        return 1, 1
    if kind == "two":
        return 2, 2
    if kind == "medium":
        return 1, n ** (2.0 / 3.0)
    return n ** (1.0 / 9.0), 2.0 * beta * n


# ---------------------------------------------------------------------------
# top-level solver


def split(g: Graph, epsilon: float, seed: int = 0, max_attempts: int = 20,
          beta: Optional[float] = None, params: Optional[SplitParams] = None,
          collect_traces: Optional[list] = None) -> SplitResult:
    """Find a large splitting: two equal halves of a lightly-deleted subgraph
    inducing equally many edges.

    Retries with fresh per-attempt seeds; every returned result is re-verified
    with independent edge counts and respects the 2*epsilon*n deletion budget.
    Raises ``SplitError`` with the attempt traces when every attempt fails.
    """
    if params is None:
        params = SplitParams(epsilon=epsilon, beta=beta, seed=seed, max_attempts=max_attempts)
    n = g.n
    budget = 2.0 * params.epsilon * n
    traces = []
    for attempt in range(params.max_attempts):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(attempt,)))
        trace = CaseTrace(attempt=attempt)
        splitting = _attempt(g, params, rng, trace)
        if splitting is None:
            splitting = _direct_balance(g, params, rng, trace)
        if collect_traces is not None:
            collect_traces.append(trace)
        traces.append(trace)
        if splitting is None:
            continue
        deleted = frozenset(range(n)) - splitting.a - splitting.b
        if len(deleted) > budget:
            trace.counters["rejected"] = "deletion budget"
            continue
        if not check_split(g, splitting.a, splitting.b):
            trace.counters["rejected"] = "checker"
            continue
        from .graph import induced_edge_count

        trace.counters["deletions"] = len(deleted)
        return SplitResult(
            k=len(splitting.a),
            a=splitting.a,
            b=splitting.b,
            edges_each=induced_edge_count(g, splitting.a),
            deleted=deleted,
            method="randomized",
        )
    raise SplitError(f"no valid splitting in {params.max_attempts} attempts", traces)


def _attempt(g: Graph, params: SplitParams, rng, trace: CaseTrace) -> Optional[Splitting]:
    if g.n < params.min_n:
        trace.branch = "fallback"
        return None
    t, ctx = _decide(g, params)
    trace.branch = t.branch
    trace.counters.update(t.counters)
    if t.branch == "trivial-clones":
        return _finish_clones(g, ctx["clones"], params, lambda v: v)
    if t.branch == "trivial-clones-clumped":
        return _finish_clones(ctx["f"], ctx["clones"], params, ctx["back"].__getitem__)
    if t.branch in ("Case1-smallbox", "Case1-largebox"):
        return _execute_case1(g, params, ctx, rng, trace)
    if t.branch in ("Case2-odd", "Case2-even-concentrated", "Case2-even-spread"):
        return _execute_case2(g, params, ctx, rng, trace)
    return None


def _finish_clones(h: Graph, clones, params: SplitParams, back) -> Optional[Splitting]:
    needed = math.ceil((0.5 - params.epsilon) * h.n)
    if 2 * len(clones) < 2 * needed:
        return None
    a = frozenset(back(x) for x, _ in clones)
    b = frozenset(back(y) for _, y in clones)
    return Splitting(a, b, frozenset())


def _execute_case1(g, params, ctx, rng, trace) -> Optional[Splitting]:
    n = g.n
    p = params.deletion_probability(ctx["k"])
    survivors = _delete_with_parity(range(n), p, (), rng)
    if survivors is None:
        return None
    trace.counters["deleted_in_round"] = n - len(survivors)

    dw = _survivor_degree_array(g, survivors)
    inv = GadgetInventory()

    def delta_of(pr):
        x, y = pr
        if x in survivors and y in survivors:
            return abs(int(dw[x]) - int(dw[y]))
        return None

    for pr in ctx["small"]:
        if delta_of(pr) == 1:
            inv.one_gadgets.append(pr)
    for pr in ctx["medium"]:
        d = delta_of(pr)
        if d is not None and 1 <= d <= n ** (2.0 / 3.0):
            inv.medium_gadgets.append(pr)
    for pr in ctx["large"]:
        d = delta_of(pr)
        if d is not None and n ** (1.0 / 9.0) <= d <= 2.0 * params.beta * n:
            inv.large_gadgets.append(pr)
    trace.counters["gadgets"] = {
        "one": len(inv.one_gadgets),
        "medium": len(inv.medium_gadgets),
        "large": len(inv.large_gadgets),
    }
    return _finish_inventory(g, survivors, inv, (), n, params)


def _finish_inventory(g, survivors, inv, medium_pairs, n_ref, params) -> Optional[Splitting]:
    if len(survivors) % 2 != 0:
        return None
    dw = _survivor_degree_array(g, survivors)
    deg = {v: int(dw[v]) for v in survivors}
    return _construct(deg, sorted(survivors), inv, medium_pairs, n_ref, params.beta)


def _execute_case2(g, params, ctx, rng, trace) -> Optional[Splitting]:
    f: Graph = ctx["f"]
    back = ctx["back"]
    clumps = ctx["clumps_f"]
    q_pairs = ctx["q_f"]
    n = g.n
    p = params.deletion_probability(ctx["k"])
    branch = trace.branch

    forced_deleted: set[int] = set()
    toggled_back: Optional[int] = None
    if branch == "Case2-even-concentrated":
        star = clumps[ctx["star"]]
        v = ctx["conc_vertex"]
        others = sorted(star - {v})
        if not others:
            return None
        u = others[int(rng.integers(len(others)))]
        forced_deleted = {v, u}
        small = ctx["conc_pairs"]  # parity flipped to odd by deleting v
        even_small = False
    elif branch == "Case2-odd":
        small = ctx["small_odd"]
        even_small = False
    else:
        small = ctx["small_even"]
        even_small = True

    remaining = [x for x in range(f.n) if x not in forced_deleted]
    q_alive = [pr for pr in q_pairs if not (set(pr) & forced_deleted)]
    survivors = _delete_with_parity(remaining, p, q_alive, rng, clumps=[
        k - forced_deleted for k in clumps
    ])
    if survivors is None:
        return None
    survivors = set(survivors)

    dw = _survivor_degree_array(f, survivors)
    inv = GadgetInventory()
    small_ground = set()
    want = 2 if even_small else 1
    for pr in small:
        x, y = pr
        if x in survivors and y in survivors and abs(int(dw[x]) - int(dw[y])) == want:
            (inv.two_gadgets if even_small else inv.one_gadgets).append(pr)
            small_ground.update(pr)

    if even_small:
        if not inv.two_gadgets:
            return None
        adjusted = _even_spread_adjust(f, inv, survivors, clumps[ctx["star"]], ctx, rng)
        if not adjusted:
            return None
        small_ground = {v for pr in inv.two_gadgets for v in pr}
        small_ground.update(inv.odd_closer)
    elif not inv.one_gadgets:
        return None

    # thick pairing: surviving contracted pairs plus arbitrary pairs inside clumps
    medium_pairs = [pr for pr in q_pairs if set(pr) <= survivors and not (set(pr) & small_ground)]
    for k in clumps:
        members = sorted((k & survivors) - small_ground)
        if len(members) % 2 != 0:
            return None
        medium_pairs.extend(zip(members[0::2], members[1::2]))
    covered = small_ground | {v for pr in medium_pairs for v in pr}
    if covered != survivors:
        return None

    trace.counters["gadgets"] = {
        "one": len(inv.one_gadgets),
        "two": len(inv.two_gadgets),
        "thick_pairs": len(medium_pairs),
    }
    splitting = _finish_inventory(f, frozenset(survivors), inv, medium_pairs, n, params)
    if splitting is None:
        return None
    return Splitting(
        frozenset(back[v] for v in splitting.a),
        frozenset(back[v] for v in splitting.b),
        frozenset(),
    )


def _even_spread_adjust(f, inv, survivors, star, ctx, rng) -> bool:
    """Turn one surviving two-gadget into the odd closing pair by a local swap.

    Deletes a star-clump vertex the pair agrees on and toggles one it disagrees
    on, flipping that pair's degree-difference parity while keeping every clump
    count even.  Mutates ``inv`` and ``survivors`` in place.
    """
    gops = _GammaOps(f)
    for pr in list(inv.two_gadgets):
        x, y = pr
        diff_mask = gops.mask(x, y)
        dis_star = sorted(v for v in star if diff_mask[v])
        agree_star = sorted(
            v for v in star if not diff_mask[v] and v in survivors and v not in pr
        )
        if not dis_star or not agree_star:
            continue
        v = dis_star[0]
        u = agree_star[0]
        survivors.discard(u)
        if v in survivors:
            survivors.discard(v)
        else:
            survivors.add(v)
        inv.two_gadgets.remove(pr)
        dw = _survivor_degree_array(f, survivors)
        # keep only pairs whose window survived the adjustment
        inv.two_gadgets[:] = [
            q
            for q in inv.two_gadgets
            if set(q) <= survivors and abs(int(dw[q[0]]) - int(dw[q[1]])) == 2
        ]
        if (
            x in survivors
            and y in survivors
            and abs(int(dw[x]) - int(dw[y])) in (1, 3)
        ):
            inv.odd_closer = pr
            return True
        return False
    return False


def _direct_balance(g: Graph, params: SplitParams, rng, trace: CaseTrace) -> Optional[Splitting]:
    """Deterministic fallback: pair vertices by sorted degree and choose an
    exact signed combination of the pair gaps via subset-sum reachability,
    deleting the widest pair and retrying when no exact combination exists."""
    n = g.n
    budget = int(2.0 * params.epsilon * n)
    alive = set(range(n))
    deleted: set[int] = set()
    if len(alive) % 2 == 1:
        drop = max(alive, key=lambda v: (g.degrees[v], v))
        alive.discard(drop)
        deleted.add(drop)
        if len(deleted) > budget:
            return None

    if trace.branch and trace.branch != "fallback":
        trace.branch = f"{trace.branch}+fallback"
    else:
        trace.branch = "fallback"

    while True:
        if len(g.edges) >= 4096:
            dw = _survivor_degree_array(g, alive)
            deg = {v: int(dw[v]) for v in alive}
        else:
            deg = _degrees_within(g, alive)
        order = sorted(alive, key=lambda v: (deg[v], v))
        pairs = list(zip(order[0::2], order[1::2]))
        deltas = [deg[y] - deg[x] for x, y in pairs]
        signs = _signed_zero_sum(deltas)
        if signs is not None:
            a, bb = [], []
            for (x, y), s in zip(pairs, signs):
                # sign +1 adds the pair's gap to side A's total (y is the heavier)
                if s > 0:
                    a.append(y)
                    bb.append(x)
                else:
                    a.append(x)
                    bb.append(y)
            trace.counters["fallback_deletions"] = len(deleted)
            return Splitting(frozenset(a), frozenset(bb), frozenset(deleted))
        if len(deleted) + 2 > budget or len(alive) <= 2:
            return None
        worst = max(range(len(pairs)), key=lambda i: (deltas[i], i))
        for v in pairs[worst]:
            alive.discard(v)
            deleted.add(v)


def _signed_zero_sum(deltas):
    """Signs making the signed sum of non-negative deltas exactly zero, or None."""
    total = sum(deltas)
    if total % 2 != 0:
        return None
    offset = total
    mask = (1 << (2 * offset + 1)) - 1
    reach = [1 << offset]
    for d in deltas:
        r = reach[-1]
        reach.append(((r << d) | (r >> d)) & mask)
    if not (reach[-1] >> offset) & 1:
        return None
    signs = []
    target = offset
    for i in range(len(deltas), 0, -1):
        d = deltas[i - 1]
        prev = target - d
        if 0 <= prev <= 2 * offset and (reach[i - 1] >> prev) & 1:
            signs.append(1)
            target = prev
        else:
            signs.append(-1)
            target = target + d
    signs.reverse()
    return signs
