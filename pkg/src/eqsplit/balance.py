"""Deterministic balancing primitives: sign balancing, value bucketing, triple selection."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, difference_neighbourhood


@dataclass(frozen=True)
class SignAssignment:
    signs: tuple[int, ...]
    residual: int

    @property
    def total(self) -> int:
        return self.residual


@dataclass(frozen=True)
class ValueGroups:
    groups: tuple[tuple[int, ...], ...]
    spread_bound: float


def greedy_signs(values, target):
    """Greedy sign choice: add while the running sum stays within target + max.

    Once a subtraction fires the running sum is trapped in the target's
    max-value band and never escapes.  No precondition checks here;
    ``sign_balance`` is the validated public entry.
    """
    b = max(values, default=0)
    signs = []
    running = 0
    for x in values:
        if running + x <= target + b:
            signs.append(1)
            running += x
        else:
            signs.append(-1)
            running -= x
    return tuple(signs), abs(target - running)


def sign_balance(values, target: int) -> SignAssignment:
    """Choose signs so the signed sum lands within the largest value of ``target``.

    Values must lie in an interval [a, b] with a >= 0 and |target| <= t*a; the
    greedy achieves |target - sum| <= b by induction on the prefix.
    """
    values = list(values)
    if not values:
        if target != 0:
            raise ValueError("empty value list can only hit target 0")
        return SignAssignment((), 0)
    a, b = min(values), max(values)
    if a < 0:
        raise ValueError("values must be non-negative")
    t = len(values)
    if abs(target) > t * a:
        raise ValueError(f"target {target} outside [-{t * a}, {t * a}]")
    signs, residual = greedy_signs(values, target)
    assert residual <= b
    return SignAssignment(signs, residual)


def group_by_value(values, b: float, group_size: int) -> ValueGroups:
    """Sorted-sweep bucketing: disjoint index groups of fixed size with spread <= b.

    Guarantees at least floor(t/N) - ceil(a/b) groups for values in [0, a];
    each sweep segment drops only its tail mod N.
    """
    if b <= 0:
        raise ValueError("spread bound must be positive")
    if group_size < 1:
        raise ValueError("group size must be at least 1")
    values = list(values)
    if any(x < 0 for x in values):
        raise ValueError("values must be non-negative")
    order = sorted(range(len(values)), key=lambda i: (values[i], i))

    segments = []
    current: list[int] = []
    seg_start = None
    for i in order:
        if seg_start is None or values[i] > seg_start + b:
            if current:
                segments.append(current)
            current = [i]
            seg_start = values[i]
        else:
            current.append(i)
    if current:
        segments.append(current)

    groups = []
    for seg in segments:
        usable = len(seg) - (len(seg) % group_size)
        for j in range(0, usable, group_size):
            groups.append(tuple(seg[j : j + group_size]))
    return ValueGroups(tuple(groups), b)


def pick_agreeing_pair(g: Graph, x: int, y: int, z: int, u) -> tuple[int, int]:
    """Return two of x, y, z that disagree on at most two thirds of ``u``.

    Every v lies in at most two of the three difference neighbourhoods, so the
    minimum pair always qualifies; ties break toward the smaller sorted pair.
    """
    if len({x, y, z}) != 3:
        raise ValueError("need three distinct vertices")
    us = set(u)
    best = None
    for a, c in ((x, y), (x, z), (y, z)):
        count = len(difference_neighbourhood(g, a, c) & us)
        key = (count, tuple(sorted((a, c))))
        if best is None or key < best:
            best = key
    count, pair = best
    assert 3 * count <= 2 * len(us)
    return pair
