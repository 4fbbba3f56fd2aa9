"""Interval partitions, escape intervals, and partition-derived functions.

The constructions here turn partition data into fixed-point-free
functions and back: a partition of the window into parts induces the
function sending each point to its part index, a function induces the
escape intervals that outrun both it and its preimages, and a set A
localizes a function to the blocks A cuts out. Escape intervals are the
workhorse: any set meeting every union of two consecutive blocks at most
once is free for the function the intervals were built from.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Optional

from .funcgraph import FiniteFunction, Subset


@dataclass(frozen=True)
class IntervalPartition:
    """Consecutive blocks [e_i, e_{i+1}) given by increasing endpoints from 0."""

    endpoints: tuple[int, ...]

    def __post_init__(self) -> None:
        ends = tuple(self.endpoints)
        object.__setattr__(self, "endpoints", ends)
        if len(ends) < 2:
            raise ValueError("need at least one block")
        if ends[0] != 0:
            raise ValueError("first endpoint must be 0")
        for a, b in zip(ends, ends[1:]):
            if b <= a:
                raise ValueError("endpoints must be strictly increasing")

    @property
    def block_count(self) -> int:
        return len(self.endpoints) - 1

    def blocks(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.endpoints, self.endpoints[1:]))

    def block_of(self, x: int) -> int:
        if x < 0 or x >= self.endpoints[-1]:
            raise ValueError(f"{x} outside the covered range")
        return bisect_right(self.endpoints, x) - 1

    def to_json(self) -> dict:
        return {"endpoints": list(self.endpoints)}

    @classmethod
    def from_json(cls, doc: dict) -> "IntervalPartition":
        return cls(tuple(int(e) for e in doc["endpoints"]))


@dataclass(frozen=True)
class PartitionIntoParts:
    """A labeling of the window into finitely many nonempty parts."""

    window: int
    part_of: tuple[int, ...]

    def __post_init__(self) -> None:
        labels = tuple(self.part_of)
        object.__setattr__(self, "part_of", labels)
        if len(labels) != self.window or not labels:
            raise ValueError("labeling length must match a positive window")
        count = max(labels) + 1
        seen = [False] * count
        for p in labels:
            if p < 0:
                raise ValueError("part indices must be nonnegative")
            seen[p] = True
        if not all(seen):
            raise ValueError("every part index up to the maximum must be used")

    @property
    def part_count(self) -> int:
        return max(self.part_of) + 1

    def to_json(self) -> dict:
        return {"n": self.window, "parts": list(self.part_of)}

    @classmethod
    def from_json(cls, doc: dict) -> "PartitionIntoParts":
        return cls(int(doc["n"]), tuple(int(p) for p in doc["parts"]))


def dominates(
    outer: IntervalPartition, inner: IntervalPartition, window: int
) -> tuple[int, Optional[int]]:
    """Count outer blocks inside the window holding no complete inner block.

    Both partitions must cover [0, window). Returns the violation count
    and the index of the last violating outer block, None when all outer
    blocks are satisfied.
    """
    if outer.endpoints[-1] < window or inner.endpoints[-1] < window:
        raise ValueError("both partitions must cover the window")
    violations = 0
    last = None
    ends = inner.endpoints
    for idx, (lo, hi) in enumerate(outer.blocks()):
        if hi > window:
            break
        # first inner endpoint at or past lo starts the candidate block
        p = bisect_left(ends, lo)
        if p + 1 >= len(ends) or ends[p + 1] > hi:
            violations += 1
            last = idx
    return violations, last


def partition_function(partition: PartitionIntoParts) -> FiniteFunction:
    """Send each point to its part index, or to its successor on a clash.

    A point equal to its own part index cannot map there (no fixed
    points), so it falls through to the successor.
    """
    vals = []
    for k, p in enumerate(partition.part_of):
        vals.append(p if p != k else k + 1)
    return FiniteFunction(tuple(vals))


def escape_intervals(fn: FiniteFunction) -> IntervalPartition:
    """Blocks growing fast enough to outrun fn in both directions.

    h(0) = 0 and each next endpoint clears the images and preimages of
    everything up to the current one: h(n+1) = 1 + max over f[0..h(n)],
    f^{-1}[0..h(n)] and h(n) itself, truncated at the window edge. The
    recurrence is minimal, so the blocks are the shortest ones with the
    escape property.
    """
    if not fn.injective_on_window:
        raise ValueError("escape intervals need an injective function")
    n = fn.window
    ends = [0]
    while ends[-1] < n:
        h = ends[-1]
        top = h
        for x in range(h + 1):
            if fn.values[x] > top:
                top = fn.values[x]
        for x in range(n):
            if fn.values[x] <= h and x > top:
                top = x
        ends.append(min(top + 1, n))
    return IntervalPartition(tuple(ends))


def verify_escape(
    partition: IntervalPartition, fn: FiniteFunction
) -> tuple[tuple[int, int, int], ...]:
    """Direct scan of the escape property, independent of the recurrence.

    For every endpoint pair (h_i, h_{i+1}) with h_{i+1} strictly inside
    the window: points up to h_i must map below h_{i+1}, and points
    mapping to or below h_i must sit below h_{i+1}. Violations are
    reported as (block index, point, its image). The final endpoint is
    exempt when it reaches the window edge, where truncation cuts the
    recurrence short.
    """
    n = fn.window
    ends = partition.endpoints
    bad = []
    for i in range(len(ends) - 1):
        h, nxt = ends[i], ends[i + 1]
        if nxt >= n:
            continue
        for x in range(min(h, n - 1) + 1):
            if fn.values[x] >= nxt:
                bad.append((i, x, fn.values[x]))
        for x in range(n):
            if fn.values[x] <= h and x >= nxt:
                bad.append((i, x, fn.values[x]))
    return tuple(bad)


def localized_function(g: FiniteFunction, subset: Subset) -> FiniteFunction:
    """Keep g where it stays inside one subset block, successor elsewhere.

    The blocks are [a_0, a_1), ..., [a_{m-2}, a_{m-1}) for the sorted
    elements a_i. Points outside every block take the successor branch
    too, so the output is always fixed-point-free.
    """
    if len(subset.elements) < 2:
        raise ValueError("need at least two elements to form a block")
    if subset.window > g.window:
        raise ValueError("subset window exceeds function window")
    a = subset.elements
    vals = []
    for i in range(g.window):
        j = bisect_right(a, i) - 1
        if 0 <= j < len(a) - 1 and a[j] <= g.values[i] < a[j + 1]:
            vals.append(g.values[i])
        else:
            vals.append(i + 1)
    return FiniteFunction(tuple(vals))


def localization_agreement(
    g: FiniteFunction, subset: Subset, localized: FiniteFunction
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Where the localized function agrees with g, and where it must.

    Returns (actual agreement positions, same-block positions). The two
    coincide unless construction and check disagree; points where g
    already equals the successor land in the agreement set without being
    same-block, so the check is containment of the second in the first
    plus g-equality on it.
    """
    a = subset.elements
    agree = tuple(
        i for i in range(g.window) if localized.values[i] == g.values[i]
    )
    same_block = []
    for i in range(g.window):
        j = bisect_right(a, i) - 1
        if 0 <= j < len(a) - 1 and a[j] <= g.values[i] < a[j + 1]:
            same_block.append(i)
    return agree, tuple(same_block)


def edge_blocks(g: FiniteFunction, subset: Subset) -> IntervalPartition:
    """Greedy blocks each containing a g-edge inside the subset.

    Scanning left to right, a block closes right after the first point
    that completes an edge (x, g(x)) with both ends in the subset and in
    the open block. The trailing stretch with no completed edge is
    dropped; if no block ever closes the subset carries no in-window
    edge at all, which violates the precondition.
    """
    members = set(subset.elements)
    ends = [0]
    pending: set[int] = set()
    for t in range(g.window):
        if t not in members:
            continue
        y = g.values[t]
        closes = t in pending
        if not closes and y in members and ends[-1] <= y < t:
            closes = True
        if closes:
            ends.append(t + 1)
            pending.clear()
            continue
        if y in members and t < y < g.window:
            pending.add(y)
    if len(ends) < 2:
        raise ValueError("no in-window edge of the subset to block around")
    return IntervalPartition(tuple(ends))


def splits_all_parts(
    subset: Subset, partition: PartitionIntoParts, threshold: int
) -> bool:
    """True when the subset meets every part at least threshold times."""
    if subset.window > partition.window:
        raise ValueError("subset window exceeds partition window")
    counts = [0] * partition.part_count
    for x in subset.elements:
        counts[partition.part_of[x]] += 1
    return all(c >= threshold for c in counts)
