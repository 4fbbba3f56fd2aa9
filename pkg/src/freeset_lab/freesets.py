"""Free-set search and 3-partitions for fixed-point-free window functions.

A set A is free for f when no in-window edge (x, f(x)) has both endpoints
in A. Every fixed-point-free function admits a partition of its window
into three free classes: 2-color along the chains of the functional graph
and spend the third color only where an odd cycle closes. This module
builds that partition, searches for large free sets under whole families
of functions (exhaustively on small windows, greedily above), and finds
sets that a family of colorings cannot split.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .funcgraph import FiniteFunction, Subset, is_star_free

EXACT_WINDOW_CAP = 24


@dataclass(frozen=True)
class Coloring:
    """An assignment of a color in {0, 1, 2} to every point of a window."""

    window: int
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        colors = tuple(self.colors)
        object.__setattr__(self, "colors", colors)
        if len(colors) != self.window:
            raise ValueError("color count must match window")
        for x, c in enumerate(colors):
            if c not in (0, 1, 2):
                raise ValueError(f"color {c} at {x} is not in {{0, 1, 2}}")

    def color_class(self, i: int) -> Subset:
        return Subset.of(
            self.window, (x for x, c in enumerate(self.colors) if c == i)
        )

    def to_json(self) -> dict:
        return {"n": self.window, "colors": list(self.colors)}

    @classmethod
    def from_json(cls, doc: dict) -> "Coloring":
        return cls(int(doc["n"]), tuple(int(c) for c in doc["colors"]))


def katetov_partition(fn: FiniteFunction) -> Coloring:
    """Partition the window into three classes, each free for fn.

    Chains are walked from the lowest uncolored point, alternating colors
    0 and 1 forward along the function. A walk stops by exiting the
    window, by closing a cycle, or by attaching to an already colored
    point. Attachment colors the chain backward from the attachment point
    so the contact edge stays bichromatic; a cycle whose closing edge
    comes back on its own color recolors the closing point with color 2.
    Color 2 is never spent anywhere else, so chains and even cycles use
    two colors only.
    """
    n = fn.window
    colors = [-1] * n
    for start in range(n):
        if colors[start] != -1:
            continue
        chain = [start]
        position = {start: 0}
        stop = "exit"
        anchor = -1
        while True:
            nxt = fn.values[chain[-1]]
            if nxt >= n:
                stop = "exit"
                break
            if nxt in position:
                stop = "cycle"
                anchor = position[nxt]
                break
            if colors[nxt] != -1:
                stop = "attach"
                anchor = colors[nxt]
                break
            position[nxt] = len(chain)
            chain.append(nxt)
        if stop == "attach":
            # walk backward so the chain end differs from the attach color
            c = 1 if anchor == 0 else 0
            for x in reversed(chain):
                colors[x] = c
                c = 1 - c
        else:
            for i, x in enumerate(chain):
                colors[x] = i % 2
            if stop == "cycle" and colors[chain[-1]] == colors[chain[anchor]]:
                # odd cycle: the closing edge is monochromatic, break it
                colors[chain[-1]] = 2
    return Coloring(n, tuple(colors))


def verify_coloring(
    coloring: Coloring, fn: FiniteFunction
) -> tuple[tuple[int, int], ...]:
    """Monochromatic in-window edges; empty exactly when all classes are free.

    Deliberately ignores how the coloring was produced: it rescans every
    edge from scratch.
    """
    if coloring.window != fn.window:
        raise ValueError("coloring window does not match function window")
    bad = []
    for x, y in fn.in_window_edges():
        if coloring.colors[x] == coloring.colors[y]:
            bad.append((x, y))
    return tuple(bad)


def _family_adjacency(family: Sequence[FiniteFunction], window: int) -> list[int]:
    """Undirected adjacency bitmasks of the union edge graph on [0, window)."""
    adj = [0] * window
    for fn in family:
        if fn.window < window:
            raise ValueError("family function window smaller than search window")
        for x in range(window):
            y = fn.values[x]
            if y < window:
                adj[x] |= 1 << y
                adj[y] |= 1 << x
    return adj


def _mis_size(avail: int, adj: list[int]) -> int:
    if avail == 0:
        return 0
    pick = -1
    pick_deg = -1
    m = avail
    while m:
        b = m & -m
        i = b.bit_length() - 1
        m ^= b
        d = (adj[i] & avail).bit_count()
        if d <= 1:
            # isolated or pendant vertices belong to some maximum set
            return 1 + _mis_size(avail & ~adj[i] & ~b, adj)
        if d > pick_deg:
            pick_deg = d
            pick = i
    bit = 1 << pick
    taken = 1 + _mis_size(avail & ~adj[pick] & ~bit, adj)
    skipped = _mis_size(avail & ~bit, adj)
    return taken if taken >= skipped else skipped


def max_free_subset(
    family: Sequence[FiniteFunction], window: int, mode: str = "exact"
) -> Subset:
    """A subset of [0, window) free for every function in the family.

    Exact mode returns a maximum-cardinality free set, lexicographically
    smallest among the optima, and refuses windows above EXACT_WINDOW_CAP.
    Greedy mode scans the window in increasing order and keeps every point
    that does not close an edge with the points already kept; the result
    is maximal under inclusion but not necessarily maximum.
    """
    if window <= 0:
        raise ValueError("window must be positive")
    for fn in family:
        if fn.window < window:
            raise ValueError("family function window smaller than search window")
    if mode == "greedy":
        chosen: list[int] = []
        chosen_set: set[int] = set()
        images: set[int] = set()
        for v in range(window):
            if v in images:
                continue
            if any(fn.values[v] in chosen_set for fn in family):
                continue
            chosen.append(v)
            chosen_set.add(v)
            for fn in family:
                images.add(fn.values[v])
        return Subset(window, tuple(chosen))
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if window > EXACT_WINDOW_CAP:
        raise ValueError(f"exact mode capped at window {EXACT_WINDOW_CAP}")
    adj = _family_adjacency(family, window)
    full = (1 << window) - 1
    best = _mis_size(full, adj)
    # rebuild the lexicographically smallest optimum greedily
    chosen = []
    avail = full
    remaining = best
    for v in range(window):
        bit = 1 << v
        if not avail & bit:
            continue
        if 1 + _mis_size(avail & ~adj[v] & ~bit, adj) == remaining:
            chosen.append(v)
            avail &= ~adj[v] & ~bit
            remaining -= 1
            if remaining == 0:
                break
        else:
            avail &= ~bit
    return Subset(window, tuple(chosen))


def is_maximal_free(
    subset: Subset, family: Sequence[FiniteFunction], window: int
) -> bool:
    """True when the set is free and no point of the window can join it."""
    for fn in family:
        if fn.window < window:
            raise ValueError("family function window smaller than search window")
    members = set(subset.elements)
    for fn in family:
        for x in subset.elements:
            y = fn.values[x]
            if y < window and y in members:
                return False
    for v in range(window):
        if v in members:
            continue
        grown = members | {v}
        blocked = False
        for fn in family:
            for x in grown:
                y = fn.values[x]
                if y < window and y in grown and y != x:
                    blocked = True
                    break
            if blocked:
                break
        if not blocked:
            return False
    return True


def find_unsplit_set(
    colorings: Sequence[Coloring], min_size: int
) -> Optional[tuple[Subset, tuple[int, ...]]]:
    """Largest set monochromatic under every coloring, with its color choices.

    Points sharing the same color signature across all colorings are
    exactly the sets no coloring can split, so the largest signature
    bucket is the answer. Returns the set and the per-coloring color
    vector, or None when every bucket is smaller than min_size. Ties on
    size break to the lexicographically smallest element list.
    """
    if not colorings:
        raise ValueError("need at least one coloring")
    window = colorings[0].window
    for c in colorings:
        if c.window != window:
            raise ValueError("colorings disagree on the window")
    if window > EXACT_WINDOW_CAP:
        raise ValueError(f"unsplit search capped at window {EXACT_WINDOW_CAP}")
    buckets: dict[tuple[int, ...], list[int]] = {}
    for x in range(window):
        sig = tuple(c.colors[x] for c in colorings)
        buckets.setdefault(sig, []).append(x)
    best_sig = None
    best_members: list[int] = []
    for sig, members in buckets.items():
        if len(members) > len(best_members) or (
            len(members) == len(best_members) and members < best_members
        ):
            best_sig = sig
            best_members = members
    if best_sig is None or len(best_members) < min_size:
        return None
    return Subset(window, tuple(best_members)), best_sig


def free_report(
    subset: Subset, family: Sequence[FiniteFunction]
) -> tuple[int, ...]:
    """Size of f[A] intersected with A, per function in the family."""
    return tuple(len(is_star_free(subset, fn).elements) for fn in family)
