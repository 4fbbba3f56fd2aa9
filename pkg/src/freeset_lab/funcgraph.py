"""Finite fixed-point-free functions and their orbit structure.

Everything downstream works with a function f on a window [0, N): a tuple of
values with f(x) != x everywhere. Values may point past the window edge;
such edges leave the graph and are tracked as boundary exits rather than
silently clipped. The functional graph of an injective window function
splits into cycles and into paths that either start outside the image or
fall off the window edge, and that decomposition is what the covering and
partition constructions consume.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

_MASK64 = (1 << 64) - 1
_MULT = 6364136223846793005
_INC = 1442695040888963407


class Lcg64:
    """Deterministic 64-bit linear congruential generator (MMIX constants).

    Output is the top 32 bits of the state. Bounded draws use rejection
    sampling so every residue is equally likely; shuffling is Fisher-Yates
    from the top. The point is bit-for-bit reproducibility across runs and
    platforms, which the report-determinism check relies on.
    """

    def __init__(self, seed: int) -> None:
        self.state = (seed ^ _MULT) & _MASK64
        self.next_u32()

    def next_u32(self) -> int:
        self.state = (self.state * _MULT + _INC) & _MASK64
        return self.state >> 32

    def below(self, n: int) -> int:
        """Uniform draw from [0, n). Requires 1 <= n <= 2**32."""
        if n <= 0 or n > (1 << 32):
            raise ValueError(f"below() needs 1 <= n <= 2**32, got {n}")
        limit = (1 << 32) - ((1 << 32) % n)
        while True:
            v = self.next_u32()
            if v < limit:
                return v % n

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class FiniteFunction:
    """A function on [0, N) given by its value tuple.

    values[x] is f(x); entries must be nonnegative and differ from their
    index (no fixed points). Entries >= N are allowed and mark edges that
    exit the window.
    """

    values: tuple[int, ...]
    fixed_point_free: bool = field(init=False)
    injective_on_window: bool = field(init=False)

    def __post_init__(self) -> None:
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("empty window")
        fpf = True
        for x, v in enumerate(vals):
            if v < 0:
                raise ValueError(f"negative value at {x}")
            if v == x:
                fpf = False
        if not fpf:
            raise ValueError("function has a fixed point")
        object.__setattr__(self, "fixed_point_free", True)
        seen: set[int] = set()
        inj = True
        for v in vals:
            if v in seen:
                inj = False
                break
            seen.add(v)
        object.__setattr__(self, "injective_on_window", inj)

    @property
    def window(self) -> int:
        return len(self.values)

    def __call__(self, x: int) -> int:
        return self.values[x]

    def in_window_edges(self) -> Iterator[tuple[int, int]]:
        """Edges (x, f(x)) with both ends inside the window."""
        n = len(self.values)
        for x, v in enumerate(self.values):
            if v < n:
                yield (x, v)

    def to_json(self) -> dict:
        return {"n": len(self.values), "values": list(self.values)}

    @classmethod
    def from_json(cls, doc: dict) -> "FiniteFunction":
        vals = tuple(int(v) for v in doc["values"])
        if int(doc["n"]) != len(vals):
            raise ValueError("declared window does not match value count")
        return cls(vals)


@dataclass(frozen=True)
class Subset:
    """A subset of a window, kept as a strictly increasing tuple."""

    window: int
    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.window <= 0:
            raise ValueError("window must be positive")
        prev = -1
        for e in self.elements:
            if e <= prev:
                raise ValueError("elements must be strictly increasing")
            if e < 0 or e >= self.window:
                raise ValueError(f"element {e} outside window [0, {self.window})")
            prev = e

    @classmethod
    def of(cls, window: int, elements: Iterable[int]) -> "Subset":
        return cls(window, tuple(sorted(set(elements))))

    def __contains__(self, x: int) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def to_json(self) -> list[int]:
        return list(self.elements)


@dataclass(frozen=True)
class Orbit:
    """One orbit of an injective window function.

    kind is "cycle" or "path". Cycle nodes are rotated so the smallest node
    comes first; following the function from each node gives the next, and
    the last node maps back to the first. Path nodes run in function order
    from the unique entry point; exits_window says whether the final node
    maps past the window edge (the alternative is that the walk was cut by
    the window in a larger ambient cycle, which cannot happen here, so it
    is always True for paths), and enters_window marks a path whose first
    node has no preimage inside the window.
    """

    kind: str
    nodes: tuple[int, ...]
    exits_window: bool
    enters_window: bool


@dataclass(frozen=True)
class OrbitDecomposition:
    window: int
    orbits: tuple[Orbit, ...]

    @property
    def cycles(self) -> tuple[Orbit, ...]:
        return tuple(o for o in self.orbits if o.kind == "cycle")

    @property
    def paths(self) -> tuple[Orbit, ...]:
        return tuple(o for o in self.orbits if o.kind == "path")


def orbit_decomposition(fn: FiniteFunction) -> OrbitDecomposition:
    """Split an injective window function into cycles and paths.

    Injectivity makes every in-window point have at most one preimage, so
    each connected component is a cycle or a single path. Paths begin at
    points with no in-window preimage or whose would-be preimage maps out
    of the window; they end where the function leaves the window.
    """
    if not fn.injective_on_window:
        raise ValueError("orbit decomposition needs an injective function")
    n = fn.window
    pre = [-1] * n
    for x, v in enumerate(fn.values):
        if v < n:
            pre[v] = x
    seen = [False] * n
    orbits: list[Orbit] = []
    for start in range(n):
        if seen[start]:
            continue
        if pre[start] == -1:
            # path: walk forward until the function exits the window
            nodes = [start]
            seen[start] = True
            x = start
            while fn.values[x] < n:
                x = fn.values[x]
                nodes.append(x)
                seen[x] = True
            orbits.append(
                Orbit("path", tuple(nodes), exits_window=True, enters_window=True)
            )
    for start in range(n):
        if seen[start]:
            continue
        # remaining components are cycles: every node has a preimage
        nodes = [start]
        seen[start] = True
        x = fn.values[start]
        while x != start:
            nodes.append(x)
            seen[x] = True
            x = fn.values[x]
        k = nodes.index(min(nodes))
        nodes = nodes[k:] + nodes[:k]
        orbits.append(
            Orbit("cycle", tuple(nodes), exits_window=False, enters_window=False)
        )
    orbits.sort(key=lambda o: o.nodes[0])
    return OrbitDecomposition(n, tuple(orbits))


def verify_orbits(fn: FiniteFunction, dec: OrbitDecomposition) -> tuple[str, ...]:
    """Re-check a decomposition against the function; returns complaints.

    Confirms the orbits partition the window, consecutive nodes are
    f-edges, cycles close, paths exit the window, and path heads have no
    in-window preimage.
    """
    n = fn.window
    complaints = []
    if dec.window != n:
        complaints.append("window mismatch")
        return tuple(complaints)
    seen: set[int] = set()
    image = {v for v in fn.values if v < n}
    for idx, orbit in enumerate(dec.orbits):
        for node in orbit.nodes:
            if node in seen:
                complaints.append(f"node {node} repeats")
            seen.add(node)
        for a, b in zip(orbit.nodes, orbit.nodes[1:]):
            if fn.values[a] != b:
                complaints.append(f"orbit {idx} breaks at {a}")
        last = orbit.nodes[-1]
        if orbit.kind == "cycle":
            if fn.values[last] != orbit.nodes[0]:
                complaints.append(f"cycle {idx} does not close")
        elif orbit.kind == "path":
            if fn.values[last] < n:
                complaints.append(f"path {idx} does not exit the window")
            if orbit.nodes[0] in image:
                complaints.append(f"path {idx} head has a preimage")
        else:
            complaints.append(f"orbit {idx} has unknown kind {orbit.kind}")
    if len(seen) != n:
        complaints.append("orbits do not cover the window")
    return tuple(complaints)


def is_star_free(subset: Subset, fn: FiniteFunction) -> Subset:
    """Elements of the subset hit by the function from inside the subset.

    Returns f[A] cap A as a subset, counting only edges that stay inside
    the subset's window. Empty means A is free for f.
    """
    if subset.window > fn.window:
        raise ValueError("subset window exceeds function window")
    members = set(subset.elements)
    hits = {fn.values[x] for x in subset.elements if fn.values[x] < subset.window}
    return Subset(subset.window, tuple(sorted(hits & members)))


def is_free(subset: Subset, fn: FiniteFunction) -> bool:
    return not is_star_free(subset, fn).elements


def random_fpf_function(
    seed: int, n: int, injective: bool = False, rng: Optional[Lcg64] = None
) -> FiniteFunction:
    """Draw a fixed-point-free function on [0, n) from a seed.

    Non-injective draws pick each value uniformly from the window minus the
    diagonal. Injective draws shuffle a pool slightly larger than the
    window (the extra room gives boundary exits and keeps the retry loop
    short) and resample until no fixed point remains.
    """
    if n < 1:
        raise ValueError("window must have at least 1 point")
    if n == 1:
        # the only fixed-point-free choice is a boundary exit
        return FiniteFunction((1,))
    gen = rng if rng is not None else Lcg64(seed)
    if not injective:
        vals = []
        for i in range(n):
            v = gen.below(n - 1)
            if v >= i:
                v += 1
            vals.append(v)
        return FiniteFunction(tuple(vals))
    m = n + max(1, n // 8)
    while True:
        pool = list(range(m))
        gen.shuffle(pool)
        if all(pool[i] != i for i in range(n)):
            return FiniteFunction(tuple(pool[:n]))
