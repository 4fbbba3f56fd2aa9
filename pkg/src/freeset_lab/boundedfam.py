"""Block systems for bounded families: coded blocks, shadows, and measures.

Two block constructions live here. The coded system splits positions
into intervals I_n sized so fast that the number of g-bounded tuples on
all earlier intervals stays below |I_n|; each tuple on I_n is addressed
by a mixed-radix code inside an implicit block J_n of size
F(n) = prod of g over I_n. Coding a tuple h blockwise yields a set A
with one point per J_n, and the shadow sets S_f(n), the images and
preimages of earlier blocks inside J_n, certify every cross-block edge
of f inside A. The shadow bound |S_f(n)| < |I_n| leaves room to build a
meeting function that agrees somewhere on I_n with every shadow tuple.

The measured system grows blocks by |J_{n+1}| = 2(n+1) * (total so far)
with singleton mass 1 over that total, so each block weighs 2(n+1) while
the bad set a function drags into a block never weighs more than 2.
J-blocks here are small enough to materialize; the coded system's are
not (F(2) is already around 10^20 for g constant 2) and stay implicit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .funcgraph import FiniteFunction, Subset

MAX_MATERIALIZED_POSITIONS = 10_000_000


@dataclass(frozen=True)
class GrowthFunction:
    """Nondecreasing per-position bounds, each at least 2."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("empty growth function")
        prev = 2
        for i, v in enumerate(vals):
            if v < 2:
                raise ValueError(f"bound {v} at {i} is below 2")
            if v < prev:
                raise ValueError("bounds must be nondecreasing")
            prev = v

    def __len__(self) -> int:
        return len(self.values)


def constant_growth(c: int, depth: int) -> GrowthFunction:
    """A constant growth function just long enough for the given depth."""
    if c < 2:
        raise ValueError("constant bound must be at least 2")
    if depth < 1:
        raise ValueError("depth must be positive")
    length = 0
    total = 0
    for _ in range(depth):
        size = 2 * total + 1
        length += size
        if length > MAX_MATERIALIZED_POSITIONS:
            raise ValueError("interval prefix too large to materialize")
        total += c**size
    return GrowthFunction((c,) * length)


@dataclass(frozen=True)
class BlockSystem:
    """Intervals I_n, their tuple counts F(n), and implicit coded blocks J_n.

    The J-blocks are only ever addressed as block index plus big-integer
    code; j_starts accumulates the F values so J_n = [j_starts[n],
    j_starts[n+1]). Nothing below materializes a J-block.
    """

    g: GrowthFunction
    depth: int
    i_endpoints: tuple[int, ...]
    f_sizes: tuple[int, ...]
    j_starts: tuple[int, ...]

    def interval(self, n: int) -> tuple[int, int]:
        return self.i_endpoints[n], self.i_endpoints[n + 1]

    def j_block(self, n: int) -> tuple[int, int]:
        return self.j_starts[n], self.j_starts[n + 1]

    def block_of_point(self, e: int) -> int:
        for n in range(self.depth):
            if self.j_starts[n] <= e < self.j_starts[n + 1]:
                return n
        raise ValueError(f"{e} outside every coded block")

    def encode(self, n: int, values: Sequence[int]) -> int:
        """Mixed-radix code of a tuple on I_n, lowest position least significant."""
        lo, hi = self.interval(n)
        if len(values) != hi - lo:
            raise ValueError("tuple length must match the interval")
        code = 0
        mult = 1
        for i, v in enumerate(values):
            bound = self.g.values[lo + i]
            if v < 0 or v >= bound:
                raise ValueError(f"value {v} breaks the bound {bound} at {lo + i}")
            code += v * mult
            mult *= bound
        return code

    def decode(self, n: int, code: int) -> tuple[int, ...]:
        lo, hi = self.interval(n)
        if code < 0 or code >= self.f_sizes[n]:
            raise ValueError(f"code {code} outside block {n}")
        out = []
        for i in range(lo, hi):
            code, digit = divmod(code, self.g.values[i])
            out.append(digit)
        return tuple(out)

    def code_point(self, n: int, values: Sequence[int]) -> int:
        """The element of J_n addressing this tuple."""
        return self.j_starts[n] + self.encode(n, values)

    def to_json(self) -> dict:
        return {
            "g": list(self.g.values),
            "depth": self.depth,
            "I_endpoints": list(self.i_endpoints),
            "F": [str(f) for f in self.f_sizes],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "BlockSystem":
        system = build_block_system(
            GrowthFunction(tuple(int(v) for v in doc["g"])), int(doc["depth"])
        )
        if list(system.i_endpoints) != [int(e) for e in doc["I_endpoints"]]:
            raise ValueError("declared interval endpoints are not the minimal ones")
        if [str(f) for f in system.f_sizes] != [str(f) for f in doc["F"]]:
            raise ValueError("declared tuple counts do not match the intervals")
        return system


def build_block_system(g: GrowthFunction, depth: int) -> BlockSystem:
    """Minimal intervals satisfying |I_n| > 2 * sum of earlier F values."""
    if depth < 1:
        raise ValueError("depth must be positive")
    i_ends = [0]
    f_sizes: list[int] = []
    total = 0
    for _ in range(depth):
        size = 2 * total + 1
        lo, hi = i_ends[-1], i_ends[-1] + size
        if hi > len(g.values):
            raise ValueError(
                f"growth function covers {len(g.values)} positions, need {hi}"
            )
        f = 1
        for i in range(lo, hi):
            f *= g.values[i]
        f_sizes.append(f)
        total += f
        i_ends.append(hi)
    j_starts = [0]
    for f in f_sizes:
        j_starts.append(j_starts[-1] + f)
    return BlockSystem(g, depth, tuple(i_ends), tuple(f_sizes), tuple(j_starts))


@dataclass(frozen=True)
class ShadowSet:
    """Points of J_n reachable from earlier blocks in either direction."""

    block: int
    elements: tuple[int, ...]
    size_bound: int
    capacity: int

    @property
    def within_bounds(self) -> bool:
        return len(self.elements) <= self.size_bound < self.capacity


def shadow_set(system: BlockSystem, fn: FiniteFunction, n: int) -> ShadowSet:
    """S_f(n): images and preimages of the earlier J-prefix inside J_n.

    The size bound 2 * |earlier prefix| < |I_n| is what the interval
    growth condition buys; it is recomputed here and reported rather
    than assumed.
    """
    if n < 0 or n >= system.depth:
        raise ValueError(f"block {n} outside depth {system.depth}")
    lo, hi = system.j_block(n)
    if fn.window < hi:
        raise ValueError("function window does not cover the coded prefix")
    if not fn.injective_on_window:
        raise ValueError("shadow sets need an injective function")
    elems = set()
    for x in range(lo):
        v = fn.values[x]
        if lo <= v < hi:
            elems.add(v)
    for x in range(lo, hi):
        if fn.values[x] < lo:
            elems.add(x)
    size = system.interval(n)
    return ShadowSet(
        n,
        tuple(sorted(elems)),
        2 * lo,
        size[1] - size[0],
    )


def meeting_function(
    system: BlockSystem, shadows: Sequence[ShadowSet]
) -> tuple[int, ...]:
    """A bounded sequence meeting every shadow tuple inside its interval.

    Shadow elements are taken in increasing code order and assigned to
    positions of I_n in increasing order; each assigned position copies
    the decoded tuple's value there, and unassigned positions stay 0.
    With fewer shadows than positions, every shadow tuple shares a value
    with the result somewhere in its own interval.
    """
    if len(shadows) != system.depth:
        raise ValueError("one shadow set per block required")
    ell = [0] * system.i_endpoints[-1]
    for n, shadow in enumerate(shadows):
        if shadow.block != n:
            raise ValueError("shadow sets out of order")
        lo, hi = system.interval(n)
        if len(shadow.elements) >= hi - lo:
            raise ValueError(f"block {n} has no spare position")
        for j, e in enumerate(shadow.elements):
            tup = system.decode(n, e - system.j_starts[n])
            ell[lo + j] = tup[j]
    return tuple(ell)


def verify_meeting(
    system: BlockSystem,
    shadows: Sequence[ShadowSet],
    ell: Sequence[int],
) -> tuple[tuple[int, int], ...]:
    """Shadow tuples the sequence misses everywhere in their interval."""
    missed = []
    for shadow in shadows:
        n = shadow.block
        lo, hi = system.interval(n)
        for e in shadow.elements:
            tup = system.decode(n, e - system.j_starts[n])
            if not any(ell[i] == tup[i - lo] for i in range(lo, hi)):
                missed.append((n, e))
    return tuple(missed)


@dataclass(frozen=True)
class ClaimReport:
    """Cross-block edges inside a coded set and their shadow certificates."""

    coded_points: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    certified: tuple[tuple[int, int, int], ...]
    uncertified: tuple[tuple[int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.uncertified


def verify_freeness_claim(
    system: BlockSystem,
    fn: FiniteFunction,
    h: Sequence[int],
    window: Optional[int] = None,
) -> ClaimReport:
    """Certify every edge of f inside the coded set of h by a shadow membership.

    A is the blockwise coding of h, one point per J_n. An edge from block
    m into a later block n lands in S_f(n) by definition, and an edge
    backward from block n exits S_f(n); the report records which block
    certified each edge. An uncertified edge would refute the shadow
    construction, not the input.
    """
    if len(h) != system.i_endpoints[-1]:
        raise ValueError("tuple must cover the whole interval prefix")
    if window is None:
        window = system.j_starts[-1]
    coded = []
    for n in range(system.depth):
        lo, hi = system.interval(n)
        coded.append(system.code_point(n, tuple(h[i] for i in range(lo, hi))))
    members = set(coded)
    edges = []
    for x in coded:
        if x >= fn.window:
            continue
        y = fn.values[x]
        if y in members and y < window:
            edges.append((x, y))
    certified = []
    uncertified = []
    for x, y in edges:
        mx = system.block_of_point(x)
        my = system.block_of_point(y)
        if mx == my:
            uncertified.append((x, y))
            continue
        target = max(mx, my)
        witness = y if my == target else x
        if witness in shadow_set(system, fn, target).elements:
            certified.append((x, y, target))
        else:
            uncertified.append((x, y))
    return ClaimReport(
        tuple(coded), tuple(edges), tuple(certified), tuple(uncertified)
    )


@dataclass(frozen=True)
class MeasuredBlocks:
    """Materialized blocks with one exact rational mass per singleton."""

    sizes: tuple[int, ...]
    unit_masses: tuple[Fraction, ...]
    starts: tuple[int, ...]

    def block_count(self) -> int:
        return len(self.sizes)

    def block_mass(self, n: int) -> Fraction:
        return self.sizes[n] * self.unit_masses[n]

    def block_of_point(self, x: int) -> int:
        for n in range(len(self.sizes)):
            if self.starts[n] <= x < self.starts[n + 1]:
                return n
        raise ValueError(f"{x} outside every block")

    def to_json(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "mu": [str(m) for m in self.unit_masses],
        }


def _with_starts(sizes: Sequence[int], units: Sequence[Fraction]) -> MeasuredBlocks:
    starts = [0]
    for s in sizes:
        starts.append(starts[-1] + s)
    return MeasuredBlocks(tuple(sizes), tuple(units), tuple(starts))


def build_ed_blocks(depth: int) -> MeasuredBlocks:
    """Blocks J_0 .. J_depth with |J_{n+1}| = 2(n+1) * (total so far).

    Singletons of J_{n+1} weigh 1 over that total, so the block weighs
    2(n+1) while any set of at most 2 * total points weighs at most 2.
    Block 0 is a singleton of mass 0 and never constrains anything.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    sizes = [1]
    units = [Fraction(0)]
    total = 1
    for n in range(depth):
        size = 2 * (n + 1) * total
        sizes.append(size)
        units.append(Fraction(1, total))
        total += size
    return _with_starts(sizes, units)


def ed_fin_blocks(depth: int) -> MeasuredBlocks:
    """Counting-measure blocks of sizes 0, 1, ..., depth."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    sizes = list(range(depth + 1))
    units = [Fraction(1)] * (depth + 1)
    return _with_starts(sizes, units)


@dataclass(frozen=True)
class BadSetBlock:
    """The part of a block touched by earlier blocks through f."""

    block: int
    elements: tuple[int, ...]
    mass: Fraction


def bad_set(blocks: MeasuredBlocks, fn: FiniteFunction, n: int) -> BadSetBlock:
    """Images and preimages of earlier blocks inside block n, with mass."""
    if n < 0 or n >= blocks.block_count():
        raise ValueError(f"block {n} out of range")
    lo, hi = blocks.starts[n], blocks.starts[n + 1]
    if fn.window < hi:
        raise ValueError("function window does not cover the block prefix")
    if not fn.injective_on_window:
        raise ValueError("bad sets need an injective function")
    elems = set()
    for x in range(lo):
        v = fn.values[x]
        if lo <= v < hi:
            elems.add(v)
    for x in range(lo, hi):
        if fn.values[x] < lo:
            elems.add(x)
    return BadSetBlock(
        n, tuple(sorted(elems)), len(elems) * blocks.unit_masses[n]
    )


def ed_membership(
    blocks: MeasuredBlocks, subset: Subset, k: Fraction
) -> tuple[bool, Fraction]:
    """Is every per-block mass of the subset at most k, and the largest one."""
    if subset.window > blocks.starts[-1]:
        raise ValueError("subset window exceeds the materialized prefix")
    worst = Fraction(0)
    counts = [0] * blocks.block_count()
    for x in subset.elements:
        counts[blocks.block_of_point(x)] += 1
    for n, count in enumerate(counts):
        mass = count * blocks.unit_masses[n]
        if mass > worst:
            worst = mass
    return worst <= k, worst


@dataclass(frozen=True)
class SelectorReport:
    """Freeness of a selector after discarding bad points."""

    kept: tuple[int, ...]
    dropped: tuple[int, ...]
    cross_block_edges: tuple[tuple[int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.cross_block_edges


def selector_free_check(
    blocks: MeasuredBlocks,
    fn: FiniteFunction,
    selector: Subset,
    bad_blocks: Optional[Sequence[BadSetBlock]] = None,
) -> SelectorReport:
    """Drop the selector's bad points and look for surviving cross-block edges.

    A selector takes at most one point per block. The points left after
    removing every bad set can only be joined by f within a single block,
    so any reported cross-block edge falsifies the bad-set construction;
    bad_blocks may be supplied to check against perturbed bad sets.
    """
    if fn.window < blocks.starts[-1]:
        raise ValueError("function window does not cover the block prefix")
    counts = [0] * blocks.block_count()
    for x in selector.elements:
        counts[blocks.block_of_point(x)] += 1
    if any(c > 1 for c in counts):
        raise ValueError("selector takes more than one point in a block")
    if bad_blocks is None:
        bad_blocks = [
            bad_set(blocks, fn, n) for n in range(blocks.block_count())
        ]
    bad_union = set()
    for b in bad_blocks:
        bad_union.update(b.elements)
    kept = [x for x in selector.elements if x not in bad_union]
    dropped = [x for x in selector.elements if x in bad_union]
    kept_set = set(kept)
    prefix = blocks.starts[-1]
    cross = []
    for x in kept:
        if x >= fn.window:
            continue
        y = fn.values[x]
        if y < prefix and y in kept_set:
            if blocks.block_of_point(x) != blocks.block_of_point(y):
                cross.append((x, y))
    return SelectorReport(tuple(kept), tuple(dropped), tuple(cross))


def infinitely_equal(
    left: Sequence[int],
    right: Sequence[int],
    g: GrowthFunction,
    window: Optional[int] = None,
) -> tuple[int, ...]:
    """Positions where two g-bounded sequences agree.

    Many matches is the finite face of infinite equality, none beyond a
    prefix the face of eventual difference; the caller chooses the
    threshold, this only reports the positions.
    """
    if window is None:
        window = min(len(left), len(right), len(g.values))
    if window > min(len(left), len(right), len(g.values)):
        raise ValueError("window exceeds a sequence length")
    for i in range(window):
        if not 0 <= left[i] < g.values[i]:
            raise ValueError(f"left sequence breaks the bound at {i}")
        if not 0 <= right[i] < g.values[i]:
            raise ValueError(f"right sequence breaks the bound at {i}")
    return tuple(i for i in range(window) if left[i] == right[i])
