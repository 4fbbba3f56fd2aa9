"""Three-class partitions, free-set search, and unsplit sets.

Oracles: an exhaustive scan over all 3^N colorings certifies that three
classes always suffice on small windows, a 2^N subset sweep certifies
max_free_subset, and a direct bucket rebuild certifies find_unsplit_set.
All frozen values below were produced by those oracles first.
"""

from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freeset_lab.freesets import (
    Coloring,
    find_unsplit_set,
    free_report,
    is_maximal_free,
    katetov_partition,
    max_free_subset,
    verify_coloring,
)
from freeset_lab.funcgraph import (
    FiniteFunction,
    Subset,
    is_star_free,
    is_free,
    random_fpf_function,
)


# === oracles ===


def _coloring_is_free_oracle(colors, fn) -> bool:
    for x, y in fn.in_window_edges():
        if colors[x] == colors[y]:
            return False
    return True


def _min_colors_oracle(fn) -> int:
    """Smallest c such that some c-coloring has no monochromatic edge."""
    n = fn.window
    for c in (1, 2, 3):
        for colors in product(range(c), repeat=n):
            if _coloring_is_free_oracle(colors, fn):
                return c
    return 4


def _max_free_oracle(family, n) -> tuple[int, tuple[int, ...]]:
    """Largest free set by 2^n sweep; lexicographically smallest winner."""
    best = ()
    for mask in range(1 << n):
        elems = tuple(i for i in range(n) if mask >> i & 1)
        ok = True
        for fn in family:
            a = Subset(n, elems) if elems else None
            if a is not None and not is_free(a, fn):
                ok = False
                break
        if ok and (len(elems) > len(best) or (len(elems) == len(best) and elems < best)):
            best = elems
    return len(best), best


# === katetov partition ===


def test_five_cycle_uses_three_colors():
    fn = FiniteFunction([1, 2, 3, 4, 0])
    col = katetov_partition(fn)
    assert col.colors == (0, 1, 0, 1, 2)
    assert verify_coloring(col, fn) == ()
    assert _min_colors_oracle(fn) == 3


def test_even_cycle_needs_only_two():
    fn = FiniteFunction([1, 2, 3, 0])
    col = katetov_partition(fn)
    assert verify_coloring(col, fn) == ()
    assert 2 not in col.colors
    assert _min_colors_oracle(fn) == 2


def test_every_class_is_free():
    fn = FiniteFunction([1, 2, 0, 4, 5, 6, 3])
    col = katetov_partition(fn)
    for i in range(3):
        cls = col.color_class(i)
        assert is_star_free(cls, fn).elements == ()


def test_third_color_matches_exhaustive_need():
    # on tiny windows, we only spend color 2 when no 2-coloring exists
    for seed in range(60):
        fn = random_fpf_function(seed, 7)
        col = katetov_partition(fn)
        assert verify_coloring(col, fn) == ()
        spent = 2 in col.colors
        assert spent == (_min_colors_oracle(fn) > 2)


@settings(deadline=None, max_examples=80)
@given(st.integers(0, 2**31), st.integers(2, 120))
def test_partition_never_has_monochromatic_edges(seed, n):
    fn = random_fpf_function(seed, n)
    col = katetov_partition(fn)
    assert verify_coloring(col, fn) == ()


def test_verify_coloring_catches_planted_violation():
    fn = FiniteFunction([1, 2, 3, 0])
    bad = Coloring(4, (0, 0, 1, 1))
    assert (0, 1) in verify_coloring(bad, fn)


def test_coloring_json_round_trip():
    col = Coloring(4, (0, 1, 0, 2))
    assert Coloring.from_json(col.to_json()) == col
    assert col.to_json() == {"n": 4, "colors": [0, 1, 0, 2]}


# === max free subset ===


def test_exact_matches_subset_sweep():
    for seed in range(25):
        fam = [
            random_fpf_function(seed, 9, injective=True),
            random_fpf_function(seed + 1000, 9),
        ]
        size, elems = _max_free_oracle(fam, 9)
        got = max_free_subset(fam, 9, mode="exact")
        assert len(got.elements) == size
        assert got.elements == elems


def test_exact_empty_family_takes_everything():
    got = max_free_subset([], 5, mode="exact")
    assert got.elements == (0, 1, 2, 3, 4)


def test_greedy_is_free_and_maximal():
    for seed in range(40):
        fam = [random_fpf_function(seed, 20), random_fpf_function(seed + 7, 20)]
        got = max_free_subset(fam, 20, mode="greedy")
        assert all(is_free(got, fn) for fn in fam)
        assert is_maximal_free(got, fam, 20)


def test_exact_refuses_oversized_window():
    with pytest.raises(ValueError):
        max_free_subset([], 25, mode="exact")


def test_family_window_must_cover_search_window():
    fam = [FiniteFunction([1, 0])]
    with pytest.raises(ValueError):
        max_free_subset(fam, 5, mode="greedy")


def test_free_report_counts_hits():
    fn = FiniteFunction([1, 2, 0])
    a = Subset.of(3, [0, 1])
    assert free_report(a, [fn]) == (1,)


# === unsplit sets ===


def _unsplit_oracle(colorings, min_size):
    """All maximal constant-signature subsets, by direct bucketing."""
    n = colorings[0].window
    buckets: dict[tuple[int, ...], list[int]] = {}
    for x in range(n):
        sig = tuple(c.colors[x] for c in colorings)
        buckets.setdefault(sig, []).append(x)
    return {sig: tuple(xs) for sig, xs in buckets.items() if len(xs) >= min_size}


def test_unsplit_finds_largest_bucket():
    c1 = Coloring(8, (0, 0, 0, 0, 1, 1, 1, 1))
    c2 = Coloring(8, (0, 1, 0, 1, 0, 1, 0, 1))
    got = find_unsplit_set([c1, c2], 2)
    assert got is not None
    subset, choice = got
    assert subset.elements == (0, 2)
    assert choice == (0, 0)
    assert _unsplit_oracle([c1, c2], 2)[choice] == (0, 2)


def test_unsplit_none_when_all_buckets_small():
    c1 = Coloring(6, (0, 0, 1, 1, 2, 2))
    c2 = Coloring(6, (0, 1, 0, 1, 0, 1))
    assert find_unsplit_set([c1, c2], 2) is None
    assert all(len(v) < 2 for v in _unsplit_oracle([c1, c2], 2).values())


def test_unsplit_ties_break_to_lex_smallest_members():
    c = Coloring(4, (0, 0, 1, 1))
    got = find_unsplit_set([c], 2)
    assert got is not None
    assert got[0].elements == (0, 1)


def test_unsplit_matches_oracle_on_seeded_families():
    for seed in range(30):
        fns = [random_fpf_function(seed + 100 * j, 12) for j in range(3)]
        cols = [katetov_partition(fn) for fn in fns]
        got = find_unsplit_set(cols, 3)
        table = _unsplit_oracle(cols, 3)
        if got is None:
            assert not table
        else:
            subset, choice = got
            assert table[choice] == subset.elements
            assert all(len(v) <= len(subset.elements) for v in table.values())


def test_unsplit_requires_matching_windows():
    with pytest.raises(ValueError):
        find_unsplit_set([Coloring(3, (0, 1, 0)), Coloring(4, (0, 1, 0, 1))], 1)
