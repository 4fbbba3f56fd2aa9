"""Exact-arithmetic matrices and fragmentation search.

verify_fragmentation recomputes row sums densely and is the oracle for
the sparse fragments predicate; the 0-1 bridge ties both back to the
edge scan from funcgraph. Searches are certified by the oracle, never
by their own bookkeeping.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freeset_lab.funcgraph import FiniteFunction, Subset, is_free, random_fpf_function
from freeset_lab.rosenthal import (
    RosenthalMatrix,
    find_fragmenting_set,
    format_fraction,
    fragments,
    function_to_matrix,
    parse_fraction,
    verify_fragmentation,
)


def _matrix(entries, bound="1"):
    rows = len(entries)
    cols = len(entries[0])
    return RosenthalMatrix(
        rows,
        cols,
        tuple(tuple(Fraction(e) for e in row) for row in entries),
        Fraction(bound),
    )


# === construction and serialization ===


def test_rejects_row_sum_over_bound():
    with pytest.raises(ValueError):
        _matrix([["1/2", "2/3"]])


def test_rejects_negative_entry():
    with pytest.raises(ValueError):
        _matrix([["-1/2", "0"]])


def test_json_round_trip():
    m = _matrix([["1/2", "1/2", "0"], ["0", "1/3", "2/3"]])
    again = RosenthalMatrix.from_json(m.to_json())
    assert again == m
    assert m.to_json()["entries"][0] == ["1/2", "1/2", "0"]


def test_fraction_helpers():
    assert parse_fraction("3/6") == Fraction(1, 2)
    assert format_fraction(Fraction(4, 2)) == "2"
    assert format_fraction(Fraction(1, 3)) == "1/3"


# === fragmentation predicate ===


def test_sparse_and_dense_checks_agree_everywhere():
    for seed in range(20):
        fn = random_fpf_function(seed, 8, injective=True)
        m = function_to_matrix(fn)
        for size in range(1, 4):
            for elems in combinations(range(8), size):
                a = Subset(8, elems)
                for eps in (Fraction(1, 2), Fraction(1), Fraction(3, 2)):
                    assert fragments(m, a, eps).ok == verify_fragmentation(m, a, eps).ok


def test_failure_reports_offending_row():
    m = _matrix([["0", "1"], ["1", "0"]])
    a = Subset(2, (0, 1))
    res = verify_fragmentation(m, a, Fraction(1))
    assert not res.ok
    assert res.witness_row == 0
    assert res.witness_sum == 1


def test_diagonal_entries_do_not_count():
    m = _matrix([["1", "0"], ["0", "1"]])
    a = Subset(2, (0, 1))

    # row k only sums entries at columns in A minus column k itself
    assert fragments(m, a, Fraction(1, 2)).ok


# === the 0-1 bridge ===


def test_bridge_on_all_subsets_of_small_windows():
    for n in (3, 5, 8):
        for seed in range(10):
            fn = random_fpf_function(seed, n)
            m = function_to_matrix(fn)
            for mask in range(1, 1 << n):
                a = Subset(n, tuple(i for i in range(n) if mask >> i & 1))
                assert fragments(m, a, Fraction(1)).ok == is_free(a, fn)


def test_function_matrix_shape():
    fn = FiniteFunction([1, 5, 0])
    m = function_to_matrix(fn)
    assert m.entries[0][1] == 1
    assert all(e == 0 for e in m.entries[1])  # boundary edge leaves a zero row
    assert m.entries[2][0] == 1
    assert m.row_bound == 1


# === monotonicity ===


@settings(deadline=None, max_examples=60)
@given(st.integers(0, 10**6), st.integers(2, 9))
def test_fragmentation_is_downward_closed(seed, n):
    fn = random_fpf_function(seed, n, injective=True)
    m = function_to_matrix(fn)
    rng_elems = [i for i in range(n) if (seed >> i) & 1]
    if not rng_elems:
        rng_elems = [0]
    a = Subset(n, tuple(rng_elems))
    if fragments(m, a, Fraction(1)).ok and len(rng_elems) > 1:
        smaller = Subset(n, tuple(rng_elems[:-1]))
        assert fragments(m, smaller, Fraction(1)).ok


# === search ===


def test_exact_search_finds_max_and_lex_min():
    for seed in range(15):
        fn = random_fpf_function(seed, 9, injective=True)
        m = function_to_matrix(fn)
        got = find_fragmenting_set(m, Fraction(1), 1, "exact")
        assert got is not None
        assert verify_fragmentation(m, got, Fraction(1)).ok

        # oracle: sweep all subsets for the largest, lex-smallest witness
        best = ()
        for mask in range(1, 1 << 9):
            elems = tuple(i for i in range(9) if mask >> i & 1)
            a = Subset(9, elems)
            if verify_fragmentation(m, a, Fraction(1)).ok:
                if len(elems) > len(best) or (
                    len(elems) == len(best) and elems < best
                ):
                    best = elems
        assert got.elements == best


def test_all_epsilon_matrix_has_no_pair():
    eps = Fraction(1, 3)
    m = _matrix([["1/3"] * 3] * 3)
    assert find_fragmenting_set(m, eps, 2, "exact") is None
    assert find_fragmenting_set(m, eps, 2, "greedy") is None


def test_swap_matrix_singletons_fragment():
    m = _matrix([["0", "1"], ["1", "0"]])
    got = find_fragmenting_set(m, Fraction(1), 1, "exact")
    assert got is not None and got.elements == (0,)


def test_greedy_search_is_certified():
    for seed in range(25):
        fn = random_fpf_function(seed, 16, injective=True)
        m = function_to_matrix(fn)
        got = find_fragmenting_set(m, Fraction(1), 2, "greedy")
        if got is not None:
            assert verify_fragmentation(m, got, Fraction(1)).ok
            assert len(got.elements) >= 2


def test_exact_refuses_oversized_instance():
    fn = random_fpf_function(0, 23, injective=True)
    with pytest.raises(ValueError):
        find_fragmenting_set(function_to_matrix(fn), Fraction(1), 1, "exact")
