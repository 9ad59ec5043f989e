import pytest
from hypothesis import given

from minfb.branching import (SearchStats, solve_bounded_cycle_branching, solve_pm1_few_negative,
                             solve_td_plus_k, solve_trivial_few_negative)
from minfb.errors import NotApplicable
from minfb.graph import verify_solution
from minfb.oracle import brute_force_ndfas

from helpers import digraphs, graph, triangle

TWO_TRIANGLES = graph(6, [(0, 1, -1), (1, 2, -1), (2, 0, -1), (3, 4, -1), (4, 5, -1), (5, 3, -1)])


def test_trivial():
    assert solve_trivial_few_negative(triangle(), 3) == {0, 1, 2}
    with pytest.raises(NotApplicable):
        solve_trivial_few_negative(triangle(), 2)
    assert solve_trivial_few_negative(triangle(2), 0) == frozenset()


def test_bounded_examples():
    assert len(solve_bounded_cycle_branching(triangle(), 1, 3)) == 1
    assert solve_bounded_cycle_branching(TWO_TRIANGLES, 1, 3) is None
    got = solve_bounded_cycle_branching(TWO_TRIANGLES, 2, 3)
    assert len(got) == len(brute_force_ndfas(TWO_TRIANGLES, 2)) == 2


def test_td_examples():
    assert len(solve_td_plus_k(triangle(), 1)) == 1
    assert len(solve_td_plus_k(graph(2, [(0, 1, -1), (1, 0, 0)]), 1)) == 1


def test_pm1_negative_examples():
    assert solve_pm1_few_negative(graph(2, [(0, 1, 1), (1, 0, -1)]), 0) == frozenset()
    assert len(solve_pm1_few_negative(graph(2, [(0, 1, -1), (1, 0, -1)]), 1)) == 1
    g = graph(4, [(0, 1, -1), (1, 2, -1), (2, 3, -1), (3, 0, 1)])
    got = solve_pm1_few_negative(g, 1)
    assert len(got) == len(brute_force_ndfas(g, 1)) == 1
    with pytest.raises(NotApplicable):
        solve_pm1_few_negative(graph(2, [(0, 1, 0), (1, 0, -1)]), 1)


def test_dedupe_does_not_change_answers():
    g = graph(5, [(0, 1, -1), (1, 2, -1), (2, 0, -1), (1, 3, -1), (3, 4, 0), (4, 1, -1), (2, 4, 1)])
    for k in range(4):
        a = solve_bounded_cycle_branching(g, k, 8, minimize=True)
        b = solve_bounded_cycle_branching(g, k, 8, minimize=True, dedupe=True)
        assert (a is None) == (b is None)
        if a is not None:
            assert len(a) == len(b)


def test_parallel_workers_match_sequential():
    g = graph(6, [(0, 1, -1), (1, 2, -1), (2, 0, 0), (3, 4, -1), (4, 5, 0), (5, 3, -1), (2, 3, -1)])
    assert solve_td_plus_k(g, 2, workers=2) == solve_td_plus_k(g, 2, workers=1)


@given(digraphs(max_n=6, max_m=9, weights=(-2, 2)))
def test_td_plus_k_matches_oracle(g):
    for k in range(3):
        st = SearchStats()
        got = solve_td_plus_k(g, k, st, minimize=True)
        want = brute_force_ndfas(g, k)
        assert (got is None) == (want is None)
        if got is not None:
            assert len(got) == len(want)
            assert verify_solution(g, got, k).valid
        assert st.long_cycles == 0
