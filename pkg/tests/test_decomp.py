import pytest
from hypothesis import given
from hypothesis import strategies as st

from minfb.decomp import (NiceTreeDecomposition, TreeDecomposition, TreedepthDecomposition,
                          compute_tree_decomposition, compute_treedepth, format_pace_td, make_nice,
                          parse_pace_td, treedepth_forest_valid, validate_decomposition)
from minfb.errors import InputError

from helpers import exact_treedepth, exact_treewidth, seeded


def cycle(n):
    return n, [(i, (i + 1) % n) for i in range(n)]


def clique(n):
    return n, [(i, j) for i in range(n) for j in range(i + 1, n)]


def path(n):
    return n, [(i, i + 1) for i in range(n - 1)]


@st.composite
def simple_graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return n, chosen


def test_widths():
    tree = 5, [(0, 1), (0, 2), (2, 3), (2, 4)]
    assert compute_tree_decomposition(tree).width == 1
    assert compute_tree_decomposition(clique(4)).width == 3
    assert compute_tree_decomposition(cycle(5)).width == 2


def test_nice_single_bag_triangle():
    nice = make_nice(TreeDecomposition([frozenset({0, 1, 2})], []))
    kinds = [x.kind for x in nice.nodes]
    assert kinds.count("leaf") == 1 and kinds.count("introduce") == 3
    assert kinds.count("forget") == 3 and kinds.count("join") == 0
    assert nice.width == 2
    assert validate_decomposition(clique(3), nice)


def test_nice_path_keeps_width():
    td = TreeDecomposition([frozenset({0, 1}), frozenset({1, 2})], [(0, 1)])
    nice = make_nice(td)
    assert nice.width == 1 and validate_decomposition(path(3), nice)


def test_make_nice_rejects_broken_input():
    with pytest.raises(InputError):
        make_nice(TreeDecomposition([frozenset({0}), frozenset({1})], []))


def test_validator():
    g = path(3)
    ok = TreeDecomposition([frozenset({0, 1}), frozenset({1, 2})], [(0, 1)])
    assert validate_decomposition(g, ok)
    missing = TreeDecomposition([frozenset({0, 1}), frozenset({2})], [(0, 1)])
    res = validate_decomposition(g, missing)
    assert not res and "edge" in res.reason
    split = TreeDecomposition([frozenset({0, 1}), frozenset({2, 3}), frozenset({1, 2})],
                              [(0, 1), (1, 2)])
    res = validate_decomposition((4, [(0, 1), (1, 2), (2, 3)]), split)
    assert not res and "not connected" in res.reason


def test_treedepth_examples():
    assert compute_treedepth((1, [])).depth == 1
    assert compute_treedepth(clique(3)).depth == 3
    assert compute_treedepth(path(3)).depth == 2
    assert compute_treedepth(path(7)).depth == 3


def test_treedepth_heuristic_flagged():
    dec = compute_treedepth(path(6), cap=3)
    assert not dec.exact and dec.depth >= 3
    assert treedepth_forest_valid(path(6), dec)


def test_pace_round_trip():
    g = cycle(6)
    td = compute_tree_decomposition(g)
    back = parse_pace_td(format_pace_td(td, 6))
    assert back.bags == td.bags and sorted(back.edges) == sorted(td.edges)


@given(simple_graphs())
def test_tree_decomposition_exact(g):
    td = compute_tree_decomposition(g)
    assert validate_decomposition(g, td)
    assert td.width == exact_treewidth(*g)


@given(simple_graphs())
def test_nice_form_valid(g):
    td = compute_tree_decomposition(g)
    nice = make_nice(td)
    assert isinstance(nice, NiceTreeDecomposition)
    assert validate_decomposition(g, nice)
    assert nice.width == td.width


@given(simple_graphs())
def test_treedepth_exact(g):
    dec = compute_treedepth(g)
    assert isinstance(dec, TreedepthDecomposition) and dec.exact
    assert dec.depth == exact_treedepth(*g)
    assert treedepth_forest_valid(g, dec)


def test_min_fill_above_exact_limit_is_valid():
    rng = seeded(3)
    n = 40
    edges = [(i, j) for i in range(n) for j in range(i + 1, min(n, i + 4)) if rng.random() < 0.7]
    td = compute_tree_decomposition((n, edges), exact_limit=14)
    assert validate_decomposition((n, edges), td) and td.width <= 3
