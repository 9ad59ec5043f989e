import json
from itertools import combinations

import pytest
from hypothesis import given

from minfb.errors import InputError
from minfb.graph import build_feasible_potential, has_negative_cycle
from minfb.linsys import (assignment_from_potential, blocker_document, blocker_from_arcs,
                          digraph_to_system, format_system, parse_system, system_to_digraph)

from helpers import digraphs, triangle


def doc(rows, k=None, variables=("x", "y")):
    d = {"variables": list(variables), "constraints": rows}
    if k is not None:
        d["k"] = k
    return json.dumps(d)


def test_single_row():
    s = parse_system(doc([{"pos": "x", "neg": "y", "rhs": -1}], k=0))
    assert len(s.variables) == 2 and len(s.rows) == 1 and s.budget == 0
    g, _ = system_to_digraph(s)
    a = g.arcs[0]
    assert (a.tail, a.head, a.weight) == (0, 1, -1)


def test_opposite_rows_give_negative_two_cycle():
    s = parse_system(doc([{"pos": "x", "neg": "y", "rhs": -1},
                          {"pos": "y", "neg": "x", "rhs": -1}], k=1))
    g, _ = system_to_digraph(s)
    assert g.m == 2 and has_negative_cycle(g)
    assert sum(a.weight for a in g.arcs) == -2


def test_empty_system():
    g, _ = system_to_digraph(parse_system(doc([], variables=("a", "b", "c"))))
    assert g.n == 3 and g.m == 0


@pytest.mark.parametrize("row", [
    {"pos": "x", "neg": "x", "rhs": 0},
    {"pos": "x", "neg": "z", "rhs": 0},
    {"pos": "x", "neg": "y", "rhs": 0.5},
    {"coeffs": {"x": 2, "y": -1}, "rhs": 0},
    {"coeffs": {"x": 1, "y": 1}, "rhs": 0},
    {"coeffs": {"x": 1}, "rhs": 0},
    {"pos": "x", "neg": "y", "rhs": 1, "op": "<"},
    {"lhs_pos": "x", "lhs_neg": "y", "op": "<", "rhs": 1},
])
def test_bad_rows_name_the_constraint(row):
    with pytest.raises(InputError, match="constraint 1"):
        parse_system(doc([{"pos": "x", "neg": "y", "rhs": 0}, row]))


def test_operators():
    s = parse_system(doc([
        {"lhs_pos": "x", "lhs_neg": "y", "op": ">=", "rhs": 2},
        {"coeffs": {"x": 1, "y": -1}, "op": "=", "rhs": 3},
    ]))
    assert [(r.pos, r.neg, r.rhs, r.source) for r in s.rows] == [
        (1, 0, -2, 0), (0, 1, 3, 1), (1, 0, -3, 1)]


def test_triangle_to_rows():
    s = digraph_to_system(triangle())
    assert [(r.pos, r.neg, r.rhs) for r in s.rows] == [(0, 1, -1), (1, 2, -1), (2, 0, -1)]


def test_parallel_arcs_become_duplicate_rows():
    from helpers import graph
    s = digraph_to_system(graph(2, [(0, 1, 1), (0, 1, 1)]))
    assert len(s.rows) == 2 and s.rows[0].rhs == s.rows[1].rhs


def test_round_trip_rows():
    s = parse_system(doc([{"pos": "x", "neg": "y", "rhs": -1},
                          {"pos": "y", "neg": "x", "rhs": 4}], k=1))
    t = parse_system(format_system(s))
    assert t == s
    g, rmap = system_to_digraph(s)
    assert blocker_from_arcs({0, 1}, rmap) == {0, 1}
    with pytest.raises(KeyError):
        blocker_from_arcs({5}, rmap)


def test_blocker_document_assignment():
    s = parse_system(doc([{"pos": "x", "neg": "y", "rhs": -1},
                          {"pos": "y", "neg": "x", "rhs": -1}], k=1))
    g, _ = system_to_digraph(s)
    pi = build_feasible_potential(g, {1})
    out = blocker_document(s, {1}, pi)
    assert out["blocker_rows"] == [1] and out["size"] == 1
    x = out["assignment"]
    assert x["x"] - x["y"] <= -1


@given(digraphs(max_n=5, max_m=7))
def test_row_deletion_matches_arc_deletion(g):
    # a row set makes the system feasible iff its arcs kill every negative cycle,
    # and then x = -pi satisfies every remaining row
    s = digraph_to_system(g)
    h, rmap = system_to_digraph(s)
    assert h == g
    for size in range(min(2, g.m) + 1):
        for rows in combinations(range(g.m), size):
            arcs = set(rows)
            pi = build_feasible_potential(h, arcs)
            assert (pi is None) == has_negative_cycle(g, arcs)
            if pi is not None:
                x = assignment_from_potential(s, pi)
                vals = [x[name] for name in s.variables]
                assert s.satisfied_by(vals, skip=blocker_from_arcs(arcs, rmap))


@given(digraphs(max_n=5, max_m=8))
def test_parameters_survive_translation(g):
    s = digraph_to_system(g)
    h, _ = system_to_digraph(parse_system(format_system(s)))
    assert (h.w_minus, h.w_plus, h.weight_set()) == (g.w_minus, g.w_plus, g.weight_set())
    assert sum(r.rhs < 0 for r in s.rows) == g.w_minus
