"""Difference-constraint systems and their constraint graphs.

A row ``x_pos - x_neg <= rhs`` corresponds to the arc ``(pos, neg)`` of weight
``rhs``.  A potential ``pi`` of the graph yields the assignment ``x = -pi``.
"""
import json
from dataclasses import dataclass

from .errors import InputError
from .graph import WeightedDigraph


@dataclass(frozen=True)
class Row:
    id: int
    pos: int
    neg: int
    rhs: int
    source: int  # index of the input constraint this row came from


@dataclass(frozen=True)
class ConstraintSystem:
    variables: tuple
    rows: tuple
    budget: int | None = None

    def satisfied_by(self, x, skip=()):
        skip = set(skip)
        return all(x[r.pos] - x[r.neg] <= r.rhs for r in self.rows if r.id not in skip)


def _int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{where}: right-hand side must be an integer, got {value!r}")
    return value


def _difference_from_coeffs(coeffs, where):
    """Accept a coefficient map only if it is exactly ``+1 * a - 1 * b``."""
    if not isinstance(coeffs, dict):
        raise InputError(f"{where}: 'coeffs' must be an object")
    nz = {k: c for k, c in coeffs.items() if c != 0}
    if len(nz) != 2:
        raise InputError(f"{where}: expected exactly 2 nonzero coefficients, got {len(nz)}")
    if any(isinstance(c, bool) or c not in (1, -1) for c in nz.values()):
        raise InputError(f"{where}: coefficients must be +1 or -1")
    pos = [k for k, c in nz.items() if c == 1]
    neg = [k for k, c in nz.items() if c == -1]
    if len(pos) != 1 or len(neg) != 1:
        raise InputError(f"{where}: need one +1 and one -1 coefficient")
    return pos[0], neg[0]


def parse_system(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("top level must be an object")
    names = doc.get("variables")
    if not isinstance(names, list) or not all(isinstance(s, str) for s in names):
        raise InputError("'variables' must be a list of strings")
    if len(set(names)) != len(names):
        raise InputError("duplicate variable names")
    index = {s: i for i, s in enumerate(names)}
    budget = doc.get("k")
    if budget is not None and (isinstance(budget, bool) or not isinstance(budget, int) or budget < 0):
        raise InputError("'k' must be a non-negative integer")
    cons = doc.get("constraints")
    if not isinstance(cons, list):
        raise InputError("'constraints' must be a list")

    rows = []

    def add(pos, neg, rhs, src):
        where = f"constraint {src}"
        for name in (pos, neg):
            if name not in index:
                raise InputError(f"{where}: unknown variable {name!r}")
        if pos == neg:
            raise InputError(f"{where}: positive and negative variable coincide")
        rows.append(Row(len(rows), index[pos], index[neg], rhs, src))

    for i, c in enumerate(cons):
        where = f"constraint {i}"
        if not isinstance(c, dict):
            raise InputError(f"{where}: must be an object")
        if "coeffs" in c:
            pos, neg = _difference_from_coeffs(c["coeffs"], where)
            op = c.get("op", "<=")
        elif "pos" in c or "neg" in c:
            pos, neg, op = c.get("pos"), c.get("neg"), c.get("op", "<=")
        elif "lhs_pos" in c or "lhs_neg" in c:
            pos, neg, op = c.get("lhs_pos"), c.get("lhs_neg"), c.get("op", "<=")
        else:
            raise InputError(f"{where}: unrecognised row shape")
        rhs = _int(c.get("rhs"), where)
        if op == "<=":
            add(pos, neg, rhs, i)
        elif op == ">=":
            add(neg, pos, -rhs, i)
        elif op == "=":
            add(pos, neg, rhs, i)
            add(neg, pos, -rhs, i)
        else:
            raise InputError(f"{where}: unknown operator {op!r}")
    return ConstraintSystem(tuple(names), tuple(rows), budget)


def read_system(path):
    with open(path) as fh:
        return parse_system(fh.read())


def system_to_digraph(system):
    """Return ``(graph, row_of_arc)``; arc ids equal row ids."""
    g = WeightedDigraph.from_edges(
        len(system.variables), [(r.pos, r.neg, r.rhs) for r in system.rows])
    return g, {r.id: r.id for r in system.rows}


def digraph_to_system(g, budget=None):
    names = tuple(f"v{i + 1}" for i in range(g.n))
    rows = tuple(Row(a.id, a.tail, a.head, a.weight, a.id) for a in g.arcs)
    return ConstraintSystem(names, rows, budget)


def blocker_from_arcs(arc_ids, row_of_arc):
    return frozenset(row_of_arc[a] for a in arc_ids)


def assignment_from_potential(system, pi):
    """Named assignment ``x = -pi`` satisfying every row not in the blocker."""
    return {name: -int(pi[i]) for i, name in enumerate(system.variables)}


def blocker_document(system, rows, pi, status="solved"):
    doc = {
        "status": status,
        "blocker_rows": sorted(rows),
        "size": len(rows),
        "source_constraints": sorted({system.rows[r].source for r in rows}),
        "potential": None,
        "assignment": None,
    }
    if pi is not None:
        doc["potential"] = {name: int(pi[i]) for i, name in enumerate(system.variables)}
        doc["assignment"] = assignment_from_potential(system, pi)
    return doc


def format_system(system):
    doc = {
        "variables": list(system.variables),
        "constraints": [
            {"pos": system.variables[r.pos], "neg": system.variables[r.neg], "rhs": r.rhs}
            for r in system.rows
        ],
    }
    if system.budget is not None:
        doc["k"] = system.budget
    return json.dumps(doc, indent=1)
