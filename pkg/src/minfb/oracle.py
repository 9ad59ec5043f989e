"""Exhaustive reference solvers.

Plain enumeration of arc subsets by increasing size, then lexicographically.
Nothing here prunes, so these are slow but easy to trust.
"""
from itertools import combinations

from .graph import has_negative_cycle


def _subsets(ids, k):
    ids = sorted(ids)
    for size in range(0, min(k, len(ids)) + 1):
        yield from combinations(ids, size)


def brute_force_ndfas(g, k):
    """Smallest arc set whose removal kills every negative cycle, if <= k."""
    if k < 0:
        return None
    for sub in _subsets(range(g.m), k):
        if not has_negative_cycle(g, sub):
            return frozenset(sub)
    return None


def _reach(n, succ, sources, removed):
    seen = set(sources)
    stack = list(sources)
    while stack:
        u = stack.pop()
        for aid, v in succ[u]:
            if aid not in removed and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _succ(g):
    succ = [[] for _ in range(g.n)]
    for a in g.arcs:
        succ[a.tail].append((a.id, a.head))
    return succ


def skew_violations(g, sources, sinks, removed=()):
    """Pairs ``(i, j)`` with ``j <= i`` such that X_i still reaches Y_j."""
    removed = set(removed)
    succ = _succ(g)
    bad = []
    for i, X in enumerate(sources):
        if not X:
            continue
        seen = _reach(g.n, succ, X, removed)
        for j in range(i + 1):
            if seen & set(sinks[j]):
                bad.append((i, j))
    return bad


def check_skew_instance(g, sources, sinks):
    if len(sources) != len(sinks):
        raise ValueError("sources and sinks must have the same length")
    used = set()
    for part in list(sources) + list(sinks):
        for v in part:
            if not 0 <= v < g.n:
                raise ValueError(f"vertex {v} out of range")
            if v in used:
                raise ValueError(f"terminal sets overlap at vertex {v}")
            used.add(v)


def brute_force_skew_cut(g, sources, sinks, k):
    check_skew_instance(g, sources, sinks)
    if k < 0:
        return None
    for sub in _subsets(range(g.m), k):
        if not skew_violations(g, sources, sinks, sub):
            return frozenset(sub)
    return None


def arcs_on_cycles(g, removed=()):
    """Arc ids lying on some cycle of ``G - removed``."""
    removed = set(removed)
    succ = _succ(g)
    out = set()
    for a in g.arcs:
        if a.id in removed:
            continue
        if a.tail in _reach(g.n, succ, [a.head], removed):
            out.add(a.id)
    return out


def brute_force_subset_dfas(g, U, k):
    """Smallest X with no cycle of ``G - X`` through an arc of U, if <= k."""
    U = set(U)
    if k < 0:
        return None
    for sub in _subsets(range(g.m), k):
        if not (arcs_on_cycles(g, sub) & U):
            return frozenset(sub)
    return None
