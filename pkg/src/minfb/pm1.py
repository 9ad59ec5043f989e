"""Solver for +1/-1 weighted graphs with few positive arcs.

A negative cycle longer than ``2 w+^2 + 2 w+`` cannot share a negative
subpath with any non-negative cycle, so once all short negative cycles are
branched away the remaining task is a subset feedback arc set problem on the
arcs that lie on no non-negative cycle.
"""
import math
import random
from collections import deque

from .errors import InputError, NotApplicable
from .graph import has_negative_cycle, shortest_negative_cycle


def _require_pm1(g):
    if not g.weight_set() <= {-1, 1}:
        raise NotApplicable("weights must all be -1 or +1")


def _out_lists(g, removed):
    out = [[] for _ in range(g.n)]
    for a in g.arcs:
        if a.id not in removed:
            out[a.tail].append(a)
    return out


def nonneg_cycle_through_arc(g, arc_id, removed=frozenset(), w_plus=None,
                             method="exhaustive", delta=1e-6, seed=0):
    """Is there a cycle of weight >= 0 through the arc in ``G - removed``?

    Such a cycle has at most ``2 w+`` arcs, so we look for a simple path
    from the arc's head to its tail with at most ``2 w+ - 1`` arcs and weight
    at least ``-w(arc)``.
    """
    _require_pm1(g)
    if not 0 <= arc_id < g.m:
        raise InputError(f"unknown arc id {arc_id}")
    arc = g.arcs[arc_id]
    if arc_id in removed:
        return False
    if w_plus is None:
        w_plus = sum(1 for a in g.arcs if a.weight > 0 and a.id not in removed)
    max_len = 2 * w_plus - 1
    if max_len < 1:
        return False
    need = -arc.weight
    out = _out_lists(g, removed | {arc_id})
    if method == "color-coding":
        return _color_coding(g, out, arc.head, arc.tail, max_len, need, delta, seed)
    if method != "exhaustive":
        raise ValueError(f"unknown method {method!r}")
    target = arc.tail
    on_path = {arc.head}

    def dfs(u, length, weight):
        if u == target:
            return weight >= need
        if length == max_len:
            return False
        # every further arc adds at most +1
        if weight + (max_len - length) < need:
            return False
        for a in out[u]:
            if a.head in on_path:
                continue
            on_path.add(a.head)
            hit = dfs(a.head, length + 1, weight + a.weight)
            on_path.discard(a.head)
            if hit:
                return True
        return False

    return dfs(arc.head, 0, 0)


def _color_coding(g, out, source, target, max_len, need, delta, seed):
    """Randomised colourful-path search; may miss with probability <= delta."""
    rng = random.Random(seed)
    colors = max_len + 1
    trials = max(1, math.ceil(math.exp(colors) * math.log(1 / delta)))
    for _ in range(trials):
        col = [rng.randrange(colors) for _ in range(g.n)]
        # best[(v, mask)] = max weight of a colourful path source -> v
        layer = {(source, 1 << col[source]): 0}
        for _ in range(max_len):
            nxt = {}
            for (u, mask), w in layer.items():
                if u == target:
                    continue
                for a in out[u]:
                    bit = 1 << col[a.head]
                    if mask & bit:
                        continue
                    key = (a.head, mask | bit)
                    val = w + a.weight
                    if nxt.get(key, -math.inf) < val:
                        nxt[key] = val
            for (v, _), w in nxt.items():
                if v == target and w >= need:
                    return True
            layer = nxt
            if not layer:
                break
        if source == target:  # pragma: no cover
            return need <= 0
    return False


def arcs_on_no_nonneg_cycle(g, removed=frozenset(), **kw):
    """Arcs of ``G - removed`` that lie only on negative cycles (or none)."""
    w_plus = sum(1 for a in g.arcs if a.weight > 0 and a.id not in removed)
    return frozenset(a.id for a in g.arcs if a.id not in removed
                     and not nonneg_cycle_through_arc(g, a.id, removed, w_plus, **kw))


def _cycle_through_subset(g, U, removed):
    """A shortest cycle of ``G - removed`` using some arc of U, as arc ids."""
    out = _out_lists(g, removed)
    best = None
    for uid in sorted(U):
        if uid in removed:
            continue
        a = g.arcs[uid]
        prev = {a.head: None}
        q = deque([a.head])
        while q and a.tail not in prev:
            x = q.popleft()
            for b in out[x]:
                if b.head not in prev:
                    prev[b.head] = b
                    q.append(b.head)
        if a.tail not in prev:
            continue
        path = []
        v = a.tail
        while prev[v] is not None:
            path.append(prev[v].id)
            v = prev[v].tail
        cyc = [uid] + path[::-1]
        if best is None or len(cyc) < len(best):
            best = cyc
    return best


def solve_subset_dfas(g, U, k, removed=frozenset(), minimize=False):
    """Arcs X, |X| <= k, such that no cycle of ``G - removed - X`` meets U."""
    U = frozenset(U)
    bad = [a for a in U if not 0 <= a < g.m]
    if bad:
        raise InputError(f"unknown arc id(s) in U: {sorted(bad)}")

    def rec(X, budget):
        cyc = _cycle_through_subset(g, U, removed | X)
        if cyc is None:
            return X
        if budget == 0:
            return None
        for a in cyc:
            got = rec(X | {a}, budget - 1)
            if got is not None:
                return got
        return None

    if k < 0:
        return None
    for b in (range(k + 1) if minimize else [k]):
        got = rec(frozenset(), b)
        if got is not None:
            return got
    return None


def solve_pm1_few_positive(g, k, minimize=False, stats=None, method="exhaustive"):
    """Branch on short negative cycles, then solve subset DFAS."""
    _require_pm1(g)
    stats = {} if stats is None else stats

    def rec(removed, budget):
        stats["nodes"] = stats.get("nodes", 0) + 1
        if budget < 0:
            return None
        cyc = shortest_negative_cycle(g, removed)
        if cyc is None:
            stats["leaves"] = stats.get("leaves", 0) + 1
            return removed
        wp = sum(1 for a in g.arcs if a.weight > 0 and a.id not in removed)
        if cyc.length <= 2 * wp * wp + 2 * wp:
            if budget == 0:
                stats["leaves"] = stats.get("leaves", 0) + 1
                return None
            for a in cyc.arc_ids:
                got = rec(removed | {a}, budget - 1)
                if got is not None:
                    return got
            return None
        stats["leaves"] = stats.get("leaves", 0) + 1
        U = arcs_on_no_nonneg_cycle(g, removed, method=method)
        X = solve_subset_dfas(g, U, budget, removed, minimize=minimize)
        if X is None:
            return None
        return removed | X

    budgets = range(k + 1) if minimize else [k]
    for b in budgets:
        got = rec(frozenset(), b)
        if got is not None:
            if has_negative_cycle(g, got):  # pragma: no cover
                raise AssertionError("returned set leaves a negative cycle")
            return got
    return None
