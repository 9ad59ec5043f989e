"""Arc skew separators and the nonzero-arc-count algorithm built on them.

A skew instance is a digraph with terminal sets ``X_1..X_p`` and
``Y_1..Y_p``; a solution deletes arcs so that no ``X_i`` reaches any ``Y_j``
with ``j <= i``.  The solver enumerates important cuts of the last source
set against all sinks it must avoid, then recurses on the shorter instance.
"""
import logging
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .errors import ResourceError
from .graph import WeightedDigraph, has_negative_cycle
from .oracle import brute_force_skew_cut, check_skew_instance, skew_violations

log = logging.getLogger(__name__)

PARTITION_CAP = 10


@dataclass(frozen=True)
class SkewInstance:
    graph: WeightedDigraph
    sources: tuple
    sinks: tuple
    budget: int = 0

    def __post_init__(self):
        check_skew_instance(self.graph, self.sources, self.sinks)


@dataclass(frozen=True)
class PropagationGraph:
    graph: WeightedDigraph
    plus: dict           # original vertex -> its outgoing copy
    minus: dict          # original vertex -> its incoming copy
    node_of: dict        # unsplit original vertex -> its node
    arc_back: tuple      # new arc id -> original arc id
    split: frozenset     # original vertices that were split


def build_zero_propagation_graph(g):
    """Keep the zero arcs; split every endpoint of a nonzero arc in two.

    The copy ``z+`` keeps the outgoing zero arcs of ``z`` and ``z-`` keeps the
    incoming ones, so a path from ``x+`` to ``y-`` is a zero path x -> y.
    """
    split = set()
    for a in g.arcs:
        if a.weight != 0:
            split.add(a.tail)
            split.add(a.head)
    plus, minus, node_of = {}, {}, {}
    count = 0
    for v in range(g.n):
        if v in split:
            plus[v], minus[v] = count, count + 1
            count += 2
        else:
            node_of[v] = count
            count += 1
    edges, back = [], []
    for a in g.arcs:
        if a.weight != 0:
            continue
        t = plus[a.tail] if a.tail in split else node_of[a.tail]
        h = minus[a.head] if a.head in split else node_of[a.head]
        edges.append((t, h, 0))
        back.append(a.id)
    return PropagationGraph(WeightedDigraph.from_edges(count, edges), plus, minus,
                            node_of, tuple(back), frozenset(split))


# --------------------------------------------------------------------------
# unit-capacity flows and important cuts

def _max_flow(n, arcs, alive, sources, sinks, limit):
    """Augment up to ``limit + 1`` paths; return (value, flow set)."""
    out = [[] for _ in range(n)]
    inc = [[] for _ in range(n)]
    for aid in alive:
        t, h = arcs[aid]
        out[t].append(aid)
        inc[h].append(aid)
    flow = set()
    sinks = set(sinks)
    value = 0
    while value <= limit:
        prev = {s: None for s in sources}
        q = deque(sources)
        end = None
        while q and end is None:
            u = q.popleft()
            for aid in out[u]:
                if aid in flow:
                    continue
                v = arcs[aid][1]
                if v not in prev:
                    prev[v] = (aid, +1)
                    if v in sinks:
                        end = v
                        break
                    q.append(v)
            if end is not None:
                break
            for aid in inc[u]:
                if aid not in flow:
                    continue
                v = arcs[aid][0]
                if v not in prev:
                    prev[v] = (aid, -1)
                    q.append(v)
        if end is None:
            break
        v = end
        while prev[v] is not None:
            aid, d = prev[v]
            if d > 0:
                flow.add(aid)
                v = arcs[aid][0]
            else:
                flow.discard(aid)
                v = arcs[aid][1]
        value += 1
    return value, flow, out, inc


def _farthest_source_side(n, arcs, flow, out, inc, sinks):
    """Vertices that cannot reach a sink in the residual graph."""
    reach = set(sinks)
    q = deque(sinks)
    while q:
        v = q.popleft()
        for aid in inc[v]:          # residual u -> v exists if arc unsaturated
            u = arcs[aid][0]
            if aid not in flow and u not in reach:
                reach.add(u)
                q.append(u)
        for aid in out[v]:          # residual u -> v along a reversed flow arc
            u = arcs[aid][1]
            if aid in flow and u not in reach:
                reach.add(u)
                q.append(u)
    return set(range(n)) - reach


def important_cuts(n, arcs, alive, sources, sinks, k):
    """All important source-sink arc cuts of size <= k (possibly a superset).

    ``arcs`` maps arc id -> (tail, head); only ids in ``alive`` exist.  Every
    returned set is a valid cut.
    """
    sources, sinks = set(sources), set(sinks)
    if not sources or not sinks:
        return [frozenset()]
    found = []

    def rec(alive, S, chosen, budget):
        lam, flow, out, inc = _max_flow(n, arcs, alive, S, sinks, budget)
        if lam > budget:
            return
        if lam == 0:
            found.append(frozenset(chosen))
            return
        R = _farthest_source_side(n, arcs, flow, out, inc, sinks)
        boundary = sorted(a for a in alive if arcs[a][0] in R and arcs[a][1] not in R)
        a = boundary[0]
        # the arc is in the cut
        rec(alive - {a}, R, chosen | {a}, budget - 1)
        # or its head moves to the source side
        head = arcs[a][1]
        if head not in sinks:
            rec(alive, R | {head}, chosen, budget)

    rec(frozenset(alive), sources, frozenset(), k)
    return list(dict.fromkeys(found))


def _skew_rec(n, arcs, alive, sources, sinks, k, stats):
    p = len(sources)
    while p and not sources[p - 1]:
        p -= 1
    if p == 0:
        return frozenset()
    forbidden = set().union(*sinks[:p])
    for cut in sorted(important_cuts(n, arcs, alive, sources[p - 1], forbidden, k),
                      key=lambda c: (len(c), sorted(c))):
        stats["cuts"] = stats.get("cuts", 0) + 1
        rest = _skew_rec(n, arcs, alive - cut, sources[:p - 1], sinks[:p - 1],
                         k - len(cut), stats)
        if rest is not None:
            return cut | rest
    return None


def solve_skew_separator(inst, k=None, minimize=True, use_oracle=False, stats=None):
    """Arc set of size <= k separating X_i from Y_j for all j <= i, or None.

    ``k`` defaults to the instance budget.
    """
    g = inst.graph
    if k is None:
        k = inst.budget
    if k < 0:
        return None
    if use_oracle:
        return brute_force_skew_cut(g, inst.sources, inst.sinks, k)
    stats = {} if stats is None else stats
    arcs = {a.id: (a.tail, a.head) for a in g.arcs}
    alive = frozenset(arcs)
    sources = [frozenset(x) for x in inst.sources]
    sinks = [frozenset(y) for y in inst.sinks]
    for b in (range(k + 1) if minimize else [k]):
        got = _skew_rec(g.n, arcs, alive, sources, sinks, b, stats)
        if got is not None:
            assert not skew_violations(g, inst.sources, inst.sinks, got)
            return got
    return None


# --------------------------------------------------------------------------
# ordered partitions

def ordered_bell(n):
    """Number of ordered partitions of an n-element set."""
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(comb(m, j) * a[m - j] for j in range(1, m + 1)))
    return a[n]


def _surjections(n, p):
    """Maps range(n) -> range(p) hitting every value, lexicographically."""
    labels = [0] * n
    counts = [0] * p

    def rec(i, missing):
        if n - i < missing:
            return
        if i == n:
            yield tuple(labels)
            return
        for c in range(p):
            labels[i] = c
            counts[c] += 1
            yield from rec(i + 1, missing - (counts[c] == 1))
            counts[c] -= 1

    yield from rec(0, p)


def enumerate_ordered_partitions(items, cap=PARTITION_CAP):
    """Yield tuples of frozensets; by block count, then label sequence."""
    items = list(items)
    if len(items) > cap:
        raise ResourceError(
            f"{len(items)} items exceed the partition cap {cap}",
            {"ordered_partitions": ordered_bell(len(items))})
    if not items:
        yield ()
        return
    for p in range(1, len(items) + 1):
        for lab in _surjections(len(items), p):
            yield tuple(frozenset(x for x, c in zip(items, lab) if c == j) for j in range(p))


def partition_respects_negative_arcs(g, partition):
    """A negative arc must go from an earlier block to a strictly later one.

    Blocks are in decreasing potential order, so this holds for the
    partition read off any feasible potential of the graph.
    """
    where = {v: i for i, block in enumerate(partition) for v in block}
    return all(where[a.tail] < where[a.head] for a in g.arcs if a.weight < 0)


def skew_instance_for_partition(prop, partition, budget=0):
    """Sources ``(Z_1+, .., Z_p+, {})`` and sinks ``({}, Z_1-, .., Z_p-)``."""
    src = [frozenset(prop.plus[z] for z in block) for block in partition] + [frozenset()]
    snk = [frozenset()] + [frozenset(prop.minus[z] for z in block) for block in partition]
    return SkewInstance(prop.graph, tuple(src), tuple(snk), budget)


def potential_partition(g, pi):
    """Nonzero-arc endpoints grouped by potential, highest potential first."""
    Z = sorted({v for a in g.arcs if a.weight != 0 for v in (a.tail, a.head)})
    levels = sorted({pi[v] for v in Z}, reverse=True)
    return tuple(frozenset(v for v in Z if pi[v] == lv) for lv in levels)


def solve_nonzero_count(g, k, minimize=True, prune=True, partition_cap=PARTITION_CAP,
                        stats=None):
    """Guess deleted nonzero arcs and an ordering of their endpoints.

    For each guess the remaining deletions form a skew separator in the zero
    propagation graph.  ``prune`` drops orderings in which some kept negative
    arc does not go strictly forward; no feasible potential induces those.
    """
    stats = {} if stats is None else stats
    if k < 0:
        return None
    if g.w_minus <= k and not minimize:
        return frozenset(g.negative_arcs)
    best = None
    nonzero = sorted(g.nonzero_arcs)
    for size in range(0, min(k, len(nonzero)) + 1):
        if best is not None and size >= len(best):
            break
        for sub in combinations(nonzero, size):
            limit = (len(best) - 1 if best is not None else k) - size
            if limit < 0:
                break
            h, back = g.delete_arcs(sub)
            if not has_negative_cycle(h):
                cand = frozenset(sub)
                if not minimize:
                    return cand
                best = cand
                continue
            prop = build_zero_propagation_graph(h)
            Z = sorted(prop.split)
            for part in enumerate_ordered_partitions(Z, partition_cap):
                stats["partitions"] = stats.get("partitions", 0) + 1
                if prune and not partition_respects_negative_arcs(h, part):
                    continue
                inst = skew_instance_for_partition(prop, part, limit)
                cut = solve_skew_separator(inst, minimize=minimize)
                if cut is None:
                    continue
                cand = frozenset(sub) | {back[prop.arc_back[c]] for c in cut}
                # only the ordering read off a real solution is guaranteed
                # to give feasible cuts, so every candidate is checked
                if has_negative_cycle(g, cand):
                    stats["rejected"] = stats.get("rejected", 0) + 1
                    continue
                if not minimize:
                    return cand
                if best is None or len(cand) < len(best):
                    best = cand
                    limit = len(best) - 1 - size
                    if limit < 0:
                        break
    return best
