"""Branching solvers that hit a shortest negative cycle arc by arc.

If every shortest negative cycle in every arc-deleted subgraph has at most
``L`` arcs, a depth-``k`` search tree has at most ``L**k`` leaves.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .decomp import compute_treedepth
from .errors import NotApplicable, ResourceError
from .graph import shortest_negative_cycle

log = logging.getLogger(__name__)


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    long_cycles: int = 0      # cycles longer than the promised bound
    pruned_repeats: int = 0


def solve_trivial_few_negative(g, k):
    """All negative arcs, when there are at most k of them."""
    if g.w_minus > k:
        raise NotApplicable(f"{g.w_minus} negative arcs exceed budget {k}")
    return frozenset(g.negative_arcs)


def _branch(g, k, L, removed, stats, memo, max_nodes):
    stats.nodes += 1
    if stats.nodes > max_nodes:
        raise ResourceError(f"search exceeded {max_nodes} nodes")
    if memo is not None:
        if removed in memo:
            stats.pruned_repeats += 1
            return None
        memo.add(removed)
    cyc = shortest_negative_cycle(g, removed)
    if cyc is None:
        stats.leaves += 1
        return removed
    if k == 0:
        stats.leaves += 1
        return None
    if cyc.length > L:
        stats.long_cycles += 1
        log.warning("negative cycle of length %d exceeds bound %d", cyc.length, L)
    for a in cyc.arc_ids:
        got = _branch(g, k - 1, L, removed | {a}, stats, memo, max_nodes)
        if got is not None:
            return got
    return None


def _top_branch(args):
    g, k, L, a, max_nodes = args
    stats = SearchStats()
    got = _branch(g, k, L, frozenset([a]), stats, None, max_nodes)
    return got, stats


def solve_bounded_cycle_branching(g, k, L, stats=None, minimize=False,
                                  dedupe=False, workers=1, max_nodes=10**8):
    """Depth-k branching on the arcs of a shortest negative cycle.

    ``dedupe`` skips arc sets already explored in another order; it never
    changes the answer.  With ``workers > 1`` the first level is spread over
    processes and the first successful branch in arc order is kept, so the
    result does not depend on scheduling.
    """
    if stats is None:
        stats = SearchStats()
    if k < 0:
        return None
    budgets = range(k + 1) if minimize else [k]
    for b in budgets:
        if workers > 1 and b > 0:
            got = _parallel(g, b, L, stats, workers, max_nodes)
        else:
            memo = set() if dedupe else None
            got = _branch(g, b, L, frozenset(), stats, memo, max_nodes)
        if got is not None:
            return got
    return None


def _parallel(g, k, L, stats, workers, max_nodes):
    stats.nodes += 1
    cyc = shortest_negative_cycle(g)
    if cyc is None:
        stats.leaves += 1
        return frozenset()
    jobs = [(g, k - 1, L, a, max_nodes) for a in cyc.arc_ids]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_top_branch, jobs))
    for got, st in results:
        stats.nodes += st.nodes
        stats.leaves += st.leaves
        stats.long_cycles += st.long_cycles
    for got, _ in results:
        if got is not None:
            return got
    return None


def solve_td_plus_k(g, k, stats=None, minimize=False, workers=1, td=None, dedupe=False):
    """Branching with cycle bound ``2**(td - 1)`` from the treedepth."""
    if td is None:
        td = compute_treedepth(g).depth
    L = 1 << max(td - 1, 0)
    return solve_bounded_cycle_branching(g, k, L, stats, minimize, dedupe, workers)


def _require_pm1(g):
    if not g.weight_set() <= {-1, 1}:
        raise NotApplicable("weights must all be -1 or +1")


def solve_pm1_few_negative(g, k, stats=None, minimize=False, workers=1):
    """Weights in {-1, +1}; every shortest negative cycle has <= 2 w_- arcs."""
    _require_pm1(g)
    if g.w_minus <= k and not minimize:
        return frozenset(g.negative_arcs)
    if minimize and g.w_minus <= k:
        got = solve_bounded_cycle_branching(g, g.w_minus - 1, 2 * g.w_minus, stats,
                                            True, workers=workers)
        return got if got is not None else frozenset(g.negative_arcs)
    return solve_bounded_cycle_branching(g, k, 2 * g.w_minus, stats, minimize, workers=workers)
