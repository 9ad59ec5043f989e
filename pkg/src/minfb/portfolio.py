"""Pick a solver from cheap instance parameters and run it."""
import logging
from dataclasses import dataclass, field
from math import comb

from . import branching, dp, pm1, skew
from .decomp import compute_tree_decomposition, compute_treedepth, make_nice
from .errors import ResourceError
from .graph import build_feasible_potential, verify_solution
from .oracle import brute_force_ndfas

log = logging.getLogger(__name__)

DEFAULT_CAP = 10**8

ALGORITHMS = (
    "trivial", "td-k", "pm1-wminus", "pm1-wplus", "skew",
    "dp-tw-wminus", "dp-tw-wplus", "dp-td", "oracle",
)


@dataclass
class SolveResult:
    status: str                 # solved | no_solution
    arcs: frozenset
    algorithm: str
    k: int
    potential: tuple | None = None
    estimates: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "status": self.status,
            "algorithm": self.algorithm,
            "k": self.k,
            "arcs": sorted(self.arcs),
            "size": len(self.arcs),
            "potential": None if self.potential is None else list(self.potential),
            "estimates": {a: float(v) for a, v in self.estimates.items()},
        }


def _estimates(g, k, tw, td):
    """Rough work estimates (search leaves or DP keys) per solver."""
    est = {}
    wm, wp = g.w_minus, g.w_plus
    ws = g.weight_set()
    if wm <= k:
        est["trivial"] = 1
    # a simple cycle never has more than n arcs
    est["td-k"] = float(max(2, min(2 ** max(td - 1, 0), g.n))) ** k
    if ws <= {-1, 1}:
        est["pm1-wminus"] = float(max(1, 2 * wm)) ** k
        est["pm1-wplus"] = float(2 * wp * wp + 2 * wp + 1) ** k
    if ws <= {-1, 0, 1}:
        bag = tw + 1
        est["dp-tw-wminus"] = float(wm + 1) ** bag * g.n
        if bag <= dp.ORDERED_BAG_CAP:
            est["dp-tw-wplus"] = float(skew.ordered_bell(bag)) * float(wp + 1) ** bag * g.n
        est["dp-td"] = float(2 ** td + 1) ** bag * g.n
    z = len({v for a in g.arcs if a.weight != 0 for v in (a.tail, a.head)})
    if z <= skew.PARTITION_CAP:
        subsets = sum(comb(wm + wp, i) for i in range(min(k, wm + wp) + 1))
        est["skew"] = float(subsets) * skew.ordered_bell(z) * 4.0 ** k
    est["oracle"] = float(sum(comb(g.m, i) for i in range(min(k, g.m) + 1)))
    return est


def _run(name, g, k, minimize, workers, nice, td):
    if name == "trivial":
        return branching.solve_trivial_few_negative(g, k)
    if name == "td-k":
        return branching.solve_td_plus_k(g, k, minimize=minimize, workers=workers, td=td)
    if name == "pm1-wminus":
        return branching.solve_pm1_few_negative(g, k, minimize=minimize, workers=workers)
    if name == "pm1-wplus":
        return pm1.solve_pm1_few_positive(g, k, minimize=minimize)
    if name == "skew":
        return skew.solve_nonzero_count(g, k, minimize=minimize)
    if name == "dp-tw-wminus":
        return dp.solve_tw_wminus(g, k, nice)
    if name == "dp-tw-wplus":
        return dp.solve_tw_wplus(g, k, nice)
    if name == "dp-td":
        return dp.solve_td_potential(g, k, nice, td)
    if name == "oracle":
        return brute_force_ndfas(g, k)
    raise ValueError(f"unknown algorithm {name!r}")


def _choose(g, k, est, cap):
    ws = g.weight_set()
    if ws <= {-1, 1}:
        pool = ["pm1-wminus", "pm1-wplus"]
    elif ws <= {-1, 0, 1}:
        pool = ["dp-tw-wminus", "dp-tw-wplus", "dp-td"]
    else:
        pool = ["td-k", "skew"]
    pool = [p for p in pool if p in est and est[p] <= cap]
    if pool:
        return min(pool, key=lambda p: (est[p], ALGORITHMS.index(p)))
    for p in ("td-k", "skew", "oracle"):
        if p in est and est[p] <= cap:
            return p
    raise ResourceError("every solver exceeds the resource cap", est)


def solve_portfolio(g, k, algorithm=None, minimize=True, cap=DEFAULT_CAP, workers=1):
    """Solve with the named solver, or the cheapest applicable one.

    With ``minimize`` the reported set is a minimum one; otherwise any set
    of size at most k may be returned.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    td_dec = compute_treedepth(g)
    nice = make_nice(compute_tree_decomposition(g))
    tw = nice.width
    est = _estimates(g, k, tw, td_dec.depth)
    budget = k
    fallback = None
    if algorithm is None:
        if g.w_minus <= k:
            if not minimize:
                algorithm = "trivial"
            else:
                # anything smaller than all negative arcs?
                budget = g.w_minus - 1
                fallback = frozenset(g.negative_arcs)
                est = _estimates(g, max(budget, 0), tw, td_dec.depth)
        if algorithm is None:
            algorithm = "trivial" if budget < 0 else _choose(g, budget, est, cap)
    elif algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    log.info("algorithm %s, estimates %s", algorithm, est)
    arcs = None if budget < 0 else _run(algorithm, g, budget, minimize, workers, nice,
                                        td_dec.depth)
    if arcs is None and fallback is not None:
        arcs, algorithm = fallback, "trivial"
    if arcs is None:
        return SolveResult("no_solution", frozenset(), algorithm, k, None, est)
    rep = verify_solution(g, arcs, k)
    if not rep.valid:  # pragma: no cover
        raise AssertionError(f"{algorithm} returned an invalid set {sorted(arcs)}")
    return SolveResult("solved", frozenset(arcs), algorithm, k,
                       build_feasible_potential(g, arcs).values, est)
