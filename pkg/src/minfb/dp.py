"""Dynamic programming over nice tree decompositions.

A state at a node is a pair ``(C, pi)``: an ordered partition ``C`` of the
bag and a potential ``pi`` from the bag into ``[lo, hi]``.  An arc ``(p, q)``
with ``p`` in block i and ``q`` in block j must be deleted when ``i > j`` or
when ``i == j`` and ``pi(p) - pi(q) + w < 0``.  The table stores, for every
state, the fewest deletions in the processed subgraph.

Tables are numpy arrays of shape ``(P_t, R, .., R)``: axis 0 indexes the
ordered partitions of the bag allowed by the family, the remaining axes give
the potential of each bag vertex in sorted order.
"""
import heapq
from itertools import permutations
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .decomp import compute_tree_decomposition, compute_treedepth, make_nice
from .errors import NotApplicable, ResourceError
from .graph import WeightedDigraph, strong_components

KEY_CAP = 10**7
ORDERED_BAG_CAP = 8

SINGLETON = "singleton"
ORDERED = "ordered"


@dataclass
class DpResult:
    arcs: frozenset
    size: int
    partition: tuple          # ordered partition of V(G), tuple of frozensets
    potential: tuple          # potential per vertex
    lo: int
    hi: int


@lru_cache(maxsize=None)
def _partitions(t, family):
    if family == SINGLETON or t == 0:
        return ((0,) * t,)
    out = []
    # restricted growth strings give set partitions; permute block order
    raw = []

    def rgs(prefix, top):
        if len(prefix) == t:
            raw.append(tuple(prefix))
            return
        for c in range(top + 2):
            rgs(prefix + [c], max(top, c))

    rgs([], -1)
    seen = set()
    for r in raw:
        p = max(r) + 1
        for perm in permutations(range(p)):
            lab = tuple(perm[c] for c in r)
            if lab not in seen:
                seen.add(lab)
                out.append(lab)
    out.sort(key=lambda lab: (max(lab), lab))
    return tuple(out)


def _normalize(lab):
    ranks = {c: i for i, c in enumerate(sorted(set(lab)))}
    return tuple(ranks[c] for c in lab)


@lru_cache(maxsize=None)
def _projection(t, i, family):
    """Index map from partitions of t+1 items to partitions after dropping i."""
    small = {lab: j for j, lab in enumerate(_partitions(t, family))}
    return np.array([small[_normalize(lab[:i] + lab[i + 1:])]
                     for lab in _partitions(t + 1, family)], dtype=np.int64)


@lru_cache(maxsize=None)
def _labels(t, family):
    return np.array(_partitions(t, family), dtype=np.int64).reshape(-1, t)


def _arc_cost(t, family, ip, iq, w, R):
    """0/1 deletion indicator of an arc between bag positions ip and iq."""
    lab = _labels(t, family)
    lp, lq = lab[:, ip], lab[:, iq]
    r = np.arange(R)
    viol = (r[:, None] - r[None, :] + w) < 0          # [pi_p, pi_q]
    cost = (lp > lq)[:, None, None] | ((lp == lq)[:, None, None] & viol[None])
    cost = cost.astype(np.int32)
    if ip > iq:
        cost = cost.transpose(0, 2, 1)
        ip, iq = iq, ip
    shape = [cost.shape[0]] + [1] * t
    shape[1 + ip] = R
    shape[1 + iq] = R
    return cost.reshape(shape)


def _deleted(key_lab, key_pi, pos, arc, lo):
    ip, iq = pos[arc.tail], pos[arc.head]
    lp, lq = key_lab[ip], key_lab[iq]
    if lp != lq:
        return lp > lq
    return (key_pi[ip] + lo) - (key_pi[iq] + lo) + arc.weight < 0


def dp_solve(g, nice, family, lo, hi, key_cap=KEY_CAP):
    if family not in (SINGLETON, ORDERED):
        raise ValueError(f"unknown family {family!r}")
    if hi < lo:
        raise ValueError("empty potential range")
    R = hi - lo + 1
    width = max(len(x.bag) for x in nice.nodes)
    if family == ORDERED and width > ORDERED_BAG_CAP:
        raise ResourceError(f"bag size {width} exceeds {ORDERED_BAG_CAP} for ordered partitions")
    keys = len(_partitions(width, family)) * R ** width
    if keys > key_cap:
        raise ResourceError(f"{keys} keys per bag exceed cap {key_cap}", {"keys": keys})

    arcs_between = {}
    for a in g.arcs:
        arcs_between.setdefault(frozenset((a.tail, a.head)), []).append(a)

    def incident(v, bag):
        out = []
        for u in bag:
            if u != v:
                out.extend(arcs_between.get(frozenset((u, v)), ()))
        return out

    tables, back = {}, {}
    for x in nice.postorder():
        node = nice.nodes[x]
        bag = sorted(node.bag)
        t = len(bag)
        pos = {v: i for i, v in enumerate(bag)}
        if node.kind == "leaf":
            tables[x] = np.zeros((1,), dtype=np.int32)
        elif node.kind == "introduce":
            v = node.vertex
            i = pos[v]
            child = tables.pop(node.children[0])
            proj = _projection(t - 1, i, family)
            T = np.expand_dims(child[proj], axis=i + 1)
            T = np.broadcast_to(T, T.shape[:i + 1] + (R,) + T.shape[i + 2:]).copy()
            for a in incident(v, node.bag):
                T += _arc_cost(t, family, pos[a.tail], pos[a.head], a.weight, R)
            tables[x] = T
        elif node.kind == "forget":
            v = node.vertex
            cbag = sorted(nice.nodes[node.children[0]].bag)
            i = cbag.index(v)
            child = tables.pop(node.children[0])
            M = child.min(axis=i + 1)
            Am = child.argmin(axis=i + 1)
            proj = _projection(t, i, family)
            P = len(_partitions(t, family))
            T = np.empty((P,) + M.shape[1:], dtype=np.int32)
            bp_part = np.empty(T.shape, dtype=np.int64)
            for q in range(P):
                rows = np.flatnonzero(proj == q)
                sub = M[rows]
                j = sub.argmin(axis=0)
                T[q] = np.take_along_axis(sub, j[None], axis=0)[0]
                bp_part[q] = rows[j]
            bp_pi = np.take_along_axis(Am, bp_part, axis=0) if Am.ndim > 1 else Am[bp_part]
            back[x] = (bp_part, bp_pi, i)
            tables[x] = T
        elif node.kind == "join":
            c1, c2 = node.children
            T = tables.pop(c1) + tables.pop(c2)
            for j, u in enumerate(bag):
                for a in incident(u, bag[j + 1:]):
                    T -= _arc_cost(t, family, pos[a.tail], pos[a.head], a.weight, R)
            tables[x] = T
        else:
            raise ValueError(f"unknown node kind {node.kind!r}")
    root_table = tables.pop(nice.root)
    size = int(root_table[0])

    # top-down reconstruction of the deletion set and the witness
    deleted = set()
    pi = [None] * g.n
    relations = []
    stack = [(nice.root, 0, ())]
    while stack:
        x, p, key = stack.pop()
        node = nice.nodes[x]
        bag = sorted(node.bag)
        t = len(bag)
        lab = _partitions(t, family)[p]
        for v, r in zip(bag, key):
            pi[v] = lo + r
        relations.append((bag, lab))
        if node.kind == "introduce":
            v = node.vertex
            i = bag.index(v)
            pos = {u: j for j, u in enumerate(bag)}
            for a in incident(v, node.bag):
                if _deleted(lab, key, pos, a, lo):
                    deleted.add(a.id)
            proj = _projection(t - 1, i, family)
            stack.append((node.children[0], int(proj[p]), key[:i] + key[i + 1:]))
        elif node.kind == "forget":
            bp_part, bp_pi, i = back[x]
            idx = (p,) + tuple(key)
            cp = int(bp_part[idx])
            r = int(bp_pi[idx])
            stack.append((node.children[0], cp, key[:i] + (r,) + key[i:]))
        elif node.kind == "join":
            for c in node.children:
                stack.append((c, p, key))
    assert len(deleted) == size, (len(deleted), size)
    for v in range(g.n):
        if pi[v] is None:
            pi[v] = lo
    partition = _global_partition(g.n, relations, family)
    return DpResult(frozenset(deleted), size, partition, tuple(pi), lo, hi)


def _global_partition(n, relations, family):
    if family == SINGLETON:
        return (frozenset(range(n)),) if n else ()
    succ = [set() for _ in range(n)]
    for bag, lab in relations:
        for a in range(len(bag)):
            for b in range(len(bag)):
                if a != b and lab[a] <= lab[b]:
                    succ[bag[a]].add(bag[b])
    # equal labels give arcs both ways, so blocks are strong components
    g = WeightedDigraph.from_edges(n, [(u, v, 0) for u in range(n) for v in sorted(succ[u])])
    comps = strong_components(g)
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    indeg = [0] * len(comps)
    out = [set() for _ in comps]
    for u in range(n):
        for v in succ[u]:
            cu, cv = comp_of[u], comp_of[v]
            if cu != cv and cv not in out[cu]:
                out[cu].add(cv)
                indeg[cv] += 1
    heap = [(comps[i][0], i) for i in range(len(comps)) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(frozenset(comps[i]))
        for j in out[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (comps[j][0], j))
    assert len(order) == len(comps)
    return tuple(order)


def check_cpi_feasible(g, arcs, partition, potential, lo=None, hi=None):
    """Check that ``(partition, potential)`` certifies ``G - arcs``.

    Returns ``(ok, reason)``.
    """
    where = {}
    for i, block in enumerate(partition):
        for v in block:
            if v in where:
                return False, f"vertex {v} in two blocks"
            where[v] = i
    if set(where) != set(range(g.n)):
        return False, "partition does not cover every vertex"
    if lo is not None and any(not lo <= potential[v] <= hi for v in range(g.n)):
        return False, "potential outside its range"
    arcs = set(arcs)
    for a in g.arcs:
        if a.id in arcs:
            continue
        i, j = where[a.tail], where[a.head]
        if i > j:
            return False, f"arc {a.id} goes backwards between blocks"
        if i == j and potential[a.tail] - potential[a.head] + a.weight < 0:
            return False, f"arc {a.id} violates the potential inside a block"
    return True, ""


# --------------------------------------------------------------------------
# instantiations

def _require_unit(g):
    if not g.weight_set() <= {-1, 0, 1}:
        raise NotApplicable("weights must lie in {-1, 0, 1}")


def nice_decomposition(g):
    return make_nice(compute_tree_decomposition(g))


def _finish(res, k):
    return res.arcs if res.size <= k else None


def solve_tw_wminus(g, k, nice=None, key_cap=KEY_CAP):
    """Single block, potentials in [0, w_-]."""
    _require_unit(g)
    nice = nice or nice_decomposition(g)
    return _finish(dp_solve(g, nice, SINGLETON, 0, g.w_minus, key_cap), k)


def solve_tw_wplus(g, k, nice=None, key_cap=KEY_CAP):
    """All ordered partitions, potentials in [0, w_+]."""
    _require_unit(g)
    nice = nice or nice_decomposition(g)
    return _finish(dp_solve(g, nice, ORDERED, 0, g.w_plus, key_cap), k)


def solve_td_potential(g, k, nice=None, td=None, key_cap=KEY_CAP):
    """Single block, potentials in [0, 2**td]."""
    _require_unit(g)
    nice = nice or nice_decomposition(g)
    if td is None:
        td = compute_treedepth(g).depth
    return _finish(dp_solve(g, nice, SINGLETON, 0, 1 << td, key_cap), k)
