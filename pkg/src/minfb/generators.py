"""Instance generators with known answers, plus a sidecar metadata format."""
import json
from dataclasses import dataclass, field
from itertools import combinations, product
from pathlib import Path

from .decomp import TreeDecomposition
from .errors import InputError
from .graph import WeightedDigraph, format_ndfas


@dataclass
class Instance:
    graph: WeightedDigraph
    budget: int
    family: str
    params: dict
    expected: str = "unknown"          # yes | no | unknown
    labels: dict = field(default_factory=dict)   # name -> vertex

    def meta(self):
        return {
            "family": self.family,
            "params": self.params,
            "expected": self.expected,
            "budget": self.budget,
            "n": self.graph.n,
            "m": self.graph.m,
            "w_plus": self.graph.w_plus,
            "w_minus": self.graph.w_minus,
        }


def meta_path(path):
    return Path(path).with_suffix(".meta.json")


def write_instance(inst, path):
    path = Path(path)
    path.write_text(format_ndfas(inst.graph, [f"family {inst.family}", f"budget {inst.budget}"]))
    meta_path(path).write_text(json.dumps(inst.meta(), indent=1) + "\n")
    return path


class _Builder:
    def __init__(self):
        self.names = {}
        self.edges = []

    def v(self, name):
        if name not in self.names:
            self.names[name] = len(self.names)
        return self.names[name]

    def arc(self, a, b, w):
        self.edges.append((self.v(a), self.v(b), w))

    def graph(self):
        return WeightedDigraph.from_edges(len(self.names), self.edges)


# --------------------------------------------------------------------------

def gen_from_dfas(n, arcs, k):
    """Every arc gets weight -1, so negative cycles are all cycles."""
    g = WeightedDigraph.from_edges(n, [(u, v, -1) for u, v in arcs])
    return Instance(g, k, "dfas", {"n": n, "arcs": [list(a) for a in arcs], "k": k})


def gen_partition_gadget(numbers):
    """Yes exactly when the numbers split into two halves of equal sum.

    One positive arc (t, s) of weight A/2 closes every cycle; budget is the
    count of numbers.
    """
    nums = [int(a) for a in numbers]
    if not nums or any(a <= 0 for a in nums):
        raise InputError("numbers must be positive")
    A = sum(nums)
    if A % 2:
        raise InputError(f"sum {A} is odd")
    n = len(nums)
    b = _Builder()
    b.v("s")
    b.v("t")
    for i in range(1, n + 2):
        b.v(("S", i, 1))
        b.v(("S", i, 2))
    for i, a in enumerate(nums, 1):
        for j in (1, 2):
            b.v(("x", i, j))
            b.v(("y", i, j))
    for i, a in enumerate(nums, 1):
        for j in (1, 2):
            b.arc(("x", i, j), ("y", i, j), -a)
        b.arc(("y", i, 1), ("x", i, 2), 0)
        b.arc(("y", i, 2), ("x", i, 1), 0)
        for j in (1, 2):
            s_ij, t_ij = ("S", i, j), ("S", i + 1, j)
            b.arc(s_ij, t_ij, 0)
            b.arc(s_ij, ("x", i, j), 0)
            b.arc(("y", i, j), t_ij, 0)
    for j in (1, 2):
        b.arc("s", ("S", 1, j), 0)
        b.arc(("S", n + 1, j), "t", 0)
    b.arc("t", "s", A // 2)
    reach = {0}
    for a in nums:
        reach |= {r + a for r in reach}
    expected = "yes" if A // 2 in reach else "no"
    return Instance(b.graph(), n, "partition", {"numbers": nums}, expected, dict(b.names))


def pathwidth_certificate_partition(inst):
    """Path decomposition of width 6 for a partition gadget."""
    if inst.family != "partition":
        raise InputError("not a partition gadget")
    L = inst.labels
    n = len(inst.params["numbers"])
    s, t = L["s"], L["t"]
    bags = []
    for i in range(1, n + 1):
        S1, S2 = L[("S", i, 1)], L[("S", i, 2)]
        T1, T2 = L[("S", i + 1, 1)], L[("S", i + 1, 2)]
        x1, x2, y1, y2 = (L[("x", i, 1)], L[("x", i, 2)], L[("y", i, 1)], L[("y", i, 2)])
        bags.append(frozenset({s, S1, S2, x1, x2, y1, y2}))
        bags.append(frozenset({s, S1, S2, y1, y2, T1, T2}))
    bags.append(frozenset({s, L[("S", n + 1, 1)], L[("S", n + 1, 2)], t}))
    return TreeDecomposition(bags, [(i, i + 1) for i in range(len(bags) - 1)])


# --------------------------------------------------------------------------

def has_multicolored_clique(n, edges, coloring, k):
    classes = [[v for v in range(n) if coloring[v] == i] for i in range(k)]
    E = {frozenset(e) for e in edges}
    for pick in product(*classes):
        if all(frozenset((pick[i], pick[j])) in E for i, j in combinations(range(k), 2)):
            return True
    return False


def gen_multicolored_clique_gadget(n, edges, coloring, k):
    """Budget ``k + C(k, 2)``; yes exactly when a multicoloured k-clique exists.

    ``coloring[v]`` is the class of v in ``0..k-1``; ``edges`` are vertex
    pairs in different classes.  Every class and every class pair gets a
    negative cycle that forces one deletion selecting a vertex or an edge,
    and the consistency arcs keep selections compatible.
    """
    if len(coloring) != n or any(not 0 <= c < k for c in coloring):
        raise InputError("coloring must map every vertex to 0..k-1")
    E = sorted({tuple(sorted(e)) for e in edges})
    for u, v in E:
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise InputError(f"bad edge {(u, v)}")
        if coloring[u] == coloring[v]:
            raise InputError(f"edge {(u, v)} joins two vertices of class {coloring[u]}")
    big = max(n, 1)
    b = _Builder()
    V = [[v for v in range(n) if coloring[v] == i] for i in range(k)]
    phi = {}
    for i in range(k):
        for r, v in enumerate(V[i], 1):
            phi[v] = r
    Eij = {}
    for u, v in E:
        i, j = sorted((coloring[u], coloring[v]))
        Eij.setdefault((i, j), []).append((u, v))

    def selection_cycle(nodes, tag):
        """Negative cycle over ``nodes`` whose arc into x stands for x."""
        if len(nodes) == 1:
            aux = ("aux", tag)
            b.arc(nodes[0], aux, -big)
            b.arc(aux, nodes[0], 0)
            return
        for r in range(len(nodes)):
            b.arc(nodes[r], nodes[(r + 1) % len(nodes)], -big)

    def blocker(tag):
        """Two arc-disjoint negative cycles: one extra deletion is forced."""
        for c in (0, 1):
            p, q = ("block", tag, c, 0), ("block", tag, c, 1)
            b.arc(p, q, -1)
            b.arc(q, p, 0)

    for i in range(k):
        b.v(("t", i))
        b.v(("n", i))
        b.v(("p", i))
        nodes = [("v", v) for v in V[i]]
        for x in nodes:
            b.arc(x, ("t", i), 0)
        if nodes:
            selection_cycle(nodes, ("V", i))
        else:
            blocker(("V", i))
    for i, j in combinations(range(k), 2):
        es = Eij.get((i, j), [])
        s = ("s", i, j)
        b.v(s)
        nodes = [("e", e) for e in es]
        for x in nodes:
            b.arc(s, x, 0)
        if nodes:
            selection_cycle(nodes, ("E", i, j))
        else:
            blocker(("E", i, j))
        for a, c in ((i, j), (j, i)):
            b.arc(("t", a), s, big * (len(V[a]) + len(es) - 1))
        for e in es:
            for side in (i, j):
                end = e[0] if coloring[e[0]] == side else e[1]
                f = phi[end]
                b.arc(("e", e), ("n", side), -(big - f))
                b.arc(("e", e), ("p", side), -f)
    for i in range(k):
        for v in V[i]:
            b.arc(("n", i), ("v", v), -phi[v])
            b.arc(("p", i), ("v", v), -(big - phi[v]))
    d = k + k * (k - 1) // 2
    expected = "yes" if has_multicolored_clique(n, E, coloring, k) else "no"
    return Instance(b.graph(), d, "mcclique",
                    {"n": n, "edges": [list(e) for e in E], "coloring": list(coloring), "k": k},
                    expected, dict(b.names))


# --------------------------------------------------------------------------

def subdivide_to_unit_weights(g):
    """Replace an arc of weight w != 0 by a path of |w| arcs of weight sign(w).

    Returns ``(graph, back)`` where ``back[new_arc] = original arc``.
    """
    n = g.n
    edges, back = [], []
    for a in g.arcs:
        w = a.weight
        if w == 0 or abs(w) == 1:
            edges.append((a.tail, a.head, w))
            back.append(a.id)
            continue
        sign = 1 if w > 0 else -1
        prev = a.tail
        for step in range(abs(w)):
            nxt = a.head if step == abs(w) - 1 else n
            if nxt == n:
                n += 1
            edges.append((prev, nxt, sign))
            back.append(a.id)
            prev = nxt
    return WeightedDigraph.from_edges(n, edges), tuple(back)


def lift_solution(back, arcs):
    """Original arcs hit by a solution of the subdivided graph."""
    return frozenset(back[a] for a in arcs)


# --------------------------------------------------------------------------

def _shortest_st(n, arcs, s, t, removed=()):
    succ = [[] for _ in range(n)]
    for i, (u, v) in enumerate(arcs):
        if i not in removed:
            succ[u].append(v)
    dist = {s: 0}
    frontier = [s]
    while frontier:
        nxt = []
        for u in frontier:
            for v in succ[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist.get(t)


def _is_acyclic(n, arcs):
    indeg = [0] * n
    succ = [[] for _ in range(n)]
    for u, v in arcs:
        succ[u].append(v)
        indeg[v] += 1
    stack = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return seen == n


def bedc_answer(n, arcs, s, t, k, ell):
    """Can at most k arcs be deleted so every s-t path has > ell arcs?"""
    for size in range(k + 1):
        for sub in combinations(range(len(arcs)), size):
            d = _shortest_st(n, arcs, s, t, set(sub))
            if d is None or d > ell:
                return True
    return False


def gen_bedc_chain(n, arcs, s, t, k, ell, exact_limit=20):
    """Bounded edge cut in a DAG, encoded with +1 arcs and -1 return paths.

    Original arcs weigh +1.  ``k + 1`` disjoint t -> s paths of ``ell + 1``
    arcs of weight -1 are added, so a cycle through an s-t path of length d
    is negative exactly when ``d <= ell``.
    """
    if s == t or not (0 <= s < n and 0 <= t < n):
        raise InputError("s and t must be distinct vertices")
    if not _is_acyclic(n, arcs):
        raise InputError("input graph must be acyclic")
    if k < 0 or ell < 0:
        raise InputError("k and ell must be non-negative")
    edges = [(u, v, 1) for u, v in arcs]
    total = n
    for _ in range(k + 1):
        prev = t
        for step in range(ell + 1):
            nxt = s if step == ell else total
            if nxt == total:
                total += 1
            edges.append((prev, nxt, -1))
            prev = nxt
    g = WeightedDigraph.from_edges(total, edges)
    expected = "unknown"
    if len(arcs) <= exact_limit:
        expected = "yes" if bedc_answer(n, arcs, s, t, k, ell) else "no"
    params = {"n": n, "arcs": [list(a) for a in arcs], "s": s, "t": t, "k": k, "ell": ell}
    return Instance(g, k, "bedc-chain", params, expected)
