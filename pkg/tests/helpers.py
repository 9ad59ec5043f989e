"""Shared instance builders and small independent reference routines."""
import random
from itertools import combinations

from hypothesis import strategies as st

from minfb.graph import WeightedDigraph


def graph(n, edges):
    return WeightedDigraph.from_edges(n, edges)


def triangle(w=-1):
    return graph(3, [(0, 1, w), (1, 2, w), (2, 0, w)])


def random_graph(rng, n, m, weights):
    edges = []
    while len(edges) < m and n > 1:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.append((u, v, rng.choice(weights)))
    return graph(n, edges)


@st.composite
def digraphs(draw, max_n=6, max_m=10, weights=(-3, 3), min_n=1):
    n = draw(st.integers(min_n, max_n))
    if n < 2:
        return graph(n, [])
    if isinstance(weights, tuple) and len(weights) == 2 and weights[0] < weights[1]:
        w = st.integers(*weights)
    else:
        w = st.sampled_from(list(weights))
    arc = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), w).filter(lambda a: a[0] != a[1])
    return graph(n, draw(st.lists(arc, max_size=max_m)))


def simple_cycles(g, removed=()):
    """All simple cycles as arc-id tuples, each listed once (rotation-free)."""
    removed = set(removed)
    out = [[a for a in g.out_arcs[v] if a.id not in removed] for v in range(g.n)]
    found = []

    def extend(start, v, path, seen):
        for a in out[v]:
            if a.head == start:
                found.append(tuple(path + [a.id]))
            elif a.head > start and a.head not in seen:
                seen.add(a.head)
                extend(start, a.head, path + [a.id], seen)
                seen.discard(a.head)

    for s in range(g.n):
        extend(s, s, [], {s})
    return found


def cycle_weight(g, ids):
    return sum(g.arcs[i].weight for i in ids)


def canonical(ids):
    i = ids.index(min(ids))
    return tuple(ids[i:] + ids[:i])


def reference_shortest_negative_cycle(g):
    neg = [c for c in simple_cycles(g) if cycle_weight(g, c) < 0]
    if not neg:
        return None
    L = min(len(c) for c in neg)
    return min(canonical(c) for c in neg if len(c) == L)


def undirected_edges(g):
    return {frozenset((a.tail, a.head)) for a in g.arcs}


def exact_treewidth(n, edges):
    """Subset recursion over elimination prefixes (independent of the library)."""
    adj = {v: set() for v in range(n)}
    for e in edges:
        u, v = tuple(e)
        adj[u].add(v)
        adj[v].add(u)
    if n == 0:
        return -1
    memo = {}

    def q(S, v):
        # vertices outside S + v reachable from v through S
        seen, stack, out = {v}, [v], set()
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in seen:
                    continue
                seen.add(y)
                if y in S:
                    stack.append(y)
                else:
                    out.add(y)
        return len(out)

    def tw(S):
        if not S:
            return -1
        if S in memo:
            return memo[S]
        best = min(max(tw(S - {v}), q(S - {v}, v)) for v in S)
        memo[S] = best
        return best

    return tw(frozenset(range(n)))


def exact_pathwidth(n, edges):
    """Vertex separation number by subset DP."""
    adj = {v: set() for v in range(n)}
    for e in edges:
        u, v = tuple(e)
        adj[u].add(v)
        adj[v].add(u)
    order = sorted(range(1 << n), key=lambda m: bin(m).count("1"))
    best = {0: -1}
    for mask in order:
        if mask == 0:
            continue
        S = [v for v in range(n) if mask >> v & 1]
        val = None
        for v in S:
            prev = mask & ~(1 << v)
            inner = {u for u in S}
            sep = sum(1 for u in S if adj[u] - inner)
            cand = max(best[prev], sep)
            if val is None or cand < val:
                val = cand
        best[mask] = val
    return best[(1 << n) - 1] if n else -1


def exact_treedepth(n, edges):
    """td(G) = 1 + min_v td(G - v) on connected graphs, max over components."""
    adj = {v: set() for v in range(n)}
    for e in edges:
        u, v = tuple(e)
        adj[u].add(v)
        adj[v].add(u)

    def comps(S):
        S, out = set(S), []
        while S:
            s = S.pop()
            c, stack = {s}, [s]
            while stack:
                x = stack.pop()
                for y in adj[x] & S:
                    S.discard(y)
                    c.add(y)
                    stack.append(y)
            out.append(frozenset(c))
        return out

    memo = {}

    def td(S):
        if len(S) == 1:
            return 1
        if S in memo:
            return memo[S]
        best = 1 + min(max((td(c) for c in comps(S - {v})), default=0) for v in S)
        memo[S] = best
        return best

    return max((td(c) for c in comps(range(n))), default=0)


def partial_ktree(rng, n, k, keep=0.8):
    """Edges of a random partial k-tree on n vertices (treewidth <= k)."""
    k = min(k, n - 1)
    cliques = [tuple(range(k + 1))]
    edges = {(i, j) for i, j in combinations(range(k + 1), 2)}
    for v in range(k + 1, n):
        base = list(rng.choice(cliques))
        base.pop(rng.randrange(len(base)))
        for u in base:
            edges.add((u, v))
        cliques.append(tuple(base) + (v,))
    return sorted(e for e in edges if rng.random() < keep)


def unit_weight_instance(rng, n, k, n_neg, n_pos):
    und = partial_ktree(rng, n, k)
    arcs = [(u, v) if rng.random() < 0.5 else (v, u) for u, v in und]
    w = [0] * len(arcs)
    idx = list(range(len(arcs)))
    rng.shuffle(idx)
    for i in idx[:n_neg]:
        w[i] = -1
    for i in idx[n_neg:n_neg + n_pos]:
        w[i] = 1
    return graph(n, [(u, v, x) for (u, v), x in zip(arcs, w)])


def treedepth_forest_instance(rng, size, depth, weights, p=0.7):
    """Arcs only between ancestor/descendant pairs of a depth-bounded forest."""
    parent, level = [-1], [1]
    for v in range(1, size):
        cands = [u for u in range(v) if level[u] < depth]
        u = rng.choice(cands)
        parent.append(u)
        level.append(level[u] + 1)
    edges = []
    for v in range(size):
        a = parent[v]
        while a != -1:
            if a == parent[v] or rng.random() < p:
                if rng.random() < 0.5:
                    edges.append((a, v, rng.choice(weights)))
                else:
                    edges.append((v, a, rng.choice(weights)))
                if rng.random() < 0.3:
                    u, x, _ = edges[-1]
                    edges.append((x, u, rng.choice(weights)))
            a = parent[a]
    return edges


def seeded(seed):
    return random.Random(seed)


def td_bounded_instance(rng, n, comp_size, depth, weights, target, k_probe=3):
    """Disjoint small components of bounded treedepth with known total optimum."""
    from minfb.oracle import brute_force_ndfas
    while True:
        edges, off, opt = [], 0, 0
        while off < n:
            size = min(comp_size, n - off)
            e = treedepth_forest_instance(rng, size, depth, weights)
            best = brute_force_ndfas(graph(size, e), k_probe)
            if best is None:
                continue
            if opt + len(best) > target:
                e = [(u, v, abs(w)) for u, v, w in e]
                best = ()
            opt += len(best)
            edges += [(u + off, v + off, w) for u, v, w in e]
            off += size
        if opt == target:
            return graph(n, edges)


# one line per acceptance criterion, printed at the end of the run
RESULTS = []


def criterion(number, title):
    import functools
    import time

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                line = f"criterion {number} FAIL ({title}): {type(exc).__name__}: {str(exc)[:160]}"
                RESULTS.append(line)
                print(line)
                raise
            line = (f"criterion {number} PASS ({title}) in {time.perf_counter() - t0:.1f}s"
                    + (f": {detail}" if detail else ""))
            RESULTS.append(line)
            print(line)
        return run
    return wrap
