"""Weighted directed multigraphs, negative cycles and feasible potentials.

Vertices are ``0..n-1`` internally; the text format is 1-indexed.  Arc ids
are dense ``0..m-1`` and are the stable handles used everywhere else.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .errors import InputError

INF = 1 << 60


class Arc(NamedTuple):
    id: int
    tail: int
    head: int
    weight: int


@dataclass(frozen=True)
class WeightedDigraph:
    n: int
    arcs: tuple

    def __post_init__(self):
        if self.n < 0:
            raise InputError("negative vertex count")
        for i, a in enumerate(self.arcs):
            if a.id != i:
                raise InputError(f"arc ids must be dense, got {a.id} at position {i}")
            if not (0 <= a.tail < self.n and 0 <= a.head < self.n):
                raise InputError(f"arc {i}: endpoint out of range")
            if a.tail == a.head:
                raise InputError(f"arc {i}: loops are not allowed")
            if isinstance(a.weight, bool) or not isinstance(a.weight, (int, np.integer)):
                raise InputError(f"arc {i}: weight must be an integer")

    @classmethod
    def from_edges(cls, n, edges):
        """Build from ``(tail, head, weight)`` triples; ids follow list order."""
        arcs = []
        for i, (u, v, w) in enumerate(edges):
            if isinstance(w, np.integer):
                w = int(w)
            arcs.append(Arc(i, int(u), int(v), w))
        return cls(n, tuple(arcs))

    @property
    def m(self):
        return len(self.arcs)

    def edges(self):
        return [(a.tail, a.head, a.weight) for a in self.arcs]

    @cached_property
    def out_arcs(self):
        out = [[] for _ in range(self.n)]
        for a in self.arcs:
            out[a.tail].append(a)
        return tuple(tuple(x) for x in out)

    @cached_property
    def in_arcs(self):
        inc = [[] for _ in range(self.n)]
        for a in self.arcs:
            inc[a.head].append(a)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def negative_arcs(self):
        return frozenset(a.id for a in self.arcs if a.weight < 0)

    @cached_property
    def positive_arcs(self):
        return frozenset(a.id for a in self.arcs if a.weight > 0)

    @property
    def nonzero_arcs(self):
        return self.negative_arcs | self.positive_arcs

    @property
    def w_minus(self):
        return len(self.negative_arcs)

    @property
    def w_plus(self):
        return len(self.positive_arcs)

    def weight_set(self):
        return {a.weight for a in self.arcs}

    def delete_arcs(self, ids):
        """Return ``(G - ids, back)`` where ``back[new_id] = old_id``."""
        ids = set(ids)
        kept = [a for a in self.arcs if a.id not in ids]
        g = WeightedDigraph.from_edges(self.n, [(a.tail, a.head, a.weight) for a in kept])
        return g, tuple(a.id for a in kept)

    def underlying_adjacency(self):
        """Neighbour sets of the underlying simple undirected graph."""
        adj = [set() for _ in range(self.n)]
        for a in self.arcs:
            adj[a.tail].add(a.head)
            adj[a.head].add(a.tail)
        return adj


class Cycle(NamedTuple):
    arc_ids: tuple
    weight: int

    @property
    def length(self):
        return len(self.arc_ids)


class Potential(NamedTuple):
    values: tuple

    def __getitem__(self, v):
        return self.values[v]

    def slack(self, arc):
        return self.values[arc.tail] - self.values[arc.head] + arc.weight


class VerifyReport(NamedTuple):
    size_ok: bool
    acyclic_of_negatives: bool
    certificate: Potential | None

    @property
    def valid(self):
        return self.size_ok and self.acyclic_of_negatives

    def as_dict(self):
        return {
            "size_ok": self.size_ok,
            "acyclic_of_negatives": self.acyclic_of_negatives,
            "valid": self.valid,
            "certificate": None if self.certificate is None else list(self.certificate.values),
        }


# --------------------------------------------------------------------------
# text format

def parse_ndfas(text):
    """Parse the ``p ndfas n m`` / ``a tail head weight`` format."""
    n = m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise InputError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] != "ndfas":
                raise InputError(f"line {lineno}: expected 'p ndfas <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer header") from None
            if n < 0 or m < 0:
                raise InputError(f"line {lineno}: negative sizes in header")
        elif parts[0] == "a":
            if n is None:
                raise InputError(f"line {lineno}: arc before header")
            if len(parts) != 4:
                raise InputError(f"line {lineno}: expected 'a <tail> <head> <weight>'")
            try:
                u, v, w = (int(x) for x in parts[1:])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer field") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise InputError(f"line {lineno}: vertex id out of range 1..{n}")
            if u == v:
                raise InputError(f"line {lineno}: loop at vertex {u}")
            edges.append((u - 1, v - 1, w))
        else:
            raise InputError(f"line {lineno}: unknown line type {parts[0]!r}")
    if n is None:
        raise InputError("missing 'p ndfas' header")
    if len(edges) != m:
        raise InputError(f"header announces {m} arcs, found {len(edges)}")
    return WeightedDigraph.from_edges(n, edges)


def format_ndfas(g, comments=()):
    lines = [f"c {c}" for c in comments]
    lines.append(f"p ndfas {g.n} {g.m}")
    lines += [f"a {a.tail + 1} {a.head + 1} {a.weight}" for a in g.arcs]
    return "\n".join(lines) + "\n"


def read_ndfas(path):
    with open(path) as fh:
        return parse_ndfas(fh.read())


def write_ndfas(g, path, comments=()):
    with open(path, "w") as fh:
        fh.write(format_ndfas(g, comments))


# --------------------------------------------------------------------------
# potentials and cycle detection

def _kept(g, removed):
    if not removed:
        return g.arcs
    return [a for a in g.arcs if a.id not in removed]


def _bellman_ford(g, removed=()):
    """Distances from a virtual source joined to every vertex by 0-arcs.

    Returns ``(dist, None)`` on success and ``(None, vertex)`` if a negative
    cycle is reachable, where ``vertex`` was relaxed in round n.
    """
    arcs = _kept(g, removed)
    dist = [0] * g.n
    for _ in range(g.n + 1):
        changed = None
        for a in arcs:
            d = dist[a.tail] + a.weight
            if d < dist[a.head]:
                dist[a.head] = d
                changed = a.head
        if changed is None:
            return dist, None
    return None, changed


def has_negative_cycle(g, removed=()):
    return _bellman_ford(g, removed)[0] is None


def build_feasible_potential(g, removed=()):
    """Integral potential with ``pi(u) - pi(v) + w >= 0`` on every kept arc.

    Values are shortest distances from a zero-weight super-source, hence <= 0.
    Returns None when a negative cycle remains.
    """
    dist, _ = _bellman_ford(g, removed)
    if dist is None:
        return None
    # dist(v) <= dist(u) + w  <=>  pi(u) - pi(v) + w >= 0 with pi = dist
    return Potential(tuple(dist))


def is_feasible_potential(g, pi, removed=()):
    return all(pi[a.tail] - pi[a.head] + a.weight >= 0 for a in _kept(g, removed))


def verify_solution(g, arc_ids, k):
    arc_ids = set(arc_ids)
    bad = [i for i in arc_ids if not (isinstance(i, (int, np.integer)) and 0 <= i < g.m)]
    if bad:
        raise InputError(f"unknown arc id(s): {sorted(bad, key=str)}")
    pi = build_feasible_potential(g, arc_ids)
    return VerifyReport(len(arc_ids) <= k, pi is not None, pi)


def strong_components(g, removed=()):
    """Strongly connected components, each sorted, ordered by minimum vertex."""
    succ = [[] for _ in range(g.n)]
    for a in _kept(g, removed):
        succ[a.tail].append(a.head)
    index = [None] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    stack, comps = [], []
    counter = 0
    for root in range(g.n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] is None:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    low[work[-1][0]] = min(low[work[-1][0]], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(sorted(comp))
    comps.sort(key=lambda c: c[0])
    return comps


# --------------------------------------------------------------------------
# shortest negative cycle

def _weight_matrix(g, removed):
    W = np.full((g.n, g.n), INF, dtype=np.int64)
    for a in _kept(g, removed):
        if a.weight < W[a.tail, a.head]:
            W[a.tail, a.head] = a.weight
    return W


def _minplus(A, B):
    C = (A[:, :, None] + B[None, :, :]).min(axis=1)
    np.minimum(C, INF, out=C)
    return C


def negative_cycle_length(g, removed=(), method="squaring"):
    """Length (arc count) of a shortest negative cycle, or None.

    ``squaring`` uses min-plus powers of ``W + I`` with binary lifting;
    ``stepwise`` grows exact-length walk matrices one arc at a time.
    """
    if g.n == 0:
        return None
    W = _weight_matrix(g, removed)
    if method == "stepwise":
        D = W
        for length in range(1, g.n + 1):
            if D.diagonal().min() < 0:
                return length
            D = _minplus(D, W)
        return None
    if method != "squaring":
        raise ValueError(f"unknown method {method!r}")
    P = W.copy()
    np.fill_diagonal(P, np.minimum(P.diagonal(), 0))
    powers = [P]  # powers[j] = walks with at most 2**j arcs
    while (1 << len(powers)) <= g.n:
        powers.append(_minplus(powers[-1], powers[-1]))
    cur = np.full_like(W, INF)
    np.fill_diagonal(cur, 0)
    steps = 0
    for j in reversed(range(len(powers))):
        if steps + (1 << j) > g.n:
            continue
        cand = _minplus(cur, powers[j])
        if cand.diagonal().min() >= 0:
            cur, steps = cand, steps + (1 << j)
    return steps + 1 if steps + 1 <= g.n else None


def shortest_negative_cycle(g, removed=()):
    """A negative cycle with the fewest arcs, or None.

    Among all shortest negative cycles the one returned has the smallest
    arc-id sequence after rotating it to start at its smallest arc id.
    """
    removed = frozenset(removed)
    if not has_negative_cycle(g, removed):
        return None
    W = _weight_matrix(g, removed)
    walks = [None, W]  # walks[j]: min weight of a walk with exactly j arcs
    L = None
    for length in range(1, g.n + 1):
        if walks[length].diagonal().min() < 0:
            L = length
            break
        walks.append(_minplus(walks[length], W))
    assert L is not None, "Bellman-Ford and walk DP disagree"
    kept = sorted(_kept(g, removed), key=lambda a: a.id)
    # any negative closed walk with exactly L arcs is a simple cycle, so the
    # smallest arc lying on one starts the canonical answer
    back = walks[L - 1] if L > 1 else None
    first = None
    for a in kept:
        rest = 0 if L == 1 else back[a.head, a.tail]
        if rest < INF and a.weight + rest < 0:
            first = a
            break
    assert first is not None
    allowed = [a for a in kept if a.id > first.id]
    target = first.tail
    tails = np.array([a.tail for a in allowed], dtype=np.int64)
    heads = np.array([a.head for a in allowed], dtype=np.int64)
    wts = np.array([a.weight for a in allowed], dtype=np.int64)
    # to_target[j][x]: min weight of an allowed walk x -> target with j arcs
    to_target = [np.full(g.n, INF, dtype=np.int64)]
    to_target[0][target] = 0
    for _ in range(L - 1):
        prev = to_target[-1]
        cur = np.full(g.n, INF, dtype=np.int64)
        if len(allowed):
            cand = np.minimum(prev[heads] + wts, INF)
            np.minimum.at(cur, tails, cand)
        to_target.append(cur)
    out_allowed = [[] for _ in range(g.n)]
    for a in allowed:
        out_allowed[a.tail].append(a)
    path = [first.id]
    total = first.weight
    at = first.head
    for remaining in range(L - 1, 0, -1):
        for a in out_allowed[at]:
            rest = to_target[remaining - 1][a.head]
            if rest < INF and total + a.weight + rest < 0:
                path.append(a.id)
                total += a.weight
                at = a.head
                break
        else:  # pragma: no cover
            raise AssertionError("cycle reconstruction failed")
    assert at == target and total < 0
    return Cycle(tuple(path), int(total))


def cycle_is_valid(g, cycle):
    """Closed, vertex-simple and of the stated weight."""
    ids = cycle.arc_ids
    if not ids:
        return False
    arcs = [g.arcs[i] for i in ids]
    for x, y in zip(arcs, arcs[1:] + arcs[:1]):
        if x.head != y.tail:
            return False
    tails = [a.tail for a in arcs]
    return len(set(tails)) == len(tails) and sum(a.weight for a in arcs) == cycle.weight
