"""Tree decompositions, nice tree decompositions and treedepth.

Everything works on the underlying simple undirected graph.  Treewidth uses
an exact branch-and-bound over elimination orderings on small graphs and the
min-fill heuristic otherwise.  Treedepth is exact up to ``cap`` vertices per
connected component.
"""
from dataclasses import dataclass, field

from .errors import InputError

EXACT_TW_LIMIT = 14
EXACT_TD_LIMIT = 20


@dataclass
class TreeDecomposition:
    bags: list            # list of frozensets
    edges: list           # list of (i, j) index pairs, forming a tree

    @property
    def width(self):
        return max((len(b) for b in self.bags), default=0) - 1


@dataclass
class NiceNode:
    kind: str             # leaf | introduce | forget | join
    bag: frozenset
    vertex: int | None = None
    children: tuple = ()


@dataclass
class NiceTreeDecomposition:
    nodes: list
    root: int

    @property
    def width(self):
        return max(len(x.bag) for x in self.nodes) - 1

    @property
    def bags(self):
        return [x.bag for x in self.nodes]

    @property
    def edges(self):
        return [(i, c) for i, x in enumerate(self.nodes) for c in x.children]

    def postorder(self):
        order, stack = [], [(self.root, False)]
        while stack:
            i, done = stack.pop()
            if done:
                order.append(i)
                continue
            stack.append((i, True))
            for c in reversed(self.nodes[i].children):
                stack.append((c, False))
        return order


@dataclass
class TreedepthDecomposition:
    parent: list          # parent[v] or -1 for roots
    depth: int
    exact: bool = True
    levels: list = field(default_factory=list)


def _adjacency(g):
    if hasattr(g, "underlying_adjacency"):
        return [frozenset(s) for s in g.underlying_adjacency()]
    n, edges = g
    adj = [set() for _ in range(n)]
    for u, v in edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return [frozenset(s) for s in adj]


# --------------------------------------------------------------------------
# elimination orderings

def _min_fill_order(adj):
    adj = [set(s) for s in adj]
    alive = set(range(len(adj)))
    order = []
    while alive:
        best = None
        for v in sorted(alive):
            nb = list(adj[v])
            fill = 0
            for i in range(len(nb)):
                for j in range(i + 1, len(nb)):
                    if nb[j] not in adj[nb[i]]:
                        fill += 1
            key = (fill, len(nb), v)
            if best is None or key < best[0]:
                best = (key, v)
        v = best[1]
        _eliminate(adj, v)
        alive.discard(v)
        order.append(v)
    return order


def _eliminate(adj, v):
    nb = list(adj[v])
    for x in nb:
        adj[x].discard(v)
        adj[x].update(y for y in nb if y != x)
    adj[v] = set()


def _order_width(adj, order):
    adj = [set(s) for s in adj]
    width = -1
    for v in order:
        width = max(width, len(adj[v]))
        _eliminate(adj, v)
    return width


def _exact_order(adj):
    """Optimal elimination ordering by depth-first branch and bound."""
    n = len(adj)
    masks = [sum(1 << u for u in adj[v]) for v in range(n)]
    start = _min_fill_order(adj)
    best = [_order_width(adj, start), list(start)]
    seen = {}

    def lower(ms, alive):
        # degeneracy of the remaining graph
        ms = dict((v, ms[v] & alive) for v in _bits(alive))
        lb = 0
        while ms:
            v = min(ms, key=lambda x: bin(ms[x]).count("1"))
            lb = max(lb, bin(ms[v]).count("1"))
            bit = 1 << v
            del ms[v]
            for u in ms:
                ms[u] &= ~bit
        return lb

    def rec(ms, alive, width, prefix):
        if width >= best[0]:
            return
        cnt = bin(alive).count("1")
        if cnt - 1 <= width:
            best[0], best[1] = width, prefix + list(_bits(alive))
            return
        if seen.get(alive, n + 1) <= width:
            return
        seen[alive] = width
        if max(width, lower(ms, alive)) >= best[0]:
            return
        cands = list(_bits(alive))
        # a simplicial vertex can always be eliminated first
        for v in cands:
            nb = ms[v] & alive
            if all((ms[u] | (1 << u)) & nb == nb for u in _bits(nb)):
                cands = [v]
                break
        cands.sort(key=lambda v: bin(ms[v] & alive).count("1"))
        for v in cands:
            nb = ms[v] & alive
            deg = bin(nb).count("1")
            nw = max(width, deg)
            if nw >= best[0]:
                continue
            new = list(ms)
            for u in _bits(nb):
                new[u] = (new[u] | nb) & ~(1 << u) & ~(1 << v)
            rec(new, alive & ~(1 << v), nw, prefix + [v])

    rec(masks, (1 << n) - 1, -1, [])
    return best[1]


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _decomposition_from_order(adj, order):
    n = len(adj)
    if n == 0:
        return TreeDecomposition([frozenset()], [])
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(s) for s in adj]
    bags, parent_vertex = [], []
    for v in order:
        higher = set(adj[v])
        bags.append(frozenset(higher | {v}))
        parent_vertex.append(min(higher, key=pos.get) if higher else None)
        _eliminate(adj, v)
    edges = []
    roots = []
    for i, v in enumerate(order):
        p = parent_vertex[i]
        if p is None:
            roots.append(i)
        else:
            edges.append((i, pos[p]))
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return _contract_subset_bags(bags, edges)


def _contract_subset_bags(bags, edges):
    """Merge every bag into a tree neighbour that contains it."""
    nbr = [set() for _ in bags]
    for a, b in edges:
        nbr[a].add(b)
        nbr[b].add(a)
    alive = set(range(len(bags)))
    changed = True
    while changed:
        changed = False
        for a in sorted(alive):
            b = next((b for b in sorted(nbr[a]) if bags[a] <= bags[b]), None)
            if b is None:
                continue
            for c in nbr[a] - {b}:
                nbr[c].discard(a)
                nbr[c].add(b)
                nbr[b].add(c)
            nbr[b].discard(a)
            nbr[a] = set()
            alive.discard(a)
            changed = True
    keep = sorted(alive)
    idx = {old: i for i, old in enumerate(keep)}
    new_edges = sorted({(min(idx[a], idx[b]), max(idx[a], idx[b]))
                        for a in keep for b in nbr[a]})
    return TreeDecomposition([bags[i] for i in keep], new_edges)


def compute_tree_decomposition(g, exact_limit=EXACT_TW_LIMIT):
    adj = _adjacency(g)
    if len(adj) <= exact_limit:
        order = _exact_order(adj)
    else:
        order = _min_fill_order(adj)
    return _decomposition_from_order(adj, order)


# --------------------------------------------------------------------------
# nice form

def make_nice(td, root=0):
    """Nice tree decomposition with empty leaf and root bags, same width."""
    k = len(td.bags)
    nbr = [[] for _ in range(k)]
    for a, b in td.edges:
        nbr[a].append(b)
        nbr[b].append(a)
    nodes = []

    def new(kind, bag, vertex=None, children=()):
        nodes.append(NiceNode(kind, frozenset(bag), vertex, tuple(children)))
        return len(nodes) - 1

    def chain(child, src, dst):
        """Forget src - dst, then introduce dst - src, above ``child``."""
        cur, bag = child, set(src)
        for v in sorted(src - dst):
            bag.discard(v)
            cur = new("forget", bag, v, [cur])
        for v in sorted(dst - src):
            bag.add(v)
            cur = new("introduce", bag, v, [cur])
        return cur

    # iterative post-order over the rooted tree
    parent = {root: None}
    order, stack = [], [root]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in nbr[x]:
            if y not in parent:
                parent[y] = x
                stack.append(y)
    if len(order) != k:
        raise InputError("decomposition edges do not form a tree")
    top = {}
    for x in reversed(order):
        bag = td.bags[x]
        kids = [y for y in nbr[x] if parent.get(y) == x]
        subs = [chain(top[y], td.bags[y], bag) for y in sorted(kids)]
        if not subs:
            subs = [chain(new("leaf", ()), frozenset(), bag)]
        cur = subs[0]
        for other in subs[1:]:
            cur = new("join", bag, None, [cur, other])
        top[x] = cur
    r = chain(top[root], td.bags[root], frozenset())
    return NiceTreeDecomposition(nodes, r)


class Validation(tuple):
    """``(ok, reason)``; truthy when valid."""

    def __new__(cls, ok, reason=""):
        return super().__new__(cls, (ok, reason))

    def __bool__(self):
        return self[0]

    @property
    def reason(self):
        return self[1]


def validate_decomposition(g, dec):
    adj = _adjacency(g)
    n = len(adj)
    bags = dec.bags
    edges = dec.edges
    k = len(bags)
    if k == 0:
        return Validation(False, "no bags")
    if len(edges) != k - 1:
        return Validation(False, "tree must have exactly one edge fewer than bags")
    nbr = [[] for _ in range(k)]
    for a, b in edges:
        nbr[a].append(b)
        nbr[b].append(a)
    seen, stack = {0}, [0]
    while stack:
        x = stack.pop()
        for y in nbr[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != k:
        return Validation(False, "decomposition tree is disconnected")
    for v in range(n):
        if not any(v in b for b in bags):
            return Validation(False, f"vertex {v} is in no bag")
    for u in range(n):
        for v in adj[u]:
            if u < v and not any(u in b and v in b for b in bags):
                return Validation(False, f"edge {{{u}, {v}}} is in no bag")
    for v in range(n):
        holders = {i for i, b in enumerate(bags) if v in b}
        start = next(iter(holders))
        reach, stack = {start}, [start]
        while stack:
            x = stack.pop()
            for y in nbr[x]:
                if y in holders and y not in reach:
                    reach.add(y)
                    stack.append(y)
        if reach != holders:
            return Validation(False, f"bags containing vertex {v} are not connected")
    if isinstance(dec, NiceTreeDecomposition):
        if dec.nodes[dec.root].bag:
            return Validation(False, "root bag is not empty")
        for i, x in enumerate(dec.nodes):
            ch = [dec.nodes[c].bag for c in x.children]
            if x.kind == "leaf":
                ok = not ch and not x.bag
            elif x.kind == "introduce":
                ok = len(ch) == 1 and x.vertex not in ch[0] and x.bag == ch[0] | {x.vertex}
            elif x.kind == "forget":
                ok = len(ch) == 1 and x.vertex in ch[0] and x.bag == ch[0] - {x.vertex}
            elif x.kind == "join":
                ok = len(ch) == 2 and ch[0] == x.bag and ch[1] == x.bag
            else:
                ok = False
            if not ok:
                return Validation(False, f"node {i} violates the {x.kind} rule")
    return Validation(True, "")


# --------------------------------------------------------------------------
# treedepth

def _components(adj_masks, mask):
    out = []
    while mask:
        low = mask & -mask
        comp, frontier = low, low
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new = adj_masks[v] & mask & ~comp
            comp |= new
            frontier |= new
        out.append(comp)
        mask &= ~comp
    return out


def _path_lower_bound(adj_masks, mask):
    """td >= ceil(log2(p + 1)) for any induced path on p vertices (BFS depth)."""
    low = mask & -mask
    seen, frontier, layers = low, low, 0
    while True:
        nxt = 0
        f = frontier
        while f:
            v = (f & -f).bit_length() - 1
            f &= f - 1
            nxt |= adj_masks[v]
        nxt &= mask & ~seen
        if not nxt:
            break
        seen |= nxt
        frontier = nxt
        layers += 1
    return (layers + 1).bit_length()


def _exact_td(adj_masks, comp_mask):
    """Branch and bound over connected vertex sets.

    ``solve(mask, ub)`` returns the exact treedepth when it is below ``ub``
    and otherwise some lower bound that is at least ``ub``.
    """
    exact, lower, choice = {}, {}, {}

    def solve(mask, ub):
        if mask in exact:
            return exact[mask]
        if mask & (mask - 1) == 0:
            exact[mask], choice[mask] = 1, mask.bit_length() - 1
            return 1
        lb = max(lower.get(mask, 1), _path_lower_bound(adj_masks, mask))
        if lb >= ub:
            return lb
        # high-degree vertices first: good separators tighten the bound early
        order = sorted(_bits(mask), key=lambda x: (-bin(adj_masks[x] & mask).count("1"), x))
        best, best_v = ub, None
        for v in order:
            d = 0
            for c in _components(adj_masks, mask & ~(1 << v)):
                d = max(d, solve(c, best - 1))
                if d + 1 >= best:
                    break
            if d + 1 < best:
                best, best_v = d + 1, v
                if best <= lb:
                    break
        if best_v is None:
            lower[mask] = ub
            return ub
        exact[mask], choice[mask] = best, best_v
        return best

    h_depth, h_parent = _heuristic_td(adj_masks, comp_mask)
    if solve(comp_mask, h_depth) >= h_depth:
        return h_depth, h_parent
    parent = {}

    def build(mask, par):
        v = choice[mask]
        parent[v] = par
        for c in _components(adj_masks, mask & ~(1 << v)):
            build(c, v)

    build(comp_mask, -1)
    return exact[comp_mask], parent


def _heuristic_td(adj_masks, comp_mask):
    """Recursive max-degree elimination; an upper bound."""
    parent = {}

    def build(mask, par):
        v = max(_bits(mask), key=lambda x: (bin(adj_masks[x] & mask).count("1"), -x))
        parent[v] = par
        d = 0
        for c in _components(adj_masks, mask & ~(1 << v)):
            d = max(d, build(c, v))
        return d + 1

    return build(comp_mask, -1), parent


def compute_treedepth(g, cap=EXACT_TD_LIMIT):
    adj = _adjacency(g)
    n = len(adj)
    masks = [sum(1 << u for u in adj[v]) for v in range(n)]
    parent = [-1] * n
    depth, exact = 0, True
    for comp in _components(masks, (1 << n) - 1):
        if bin(comp).count("1") <= cap:
            d, par = _exact_td(masks, comp)
        else:
            d, par = _heuristic_td(masks, comp)
            exact = False
        depth = max(depth, d)
        for v, p in par.items():
            parent[v] = p
    return TreedepthDecomposition(parent, depth, exact)


def treedepth_forest_valid(g, dec):
    """Every edge joins an ancestor-descendant pair and the depth is right."""
    adj = _adjacency(g)
    n = len(adj)

    def ancestors(v):
        out = []
        seen = set()
        while dec.parent[v] != -1:
            v = dec.parent[v]
            if v in seen:
                return None
            seen.add(v)
            out.append(v)
        return out

    anc = [ancestors(v) for v in range(n)]
    if any(a is None for a in anc):
        return False
    if n and max(len(a) for a in anc) + 1 != dec.depth:
        return False
    return all(u in anc[v] or v in anc[u] for u in range(n) for v in adj[u])


# --------------------------------------------------------------------------
# PACE-style text

def format_pace_td(td, n):
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, b in enumerate(td.bags):
        lines.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in sorted(b)]))
    for a, b in td.edges:
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def parse_pace_td(text):
    bags, edges, count = {}, [], None
    for raw in text.splitlines():
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "s":
            count = int(parts[2])
        elif parts[0] == "b":
            bags[int(parts[1]) - 1] = frozenset(int(v) - 1 for v in parts[2:])
        else:
            edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
    if count is None or sorted(bags) != list(range(count)):
        raise InputError("malformed tree decomposition text")
    return TreeDecomposition([bags[i] for i in range(count)], edges)
