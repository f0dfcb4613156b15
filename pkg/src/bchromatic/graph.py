"""Immutable simple graphs, named generators, DIMACS I/O and structural predicates."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence


class GraphError(ValueError):
    pass


class DimacsError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Adjacency is stored as one integer bitmask per vertex, which keeps the
    exact solvers cheap and makes the value hashable.
    """

    n: int
    adj: tuple[int, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.adj) != self.n:
            raise GraphError("adjacency length does not match vertex count")
        full = (1 << self.n) - 1
        for v, mask in enumerate(self.adj):
            if mask >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            if mask & ~full:
                raise GraphError(f"vertex {v} has a neighbour out of range")
            rest = mask
            while rest:
                low = rest & -rest
                u = low.bit_length() - 1
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"asymmetric edge {v}-{u}")
                rest ^= low

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None
    ) -> Graph:
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), tuple(labels) if labels is not None else None)

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [popcount(m) for m in self.adj]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def num_edges(self) -> int:
        return sum(popcount(m) for m in self.adj) // 2

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def induced(self, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
        """Induced subgraph, renumbered; also returns the new->old vertex map."""
        old = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(old)}
        edges = [(pos[u], pos[w]) for u in old for w in bits(self.adj[u]) if w in pos and u < w]
        return Graph.from_edges(len(old), edges), old

    def complement(self) -> Graph:
        full = self.vertex_mask
        return Graph(self.n, tuple(full & ~m & ~(1 << v) for v, m in enumerate(self.adj)))

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        mask = to_mask(vs)
        return all((self.adj[v] | 1 << v) & mask == mask for v in vs)

    def is_stable(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        mask = to_mask(vs)
        return all(self.adj[v] & mask == 0 for v in vs)

    def components(self, within: int | None = None) -> list[int]:
        """Connected components (as bitmasks) of the subgraph induced by ``within``."""
        remaining = self.vertex_mask if within is None else within
        comps = []
        while remaining:
            low = remaining & -remaining
            comp = low
            frontier = low
            while frontier:
                v = (frontier & -frontier).bit_length() - 1
                frontier &= frontier - 1
                new = self.adj[v] & remaining & ~comp
                comp |= new
                frontier |= new
            comps.append(comp)
            remaining &= ~comp
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


popcount = int.bit_count


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


# ---------------------------------------------------------------- DIMACS I/O


def parse_dimacs(text: str) -> Graph:
    n = None
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise DimacsError(lineno, "duplicate problem line")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise DimacsError(lineno, f"malformed header {line!r}")
            try:
                n, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(lineno, f"malformed header {line!r}") from None
            if n < 0 or declared < 0:
                raise DimacsError(lineno, "negative counts in header")
        elif parts[0] == "e":
            if n is None:
                raise DimacsError(lineno, "edge line before problem line")
            if len(parts) != 3:
                raise DimacsError(lineno, f"malformed edge line {line!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsError(lineno, f"malformed edge line {line!r}") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError(lineno, f"endpoint out of range 1..{n}")
            if u == v:
                raise DimacsError(lineno, f"self-loop at vertex {u}")
            edges.add((min(u, v) - 1, max(u, v) - 1))
        else:
            raise DimacsError(lineno, f"unknown line type {parts[0]!r}")
    if n is None:
        raise DimacsError(0, "missing problem line")
    return Graph.from_edges(n, sorted(edges))


def write_dimacs(g: Graph, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p edge {g.n} {g.num_edges}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- generators


def complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def hypercube(d: int) -> Graph:
    n = 1 << d
    return Graph.from_edges(n, [(v, v ^ (1 << i)) for v in range(n) for i in range(d) if v < v ^ (1 << i)])


def crown(p: int) -> Graph:
    """K_{p,p} minus a perfect matching; sides are 0..p-1 and p..2p-1, i matched to p+i."""
    if p < 2:
        raise GraphError("crown needs p >= 2")
    return Graph.from_edges(2 * p, [(i, p + j) for i in range(p) for j in range(p) if i != j])


def spider(c: int, kind: str = "thin") -> Graph:
    """Spider with empty head: clique 0..c-1, stable set c..2c-1, s_i paired with c_i."""
    if c < 2:
        raise GraphError("spider needs a clique of size >= 2")
    if kind not in ("thin", "thick"):
        raise GraphError(f"unknown spider kind {kind!r}")
    edges = list(combinations(range(c), 2))
    for i in range(c):
        for j in range(c):
            if (i == j) == (kind == "thin"):
                edges.append((j, c + i))
    return Graph.from_edges(2 * c, edges)


PENDANT_TREE_LABELS = ("v1", "v2", "x", "v3", "v4", "a1", "a2", "b", "d", "e1", "e2")


def pendant_tree() -> Graph:
    """The 11-vertex tree on the spine v1 v2 x v3 v4 with pendants 2,1,0,1,2.

    Vertices 0..4 are the spine in path order; pendants follow.
    """
    spine = [(0, 1), (1, 2), (2, 3), (3, 4)]
    pendants = [(0, 5), (0, 6), (1, 7), (3, 8), (4, 9), (4, 10)]
    return Graph.from_edges(11, spine + pendants, PENDANT_TREE_LABELS)


def random_chordal(n: int, seed: int = 0, max_clique: int = 4, density: float = 0.7) -> Graph:
    """Random chordal graph grown as a subtree of a k-tree.

    Each new vertex attaches to a random subset of a randomly chosen existing
    clique (itself a clique), so every vertex is simplicial when added and the
    reversed insertion order is a perfect elimination order.
    """
    rng = random.Random(seed)
    if n <= 0:
        return Graph.empty(0)
    adj = [0] * n
    cliques: list[list[int]] = [[0]]
    for v in range(1, n):
        base = rng.choice(cliques)
        attach = [u for u in base if rng.random() < density]
        if not attach and rng.random() < 0.85:
            attach = [rng.choice(base)]
        attach = attach[: max_clique - 1]
        for u in attach:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        cliques.append(attach + [v])
    return Graph(n, tuple(adj))


def union(g: Graph, h: Graph) -> Graph:
    shifted = tuple(m << g.n for m in h.adj)
    return Graph(g.n + h.n, g.adj + shifted)


def join(g: Graph, h: Graph) -> Graph:
    gm, hm = g.vertex_mask, h.vertex_mask << g.n
    return Graph(g.n + h.n, tuple(m | hm for m in g.adj) + tuple((m << g.n) | gm for m in h.adj))


def spider_with_head(c: int, kind: str, head: Graph) -> Graph:
    """Spider on clique/stable parts of size ``c`` with ``head`` complete to the clique."""
    body = spider(c, kind)
    g = union(body, head)
    adj = list(g.adj)
    head_mask = head.vertex_mask << body.n
    clique_mask = (1 << c) - 1
    for v in range(c):
        adj[v] |= head_mask
    for r in bits(head_mask):
        adj[r] |= clique_mask
    return Graph(g.n, tuple(adj))


def random_p4_sparse(n: int, seed: int = 0) -> Graph:
    """Random P4-sparse graph built bottom-up by union, join and spider operations."""
    rng = random.Random(seed)
    return _random_p4_sparse(n, rng)


def _random_p4_sparse(n: int, rng: random.Random) -> Graph:
    if n <= 1:
        return Graph.empty(n)
    ops = ["union", "join"]
    if n >= 4:
        ops.append("spider")
    op = rng.choice(ops)
    if op == "spider":
        c = rng.randint(2, n // 2)
        kind = rng.choice(["thin", "thick"])
        head = _random_p4_sparse(n - 2 * c, rng)
        return spider_with_head(c, kind, head)
    split = rng.randint(1, n - 1)
    left, right = _random_p4_sparse(split, rng), _random_p4_sparse(n - split, rng)
    return union(left, right) if op == "union" else join(left, right)


def random_graph(n: int, p: float, seed: int = 0) -> Graph:
    rng = random.Random(seed)
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


# family name -> (builder, accepted arities)
FAMILIES = {
    "complete": (complete, (1,)),
    "K": (complete, (1,)),
    "path": (path, (1,)),
    "P": (path, (1,)),
    "cycle": (cycle, (1,)),
    "C": (cycle, (1,)),
    "hypercube": (hypercube, (1,)),
    "Q": (hypercube, (1,)),
    "crown": (crown, (1,)),
    "spider": (spider, (1, 2)),
    "paper_tree_T": (pendant_tree, (0,)),
    "T": (pendant_tree, (0,)),
    "random_chordal": (random_chordal, (1, 2)),
    "random_p4_sparse": (random_p4_sparse, (1, 2)),
    "empty": (Graph.empty, (1,)),
}


def generate(family: str, params: Sequence[int | str] = ()) -> Graph:
    try:
        builder, arities = FAMILIES[family]
    except KeyError:
        raise GraphError(f"unknown graph family {family!r}") from None
    if len(params) not in arities:
        raise GraphError(f"family {family!r} takes {' or '.join(map(str, arities))} parameters, got {len(params)}")
    if family == "spider":
        c = int(params[0])
        kind = str(params[1]) if len(params) > 1 else "thin"
        return spider(c, kind)
    args = [int(p) for p in params]
    if any(a < 0 for a in args):
        raise GraphError("parameters must be non-negative")
    return builder(*args)


# ---------------------------------------------------------------- chordality


@dataclass(frozen=True)
class ChordalityResult:
    chordal: bool
    peo: tuple[int, ...] | None = None
    hole: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.chordal


def mcs_order(g: Graph) -> list[int]:
    """Maximum cardinality search visit order, ties broken by smallest index."""
    weight = [0] * g.n
    visited = 0
    order = []
    for _ in range(g.n):
        best = -1
        for v in range(g.n):
            if not visited >> v & 1 and (best < 0 or weight[v] > weight[best]):
                best = v
        order.append(best)
        visited |= 1 << best
        for u in bits(g.adj[best] & ~visited):
            weight[u] += 1
    return order


def is_peo(g: Graph, order: Sequence[int]) -> bool:
    """Every vertex's later neighbours form a clique."""
    if sorted(order) != list(range(g.n)):
        return False
    later = g.vertex_mask
    for v in order:
        later &= ~(1 << v)
        nb = g.adj[v] & later
        for u in bits(nb):
            if (g.adj[u] | 1 << u) & nb != nb:
                return False
    return True


def find_hole(g: Graph) -> tuple[int, ...] | None:
    """An induced cycle of length >= 4, or None if the graph is chordal."""
    for v in range(g.n):
        nb = g.neighbors(v)
        for a, b in combinations(nb, 2):
            if g.has_edge(a, b):
                continue
            allowed = g.vertex_mask & ~(g.adj[v] | 1 << v) | 1 << a | 1 << b
            p = _shortest_path(g, a, b, allowed)
            if p is not None:
                return (v, *p)
    return None


def _shortest_path(g: Graph, src: int, dst: int, allowed: int) -> list[int] | None:
    prev = {src: -1}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            out = [u]
            while prev[out[-1]] >= 0:
                out.append(prev[out[-1]])
            return out[::-1]
        for w in bits(g.adj[u] & allowed):
            if w not in prev:
                prev[w] = u
                queue.append(w)
    return None


def is_chordal(g: Graph) -> ChordalityResult:
    """Return a perfect elimination order, or a chordless cycle witness."""
    peo = tuple(reversed(mcs_order(g)))
    if is_peo(g, peo):
        return ChordalityResult(True, peo=peo)
    hole = find_hole(g)
    if hole is None:  # pragma: no cover - MCS is complete for chordal graphs
        raise AssertionError("MCS failed but no chordless cycle was found")
    return ChordalityResult(False, hole=hole)


def is_hole(g: Graph, cycle_: Sequence[int]) -> bool:
    """Check that ``cycle_`` lists an induced cycle of length >= 4."""
    k = len(cycle_)
    if k < 4 or len(set(cycle_)) != k:
        return False
    for i in range(k):
        for j in range(i + 1, k):
            consecutive = j == i + 1 or (i == 0 and j == k - 1)
            if g.has_edge(cycle_[i], cycle_[j]) != consecutive:
                return False
    return True


# ---------------------------------------------------------------- cliques and degree bound


class BudgetExceeded(RuntimeError):
    """A search ran out of its node budget; the answer is unknown."""

    def __init__(self, what: str, nodes: int):
        super().__init__(f"{what}: budget of {nodes} search nodes exhausted")
        self.nodes = nodes


def clique_number(g: Graph, budget: int | None = 2_000_000) -> tuple[int, tuple[int, ...]]:
    """Exact maximum clique by branch and bound with a greedy colouring bound."""
    best: list[int] = []
    nodes = 0

    def colour_bound(cand: int) -> list[tuple[int, int]]:
        # greedy sequential colouring; returns (vertex, colour number) in ascending colour
        order = []
        colour = 0
        rest = cand
        while rest:
            colour += 1
            avail = rest
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~(g.adj[v] | 1 << v)
                rest &= ~(1 << v)
                order.append((v, colour))
        return order

    def expand(current: list[int], cand: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded("clique_number", budget)
        for v, col in reversed(colour_bound(cand)):
            if len(current) + col <= len(best):
                return
            current.append(v)
            nxt = cand & g.adj[v]
            if nxt:
                expand(current, nxt)
            elif len(current) > len(best):
                best = list(current)
            current.pop()
            cand &= ~(1 << v)

    if g.n:
        expand([], g.vertex_mask)
    return len(best), tuple(sorted(best))


def m_degree_bound(g: Graph) -> int:
    """Largest k such that at least k vertices have degree at least k-1."""
    degs = sorted(g.degrees(), reverse=True)
    m = 0
    for i, d in enumerate(degs, start=1):
        if d >= i - 1:
            m = i
        else:
            break
    return m


# ---------------------------------------------------------------- P4-sparseness


def induced_p4s(g: Graph) -> list[tuple[int, ...]]:
    out = []
    for quad in combinations(range(g.n), 4):
        if _is_p4(g, quad):
            out.append(quad)
    return out


def _is_p4(g: Graph, quad: Sequence[int]) -> bool:
    mask = to_mask(quad)
    degs = sorted(popcount(g.adj[v] & mask) for v in quad)
    return degs == [1, 1, 2, 2]


def is_p4_sparse(g: Graph) -> tuple[bool, tuple[int, ...] | None]:
    """True iff no 5 vertices induce two or more P4s; otherwise a witness 5-set."""
    by_triple: dict[tuple[int, ...], tuple[int, ...]] = {}
    for quad in induced_p4s(g):
        for triple in combinations(quad, 3):
            other = by_triple.get(triple)
            if other is not None:
                return False, tuple(sorted(set(other) | set(quad)))
            by_triple[triple] = quad
    return True, None
