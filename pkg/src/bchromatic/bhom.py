"""b-homomorphisms: verification, composition, product lifts and the link to b-colourings."""

from __future__ import annotations

from dataclasses import dataclass

from .coloring import Coloring, is_b_coloring
from .exact import DEFAULT_BUDGET, SearchResult, exists_b_coloring
from .graph import Graph, GraphError, bits, complete
from .lexprod import lex_product


class BHomError(ValueError):
    pass


@dataclass(frozen=True)
class BHomMap:
    source: Graph
    target: Graph
    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.mapping) != self.source.n:
            raise BHomError(f"map covers {len(self.mapping)} vertices, source has {self.source.n}")
        for x in self.mapping:
            if not 0 <= x < self.target.n:
                raise BHomError(f"image {x} outside target vertices 0..{self.target.n - 1}")

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def image_of(self, mask: int) -> int:
        out = 0
        for v in bits(mask):
            out |= 1 << self.mapping[v]
        return out


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violating_edge: tuple[int, int] | None = None
    uncovered: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_b_homomorphism(f: BHomMap) -> Verdict:
    """Edges must map to edges, and every target vertex x needs a preimage u with f(N(u)) = N(x)."""
    src, tgt = f.source, f.target
    for u, v in src.edges():
        if not tgt.has_edge(f(u), f(v)):
            return Verdict(False, violating_edge=(u, v))
    covered = 0
    for u in range(src.n):
        x = f(u)
        if not covered >> x & 1 and f.image_of(src.adj[u]) == tgt.adj[x]:
            covered |= 1 << x
    for x in range(tgt.n):
        if not covered >> x & 1:
            return Verdict(False, uncovered=x)
    return Verdict(True)


def identity(g: Graph) -> BHomMap:
    return BHomMap(g, g, tuple(range(g.n)))


def compose(f1: BHomMap, f2: BHomMap) -> BHomMap:
    """f2 after f1, for f1: F -> G and f2: G -> H."""
    if f1.target != f2.source:
        raise BHomError("middle graphs differ: target of the first map is not the source of the second")
    return BHomMap(f1.source, f2.target, tuple(f2(x) for x in f1.mapping))


def lift_left(g: Graph, f: BHomMap) -> BHomMap:
    """G[F] -> G[H] by (u, v) -> (u, f(v))."""
    src = lex_product(g, f.source)
    tgt = lex_product(g, f.target)
    mapping = tuple(tgt.index(u, f(v)) for u, v in map(src.pair, range(src.n)))
    return BHomMap(src.graph, tgt.graph, mapping)


def lift_right(f: BHomMap, g: Graph) -> BHomMap:
    """F[G] -> H[G] by (u, v) -> (f(u), v)."""
    src = lex_product(f.source, g)
    tgt = lex_product(f.target, g)
    mapping = tuple(tgt.index(f(u), v) for u, v in map(src.pair, range(src.n)))
    return BHomMap(src.graph, tgt.graph, mapping)


def coloring_to_bhom(g: Graph, c: Coloring) -> BHomMap:
    """A b-colouring with m colours read as a map onto K_m (colour i -> vertex i-1)."""
    ok, bad = is_b_coloring(g, c)
    if not ok:
        raise BHomError(f"not a b-colouring: colour {bad} has no b-vertex")
    return BHomMap(g, complete(c.k), tuple(x - 1 for x in c.colors))


def bhom_to_coloring(f: BHomMap) -> Coloring:
    t = f.target
    if t.num_edges != t.n * (t.n - 1) // 2:
        raise BHomError("target graph is not complete")
    return Coloring(tuple(x + 1 for x in f.mapping), t.n)


def find_bhom_to_complete(g: Graph, m: int, budget: int | None = DEFAULT_BUDGET) -> tuple[BHomMap | None, SearchResult]:
    """A b-homomorphism g -> K_m, found through a b-colouring with m colours."""
    res = exists_b_coloring(g, m, budget=budget)
    if res.coloring is None:
        return None, res
    return coloring_to_bhom(g, res.coloring), res


def blow_up_bhom(h: Graph, sizes: list[int], extra_edges: list[tuple[int, int, int, int]]) -> BHomMap:
    """Build F -> H by replacing vertex x of H with ``sizes[x]`` independent copies.

    Copy 0 of every vertex is joined to copy 0 of each neighbour, so those
    copies witness the b-condition; ``extra_edges`` adds (x, i, y, j) edges
    between copy i of x and copy j of y for adjacent x, y.
    """
    if len(sizes) != h.n or any(s < 1 for s in sizes):
        raise GraphError("every vertex needs at least one copy")
    offset = [0]
    for s in sizes:
        offset.append(offset[-1] + s)
    edges = set()
    for x, y in h.edges():
        edges.add((offset[x], offset[y]))
    for x, i, y, j in extra_edges:
        if not h.has_edge(x, y):
            raise GraphError(f"{x} and {y} are not adjacent in the target")
        edges.add((offset[x] + i, offset[y] + j))
    mapping = tuple(x for x in range(h.n) for _ in range(sizes[x]))
    return BHomMap(Graph.from_edges(offset[-1], edges), h, mapping)
