"""Lexicographic products G[H] with row-major vertex numbering (u, v) -> u * n_H + v."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, GraphError, complete


@dataclass(frozen=True)
class ProductGraph:
    graph: Graph
    n_left: int
    n_right: int

    def index(self, u: int, v: int) -> int:
        if not (0 <= u < self.n_left and 0 <= v < self.n_right):
            raise GraphError(f"pair ({u}, {v}) out of range")
        return u * self.n_right + v

    def pair(self, w: int) -> tuple[int, int]:
        return divmod(w, self.n_right)

    def copy_of(self, x: int) -> list[int]:
        """Vertices of the copy x[H]."""
        if not 0 <= x < self.n_left:
            raise GraphError(f"left vertex {x} out of range 0..{self.n_left - 1}")
        return list(range(x * self.n_right, (x + 1) * self.n_right))

    def copy_mask(self, x: int) -> int:
        return ((1 << self.n_right) - 1) << (x * self.n_right)

    def legend(self) -> list[tuple[int, int, int]]:
        return [(w, *self.pair(w)) for w in range(self.graph.n)]

    # Graph-like conveniences so a product can be handed to any algorithm.
    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def adj(self) -> tuple[int, ...]:
        return self.graph.adj


def lex_product(g: Graph, h: Graph) -> ProductGraph:
    """G[H]: (u,v)~(u',v') iff u~u' in G, or u=u' and v~v' in H."""
    if g.n == 0 or h.n == 0:
        raise GraphError("lexicographic product needs two non-empty factors")
    nh = h.n
    block = (1 << nh) - 1
    adj = []
    for u in range(g.n):
        outer = 0
        rest = g.adj[u]
        while rest:
            low = rest & -rest
            outer |= block << ((low.bit_length() - 1) * nh)
            rest ^= low
        for v in range(nh):
            adj.append(outer | h.adj[v] << (u * nh))
    return ProductGraph(Graph(g.n * nh, tuple(adj)), g.n, nh)


def blow_up(g: Graph, ell: int) -> ProductGraph:
    """G[K_ell]."""
    return lex_product(g, complete(ell))


def copy_of(p: ProductGraph, x: int) -> list[int]:
    return p.copy_of(x)
