from __future__ import annotations

import random

from hypothesis import strategies as st

from bchromatic.coloring import Coloring, is_miss1_b_coloring
from bchromatic.graph import Graph


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 7) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, chosen) if keep])


def random_proper(g: Graph, k: int, rng: random.Random) -> Coloring | None:
    """A uniformly greedy proper colouring with palette 1..k, or None if it got stuck."""
    order = list(range(g.n))
    rng.shuffle(order)
    col = [0] * g.n
    for v in order:
        taken = {col[u] for u in g.neighbors(v)}
        options = [c for c in range(1, k + 1) if c not in taken]
        if not options:
            return None
        col[v] = rng.choice(options)
    return Coloring(tuple(col), k)


def random_miss1(g: Graph, k: int, rng: random.Random, tries: int = 30) -> Coloring | None:
    """A proper colouring with colour 1 present whose other colours all own a b*-vertex."""
    for _ in range(tries):
        c = random_proper(g, k, rng)
        if c is not None and 1 in c.colors and is_miss1_b_coloring(g, c)[0]:
            return c
    return None
