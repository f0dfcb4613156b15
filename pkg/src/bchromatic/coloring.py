"""Colourings, b-vertices, miss-1-b-colourings and colour elimination.

Colours are positive integers ``1..k``; a :class:`Coloring` is index-aligned
with the vertices of the graph it colours.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .graph import Graph


class ColoringError(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        for c in self.colors:
            if not 1 <= c <= self.k:
                raise ColoringError(f"colour {c} outside palette 1..{self.k}")

    @classmethod
    def of(cls, colors: Iterable[int], k: int | None = None) -> Coloring:
        cs = tuple(int(c) for c in colors)
        return cls(cs, max(cs, default=0) if k is None else k)

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {c: [] for c in range(1, self.k + 1)}
        for v, c in enumerate(self.colors):
            out[c].append(v)
        return out

    def used(self) -> set[int]:
        return set(self.colors)

    def canonical(self) -> Coloring:
        """Relabel colours by first occurrence in vertex order."""
        relabel: dict[int, int] = {}
        for c in self.colors:
            relabel.setdefault(c, len(relabel) + 1)
        return Coloring(tuple(relabel[c] for c in self.colors), len(relabel))

    def compressed(self) -> Coloring:
        """Order-preserving renumbering of the used colours onto ``1..|used|``."""
        order = {c: i for i, c in enumerate(sorted(self.used()), start=1)}
        return Coloring(tuple(order[c] for c in self.colors), len(order))

    def to_text(self) -> str:
        return " ".join(map(str, self.colors))

    @classmethod
    def from_text(cls, text: str, k: int | None = None) -> Coloring:
        return cls.of((int(tok) for tok in text.split()), k)


def _check_total(g: Graph, c: Coloring) -> None:
    if len(c) != g.n:
        raise ColoringError(f"colouring covers {len(c)} vertices, graph has {g.n}")


def is_proper(g: Graph, c: Coloring) -> tuple[bool, tuple[int, int] | None]:
    _check_total(g, c)
    for u, v in g.edges():
        if c[u] == c[v]:
            return False, (u, v)
    return True, None


def _require_proper(g: Graph, c: Coloring) -> None:
    ok, edge = is_proper(g, c)
    if not ok:
        raise ColoringError(f"colouring is not proper: edge {edge} is monochromatic")


def neighbour_colours(g: Graph, c: Sequence[int], v: int) -> set[int]:
    out = set()
    rest = g.adj[v]
    while rest:
        low = rest & -rest
        out.add(c[low.bit_length() - 1])
        rest ^= low
    return out


def b_vertices(g: Graph, c: Coloring) -> dict[int, list[int]]:
    """For each colour, the vertices of that colour that see every other colour."""
    _require_proper(g, c)
    out: dict[int, list[int]] = {i: [] for i in range(1, c.k + 1)}
    need = c.k - 1
    for v in range(g.n):
        if g.degree(v) >= need and len(neighbour_colours(g, c.colors, v)) == need:
            out[c[v]].append(v)
    return out


def is_b_coloring(g: Graph, c: Coloring) -> tuple[bool, int | None]:
    """True iff every colour 1..k is used and owns a b-vertex; else the first failing colour."""
    bv = b_vertices(g, c)
    for i in range(1, c.k + 1):
        if not bv[i]:
            return False, i
    return True, None


def is_b_star_vertex(g: Graph, c: Sequence[int], k: int, v: int, missing: int = 1) -> bool:
    if c[v] == missing:
        return False
    seen = neighbour_colours(g, c, v)
    return all(i in seen for i in range(1, k + 1) if i != missing and i != c[v])


def is_miss1_b_coloring(
    g: Graph, c: Coloring, missing: int = 1
) -> tuple[bool, dict[int, int | None]]:
    """Every colour other than ``missing`` has a b*-vertex (one seeing all colours but ``missing``).

    Returns the verdict and, per colour, the smallest b*-vertex (None where absent).
    The class of ``missing`` may be empty.
    """
    _require_proper(g, c)
    witness: dict[int, int | None] = {i: None for i in range(1, c.k + 1) if i != missing}
    for v in range(g.n):
        col = c[v]
        if col != missing and witness[col] is None and is_b_star_vertex(g, c.colors, c.k, v, missing):
            witness[col] = v
    return all(w is not None for w in witness.values()), witness


def eliminate_colorless_class(g: Graph, c: Coloring, i: int) -> Coloring:
    """Recolour class ``i`` (which must have no b-vertex) and renumber onto ``1..k-1``.

    Each vertex of the class takes the smallest colour absent from its
    neighbourhood; the class is stable so the order does not matter.
    """
    bv = b_vertices(g, c)
    if not 1 <= i <= c.k:
        raise ColoringError(f"colour {i} outside palette 1..{c.k}")
    if bv[i]:
        raise ColoringError(f"colour {i} has b-vertices {bv[i]}; it cannot be eliminated")
    colors = list(c.colors)
    for v in range(g.n):
        if colors[v] == i:
            seen = neighbour_colours(g, colors, v)
            colors[v] = next(j for j in range(1, c.k + 1) if j != i and j not in seen)
    remap = {j: j if j < i else j - 1 for j in range(1, c.k + 1) if j != i}
    return Coloring(tuple(remap[x] for x in colors), c.k - 1)


def greedy_b_reduce(g: Graph, c: Coloring) -> Coloring:
    """Repeat colour elimination until every class owns a b-vertex."""
    while True:
        ok, bad = is_b_coloring(g, c)
        if ok:
            return c
        c = eliminate_colorless_class(g, c, bad)


def from_mapping(n: int, mapping: Mapping[int, int], k: int | None = None) -> Coloring:
    missing = [v for v in range(n) if v not in mapping]
    if missing:
        raise ColoringError(f"colouring is partial: vertices {missing} uncoloured")
    return Coloring.of((mapping[v] for v in range(n)), k)
