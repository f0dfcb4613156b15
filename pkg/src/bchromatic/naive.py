"""Brute-force reference answers for tiny graphs.

Independent of the search code in :mod:`exact`: spectra come from listing
every set partition of the vertices, b-homomorphisms from listing every map.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator

from .bhom import BHomMap, verify_b_homomorphism
from .graph import Graph, complete


def set_partitions(n: int) -> Iterator[list[int]]:
    """Restricted growth strings of length n (block labels 0, 1, ...)."""
    labels = [0] * n

    def rec(i: int, top: int) -> Iterator[list[int]]:
        if i == n:
            yield list(labels)
            return
        for c in range(top + 2):
            labels[i] = c
            yield from rec(i + 1, max(top, c))

    yield from rec(0, -1)


def naive_spectrum(g: Graph) -> set[int]:
    out = set()
    for labels in set_partitions(g.n):
        if any(labels[u] == labels[v] for u, v in g.edges()):
            continue
        k = max(labels, default=-1) + 1
        seen = [set() for _ in range(g.n)]
        for u, v in g.edges():
            seen[u].add(labels[v])
            seen[v].add(labels[u])
        if all(any(labels[v] == c and len(seen[v]) == k - 1 for v in range(g.n)) for c in range(k)):
            out.add(k)
    return out


def naive_bhom_exists(f_source: Graph, target: Graph) -> bool:
    for mapping in product(range(target.n), repeat=f_source.n):
        if verify_b_homomorphism(BHomMap(f_source, target, mapping)).ok:
            return True
    return False


def naive_bhom_to_complete(g: Graph, m: int) -> bool:
    return naive_bhom_exists(g, complete(m))
