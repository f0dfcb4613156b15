from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bchromatic.coloring import (
    Coloring,
    ColoringError,
    b_vertices,
    eliminate_colorless_class,
    from_mapping,
    greedy_b_reduce,
    is_b_coloring,
    is_miss1_b_coloring,
    is_proper,
    neighbour_colours,
)
from bchromatic.graph import complete, cycle, path
from bchromatic.reproduce import atlas

from .conftest import graphs, random_proper


def C(*cs: int) -> Coloring:
    return Coloring.of(cs)


def test_palette_bounds_enforced():
    with pytest.raises(ColoringError):
        Coloring((1, 3), 2)
    with pytest.raises(ColoringError):
        Coloring((0,), 1)


def test_is_proper():
    assert is_proper(complete(2), C(1, 2)) == (True, None)
    assert is_proper(complete(2), C(1, 1)) == (False, (0, 1))
    assert is_proper(path(3), C(1, 2, 1))[0]
    with pytest.raises(ColoringError):
        is_proper(path(3), C(1, 2))


def test_b_vertices():
    assert b_vertices(complete(3), C(1, 2, 3)) == {1: [0], 2: [1], 3: [2]}
    bv = b_vertices(path(5), C(1, 2, 3, 1, 2))
    assert all(bv[i] for i in (1, 2, 3))
    assert bv == {1: [3], 2: [1], 3: [2]}
    assert b_vertices(cycle(4), C(1, 2, 1, 2)) == {1: [0, 2], 2: [1, 3]}
    with pytest.raises(ColoringError):
        b_vertices(complete(2), C(1, 1))


def test_is_b_coloring():
    assert is_b_coloring(complete(3), C(1, 2, 3)) == (True, None)
    ok, bad = is_b_coloring(path(4), C(1, 2, 3, 1))
    assert not ok and bad == 1
    assert is_b_coloring(path(5), C(1, 2, 3, 1, 2))[0]
    # an unused colour in the palette has no b-vertex
    assert is_b_coloring(complete(2), Coloring((1, 2), 3)) == (False, 1)
    assert is_b_coloring(complete(3), Coloring((1, 2, 3), 4)) == (False, 1)
    assert is_b_coloring(complete(3), Coloring((2, 3, 4), 4)) == (False, 1)


def test_miss1():
    ok, witness = is_miss1_b_coloring(path(4), C(2, 3, 2, 1))
    assert ok and witness == {2: 0, 3: 1}
    # empty class 1 leaves a b-colouring on the other colours
    c = Coloring((2, 3, 4, 2, 3), 4)
    assert is_miss1_b_coloring(path(5), c)[0]
    assert is_b_coloring(path(5), Coloring.of(x - 1 for x in c.colors))[0]
    assert is_miss1_b_coloring(path(4), C(1, 2, 3, 1))[0]
    ok, witness = is_miss1_b_coloring(path(4), C(2, 3, 1, 4))
    assert not ok and witness[2] is None


def test_eliminate():
    # in (1,2,3,1) only colour 1 lacks a b-vertex; colour 3 has one at vertex 2
    out = eliminate_colorless_class(path(4), C(1, 2, 3, 1), 1)
    assert out.k == 2 and is_proper(path(4), out)[0]
    assert out == C(2, 1, 2, 1)
    with pytest.raises(ColoringError):
        eliminate_colorless_class(path(4), C(1, 2, 3, 1), 3)
    assert eliminate_colorless_class(path(3), Coloring((1, 3, 1), 3), 2) == C(1, 2, 1)
    for i in (1, 2, 3):
        with pytest.raises(ColoringError):
            eliminate_colorless_class(complete(3), C(1, 2, 3), i)


def test_canonical_and_compressed():
    c = Coloring((3, 1, 3, 5), 5)
    assert c.canonical() == Coloring((1, 2, 1, 3), 3)
    assert c.compressed() == Coloring((2, 1, 2, 3), 3)
    assert Coloring.from_text(c.to_text(), 5) == c
    assert from_mapping(3, {0: 1, 1: 2, 2: 1}) == C(1, 2, 1)
    with pytest.raises(ColoringError):
        from_mapping(3, {0: 1})


def test_b_coloring_implies_miss1_exhaustively():
    for g in atlas(5):
        for k in range(1, 5):
            for cs in product(range(1, k + 1), repeat=g.n):
                c = Coloring(cs, k)
                if not is_proper(g, c)[0]:
                    continue
                if is_b_coloring(g, c)[0]:
                    assert is_miss1_b_coloring(g, c)[0]


@settings(max_examples=150)
@given(graphs(max_n=8), st.integers(1, 6), st.integers(0, 10_000))
def test_b_vertex_definition(g, k, seed):
    c = random_proper(g, k, random.Random(seed))
    if c is None:
        return
    bv = b_vertices(g, c)
    for i in range(1, k + 1):
        for v in bv[i]:
            assert c[v] == i
            assert neighbour_colours(g, c.colors, v) == set(range(1, k + 1)) - {i}
        for v in c.classes()[i]:
            if v not in bv[i]:
                assert neighbour_colours(g, c.colors, v) != set(range(1, k + 1)) - {i}


@settings(max_examples=150)
@given(graphs(max_n=8), st.integers(2, 6), st.integers(0, 10_000))
def test_elimination_keeps_a_proper_colouring(g, k, seed):
    c = random_proper(g, k, random.Random(seed))
    if c is None:
        return
    ok, bad = is_b_coloring(g, c)
    if ok:
        return
    out = eliminate_colorless_class(g, c, bad)
    assert out.k == k - 1 and is_proper(g, out)[0]
    if len(c.used()) == k:
        assert len(out.used()) == k - 1
    final = greedy_b_reduce(g, c)
    assert is_b_coloring(g, final)[0]
