from __future__ import annotations

import random
from collections import Counter
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bchromatic.coloring import Coloring, greedy_b_reduce, is_b_coloring, is_proper
from bchromatic.exact import b_spectrum
from bchromatic.graph import (
    Graph,
    clique_number,
    complete,
    cycle,
    is_p4_sparse,
    join,
    path,
    random_p4_sparse,
    spider,
    spider_with_head,
    union,
)
from bchromatic.lexprod import blow_up
from bchromatic.p4sparse import (
    NotP4SparseError,
    ReductionTrace,
    TraceRecord,
    _Descent,
    descend_p4sparse,
    detect_spider,
    lift_coloring,
    primeval_decompose,
)
from bchromatic.reproduce import P4_SPARSE_EXTRA

from .conftest import graphs, random_miss1, random_proper


def brute_force_spiders(g: Graph) -> list[tuple[frozenset, frozenset]]:
    """Every (C, S) split of g satisfying the spider definition, found by enumeration."""
    out = []
    vs = range(g.n)
    for t in range(2, g.n // 2 + 1):
        for C in combinations(vs, t):
            if not g.is_clique(C):
                continue
            rest = [v for v in vs if v not in C]
            for S in combinations(rest, t):
                if not g.is_stable(S):
                    continue
                R = [v for v in rest if v not in S]
                if any(not g.has_edge(r, c) for r in R for c in C):
                    continue
                if any(g.has_edge(r, s) for r in R for s in S):
                    continue
                for want in (1, t - 1):
                    seen = [[c for c in C if g.has_edge(c, s) == (want == 1)] for s in S]
                    if all(len(x) == 1 for x in seen) and len({x[0] for x in seen}) == t:
                        out.append((frozenset(C), frozenset(S)))
                        break
    return out


def lifted(g: Graph, ell: int, k: int, colors: list[int]) -> tuple[Coloring | None, object, list[TraceRecord]]:
    """Run the descent directly from a miss-1 colouring and lift the result."""
    work = _Descent(g, ell, list(colors), k, True)
    gamma, cert, base = work.run()
    if cert is not None:
        return None, cert, work.trace_records
    full = lift_coloring(ReductionTrace(g, ell, k, 1, work.trace_records), gamma)
    shift = 0 if base else 1
    prod_n = g.n * ell
    return Coloring.of(full[w] + shift for w in range(prod_n)).compressed(), None, work.trace_records


# ---------------------------------------------------------------- spiders


def test_detect_spider_examples():
    parts = detect_spider(path(4))
    assert (parts.clique, parts.stable, parts.head, parts.kind) == ((1, 2), (0, 3), (), "thin")
    g = spider(4, "thick")
    parts = detect_spider(g)
    assert parts.clique == (0, 1, 2, 3) and parts.stable == (4, 5, 6, 7) and parts.kind == "thick"
    assert [parts.partner(s) for s in parts.stable] == [0, 1, 2, 3]
    assert detect_spider(cycle(4)) is None


def test_detect_spider_with_head():
    g = spider_with_head(3, "thin", path(3))
    parts = detect_spider(g)
    assert parts.clique == (0, 1, 2) and parts.head == (6, 7, 8)


@settings(max_examples=200)
@given(graphs(min_n=4, max_n=7))
def test_detect_spider_matches_enumeration(g):
    found = detect_spider(g)
    expected = brute_force_spiders(g)
    assert (found is not None) == bool(expected)
    if found is not None:
        assert (frozenset(found.clique), frozenset(found.stable)) in expected


# ---------------------------------------------------------------- decomposition


def test_decompose_examples():
    tree = primeval_decompose(union(complete(2), complete(2)))
    root = tree.root
    assert root.op == "union"
    assert [c.leaf for c in root.children] == ["clique", "clique"]

    tree = primeval_decompose(path(4))
    assert tree.root.leaf == "spider" and tree.root.vertices == (0, 1, 2, 3)

    tree = primeval_decompose(join(complete(1), path(4)))
    assert tree.root.op == "join"
    assert [c.leaf for c in tree.root.children] == ["clique", "spider"]


def test_decompose_merges_isolated_and_universal_vertices():
    tree = primeval_decompose(Graph.empty(3))
    assert tree.root.leaf == "stable" and tree.root.vertices == (0, 1, 2)
    tree = primeval_decompose(complete(4))
    assert tree.root.leaf == "clique" and tree.root.vertices == (0, 1, 2, 3)


def test_decompose_rejects_non_p4_sparse():
    with pytest.raises(NotP4SparseError) as exc:
        primeval_decompose(path(5))
    assert exc.value.witness == (0, 1, 2, 3, 4)


@settings(max_examples=150)
@given(st.integers(1, 14), st.integers(0, 100_000))
def test_decomposition_reconstructs_and_is_minimal(n, seed):
    g = random_p4_sparse(n, seed=seed)
    tree = primeval_decompose(g)
    assert tree.reconstruct_edges() == set(g.edges())
    assert tree.is_minimal()
    seen = Counter(v for leaf, _, _ in tree.leaves() for v in leaf.vertices)
    assert sorted(seen) == list(range(n)) and set(seen.values()) == {1}
    for leaf, _, _ in tree.leaves():
        if leaf.leaf == "clique":
            assert g.is_clique(leaf.vertices)
        elif leaf.leaf == "stable":
            assert g.is_stable(leaf.vertices)
        else:
            assert not leaf.parts.head


# ---------------------------------------------------------------- descent examples


def test_clique_gives_certificate():
    res = descend_p4sparse(complete(4), 1, Coloring.of((1, 2, 3, 4)))
    assert res.coloring is None
    assert res.certificate.size == 4
    assert res.certificate.verify(complete(4), 4)


def test_thick_spider_gives_certificate():
    g = spider(4, "thick")
    # each stable vertex copies the colour of the one clique vertex it misses
    psi = Coloring.of((1, 2, 3, 4, 1, 2, 3, 4))
    assert is_b_coloring(g, psi)[0]
    res = descend_p4sparse(g, 1, psi)
    assert res.certificate is not None and res.certificate.size == 4
    assert clique_number(g)[0] == 4


def test_base_case_colours_spider_from_its_clique():
    # whole graph is a thick spider with one colour more than its clique
    g = spider(3, "thick")
    out, cert, records = lifted(g, 1, 4, [1, 2, 3, 4, 4, 4])
    assert cert is None
    assert [r.kind for r in records] == ["base"]
    assert out.k == 3 and is_b_coloring(g, out)[0]


def test_descent_errors():
    with pytest.raises(NotP4SparseError):
        descend_p4sparse(path(5), 1, Coloring.of((1, 2, 1, 2, 1)))
    with pytest.raises(ValueError):
        descend_p4sparse(path(4), 1, Coloring.of((1, 2, 3, 1)))
    with pytest.raises(ValueError):
        descend_p4sparse(path(4), 0, Coloring.of((1, 2, 1, 2)))
    with pytest.raises(ValueError):
        descend_p4sparse(path(4), 1, Coloring.of((1, 2, 1, 2)), eliminate=3)


def test_eliminated_colour_can_be_any_class():
    g = union(path(4), path(4))
    prod = blow_up(g, 2).graph
    rep = b_spectrum(prod)
    top = rep.witnesses[rep.chi_b]
    for colour in range(1, top.k + 1):
        res = descend_p4sparse(g, 2, top, eliminate=colour)
        assert res.coloring.k == top.k - 1
        assert is_b_coloring(prod, res.coloring)[0]


# ---------------------------------------------------------------- lifting


def test_empty_trace_lifts_to_itself():
    gamma = {0: 1, 1: 2}
    assert lift_coloring(ReductionTrace(path(2), 1, 3, 1, []), gamma) == gamma


def test_s_reduction_copies_the_keeper():
    g = Graph.empty(2)
    rec = TraceRecord("s-reduction", (0, 1), (1,), {"keeper": 0})
    out = lift_coloring(ReductionTrace(g, 2, 3, 1, [rec]), {0: 2, 1: 3})
    assert out == {0: 2, 1: 3, 2: 2, 3: 3}


def test_p_reduction_under_a_union_lifts():
    # colour 1 sits in the clique of the first P4 and its stable side has no spare colour
    g = union(path(4), path(4))
    out, cert, records = lifted(g, 1, 3, [3, 1, 3, 1, 3, 2, 3, 1])
    assert cert is None
    assert [(r.kind, r.removed) for r in records][0] == ("p-reduction", (0, 3))
    assert records[0].detail["parent"] == "union" and records[0].detail["source"] is None
    assert out.k == 2 and is_b_coloring(g, out)[0]


def test_spider_leaf_as_head_of_a_spider():
    # the head P4 is complete to the body clique {0, 1} only; colour 3 on the body's
    # stable side must not count as a clash with the head's clique
    g = Graph.from_edges(8, [(0, 1), (0, 2), (0, 4), (0, 5), (0, 6), (0, 7), (1, 3), (1, 4),
                             (1, 5), (1, 6), (1, 7), (4, 5), (4, 7), (5, 6)])
    tree = primeval_decompose(g)
    assert tree.root.op == "spider" and tree.root.children[1].leaf == "spider"
    psi = Coloring.of((2, 4, 3, 2, 1, 3, 1, 3))
    res = descend_p4sparse(g, 1, psi)
    assert res.certificate is not None and res.certificate.verify(g, 4)
    assert res.trace.records[0].kind == "p-reduction"
    assert res.trace.records[0].detail["source"] is None


def test_head_leaf_p_reduction_copies_a_missed_clique_vertex():
    g = spider_with_head(2, "thin", path(4))
    # head P4 is 4-5-6-7 with clique {5, 6}; stable 4 misses 6 and stable 7 misses 5
    rec = TraceRecord("p-reduction", (4, 5, 6, 7), (4, 7), {"parent": "spider", "source": None})
    gamma = {0: 1, 1: 2, 2: 2, 3: 1, 5: 3, 6: 4}
    out = lift_coloring(ReductionTrace(g, 1, 5, 1, [rec]), gamma)
    assert out[4] == gamma[6] and out[7] == gamma[5]
    assert is_proper(g, Coloring.of(out[v] for v in range(g.n)))[0]


def test_random_b_colourings_descend():
    done = 0
    for seed in range(400):
        rng = random.Random(seed)
        g = random_p4_sparse(rng.randint(3, 8), seed=seed)
        ell = rng.choice([1, 2])
        prod = blow_up(g, ell).graph
        psi = random_proper(prod, rng.randint(2, prod.n), rng)
        if psi is None:
            continue
        psi = greedy_b_reduce(prod, psi).compressed()
        res = descend_p4sparse(g, ell, psi)
        if res.certificate is not None:
            assert res.certificate.verify(prod, psi.k)
        else:
            assert res.coloring.k == psi.k - 1 and is_b_coloring(prod, res.coloring)[0]
        done += 1
    assert done > 250


def test_random_miss1_starts_cover_every_lift():
    kinds: Counter = Counter()
    cases = []
    for seed in range(150):
        rng = random.Random(seed)
        cases.append((random_p4_sparse(rng.randint(2, 7), seed=seed), rng))
    for seed in range(40):
        # unions of P4s are where a spider leaf loses its stable side under a union
        cases.append((union(path(4), path(4) if seed % 2 else complete(2)), random.Random(seed)))
    for g, rng in cases:
        ell = rng.choice([1, 2])
        prod = blow_up(g, ell).graph
        for k in range(2, prod.n + 1):
            psi = random_miss1(prod, k, rng)
            if psi is None:
                continue
            out, cert, records = lifted(g, ell, k, list(psi.colors))
            kinds.update((r.kind, r.detail.get("parent")) for r in records)
            if cert is not None:
                assert cert.verify(prod, k)
            else:
                assert out.k == k - 1 and is_b_coloring(prod, out)[0]
    for kind in [
        ("s-reduction", None),
        ("c-reduction", "union"),
        ("c-reduction", "spider"),
        ("p-reduction", "join"),
        ("p-reduction", "spider"),
        ("p-reduction", "union"),
        ("base", None),
        ("clique", None),
    ]:
        assert kinds[kind] > 0, kind


# ---------------------------------------------------------------- iterated descent


def spectrum_by_descent(g: Graph, ell: int) -> tuple[list[int], list[int]]:
    prod = blow_up(g, ell).graph
    rep = b_spectrum(prod)
    assert not rep.unknown
    c = rep.witnesses[rep.chi_b]
    reached = [c.k]
    while True:
        res = descend_p4sparse(g, ell, c)
        if res.certificate is not None:
            assert res.certificate.verify(prod, c.k)
            assert c.k == rep.chi
            break
        c = res.coloring
        assert is_b_coloring(prod, c)[0]
        reached.append(c.k)
    return sorted(reached), rep.spectrum


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(0, 100_000), st.sampled_from([1, 2]))
def test_descent_walks_the_whole_spectrum(n, seed, ell):
    g = random_p4_sparse(n, seed=seed)
    reached, spectrum = spectrum_by_descent(g, ell)
    assert reached == spectrum == list(range(spectrum[0], spectrum[-1] + 1))


@pytest.mark.parametrize(
    "g, ell",
    [
        (union(path(4), path(4)), 1),
        (union(path(4), path(4)), 2),
        (union(spider(3, "thin"), complete(2)), 1),
        (spider_with_head(2, "thin", Graph.empty(2)), 2),
        (union(spider(3, "thick"), path(4)), 1),
        *[(random_p4_sparse(n, seed=s), ell) for n, s in P4_SPARSE_EXTRA for ell in (1, 2)],
    ],
)
def test_descent_on_structured_graphs(g, ell):
    reached, spectrum = spectrum_by_descent(g, ell)
    assert reached == spectrum
    assert len(spectrum) >= 1


def test_supplementary_graphs_have_several_colour_counts():
    for n, s in P4_SPARSE_EXTRA:
        g = random_p4_sparse(n, seed=s)
        assert is_p4_sparse(g)[0]
        assert len(spectrum_by_descent(g, 1)[1]) > 1
