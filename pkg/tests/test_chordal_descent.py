from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bchromatic.chordal_descent import (
    DescentPreconditionError,
    check_final_corollary,
    descend_chordal_product,
    descend_complete_left,
)
from bchromatic.coloring import Coloring, is_b_coloring
from bchromatic.exact import Status, b_spectrum, exists_b_coloring
from bchromatic.graph import (
    clique_number,
    complete,
    cycle,
    is_chordal,
    m_degree_bound,
    path,
    pendant_tree,
    random_chordal,
)
from bchromatic.lexprod import blow_up, lex_product
from bchromatic.reproduce import atlas, tree_precoloring


def descend_every_k_above_bound(g, h) -> int:
    """Descend from a witness at every k > |V(H)| * omega(G); returns how many ran."""
    prod = lex_product(g, h).graph
    omega = clique_number(g)[0]
    runs = 0
    for k in range(h.n * omega + 1, m_degree_bound(prod) + 1):
        res = exists_b_coloring(prod, k)
        assert res.status is not Status.UNKNOWN
        if not res.found:
            continue
        out = descend_chordal_product(g, h, res.coloring)
        assert out.coloring.k == k - 1
        assert is_b_coloring(prod, out.coloring)[0]
        runs += 1
    return runs


# ---------------------------------------------------------------- chordal G[H]


def test_tree_product_descends_from_seven_colours():
    t = pendant_tree()
    prod = blow_up(t, 2).graph
    psi = exists_b_coloring(prod, 7, pre=tree_precoloring()).coloring
    out = descend_chordal_product(t, complete(2), psi)
    assert out.coloring.k == 6 and is_b_coloring(prod, out.coloring)[0]
    step = out.step.to_json()
    assert set(step) == {"i", "v_i", "c", "c_prime", "c_double_prime", "v_j", "backfill"}
    assert step["c"] != step["c_prime"]
    assert out.order == tuple(out.order) and sorted(out.order) == list(range(t.n))
    # the back-filled copies are exactly those before position i
    assert [v for v, _ in out.step.backfill] == list(reversed(out.order[: step["i"] - 1]))
    assert all(len(cs) == 2 for _, cs in out.step.backfill)


def test_path_product_has_nothing_above_the_bound():
    # m(P3[K2]) = 4 = |V(K2)| * omega(P3), so no colouring meets the precondition
    prod = lex_product(path(3), complete(2)).graph
    assert exists_b_coloring(prod, 5).status is Status.NONE
    assert descend_every_k_above_bound(path(3), complete(2)) == 0


def test_precondition_errors():
    with pytest.raises(DescentPreconditionError):
        descend_chordal_product(complete(2), complete(2), Coloring.of((1, 2, 3, 4)))
    with pytest.raises(DescentPreconditionError):
        descend_chordal_product(cycle(4), complete(1), Coloring.of((1, 2, 1, 2)))
    with pytest.raises(DescentPreconditionError):
        descend_chordal_product(path(3), complete(1), Coloring.of((1, 2, 3)))


def test_tree_product_descends_all_the_way_to_the_bound():
    t = pendant_tree()
    prod = blow_up(t, 2).graph
    c = exists_b_coloring(prod, 7, pre=tree_precoloring()).coloring
    while c.k > 2 * clique_number(t)[0]:
        c = descend_chordal_product(t, complete(2), c).coloring
        assert is_b_coloring(prod, c)[0]
    assert c.k == 4


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 8), st.integers(0, 100_000), st.sampled_from(["K1", "K2", "P3"]))
def test_descent_on_random_chordal_products(n, seed, right):
    rng = random.Random(seed)
    g = random_chordal(n, seed=seed, max_clique=rng.randint(2, 3), density=rng.random())
    h = {"K1": complete(1), "K2": complete(2), "P3": path(3)}[right]
    descend_every_k_above_bound(g, h)


def test_descent_runs_on_sparse_chordal_graphs():
    total = 0
    for seed in range(12):
        g = random_chordal(6 + seed % 3, seed=seed, max_clique=2, density=0.3)
        total += descend_every_k_above_bound(g, complete(2))
    assert total > 0


# ---------------------------------------------------------------- K_l[H]


def test_complete_left_examples():
    prod = lex_product(complete(2), path(4)).graph
    rep = b_spectrum(prod)
    assert rep.spectrum == [4]
    with pytest.raises(DescentPreconditionError):
        descend_complete_left(2, path(4), rep.witnesses[4])

    res = descend_complete_left(1, path(5), Coloring.of((1, 2, 3, 1, 2)))
    assert res.status is Status.FOUND and res.copy == 0 and res.copy_colors == 3
    assert res.coloring.k == 2 and is_b_coloring(path(5), res.coloring)[0]

    with pytest.raises(DescentPreconditionError):
        descend_complete_left(3, complete(2), Coloring.of(range(1, 7)))


@pytest.mark.parametrize("ell, spectrum", [(1, [2, 3]), (2, [4, 5, 6]), (3, [6, 7, 8, 9])])
def test_complete_left_walks_the_spectrum(ell, spectrum):
    h = path(5)
    prod = lex_product(complete(ell), h).graph
    rep = b_spectrum(prod)
    assert rep.spectrum == spectrum
    c = rep.witnesses[rep.chi_b]
    reached = [c.k]
    while c.k > rep.chi:
        res = descend_complete_left(ell, h, c)
        assert res.status is Status.FOUND
        c = res.coloring
        assert is_b_coloring(prod, c)[0]
        reached.append(c.k)
    assert reached == spectrum[::-1]


def test_complete_left_on_small_right_factors():
    # at l = 3 only P_5 has more than one colour count, covered above
    for h in atlas(5):
        for ell in (1, 2):
            prod = lex_product(complete(ell), h).graph
            rep = b_spectrum(prod)
            assert rep.continuous
            for k in rep.spectrum[1:]:
                res = descend_complete_left(ell, h, rep.witnesses[k])
                assert res.coloring.k == k - 1


def test_complete_left_reports_unknown_when_search_gives_up(monkeypatch):
    import bchromatic.chordal_descent as cd
    from bchromatic.exact import SearchResult

    h = path(5)
    psi = b_spectrum(lex_product(complete(2), h).graph).witnesses[6]
    assert descend_complete_left(2, h, psi, budget=None).status is Status.FOUND
    monkeypatch.setattr(cd, "exists_b_coloring", lambda *a, **kw: SearchResult(Status.UNKNOWN, None))
    res = descend_complete_left(2, h, psi)
    assert res.status is Status.UNKNOWN and res.coloring is None
    assert res.to_json()["status"] == Status.UNKNOWN.value


# ---------------------------------------------------------------- corollary


def test_corollary_reports():
    rep = check_final_corollary(complete(2), complete(2))
    assert rep.lower == 4 and rep.chi_b_product == 4
    assert rep.applies and rep.inclusion

    rep = check_final_corollary(path(3), complete(2))
    assert (rep.n_h, rep.chi_g, rep.lower) == (2, 2, 4)
    assert rep.applies and rep.inclusion
    assert set(rep.to_json()) >= {"lower", "chi_b_product", "chi_b_blowup", "gap_empty", "continuous"}

    rep = check_final_corollary(pendant_tree(), complete(2))
    assert rep.chi_b_product == 7 and rep.lower == 4
    assert rep.spectrum == [4, 5, 6, 7] and rep.inclusion and rep.continuous

    with pytest.raises(DescentPreconditionError):
        check_final_corollary(cycle(4), complete(2))


def test_corollary_inclusion_on_tiny_chordal_factors():
    chordal = [g for g in atlas(4) if g.n >= 2 and clique_number(g)[0] <= 3]
    chordal = [g for g in chordal if is_chordal(g).chordal]
    for g in chordal:
        for h in atlas(3):
            rep = check_final_corollary(g, h)
            if rep.applies:
                assert rep.inclusion

