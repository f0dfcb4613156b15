"""Lowering the number of colours of a b-colouring of G[H] by one.

``descend_chordal_product`` handles chordal G when the colour count exceeds
``|V(H)| * omega(G)``; ``descend_complete_left`` handles K_l[H] by reducing a
single copy of H; ``check_final_corollary`` checks which colour counts between
``|V(H)| * chi(G)`` and ``chi_b(G[H])`` are realised.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coloring import Coloring, is_b_coloring
from .exact import (
    DEFAULT_BUDGET,
    Status,
    b_spectrum,
    chromatic_number,
    exists_b_coloring,
)
from .graph import Graph, bits, clique_number, complete, is_chordal
from .lexprod import blow_up, lex_product


class DescentPreconditionError(ValueError):
    pass


class DescentFailure(RuntimeError):
    pass


@dataclass
class ChordalStep:
    position: int  # 1-based position of v_i in the elimination order
    vertex: int
    color: int  # c, the class that loses its b-vertices
    swap_in: int  # c'
    fresh: int  # c''
    neighbour: int  # v_j
    backfill: list[tuple[int, list[int]]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "i": self.position,
            "v_i": self.vertex,
            "c": self.color,
            "c_prime": self.swap_in,
            "c_double_prime": self.fresh,
            "v_j": self.neighbour,
            "backfill": [{"vertex": v, "colors": cs} for v, cs in self.backfill],
        }


@dataclass
class ChordalDescent:
    coloring: Coloring
    step: ChordalStep
    order: tuple[int, ...]


def _b_vertices_within(p: Graph, colors: list[int], alive: int, k: int) -> dict[int, list[int]]:
    """b-vertices of the colouring restricted to the product vertices in ``alive``."""
    out: dict[int, list[int]] = {c: [] for c in range(1, k + 1)}
    for w in bits(alive):
        seen = {colors[x] for x in bits(p.adj[w] & alive)}
        if len(seen) == k - 1:
            out[colors[w]].append(w)
    return out


def descend_chordal_product(g: Graph, h: Graph, psi: Coloring) -> ChordalDescent:
    """A b-colouring of G[H] with k-1 colours from one with k colours.

    Requires G chordal and ``k > |V(H)| * omega(G)``. The elimination order is
    scanned for the first suffix on which the restricted colouring stops being
    a b-colouring; one local switch there removes a colour class, and the
    discarded prefix is re-coloured greedily.
    """
    chordal = is_chordal(g)
    if not chordal.chordal:
        raise DescentPreconditionError(f"left factor is not chordal: hole {chordal.hole}")
    prod = lex_product(g, h)
    p = prod.graph
    k = psi.k
    ok, bad = is_b_coloring(p, psi)
    if not ok:
        raise DescentPreconditionError(f"input is not a b-colouring: colour {bad} has no b-vertex")
    nh = h.n
    omega = clique_number(g)[0]
    if k <= nh * omega:
        raise DescentPreconditionError(f"needs k > |V(H)|*omega(G) = {nh * omega}, got k = {k}")

    order = chordal.peo
    colors = list(psi.colors)
    suffix_masks = [0] * (g.n + 1)
    for pos in range(g.n - 1, -1, -1):
        suffix_masks[pos] = suffix_masks[pos + 1] | prod.copy_mask(order[pos])

    # smallest i with psi_{i+1} no longer a b-colouring; psi_1 is one by assumption
    i = None
    failing = None
    for pos in range(g.n - 1):
        nxt = _b_vertices_within(p, colors, suffix_masks[pos + 1], k)
        missing = [c for c, vs in nxt.items() if not vs]
        if missing:
            i, failing = pos, missing[0]
            break
    if i is None:
        raise DescentFailure("every suffix keeps all b-vertices; impossible for k > |V(H)|")

    vi = order[i]
    alive = suffix_masks[i]
    copy_i = prod.copy_mask(vi)
    here = _b_vertices_within(p, colors, alive, k)[failing]
    owners = {prod.pair(w)[0] for w in here}
    if len(owners) != 1 or vi in owners:
        raise DescentFailure(f"b-vertices of colour {failing} are not confined to one neighbouring copy")
    vj = owners.pop()
    copy_j = prod.copy_mask(vj)

    outer_j = 0
    for u in bits(g.adj[vj] & ~(1 << vi)):
        outer_j |= prod.copy_mask(u)
    outer_j &= alive
    in_i = {colors[w] for w in bits(copy_i)}
    blocked = {colors[w] for w in bits(outer_j)}
    candidates = sorted(in_i - blocked - {failing})
    if not candidates:
        raise DescentFailure(f"no colour of copy {vi} can be moved onto the b-vertices of colour {failing}")
    c1 = candidates[0]

    around_i = copy_i
    for u in bits(g.adj[vi]):
        around_i |= prod.copy_mask(u)
    around_i &= alive
    present = {colors[w] for w in bits(around_i)}
    free = [c for c in range(1, k + 1) if c not in present]
    if not free:
        raise DescentFailure(f"every colour appears around copy {vi}")
    c2 = free[0]

    for w in bits(copy_j):
        if colors[w] == failing:
            colors[w] = c1
        elif colors[w] == c1:
            colors[w] = failing
    for w in bits(copy_i):
        if colors[w] == c1:
            colors[w] = c2

    step = ChordalStep(i + 1, vi, failing, c1, c2, vj)
    # the class of ``failing`` has no b-vertex left; move each member to a missing colour
    for w in bits(alive):
        if colors[w] == failing:
            seen = {colors[x] for x in bits(p.adj[w] & alive)}
            colors[w] = next(c for c in range(1, k + 1) if c != failing and c not in seen)

    for pos in range(i - 1, -1, -1):
        v = order[pos]
        later = 0
        for u in bits(g.adj[v]):
            later |= prod.copy_mask(u)
        later &= suffix_masks[pos + 1]
        seen = {colors[x] for x in bits(later)}
        palette = [c for c in range(1, k + 1) if c != failing and c not in seen]
        if len(palette) < nh:
            raise DescentFailure(f"only {len(palette)} colours free around copy {v}, need {nh}")
        block = prod.copy_of(v)
        for w, c in zip(block, palette):
            colors[w] = c
        step.backfill.append((v, palette[:nh]))

    result = Coloring.of(colors, k).compressed()
    ok, bad = is_b_coloring(p, result)
    if not ok or result.k != k - 1:
        raise DescentFailure(f"switch at position {i + 1} did not give a b-colouring with {k - 1} colours")
    return ChordalDescent(result, step, tuple(order))


# ---------------------------------------------------------------- K_l[H]


@dataclass
class CompleteLeftDescent:
    status: Status
    coloring: Coloring | None
    copy: int | None
    copy_colors: int | None

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "coloring": list(self.coloring.colors) if self.coloring else None,
            "copy": self.copy,
            "copy_colors": self.copy_colors,
        }


def descend_complete_left(
    ell: int, h: Graph, psi: Coloring, budget: int | None = DEFAULT_BUDGET
) -> CompleteLeftDescent:
    """Reduce one copy of H inside K_ell[H] by a colour.

    Copies of H are pairwise complete, so their palettes are disjoint and
    each copy carries a b-colouring of H on its own. The lowest copy using
    more than chi(H) colours is re-coloured with one colour fewer by exact
    search; UNKNOWN is returned if the search gives no answer within budget.
    """
    prod = lex_product(complete(ell), h)
    p = prod.graph
    k = psi.k
    ok, bad = is_b_coloring(p, psi)
    if not ok:
        raise DescentPreconditionError(f"input is not a b-colouring: colour {bad} has no b-vertex")
    chi_h = chromatic_number(h, budget)[0]
    if k <= ell * chi_h:
        raise DescentPreconditionError(f"needs k > ell*chi(H) = {ell * chi_h}, got k = {k}")
    for x in range(ell):
        block = prod.copy_of(x)
        palette = sorted({psi[w] for w in block})
        if len(palette) > chi_h:
            break
    else:  # pragma: no cover - excluded by the counting above
        raise DescentFailure("no copy uses more than chi(H) colours")
    res = exists_b_coloring(h, len(palette) - 1, budget=budget)
    if res.coloring is None:
        return CompleteLeftDescent(Status.UNKNOWN, None, x, len(palette))
    colors = list(psi.colors)
    for v, w in enumerate(block):
        colors[w] = palette[res.coloring[v] - 1]
    result = Coloring.of(colors, k).compressed()
    ok, _ = is_b_coloring(p, result)
    if not ok or result.k != k - 1:
        raise DescentFailure(f"re-coloured copy {x} broke the b-colouring")
    return CompleteLeftDescent(Status.FOUND, result, x, len(palette))


# ---------------------------------------------------------------- corollary check


@dataclass
class CorollaryReport:
    n_h: int
    chi_g: int
    lower: int  # |V(H)| * chi(G)
    chi_b_product: int | None
    chi_b_h: int | None
    chi_b_blowup: int | None  # chi_b(G[K_t]) with t = chi_b(H)
    spectrum: list[int]
    unknown: list[int]
    inclusion: bool | None  # None when inconclusive or vacuous
    applies: bool | None
    gap_interval: tuple[int, int] | None
    gap_empty: bool | None
    continuous: bool | None

    def to_json(self) -> dict:
        return {
            "n_h": self.n_h,
            "chi_g": self.chi_g,
            "lower": self.lower,
            "chi_b_product": self.chi_b_product,
            "chi_b_h": self.chi_b_h,
            "chi_b_blowup": self.chi_b_blowup,
            "spectrum": self.spectrum,
            "unknown": self.unknown,
            "applies": self.applies,
            "inclusion": self.inclusion,
            "gap_interval": list(self.gap_interval) if self.gap_interval else None,
            "gap_empty": self.gap_empty,
            "continuous": self.continuous,
        }


def check_final_corollary(g: Graph, h: Graph, budget: int | None = DEFAULT_BUDGET) -> CorollaryReport:
    if not is_chordal(g).chordal:
        raise DescentPreconditionError("left factor is not chordal")
    chi_g = chromatic_number(g, budget)[0]
    lower = h.n * chi_g
    prod_rep = b_spectrum(lex_product(g, h).graph, budget)
    h_rep = b_spectrum(h, budget)
    chi_b_blowup = None
    if h_rep.chi_b is not None:
        blow_rep = b_spectrum(blow_up(g, h_rep.chi_b).graph, budget)
        chi_b_blowup = blow_rep.chi_b
    top = prod_rep.chi_b
    applies = None if top is None else top >= lower
    inclusion = None
    if applies:
        needed = range(lower, top + 1)
        if any(k in prod_rep.unknown for k in needed):
            inclusion = None
        else:
            inclusion = all(k in prod_rep.spectrum for k in needed)
    gap = None
    gap_empty = None
    if chi_b_blowup is not None:
        gap = (chi_b_blowup, lower)
        gap_empty = lower - chi_b_blowup <= 1
    return CorollaryReport(
        h.n, chi_g, lower, top, h_rep.chi_b, chi_b_blowup, prod_rep.spectrum, prod_rep.unknown,
        inclusion, applies, gap, gap_empty, prod_rep.continuous,
    )
