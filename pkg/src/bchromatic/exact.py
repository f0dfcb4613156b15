"""Exact desk-scale solvers: chromatic number, b-colouring existence, b-spectrum."""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .coloring import Coloring, ColoringError, is_b_coloring, is_proper
from .graph import BudgetExceeded, Graph, clique_number, m_degree_bound, popcount
from .lexprod import blow_up, lex_product

DEFAULT_BUDGET = 5_000_000


class Status(str, enum.Enum):
    FOUND = "found"
    NONE = "none"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SearchResult:
    status: Status
    coloring: Coloring | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


class PrecoloringError(ColoringError):
    pass


class _OutOfBudget(Exception):
    pass


# ---------------------------------------------------------------- proper colouring


def _k_colorable(g: Graph, k: int, budget: int | None) -> tuple[list[int] | None, int]:
    """Backtracking k-colouring with DSATUR order and new-colour symmetry breaking."""
    n, adj = g.n, g.adj
    if n == 0:
        return [], 0
    if k <= 0:
        return None, 0
    col = [-1] * n
    cnt = [[0] * k for _ in range(n)]
    seen = [0] * n
    full = (1 << k) - 1
    nodes = 0
    degs = g.degrees()

    def assign(v: int, c: int, sign: int) -> None:
        bit = 1 << c
        rest = adj[v]
        while rest:
            low = rest & -rest
            w = low.bit_length() - 1
            rest ^= low
            row = cnt[w]
            row[c] += sign
            if sign > 0 and row[c] == 1:
                seen[w] |= bit
            elif sign < 0 and row[c] == 0:
                seen[w] &= ~bit

    def search(uncolored: int, used: int) -> bool:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise _OutOfBudget
        if not uncolored:
            return True
        best, best_key = -1, None
        rest = uncolored
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            dom = full & ~seen[v]
            if not dom:
                return False
            key = (popcount(seen[v]), degs[v])
            if best_key is None or key > best_key:
                best, best_key = v, key
        v = best
        allowed = full & ~seen[v] & (used | ((used + 1) & ~used))
        while allowed:
            low = allowed & -allowed
            c = low.bit_length() - 1
            allowed ^= low
            col[v] = c
            assign(v, c, 1)
            if search(uncolored & ~(1 << v), used | low):
                return True
            assign(v, c, -1)
            col[v] = -1
        return False

    try:
        ok = search(g.vertex_mask, 0)
    except _OutOfBudget:
        raise BudgetExceeded(f"{k}-colourability", budget or 0) from None
    return (col if ok else None), nodes


def chromatic_number(g: Graph, budget: int | None = DEFAULT_BUDGET) -> tuple[int, Coloring]:
    """Exact chromatic number with a witness colouring.

    Starts at the clique number and raises the target until a colouring is
    found, so every value below the answer has been refuted exhaustively.
    """
    if g.n == 0:
        return 0, Coloring((), 0)
    omega, _ = clique_number(g, budget)
    for k in range(max(omega, 1), g.n + 1):
        col, _ = _k_colorable(g, k, budget)
        if col is not None:
            return k, Coloring(tuple(c + 1 for c in col), k)
    raise AssertionError("unreachable: n colours always suffice")


# ---------------------------------------------------------------- b-colouring search


def _validate_precoloring(g: Graph, k: int, pre: Mapping[int, int]) -> None:
    for v, c in pre.items():
        if not 0 <= v < g.n:
            raise PrecoloringError(f"precoloured vertex {v} out of range")
        if not 1 <= c <= k:
            raise PrecoloringError(f"precolour {c} of vertex {v} outside 1..{k}")
    for v, c in pre.items():
        for u, d in pre.items():
            if u < v and d == c and g.has_edge(u, v):
                raise PrecoloringError(f"adjacent vertices {u} and {v} both precoloured {c}")


def exists_b_coloring(
    g: Graph,
    k: int,
    pre: Mapping[int, int] | None = None,
    budget: int | None = DEFAULT_BUDGET,
) -> SearchResult:
    """Search for a b-colouring of ``g`` with exactly ``k`` colours extending ``pre``.

    First one representative vertex is fixed per colour (precoloured colours
    first; the remaining colours are interchangeable, so their representatives
    are taken in increasing candidate order). Afterwards, while some
    representative still misses a colour, the search branches on where that
    colour goes among its uncoloured neighbours, choosing the most constrained
    pair; once every representative is satisfied, the rest is completed by
    DSATUR (highest saturation, then degree, then lowest index). Each node
    checks every representative with a Hall-type counting test.
    """
    pre = dict(pre or {})
    if k < 1:
        raise ValueError("k must be positive")
    _validate_precoloring(g, k, pre)
    n, adj = g.n, g.adj
    if k > n or k > m_degree_bound(g):
        return SearchResult(Status.NONE)
    try:
        if k < clique_number(g)[0]:
            return SearchResult(Status.NONE)
    except BudgetExceeded:
        pass

    full = (1 << k) - 1
    degs = g.degrees()
    candidates = sorted((v for v in range(n) if degs[v] >= k - 1), key=lambda v: (-degs[v], v))
    rank = {v: i for i, v in enumerate(candidates)}
    col = [-1] * n
    cnt = [[0] * k for _ in range(n)]
    seen = [0] * n
    nodes = 0

    def assign(v: int, c: int, sign: int) -> None:
        bit = 1 << c
        rest = adj[v]
        while rest:
            low = rest & -rest
            w = low.bit_length() - 1
            rest ^= low
            row = cnt[w]
            row[c] += sign
            if sign > 0 and row[c] == 1:
                seen[w] |= bit
            elif sign < 0 and row[c] == 0:
                seen[w] &= ~bit

    def support(uncolored: int) -> tuple[bool, int, int]:
        """Check b-vertex feasibility; returns (ok, forced vertex, forced colour)."""
        cover = 0
        once = 0
        twice = 0
        first = [-1] * k
        for v in candidates:
            cv = col[v]
            sv = seen[v]
            if cv >= 0:
                want = full & ~sv & ~(1 << cv)
                if not want:
                    sup = 1 << cv
                else:
                    un = adj[v] & uncolored
                    if popcount(want) > popcount(un):
                        continue
                    avail = 0
                    rest = un
                    while rest:
                        low = rest & -rest
                        avail |= ~seen[low.bit_length() - 1]
                        rest ^= low
                    if want & ~avail:
                        continue
                    sup = 1 << cv
            else:
                free = full & ~sv
                if not free:
                    return False, -1, -1
                un = adj[v] & uncolored
                if popcount(free) - 1 > popcount(un):
                    continue
                avail = 0
                rest = un
                while rest:
                    low = rest & -rest
                    avail |= ~seen[low.bit_length() - 1]
                    rest ^= low
                short = free & ~avail
                if not short:
                    sup = free
                elif short & (short - 1):
                    continue
                else:
                    sup = short
            twice |= once & sup
            new = sup & ~once
            once |= sup
            while new:
                low = new & -new
                first[low.bit_length() - 1] = v
                new ^= low
            cover |= sup
        if cover != full:
            return False, -1, -1
        unique = once & ~twice
        while unique:
            low = unique & -unique
            c = low.bit_length() - 1
            v = first[c]
            if col[v] < 0:
                return True, v, c
            unique ^= low
        return True, -1, -1

    def rep_state(r: int, uncolored: int) -> tuple[bool, int, int]:
        """Can representative ``r`` still see every other colour?

        Returns feasibility plus the missing colour with the fewest uncoloured
        neighbours able to take it, and that neighbour set (-1, 0 when none is missing).
        """
        want = full & ~seen[r] & ~(1 << col[r])
        if not want:
            return True, -1, 0
        un = adj[r] & uncolored
        nwant = popcount(want)
        if nwant > popcount(un):
            return False, -1, 0
        holders = [0] * k
        rest = un
        while rest:
            low = rest & -rest
            rest ^= low
            can = want & ~seen[low.bit_length() - 1]
            while can:
                cl = can & -can
                holders[cl.bit_length() - 1] |= low
                can ^= cl
        best_d, best_h, best_size = -1, 0, n + 1
        union = 0
        while want:
            low = want & -want
            want ^= low
            d = low.bit_length() - 1
            h = holders[d]
            if not h:
                return False, -1, 0
            union |= h
            size = popcount(h)
            if size < best_size:
                best_d, best_h, best_size = d, h, size
        if popcount(union) < nwant:
            return False, -1, 0
        return True, best_d, best_h

    reps = [-1] * k

    def search(uncolored: int, pos: int, last_free_rep: int) -> bool:
        """Phase 1 (pos < k): choose the representative b-vertex of colour
        ``order[pos]``. Phase 2: colour the remaining vertices."""
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise _OutOfBudget
        branch_d, branch_h, branch_size = -1, 0, n + 1
        for c in range(k):
            r = reps[c]
            if r >= 0:
                ok, d, h = rep_state(r, uncolored)
                if not ok:
                    return False
                if d >= 0 and popcount(h) < branch_size:
                    branch_d, branch_h, branch_size = d, h, popcount(h)
        if pos < k:
            if not support(uncolored)[0]:
                return False
            c = order[pos]
            bit = 1 << c
            free_colour = not pinned >> c & 1
            for v in candidates:
                if is_rep[v] or (free_colour and rank[v] <= last_free_rep):
                    continue
                cv = col[v]
                if cv == c:
                    reps[c] = v
                    is_rep[v] = True
                    if search(uncolored, pos + 1, rank[v] if free_colour else last_free_rep):
                        return True
                    reps[c] = -1
                    is_rep[v] = False
                elif cv < 0 and not seen[v] & bit:
                    reps[c] = v
                    is_rep[v] = True
                    col[v] = c
                    assign(v, c, 1)
                    if search(uncolored & ~(1 << v), pos + 1, rank[v] if free_colour else last_free_rep):
                        return True
                    assign(v, c, -1)
                    col[v] = -1
                    reps[c] = -1
                    is_rep[v] = False
            return False
        if not uncolored:
            return True
        if branch_d >= 0:
            # some representative still misses colour branch_d: place it on one of its neighbours
            c = branch_d
            rest = branch_h
            while rest:
                low = rest & -rest
                rest ^= low
                v = low.bit_length() - 1
                col[v] = c
                assign(v, c, 1)
                if search(uncolored & ~low, k, last_free_rep):
                    return True
                assign(v, c, -1)
                col[v] = -1
            return False
        best, best_key = -1, None
        rest = uncolored
        while rest:
            low = rest & -rest
            w = low.bit_length() - 1
            rest ^= low
            if not full & ~seen[w]:
                return False
            key = (popcount(seen[w]), degs[w])
            if best_key is None or key > best_key:
                best, best_key = w, key
        v = best
        allowed = full & ~seen[v]
        while allowed:
            low = allowed & -allowed
            c = low.bit_length() - 1
            allowed ^= low
            col[v] = c
            assign(v, c, 1)
            if search(uncolored & ~(1 << v), k, last_free_rep):
                return True
            assign(v, c, -1)
            col[v] = -1
        return False

    uncolored = g.vertex_mask
    pinned = 0
    for v, c in pre.items():
        col[v] = c - 1
        assign(v, c - 1, 1)
        uncolored &= ~(1 << v)
        pinned |= 1 << (c - 1)
    is_rep = [False] * n
    # Representatives are chosen for precoloured colours first. The other
    # colours are interchangeable, so their representatives are taken in
    # increasing vertex order.
    order = [c for c in range(k) if pinned >> c & 1] + [c for c in range(k) if not pinned >> c & 1]
    try:
        found = search(uncolored, 0, -1)
    except _OutOfBudget:
        return SearchResult(Status.UNKNOWN, None, nodes)
    if not found:
        return SearchResult(Status.NONE, None, nodes)
    result = Coloring(tuple(c + 1 for c in col), k)
    if not is_b_coloring(g, result)[0]:  # pragma: no cover - internal consistency
        raise AssertionError("b-colouring search produced an invalid witness")
    return SearchResult(Status.FOUND, result, nodes)


# ---------------------------------------------------------------- chi_b and spectrum


def b_chromatic_number(g: Graph, budget: int | None = DEFAULT_BUDGET) -> tuple[int, Coloring]:
    """Largest k with a b-colouring, searching down from m(g)."""
    if g.n == 0:
        return 0, Coloring((), 0)
    chi, chi_witness = chromatic_number(g, budget)
    for k in range(m_degree_bound(g), chi, -1):
        res = exists_b_coloring(g, k, budget=budget)
        if res.status is Status.UNKNOWN:
            raise BudgetExceeded(f"b-colouring with {k} colours", budget or 0)
        if res.found:
            return k, res.coloring
    return chi, chi_witness


@dataclass
class SpectrumReport:
    graph_id: str
    n: int
    chi: int
    chi_b: int | None
    m: int
    spectrum: list[int]
    unknown: list[int] = field(default_factory=list)
    witnesses: dict[int, Coloring] = field(default_factory=dict)

    @property
    def decided(self) -> bool:
        return not self.unknown

    @property
    def gaps(self) -> list[int]:
        if self.chi_b is None:
            return []
        present = set(self.spectrum) | set(self.unknown)
        return [k for k in range(self.chi, self.chi_b + 1) if k not in present]

    @property
    def continuous(self) -> bool | None:
        if self.unknown:
            return None
        return not self.gaps

    def to_json(self) -> dict:
        return {
            "graph": self.graph_id,
            "n": self.n,
            "chi": self.chi,
            "chi_b": self.chi_b,
            "m": self.m,
            "spectrum": self.spectrum,
            "continuous": self.continuous,
            "gaps": self.gaps,
            "unknown": self.unknown,
            "witnesses": {str(k): list(c.colors) for k, c in sorted(self.witnesses.items())},
        }


def _search_k(args: tuple[Graph, int, int | None]) -> SearchResult:
    g, k, budget = args
    return exists_b_coloring(g, k, budget=budget)


def b_spectrum(
    g: Graph, budget: int | None = DEFAULT_BUDGET, graph_id: str = "", jobs: int = 1
) -> SpectrumReport:
    """All k in 1..m(g) for which a b-colouring with k colours exists.

    Values below the chromatic number are refuted by the chromatic search and
    the chromatic witness itself is a b-colouring (a class without b-vertex
    could otherwise be eliminated).
    """
    m = m_degree_bound(g)
    if g.n == 0:
        return SpectrumReport(graph_id, 0, 0, None, 0, [])
    chi, chi_witness = chromatic_number(g, budget)
    spectrum = [chi]
    witnesses = {chi: chi_witness}
    unknown = []
    ks = list(range(chi + 1, m + 1))
    if jobs > 1 and len(ks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_search_k, [(g, k, budget) for k in ks]))
    else:
        results = [exists_b_coloring(g, k, budget=budget) for k in ks]
    for k, res in zip(ks, results):
        if res.found:
            spectrum.append(k)
            witnesses[k] = res.coloring
        elif res.status is Status.UNKNOWN:
            unknown.append(k)
    chi_b = None if unknown and max(unknown) > max(spectrum) else max(spectrum)
    return SpectrumReport(graph_id, g.n, chi, chi_b, m, spectrum, unknown, witnesses)


@lru_cache(maxsize=4096)
def cached_spectrum(g: Graph, budget: int | None = DEFAULT_BUDGET) -> SpectrumReport:
    return b_spectrum(g, budget)


def _spectrum_set(g: Graph, budget: int | None) -> set[int]:
    rep = cached_spectrum(g, budget)
    if rep.unknown:
        raise BudgetExceeded(f"b-spectrum of {g!r}", budget or 0)
    return set(rep.spectrum)


def _chi_b(g: Graph, budget: int | None) -> int:
    return max(_spectrum_set(g, budget))


def _chi(g: Graph, budget: int | None) -> int:
    return cached_spectrum(g, budget).chi


# ---------------------------------------------------------------- product relations


@dataclass
class RelationsReport:
    quantities: dict[str, int]
    clauses: dict[str, bool | None]
    failures: list[str]

    @property
    def passed(self) -> bool | None:
        if any(v is None for v in self.clauses.values()):
            return None
        return all(self.clauses.values())

    def to_json(self) -> dict:
        return {
            "quantities": self.quantities,
            "clauses": self.clauses,
            "failures": self.failures,
            "passed": self.passed,
        }


def check_relations(g: Graph, h: Graph, budget: int | None = DEFAULT_BUDGET) -> RelationsReport:
    """Evaluate the chain of bounds relating spectra of G[H], G[K_p] and K_q[H].

    With h = chi(H), g = chi(G), p = chi_b(H), q = chi_b(G):
      (1) chi_b(G[H]) >= chi_b(G[K_p]) >= p*q == chi_b(K_q[H])
      (2) chi(G[H]) == chi(G[K_h]) <= g*h == chi(K_g[H]) <= p*q
      (3) S_b(G[K_x]) is contained in S_b(G[H]) for every x in S_b(H)
    """
    from .graph import complete

    try:
        sh = _spectrum_set(h, budget)
        sg = _spectrum_set(g, budget)
        ch, cg = _chi(h, budget), _chi(g, budget)
        p, q = max(sh), max(sg)
        gh = lex_product(g, h).graph
        q_ = {
            "chi(H)": ch,
            "chi(G)": cg,
            "chi_b(H)": p,
            "chi_b(G)": q,
            "chi_b(G[H])": _chi_b(gh, budget),
            "chi_b(G[K_p])": _chi_b(blow_up(g, p).graph, budget),
            "chi_b(K_q[H])": _chi_b(lex_product(complete(q), h).graph, budget),
            "chi(G[H])": _chi(gh, budget),
            "chi(G[K_h])": _chi(blow_up(g, ch).graph, budget),
            "chi(K_g[H])": _chi(lex_product(complete(cg), h).graph, budget),
        }
        s_gh = _spectrum_set(gh, budget)
        union: set[int] = set()
        for x in sorted(sh):
            union |= _spectrum_set(blow_up(g, x).graph, budget)
    except BudgetExceeded:
        return RelationsReport({}, {"1": None, "2": None, "3": None}, ["inconclusive: budget exhausted"])

    failures = []
    c1 = q_["chi_b(G[H])"] >= q_["chi_b(G[K_p])"] >= p * q == q_["chi_b(K_q[H])"]
    if not c1:
        failures.append(
            f"(1) chi_b(G[H])={q_['chi_b(G[H])']} chi_b(G[K_p])={q_['chi_b(G[K_p])']} "
            f"p*q={p * q} chi_b(K_q[H])={q_['chi_b(K_q[H])']}"
        )
    c2 = q_["chi(G[H])"] == q_["chi(G[K_h])"] <= cg * ch == q_["chi(K_g[H])"] <= p * q
    if not c2:
        failures.append(
            f"(2) chi(G[H])={q_['chi(G[H])']} chi(G[K_h])={q_['chi(G[K_h])']} "
            f"g*h={cg * ch} chi(K_g[H])={q_['chi(K_g[H])']} p*q={p * q}"
        )
    c3 = union <= s_gh
    if not c3:
        failures.append(f"(3) {sorted(union - s_gh)} missing from S_b(G[H])={sorted(s_gh)}")
    q_["p*q"] = p * q
    q_["g*h"] = cg * ch
    return RelationsReport(q_, {"1": c1, "2": c2, "3": c3}, failures)


def proper_check(g: Graph, c: Coloring) -> bool:
    return is_proper(g, c)[0]
