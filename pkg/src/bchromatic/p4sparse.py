"""Primeval decomposition of P4-sparse graphs and colour-by-colour descent on G[K_l].

Given a b-colouring of G[K_l] with k colours (G P4-sparse), :func:`descend_p4sparse`
removes one colour class while keeping every other class anchored by a vertex
that sees all remaining colours. It works on a shrinking induced subgraph and
a minimal decomposition of it. At each step it either recolours inside a leaf
or cuts the graph down (s-, c- or p-reduction), remembering how to re-insert
the removed vertices. It ends when the colour is gone, or when what remains is
a clique of size k, which certifies that k-1 colours are impossible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .coloring import Coloring, is_b_coloring, is_miss1_b_coloring, is_proper
from .graph import Graph, bits, is_p4_sparse, popcount, to_mask
from .lexprod import blow_up


class NotP4SparseError(ValueError):
    def __init__(self, witness: Sequence[int]):
        super().__init__(f"graph is not P4-sparse: vertices {list(witness)} induce two P4s")
        self.witness = tuple(witness)


class DescentError(RuntimeError):
    """An invariant of the descent broke; carries the offending step number."""

    def __init__(self, step: int, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step


# ---------------------------------------------------------------- spiders


@dataclass(frozen=True)
class SpiderParts:
    clique: tuple[int, ...]
    stable: tuple[int, ...]
    head: tuple[int, ...]
    kind: str
    # stable[i] is the partner of clique[i]: its only neighbour (thin) or only non-neighbour (thick)

    def partner(self, s: int) -> int:
        return self.clique[self.stable.index(s)]


def detect_spider(g: Graph, within: int | None = None) -> SpiderParts | None:
    """Recognise a spider (clique C, stable S, head R) on the vertices ``within``.

    In any spider the stable side is exactly the set of minimum-degree
    vertices, which pins the partition down without search.
    """
    mask = g.vertex_mask if within is None else within
    vs = bits(mask)
    if len(vs) < 4:
        return None
    deg = {v: popcount(g.adj[v] & mask) for v in vs}
    low = min(deg.values())
    stable = [v for v in vs if deg[v] == low]
    t = len(stable)
    if t < 2 or 2 * t > len(vs):
        return None
    smask = to_mask(stable)
    if any(g.adj[s] & smask for s in stable):
        return None
    if low == 1:
        kind = "thin"
        partners = [bits(g.adj[s] & mask)[0] for s in stable]
        clique = partners
    elif low == t - 1:
        kind = "thick"
        cmask = 0
        for s in stable:
            cmask |= g.adj[s] & mask
        clique_set = bits(cmask)
        if len(clique_set) != t:
            return None
        partners = []
        for s in stable:
            missing = bits(cmask & ~g.adj[s])
            if len(missing) != 1:
                return None
            partners.append(missing[0])
        clique = partners
    else:
        return None
    if len(set(partners)) != t:
        return None
    cmask = to_mask(clique)
    if not g.is_clique(clique):
        return None
    head_mask = mask & ~cmask & ~smask
    for r in bits(head_mask):
        if g.adj[r] & cmask != cmask or g.adj[r] & smask:
            return None
    pairs = sorted(zip(clique, stable))
    return SpiderParts(
        tuple(c for c, _ in pairs), tuple(s for _, s in pairs), tuple(bits(head_mask)), kind
    )


# ---------------------------------------------------------------- decomposition tree


@dataclass
class Node:
    op: str | None = None  # union | join | spider, for internal nodes
    children: tuple[Node, Node] | None = None
    leaf: str | None = None  # clique | stable | spider, for leaves
    vertices: tuple[int, ...] = ()
    parts: SpiderParts | None = None

    @property
    def is_leaf(self) -> bool:
        return self.leaf is not None

    def vertex_set(self) -> list[int]:
        if self.is_leaf:
            return list(self.vertices)
        return sorted(self.children[0].vertex_set() + self.children[1].vertex_set())

    def to_json(self) -> dict:
        if self.is_leaf:
            out = {"leaf": self.leaf, "vertices": list(self.vertices)}
            if self.parts is not None:
                out["clique"] = list(self.parts.clique)
                out["stable"] = list(self.parts.stable)
                out["kind"] = self.parts.kind
            return out
        return {"op": self.op, "children": [c.to_json() for c in self.children]}


@dataclass
class PrimevalTree:
    root: Node
    graph: Graph

    def leaves(self) -> list[tuple[Node, Node | None, int]]:
        """Leaves left to right with their parent and depth."""
        out = []

        def walk(node: Node, parent: Node | None, depth: int) -> None:
            if node.is_leaf:
                out.append((node, parent, depth))
            else:
                for child in node.children:
                    walk(child, node, depth + 1)

        walk(self.root, None, 0)
        return out

    def internal_nodes(self) -> Iterator[Node]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            if not node.is_leaf:
                yield node
                stack.extend(node.children)

    def reconstruct_edges(self) -> set[tuple[int, int]]:
        """Rebuild the edge set bottom-up from leaves and operations."""

        def build(node: Node) -> set[tuple[int, int]]:
            if node.is_leaf:
                vs = node.vertices
                if node.leaf == "clique":
                    return {(a, b) for i, a in enumerate(vs) for b in vs[i + 1:]}
                if node.leaf == "stable":
                    return set()
                p = node.parts
                e = {(min(a, b), max(a, b)) for i, a in enumerate(p.clique) for b in p.clique[i + 1:]}
                for c, s in zip(p.clique, p.stable):
                    for c2 in p.clique:
                        if (c2 == c) == (p.kind == "thin"):
                            e.add((min(c2, s), max(c2, s)))
                return e
            left, right = node.children
            e = build(left) | build(right)
            if node.op == "join":
                a, b = left.vertex_set(), right.vertex_set()
            elif node.op == "spider":
                a, b = list(left.parts.clique), right.vertex_set()
            else:
                return e
            e |= {(min(x, y), max(x, y)) for x in a for y in b}
            return e

        return build(self.root)

    def is_minimal(self) -> bool:
        for node in self.internal_nodes():
            left, right = node.children
            if left.is_leaf and right.is_leaf:
                if node.op == "union" and _stable_like(left) and _stable_like(right):
                    return False
                if node.op == "join" and _clique_like(left) and _clique_like(right):
                    return False
        return True

    def to_json(self) -> dict:
        return self.root.to_json()


def _clique_like(node: Node) -> bool:
    return node.leaf == "clique"


def _stable_like(node: Node) -> bool:
    return node.leaf == "stable" or (node.leaf == "clique" and len(node.vertices) == 1)


def _chain(op: str, operands: list[Node]) -> Node:
    node = operands[-1]
    for left in reversed(operands[:-1]):
        node = Node(op=op, children=(left, node))
    return node


def _co_components(g: Graph, mask: int) -> list[int]:
    """Components of the complement restricted to ``mask``."""
    remaining = mask
    comps = []
    while remaining:
        low = remaining & -remaining
        comp = low
        frontier = low
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new = remaining & ~g.adj[v] & ~comp & ~(1 << v)
            comp |= new
            frontier |= new
        comps.append(comp)
        remaining &= ~comp
    return comps


def _build(g: Graph, mask: int) -> Node:
    vs = bits(mask)
    if len(vs) == 1:
        return Node(leaf="clique", vertices=tuple(vs))
    for op, comps, merged_kind in (
        ("union", g.components(mask), "stable"),
        ("join", _co_components(g, mask), "clique"),
    ):
        if len(comps) < 2:
            continue
        singles = [c for c in comps if popcount(c) == 1]
        operands = []
        if singles:
            merged = bits(sum(singles))
            operands.append(Node(leaf=merged_kind if len(merged) > 1 else "clique", vertices=tuple(merged)))
        operands.extend(_build(g, c) for c in comps if popcount(c) > 1)
        if len(operands) == 1:
            return operands[0]
        operands.sort(key=lambda node: min(node.vertex_set()))
        return _chain(op, operands)
    parts = detect_spider(g, mask)
    if parts is None:
        sub, old = g.induced(vs)
        ok, witness = is_p4_sparse(sub)
        raise NotP4SparseError([old[v] for v in witness] if witness else vs)
    body = Node(
        leaf="spider",
        vertices=tuple(sorted(parts.clique + parts.stable)),
        parts=SpiderParts(parts.clique, parts.stable, (), parts.kind),
    )
    if not parts.head:
        return body
    return Node(op="spider", children=(body, _build(g, to_mask(parts.head))))


def primeval_decompose(g: Graph, within: int | None = None) -> PrimevalTree:
    """Minimal primeval decomposition of the subgraph induced by ``within``.

    Disconnected graphs split by union, co-disconnected ones by join
    (isolated vertices / universal vertices merged into one stable / clique
    leaf), and the remaining case is a spider whose head is decomposed in turn.
    """
    mask = g.vertex_mask if within is None else within
    if not mask:
        raise ValueError("cannot decompose an empty graph")
    if within is None:
        ok, witness = is_p4_sparse(g)
        if not ok:
            raise NotP4SparseError(witness)
    return PrimevalTree(_build(g, mask), g)


# ---------------------------------------------------------------- descent


@dataclass(frozen=True)
class CliqueCertificate:
    vertices: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    def verify(self, g: Graph, k: int) -> bool:
        return len(self.vertices) == k and g.is_clique(self.vertices)


@dataclass
class TraceRecord:
    kind: str  # s-reduction | c-reduction | p-reduction | recolor | base
    leaf: tuple[int, ...]
    removed: tuple[int, ...] = ()
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "leaf": list(self.leaf), "removed": list(self.removed), **self.detail}


@dataclass
class ReductionTrace:
    graph: Graph
    ell: int
    k: int
    eliminated: int
    records: list[TraceRecord] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "k": self.k,
            "eliminated": self.eliminated,
            "records": [r.to_json() for r in self.records],
        }


@dataclass
class DescentResult:
    coloring: Coloring | None
    certificate: CliqueCertificate | None
    trace: ReductionTrace

    @property
    def reduced(self) -> bool:
        return self.coloring is not None


class _Descent:
    def __init__(self, g: Graph, ell: int, colors: list[int], k: int, check: bool):
        self.g = g
        self.ell = ell
        self.k = k
        self.psi = colors  # indexed by product vertex u * ell + a
        self.mask = g.vertex_mask
        self.check = check
        self.step = 0
        self.trace_records: list[TraceRecord] = []
        self.tree = primeval_decompose(g)

    # -- helpers on the current product G_i[K_ell]

    def copy(self, u: int) -> range:
        return range(u * self.ell, (u + 1) * self.ell)

    def cols(self, vertices) -> set[int]:
        return {self.psi[w] for u in vertices for w in self.copy(u)}

    def product_neighbour_colours(self, w: int) -> set[int]:
        u, a = divmod(w, self.ell)
        out = {self.psi[x] for x in self.copy(u) if x != w}
        for v in bits(self.g.adj[u] & self.mask):
            out |= {self.psi[x] for x in self.copy(v)}
        return out

    def switch(self, vertices, c1: int, c2: int) -> None:
        for u in vertices:
            for w in self.copy(u):
                if self.psi[w] == c1:
                    self.psi[w] = c2
                elif self.psi[w] == c2:
                    self.psi[w] = c1

    def current_product(self) -> tuple[Graph, list[int], list[int]]:
        sub, old = self.g.induced(bits(self.mask))
        prod = blow_up(sub, self.ell).graph
        colors = [self.psi[u * self.ell + a] for u in old for a in range(self.ell)]
        return prod, old, colors

    def measure(self) -> tuple:
        """(vertices left, leaves holding colour 1 counted per depth from the root,
        clique leaves holding colour 1), compared lexicographically."""
        profile = [0] * (self.g.n + 1)
        cliques = 0
        for leaf, _, depth in self.tree.leaves():
            if 1 in self.cols(leaf.vertices):
                profile[depth] += 1
                cliques += leaf.leaf == "clique"
        return popcount(self.mask), tuple(profile), cliques

    def assert_miss1(self) -> None:
        prod, _, colors = self.current_product()
        c = Coloring(tuple(colors), self.k)
        ok, edge = is_proper(prod, c)
        if not ok:
            raise DescentError(self.step, f"colouring became improper at product edge {edge}")
        ok, witness = is_miss1_b_coloring(prod, c)
        if not ok:
            lost = [i for i, w in witness.items() if w is None]
            raise DescentError(self.step, f"colours {lost} lost every b*-vertex")

    def record(self, kind: str, leaf, removed=(), **detail) -> None:
        self.trace_records.append(TraceRecord(kind, tuple(leaf), tuple(removed), detail))

    def remove(self, vertices) -> None:
        self.mask &= ~to_mask(vertices)
        self.tree = primeval_decompose(self.g, self.mask)

    # -- the main loop

    def run(self) -> tuple[dict[int, int] | None, CliqueCertificate | None, bool]:
        """Returns (reduced colouring on the current product, certificate, base_flag)."""
        if self.check:
            self.assert_miss1()
        while True:
            self.step += 1
            before = self.measure()
            target = None
            for leaf, parent, _ in self.tree.leaves():
                if 1 in self.cols(leaf.vertices):
                    target = (leaf, parent)
                    break
            if target is None:
                gamma = {w: self.psi[w] - 1 for u in bits(self.mask) for w in self.copy(u)}
                return gamma, None, False
            leaf, parent = target
            if leaf.leaf == "stable" and len(leaf.vertices) > 1:
                self.stable_leaf(leaf)
            elif parent is None:
                outcome = self.whole_graph_leaf(leaf)
                if outcome is not None:
                    return outcome
            elif leaf.leaf == "spider":
                self.spider_leaf(leaf, parent)
            else:
                self.clique_leaf(leaf, parent)
            after = self.measure()
            if not after < before:
                raise DescentError(self.step, f"termination measure did not decrease: {before} -> {after}")
            if self.check:
                self.assert_miss1()

    def whole_graph_leaf(self, leaf: Node):
        if leaf.leaf == "clique":
            cert = tuple(w for u in leaf.vertices for w in self.copy(u))
            if len(cert) != self.k:
                raise DescentError(self.step, f"clique of size {len(cert)} coloured with {self.k} colours")
            self.record("clique", leaf.vertices)
            return None, CliqueCertificate(cert), False
        parts = leaf.parts
        omega = self.ell * len(parts.clique)
        if self.k == omega:
            self.record("clique", parts.clique)
            return None, CliqueCertificate(tuple(w for u in parts.clique for w in self.copy(u))), False
        if self.k != omega + 1:
            raise DescentError(self.step, f"spider with clique weight {omega} cannot carry {self.k} colours")
        # C[K_l] rainbow; each stable vertex copies the colours of a clique vertex it misses
        gamma = {}
        for i, u in enumerate(parts.clique):
            for a, w in enumerate(self.copy(u)):
                gamma[w] = i * self.ell + a + 1
        for s in parts.stable:
            src = next(c for c in parts.clique if not self.g.has_edge(c, s))
            for a, w in enumerate(self.copy(s)):
                gamma[w] = gamma[src * self.ell + a]
        self.record("base", leaf.vertices, colors=omega)
        return gamma, None, True

    def stable_leaf(self, leaf: Node) -> None:
        for u in leaf.vertices:
            if 1 not in self.cols([u]):
                continue
            spare = self.cols(leaf.vertices) - self.cols([u])
            if spare:
                c = min(spare)
                self.switch([u], 1, c)
                self.record("recolor", leaf.vertices, vertex=u, swap=[1, c])
                continue
            removed = [v for v in leaf.vertices if v != u]
            self.record("s-reduction", leaf.vertices, removed, keeper=u)
            self.remove(removed)
            return

    def spider_leaf(self, leaf: Node, parent: Node) -> None:
        parts = leaf.parts
        sibling = parent.children[1] if parent.children[0] is leaf else parent.children[0]
        other = sibling.vertex_set()
        # sibling vertices seen by the clique: none under a union, all under a join or
        # when the sibling is the head, only the clique side when the sibling is the body
        clique_mask = to_mask(parts.clique)
        near = [v for v in other if self.g.adj[v] & clique_mask]
        ccols, scols, ncols = self.cols(parts.clique), self.cols(parts.stable), self.cols(near)
        if ccols & ncols:
            raise DescentError(self.step, "clique side shares colours with its complete neighbour")
        if 1 in ccols:
            spare = scols - ccols - ncols
            if not spare:
                head_sibling = parent.op == "spider" and parent.children[0] is leaf
                self.record("p-reduction", leaf.vertices, parts.stable, parent=parent.op,
                            source=min(other) if head_sibling else None,
                            partners={str(s): parts.partner(s) for s in parts.stable})
                self.remove(parts.stable)
                return
            c = min(spare)
            self.switch(leaf.vertices, 1, c)
            self.record("recolor", leaf.vertices, swap=[1, c])
        for s in parts.stable:
            missed = [x for x in parts.clique if not self.g.has_edge(x, s)]
            for w in self.copy(s):
                if self.psi[w] != 1:
                    continue
                around = self.product_neighbour_colours(w)
                options = sorted(self.cols(missed) - around - {1})
                if not options:
                    raise DescentError(self.step, f"no colour of the missed clique fits product vertex {w}")
                self.psi[w] = options[0]
                self.record("recolor", leaf.vertices, vertex=w, color=options[0])

    def clique_leaf(self, leaf: Node, parent: Node) -> None:
        sibling = parent.children[1] if parent.children[0] is leaf else parent.children[0]
        other = sibling.vertex_set()
        if parent.op == "join":
            c = min(self.cols(other))
            if c == 1:
                raise DescentError(self.step, "colour 1 on both sides of a join")
            self.switch(list(leaf.vertices) + other, 1, c)
            self.record("recolor", leaf.vertices, module=sorted(list(leaf.vertices) + other), swap=[1, c])
            return
        leaf_mask = to_mask(leaf.vertices)
        near = [v for v in other if self.g.adj[v] & leaf_mask]
        spare = self.cols(other) - self.cols(list(leaf.vertices) + near) - {1}
        if spare:
            c = min(spare)
            self.switch(leaf.vertices, 1, c)
            self.record("recolor", leaf.vertices, swap=[1, c])
            return
        far = [v for v in other if v not in near]
        if not far:
            raise DescentError(self.step, "c-reduction with nothing to remove")
        detail = {"parent": parent.op}
        if parent.op == "union":
            # remember psi on the removed part and on the clique so the lift can relabel
            detail["palette"] = {
                str(self.psi[w]): w for u in leaf.vertices for w in self.copy(u)
            }
            detail["removed_colors"] = {str(w): self.psi[w] for u in far for w in self.copy(u)}
        else:
            detail["source"] = min(leaf.vertices)
        self.record("c-reduction", leaf.vertices, far, **detail)
        self.remove(far)


def lift_coloring(trace: ReductionTrace, gamma: dict[int, int], upto: int = 0) -> dict[int, int]:
    """Re-insert removed vertices in reverse trace order.

    ``gamma`` maps product vertices of the reduced graph to colours; the result
    covers every product vertex. Removed vertices only gain colours already
    on the palette and only add neighbours, so b-vertices survive each lift.
    """
    ell = trace.ell
    out = dict(gamma)

    def block(u: int) -> range:
        return range(u * ell, (u + 1) * ell)

    for rec in reversed(trace.records[upto:]):
        if rec.kind == "s-reduction":
            keeper = rec.detail["keeper"]
            for v in rec.removed:
                for a in range(ell):
                    out[v * ell + a] = out[keeper * ell + a]
        elif rec.kind == "p-reduction":
            for s in rec.removed:
                src = rec.detail["source"]
                if src is None:
                    src = _first_missed_partner(trace.graph, rec, s)
                for a in range(ell):
                    out[s * ell + a] = out[src * ell + a]
        elif rec.kind == "c-reduction":
            if rec.detail["parent"] == "union":
                relabel = {int(c): out[w] for c, w in rec.detail["palette"].items()}
                for v in rec.removed:
                    for w in block(v):
                        out[w] = relabel[rec.detail["removed_colors"][str(w)]]
            else:
                src = rec.detail["source"]
                for v in rec.removed:
                    for a in range(ell):
                        out[v * ell + a] = out[src * ell + a]
    return out


def _first_missed_partner(g: Graph, rec: TraceRecord, s: int) -> int:
    """A clique vertex of the spider that ``s`` is not adjacent to."""
    kept = [v for v in rec.leaf if v not in rec.removed]
    return next(c for c in kept if not g.has_edge(c, s))


def descend_p4sparse(
    g: Graph, ell: int, psi: Coloring, eliminate: int = 1, check: bool = True
) -> DescentResult:
    """From a b-colouring of G[K_ell] with k colours, build one with k-1 colours
    or a clique of size k in G[K_ell].

    ``eliminate`` names the colour class to remove. With ``check`` every
    intermediate colouring is verified to keep a b*-vertex for every colour
    but the eliminated one.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    ok, witness = is_p4_sparse(g)
    if not ok:
        raise NotP4SparseError(witness)
    prod = blow_up(g, ell).graph
    k = psi.k
    ok, bad = is_b_coloring(prod, psi)
    if not ok:
        raise ValueError(f"input is not a b-colouring of G[K_{ell}]: colour {bad} has no b-vertex")
    if not 1 <= eliminate <= k:
        raise ValueError(f"colour {eliminate} outside 1..{k}")

    def swap(c: int) -> int:
        return 1 if c == eliminate else eliminate if c == 1 else c

    work = _Descent(g, ell, [swap(c) for c in psi.colors], k, check)
    gamma, cert, base = work.run()
    trace = ReductionTrace(g, ell, k, eliminate, work.trace_records)
    if cert is not None:
        certificate = CliqueCertificate(tuple(sorted(cert.vertices)))
        if not certificate.verify(prod, k):
            raise DescentError(work.step, "clique certificate does not verify")
        return DescentResult(None, certificate, trace)
    full = lift_coloring(trace, gamma)
    if base:
        colors = Coloring.of(full[w] for w in range(prod.n)).compressed()
    else:
        # internal colours 2..k are the caller's colours other than ``eliminate``
        colors = Coloring.of(swap(full[w] + 1) for w in range(prod.n)).compressed()
    ok, bad = is_b_coloring(prod, colors)
    if not ok or colors.k != k - 1:
        raise DescentError(work.step, f"lifted colouring is not a b-colouring with {k - 1} colours")
    return DescentResult(colors, None, trace)
