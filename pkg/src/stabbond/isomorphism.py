"""Isomorphism of bond multigraphs, with vertex and color exchanges.

The full test runs joint signature refinement over vertices and colors of
both graphs, then individualizes one vertex (later one color) at a time and
backtracks. Every refinement step is invariant under isomorphism, so the
search is exact; the node budget only bounds running time.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from .bonds import ColorMultigraph, CompactMultigraph
from .config import BudgetExceeded, limits


@dataclass(frozen=True)
class Isomorphism:
    vertex_map: dict[int, int]
    color_map: dict[int, int]


class _Graph:
    """Bond multigraph re-indexed to dense vertex and color ids."""

    def __init__(self, g: ColorMultigraph):
        self.vertices = list(g.vertices)
        vid = {v: k for k, v in enumerate(self.vertices)}
        used = sorted({c for e in g.edges for c in (e.a, e.b)})
        self.colors = used
        cid = {c: k for k, c in enumerate(used)}
        self.edges = sorted((vid[e.i], vid[e.j], cid[e.a], cid[e.b]) for e in g.edges)
        self.nv, self.nc = len(self.vertices), len(used)
        self.vinc = [[] for _ in range(self.nv)]
        self.cinc = [[] for _ in range(self.nc)]
        for i, j, a, b in self.edges:
            self.vinc[i].append((j, a, b))
            self.vinc[j].append((i, a, b))
            self.cinc[a].append((b, i, j))
            self.cinc[b].append((a, i, j))
        self.edge_set = set(self.edges)


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


class _Search:
    def __init__(self, g1: _Graph, g2: _Graph, budget: int, rounds: int | None):
        self.g1, self.g2 = g1, g2
        self.budget = budget
        self.rounds = rounds
        self.nodes = 0

    def _signatures(self, g: _Graph, vc, cc):
        vs = [
            (vc[v], tuple(sorted((_pair(cc[a], cc[b]), vc[u]) for u, a, b in g.vinc[v])))
            for v in range(g.nv)
        ]
        cs = [
            (cc[c], tuple(sorted((_pair(vc[i], vc[j]), cc[d]) for d, i, j in g.cinc[c])))
            for c in range(g.nc)
        ]
        return vs, cs

    def refine(self, vc1, cc1, vc2, cc2):
        """Refine jointly; returns new class lists or None on a histogram mismatch."""
        count = len(set(vc1)) + len(set(cc1))
        step = 0
        while True:
            vs1, cs1 = self._signatures(self.g1, vc1, cc1)
            vs2, cs2 = self._signatures(self.g2, vc2, cc2)
            if Counter(vs1) != Counter(vs2) or Counter(cs1) != Counter(cs2):
                return None
            vnames = {s: k for k, s in enumerate(sorted(set(vs1)))}
            cnames = {s: k for k, s in enumerate(sorted(set(cs1)))}
            vc1 = [vnames[s] for s in vs1]
            vc2 = [vnames[s] for s in vs2]
            cc1 = [cnames[s] for s in cs1]
            cc2 = [cnames[s] for s in cs2]
            new = len(vnames) + len(cnames)
            step += 1
            if new == count or (self.rounds is not None and step >= self.rounds):
                return vc1, cc1, vc2, cc2
            count = new

    def run(self, vc1, cc1, vc2, cc2):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"isomorphism search exceeded {self.budget} nodes")
        refined = self.refine(vc1, cc1, vc2, cc2)
        if refined is None:
            return None
        vc1, cc1, vc2, cc2 = refined
        cell = self._pick(vc1)
        target = "v"
        if cell is None:
            cell = self._pick(cc1)
            target = "c"
        if cell is None:
            return self._finish(vc1, cc1, vc2, cc2)
        if target == "v":
            x = vc1.index(cell)
            fresh = max(vc1) + 1
            for y in (k for k, c in enumerate(vc2) if c == cell):
                n1, n2 = list(vc1), list(vc2)
                n1[x] = n2[y] = fresh
                found = self.run(n1, cc1, n2, cc2)
                if found:
                    return found
        else:
            x = cc1.index(cell)
            fresh = max(cc1) + 1
            for y in (k for k, c in enumerate(cc2) if c == cell):
                n1, n2 = list(cc1), list(cc2)
                n1[x] = n2[y] = fresh
                found = self.run(vc1, n1, vc2, n2)
                if found:
                    return found
        return None

    @staticmethod
    def _pick(classes):
        sizes = Counter(classes)
        multi = [c for c, s in sizes.items() if s > 1]
        if not multi:
            return None
        return min(multi, key=lambda c: (sizes[c], c))

    def _finish(self, vc1, cc1, vc2, cc2):
        vmap = {x: vc2.index(c) for x, c in enumerate(vc1)}
        cmap = {x: cc2.index(c) for x, c in enumerate(cc1)}
        for i, j, a, b in self.g1.edges:
            i2, j2 = _pair(vmap[i], vmap[j])
            a2, b2 = _pair(cmap[a], cmap[b])
            if (i2, j2, a2, b2) not in self.g2.edge_set:
                return None
        return vmap, cmap


def multigraph_isomorphic(
    g1: ColorMultigraph,
    g2: ColorMultigraph,
    vertex_map: Mapping[int, int] | None = None,
    budget: int | None = None,
    rounds: int | None = None,
) -> Isomorphism | None:
    """Find vertex and color bijections carrying the bonds of ``g1`` onto ``g2``.

    ``vertex_map`` pins some or all vertex images (labels of ``g1`` to labels
    of ``g2``). Returns None when no isomorphism exists and raises
    :class:`BudgetExceeded` when the search gives up. Colors that carry no
    bond are left out of the color map.
    """
    lim = limits()
    budget = lim.search_budget if budget is None else budget
    rounds = lim.refinement_rounds if rounds is None else rounds
    a, b = _Graph(g1), _Graph(g2)
    if (a.nv, a.nc, len(a.edges)) != (b.nv, b.nc, len(b.edges)):
        return None
    if sorted(g1.weights().values()) != sorted(g2.weights().values()):
        return None
    vc1, vc2 = [0] * a.nv, [0] * b.nv
    if vertex_map:
        for k, (src, dst) in enumerate(sorted(vertex_map.items())):
            vc1[a.vertices.index(src)] = k + 1
            vc2[b.vertices.index(dst)] = k + 1
    found = _Search(a, b, budget, rounds).run(vc1, [0] * a.nc, vc2, [0] * b.nc)
    if found is None:
        return None
    vmap, cmap = found
    return Isomorphism(
        {a.vertices[x]: b.vertices[y] for x, y in vmap.items()},
        {a.colors[x]: b.colors[y] for x, y in cmap.items()},
    )


def compact_isomorphic(
    c1: CompactMultigraph, c2: CompactMultigraph, budget: int | None = None
) -> dict[int, int] | None:
    """Weighted-graph isomorphism on bond counts, by pruned permutation search."""
    budget = limits().search_budget if budget is None else budget
    v1, v2 = list(c1.vertices), list(c2.vertices)
    if len(v1) != len(v2):
        return None
    if len(v1) > 10:
        raise BudgetExceeded("compact isomorphism limited to 10 vertices")

    def weight(c, u, v):
        return c.weights.get(_pair(u, v), 0)

    def profile(c, vs, v):
        return tuple(sorted(weight(c, v, u) for u in vs if u != v))

    p1 = {v: profile(c1, v1, v) for v in v1}
    p2 = {v: profile(c2, v2, v) for v in v2}
    if sorted(p1.values()) != sorted(p2.values()):
        return None
    order = sorted(v1, key=lambda v: (sum(1 for u in v1 if p1[u] == p1[v]), v))
    nodes = 0
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(depth: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"compact isomorphism exceeded {budget} nodes")
        if depth == len(order):
            return True
        v = order[depth]
        for u in v2:
            if u in used or p2[u] != p1[v]:
                continue
            if all(weight(c1, v, w) == weight(c2, u, mapping[w]) for w in order[:depth]):
                mapping[v] = u
                used.add(u)
                if extend(depth + 1):
                    return True
                del mapping[v]
                used.discard(u)
        return False

    return dict(mapping) if extend(0) else None

