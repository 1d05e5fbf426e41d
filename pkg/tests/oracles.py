"""Brute-force references computed from element letter strings."""
from __future__ import annotations

import itertools


def anti_sites(a: str, b: str, sites) -> list[int]:
    return [k for k in sites if a[k] != "I" and b[k] != "I" and a[k] != b[k]]


def partition(letters: list[str], labels) -> list[list[int]]:
    """Minimal qubit subsets on which every pair of elements commutes."""
    n = len(labels)
    good = []
    for size in range(1, n + 1):
        for q in itertools.combinations(range(n), size):
            if any(set(q) >= set(g) for g in good):
                continue
            if all(len(anti_sites(a, b, q)) % 2 == 0 for a, b in itertools.combinations(letters, 2)):
                good.append(q)
    return sorted([labels[k] for k in q] for q in good)


def bond_set(letters: list[str], labels) -> set[tuple[int, int, str, str]]:
    blocks = partition(letters, labels)
    block = {v: i for i, b in enumerate(blocks) for v in b}
    out = set()
    for a, b in itertools.combinations([x for x in letters if set(x) != {"I"}], 2):
        for p, q in itertools.combinations(anti_sites(a, b, range(len(labels))), 2):
            if block[labels[p]] == block[labels[q]]:
                out.add((labels[p], labels[q]) + tuple(sorted((a, b))))
    return out


def multigraph_iso(v1, e1, v2, e2) -> bool:
    """Exhaustive search: vertex permutations times color backtracking.

    ``e1``/``e2`` are sets of ``(i, j, a, b)`` with ``i < j`` and ``a < b``.
    """
    if len(v1) != len(v2) or len(e1) != len(e2):
        return False
    c1 = sorted({c for e in e1 for c in e[2:]})
    c2 = sorted({c for e in e2 for c in e[2:]})
    if len(c1) != len(c2):
        return False

    def deg(edges, c):
        return sum(c in e[2:] for e in edges)

    d2 = {c: deg(e2, c) for c in c2}
    d1 = {c: deg(e1, c) for c in c1}
    for perm in itertools.permutations(v2):
        vmap = dict(zip(v1, perm))
        moved = set()
        for i, j, a, b in e1:
            x, y = sorted((vmap[i], vmap[j]))
            moved.add((x, y, a, b))
        by_pair1, by_pair2 = {}, {}
        for i, j, a, b in moved:
            by_pair1.setdefault((i, j), []).append((a, b))
        for i, j, a, b in e2:
            by_pair2.setdefault((i, j), []).append((a, b))
        if {k: len(v) for k, v in by_pair1.items()} != {k: len(v) for k, v in by_pair2.items()}:
            continue
        cmap: dict[int, int] = {}

        def ok(edge_list):
            for i, j, a, b in edge_list:
                if a in cmap and b in cmap:
                    x, y = sorted((cmap[a], cmap[b]))
                    if (i, j, x, y) not in e2:
                        return False
            return True

        def extend(idx):
            if idx == len(c1):
                return True
            a = c1[idx]
            for b in c2:
                if b in cmap.values() or d2[b] != d1[a]:
                    continue
                cmap[a] = b
                if ok(moved) and extend(idx + 1):
                    return True
                del cmap[a]
            return False

        if extend(0):
            return True
    return False
