"""Graph states, named states, reference truncation tables and bond-structure classification."""
from __future__ import annotations

import hashlib
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

from . import dynamics
from .bonds import ColorMultigraph, bonds, compact
from .config import BudgetExceeded
from .group import GroupError, StabilizerState, from_generators, signed_member
from .isomorphism import compact_isomorphic, multigraph_isomorphic
from .pauli import SignedPauli, parse


@dataclass(frozen=True)
class GraphSpec:
    """Simple graph on vertices ``0..n-1``; ``edges`` holds sorted pairs."""

    n: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise GroupError("a graph needs at least one vertex")
        norm = set()
        for a, b in self.edges:
            if a == b:
                raise GroupError(f"self-loop at vertex {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise GroupError(f"edge ({a}, {b}) outside 0..{self.n - 1}")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_json(cls, data: dict) -> GraphSpec:
        """Read ``{"n": int, "edges": [[a, b], ...]}`` with 1-based vertices."""
        n = int(data["n"])
        return cls(n, frozenset((int(a) - 1, int(b) - 1) for a, b in data["edges"]))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[a + 1, b + 1] for a, b in sorted(self.edges)]}

    def neighbors(self, v: int) -> set[int]:
        return {b if a == v else a for a, b in self.edges if v in (a, b)}

    def is_connected(self) -> bool:
        seen, stack = {0}, [0]
        while stack:
            for u in self.neighbors(stack.pop()):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.n


def graph_state(spec: GraphSpec) -> StabilizerState:
    """Generator ``X_v Z_N(v)`` for every vertex, all signs +."""
    gens = []
    for v in range(spec.n):
        letters = ["I"] * spec.n
        letters[v] = "X"
        for u in spec.neighbors(v):
            letters[u] = "Z"
        gens.append(parse("".join(letters)))
    return from_generators(gens)


def graph_state_by_cz(spec: GraphSpec) -> StabilizerState:
    """The same state built as CZ gates on the all-|+> product state."""
    state = from_generators(SignedPauli.single(spec.n, v, "X") for v in range(spec.n))
    for a, b in sorted(spec.edges):
        state = dynamics.apply_cz(state, a, b)
    return state


def path(n: int) -> GraphSpec:
    return GraphSpec(n, frozenset((k, k + 1) for k in range(n - 1)))


def star(n: int) -> GraphSpec:
    return GraphSpec(n, frozenset((0, k) for k in range(1, n)))


def cycle(n: int) -> GraphSpec:
    return GraphSpec(n, frozenset((k, (k + 1) % n) for k in range(n)))


def _unsigned_gens(state: StabilizerState) -> StabilizerState:
    return from_generators([g.unsigned() for g in state.generators], labels=state.labels)


def _relabel(spec_edges: Iterable[tuple[int, int]], n: int) -> GraphSpec:
    return GraphSpec(n, frozenset(spec_edges))


def _tabled_cluster(n: int) -> StabilizerState:
    # path graphs in the column order and local frame of the bundled tables
    if n == 4:
        state = graph_state(path(4))
        for k in (1, 3):
            state = dynamics.apply_local_clifford(state, k, "H")
    else:
        state = graph_state(_relabel([(0, 1), (1, 4), (4, 2), (2, 3)], 5))
        for k in (0, 3, 4):
            state = dynamics.apply_local_clifford(state, k, "HS")
    return _unsigned_gens(state)


NAMES = ("bell", "ghz", "cluster", "cluster_b5", "pentagon")


def named_state(name: str, n: int | None = None) -> StabilizerState:
    """Representative states: ``bell``, ``ghz`` n, ``cluster`` n, ``cluster_b5``, ``pentagon``.

    ``ghz`` uses generators ``X...X`` and neighbouring ``ZZ`` pairs.
    ``cluster`` is the path graph state; for n=4 and n=5 it is given in the
    local frame and qubit order of the bundled truncation tables.
    ``cluster_b5`` is the graph state of a 3-leaf star with one leaf
    extended by a further vertex.
    """
    if name == "bell":
        return from_generators(["+XX", "+ZZ"])
    if name == "ghz":
        n = 3 if n is None else n
        if n < 2:
            raise GroupError("GHZ state needs at least 2 qubits")
        gens = [parse("X" * n)]
        for k in range(n - 1):
            gens.append(SignedPauli.single(n, k, "Z") * SignedPauli.single(n, k + 1, "Z"))
        return from_generators(gens)
    if name == "cluster":
        n = 4 if n is None else n
        if n < 2:
            raise GroupError("cluster state needs at least 2 qubits")
        if n in (4, 5):
            return _tabled_cluster(n)
        return graph_state(path(n))
    if name == "cluster_b5":
        return graph_state(GraphSpec(5, frozenset({(0, 1), (0, 2), (0, 3), (3, 4)})))
    if name == "pentagon":
        return graph_state(cycle(5))
    raise GroupError(f"unknown named state {name!r}; expected one of {NAMES}")


# -- connected graphs -------------------------------------------------------


def _canonical_adjacency(n: int, adj: Sequence[int]) -> int:
    """Smallest adjacency code over vertex orders respecting a degree-based split."""
    deg = [bin(a).count("1") for a in adj]
    key = [(deg[v], tuple(sorted(deg[u] for u in range(n) if adj[v] >> u & 1))) for v in range(n)]
    cells: dict[tuple, list[int]] = {}
    for v in range(n):
        cells.setdefault(key[v], []).append(v)
    ordered = [cells[k] for k in sorted(cells)]
    best = None
    for parts in itertools.product(*(itertools.permutations(c) for c in ordered)):
        order = [v for part in parts for v in part]
        code = 0
        for i in range(n):
            for j in range(i + 1, n):
                code = (code << 1) | (adj[order[i]] >> order[j] & 1)
        if best is None or code > best:
            best = code
    return best


def _all_graphs(n: int) -> list[tuple[int, ...]]:
    """Adjacency lists (bit masks) of all graphs on ``n`` vertices up to isomorphism."""
    if n == 1:
        return [(0,)]
    out: dict[int, tuple[int, ...]] = {}
    for adj in _all_graphs(n - 1):
        for nbrs in range(1 << (n - 1)):
            new = [a | ((nbrs >> v & 1) << (n - 1)) for v, a in enumerate(adj)]
            new.append(nbrs)
            code = _canonical_adjacency(n, new)
            out.setdefault(code, tuple(new))
    return [out[c] for c in sorted(out)]


def enumerate_connected_graphs(n: int) -> list[GraphSpec]:
    """One representative per isomorphism class of connected graphs on ``n`` vertices."""
    if not 1 <= n <= 7:
        raise GroupError("connected-graph enumeration supports 1 <= n <= 7")
    specs = []
    for adj in _all_graphs(n):
        edges = frozenset((i, j) for i in range(n) for j in range(i + 1, n) if adj[i] >> j & 1)
        spec = GraphSpec(n, edges)
        if spec.is_connected():
            specs.append(spec)
    specs.sort(key=lambda s: (len(s.edges), sorted(s.edges)))
    return specs


# -- classification ---------------------------------------------------------


@dataclass
class BondClass:
    representative: GraphSpec
    multigraph: ColorMultigraph
    members: list[GraphSpec]

    def to_json(self) -> dict:
        return {
            "representative": self.representative.to_json(),
            "bond_counts": compact(self.multigraph).to_json(),
            "members": [m.to_json() for m in self.members],
        }


@dataclass
class Classification:
    n: int
    classes: list[BondClass]
    budget_failures: list[tuple[int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "class_count": len(self.classes),
            "classes": [c.to_json() for c in self.classes],
            "budget_failures": [list(p) for p in self.budget_failures],
        }


def _bond_graph(spec: GraphSpec) -> ColorMultigraph:
    return bonds(graph_state(spec))


def classify_bond_structures(
    n: int, workers: int = 1, compact_only: bool = False, budget: int | None = None
) -> Classification:
    """Bucket connected ``n``-vertex graph states by bond-multigraph isomorphism.

    With ``compact_only`` the buckets use bond counts alone, which is only
    known to agree with the full test for n <= 5.
    """
    if not 1 <= n <= 6:
        raise GroupError("classification supports 1 <= n <= 6")
    specs = enumerate_connected_graphs(n)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            graphs = list(pool.map(_bond_graph, specs))
    else:
        graphs = [_bond_graph(s) for s in specs]
    classes: list[BondClass] = []
    failures = []
    for idx, (spec, g) in enumerate(zip(specs, graphs)):
        for ci, cls in enumerate(classes):
            try:
                if compact_only:
                    same = compact_isomorphic(compact(g), compact(cls.multigraph), budget) is not None
                else:
                    same = multigraph_isomorphic(g, cls.multigraph, budget=budget) is not None
            except BudgetExceeded:
                failures.append((idx, ci))
                continue
            if same:
                cls.members.append(spec)
                break
        else:
            classes.append(BondClass(spec, g, [spec]))
    return Classification(n, classes, failures)


# -- fixtures ---------------------------------------------------------------


@dataclass(frozen=True)
class FixtureTable:
    id: str
    title: str
    n: int
    pre: tuple[str, ...]
    struck: tuple[bool, ...]
    operation: dict = field(hash=False)
    post_labels: tuple[int, ...]
    post: tuple[str, ...]
    pre_partition: tuple[tuple[int, ...], ...]
    post_partition: tuple[tuple[int, ...], ...]

    @property
    def kept_rows(self) -> tuple[str, ...]:
        return tuple(r for r, s in zip(self.pre, self.struck) if not s)

    @property
    def struck_rows(self) -> tuple[str, ...]:
        return tuple(r for r, s in zip(self.pre, self.struck) if s)

    def pre_state(self) -> StabilizerState:
        return state_from_rows(self.pre)


def state_from_rows(rows: Iterable[str]) -> StabilizerState:
    """Group generated by unsigned rows, taking + for every independent row.

    Rows dependent on earlier ones are skipped; their signs follow from the
    chosen generators.
    """
    gens: list[SignedPauli] = []
    state = None
    for text in rows:
        p = parse(text).unsigned()
        if state is None or signed_member(state, p) == 0:
            gens.append(p)
            state = from_generators(gens)
    if state is None:
        raise GroupError("no rows given")
    return state


FIXTURE_IDS = (
    "ghz3_x1", "ghz3_z1", "cz_pair_single", "cz_pair_pair",
    "cluster4_z1", "cluster4_x1", "cluster5_z1", "cluster5_x1",
    "cluster5_core1", "cluster5_z5", "cluster5_y5", "pentagon_core1",
)


def _fixture_text(fid: str) -> str:
    return resources.files("stabbond").joinpath("fixtures", f"{fid}.json").read_text()


def load_fixture(fid: str) -> FixtureTable:
    if fid not in FIXTURE_IDS:
        raise KeyError(f"unknown fixture {fid!r}")
    d = json.loads(_fixture_text(fid))
    return FixtureTable(
        id=d["id"],
        title=d["title"],
        n=d["n"],
        pre=tuple(r["letters"] for r in d["pre"]),
        struck=tuple(bool(r.get("struck", False)) for r in d["pre"]),
        operation=d["operation"],
        post_labels=tuple(d["post_labels"]),
        post=tuple(r["letters"] for r in d["post"]),
        pre_partition=tuple(tuple(b) for b in d["pre_partition"]),
        post_partition=tuple(tuple(b) for b in d["post_partition"]),
    )


def fixtures() -> list[FixtureTable]:
    return [load_fixture(f) for f in FIXTURE_IDS]


def fixtures_checksum() -> str:
    h = hashlib.sha256()
    for fid in FIXTURE_IDS:
        h.update(json.dumps(json.loads(_fixture_text(fid)), sort_keys=True).encode())
    return h.hexdigest()
