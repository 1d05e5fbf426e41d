"""Entangled subparts, bonds, color multigraphs and core spaces.

Two qubits ``i, j`` are bonded through a pair of group elements ``A, B``
when both qubits lie in the same entangled subpart and ``A`` anticommutes
with ``B`` at ``i`` and at ``j``. Bond colors are indices into
``state.elements()`` (index 0 is the identity and never carries a bond).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .config import BudgetExceeded, limits
from .group import GroupError, StabilizerState, from_generators, identity_subgroup
from .pauli import restrict, symplectic
from . import dynamics


class PartitionError(RuntimeError):
    """Minimal commuting subsets overlap, so no tensor decomposition exists."""


@dataclass(frozen=True)
class EntangledPartition:
    blocks: tuple[tuple[int, ...], ...]

    @property
    def entangled(self) -> tuple[bool, ...]:
        return tuple(len(b) >= 2 for b in self.blocks)

    @property
    def is_product(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)

    def block_of(self, label: int) -> tuple[int, ...]:
        for b in self.blocks:
            if label in b:
                return b
        raise KeyError(label)

    def same_block(self, a: int, b: int) -> bool:
        return b in self.block_of(a)

    def to_json(self) -> dict:
        return {"blocks": [list(b) for b in self.blocks], "entangled": list(self.entangled)}

    def __str__(self) -> str:
        return "|".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)


@dataclass(frozen=True, order=True)
class Bond:
    """Qubit labels ``i < j`` bonded through element indices ``a < b``."""

    i: int
    j: int
    a: int
    b: int

    @classmethod
    def make(cls, i: int, j: int, a: int, b: int) -> Bond:
        if i == j or a == b:
            raise ValueError("a bond needs two qubits and two colors")
        return cls(min(i, j), max(i, j), min(a, b), max(a, b))

    @property
    def qubits(self) -> tuple[int, int]:
        return (self.i, self.j)

    @property
    def colors(self) -> tuple[int, int]:
        return (self.a, self.b)


@dataclass(frozen=True)
class ColorMultigraph:
    vertices: tuple[int, ...]
    colors: tuple[str, ...]  # element index -> unsigned letters (index 0 = identity)
    signed_colors: tuple[str, ...]
    edges: frozenset[Bond]

    def weights(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for e in self.edges:
            out[e.qubits] = out.get(e.qubits, 0) + 1
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "colors": list(self.signed_colors),
            "edges": [[e.i, e.j, e.a, e.b] for e in sorted(self.edges)],
        }


@dataclass(frozen=True)
class CompactMultigraph:
    vertices: tuple[int, ...]
    weights: dict[tuple[int, int], int] = field(hash=False)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "weights": [[i, j, w] for (i, j), w in sorted(self.weights.items())],
        }


@dataclass(frozen=True)
class CoreSpace:
    about: tuple[int, ...]
    group: StabilizerState
    rank: int

    def to_json(self) -> dict:
        return {
            "about": list(self.about),
            "labels": list(self.group.labels),
            "rank": self.rank,
            "generators": [str(g) for g in self.group.generators],
            "elements": [str(e) for e in self.group.elements()[1:]],
        }


# -- subparts ---------------------------------------------------------------


def _qubit_forms(state: StabilizerState) -> list[int]:
    """Per-qubit symplectic form between generator pairs, packed as bit masks."""
    gens = state.generators
    pairs = list(itertools.combinations(range(len(gens)), 2))
    forms = []
    for k in range(state.n):
        bit = state.n - 1 - k
        v = 0
        for idx, (a, b) in enumerate(pairs):
            if (symplectic(gens[a], gens[b]) >> bit) & 1:
                v |= 1 << idx
        forms.append(v)
    return forms


def _zero_sum_basis(forms: Sequence[int]) -> list[int]:
    """Basis of qubit subsets (as masks) whose forms sum to zero over GF(2)."""
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for k, f in enumerate(forms):
        combo = 1 << k
        while f:
            top = f.bit_length() - 1
            if top not in pivots:
                pivots[top] = (f, combo)
                break
            pf, pc = pivots[top]
            f ^= pf
            combo ^= pc
        if not f:
            kernel.append(combo)
    return kernel


def entangled_partition(state: StabilizerState, cap: int | None = None) -> EntangledPartition:
    """Split the qubits into minimal subsets on which the restricted group commutes.

    The qubit subsets with a commuting restriction form a GF(2) space (the
    zero-sum subsets of per-qubit symplectic forms); its minimal nonzero
    members are the blocks.
    """
    if cap is None:
        cap = limits().partition_cap
    if state.n > cap:
        raise BudgetExceeded(f"n={state.n} exceeds the partition cap {cap}")
    n = state.n
    basis = _zero_sum_basis(_qubit_forms(state))
    members = [0]
    for b in basis:
        members.extend(v ^ b for v in list(members))
    minimal: list[int] = []
    for v in sorted((v for v in members if v), key=lambda v: (bin(v).count("1"), v)):
        if not any(mb & ~v == 0 for mb in minimal):
            minimal.append(v)
    seen = 0
    for v in minimal:
        if seen & v:
            raise PartitionError(f"overlapping minimal commuting subsets in {state!r}")
        seen |= v
    if seen != (1 << n) - 1:
        raise PartitionError(f"minimal commuting subsets do not cover all qubits of {state!r}")
    blocks = [tuple(state.labels[k] for k in range(n) if (v >> k) & 1) for v in minimal]
    blocks.sort(key=lambda b: min(b))
    return EntangledPartition(tuple(tuple(sorted(b)) for b in blocks))


# -- bonds ------------------------------------------------------------------


def _block_ids(state: StabilizerState, part: EntangledPartition) -> list[int]:
    ids = [0] * state.n
    for bi, block in enumerate(part.blocks):
        for label in block:
            ids[state.index_of(label)] = bi
    return ids


def bonds(state: StabilizerState) -> ColorMultigraph:
    elems = state.elements()
    part = entangled_partition(state)
    block = _block_ids(state, part)
    n = state.n
    edges = set()
    for ia, ib in itertools.combinations(range(1, len(elems)), 2):
        mask = symplectic(elems[ia], elems[ib])
        if not mask:
            continue
        sites = [k for k in range(n) if (mask >> (n - 1 - k)) & 1]
        for p, q in itertools.combinations(sites, 2):
            if block[p] == block[q]:
                edges.add(Bond.make(state.labels[p], state.labels[q], ia, ib))
    return ColorMultigraph(
        vertices=state.labels,
        colors=tuple(e.letters for e in elems),
        signed_colors=tuple(str(e) for e in elems),
        edges=frozenset(edges),
    )


def compact(g: ColorMultigraph) -> CompactMultigraph:
    return CompactMultigraph(g.vertices, g.weights())


# -- core spaces ------------------------------------------------------------


def core_group(state: StabilizerState, about: Iterable[int]) -> CoreSpace:
    """Elements acting as identity on every qubit label in ``about``, restricted to the rest."""
    about = tuple(sorted(set(about)))
    if not about:
        raise GroupError("core needs at least one qubit")
    cols = [state.index_of(label) for label in about]
    if len(cols) >= state.n:
        raise GroupError("core about every qubit is empty")
    rest = [k for k in range(state.n) if k not in cols]
    gens = [restrict(g, rest) for g in identity_subgroup(state, cols)]
    group = from_generators(gens, labels=[state.labels[k] for k in rest], n=len(rest))
    return CoreSpace(about, group, group.rank)


# -- measurement searches ---------------------------------------------------


def _measure_plus(state: StabilizerState, label: int, basis: str):
    """Measure taking +1 for a free outcome and the forced value otherwise."""
    k = state.index_of(label)
    try:
        return dynamics.measure(state, k, basis, outcome=1)
    except dynamics.ContradictedOutcome:
        return dynamics.measure(state, k, basis, outcome=-1)


def is_bell_pair(state: StabilizerState) -> bool:
    """Two qubits carrying the three-bond multigraph of a Bell state."""
    if state.n != 2:
        return False
    return len(bonds(state).edges) == 3


def bell_extraction(
    state: StabilizerState, i: int, j: int, budget: int | None = None
) -> list[tuple[int, str, int]] | None:
    """Find Pauli measurements on the other qubits that leave ``i, j`` in a Bell state.

    Qubits are external labels. Returns ``(label, basis, outcome)`` steps, or
    None once every basis assignment has been tried. Free outcomes are taken
    as +1; the bond structure after truncation does not depend on them.
    """
    if i == j:
        raise GroupError("Bell extraction needs two distinct qubits")
    state.index_of(i), state.index_of(j)
    lim = limits()
    if state.n > lim.extraction_max_qubits:
        raise BudgetExceeded(f"extraction limited to {lim.extraction_max_qubits} qubits")
    budget = lim.search_budget if budget is None else budget
    others = [q for q in state.labels if q not in (i, j)]
    tried = 0
    for bases in itertools.product(dynamics.BASES, repeat=len(others)):
        tried += 1
        if tried > budget:
            raise BudgetExceeded(f"Bell extraction exceeded {budget} candidates")
        s = state
        steps = []
        for label, basis in zip(others, bases):
            s, rec = _measure_plus(s, label, basis)
            steps.append((label, basis, rec.outcome))
        if is_bell_pair(s):
            return steps
    return None


def pauli_persistency(state: StabilizerState, budget: int | None = None) -> int:
    """Fewest local Pauli measurements after which no two qubits remain entangled."""
    lim = limits()
    if state.n > lim.persistency_max_qubits:
        raise BudgetExceeded(f"persistency limited to {lim.persistency_max_qubits} qubits")
    budget = lim.search_budget if budget is None else budget
    if entangled_partition(state).is_product:
        return 0
    nodes = 0
    for depth in range(1, state.n):
        for chosen in itertools.combinations(state.labels, depth):
            for bases in itertools.product(dynamics.BASES, repeat=depth):
                nodes += 1
                if nodes > budget:
                    raise BudgetExceeded(f"persistency search exceeded {budget} nodes")
                s = state
                for label, basis in zip(chosen, bases):
                    s, _ = _measure_plus(s, label, basis)
                if entangled_partition(s).is_product:
                    return depth
    raise AssertionError("measuring all but one qubit always leaves a product state")


# -- DOT --------------------------------------------------------------------

_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def to_dot(g: ColorMultigraph, name: str = "bonds") -> str:
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        lines.append(f'  q{v} [label="{v}"];')
    for e in sorted(g.edges):
        ca = _PALETTE[e.a % len(_PALETTE)]
        cb = _PALETTE[e.b % len(_PALETTE)]
        tip = f"{g.signed_colors[e.a]} / {g.signed_colors[e.b]}"
        lines.append(
            f'  q{e.i} -- q{e.j} [colorA={e.a}, colorB={e.b}, color="{ca}:{cb}", tooltip="{tip}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def compact_to_dot(c: CompactMultigraph, name: str = "compact") -> str:
    lines = [f"graph {name} {{"]
    for v in c.vertices:
        lines.append(f'  q{v} [label="{v}"];')
    for (i, j), w in sorted(c.weights.items()):
        lines.append(f'  q{i} -- q{j} [weight={w}, label="{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
