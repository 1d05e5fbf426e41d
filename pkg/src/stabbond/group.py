"""Closed signed stabilizer groups.

A :class:`StabilizerState` holds ``m`` independent, pairwise commuting
generators on ``n`` qubits. The full group of ``2**m`` signed elements is
materialized lazily. Element signs play the role of eigenvalues: a state is a
joint eigenstate with eigenvalue ``sign(g)`` of every element ``g``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .config import limits
from .pauli import SignedPauli, PauliError, commutes, multiply, parse, product, restrict


class GroupError(ValueError):
    """Generators that do not define a valid stabilizer group."""


class EnumerationCapExceeded(GroupError):
    pass


def _vec(p: SignedPauli) -> int:
    # x part above z part, so pivots prefer X-type columns
    return (p.x << p.n) | p.z


class _Echelon:
    """Incremental GF(2) row reduction over signed Paulis."""

    def __init__(self):
        self.rows: dict[int, SignedPauli] = {}  # pivot bit -> row

    def reduce(self, p: SignedPauli) -> SignedPauli:
        v = _vec(p)
        while v:
            top = v.bit_length() - 1
            row = self.rows.get(top)
            if row is None:
                break
            p = multiply(p, row)
            v = _vec(p)
        return p

    def add(self, p: SignedPauli) -> bool:
        """Insert ``p``; returns False (and stores nothing) if dependent."""
        r = self.reduce(p)
        if r.is_identity:
            return False
        self.rows[_vec(r).bit_length() - 1] = r
        return True


@dataclass(frozen=True)
class ColumnCensus:
    I: int
    Z: int
    X: int
    Y: int

    @property
    def total(self) -> int:
        return self.I + self.Z + self.X + self.Y

    def as_dict(self) -> dict[str, int]:
        return {"I": self.I, "Z": self.Z, "X": self.X, "Y": self.Y}


class StabilizerState:
    """An immutable stabilizer group with external qubit labels.

    Use :func:`from_generators` to build one; the constructor trusts its
    inputs.
    """

    __slots__ = ("n", "labels", "generators", "_elements", "_rref")

    def __init__(self, n: int, labels: Sequence[int], generators: Sequence[SignedPauli]):
        self.n = n
        self.labels = tuple(labels)
        self.generators = tuple(generators)
        self._elements: tuple[SignedPauli, ...] | None = None
        self._rref: tuple[SignedPauli, ...] | None = None

    @property
    def m(self) -> int:
        return len(self.generators)

    @property
    def size(self) -> int:
        return 1 << self.m

    @property
    def rank(self) -> int:
        """Rank of the stabilized projector, ``2**(n - m)``."""
        return 1 << (self.n - self.m)

    def index_of(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise GroupError(f"no qubit labelled {label} (labels {list(self.labels)})") from None

    def elements(self, cap: int | None = None) -> tuple[SignedPauli, ...]:
        if self._elements is None:
            self._elements = tuple(enumerate_elements(self, cap))
        return self._elements

    def __eq__(self, other):
        if not isinstance(other, StabilizerState):
            return NotImplemented
        return self.labels == other.labels and canonical_form(self) == canonical_form(other)

    def __hash__(self):
        return hash((self.labels, canonical_form(self)))

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"StabilizerState(n={self.n}, labels={list(self.labels)}, generators=[{gens}])"

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "labels": list(self.labels),
            "generators": [str(g) for g in self.generators],
        }

    @classmethod
    def from_json(cls, data: dict) -> StabilizerState:
        gens = [parse(t) for t in data["generators"]]
        n = int(data["n"])
        if any(g.n != n for g in gens):
            raise GroupError("generator length does not match n")
        return from_generators(gens, labels=data.get("labels"), n=n)


def from_generators(
    gens: Iterable[SignedPauli | str],
    labels: Sequence[int] | None = None,
    n: int | None = None,
) -> StabilizerState:
    """Build a state from commuting generators.

    Dependent generators are dropped when their sign agrees with the product
    of the others, and rejected otherwise since they would put ``-I`` in the
    group. ``n`` is required only for the empty generator list.
    """
    gens = [parse(g) if isinstance(g, str) else g for g in gens]
    if not gens and n is None:
        raise GroupError("empty generator list")
    if n is None:
        n = gens[0].n
    for g in gens:
        if g.n != n:
            raise GroupError(f"generator {g} has {g.n} qubits, expected {n}")
        if not g.is_hermitian:
            raise GroupError(f"generator {g} is not Hermitian")
    for a, b in itertools.combinations(gens, 2):
        if not commutes(a, b):
            raise GroupError(f"generators {a} and {b} anticommute")
    ech = _Echelon()
    kept = []
    for g in gens:
        r = ech.reduce(g)
        if r.is_identity:
            if r.phase != 0:
                raise GroupError(f"generator {g} is inconsistent with the others (-I in group)")
            continue
        ech.rows[_vec(r).bit_length() - 1] = r
        kept.append(g)
    if labels is None:
        labels = range(1, n + 1)
    labels = tuple(int(v) for v in labels)
    if len(labels) != n or len(set(labels)) != n:
        raise GroupError(f"labels {list(labels)} do not name {n} distinct qubits")
    return StabilizerState(n, labels, kept)


def canonical_form(state: StabilizerState) -> tuple[SignedPauli, ...]:
    """Reduced row echelon generators with signs; equal iff the groups are equal."""
    if state._rref is None:
        ech = _Echelon()
        for g in state.generators:
            ech.add(g)
        rows = {}
        for pivot in sorted(ech.rows):
            rows[pivot] = ech.rows[pivot]
        # back-substitute so every pivot column has a single 1
        for pivot in sorted(rows, reverse=True):
            row = rows[pivot]
            for other in rows:
                if other > pivot and (_vec(rows[other]) >> pivot) & 1:
                    rows[other] = multiply(rows[other], row)
        state._rref = tuple(rows[p] for p in sorted(rows, reverse=True))
    return state._rref


def enumerate_elements(state: StabilizerState, cap: int | None = None) -> list[SignedPauli]:
    """All ``2**m`` signed elements, identity first, then ascending ``(z, x)``."""
    if cap is None:
        cap = limits().enumeration_cap
    if state.m > cap:
        raise EnumerationCapExceeded(f"m={state.m} exceeds the enumeration cap {cap}")
    out = [SignedPauli.identity(state.n)]
    for g in state.generators:
        out.extend(multiply(e, g) for e in list(out))
    out.sort(key=lambda p: p.key)
    return out


def contains(state: StabilizerState, p: SignedPauli) -> bool:
    """Signed membership by reduction against the canonical tableau."""
    if p.n != state.n:
        raise PauliError(f"length mismatch: {p.n} vs {state.n} qubits")
    if not p.is_hermitian:
        return False
    r = _reduce_against(state, p)
    return r.is_identity and r.phase == 0


def signed_member(state: StabilizerState, p: SignedPauli) -> int:
    """+1 if ``p`` is in the group, -1 if ``-p`` is, 0 if neither."""
    r = _reduce_against(state, p.unsigned())
    if not r.is_identity:
        return 0
    return 1 if r.phase == 0 else -1


def _reduce_against(state: StabilizerState, p: SignedPauli) -> SignedPauli:
    for row in canonical_form(state):
        pivot = _vec(row).bit_length() - 1
        if (_vec(p) >> pivot) & 1:
            p = multiply(p, row)
    return p


def column_census(state: StabilizerState, k: int) -> ColumnCensus:
    if not 0 <= k < state.n:
        raise GroupError(f"qubit index {k} out of range for n={state.n}")
    counts = {"I": 0, "Z": 0, "X": 0, "Y": 0}
    for e in state.elements():
        counts[e.letter(k)] += 1
    return ColumnCensus(**counts)


def is_entangled_qubit(state: StabilizerState, k: int) -> bool:
    """A qubit is entangled when its column holds two different non-identity letters."""
    if not 0 <= k < state.n:
        raise GroupError(f"qubit index {k} out of range for n={state.n}")
    # two distinct letters among the generators span all four at this column
    seen = {g.letter(k) for g in state.generators} - {"I"}
    return len(seen) >= 2


def identity_subgroup(state: StabilizerState, cols: Iterable[int]) -> list[SignedPauli]:
    """Generators of the elements acting as identity on every qubit in ``cols``."""
    mask = 0
    for k in cols:
        if not 0 <= k < state.n:
            raise GroupError(f"qubit index {k} out of range for n={state.n}")
        mask |= 1 << (state.n - 1 - k)
    pivots: dict[int, SignedPauli] = {}
    out = []
    for g in state.generators:
        while True:
            local = ((g.x & mask) << state.n) | (g.z & mask)
            if not local:
                out.append(g)
                break
            top = local.bit_length() - 1
            if top not in pivots:
                pivots[top] = g
                break
            g = multiply(g, pivots[top])
    return out


def is_identity_product(ops: Sequence[SignedPauli]) -> bool:
    """Whether the product of ``ops`` is +I or -I."""
    if not ops:
        raise GroupError("identity-product test on an empty set")
    return product(ops).is_identity


def _is_id_on(ops: Sequence[SignedPauli], cols: Sequence[int]) -> bool:
    restricted = [restrict(o, cols) for o in ops]
    if any(r.is_identity for r in restricted):
        return False
    for a, b in itertools.combinations(restricted, 2):
        if not commutes(a, b):
            return False
    return product(restricted).is_identity


def is_critical_id(ops: Sequence[SignedPauli], max_size: int = 16) -> bool:
    """Whether no smaller ID is reachable by dropping observables and/or qubits.

    A candidate smaller ID is a subset of at least two observables restricted
    to a nonempty subset of qubits, where the restrictions are all
    non-identity, pairwise commuting, and multiply to +-I.
    """
    ops = list(ops)
    if not is_identity_product(ops):
        raise GroupError("set is not an identity product")
    n = ops[0].n
    if len(ops) > max_size or n > max_size:
        raise GroupError(f"criticality check limited to {max_size} observables and qubits")
    all_cols = tuple(range(n))
    for q in range(n, 0, -1):
        for cols in itertools.combinations(all_cols, q):
            for size in range(len(ops), 1, -1):
                if q == n and size == len(ops):
                    continue
                for subset in itertools.combinations(ops, size):
                    if _is_id_on(subset, cols):
                        return False
    return True
