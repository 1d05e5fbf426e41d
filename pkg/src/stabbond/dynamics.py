"""State evolution: CZ gates, single-qubit Cliffords and local Pauli measurement.

Measurement follows the truncation rule: keep the elements commuting with the
measured single-qubit Pauli, flip the sign of the kept elements carrying that
Pauli when the outcome is -1, and delete the measured column. CNOT is not a
primitive; ``CNOT(c, t) = H_t CZ(c, t) H_t``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Union

from .group import GroupError, StabilizerState, from_generators, signed_member
from .pauli import SignedPauli, commutes, multiply, restrict

BASES = ("Z", "X", "Y")

# gate -> letter -> (image letter, sign) under U P U^dagger
_CLIFFORD_TABLES = {
    "H": {"X": ("Z", 1), "Z": ("X", 1), "Y": ("Y", -1)},
    "S": {"X": ("Y", 1), "Y": ("X", -1), "Z": ("Z", 1)},
    "X": {"X": ("X", 1), "Y": ("Y", -1), "Z": ("Z", -1)},
    "Y": {"X": ("X", -1), "Y": ("Y", 1), "Z": ("Z", -1)},
    "Z": {"X": ("X", -1), "Y": ("Y", -1), "Z": ("Z", 1)},
}
LOCAL_GATES = tuple(_CLIFFORD_TABLES)

Outcome = Union[int, str, None]


class MeasurementError(ValueError):
    """Invalid measurement request."""

    code = "measurement"


class UnsupportedBasis(MeasurementError):
    """Only Z, X and Y measurements keep the state inside the stabilizer picture."""

    code = "non_pauli_basis"


class ContradictedOutcome(MeasurementError):
    code = "contradicted_outcome"


@dataclass(frozen=True)
class MeasurementRecord:
    qubit: int
    basis: str
    outcome: int
    determined: bool
    kept: int = 0
    discarded: int = 0

    def to_json(self) -> dict:
        return {
            "qubit": self.qubit,
            "basis": self.basis,
            "outcome": self.outcome,
            "determined": self.determined,
            "kept": self.kept,
            "discarded": self.discarded,
        }


def _check_qubit(state: StabilizerState, k: int) -> None:
    if not 0 <= k < state.n:
        raise GroupError(f"qubit index {k} out of range for n={state.n}")


def cz_conjugate(p: SignedPauli, a: int, b: int) -> SignedPauli:
    """Image of ``p`` under conjugation by CZ on qubits ``a`` and ``b``."""
    ba = 1 << (p.n - 1 - a)
    bb = 1 << (p.n - 1 - b)
    xa, xb = bool(p.x & ba), bool(p.x & bb)
    za, zb = bool(p.z & ba), bool(p.z & bb)
    z = p.z
    if xb:
        z ^= ba
    if xa:
        z ^= bb
    flip = 2 if (xa and xb and za != zb) else 0
    return SignedPauli(p.n, p.x, z, p.phase + flip)


def apply_cz(state: StabilizerState, a: int, b: int) -> StabilizerState:
    _check_qubit(state, a)
    _check_qubit(state, b)
    if a == b:
        raise GroupError("CZ needs two distinct qubits")
    gens = [cz_conjugate(g, a, b) for g in state.generators]
    return StabilizerState(state.n, state.labels, gens)


def local_conjugate(p: SignedPauli, k: int, gate: str) -> SignedPauli:
    try:
        table = _CLIFFORD_TABLES[gate]
    except KeyError:
        raise GroupError(f"unknown local gate {gate!r}; expected one of {LOCAL_GATES}") from None
    letter = p.letter(k)
    if letter == "I":
        return p
    image, sign = table[letter]
    bit = 1 << (p.n - 1 - k)
    single = SignedPauli.single(p.n, k, image)
    out = SignedPauli(p.n, (p.x & ~bit) | single.x, (p.z & ~bit) | single.z, p.phase)
    return out if sign > 0 else out.negate()


def apply_local_clifford(state: StabilizerState, k: int, gate: str) -> StabilizerState:
    """Conjugate column ``k`` by ``H``, ``S`` or a Pauli gate.

    ``gate`` may also be a word such as ``"HS"``, applied left to right.
    """
    _check_qubit(state, k)
    if not gate:
        raise GroupError("empty gate name")
    gens = list(state.generators)
    for g in gate:
        gens = [local_conjugate(p, k, g) for p in gens]
    return StabilizerState(state.n, state.labels, gens)


def truncation_split(
    elements: Iterable[SignedPauli], k: int, basis: str
) -> tuple[list[SignedPauli], list[SignedPauli]]:
    """Partition ``elements`` into those commuting with the measurement and the rest."""
    if basis not in BASES:
        raise UnsupportedBasis(f"basis {basis!r} is not a Pauli basis")
    kept, struck = [], []
    for e in elements:
        (kept if e.letter(k) in ("I", basis) else struck).append(e)
    return kept, struck


def _draw(outcome: Outcome, rng: random.Random | None) -> int:
    if outcome in (1, -1):
        return int(outcome)
    if outcome in (None, "sample"):
        return (rng or random.Random()).choice((1, -1))
    raise MeasurementError(f"outcome must be +1, -1 or 'sample', got {outcome!r}")


def measure(
    state: StabilizerState,
    k: int,
    basis: str,
    outcome: Outcome = "sample",
    rng: random.Random | None = None,
) -> tuple[StabilizerState, MeasurementRecord]:
    """Measure ``basis`` on qubit position ``k`` and remove that qubit.

    ``outcome`` is +1, -1 or ``"sample"`` (drawn from ``rng``). If the group
    already contains the measured Pauli up to sign, the outcome is forced and
    reported with ``determined=True``; asking for the other outcome raises
    :class:`ContradictedOutcome`.
    """
    _check_qubit(state, k)
    if basis not in BASES:
        raise UnsupportedBasis(f"basis {basis!r} is not a Pauli basis (Z, X, Y)")
    if state.n == 1:
        raise MeasurementError("cannot remove the last remaining qubit")
    A = SignedPauli.single(state.n, k, basis)
    label = state.labels[k]
    anti = [g for g in state.generators if not commutes(g, A)]
    comm = [g for g in state.generators if commutes(g, A)]
    if anti:
        pivot = anti[0]
        comm.extend(multiply(g, pivot) for g in anti[1:])
        forced = 0
    else:
        forced = signed_member(state, A)
    if forced:
        if outcome in (1, -1) and outcome != forced:
            raise ContradictedOutcome(
                f"outcome of {basis} on qubit {label} is fixed to {forced:+d}"
            )
        value = forced
    else:
        value = _draw(outcome, rng)
    flipped = [g.negate() if value < 0 and g.letter(k) == basis else g for g in comm]
    keep = [j for j in range(state.n) if j != k]
    gens = [restrict(g, keep) for g in flipped]
    # a forced outcome makes one kept generator collapse onto +I after removal
    post = from_generators(gens, labels=[state.labels[j] for j in keep], n=state.n - 1)
    kept = 1 << len(comm)
    record = MeasurementRecord(label, basis, value, bool(forced), kept, state.size - kept)
    return post, record


def measure_sequence(
    state: StabilizerState,
    steps: Iterable[tuple[int, str, Outcome]],
    seed: int | None = None,
) -> tuple[StabilizerState, list[MeasurementRecord]]:
    """Apply measurements given as ``(label, basis, outcome)`` in order.

    Qubits are addressed by their external labels, which survive removal of
    other qubits. One RNG seeded with ``seed`` serves every sampled outcome.
    """
    rng = random.Random(seed)
    records = []
    for label, basis, outcome in steps:
        state, rec = measure(state, state.index_of(label), basis, outcome, rng)
        records.append(rec)
    return state, records
