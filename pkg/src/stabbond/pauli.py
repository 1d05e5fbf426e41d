"""Signed N-qubit Pauli operators in binary symplectic form.

An operator is stored as two bit masks plus a power of ``i``::

    P = i**phase * L_0 (x) L_1 (x) ... (x) L_{n-1}

where the letter ``L_k`` is read off the bit pair ``(x_k, z_k)``:
``(0,0)=I``, ``(1,0)=X``, ``(0,1)=Z``, ``(1,1)=Y``. ``Y`` is fixed as
``iXZ``, which determines every product sign (``XZ = -iY``, ``ZX = iY``).

Qubit 0 is the leftmost letter of the text form and the most significant
bit of the masks, so integer comparison of masks is lexicographic order on
the letter columns.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

MAX_QUBITS = 32

_LETTERS = "IXZY"  # indexed by x + 2*z
_PATTERN = re.compile(r"^([+-]?)([IXYZ]+)$")


class PauliError(ValueError):
    """Malformed Pauli text or incompatible operands."""


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True, order=False)
class SignedPauli:
    """An immutable N-qubit Pauli operator with phase ``i**phase``.

    Only phases 0 (+1) and 2 (-1) describe Hermitian observables; phases
    1 and 3 appear transiently when anticommuting operators are multiplied.
    """

    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise PauliError(f"qubit count {self.n} outside 1..{MAX_QUBITS}")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full:
            raise PauliError("bit masks wider than qubit count")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- construction ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> SignedPauli:
        return cls(n, 0, 0, 0)

    @classmethod
    def single(cls, n: int, k: int, letter: str, sign: int = 1) -> SignedPauli:
        """``letter`` on qubit ``k`` and identity elsewhere."""
        if not 0 <= k < n:
            raise PauliError(f"qubit index {k} out of range for n={n}")
        if letter not in _LETTERS:
            raise PauliError(f"unknown Pauli letter {letter!r}")
        code = _LETTERS.index(letter)
        bit = 1 << (n - 1 - k)
        return cls(n, bit if code & 1 else 0, bit if code & 2 else 0, 0 if sign > 0 else 2)

    @classmethod
    def from_bits(cls, xs: Iterable[int], zs: Iterable[int], sign: int = 1) -> SignedPauli:
        xs, zs = list(xs), list(zs)
        if len(xs) != len(zs):
            raise PauliError("x and z parts differ in length")
        x = z = 0
        for xb, zb in zip(xs, zs):
            x = (x << 1) | (1 if xb else 0)
            z = (z << 1) | (1 if zb else 0)
        return cls(len(xs), x, z, 0 if sign > 0 else 2)

    # -- accessors ---------------------------------------------------------

    @property
    def sign(self) -> int:
        """+1 or -1; raises for non-Hermitian phases."""
        if self.phase == 0:
            return 1
        if self.phase == 2:
            return -1
        raise PauliError(f"operator {self!r} has imaginary phase")

    @property
    def is_hermitian(self) -> bool:
        return self.phase in (0, 2)

    @property
    def is_identity(self) -> bool:
        """True for +-I (sign ignored)."""
        return self.x == 0 and self.z == 0

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def key(self) -> tuple[int, int]:
        """Sign-free sort key: ascending ``(z_bits, x_bits)``."""
        return (self.z, self.x)

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple(self.bits_at(k)[0] for k in range(self.n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple(self.bits_at(k)[1] for k in range(self.n))

    def bits_at(self, k: int) -> tuple[int, int]:
        self._check_index(k)
        shift = self.n - 1 - k
        return (self.x >> shift) & 1, (self.z >> shift) & 1

    def letter(self, k: int) -> str:
        xb, zb = self.bits_at(k)
        return _LETTERS[xb + 2 * zb]

    @property
    def letters(self) -> str:
        return "".join(self.letter(k) for k in range(self.n))

    def unsigned(self) -> SignedPauli:
        return SignedPauli(self.n, self.x, self.z, 0)

    def negate(self) -> SignedPauli:
        return SignedPauli(self.n, self.x, self.z, self.phase + 2)

    def with_sign(self, sign: int) -> SignedPauli:
        return SignedPauli(self.n, self.x, self.z, 0 if sign > 0 else 2)

    def _check_index(self, k: int) -> None:
        if not 0 <= k < self.n:
            raise PauliError(f"qubit index {k} out of range for n={self.n}")

    # -- text --------------------------------------------------------------

    def __str__(self) -> str:
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase]
        return prefix + self.letters

    def __repr__(self) -> str:
        return f"SignedPauli({str(self)!r})"

    def __mul__(self, other: SignedPauli) -> SignedPauli:
        return multiply(self, other)


def parse(text: str) -> SignedPauli:
    """Parse ``[+|-]LETTERS`` into a :class:`SignedPauli`.

    >>> parse("-IZZ")
    SignedPauli('-IZZ')
    """
    m = _PATTERN.match(text.strip())
    if m is None:
        raise PauliError(f"not a signed Pauli string: {text!r}")
    sign, body = m.groups()
    n = len(body)
    if n > MAX_QUBITS:
        raise PauliError(f"{n} qubits exceeds the cap of {MAX_QUBITS}")
    x = z = 0
    for ch in body:
        code = _LETTERS.index(ch)
        x = (x << 1) | (code & 1)
        z = (z << 1) | (code >> 1)
    return SignedPauli(n, x, z, 2 if sign == "-" else 0)


def _check_same(a: SignedPauli, b: SignedPauli) -> None:
    if a.n != b.n:
        raise PauliError(f"length mismatch: {a.n} vs {b.n} qubits")


def multiply(a: SignedPauli, b: SignedPauli) -> SignedPauli:
    """Operator product ``a @ b`` with exact phase tracking."""
    _check_same(a, b)
    # a*b = i^(pa+pb+|xa&za|+|xb&zb|) X^xa Z^za X^xb Z^zb; moving Z^za past
    # X^xb costs (-1)^|za&xb|, then Y letters absorb one i each.
    x = a.x ^ b.x
    z = a.z ^ b.z
    phase = (
        a.phase
        + b.phase
        + _popcount(a.x & a.z)
        + _popcount(b.x & b.z)
        + 2 * _popcount(a.z & b.x)
        - _popcount(x & z)
    )
    return SignedPauli(a.n, x, z, phase)


def product(ops: Iterable[SignedPauli]) -> SignedPauli:
    it = iter(ops)
    try:
        acc = next(it)
    except StopIteration:
        raise PauliError("product of an empty set") from None
    for op in it:
        acc = multiply(acc, op)
    return acc


def symplectic(a: SignedPauli, b: SignedPauli) -> int:
    """Per-qubit anticommutation mask between ``a`` and ``b``."""
    _check_same(a, b)
    return (a.x & b.z) ^ (a.z & b.x)


def commutes(a: SignedPauli, b: SignedPauli) -> bool:
    return _popcount(symplectic(a, b)) % 2 == 0


def commutes_at(a: SignedPauli, b: SignedPauli, k: int) -> bool:
    """Whether the single-qubit factors of ``a`` and ``b`` at qubit ``k`` commute."""
    _check_same(a, b)
    a._check_index(k)
    return not (symplectic(a, b) >> (a.n - 1 - k)) & 1


def restrict(a: SignedPauli, keep: Iterable[int]) -> SignedPauli:
    """Drop every qubit column not in ``keep``; the sign is preserved.

    Columns are kept in ascending qubit order regardless of the order of
    ``keep``.
    """
    cols = sorted(set(keep))
    if not cols:
        raise PauliError("restriction to an empty qubit set")
    for k in cols:
        a._check_index(k)
    x = z = 0
    for k in cols:
        xb, zb = a.bits_at(k)
        x = (x << 1) | xb
        z = (z << 1) | zb
    return SignedPauli(len(cols), x, z, a.phase)
