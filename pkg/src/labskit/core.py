"""Binary sequences, aperiodic autocorrelation and the closed-form energy quantities.

A sequence of length N is stored as a Python int: bit ``i`` is set when the
element at (0-based) position ``i`` is -1.  Every lag is then a shift, an XOR
and a popcount.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Optional, Sequence


class LabsError(ValueError):
    """Base class for domain errors (mapped to exit code 1 by the CLI)."""


class ParseError(LabsError):
    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class MeritUndefinedError(LabsError):
    """Merit factor requested for a zero-energy sequence."""


class InconsistentEnergyError(LabsError):
    """Energy value that cannot occur for the given length."""


@dataclass(frozen=True)
class BinarySequence:
    n: int
    bits: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"sequence length must be >= 1, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bit pattern {self.bits:#x} does not fit in {self.n} bits")

    @classmethod
    def from_elements(cls, elements: Iterable[int]) -> "BinarySequence":
        bits = 0
        n = 0
        for i, x in enumerate(elements):
            if x == -1:
                bits |= 1 << i
            elif x != 1:
                raise ValueError(f"element {i + 1} is {x!r}, expected +1 or -1")
            n += 1
        return cls(n, bits)

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(-1 if (self.bits >> i) & 1 else 1 for i in range(self.n))

    @property
    def minus_count(self) -> int:
        return self.bits.bit_count()

    def flip(self, position: int) -> "BinarySequence":
        """Negate the element at 1-based ``position``."""
        if not 1 <= position <= self.n:
            raise IndexError(f"position {position} outside 1..{self.n}")
        return BinarySequence(self.n, self.bits ^ (1 << (position - 1)))

    def to_text(self) -> str:
        return "".join("-" if (self.bits >> i) & 1 else "+" for i in range(self.n))

    def __len__(self) -> int:
        return self.n

    def __str__(self) -> str:
        return self.to_text()


def encode(seq: BinarySequence) -> int:
    return seq.bits


def decode(n: int, bits: int) -> BinarySequence:
    return BinarySequence(n, bits)


_TOKENS = {"1": 1, "+1": 1, "-1": -1}
_SEP = re.compile(r"[\s,]+")


def parse_sequence(text: str) -> BinarySequence:
    """Parse ``"++-+"`` or ``"1 1 -1 1"`` / ``"1,1,-1,1"`` into a sequence.

    Error positions are 1-based (character index in the compact form, token
    index in the separated form).
    """
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty sequence")
    tokens = [t for t in _SEP.split(stripped) if t]
    if not tokens:
        raise ParseError("empty sequence")
    if len(tokens) == 1 and tokens[0] not in _TOKENS:
        elements = []
        for pos, ch in enumerate(tokens[0], start=1):
            if ch == "+":
                elements.append(1)
            elif ch == "-":
                elements.append(-1)
            else:
                raise ParseError(f"invalid symbol {ch!r}", pos)
        return BinarySequence.from_elements(elements)
    elements = []
    for pos, tok in enumerate(tokens, start=1):
        if tok not in _TOKENS:
            raise ParseError(f"invalid token {tok!r}", pos)
        elements.append(_TOKENS[tok])
    return BinarySequence.from_elements(elements)


def _lag_minus_count(bits: int, n: int, k: int) -> int:
    """Number of -1 entries in the lag-k product sequence x_i * x_{i+k}."""
    return ((bits ^ (bits >> k)) & ((1 << (n - k)) - 1)).bit_count()


@dataclass(frozen=True)
class AutocorrelationProfile:
    n: int
    lags: tuple[int, ...]
    energy: int

    @property
    def merit_factor(self) -> Optional[Fraction]:
        if self.energy == 0:
            return None
        return merit_factor(self.n, self.energy)


def autocorrelation(seq: BinarySequence) -> AutocorrelationProfile:
    n, bits = seq.n, seq.bits
    lags = tuple((n - k) - 2 * _lag_minus_count(bits, n, k) for k in range(1, n))
    return AutocorrelationProfile(n, lags, sum(r * r for r in lags))


def energy(seq: BinarySequence) -> int:
    return autocorrelation(seq).energy


def merit_factor(n: int, energy: int) -> Fraction:
    if n < 1:
        raise ValueError(f"length must be >= 1, got {n}")
    if energy < 0:
        raise ValueError(f"energy must be non-negative, got {energy}")
    if energy == 0:
        raise MeritUndefinedError(f"merit factor undefined for zero energy (N={n})")
    return Fraction(n * n, 2 * energy)


def e_max(n: int) -> int:
    """Energy of the all-ones sequence, the top of the energy lattice."""
    if n < 1:
        raise ValueError(f"length must be >= 1, got {n}")
    return n * (n - 1) * (2 * n - 1) // 6


def n_max(n: int) -> int:
    """Largest possible number of -1 pair products, summed over all lags."""
    if n < 1:
        raise ValueError(f"length must be >= 1, got {n}")
    if n % 2 == 0:
        return n * (n - 2) * (2 * n + 1) // 24
    return (n - 1) * (n + 1) * (2 * n - 3) // 24


def e_min(n: int) -> int:
    if n < 1:
        raise ValueError(f"length must be >= 1, got {n}")
    return n // 2 if n % 2 == 0 else (n - 1) // 2


def f_max(n: int) -> Fraction:
    if n < 2:
        raise MeritUndefinedError(f"merit factor undefined for N={n} (minimum energy is 0)")
    return Fraction(n) if n % 2 == 0 else Fraction(n * n, n - 1)


def pair_count_m(n: int) -> int:
    """Total number of within-lag pair products (the size of Y)."""
    if n < 2:
        raise ValueError(f"length must be >= 2, got {n}")
    return n * (n - 1) * (n - 2) // 6


def pair_count_m_by_sum(n: int) -> int:
    return sum(comb(n - k, 2) for k in range(1, n - 1))


@dataclass(frozen=True)
class TheoreticalBounds:
    n_value: int
    e_max: int
    e_min: int
    n_max: int
    f_max: Optional[Fraction]


def theoretical_bounds(n: int) -> TheoreticalBounds:
    return TheoreticalBounds(
        n_value=n,
        e_max=e_max(n),
        e_min=e_min(n),
        n_max=n_max(n),
        f_max=f_max(n) if n >= 2 else None,
    )


@dataclass(frozen=True)
class EnergyDecomposition:
    n_value: int
    x_term: int
    m: int
    n: int
    p: int
    y_term: int
    energy: int

    @property
    def lattice_index(self) -> int:
        """Steps of 4 below the maximum energy (equals ``n``)."""
        return self.n


def decompose_energy(seq: BinarySequence) -> EnergyDecomposition:
    size = seq.n
    if size < 2:
        raise ValueError("decomposition needs length >= 2")
    x_term = size * (size - 1) // 2
    m = pair_count_m(size)
    minus_pairs = 0
    for k in range(1, size):
        nk = _lag_minus_count(seq.bits, size, k)
        minus_pairs += nk * ((size - k) - nk)
    y_term = m - 2 * minus_pairs
    total = x_term + 2 * y_term
    direct = autocorrelation(seq).energy
    if total != direct or total != e_max(size) - 4 * minus_pairs:
        raise AssertionError(f"energy identity broken for {seq}: {total} vs {direct}")
    return EnergyDecomposition(size, x_term, m, minus_pairs, m - minus_pairs, y_term, total)


def deviation(n: int, energy: int) -> int:
    """Lattice steps between ``energy`` and the theoretical minimum for length ``n``."""
    gap = energy - e_min(n)
    if gap < 0 or gap % 4:
        raise InconsistentEnergyError(
            f"energy {energy} is not realizable for N={n} (minimum {e_min(n)}, spacing 4)"
        )
    return gap // 4


# symmetry group: {identity, reversal} x {0, negation, alternating flip, both}

def _reverse_bits(bits: int, n: int) -> int:
    return int(format(bits, f"0{n}b")[::-1], 2)


def alternating_mask(n: int) -> int:
    """Bits of the 0-based odd positions, i.e. x_2, x_4, ... in 1-based terms."""
    return sum(1 << i for i in range(1, n, 2))


def symmetry_images(seq: BinarySequence) -> list[BinarySequence]:
    """All 8 images of ``seq`` (with repeats) under negation, reversal, alternation."""
    n = seq.n
    full = (1 << n) - 1
    alt = alternating_mask(n)
    out = []
    for base in (seq.bits, _reverse_bits(seq.bits, n)):
        for mask in (0, full, alt, full ^ alt):
            out.append(BinarySequence(n, base ^ mask))
    return out


@dataclass(frozen=True)
class SymmetryOrbit:
    members: frozenset[BinarySequence]
    canonical: BinarySequence

    def __len__(self) -> int:
        return len(self.members)


def canonical_form(seq: BinarySequence) -> BinarySequence:
    """Orbit member with the smallest integer encoding."""
    return min(symmetry_images(seq), key=lambda s: s.bits)


def symmetry_orbit(seq: BinarySequence) -> SymmetryOrbit:
    members = frozenset(symmetry_images(seq))
    ref = autocorrelation(seq).energy
    for other in members:
        if autocorrelation(other).energy != ref:
            raise AssertionError(f"symmetry image {other} of {seq} changes energy")
    return SymmetryOrbit(members, min(members, key=lambda s: s.bits))


def as_sequence(value: BinarySequence | str | Sequence[int]) -> BinarySequence:
    if isinstance(value, BinarySequence):
        return value
    if isinstance(value, str):
        return parse_sequence(value)
    return BinarySequence.from_elements(value)
