"""Combinatorial primitives for symmetric multi-level systems.

Fock occupations are represented as :class:`Composition` objects (or, in hot
paths, as rows of an integer array).  Parity labels are elements of
Z_2^(D-1) stored as integer bitmasks: level ``i`` (1-based, ``i >= 1``) maps
to bit ``i - 1``, so the least-significant bit belongs to level 1.  Spectra
everywhere in the package are indexed by this integer.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.special import gammaln


@dataclass(frozen=True)
class Composition:
    """Occupation numbers ``(n_0, ..., n_{D-1})`` of a Fock basis state."""

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(k) for k in self.counts)
        if len(counts) < 1:
            raise ValueError("a composition needs at least one level")
        if any(k < 0 for k in counts):
            raise ValueError(f"negative occupation in {counts}")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "_total", sum(counts))

    @property
    def total(self) -> int:
        return self._total

    @property
    def D(self) -> int:
        return len(self.counts)

    def parity(self) -> int:
        """Bitmask of the odd occupations of levels ``1..D-1``."""
        return parity_of(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def __len__(self):
        return len(self.counts)

    def __getitem__(self, i):
        return self.counts[i]


@dataclass(frozen=True)
class ParityLabel:
    """An element of Z_2^width stored as a bitmask (level 1 is bit 0)."""

    bits: int
    width: int

    def __post_init__(self):
        if self.width < 0:
            raise ValueError("width must be non-negative")
        if not 0 <= self.bits < (1 << self.width):
            raise ValueError(f"bits {self.bits} out of range for width {self.width}")

    @classmethod
    def from_sequence(cls, components: Sequence[int]) -> "ParityLabel":
        """Build from ``[b_1, ..., b_{D-1}]``."""
        bits = 0
        for i, b in enumerate(components):
            if b not in (0, 1):
                raise ValueError(f"parity components must be 0 or 1, got {b}")
            bits |= int(b) << i
        return cls(bits, len(components))

    @classmethod
    def from_string(cls, text: str) -> "ParityLabel":
        """Parse a bitstring such as ``"101"``; the first character is level 1."""
        text = text.strip().strip("[]").replace(",", "").replace(" ", "")
        if text and set(text) - {"0", "1"}:
            raise ValueError(f"not a parity bitstring: {text!r}")
        return cls.from_sequence([int(ch) for ch in text])

    def components(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.width)]

    def to_string(self) -> str:
        return "".join(str(b) for b in self.components())

    def popcount(self) -> int:
        return bin(self.bits).count("1")

    def __xor__(self, other: "ParityLabel") -> "ParityLabel":
        _check_width(self, other)
        return ParityLabel(self.bits ^ other.bits, self.width)

    def __int__(self):
        return self.bits

    def __index__(self):
        return self.bits


def _check_width(a: ParityLabel, b: ParityLabel):
    if a.width != b.width:
        raise ValueError(f"parity width mismatch: {a.width} != {b.width}")


def parity_of(counts: Iterable[int]) -> int:
    bits = 0
    for i, k in enumerate(list(counts)[1:]):
        bits |= (int(k) & 1) << i
    return bits


def popcount(bits: int) -> int:
    return bin(int(bits)).count("1")


def n_compositions(D: int, N: int) -> int:
    """Dimension ``binom(N + D - 1, D - 1)`` of the N-particle symmetric space."""
    if D < 1:
        raise ValueError("D must be >= 1")
    if N < 0:
        return 0
    return math.comb(N + D - 1, D - 1)


def _compositions_rec(D: int, N: int) -> np.ndarray:
    if D == 1:
        return np.array([[N]], dtype=np.int64)
    if D == 2:
        first = np.arange(N, -1, -1, dtype=np.int64)
        return np.column_stack([first, N - first])
    out = np.empty((n_compositions(D, N), D), dtype=np.int64)
    row = 0
    for first in range(N, -1, -1):
        rest = _compositions_rec(D - 1, N - first)
        out[row:row + rest.shape[0], 0] = first
        out[row:row + rest.shape[0], 1:] = rest
        row += rest.shape[0]
    return out


@lru_cache(maxsize=16)
def _compositions_cached(D: int, N: int) -> np.ndarray:
    out = _compositions_rec(D, N)
    out.flags.writeable = False
    return out


def composition_array(D: int, N: int) -> np.ndarray:
    """All compositions as a read-only ``(count, D)`` integer array.

    Rows are in lexicographically decreasing order, the same order as
    :func:`enumerate_compositions`.
    """
    if D < 1:
        raise ValueError("D must be >= 1")
    if N < 0:
        raise ValueError("N must be >= 0")
    if n_compositions(D, N) > sys.maxsize:
        raise OverflowError(f"binom({N + D - 1}, {D - 1}) exceeds the index range")
    return _compositions_cached(D, N)


def enumerate_compositions(D: int, N: int) -> list[Composition]:
    """Compositions of ``N`` into ``D`` parts, lexicographically decreasing.

    >>> [c.counts for c in enumerate_compositions(2, 3)]
    [(3, 0), (2, 1), (1, 2), (0, 3)]
    """
    return [Composition(tuple(int(k) for k in row)) for row in composition_array(D, N)]


def log_multinomial(n: Composition | Sequence[int]) -> float:
    """``ln(total! / prod(n_i!))`` via log-gamma."""
    counts = np.asarray(getattr(n, "counts", n), dtype=float)
    total = counts.sum()
    return float(gammaln(total + 1.0) - gammaln(counts + 1.0).sum())


def log_multinomial_array(comps: np.ndarray) -> np.ndarray:
    comps = np.asarray(comps)
    total = comps.sum(axis=1)
    return gammaln(total + 1.0) - gammaln(comps + 1.0).sum(axis=1)


def parity_array(comps: np.ndarray) -> np.ndarray:
    """Parity bitmask of each row of a composition array."""
    comps = np.asarray(comps)
    if comps.shape[1] <= 1:
        return np.zeros(comps.shape[0], dtype=np.int64)
    weights = 1 << np.arange(comps.shape[1] - 1, dtype=np.int64)
    return (comps[:, 1:] & 1) @ weights


def character(c: ParityLabel | int, b: ParityLabel | int) -> int:
    """Group character ``(-1)^(c . b)`` of Z_2^(D-1)."""
    if isinstance(c, ParityLabel) and isinstance(b, ParityLabel):
        _check_width(c, b)
    return -1 if popcount(int(c) & int(b)) & 1 else 1


def character_matrix(width: int) -> np.ndarray:
    """Dense ``(2^width, 2^width)`` matrix of characters; for small widths only."""
    idx = np.arange(1 << width)
    anded = idx[:, None] & idx[None, :]
    bits = np.zeros_like(anded)
    for i in range(width):
        bits ^= (anded >> i) & 1
    return 1 - 2 * bits


def _butterfly(v: np.ndarray, width: int) -> np.ndarray:
    out = np.array(v, dtype=float, copy=True)
    if out.shape[0] != 1 << width:
        raise ValueError(f"length {out.shape[0]} != 2^{width}")
    h = 1
    while h < out.shape[0]:
        view = out.reshape(-1, 2, h)
        a = view[:, 0, :].copy()
        b = view[:, 1, :]
        view[:, 0, :] = a + b
        view[:, 1, :] = a - b
        h *= 2
    return out


def walsh_hadamard(v: Sequence[float] | np.ndarray, width: int) -> np.ndarray:
    """Normalized transform ``out[c] = 2^-width * sum_b (-1)^(c.b) v[b]``.

    Computed with the fast butterfly; :func:`inverse_walsh_hadamard` undoes it.
    """
    return _butterfly(np.asarray(v, dtype=float), width) / float(1 << width)


def inverse_walsh_hadamard(v: Sequence[float] | np.ndarray, width: int) -> np.ndarray:
    """Unnormalized transform ``out[b] = sum_c (-1)^(c.b) v[c]``."""
    return _butterfly(np.asarray(v, dtype=float), width)
