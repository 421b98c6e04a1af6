"""U(D)-spin coherent states in the chart ``z_0 = 1``.

A coherent state of ``N`` quDits is the identical tensor product of the
one-quDit state ``w = (1, z_1, ..., z_{D-1}) / sqrt(1 + |z|^2)``.  Hot paths work
with (log-magnitude, phase) pairs because ``(1 + |z|^2)^(N/2)`` overflows a
double for moderate ``N``.
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .combinatorics import (
    Composition,
    ParityLabel,
    composition_array,
    log_multinomial,
    log_multinomial_array,
)


class ChartError(ValueError):
    """The one-quDit state has ``w_0 = 0`` and lies outside the ``z_0 = 1`` chart."""


@dataclass(frozen=True)
class CSLabel:
    """Label ``z`` of a coherent state, stored as magnitudes and phases."""

    magnitudes: tuple[float, ...]
    phases: tuple[float, ...] = ()

    def __post_init__(self):
        mags = tuple(float(m) for m in self.magnitudes)
        phases = tuple(float(p) for p in self.phases) or (0.0,) * len(mags)
        if len(phases) != len(mags):
            raise ValueError("magnitudes and phases differ in length")
        if any(not math.isfinite(m) or m < 0 for m in mags):
            raise ValueError(f"magnitudes must be finite and >= 0: {mags}")
        phases = tuple(p % (2 * math.pi) for p in phases)
        object.__setattr__(self, "magnitudes", mags)
        object.__setattr__(self, "phases", phases)

    @classmethod
    def from_complex(cls, z: Sequence[complex]) -> "CSLabel":
        z = [complex(v) for v in z]
        return cls(tuple(abs(v) for v in z), tuple(cmath.phase(v) for v in z))

    @property
    def D(self) -> int:
        return len(self.magnitudes) + 1

    @property
    def width(self) -> int:
        return len(self.magnitudes)

    def to_complex(self) -> np.ndarray:
        return np.array([cmath.rect(m, p) for m, p in zip(self.magnitudes, self.phases)],
                        dtype=complex)

    def norm_sq(self) -> float:
        return math.fsum(m * m for m in self.magnitudes)


@dataclass(frozen=True)
class BlochVector:
    """Normalized one-quDit amplitudes ``(w_0, ..., w_{D-1})``."""

    amplitudes: tuple[complex, ...]

    def __post_init__(self):
        amps = tuple(complex(a) for a in self.amplitudes)
        norm = math.fsum(abs(a) ** 2 for a in amps)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"Bloch vector is not normalized (|w|^2 = {norm})")
        object.__setattr__(self, "amplitudes", amps)


def as_label(z) -> CSLabel:
    """Accept a :class:`CSLabel` or a sequence of complex numbers."""
    if isinstance(z, CSLabel):
        return z
    return CSLabel.from_complex(np.atleast_1d(np.asarray(z, dtype=complex)))


def cs_fock_coefficient(z: CSLabel, n: Composition, N: int) -> tuple[float, float]:
    """Fock coefficient ``sqrt(N!/n!) prod z_i^n_i / (1+|z|^2)^(N/2)``.

    Returns:
        ``(log_abs, phase)``; an exactly vanishing coefficient has ``log_abs = -inf``.
    """
    z = as_label(z)
    counts = getattr(n, "counts", tuple(n))
    if sum(counts) != N:
        raise ValueError(f"composition total {sum(counts)} != N={N}")
    if len(counts) != z.D:
        raise ValueError(f"composition has {len(counts)} levels, label has D={z.D}")
    log_abs = 0.5 * log_multinomial(counts) - 0.5 * N * math.log1p(z.norm_sq())
    phase = 0.0
    for k, m, p in zip(counts[1:], z.magnitudes, z.phases):
        if k == 0:
            continue
        if m == 0.0:
            return -math.inf, 0.0
        log_abs += k * math.log(m)
        phase += k * p
    return log_abs, phase % (2 * math.pi)


def cs_fock_amplitudes(z: CSLabel, N: int) -> np.ndarray:
    """All Fock coefficients of ``|z>`` in :func:`composition_array` order."""
    z = as_label(z)
    comps = composition_array(z.D, N)
    log_abs = 0.5 * log_multinomial_array(comps) - 0.5 * N * math.log1p(z.norm_sq())
    phase = np.zeros(comps.shape[0])
    for i, (m, p) in enumerate(zip(z.magnitudes, z.phases), start=1):
        k = comps[:, i]
        if m == 0.0:
            log_abs = np.where(k > 0, -np.inf, log_abs)
        else:
            log_abs = log_abs + k * math.log(m)
        phase = phase + k * p
    return np.exp(log_abs) * np.exp(1j * phase)


def cs_overlap(z: CSLabel, zp: CSLabel, N: int) -> complex:
    """``<z|z'> = (1 + z^H z')^N / ((1+|z|^2)^(N/2) (1+|z'|^2)^(N/2))``."""
    z, zp = as_label(z), as_label(zp)
    if z.D != zp.D:
        raise ValueError("labels have different D")
    dot = complex(np.vdot(z.to_complex(), zp.to_complex()))
    inner = 1.0 + dot
    # 1 + z^H z' = 0 up to rounding in the phases
    if abs(inner) <= 8 * sys.float_info.epsilon * (1.0 + abs(dot)):
        return 0j
    log_abs = N * (math.log(abs(inner)) - 0.5 * math.log1p(z.norm_sq())
                   - 0.5 * math.log1p(zp.norm_sq()))
    return cmath.rect(math.exp(log_abs), N * cmath.phase(inner))


def parity_flip(z: CSLabel, b: ParityLabel | int) -> CSLabel:
    """Flip the sign of ``z_i`` wherever ``b_i = 1``."""
    z = as_label(z)
    if isinstance(b, ParityLabel) and b.width != z.width:
        raise ValueError(f"parity width {b.width} != D-1 = {z.width}")
    bits = int(b)
    if bits >= 1 << z.width:
        raise ValueError(f"parity {bits} out of range for D={z.D}")
    phases = tuple(p + math.pi if (bits >> i) & 1 else p for i, p in enumerate(z.phases))
    return CSLabel(z.magnitudes, phases)


def bloch_from_cs(z: CSLabel) -> BlochVector:
    z = as_label(z)
    w0 = 1.0 / math.sqrt(1.0 + z.norm_sq())
    return BlochVector((complex(w0),) + tuple(complex(v) * w0 for v in z.to_complex()))


def cs_from_bloch(w: BlochVector) -> CSLabel:
    """Inverse of :func:`bloch_from_cs`, up to the global phase of ``w``.

    Raises:
        ChartError: if ``w_0 == 0``.
    """
    amps = w.amplitudes if isinstance(w, BlochVector) else tuple(complex(a) for a in w)
    if abs(amps[0]) == 0.0:
        raise ChartError("w_0 = 0: state is outside the z_0 = 1 chart")
    return CSLabel.from_complex([a / amps[0] for a in amps[1:]])
