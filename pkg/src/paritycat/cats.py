"""Parity-adapted coherent states (multicomponent Schroedinger cats).

The cat ``|z>_c`` is the normalized projection of ``|z>`` onto the parity
sector ``c`` of Z_2^(D-1).  Its squared normalization can be computed two ways:

``signed``
    ``2^(1-D) sum_b chi_c(b) t_b^N`` with ``t_b = <z|z^b>^(1/N)``, a sum of
    signed terms evaluated with compensated summation.
``fock_sum``
    the sum of ``|c_n(z)|^2`` over Fock states of parity ``c``.  All terms are
    positive so there is no cancellation; cost grows with the basis size.

Internally both return ``log(N_c^2)`` for every sector at once so that ratios
of tiny norms (near-degenerate cats) stay accurate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import lru_cache
from typing import Sequence

import numpy as np

from .combinatorics import (
    Composition,
    ParityLabel,
    character,
    composition_array,
    log_multinomial_array,
    n_compositions,
    parity_array,
    parity_of,
    popcount,
)
from .states import CSLabel, as_label, cs_fock_amplitudes, cs_fock_coefficient

FOCK_SUM_MAX_BASIS = 2_000_000
DEGENERATE_NORM_SQ = 1e-300
NEGATIVE_CLAMP = 1e-13
ALGORITHMS = ("signed", "fock_sum", "auto")


class DegenerateCatError(ArithmeticError):
    """The cat normalization vanishes; the state exists only as a limit."""


@dataclass(frozen=True)
class CatParams:
    z: CSLabel
    c: int
    N: int

    def __post_init__(self):
        z = as_label(self.z)
        c = int(self.c)
        if isinstance(self.c, ParityLabel) and self.c.width != z.width:
            raise ValueError("parity width does not match D-1")
        if not 0 <= c < (1 << z.width):
            raise ValueError(f"parity {c} out of range for D={z.D}")
        if self.N < 1:
            raise ValueError("N must be positive")
        if popcount(c) > self.N:
            raise ValueError(f"parity {c} needs at least {popcount(c)} particles, got N={self.N}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "c", c)

    @property
    def D(self) -> int:
        return self.z.D


@dataclass(frozen=True)
class HOCatParams:
    alpha: float
    c: int

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if self.c not in (0, 1):
            raise ValueError("c must be 0 or 1")


@lru_cache(maxsize=16)
def _sector_table(D: int, K: int):
    comps = composition_array(D, K)
    return comps, log_multinomial_array(comps), parity_array(comps)


def _sign_matrix(width: int) -> np.ndarray:
    b = np.arange(1 << width)[:, None]
    return 1.0 - 2.0 * ((b >> np.arange(width)[None, :]) & 1)


def _log_norms_fock_sum(mags: np.ndarray, K: int) -> np.ndarray:
    width = mags.shape[0]
    nsec = 1 << width
    comps, lm, par = _sector_table(width + 1, K)
    sq = mags * mags
    log_den = math.log1p(math.fsum(sq))
    logp = lm - K * log_den
    for i, s in enumerate(sq, start=1):
        k = comps[:, i]
        if s == 0.0:
            logp = np.where(k > 0, -np.inf, logp)
        else:
            logp = logp + k * math.log(s)
    top = logp.max()
    sums = np.bincount(par, weights=np.exp(logp - top), minlength=nsec)
    with np.errstate(divide="ignore"):
        out = np.log(sums) + top
    for sec in np.nonzero(sums == 0.0)[0]:
        vals = logp[par == sec]
        vals = vals[np.isfinite(vals)]
        if vals.size:
            m = vals.max()
            out[sec] = m + math.log(math.fsum(np.exp(vals - m)))
    return out


SIGNED_BASE_PRECISION = 40


def _signed_sums(sq: list[Decimal], K: int, prec: int) -> list[Decimal]:
    width = len(sq)
    nsec = 1 << width
    with localcontext() as ctx:
        ctx.prec = prec
        den = 1 + sum(sq)
        powers = []
        for b in range(nsec):
            num = 1 + sum(-v if (b >> i) & 1 else v for i, v in enumerate(sq))
            powers.append((num / den) ** K)
        out = []
        for c in range(nsec):
            acc = Decimal(0)
            for b in range(nsec):
                acc += powers[b] if character(c, b) > 0 else -powers[b]
            out.append(acc / nsec)
    return out


def _norms_signed(mags: np.ndarray, K: int) -> np.ndarray:
    """Character sum ``2^-w sum_b chi_c(b) t_b^K`` in decimal arithmetic.

    Terms are O(1) while a sector norm can be tiny, so the sum is evaluated with
    enough digits to absorb the cancellation: the starting precision covers the
    smallest possible sector and is raised further while fewer than 25 digits
    survive.
    """
    width = mags.shape[0]
    nsec = 1 << width
    sq = [Decimal(float(m)) ** 2 for m in mags]
    # a sector can be as small as the product of its |z_i|^2 / (1 + |z|^2)
    den = 1 + sum(sq)
    prec = SIGNED_BASE_PRECISION + sum(max(0, -(v / den).adjusted()) for v in sq if v)
    while True:
        vals = _signed_sums(sq, K, prec)
        nonzero = [abs(v) for v in vals if v != 0]
        lost = -min(nonzero).adjusted() if nonzero else 0
        if lost + 25 <= prec or prec > 4000:
            break
        prec = lost + 40
    out = np.array([float(v) for v in vals])
    # fewer particles than odd levels: structurally empty sector
    out[[popcount(c) > K for c in range(nsec)]] = 0.0
    if np.any(out < -NEGATIVE_CLAMP):
        raise ArithmeticError(f"signed cat norm went negative: {out.min()}")
    return np.maximum(out, 0.0)


def _resolve(algorithm: str, D: int, K: int) -> str:
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if algorithm == "auto":
        return "fock_sum" if n_compositions(D, K) <= FOCK_SUM_MAX_BASIS else "signed"
    return algorithm


def log_cat_norms(magnitudes: Sequence[float], K: int, algorithm: str = "auto") -> np.ndarray:
    """``log(N_c^2)`` for every parity ``c`` of a ``K``-particle cat.

    Sectors that are empty (or whose norm is exactly zero) give ``-inf``.
    ``K = 0`` is allowed and gives ``log(delta_{c,0})``.
    """
    mags = np.asarray(magnitudes, dtype=float).reshape(-1)
    if K < 0:
        raise ValueError("particle number must be >= 0")
    algo = _resolve(algorithm, mags.shape[0] + 1, K)
    if algo == "fock_sum":
        return _log_norms_fock_sum(mags, K)
    with np.errstate(divide="ignore"):
        return np.log(_norms_signed(mags, K))


def cat_norms(magnitudes: Sequence[float], K: int, algorithm: str = "auto") -> np.ndarray:
    return np.exp(log_cat_norms(magnitudes, K, algorithm))


def cat_norm_sq(p: CatParams, algorithm: str = "auto") -> float:
    """Squared normalization ``N_c(z)^2`` of the cat; depends only on ``|z_i|``."""
    return float(cat_norms(p.z.magnitudes, p.N, algorithm)[p.c])


def cat_fock_coefficient(p: CatParams, n: Composition) -> complex:
    """Fock coefficient of ``|z>_c``: ``c_n(z) / N_c(z)`` inside the sector, else 0.

    Raises:
        DegenerateCatError: if ``N_c(z)^2 < 1e-300``; use :func:`fock_cat_at_origin`.
    """
    counts = getattr(n, "counts", tuple(n))
    log_norm = log_cat_norms(p.z.magnitudes, p.N)[p.c]
    if not log_norm > math.log(DEGENERATE_NORM_SQ):
        raise DegenerateCatError(f"cat norm underflows for c={p.c}, z={p.z.magnitudes}")
    if parity_of(counts) != p.c:
        return 0j
    log_abs, phase = cs_fock_coefficient(p.z, Composition(counts), p.N)
    if log_abs == -math.inf:
        return 0j
    return complex(math.exp(log_abs - 0.5 * log_norm) * np.exp(1j * phase))


def cat_fock_amplitudes(p: CatParams) -> np.ndarray:
    """All Fock coefficients of ``|z>_c`` in composition order."""
    log_norm = log_cat_norms(p.z.magnitudes, p.N)[p.c]
    if not log_norm > math.log(DEGENERATE_NORM_SQ):
        raise DegenerateCatError(f"cat norm underflows for c={p.c}, z={p.z.magnitudes}")
    amps = cs_fock_amplitudes(p.z, p.N)
    par = parity_array(composition_array(p.D, p.N))
    amps = np.where(par == p.c, amps, 0.0)
    return amps * math.exp(-0.5 * log_norm)


def fock_cat_at_origin(c: ParityLabel | int, N: int, D: int) -> Composition:
    """Fock state ``|N - |c|, c_1, ..., c_{D-1}>`` reached by ``|z>_c`` as ``z -> 0``."""
    bits = int(c)
    width = D - 1
    if bits >= 1 << width:
        raise ValueError(f"parity {bits} out of range for D={D}")
    k = popcount(bits)
    if N < k:
        raise ValueError(f"N={N} is smaller than the number of odd levels {k}")
    return Composition((N - k,) + tuple((bits >> i) & 1 for i in range(width)))


def fock_cat_at_axis_infinity(c: ParityLabel | int, N: int, axis: int, D: int | None = None) -> Composition:
    """Fock state reached by ``|z>_c`` as ``|z_axis| -> inf`` with other ``z_i`` fixed at 0.

    Level 0 keeps ``(N - |c|) mod 2`` particles, the odd levels of ``c`` one each,
    and the remaining particles pile onto ``axis``.
    """
    if D is None:
        if not isinstance(c, ParityLabel):
            raise ValueError("D is required when c is a plain integer")
        D = c.width + 1
    if not 1 <= axis <= D - 1:
        raise ValueError(f"axis {axis} out of range 1..{D - 1}")
    base = fock_cat_at_origin(c, N, D).counts
    k = popcount(int(c))
    n0 = (N - k) % 2
    counts = [n0] + list(base[1:])
    counts[axis] += N - k - n0
    return Composition(tuple(counts))


def _exp_parity_ratio_term(x: float, c: int) -> float:
    # e^{-x} cosh(x) or e^{-x} sinh(x)
    e = math.exp(-2.0 * x)
    return 0.5 * (1.0 + e) if c == 0 else -0.5 * math.expm1(-2.0 * x)


def ho_cat_norm_sq(p: HOCatParams | float, c: int | None = None) -> float:
    """Harmonic-oscillator cat normalization ``e^{-|a|^2} cosh|a|^2`` (even) or ``sinh`` (odd)."""
    if not isinstance(p, HOCatParams):
        p = HOCatParams(float(p), int(c))
    return _exp_parity_ratio_term(p.alpha * p.alpha, p.c)


def _zero_mask(magnitudes: Sequence[float], tol: float = 0.0) -> int:
    mask = 0
    for i, m in enumerate(magnitudes):
        if abs(m) <= tol:
            mask |= 1 << i
    return mask


def cat_norm_limit(kind: str, *, c: int, z: Sequence[float] | None = None,
                   alpha: Sequence[float] | None = None, theta: Sequence[float] | None = None,
                   N: int | None = None, D: int | None = None) -> float:
    """Closed-form limits of ``N_c^2``.

    ``origin``
        ``z = 0``: ``delta_{c,0}``.
    ``thermodynamic``
        ``N -> inf`` at fixed ``z``: ``2^-k delta_{c_0, 0}``, ``k`` the number of
        nonzero ``z_i`` and ``c_0`` the part of ``c`` on zero entries.
    ``rescaled``
        ``z = alpha / sqrt(N)``, ``N -> inf``: product of one-mode HO cat norms.
    ``directional_infinity``
        ``|z| -> inf`` along the hyperspherical direction ``theta`` at fixed ``N``.
    """
    c = int(c)
    if kind == "origin":
        return 1.0 if c == 0 else 0.0
    if kind == "thermodynamic":
        zeros = _zero_mask(z)
        k = len(z) - popcount(zeros)
        return 2.0 ** (-k) if c & zeros == 0 else 0.0
    if kind == "rescaled":
        out = 1.0
        for i, a in enumerate(alpha):
            out *= ho_cat_norm_sq(HOCatParams(float(a), (c >> i) & 1))
        return out
    if kind == "directional_infinity":
        from .limits import SphericalDirection, direction_components
        if D is None:
            D = len(theta) + 2
        y = direction_components(SphericalDirection(tuple(theta), D))
        width = D - 1
        Y = _sign_matrix(width) @ (y * y)
        terms = [character(c, b) * Y[b] ** N for b in range(1 << width)]
        return math.fsum(terms) / (1 << width)
    raise ValueError(f"unknown limit kind {kind!r}")
