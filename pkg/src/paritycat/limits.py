"""Asymptotic Schmidt spectra in closed form.

Each ``lambda_*`` function returns one eigenvalue ``lambda_{c,c'}``; the matching
``*_spectrum`` function returns the whole vector indexed by ``c'``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cats import DegenerateCatError, _sign_matrix, log_cat_norms
from .combinatorics import character, popcount
from .schmidt import (
    ZERO_THRESHOLD,
    SchmidtSpectrum,
    _zero_pattern,
    schmidt_eigenvalues,
)
from .states import CSLabel, as_label

INDETERMINATE_TOL = 1e-13
ORIGIN_PROXY = 1e-6


class IndeterminateLimitError(ArithmeticError):
    """The directional limit is 0/0 for this direction and parity."""


@dataclass(frozen=True)
class SphericalDirection:
    """Angles ``theta in [0, pi/2]^(D-2)`` of the first hyper-octant."""

    theta: tuple[float, ...]
    D: int

    def __post_init__(self):
        theta = tuple(float(t) for t in self.theta)
        if self.D < 2:
            raise ValueError("D must be >= 2")
        if len(theta) != self.D - 2:
            raise ValueError(f"D={self.D} needs {self.D - 2} angles, got {len(theta)}")
        if any(not -1e-12 <= t <= math.pi / 2 + 1e-12 for t in theta):
            raise ValueError(f"angles must lie in [0, pi/2]: {theta}")
        object.__setattr__(self, "theta", theta)


@dataclass(frozen=True)
class LossChannel:
    """Transmissivity ``eta`` and rescaled amplitudes ``alpha`` (``z = alpha / sqrt(N)``)."""

    eta: float
    alpha: tuple[float, ...]

    def __post_init__(self):
        if not 0.5 <= self.eta < 1.0:
            raise ValueError(f"eta must lie in [1/2, 1), got {self.eta}")
        alpha = tuple(float(a) for a in self.alpha)
        if any(a < 0 or not math.isfinite(a) for a in alpha):
            raise ValueError("alpha components must be finite and >= 0")
        object.__setattr__(self, "alpha", alpha)


def direction_components(direction: SphericalDirection) -> np.ndarray:
    """Unit vector ``y`` with ``y_1 = cos t_1``, ``y_2 = sin t_1 cos t_2``, ..., last = prod sin."""
    y = np.empty(direction.D - 1)
    running = 1.0
    for i, t in enumerate(direction.theta):
        y[i] = running * math.cos(t)
        running *= math.sin(t)
    y[-1] = running
    return y


def _spectrum(lam, D, N, M, c, **meta) -> SchmidtSpectrum:
    return SchmidtSpectrum(np.asarray(lam, dtype=float), D, N, M, int(c), meta)


# -- thermodynamic limits ----------------------------------------------------

def thermodynamic_spectrum(z, M: int, c: int = 0) -> SchmidtSpectrum:
    """``N -> inf`` at fixed ``z`` and ``M``: ``lambda_{c'} = (N_{c'}^(M)(z))^2`` for every ``c``."""
    z = as_label(z)
    lam = np.exp(log_cat_norms(z.magnitudes, M))
    return _spectrum(lam, z.D, None, M, c, kind="tl")


def lambda_thermodynamic(z, M: int, c_prime: int) -> float:
    return thermodynamic_spectrum(z, M)[c_prime]


def double_tl_spectrum(z, c: int) -> SchmidtSpectrum:
    """``M -> inf`` after ``N -> inf``: ``2^-k delta_{c_0, c'_0}`` with ``k = ||z||_0``."""
    z = as_label(z)
    zeros = _zero_pattern(z.magnitudes)
    k = z.width - popcount(zeros)
    cp = np.arange(1 << z.width)
    lam = np.where((cp & zeros) == (int(c) & zeros), 2.0 ** (-k), 0.0)
    return _spectrum(lam, z.D, None, None, c, kind="dtl")


def lambda_double_tl(z, c: int, c_prime: int) -> float:
    return double_tl_spectrum(z, c)[c_prime]


def _exp_ratio(x: float, a: float, c: int) -> float:
    """``exp_c(a x) / exp_c(x)`` for ``x >= 0``, ``-1 < a <= 0``; ``exp_0 = cosh``, ``exp_1 = sinh``."""
    if x == 0.0:
        return 1.0 if c == 0 else a
    b = abs(a)
    scale = math.exp((b - 1.0) * x)
    if c == 0:
        return scale * (1.0 + math.exp(-2.0 * b * x)) / (1.0 + math.exp(-2.0 * x))
    return -scale * math.expm1(-2.0 * b * x) / -math.expm1(-2.0 * x) * (-1.0 if a < 0 else 1.0)


def lambda_ho(alpha: float, c: int, c_prime: int, eta: float) -> float:
    """One-mode cat through a beam splitter of transmissivity ``eta``.

    ``1/2 + (-1)^(c - c') exp_c((1 - 2 eta) a^2) / (2 exp_c(a^2))``.  At ``alpha = 0``
    with ``c = 1`` the continuous limit is used (``lambda_{1,0} = eta``).
    """
    if not 0.5 <= eta < 1.0:
        raise ValueError(f"eta must lie in [1/2, 1), got {eta}")
    if c not in (0, 1) or c_prime not in (0, 1):
        raise ValueError("c and c' must be bits")
    r = _exp_ratio(float(alpha) ** 2, 1.0 - 2.0 * eta, c)
    sign = -1.0 if (c ^ c_prime) else 1.0
    return 0.5 + sign * 0.5 * r


def rescaled_tl_spectrum(channel: LossChannel, c: int) -> SchmidtSpectrum:
    width = len(channel.alpha)
    lam = np.ones(1 << width)
    for cp in range(1 << width):
        for i, a in enumerate(channel.alpha):
            lam[cp] *= lambda_ho(a, (int(c) >> i) & 1, (cp >> i) & 1, channel.eta)
    return _spectrum(lam, width + 1, None, None, c, kind="rstl", eta=channel.eta)


def lambda_rescaled_tl(channel: LossChannel, c: int, c_prime: int) -> float:
    """``prod_i lambda_ho(alpha_i, c_i, c'_i, eta)``."""
    return rescaled_tl_spectrum(channel, c)[c_prime]


# -- limits in z --------------------------------------------------------------

def _check_MN(N: int, M: int):
    if not 1 <= M <= N // 2:
        raise ValueError(f"need 1 <= M <= N//2, got N={N}, M={M}")


def origin_spectrum(D: int, N: int, M: int, c: int) -> SchmidtSpectrum:
    """``z -> 0`` limit.  Closed forms for D = 2, 3; larger D is evaluated at ``|z_i| = 1e-6``."""
    _check_MN(N, M)
    c = int(c)
    if D == 2:
        lam = [(N - M) / N if c else 1.0, M / N if c else 0.0]
    elif D == 3:
        q = N * (N - 1)
        table = {
            0: [1.0, 0.0, 0.0, 0.0],
            1: [(N - M) / N, M / N, 0.0, 0.0],
            2: [(N - M) / N, 0.0, M / N, 0.0],
            3: [(N - M) * (N - M - 1) / q, M * (N - M) / q, M * (N - M) / q, M * (M - 1) / q],
        }
        lam = table[c]
    else:
        warnings.warn(f"no closed-form origin limit for D={D}; evaluating at |z_i|={ORIGIN_PROXY}",
                      stacklevel=2)
        lam = schmidt_eigenvalues(CSLabel((ORIGIN_PROXY,) * (D - 1)), c, N, M).lambdas
    return _spectrum(lam, D, N, M, c, kind="origin")


def lambda_origin(D: int, N: int, M: int, c: int, c_prime: int) -> float:
    return origin_spectrum(D, N, M, c)[c_prime]


def _unit_d3_exact(N: int, M: int, c: int, cp: int) -> float:
    c1, c2 = c & 1, (c >> 1) & 1
    d1, d2 = cp & 1, (cp >> 1) & 1

    def s(e):
        return -1 if e % 2 else 1

    rest = s(c1 - d1) + s(c2 - d2), s(c1 + c2 - d1 - d2 + N - M)
    kept = s(d1) + s(d2), s(d1 + d2 + M)
    full = s(c1) + s(c2), s(c1 + c2 + N)
    if N <= 39:
        num = (3 ** (N - M) + rest[0] + rest[1]) * (3 ** M + kept[0] + kept[1])
        return float(Fraction(num, 4 * (3 ** N + full[0] + full[1])))
    a = 1.0 + (rest[0] + rest[1]) * 3.0 ** (-(N - M))
    b = 1.0 + (kept[0] + kept[1]) * 3.0 ** (-M)
    f = 1.0 + (full[0] + full[1]) * 3.0 ** (-N)
    return a * b / (4.0 * f)


def unit_spectrum(D: int, N: int, M: int, c: int) -> SchmidtSpectrum:
    """``|z_i| -> 1`` limit for D = 2 (all 1/2) and D = 3 (ratio of powers of 3)."""
    _check_MN(N, M)
    if D == 2:
        lam = [0.5, 0.5]
    elif D == 3:
        lam = [_unit_d3_exact(N, M, int(c), cp) for cp in range(4)]
    else:
        raise ValueError(f"no closed-form |z_i| = 1 limit for D={D}")
    return _spectrum(lam, D, N, M, c, kind="unit")


def lambda_unit(D: int, N: int, M: int, c: int, c_prime: int) -> float:
    return unit_spectrum(D, N, M, c)[c_prime]


def lambda_infinity_d2(N: int, M: int, c: int, c_prime: int) -> float:
    """``|z| -> inf`` for D = 2: ``(1/2)[1 + (N-M)/N (-1)^(c'+M) + M/N (-1)^(c-c'+N-M)]``."""
    _check_MN(N, M)
    s1 = -1 if (c_prime + M) % 2 else 1
    s2 = -1 if (c - c_prime + N - M) % 2 else 1
    return (N + (N - M) * s1 + M * s2) / (2 * N)


def directional_spectrum(direction: SphericalDirection, c: int, N: int, M: int) -> SchmidtSpectrum:
    """``|z| -> inf`` along ``direction``: ratio of character sums of ``Y_b^K``.

    Raises:
        IndeterminateLimitError: if the ``N``-particle character sum is below 1e-13.
    """
    _check_MN(N, M)
    c = int(c)
    D = direction.D
    if D == 2:
        lam = [lambda_infinity_d2(N, M, c, cp) for cp in range(2)]
        return _spectrum(lam, D, N, M, c, kind="infinity")
    width = D - 1
    y = direction_components(direction)
    Y = _sign_matrix(width) @ (y * y)

    def char_sum(K, label):
        return math.fsum(character(label, b) * Y[b] ** K for b in range(1 << width))

    den = char_sum(N, c)
    if abs(den) < INDETERMINATE_TOL:
        raise IndeterminateLimitError(
            f"directional limit is indeterminate at theta={direction.theta}, c={c}")
    lam = [char_sum(N - M, c ^ cp) * char_sum(M, cp) / (den * (1 << width))
           for cp in range(1 << width)]
    return _spectrum(lam, D, N, M, c, kind="infinity")


def lambda_infinity_directional(direction: SphericalDirection, c: int, c_prime: int,
                                N: int, M: int) -> float:
    return directional_spectrum(direction, c, N, M)[c_prime]


# -- degenerate cats ------------------------------------------------------------

def zero_pattern_spectrum(z, c: int, N: int, M: int) -> SchmidtSpectrum:
    """Exact spectrum in the limit where the (near-)zero components of ``z`` go to 0.

    Levels with ``z_i -> 0`` and ``c_i = 1`` hold exactly one particle; the other
    ``N - k`` particles form a cat over the nonzero levels.  A marked subset of
    size ``j`` lands in the ``M`` part with probability
    ``binom(N-k, M-j) / binom(N, M)``, and the rest splits as a smaller cat.
    """
    z = as_label(z)
    c = int(c)
    zeros = _zero_pattern(z.magnitudes)
    marked = c & zeros
    k = popcount(marked)
    if N - k < 0:
        raise DegenerateCatError(f"N={N} cannot host {k} odd empty levels")
    nz = [i for i in range(z.width) if not (zeros >> i) & 1]
    mags = [z.magnitudes[i] for i in nz]

    def compress(bits):
        return sum(((bits >> i) & 1) << j for j, i in enumerate(nz))

    c_red = compress(c)
    Nr = N - k
    cache: dict[int, np.ndarray] = {}

    def norms(K):
        if K not in cache:
            cache[K] = log_cat_norms(mags, K)
        return cache[K]

    if norms(Nr)[c_red] == -math.inf:
        raise DegenerateCatError("reduced cat is empty")
    total = math.comb(N, M)
    lam = np.zeros(1 << z.width)
    for cp in range(1 << z.width):
        if cp & zeros & ~marked:
            continue
        Mr = M - popcount(cp & zeros)
        if not 0 <= Mr <= Nr:
            continue
        cp_red = compress(cp)
        log_red = norms(Nr - Mr)[c_red ^ cp_red] + norms(Mr)[cp_red] - norms(Nr)[c_red]
        lam[cp] = math.comb(Nr, Mr) / total * math.exp(log_red)
    return _spectrum(lam, z.D, N, M, c, kind="zero_pattern")


def spectrum_at(z, c: int, N: int, M: int) -> SchmidtSpectrum:
    """Finite-``N`` spectrum, falling back to the zero-pattern limit for degenerate cats."""
    try:
        return schmidt_eigenvalues(z, c, N, M)
    except DegenerateCatError:
        z = as_label(z)
        if not any(m <= ZERO_THRESHOLD for m in z.magnitudes):
            raise
        return zero_pattern_spectrum(z, c, N, M)
