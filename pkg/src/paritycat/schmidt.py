"""Closed-form Schmidt spectra of cats under an ``(N - M, M)`` particle split.

For ``1 <= M < N`` the cat ``|z>_c`` of ``N`` quDits decomposes as

    |z>_c = sum_{c'} l_{c,c'} |z>_{c xor c'}^(N-M) (x) |z>_{c'}^(M),
    l_{c,c'} = N_{c xor c'}^(N-M) N_{c'}^(M) / N_c^(N),

so the ``M``-particle reduced density matrix has eigenvalues ``l_{c,c'}^2``,
one per parity ``c'`` (many of them may vanish).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cats import DEGENERATE_NORM_SQ, DegenerateCatError, log_cat_norms
from .combinatorics import popcount
from .states import CSLabel, as_label

ZERO_THRESHOLD = 1e-12


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Eigenvalues of the ``M``-particle RDM indexed by the parity ``c'``.

    ``N`` and ``M`` are ``None`` for limit spectra (infinite particle number),
    which switches the default entropy normalization to ``2^(D-1)``.
    """

    lambdas: np.ndarray
    D: int
    N: int | None
    M: int | None
    c: int
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        lam = np.array(self.lambdas, dtype=float)
        if lam.shape != (1 << (self.D - 1),):
            raise ValueError(f"expected {1 << (self.D - 1)} eigenvalues, got {lam.shape}")
        lam.flags.writeable = False
        object.__setattr__(self, "lambdas", lam)

    def __getitem__(self, c_prime: int) -> float:
        return float(self.lambdas[int(c_prime)])

    def __len__(self):
        return len(self.lambdas)

    @property
    def entropy_dim(self) -> int:
        if self.M is None:
            return 1 << (self.D - 1)
        return symmetric_dim(self.D, self.M)

    def sorted(self) -> np.ndarray:
        return np.sort(self.lambdas)[::-1]

    def padded(self, dim: int | None = None) -> np.ndarray:
        """Sorted descending, zero-padded or trimmed to ``dim`` (default: RDM dimension).

        Trimming only ever drops exact zeros; anything else is an error.
        """
        if dim is None:
            dim = self.entropy_dim
        vals = self.sorted()
        if vals.shape[0] >= dim:
            if np.any(vals[dim:] != 0.0):
                raise ValueError("more nonzero eigenvalues than the RDM dimension")
            return vals[:dim].copy()
        return np.concatenate([vals, np.zeros(dim - vals.shape[0])])


def symmetric_dim(D: int, M: int) -> int:
    """Dimension ``binom(M + D - 1, M)`` of the symmetric ``M``-particle space."""
    return math.comb(M + D - 1, M)


def full_tensor_dim(D: int, M: int) -> int:
    return D ** M


def max_cat_count(D: int) -> int:
    """Number ``2^(D-1)`` of parity sectors, hence of distinct cats."""
    return 1 << (D - 1)


def dimension_table(cases: Sequence[tuple[int, int]]) -> list[dict]:
    """Rows of (D, M, full tensor product, symmetric irrep, number of cats)."""
    return [
        {"D": D, "M": M, "full": full_tensor_dim(D, M), "symmetric": symmetric_dim(D, M),
         "cats": max_cat_count(D)}
        for D, M in cases
    ]


def _check_split(N: int, M: int):
    if N < 2:
        raise ValueError("need N >= 2 to split")
    if not 1 <= M <= N - 1:
        raise ValueError(f"M={M} outside 1..{N - 1}")


def log_eigenvalues(z, c: int, N: int, M: int, algorithm: str = "auto") -> np.ndarray:
    z = as_label(z)
    c = int(c)
    _check_split(N, M)
    if not 0 <= c < (1 << z.width):
        raise ValueError(f"parity {c} out of range for D={z.D}")
    full = log_cat_norms(z.magnitudes, N, algorithm)
    if not full[c] > math.log(DEGENERATE_NORM_SQ):
        raise DegenerateCatError(
            f"N_c^(N)(z) underflows for c={c}, |z|={z.magnitudes}; use the limits module")
    rest = log_cat_norms(z.magnitudes, N - M, algorithm)
    kept = log_cat_norms(z.magnitudes, M, algorithm)
    cp = np.arange(1 << z.width)
    return rest[cp ^ c] + kept[cp] - full[c]


def schmidt_coefficients(z, c: int, N: int, M: int, algorithm: str = "auto") -> np.ndarray:
    """Schmidt coefficients ``l_{c,c'}`` for all ``c'`` (group difference is XOR).

    ``M`` may be any value in ``1..N-1``; the customary range is ``M <= N // 2``.

    Raises:
        DegenerateCatError: when ``N_c^(N)(z)`` underflows (e.g. ``z = 0`` with ``c != 0``).
    """
    return np.exp(0.5 * log_eigenvalues(z, c, N, M, algorithm))


def schmidt_eigenvalues(z, c: int, N: int, M: int, algorithm: str = "auto") -> SchmidtSpectrum:
    z = as_label(z)
    lam = np.exp(log_eigenvalues(z, c, N, M, algorithm))
    return SchmidtSpectrum(lam, z.D, N, M, int(c))


def _zero_pattern(magnitudes: Sequence[float]) -> int:
    mask = 0
    for i, m in enumerate(magnitudes):
        if abs(m) <= ZERO_THRESHOLD:
            mask |= 1 << i
    return mask


def rank_formula(z, c: int, M: int, D: int | None = None) -> int:
    """``min(2^(||z||_0 + ||c_0||_0), binom(M + D - 1, M))``.

    ``||z||_0`` counts ``|z_i| > 1e-12`` and ``c_0`` is ``c`` restricted to the
    zero entries of ``z``.  This is an upper bound on the RDM rank: sectors
    ``c'`` with more odd levels than particles are empty, which the minimum
    does not account for (e.g. D=4, M=2 has 7 nonzero sectors, not 8).
    """
    z = as_label(z)
    D = z.D if D is None else D
    zeros = _zero_pattern(z.magnitudes)
    k = z.width - popcount(zeros)
    return min(1 << (k + popcount(int(c) & zeros)), symmetric_dim(D, M))


def schmidt_rank(z, c: int, D: int | None = None) -> int:
    """Maximum RDM rank over all splits: ``2^(||z||_0 + ||c_0||_0)``."""
    z = as_label(z)
    zeros = _zero_pattern(z.magnitudes)
    k = z.width - popcount(zeros)
    return 1 << (k + popcount(int(c) & zeros))


def sector_rank(z, c: int, N: int, M: int) -> int:
    """Number of parities ``c'`` whose closed-form eigenvalue is nonzero.

    A sector survives when both halves can host their odd levels
    (``|c'| <= M`` and ``|c xor c'| <= N - M`` on the nonzero entries of ``z``)
    and, on the zero entries, ``c'`` only picks up levels that are odd in ``c``.
    """
    z = as_label(z)
    c = int(c)
    zeros = _zero_pattern(z.magnitudes)
    marked = c & zeros
    rest = N - popcount(marked)
    count = 0
    for cp in range(1 << z.width):
        if cp & zeros & ~marked:
            continue
        kept = M - popcount(cp & zeros)
        if not 0 <= kept <= rest:
            continue
        if popcount(cp & ~zeros) <= kept and popcount((c ^ cp) & ~zeros) <= rest - kept:
            count += 1
    return count


def numerical_rank(s: SchmidtSpectrum | Sequence[float], tol: float = 1e-10) -> int:
    if tol <= 0:
        raise ValueError("tol must be positive")
    lam = np.asarray(getattr(s, "lambdas", s), dtype=float)
    top = lam.max()
    if top <= 0:
        return 0
    return int(np.count_nonzero(lam > tol * top))


def _entropy_args(s, d):
    lam = np.asarray(getattr(s, "lambdas", s), dtype=float)
    if d is None:
        d = s.entropy_dim if isinstance(s, SchmidtSpectrum) else lam.shape[0]
    if d < 2:
        raise ValueError(f"entropy normalization dimension must be >= 2, got {d}")
    return lam, d


def linear_entropy(s: SchmidtSpectrum | Sequence[float], d: int | None = None) -> float:
    """Normalized linear entropy ``d/(d-1) (1 - sum lambda^2)``."""
    lam, d = _entropy_args(s, d)
    val = d / (d - 1) * (1.0 - math.fsum(lam * lam))
    return min(max(val, 0.0), 1.0) + 0.0  # no negative zero


def von_neumann_entropy(s: SchmidtSpectrum | Sequence[float], d: int | None = None) -> float:
    """Normalized von Neumann entropy ``-sum lambda log_d lambda`` (``0 log 0 = 0``)."""
    lam, d = _entropy_args(s, d)
    lam = lam[lam > 0]
    val = -math.fsum(lam * np.log(lam)) / math.log(d)
    return min(max(val, 0.0), 1.0) + 0.0  # no negative zero


def fidelity(z, c: int, N: int, M: int) -> float:
    """Overlap of the damaged state with the original parity: ``lambda_{c,0}``."""
    return schmidt_eigenvalues(z, c, N, M)[0]
